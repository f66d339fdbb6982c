//! Runs the code samples of the mdbook guide as doc-tests, keeping the book
//! and the crate in sync. Only compiled when collecting doc-tests.

macro_rules! chapter {
    ($name:ident, $path:literal) => {
        #[doc = include_str!($path)]
        pub mod $name {}
    };
}

chapter!(introduction, "../../../book/src/introduction.md");
chapter!(room_model, "../../../book/src/room-model.md");
chapter!(chirp_ranging, "../../../book/src/chirp-ranging.md");
chapter!(positioning, "../../../book/src/positioning.md");
chapter!(bounds_and_dop, "../../../book/src/bounds-and-dop.md");
chapter!(swarm_optimization, "../../../book/src/swarm-optimization.md");
chapter!(campaigns, "../../../book/src/campaigns.md");
