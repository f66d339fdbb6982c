//! Anchor layout optimization for ultrasonic time-of-flight indoor
//! positioning.
//!
//! The crate simulates a chirp-based ranging chain inside a box room,
//! estimates mobile positions by least-squares multilateration, scores
//! anchor layouts by the variance of the Euclidean position error over an
//! evaluation grid, and searches for good layouts with a particle swarm
//! constrained to the installable room planes. Fisher-information error
//! bounds (CRLB/PEB) and dilution-of-precision fields provide the analytic
//! reference the simulations are compared against.
//!
//! ```
//! use nalgebra::Point3;
//! use ultraloc::room::{build_grid, AnchorLayout, Room};
//! use ultraloc::positioning::solve_ls;
//!
//! let room = Room::testbed(); // 8 m x 4 m x 2.4 m, walls + ceiling
//! let layout = AnchorLayout::corner_reference(&room)?;
//! let truth = Point3::new(3.0, 2.0, 1.0);
//! let ranges: Vec<f64> = layout.anchors().iter().map(|a| (truth - a).norm()).collect();
//! let estimate = solve_ls(layout.anchors(), &ranges)?;
//! assert!((estimate.position - truth).norm() < 1e-9);
//!
//! let grid = build_grid(&room, [9, 6, 5])?;
//! assert_eq!(grid.len(), 270);
//! # Ok::<(), ultraloc::Error>(())
//! ```
//!
//! The `book/` directory of the repository walks through every subsystem;
//! its code samples compile against this crate as doc-tests.

pub mod acoustics;
pub mod bounds;
pub mod campaign;
pub mod error;
pub mod positioning;
pub mod pso;
pub mod rng;
pub mod room;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book;
