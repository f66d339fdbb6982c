//! Campaign configuration, execution and persistence.
//!
//! A campaign is described by one TOML config (see [`CampaignConfig`]) and
//! runs in one of four modes: `evaluate` a fixed layout, `optimize` a layout
//! with the particle swarm, `sweep` over anchor counts, or compare empirical
//! errors against the `bounds`. Results land in a run directory addressed by
//! the config hash, holding the config snapshot, a JSON summary and CSV
//! tables; identical configs reproduce identical bytes.

mod config;
mod export;
mod runner;

pub use config::{
    CampaignConfig, CampaignMode, CampaignToml, GridToml, LayoutToml, Preset, PropagationToml,
    PsoToml, RoomToml, SignalToml, SolverKind,
};
pub use export::{export_tables, load_artifact, run_dir, write_artifact, write_sweep};
pub use runner::{
    evaluate_layout, layout_cost, run, run_bounds, run_evaluate, run_optimize, run_sweep,
    sweep_sub_seed, BoundsComparison, Evaluation, IterationSummary, LayoutRecord,
    PositionRecord, RunArtifact,
};
