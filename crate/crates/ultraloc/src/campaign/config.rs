//! Campaign configuration: one TOML file describing the room, the signal
//! chain, the propagation model, the swarm and the campaign itself. Key
//! names carry their units. Every field has a default except the master
//! seed, which must be stated explicitly so no run ever depends on wall
//! clock time.

use nalgebra::{Point3, Vector3};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::acoustics::{PropagationMode, PropagationModel, SignalConfig};
use crate::error::{Error, Result};
use crate::pso::PsoHyperParams;
use crate::room::{build_grid, AnchorLayout, MobileGrid, Plane, Room};

/// What a run does.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CampaignMode {
    /// Evaluate one explicit layout.
    Evaluate,
    /// Swarm-optimize a layout, then evaluate it.
    Optimize,
    /// Optimize and evaluate for each anchor count in `anchor_counts`.
    Sweep,
    /// Compare empirical RMSE against the PEB for one layout.
    Bounds,
}

impl CampaignMode {
    pub fn label(self) -> &'static str {
        match self {
            CampaignMode::Evaluate => "evaluate",
            CampaignMode::Optimize => "optimize",
            CampaignMode::Sweep => "sweep",
            CampaignMode::Bounds => "bounds",
        }
    }
}

/// Scale presets: `desk` keeps a full sweep in minutes, `paper` matches the
/// reference experiment (270-position grid, 500 realizations).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Preset {
    Desk,
    Paper,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RoomToml {
    pub dims_m: [f64; 3],
    pub allowed_planes: Vec<Plane>,
    pub anchor_offset_m: f64,
    pub mobile_offset_m: f64,
}

impl Default for RoomToml {
    fn default() -> Self {
        RoomToml {
            dims_m: [8.0, 4.0, 2.4],
            allowed_planes: Plane::ALL.to_vec(),
            anchor_offset_m: 0.03,
            mobile_offset_m: 0.05,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridToml {
    pub counts: [usize; 3],
}

impl Default for GridToml {
    fn default() -> Self {
        GridToml { counts: [9, 6, 5] }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SignalToml {
    pub sample_rate_hz: f64,
    pub chirp_f0_hz: f64,
    pub chirp_f1_hz: f64,
    pub chirp_duration_ms: f64,
    pub capture_duration_ms: f64,
    pub capture_start_ms: f64,
    pub lpf_cutoff_hz: f64,
    pub speed_of_sound_mps: f64,
}

impl Default for SignalToml {
    fn default() -> Self {
        SignalToml {
            sample_rate_hz: 192_000.0,
            chirp_f0_hz: 25_000.0,
            chirp_f1_hz: 45_000.0,
            chirp_duration_ms: 30.0,
            capture_duration_ms: 1.0,
            capture_start_ms: 28.0,
            lpf_cutoff_hz: 2_000.0,
            speed_of_sound_mps: 343.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PropagationToml {
    pub mode: PropagationMode,
    pub reflection_order: usize,
    pub wall_reflection_coeff: f64,
    pub snr_db: f64,
    /// Per-anchor range noise standard deviation in abstract mode.
    pub abstract_range_sigma_m: f64,
}

impl Default for PropagationToml {
    fn default() -> Self {
        PropagationToml {
            mode: PropagationMode::AbstractGaussian,
            reflection_order: 1,
            wall_reflection_coeff: 0.5,
            snr_db: 30.0,
            abstract_range_sigma_m: 0.03,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct PsoToml {
    pub omega: f64,
    pub c1: f64,
    pub c2: f64,
    pub swarm_size: usize,
    pub max_iterations: usize,
    pub stop_threshold: f64,
    pub stop_patience: usize,
}

impl Default for PsoToml {
    fn default() -> Self {
        let hp = PsoHyperParams::default();
        PsoToml {
            omega: hp.omega,
            c1: hp.c1,
            c2: hp.c2,
            swarm_size: hp.swarm_size,
            max_iterations: hp.max_iterations,
            stop_threshold: hp.stop_threshold,
            stop_patience: hp.stop_patience,
        }
    }
}

/// Which position solver the evaluation uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverKind {
    /// Linear initialization plus Gauss-Newton refinement.
    GaussNewton,
    /// Closed-form linear estimate only.
    Linear,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CampaignToml {
    /// Anchor count for `optimize` mode.
    pub anchor_count: usize,
    /// Anchor counts for `sweep` mode.
    pub anchor_counts: Vec<usize>,
    /// Monte Carlo realizations per cost evaluation during optimization.
    pub optimization_realizations: usize,
    /// Realizations for the final evaluation of a layout.
    pub final_realizations: usize,
    pub solver: SolverKind,
    /// Refusal threshold for exhaustive subset searches.
    pub search_budget: u64,
}

impl Default for CampaignToml {
    fn default() -> Self {
        CampaignToml {
            anchor_count: 4,
            anchor_counts: vec![4, 6, 8, 10],
            optimization_realizations: 20,
            final_realizations: 500,
            solver: SolverKind::GaussNewton,
            search_budget: 1_000_000,
        }
    }
}

/// Where the evaluated layout comes from in `evaluate` and `bounds` modes.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LayoutToml {
    /// The non-optimized corner reference placement.
    #[default]
    Corner,
    /// Explicit anchor positions, each already on an allowed anchor surface.
    Explicit { positions_m: Vec<[f64; 3]> },
    /// Reuse the final layout of a previous run directory.
    FromRun { run_dir: String },
}

/// The whole campaign file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CampaignConfig {
    pub mode: CampaignMode,
    pub seed: u64,
    #[serde(default)]
    pub room: RoomToml,
    #[serde(default)]
    pub grid: GridToml,
    #[serde(default)]
    pub signal: SignalToml,
    #[serde(default)]
    pub propagation: PropagationToml,
    #[serde(default)]
    pub pso: PsoToml,
    #[serde(default)]
    pub campaign: CampaignToml,
    #[serde(default)]
    pub layout: LayoutToml,
}

impl CampaignConfig {
    /// A default campaign in the given mode with the mandatory seed.
    pub fn new(mode: CampaignMode, seed: u64) -> Self {
        CampaignConfig {
            mode,
            seed,
            room: RoomToml::default(),
            grid: GridToml::default(),
            signal: SignalToml::default(),
            propagation: PropagationToml::default(),
            pso: PsoToml::default(),
            campaign: CampaignToml::default(),
            layout: LayoutToml::default(),
        }
    }

    pub fn from_toml_str(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::io(path.display().to_string(), e))?;
        Self::from_toml_str(&text)
    }

    pub fn to_toml_string(&self) -> String {
        toml::to_string_pretty(self).expect("config serializes")
    }

    /// Scale the campaign to a preset.
    pub fn apply_preset(&mut self, preset: Preset) {
        match preset {
            Preset::Desk => {
                self.grid.counts = [5, 4, 3];
                self.campaign.optimization_realizations = 10;
                self.campaign.final_realizations = 50;
            }
            Preset::Paper => {
                self.grid.counts = [9, 6, 5];
                self.campaign.optimization_realizations = 20;
                self.campaign.final_realizations = 500;
            }
        }
    }

    /// Content hash of the resolved configuration, used as the run id.
    pub fn run_id(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(self.to_toml_string().as_bytes());
        let digest = hasher.finalize();
        digest[..6].iter().map(|b| format!("{b:02x}")).collect()
    }

    pub fn room(&self) -> Result<Room> {
        Room::new(
            Vector3::new(self.room.dims_m[0], self.room.dims_m[1], self.room.dims_m[2]),
            &self.room.allowed_planes,
            self.room.anchor_offset_m,
            self.room.mobile_offset_m,
        )
        .map_err(|e| Error::InvalidConfig(format!("room: {e}")))
    }

    pub fn mobile_grid(&self, room: &Room) -> Result<MobileGrid> {
        build_grid(room, self.grid.counts)
            .map_err(|e| Error::InvalidConfig(format!("grid: {e}")))
    }

    pub fn signal_config(&self) -> SignalConfig {
        SignalConfig {
            sample_rate_hz: self.signal.sample_rate_hz,
            chirp_f0_hz: self.signal.chirp_f0_hz,
            chirp_f1_hz: self.signal.chirp_f1_hz,
            chirp_duration_s: self.signal.chirp_duration_ms / 1000.0,
            capture_duration_s: self.signal.capture_duration_ms / 1000.0,
            capture_start_s: self.signal.capture_start_ms / 1000.0,
            lpf_cutoff_hz: self.signal.lpf_cutoff_hz,
            speed_of_sound_mps: self.signal.speed_of_sound_mps,
        }
    }

    pub fn propagation_model(&self) -> PropagationModel {
        PropagationModel {
            mode: self.propagation.mode,
            reflection_order: self.propagation.reflection_order,
            wall_reflection_coeff: self.propagation.wall_reflection_coeff,
            snr_db: self.propagation.snr_db,
        }
    }

    pub fn pso_hyper_params(&self) -> PsoHyperParams {
        PsoHyperParams {
            omega: self.pso.omega,
            c1: self.pso.c1,
            c2: self.pso.c2,
            swarm_size: self.pso.swarm_size,
            max_iterations: self.pso.max_iterations,
            stop_threshold: self.pso.stop_threshold,
            stop_patience: self.pso.stop_patience,
        }
    }

    /// Validate everything that can be checked before any simulation.
    pub fn validate(&self) -> Result<()> {
        let room = self.room()?;
        self.mobile_grid(&room)?;
        let signal = self.signal_config();
        if self.propagation.mode != PropagationMode::AbstractGaussian {
            signal
                .validate_for_room(&room)
                .map_err(|e| Error::InvalidConfig(format!("signal: {e}")))?;
        }
        self.propagation_model()
            .validate()
            .map_err(|e| Error::InvalidConfig(format!("propagation: {e}")))?;
        self.pso_hyper_params()
            .validate()
            .map_err(|e| Error::InvalidConfig(format!("pso: {e}")))?;
        if self.propagation.mode == PropagationMode::AbstractGaussian
            && !(self.propagation.abstract_range_sigma_m.is_finite()
                && self.propagation.abstract_range_sigma_m >= 0.0)
        {
            return Err(Error::InvalidConfig(format!(
                "abstract_range_sigma_m must be non-negative, got {}",
                self.propagation.abstract_range_sigma_m
            )));
        }
        if self.campaign.final_realizations == 0 || self.campaign.optimization_realizations == 0 {
            return Err(Error::InvalidConfig(
                "realization counts must be positive".into(),
            ));
        }
        match self.mode {
            CampaignMode::Optimize => {
                if self.campaign.anchor_count < 4 {
                    return Err(Error::InvalidConfig(format!(
                        "anchor_count must be at least 4, got {}",
                        self.campaign.anchor_count
                    )));
                }
            }
            CampaignMode::Sweep => {
                if self.campaign.anchor_counts.is_empty() {
                    return Err(Error::InvalidConfig("anchor_counts is empty".into()));
                }
                if self.campaign.anchor_counts.iter().any(|&m| m < 4) {
                    return Err(Error::InvalidConfig(
                        "every anchor count in a sweep must be at least 4".into(),
                    ));
                }
            }
            CampaignMode::Evaluate | CampaignMode::Bounds => {}
        }
        Ok(())
    }

    /// Materialize the layout for `evaluate` and `bounds` runs.
    pub fn resolve_layout(&self, room: &Room) -> Result<AnchorLayout> {
        match &self.layout {
            LayoutToml::Corner => AnchorLayout::corner_reference(room)
                .map_err(|e| Error::InvalidConfig(format!("layout: {e}"))),
            LayoutToml::Explicit { positions_m } => {
                let mut anchors = Vec::with_capacity(positions_m.len());
                let mut planes = Vec::with_capacity(positions_m.len());
                for (i, p) in positions_m.iter().enumerate() {
                    let point = Point3::new(p[0], p[1], p[2]);
                    let (projected, plane) = room.project_to_allowed_planes(&point);
                    if (projected - point).norm() > 1e-6 {
                        return Err(Error::InvalidConfig(format!(
                            "layout: anchor {i} at {p:?} is not on an allowed anchor surface"
                        )));
                    }
                    anchors.push(projected);
                    planes.push(plane);
                }
                AnchorLayout::new(room, anchors, planes)
                    .map_err(|e| Error::InvalidConfig(format!("layout: {e}")))
            }
            LayoutToml::FromRun { run_dir } => {
                let artifact = crate::campaign::load_artifact(std::path::Path::new(run_dir))?;
                let anchors = artifact
                    .layout
                    .positions_m
                    .iter()
                    .map(|p| Point3::new(p[0], p[1], p[2]))
                    .collect();
                AnchorLayout::new(room, anchors, artifact.layout.planes.clone())
                    .map_err(|e| Error::InvalidConfig(format!("layout from {run_dir}: {e}")))
            }
        }
    }
}
