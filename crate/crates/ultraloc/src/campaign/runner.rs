//! Campaign execution: Monte Carlo evaluation of layouts, swarm
//! optimization, anchor-count sweeps and bound comparisons.
//!
//! Every stochastic draw comes from a stream derived from the master seed
//! and the (realization, position, anchor) indices, so identical configs
//! yield identical artifacts regardless of worker scheduling.

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::acoustics::{
    calibrate_noise, draw_abstract_ranges, estimate_range, generate_chirp, simulate_reception,
    PropagationMode, RangingRealization,
};
use crate::bounds::{
    dop_field, error_stats_from_errors, fit_range_sigmas, peb_field, CdfPoint, ErrorStats,
    OutlierReport,
};
use crate::error::{Error, Result};
use crate::positioning::{solve_ls, solve_ls_linear};
use crate::pso::{optimize, IterationRecord, PsoHyperParams};
use crate::rng::{domain, substream};
use crate::room::{AnchorLayout, MobileGrid, Plane, Room};

use super::config::{CampaignConfig, CampaignMode, SolverKind};

/// Serializable snapshot of an anchor layout.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct LayoutRecord {
    pub positions_m: Vec<[f64; 3]>,
    pub planes: Vec<Plane>,
    pub directivities: Vec<[f64; 3]>,
}

impl LayoutRecord {
    pub fn from_layout(layout: &AnchorLayout) -> Self {
        LayoutRecord {
            positions_m: layout
                .anchors()
                .iter()
                .map(|a| [a.x, a.y, a.z])
                .collect(),
            planes: layout.plane_of().to_vec(),
            directivities: layout
                .directivities()
                .iter()
                .map(|d| [d.x, d.y, d.z])
                .collect(),
        }
    }
}

/// Per-grid-position results of an evaluation.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct PositionRecord {
    pub index: usize,
    pub position_m: [f64; 3],
    pub mean_error_m: f64,
    pub error_std_m: f64,
    pub rmse_m: f64,
    /// Mean over anchors of the per-anchor range error std at this position.
    pub mean_range_sigma_m: f64,
    pub peb_m2: Option<f64>,
    pub dop: Option<f64>,
}

/// Swarm progress snapshot stored per iteration.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct IterationSummary {
    pub iteration: usize,
    pub g_best_cost: f64,
    pub layout: LayoutRecord,
    /// Mean PEB over positions where it is defined, at the final fitted
    /// range sigmas.
    pub mean_peb_m2: Option<f64>,
    pub peb_undefined: usize,
}

/// Paired empirical-vs-bound distributions from a `bounds` run.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct BoundsComparison {
    /// CDF of per-position RMSE, meters.
    pub rmse_cdf: Vec<CdfPoint>,
    /// CDF of sqrt(PEB) over positions with a defined bound, meters.
    pub peb_sqrt_cdf: Vec<CdfPoint>,
    pub rmse_median_m: f64,
    pub peb_sqrt_median_m: f64,
    pub undefined_peb_positions: usize,
}

/// Everything a run produces. Self-contained: re-running the embedded config
/// snapshot reproduces the artifact bit for bit.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct RunArtifact {
    pub version: String,
    pub run_id: String,
    pub config: CampaignConfig,
    pub anchor_count: usize,
    pub layout: LayoutRecord,
    pub stats: ErrorStats,
    pub fitted_range_sigmas: Vec<f64>,
    pub outlier_report: Option<OutlierReport>,
    pub mean_dop: Option<f64>,
    pub peb_undefined_count: usize,
    pub per_position: Vec<PositionRecord>,
    pub iterations: Vec<IterationSummary>,
    pub bounds: Option<BoundsComparison>,
}

/// Raw evaluation output before artifact assembly.
pub struct Evaluation {
    pub stats: ErrorStats,
    pub per_position: Vec<PositionRecord>,
    pub realizations: Vec<RangingRealization>,
    pub fitted_range_sigmas: Vec<f64>,
    pub outlier_report: Option<OutlierReport>,
    pub mean_dop: Option<f64>,
    pub peb_undefined_count: usize,
}

fn solve(kind: SolverKind, anchors: &[nalgebra::Point3<f64>], ranges: &[f64]) -> Result<nalgebra::Point3<f64>> {
    let estimate = match kind {
        SolverKind::GaussNewton => solve_ls(anchors, ranges)?,
        SolverKind::Linear => solve_ls_linear(anchors, ranges)?,
    };
    Ok(estimate.position)
}

/// Draw all ranging realizations for a layout under the configured
/// propagation model. `seed_domain` separates optimization-time draws from
/// final-evaluation draws.
fn draw_realizations(
    cfg: &CampaignConfig,
    room: &Room,
    grid: &MobileGrid,
    layout: &AnchorLayout,
    realizations: usize,
    seed_domain: u64,
) -> Result<Vec<RangingRealization>> {
    let model = cfg.propagation_model();
    match model.mode {
        PropagationMode::AbstractGaussian => {
            let sigmas = vec![cfg.propagation.abstract_range_sigma_m; layout.len()];
            (0..realizations)
                .into_par_iter()
                .map(|r| {
                    let mut rng = substream(cfg.seed, &[seed_domain, r as u64]);
                    draw_abstract_ranges(layout, grid, &sigmas, &mut rng)
                })
                .collect()
        }
        PropagationMode::DirectPath | PropagationMode::ImageSource => {
            let signal = cfg.signal_config();
            let chirp = generate_chirp(&signal)?;
            let noise_stds: Vec<f64> = layout
                .anchors()
                .iter()
                .zip(layout.directivities())
                .map(|(a, d)| calibrate_noise(&chirp, a, d, grid, room, &model, &signal))
                .collect::<Result<_>>()?;
            let m = layout.len();
            let p = grid.len();
            let true_ranges = DMatrix::from_fn(m, p, |j, i| {
                (grid.positions()[i] - layout.anchors()[j]).norm()
            });
            (0..realizations)
                .into_par_iter()
                .map(|r| {
                    let mut ranges = DMatrix::zeros(m, p);
                    // Streams are independent per (realization, position,
                    // anchor), so any schedule gives the same draw.
                    let cells: Vec<((usize, usize), f64)> = (0..p)
                        .into_par_iter()
                        .flat_map_iter(|i| (0..m).map(move |j| (i, j)))
                        .map(|(i, j)| {
                            let mut rng =
                                substream(cfg.seed, &[seed_domain, r as u64, i as u64, j as u64]);
                            let window = simulate_reception(
                                &chirp,
                                &layout.anchors()[j],
                                &layout.directivities()[j],
                                &grid.positions()[i],
                                room,
                                &model,
                                &signal,
                                noise_stds[j],
                                &mut rng,
                            )?;
                            let range = estimate_range(&window, &chirp, &signal)?;
                            Ok(((j, i), range))
                        })
                        .collect::<Result<_>>()?;
                    for ((j, i), range) in cells {
                        ranges[(j, i)] = range;
                    }
                    RangingRealization::new(ranges, true_ranges.clone(), noise_stds.clone())
                })
                .collect()
        }
    }
}

/// Position every realization of every grid point and aggregate statistics.
pub fn evaluate_layout(
    cfg: &CampaignConfig,
    room: &Room,
    grid: &MobileGrid,
    layout: &AnchorLayout,
    realizations: usize,
    seed_domain: u64,
) -> Result<Evaluation> {
    let reals = draw_realizations(cfg, room, grid, layout, realizations, seed_domain)?;
    let anchors = layout.anchors();
    let p = grid.len();
    let r_count = reals.len();

    // errors[i][r]: Euclidean error at position i for realization r.
    let errors: Vec<Vec<f64>> = (0..p)
        .into_par_iter()
        .map(|i| {
            reals
                .iter()
                .map(|real| {
                    let ranges: Vec<f64> = (0..anchors.len()).map(|j| real.ranges[(j, i)]).collect();
                    let est = solve(cfg.campaign.solver, anchors, &ranges)?;
                    Ok((est - grid.positions()[i]).norm())
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<_>>()?;

    let all_errors: Vec<f64> = (0..r_count)
        .flat_map(|r| errors.iter().map(move |per_pos| per_pos[r]))
        .collect();
    let stats = error_stats_from_errors(&all_errors)?;

    // Per-anchor, per-position range error stds; their anchor-mean feeds DOP.
    let mean_range_sigma: Vec<f64> = (0..p)
        .map(|i| {
            let per_anchor: Vec<f64> = (0..anchors.len())
                .map(|j| {
                    let errs: Vec<f64> = reals
                        .iter()
                        .map(|real| real.ranges[(j, i)] - real.true_ranges[(j, i)])
                        .collect();
                    std_dev(&errs)
                })
                .collect();
            per_anchor.iter().sum::<f64>() / per_anchor.len() as f64
        })
        .collect();

    let (fitted, outlier_report) = if r_count >= 30 {
        let (sigmas, report) = fit_range_sigmas(&reals)?;
        (sigmas, Some(report))
    } else {
        (Vec::new(), None)
    };

    let peb: Vec<Option<f64>> = if !fitted.is_empty() && fitted.iter().all(|&s| s > 0.0) {
        peb_field(layout, grid, &fitted)?
    } else {
        vec![None; p]
    };
    let peb_undefined_count = peb.iter().filter(|v| v.is_none()).count();

    let error_stds: Vec<f64> = errors.iter().map(|e| std_dev(e)).collect();
    let dop = if mean_range_sigma.iter().all(|&s| s > 0.0) {
        Some(dop_field(&error_stds, &mean_range_sigma)?)
    } else {
        None
    };

    let per_position: Vec<PositionRecord> = (0..p)
        .map(|i| {
            let errs = &errors[i];
            let mean = errs.iter().sum::<f64>() / errs.len() as f64;
            let rmse =
                (errs.iter().map(|e| e * e).sum::<f64>() / errs.len() as f64).sqrt();
            let pos = grid.positions()[i];
            PositionRecord {
                index: i,
                position_m: [pos.x, pos.y, pos.z],
                mean_error_m: mean,
                error_std_m: error_stds[i],
                rmse_m: rmse,
                mean_range_sigma_m: mean_range_sigma[i],
                peb_m2: peb[i],
                dop: dop.as_ref().map(|d| d.values[i]),
            }
        })
        .collect();

    Ok(Evaluation {
        stats,
        per_position,
        realizations: reals,
        fitted_range_sigmas: fitted,
        outlier_report,
        mean_dop: dop.map(|d| d.mean_dop),
        peb_undefined_count,
    })
}

fn std_dev(values: &[f64]) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let mean = values.iter().sum::<f64>() / values.len() as f64;
    (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (values.len() - 1) as f64)
        .sqrt()
}

/// The swarm cost: sample variance of the Euclidean position errors over the
/// grid, at the optimization-time realization count. Common random numbers
/// (a fixed stream per realization index) make the cost a deterministic
/// function of the layout.
pub fn layout_cost(
    cfg: &CampaignConfig,
    room: &Room,
    grid: &MobileGrid,
    layout: &AnchorLayout,
) -> Result<f64> {
    let reals = draw_realizations(
        cfg,
        room,
        grid,
        layout,
        cfg.campaign.optimization_realizations,
        domain::COST,
    )?;
    let anchors = layout.anchors();
    let errors: Vec<f64> = (0..grid.len())
        .into_par_iter()
        .map(|i| {
            reals
                .iter()
                .map(|real| {
                    let ranges: Vec<f64> =
                        (0..anchors.len()).map(|j| real.ranges[(j, i)]).collect();
                    let est = solve(cfg.campaign.solver, anchors, &ranges)?;
                    Ok((est - grid.positions()[i]).norm())
                })
                .collect::<Result<Vec<f64>>>()
        })
        .collect::<Result<Vec<Vec<f64>>>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok(error_stats_from_errors(&errors)?.variance)
}

fn assemble(
    cfg: &CampaignConfig,
    layout: &AnchorLayout,
    evaluation: Evaluation,
    iterations: Vec<IterationSummary>,
    bounds: Option<BoundsComparison>,
) -> RunArtifact {
    RunArtifact {
        version: env!("CARGO_PKG_VERSION").to_string(),
        run_id: cfg.run_id(),
        config: cfg.clone(),
        anchor_count: layout.len(),
        layout: LayoutRecord::from_layout(layout),
        stats: evaluation.stats,
        fitted_range_sigmas: evaluation.fitted_range_sigmas,
        outlier_report: evaluation.outlier_report,
        mean_dop: evaluation.mean_dop,
        peb_undefined_count: evaluation.peb_undefined_count,
        per_position: evaluation.per_position,
        iterations,
        bounds,
    }
}

/// Evaluate one explicit layout over the grid.
pub fn run_evaluate(cfg: &CampaignConfig) -> Result<RunArtifact> {
    cfg.validate()?;
    let room = cfg.room()?;
    let grid = cfg.mobile_grid(&room)?;
    let layout = cfg.resolve_layout(&room)?;
    let evaluation = evaluate_layout(
        cfg,
        &room,
        &grid,
        &layout,
        cfg.campaign.final_realizations,
        domain::EVAL,
    )?;
    Ok(assemble(cfg, &layout, evaluation, Vec::new(), None))
}

fn summarize_iterations(
    history: &[IterationRecord],
    grid: &MobileGrid,
    fitted: &[f64],
) -> Result<Vec<IterationSummary>> {
    history
        .iter()
        .map(|rec| {
            let (mean_peb, undefined) = if !fitted.is_empty() && fitted.iter().all(|&s| s > 0.0) {
                let field = peb_field(&rec.layout, grid, fitted)?;
                let defined: Vec<f64> = field.iter().copied().flatten().collect();
                let undefined = field.len() - defined.len();
                let mean = (!defined.is_empty())
                    .then(|| defined.iter().sum::<f64>() / defined.len() as f64);
                (mean, undefined)
            } else {
                (None, grid.len())
            };
            Ok(IterationSummary {
                iteration: rec.iteration,
                g_best_cost: rec.g_best_cost,
                layout: LayoutRecord::from_layout(&rec.layout),
                mean_peb_m2: mean_peb,
                peb_undefined: undefined,
            })
        })
        .collect()
}

/// Swarm-optimize an `anchor_count`-anchor layout, then evaluate the result.
pub fn run_optimize(cfg: &CampaignConfig) -> Result<RunArtifact> {
    cfg.validate()?;
    run_optimize_for(cfg, cfg.campaign.anchor_count, cfg.seed)
}

fn run_optimize_for(cfg: &CampaignConfig, m: usize, seed: u64) -> Result<RunArtifact> {
    let room = cfg.room()?;
    let grid = cfg.mobile_grid(&room)?;
    let hp: PsoHyperParams = cfg.pso_hyper_params();
    let cost_cfg = CampaignConfig { seed, ..cfg.clone() };
    let cost = |layout: &AnchorLayout| layout_cost(&cost_cfg, &room, &grid, layout);
    let outcome = optimize(&room, m, &hp, &cost, seed)?;
    let evaluation = evaluate_layout(
        &cost_cfg,
        &room,
        &grid,
        &outcome.layout,
        cfg.campaign.final_realizations,
        domain::EVAL,
    )?;
    let iterations =
        summarize_iterations(&outcome.history, &grid, &evaluation.fitted_range_sigmas)?;
    let mut artifact = assemble(cfg, &outcome.layout, evaluation, iterations, None);
    artifact.anchor_count = m;
    Ok(artifact)
}

/// Sub-seed for one anchor count of a sweep, kept within TOML's integer
/// range so the composed config snapshot stays serializable.
pub fn sweep_sub_seed(master_seed: u64, anchor_count: usize) -> u64 {
    use rand::Rng;
    substream(master_seed, &[domain::SWEEP, anchor_count as u64]).gen::<u64>() >> 1
}

/// Optimize and evaluate for every anchor count in the sweep list.
pub fn run_sweep(cfg: &CampaignConfig) -> Result<Vec<RunArtifact>> {
    cfg.validate()?;
    cfg.campaign
        .anchor_counts
        .iter()
        .map(|&m| {
            run_optimize_for(cfg, m, sweep_sub_seed(cfg.seed, m))
        })
        .collect()
}

fn median_of_cdf(cdf: &[CdfPoint]) -> f64 {
    if cdf.is_empty() {
        return f64::NAN;
    }
    let values: Vec<f64> = cdf.iter().map(|p| p.value).collect();
    let n = values.len();
    if !n.is_multiple_of(2) {
        values[n / 2]
    } else {
        0.5 * (values[n / 2 - 1] + values[n / 2])
    }
}

/// Evaluate a layout and compare the per-position RMSE distribution against
/// the PEB computed at the fitted range sigmas.
pub fn run_bounds(cfg: &CampaignConfig) -> Result<RunArtifact> {
    cfg.validate()?;
    if cfg.campaign.final_realizations < 30 {
        return Err(Error::InvalidConfig(
            "bounds mode needs at least 30 realizations to fit range sigmas".into(),
        ));
    }
    let room = cfg.room()?;
    let grid = cfg.mobile_grid(&room)?;
    let layout = cfg.resolve_layout(&room)?;
    let evaluation = evaluate_layout(
        cfg,
        &room,
        &grid,
        &layout,
        cfg.campaign.final_realizations,
        domain::EVAL,
    )?;
    let mut rmse: Vec<f64> = evaluation.per_position.iter().map(|p| p.rmse_m).collect();
    rmse.sort_by(|a, b| a.total_cmp(b));
    let rmse_cdf: Vec<CdfPoint> = rmse
        .iter()
        .enumerate()
        .map(|(i, &value)| CdfPoint {
            value,
            fraction: (i + 1) as f64 / rmse.len() as f64,
        })
        .collect();
    let mut peb_sqrt: Vec<f64> = evaluation
        .per_position
        .iter()
        .filter_map(|p| p.peb_m2)
        .map(f64::sqrt)
        .collect();
    peb_sqrt.sort_by(|a, b| a.total_cmp(b));
    let peb_sqrt_cdf: Vec<CdfPoint> = peb_sqrt
        .iter()
        .enumerate()
        .map(|(i, &value)| CdfPoint {
            value,
            fraction: (i + 1) as f64 / peb_sqrt.len().max(1) as f64,
        })
        .collect();
    let bounds = BoundsComparison {
        rmse_median_m: median_of_cdf(&rmse_cdf),
        peb_sqrt_median_m: median_of_cdf(&peb_sqrt_cdf),
        undefined_peb_positions: evaluation.peb_undefined_count,
        rmse_cdf,
        peb_sqrt_cdf,
    };
    Ok(assemble(cfg, &layout, evaluation, Vec::new(), Some(bounds)))
}

/// Dispatch on the config's mode. Sweeps return one artifact per anchor
/// count; other modes return a single artifact.
pub fn run(cfg: &CampaignConfig) -> Result<Vec<RunArtifact>> {
    match cfg.mode {
        CampaignMode::Evaluate => Ok(vec![run_evaluate(cfg)?]),
        CampaignMode::Optimize => Ok(vec![run_optimize(cfg)?]),
        CampaignMode::Sweep => run_sweep(cfg),
        CampaignMode::Bounds => Ok(vec![run_bounds(cfg)?]),
    }
}
