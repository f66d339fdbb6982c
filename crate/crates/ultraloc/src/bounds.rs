//! Fisher information, position error bounds and error statistics.
//!
//! Under the Gaussian range model `r_j = ||p - a_j|| + n_j` with independent
//! zero-mean noise of per-anchor variance `sigma_j^2`, the Fisher
//! information matrix for the position is
//!
//! ```text
//! J(p) = sum_j (1 / sigma_j^2) * u_j * u_j^T,    u_j = (p - a_j) / ||p - a_j||
//! ```
//!
//! The position error bound is `PEB(p) = tr(J(p)^-1)` (square meters),
//! defined only where `J` has full rank: anchors that all lie in one plane
//! through `p` carry no information perpendicular to it, so the bound is
//! flagged undefined instead of inventing a number.
//!
//! The dilution of precision at a position is the ratio of the observed
//! position-error standard deviation to the mean ranging standard deviation
//! there, `DOP_p = sigma_p / sigma_r_p`.

use nalgebra::{Matrix3, Point3};
use serde::{Deserialize, Serialize};

use crate::acoustics::RangingRealization;
use crate::error::{Error, Result};
use crate::room::{AnchorLayout, MobileGrid};

/// Relative eigenvalue threshold below which a FIM direction counts as
/// uninformative.
const RANK_EPS: f64 = 1e-10;

/// Fisher information at one position.
#[derive(Debug, Clone)]
pub struct FimResult {
    pub fim: Matrix3<f64>,
    /// `tr(J^-1)` in square meters; `None` when `rank < 3`.
    pub peb: Option<f64>,
    pub rank: usize,
}

/// Analytic FIM of the Gaussian range model at position `p`.
pub fn fim(p: &Point3<f64>, anchors: &[Point3<f64>], range_sigmas: &[f64]) -> Result<FimResult> {
    if anchors.len() != range_sigmas.len() {
        return Err(Error::InvalidArgument(format!(
            "{} anchors but {} sigmas",
            anchors.len(),
            range_sigmas.len()
        )));
    }
    if let Some(bad) = range_sigmas.iter().find(|&&s| !(s.is_finite() && s > 0.0)) {
        return Err(Error::InvalidArgument(format!(
            "range sigmas must be positive, got {bad}"
        )));
    }
    let mut j = Matrix3::zeros();
    for (a, &sigma) in anchors.iter().zip(range_sigmas) {
        let diff = p - a;
        let d = diff.norm();
        if d < 1e-12 {
            return Err(Error::InvalidArgument(format!(
                "position coincides with anchor at {:?}",
                a.coords.as_slice()
            )));
        }
        let u = diff / d;
        j += (u * u.transpose()) / (sigma * sigma);
    }
    let eigen = nalgebra::SymmetricEigen::new(j);
    let max_ev = eigen.eigenvalues.iter().cloned().fold(0.0f64, f64::max);
    let rank = if max_ev <= 0.0 {
        0
    } else {
        eigen
            .eigenvalues
            .iter()
            .filter(|&&ev| ev > RANK_EPS * max_ev)
            .count()
    };
    let peb = (rank == 3).then(|| eigen.eigenvalues.iter().map(|ev| 1.0 / ev).sum());
    Ok(FimResult { fim: j, peb, rank })
}

/// PEB per grid position; entries are `None` where the FIM is rank deficient.
pub fn peb_field(
    layout: &AnchorLayout,
    grid: &MobileGrid,
    range_sigmas: &[f64],
) -> Result<Vec<Option<f64>>> {
    grid.positions()
        .iter()
        .map(|p| fim(p, layout.anchors(), range_sigmas).map(|f| f.peb))
        .collect()
}

/// Per-anchor outlier removal bookkeeping from [`fit_range_sigmas`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutlierReport {
    /// Fraction of samples removed, per anchor.
    pub removed_fraction: Vec<f64>,
    pub removed_total: usize,
    pub kept_total: usize,
}

fn median(sorted: &[f64]) -> f64 {
    let n = sorted.len();
    if !n.is_multiple_of(2) {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

/// Fit per-anchor range error standard deviations from pooled realizations.
///
/// For each anchor the range errors `r - d` are pooled across positions and
/// realizations, samples farther than `5 x MAD` from the median are removed,
/// and the standard deviation of the survivors is returned together with the
/// removed fraction. Requires at least 30 realizations.
pub fn fit_range_sigmas(realizations: &[RangingRealization]) -> Result<(Vec<f64>, OutlierReport)> {
    if realizations.len() < 30 {
        return Err(Error::InvalidArgument(format!(
            "need at least 30 realizations to fit sigmas, got {}",
            realizations.len()
        )));
    }
    let m = realizations[0].ranges.nrows();
    let mut sigmas = Vec::with_capacity(m);
    let mut removed_fraction = Vec::with_capacity(m);
    let mut removed_total = 0;
    let mut kept_total = 0;
    for j in 0..m {
        let mut errors: Vec<f64> = realizations
            .iter()
            .flat_map(|real| {
                real.ranges
                    .row(j)
                    .iter()
                    .zip(real.true_ranges.row(j).iter())
                    .map(|(r, d)| r - d)
                    .collect::<Vec<_>>()
            })
            .collect();
        errors.sort_by(|a, b| a.total_cmp(b));
        let med = median(&errors);
        let mut deviations: Vec<f64> = errors.iter().map(|e| (e - med).abs()).collect();
        deviations.sort_by(|a, b| a.total_cmp(b));
        let mad = median(&deviations);
        let kept: Vec<f64> = errors
            .iter()
            .copied()
            .filter(|e| (e - med).abs() <= 5.0 * mad)
            .collect();
        if kept.is_empty() {
            return Err(Error::DegenerateData(format!(
                "all range error samples of anchor {j} were removed as outliers"
            )));
        }
        removed_total += errors.len() - kept.len();
        kept_total += kept.len();
        removed_fraction.push((errors.len() - kept.len()) as f64 / errors.len() as f64);
        let mean = kept.iter().sum::<f64>() / kept.len() as f64;
        let var = if kept.len() > 1 {
            kept.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>() / (kept.len() - 1) as f64
        } else {
            0.0
        };
        sigmas.push(var.sqrt());
    }
    Ok((
        sigmas,
        OutlierReport {
            removed_fraction,
            removed_total,
            kept_total,
        },
    ))
}

/// One step of an empirical CDF: fraction of samples at or below `value`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CdfPoint {
    pub value: f64,
    pub fraction: f64,
}

/// Euclidean position error statistics over a batch of estimates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorStats {
    /// Standard deviation of the Euclidean errors, meters.
    pub sigma: f64,
    /// Mean Euclidean error, meters.
    pub mu: f64,
    /// 95th percentile by linear interpolation between order statistics.
    pub p95: f64,
    /// Sample variance (`N - 1` denominator); the swarm optimization cost.
    pub variance: f64,
    /// Empirical CDF of the errors.
    pub cdf: Vec<CdfPoint>,
}

/// Linearly interpolated percentile of a sorted sample
/// (index `h = (N - 1) * q` between order statistics).
fn percentile(sorted: &[f64], q: f64) -> f64 {
    let n = sorted.len();
    if n == 1 {
        return sorted[0];
    }
    let h = (n - 1) as f64 * q;
    let lo = h.floor() as usize;
    let frac = h - lo as f64;
    if lo + 1 >= n {
        sorted[n - 1]
    } else {
        sorted[lo] + frac * (sorted[lo + 1] - sorted[lo])
    }
}

/// Statistics of a raw error sample (already Euclidean distances).
pub fn error_stats_from_errors(errors: &[f64]) -> Result<ErrorStats> {
    if errors.is_empty() {
        return Err(Error::InvalidArgument(
            "error statistics need at least one sample".into(),
        ));
    }
    let n = errors.len();
    let mu = errors.iter().sum::<f64>() / n as f64;
    let variance = if n > 1 {
        errors.iter().map(|e| (e - mu) * (e - mu)).sum::<f64>() / (n - 1) as f64
    } else {
        0.0
    };
    let mut sorted = errors.to_vec();
    sorted.sort_by(|a, b| a.total_cmp(b));
    let p95 = percentile(&sorted, 0.95);
    let cdf = sorted
        .iter()
        .enumerate()
        .map(|(i, &value)| CdfPoint {
            value,
            fraction: (i + 1) as f64 / n as f64,
        })
        .collect();
    Ok(ErrorStats {
        sigma: variance.sqrt(),
        mu,
        p95,
        variance,
        cdf,
    })
}

/// Statistics of Euclidean distances between true and estimated positions.
pub fn error_stats(
    true_positions: &[Point3<f64>],
    estimates: &[Point3<f64>],
) -> Result<ErrorStats> {
    if true_positions.len() != estimates.len() {
        return Err(Error::InvalidArgument(format!(
            "{} true positions but {} estimates",
            true_positions.len(),
            estimates.len()
        )));
    }
    let errors: Vec<f64> = true_positions
        .iter()
        .zip(estimates)
        .map(|(t, e)| (t - e).norm())
        .collect();
    error_stats_from_errors(&errors)
}

/// Dilution of precision over the grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DopField {
    pub values: Vec<f64>,
    pub mean_dop: f64,
}

/// `DOP_p = sigma_p / sigma_r_p` per position, plus the grid mean.
pub fn dop_field(
    position_error_stds: &[f64],
    mean_range_stds: &[f64],
) -> Result<DopField> {
    if position_error_stds.len() != mean_range_stds.len() {
        return Err(Error::InvalidArgument(format!(
            "{} error stds but {} range stds",
            position_error_stds.len(),
            mean_range_stds.len()
        )));
    }
    if position_error_stds.is_empty() {
        return Err(Error::InvalidArgument("empty DOP input".into()));
    }
    if let Some(bad) = mean_range_stds.iter().find(|&&s| !(s.is_finite() && s > 0.0)) {
        return Err(Error::InvalidArgument(format!(
            "range stds must be positive, got {bad}"
        )));
    }
    let values: Vec<f64> = position_error_stds
        .iter()
        .zip(mean_range_stds)
        .map(|(s, r)| s / r)
        .collect();
    let mean_dop = values.iter().sum::<f64>() / values.len() as f64;
    Ok(DopField { values, mean_dop })
}
