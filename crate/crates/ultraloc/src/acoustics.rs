//! Chirp transmission, propagation and correlation-based range estimation.
//!
//! Anchors transmit a linear up-chirp; the mobile node captures a short
//! window at a fixed delay after the synchronized transmission and
//! cross-correlates it against the full chirp (pulse compression). The
//! smoothed correlation magnitude locates the peak region and the raw
//! magnitude pins the exact lag within it, which keeps the estimate at the
//! sample-quantization floor when the signal is clean while the smoothing
//! rejects spurious side peaks under noise and reverberation.
//!
//! Propagation is modeled either at signal level (direct path, optionally
//! with box image-source reflections) or with the abstract Gaussian range
//! model `r_j = d_j + n_j` used by the bounds analysis.

use nalgebra::{DMatrix, Point3, Unit, Vector3};
use rand::Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::room::{cardioid_gain, AnchorLayout, MobileGrid, Room};

/// Sampling, chirp and capture-window parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct SignalConfig {
    pub sample_rate_hz: f64,
    pub chirp_f0_hz: f64,
    pub chirp_f1_hz: f64,
    pub chirp_duration_s: f64,
    pub capture_duration_s: f64,
    /// Capture window start, seconds after the synchronized transmit start.
    pub capture_start_s: f64,
    /// Cutoff of the moving-average smoother applied to the correlation
    /// magnitude; the averaging width is `sample_rate / cutoff` samples.
    pub lpf_cutoff_hz: f64,
    pub speed_of_sound_mps: f64,
}

impl Default for SignalConfig {
    fn default() -> Self {
        SignalConfig {
            sample_rate_hz: 192_000.0,
            chirp_f0_hz: 25_000.0,
            chirp_f1_hz: 45_000.0,
            chirp_duration_s: 0.030,
            capture_duration_s: 0.001,
            capture_start_s: 0.028,
            lpf_cutoff_hz: 2_000.0,
            speed_of_sound_mps: 343.0,
        }
    }
}

impl SignalConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.chirp_f0_hz > 0.0 && self.chirp_f1_hz > self.chirp_f0_hz) {
            return Err(Error::InvalidConfig(format!(
                "need chirp_f1 > chirp_f0 > 0, got f0={} f1={}",
                self.chirp_f0_hz, self.chirp_f1_hz
            )));
        }
        if self.sample_rate_hz <= 2.0 * self.chirp_f1_hz {
            return Err(Error::InvalidConfig(format!(
                "sample rate {} must exceed twice the top chirp frequency {}",
                self.sample_rate_hz, self.chirp_f1_hz
            )));
        }
        for (name, v) in [
            ("chirp_duration_s", self.chirp_duration_s),
            ("capture_duration_s", self.capture_duration_s),
            ("capture_start_s", self.capture_start_s),
            ("lpf_cutoff_hz", self.lpf_cutoff_hz),
            ("speed_of_sound_mps", self.speed_of_sound_mps),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidConfig(format!("{name} must be positive, got {v}")));
            }
        }
        if self.capture_start_s + self.capture_duration_s > self.chirp_duration_s {
            return Err(Error::InvalidConfig(format!(
                "capture window [{}, {}] s must end within the {} s chirp",
                self.capture_start_s,
                self.capture_start_s + self.capture_duration_s,
                self.chirp_duration_s
            )));
        }
        Ok(())
    }

    /// Additionally require that the capture window lies inside the arriving
    /// chirp for every in-room distance.
    pub fn validate_for_room(&self, room: &Room) -> Result<()> {
        self.validate()?;
        let max_delay = room.max_distance() / self.speed_of_sound_mps;
        if self.capture_start_s < max_delay {
            return Err(Error::InvalidConfig(format!(
                "capture_start {} s is below the worst-case room delay {:.4} s",
                self.capture_start_s, max_delay
            )));
        }
        Ok(())
    }

    pub fn chirp_samples(&self) -> usize {
        (self.chirp_duration_s * self.sample_rate_hz).round() as usize
    }

    pub fn capture_samples(&self) -> usize {
        (self.capture_duration_s * self.sample_rate_hz).round() as usize
    }

    pub fn capture_start_samples(&self) -> i64 {
        (self.capture_start_s * self.sample_rate_hz).round() as i64
    }

    /// One sample of range quantization, `c / fs`.
    pub fn range_quantum(&self) -> f64 {
        self.speed_of_sound_mps / self.sample_rate_hz
    }

    fn smoothing_width(&self) -> usize {
        let w = (self.sample_rate_hz / self.lpf_cutoff_hz).round().max(1.0) as usize;
        if w.is_multiple_of(2) {
            w + 1
        } else {
            w
        }
    }
}

/// How ranges are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PropagationMode {
    /// Gaussian range model `r = d + n`, no waveforms.
    AbstractGaussian,
    /// Signal-level simulation, line-of-sight only.
    DirectPath,
    /// Signal-level simulation with box image-source reflections.
    ImageSource,
}

/// Propagation and noise parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct PropagationModel {
    pub mode: PropagationMode,
    /// Maximum number of wall bounces in image-source mode.
    pub reflection_order: usize,
    /// Frequency-independent amplitude reflection coefficient.
    pub wall_reflection_coeff: f64,
    /// SNR at the grid position closest to each anchor, decibels.
    pub snr_db: f64,
}

impl Default for PropagationModel {
    fn default() -> Self {
        PropagationModel {
            mode: PropagationMode::DirectPath,
            reflection_order: 1,
            wall_reflection_coeff: 0.5,
            snr_db: 30.0,
        }
    }
}

impl PropagationModel {
    pub fn validate(&self) -> Result<()> {
        if self.mode == PropagationMode::ImageSource && self.reflection_order == 0 {
            return Err(Error::InvalidConfig(
                "image_source mode requires reflection_order >= 1".into(),
            ));
        }
        if !(0.0..1.0).contains(&self.wall_reflection_coeff) {
            return Err(Error::InvalidConfig(format!(
                "wall_reflection_coeff must lie in [0, 1), got {}",
                self.wall_reflection_coeff
            )));
        }
        Ok(())
    }
}

/// Estimated and true ranges for one noise draw: anchors by rows, mobile
/// positions by columns.
#[derive(Debug, Clone)]
pub struct RangingRealization {
    pub ranges: DMatrix<f64>,
    pub true_ranges: DMatrix<f64>,
    /// Per-anchor noise standard deviation used for this draw (signal
    /// amplitude in signal modes, range sigma in abstract mode).
    pub noise_sigma_per_anchor: Vec<f64>,
}

impl RangingRealization {
    pub fn new(
        ranges: DMatrix<f64>,
        true_ranges: DMatrix<f64>,
        noise_sigma_per_anchor: Vec<f64>,
    ) -> Result<Self> {
        if ranges.shape() != true_ranges.shape() {
            return Err(Error::InvalidArgument(format!(
                "range matrix {:?} does not match true range matrix {:?}",
                ranges.shape(),
                true_ranges.shape()
            )));
        }
        if noise_sigma_per_anchor.len() != ranges.nrows() {
            return Err(Error::InvalidArgument(format!(
                "{} sigmas for {} anchors",
                noise_sigma_per_anchor.len(),
                ranges.nrows()
            )));
        }
        if true_ranges.iter().any(|&d| !(d.is_finite() && d > 0.0)) {
            return Err(Error::InvalidArgument(
                "true ranges must all be positive".into(),
            ));
        }
        Ok(RangingRealization {
            ranges,
            true_ranges,
            noise_sigma_per_anchor,
        })
    }
}

/// Generate the transmitted linear up-chirp with unit peak amplitude.
pub fn generate_chirp(cfg: &SignalConfig) -> Result<Vec<f64>> {
    cfg.validate()?;
    let n = cfg.chirp_samples();
    let slope = (cfg.chirp_f1_hz - cfg.chirp_f0_hz) / cfg.chirp_duration_s;
    Ok((0..n)
        .map(|i| {
            let t = i as f64 / cfg.sample_rate_hz;
            (std::f64::consts::TAU * (cfg.chirp_f0_hz * t + 0.5 * slope * t * t)).sin()
        })
        .collect())
}

/// One propagation path from a (possibly mirrored) source to the mobile.
#[derive(Debug, Clone)]
pub struct PropagationPath {
    pub source: Point3<f64>,
    pub directivity: Unit<Vector3<f64>>,
    pub bounces: usize,
}

/// Enumerate the direct path plus all image sources of a box room up to
/// `order` bounces. Mirroring a source across a wall also mirrors its
/// directivity vector.
pub fn image_sources(
    anchor: &Point3<f64>,
    directivity: &Unit<Vector3<f64>>,
    room: &Room,
    order: usize,
) -> Vec<PropagationPath> {
    let dims = room.dims();
    let order = order as i64;
    let mut paths = Vec::new();
    // Image x-coordinate family: (1 - 2q) x + 2 m L with q in {0,1}; the
    // bounce count off the two x-walls is |2m - q|, and likewise per axis.
    let span = -(order + 1) / 2 - 1..=(order + 1) / 2 + 1;
    for mx in span.clone() {
        for q in 0..=1i64 {
            let bx = (2 * mx - q).abs();
            if bx > order {
                continue;
            }
            for my in span.clone() {
                for j in 0..=1i64 {
                    let by = (2 * my - j).abs();
                    if bx + by > order {
                        continue;
                    }
                    for mz in span.clone() {
                        for k in 0..=1i64 {
                            let bz = (2 * mz - k).abs();
                            let bounces = bx + by + bz;
                            if bounces > order {
                                continue;
                            }
                            let flip = Vector3::new(
                                (1 - 2 * q) as f64,
                                (1 - 2 * j) as f64,
                                (1 - 2 * k) as f64,
                            );
                            let source = Point3::new(
                                flip.x * anchor.x + 2.0 * mx as f64 * dims.x,
                                flip.y * anchor.y + 2.0 * my as f64 * dims.y,
                                flip.z * anchor.z + 2.0 * mz as f64 * dims.z,
                            );
                            let d = directivity.into_inner();
                            let mirrored = Unit::new_unchecked(Vector3::new(
                                flip.x * d.x,
                                flip.y * d.y,
                                flip.z * d.z,
                            ));
                            paths.push(PropagationPath {
                                source,
                                directivity: mirrored,
                                bounces: bounces as usize,
                            });
                        }
                    }
                }
            }
        }
    }
    paths
}

/// Simulate the captured window at the mobile for one anchor transmission.
///
/// Each path contributes `gain * chirp(t - path_delay)` with
/// `gain = cardioid(directivity, departure) * coeff^bounces / path_length`
/// and the delay rounded to the nearest sample; AWGN of `noise_std` is added
/// per sample. The capture window must lie inside the arriving chirp for the
/// direct path, otherwise the geometry is infeasible for ranging.
#[allow(clippy::too_many_arguments)]
pub fn simulate_reception(
    chirp: &[f64],
    anchor: &Point3<f64>,
    directivity: &Unit<Vector3<f64>>,
    mobile: &Point3<f64>,
    room: &Room,
    model: &PropagationModel,
    cfg: &SignalConfig,
    noise_std: f64,
    rng: &mut impl Rng,
) -> Result<Vec<f64>> {
    model.validate()?;
    if (mobile - anchor).norm() < 1e-12 {
        return Err(Error::InvalidArgument(
            "anchor and mobile positions coincide".into(),
        ));
    }
    let order = match model.mode {
        PropagationMode::DirectPath => 0,
        PropagationMode::ImageSource => model.reflection_order,
        PropagationMode::AbstractGaussian => {
            return Err(Error::InvalidArgument(
                "abstract_gaussian mode has no signal-level reception; \
                 use draw_abstract_ranges"
                    .into(),
            ))
        }
    };
    let n0 = cfg.capture_start_samples();
    let nw = cfg.capture_samples();
    let nc = chirp.len() as i64;

    // Feasibility of the direct path.
    let direct = (mobile - anchor).norm();
    let direct_delay = (direct / cfg.speed_of_sound_mps * cfg.sample_rate_hz).round() as i64;
    if n0 < direct_delay || n0 + nw as i64 > direct_delay + nc {
        return Err(Error::InfeasibleCapture {
            window_start_s: cfg.capture_start_s,
            window_end_s: cfg.capture_start_s + cfg.capture_duration_s,
            arrival_s: direct / cfg.speed_of_sound_mps,
        });
    }

    let mut window = vec![0.0f64; nw];
    for path in image_sources(anchor, directivity, room, order) {
        let vec = mobile - path.source;
        let dist = vec.norm();
        if dist < 1e-12 {
            continue;
        }
        let departure = vec / dist;
        let gain = cardioid_gain(&path.directivity, &departure)?
            * model.wall_reflection_coeff.powi(path.bounces as i32)
            / dist;
        let delay = (dist / cfg.speed_of_sound_mps * cfg.sample_rate_hz).round() as i64;
        for (k, w) in window.iter_mut().enumerate() {
            let idx = n0 + k as i64 - delay;
            if (0..nc).contains(&idx) {
                *w += gain * chirp[idx as usize];
            }
        }
    }
    if noise_std > 0.0 {
        let normal = Normal::new(0.0, noise_std).map_err(|e| {
            Error::InvalidArgument(format!("bad noise std {noise_std}: {e}"))
        })?;
        for w in &mut window {
            *w += normal.sample(rng);
        }
    }
    Ok(window)
}

/// Noise standard deviation such that the direct-path signal at the grid
/// position closest to this anchor has exactly `model.snr_db` of SNR. The
/// same value is reused at every position for that anchor.
pub fn calibrate_noise(
    chirp: &[f64],
    anchor: &Point3<f64>,
    directivity: &Unit<Vector3<f64>>,
    grid: &MobileGrid,
    room: &Room,
    model: &PropagationModel,
    cfg: &SignalConfig,
) -> Result<f64> {
    if grid.is_empty() {
        return Err(Error::InvalidArgument("empty mobile grid".into()));
    }
    let closest = grid
        .positions()
        .iter()
        .min_by(|a, b| (*a - anchor).norm().total_cmp(&(*b - anchor).norm()))
        .expect("grid is non-empty");
    let clean = PropagationModel {
        mode: PropagationMode::DirectPath,
        ..model.clone()
    };
    // Noise-free direct-path window; rng is untouched when noise_std is 0.
    let window = simulate_reception(
        chirp,
        anchor,
        directivity,
        closest,
        room,
        &clean,
        cfg,
        0.0,
        &mut rand::rngs::mock::StepRng::new(0, 0),
    )?;
    let rms = (window.iter().map(|w| w * w).sum::<f64>() / window.len() as f64).sqrt();
    Ok(rms / 10f64.powf(model.snr_db / 20.0))
}

/// Correlation-based range estimate from a captured window.
///
/// The window is cross-correlated against the full chirp over all lags and
/// the magnitude is smoothed by a centered moving average of width
/// `sample_rate / lpf_cutoff` (rounded odd, partial windows normalized).
/// The smoothed maximum locates the peak region; the raw magnitude maximum
/// within half a smoothing width of it gives the lag `l`, from which
/// `range = c * (capture_start - l / sample_rate)`.
pub fn estimate_range(captured: &[f64], chirp: &[f64], cfg: &SignalConfig) -> Result<f64> {
    if captured.len() >= chirp.len() {
        return Err(Error::InvalidArgument(format!(
            "captured window ({} samples) must be shorter than the chirp ({})",
            captured.len(),
            chirp.len()
        )));
    }
    if captured.is_empty() {
        return Err(Error::InvalidArgument("empty captured window".into()));
    }
    if captured.iter().all(|&w| w == 0.0) {
        return Err(Error::NoPeak);
    }
    let nw = captured.len();
    let nc = chirp.len();
    // mag[i] = |sum_k captured[k] * chirp[k + lag]| at lag = i - (nw - 1).
    let n_lags = nc + nw - 1;
    let mut mag = vec![0.0f64; n_lags];
    for (i, m) in mag.iter_mut().enumerate() {
        let lag = i as i64 - (nw as i64 - 1);
        let k_lo = (-lag).max(0) as usize;
        let k_hi = nw.min((nc as i64 - lag).max(0) as usize);
        let mut acc = 0.0;
        for k in k_lo..k_hi {
            acc += captured[k] * chirp[(k as i64 + lag) as usize];
        }
        *m = acc.abs();
    }

    let width = cfg.smoothing_width();
    let coarse = if width <= 1 {
        argmax(&mag)
    } else {
        let half = width / 2;
        // Centered moving average with edge windows normalized by their
        // actual length.
        let mut prefix = vec![0.0f64; n_lags + 1];
        for (i, &m) in mag.iter().enumerate() {
            prefix[i + 1] = prefix[i] + m;
        }
        let smoothed: Vec<f64> = (0..n_lags)
            .map(|i| {
                let lo = i.saturating_sub(half);
                let hi = (i + half + 1).min(n_lags);
                (prefix[hi] - prefix[lo]) / (hi - lo) as f64
            })
            .collect();
        argmax(&smoothed)
    };
    let half = width / 2;
    let lo = coarse.saturating_sub(half);
    let hi = (coarse + half + 1).min(n_lags);
    let fine = lo + argmax(&mag[lo..hi]);

    let lag = fine as i64 - (nw as i64 - 1);
    let tau = cfg.capture_start_s - lag as f64 / cfg.sample_rate_hz;
    Ok(cfg.speed_of_sound_mps * tau)
}

fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// Draw one realization of the abstract Gaussian range model over the whole
/// layout and grid: `r_jp = ||p - a_j|| + n_jp` with independent noise of
/// per-anchor standard deviation `sigmas[j]`.
pub fn draw_abstract_ranges(
    layout: &AnchorLayout,
    grid: &MobileGrid,
    sigmas: &[f64],
    rng: &mut impl Rng,
) -> Result<RangingRealization> {
    if sigmas.len() != layout.len() {
        return Err(Error::InvalidArgument(format!(
            "{} sigmas for {} anchors",
            sigmas.len(),
            layout.len()
        )));
    }
    if let Some(bad) = sigmas.iter().find(|&&s| s < 0.0) {
        return Err(Error::InvalidArgument(format!(
            "sigmas must be non-negative, got {bad}"
        )));
    }
    let m = layout.len();
    let p = grid.len();
    let mut true_ranges = DMatrix::zeros(m, p);
    let mut ranges = DMatrix::zeros(m, p);
    for (j, anchor) in layout.anchors().iter().enumerate() {
        let noise = if sigmas[j] > 0.0 {
            Some(Normal::new(0.0, sigmas[j]).expect("validated sigma"))
        } else {
            None
        };
        for (i, pos) in grid.positions().iter().enumerate() {
            let d = (pos - anchor).norm();
            true_ranges[(j, i)] = d;
            ranges[(j, i)] = d + noise.as_ref().map_or(0.0, |n| n.sample(rng));
        }
    }
    RangingRealization::new(ranges, true_ranges, sigmas.to_vec())
}
