//! Particle swarm search over constrained anchor layouts.
//!
//! A particle stacks the `M` anchor positions into one `3M` vector. The
//! velocity update
//!
//! ```text
//! v <- w v + c1 r1 .* (p_best - x) + c2 r2 .* (g_best - x)
//! x <- x + v
//! ```
//!
//! uses fresh uniform random vectors `r1`, `r2` per component. After every
//! move each anchor is projected back onto the nearest allowed room plane —
//! which lets anchors jump between planes — and its directivity is re-aimed
//! at the room centroid before the layout is costed. Velocity components the
//! projection overrode are reflected, so particles bounce off surface edges
//! rather than accumulating there. Personal and global bests update only on
//! strict improvement, so the best-cost history is non-increasing.
//!
//! An exhaustive subset search over a finite candidate set doubles as the
//! small-instance oracle for the swarm.

use itertools::Itertools;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng::{domain, substream};
use crate::room::{AnchorLayout, Plane, Room};

/// Swarm hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PsoHyperParams {
    /// Inertia weight.
    pub omega: f64,
    /// Cognitive (personal-best) coefficient.
    pub c1: f64,
    /// Social (global-best) coefficient.
    pub c2: f64,
    pub swarm_size: usize,
    pub max_iterations: usize,
    /// Relative improvement of the best cost over `stop_patience` iterations
    /// below which the search stops.
    pub stop_threshold: f64,
    pub stop_patience: usize,
}

impl Default for PsoHyperParams {
    fn default() -> Self {
        // Constriction-equivalent coefficients; the swarm size and iteration
        // cap follow the 15-particle, 40-iteration reference setup.
        PsoHyperParams {
            omega: 0.729,
            c1: 1.49445,
            c2: 1.49445,
            swarm_size: 15,
            max_iterations: 40,
            stop_threshold: 1e-3,
            stop_patience: 5,
        }
    }
}

impl PsoHyperParams {
    pub fn validate(&self) -> Result<()> {
        if self.swarm_size < 2 {
            return Err(Error::InvalidConfig(format!(
                "swarm_size must be at least 2, got {}",
                self.swarm_size
            )));
        }
        if !(0.0..=1.2).contains(&self.omega) {
            return Err(Error::InvalidConfig(format!(
                "omega must lie in [0, 1.2], got {}",
                self.omega
            )));
        }
        if self.c1 < 0.0 || self.c2 < 0.0 {
            return Err(Error::InvalidConfig(format!(
                "c1 and c2 must be non-negative, got {} and {}",
                self.c1, self.c2
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig("max_iterations must be positive".into()));
        }
        Ok(())
    }
}

/// One candidate layout in the swarm.
#[derive(Debug, Clone)]
pub struct Particle {
    /// Stacked anchor coordinates, `3M` values.
    pub x: Vec<f64>,
    pub v: Vec<f64>,
    pub p_best: Vec<f64>,
    pub p_best_cost: f64,
    /// Plane assignment of each anchor after the latest projection.
    pub planes: Vec<Plane>,
}

/// Swarm state after some number of iterations.
#[derive(Debug, Clone)]
pub struct SwarmState {
    pub particles: Vec<Particle>,
    pub g_best: Vec<f64>,
    pub g_best_cost: f64,
    pub iteration: usize,
    /// Best cost after initialization and after every iteration.
    pub cost_history: Vec<f64>,
}

/// Per-iteration snapshot kept by [`optimize`].
#[derive(Debug, Clone)]
pub struct IterationRecord {
    pub iteration: usize,
    pub g_best_cost: f64,
    pub layout: AnchorLayout,
}

/// Result of a swarm run.
#[derive(Debug)]
pub struct OptimizeOutcome {
    pub layout: AnchorLayout,
    pub state: SwarmState,
    pub history: Vec<IterationRecord>,
}

/// Apportion `m` anchors to the allowed planes proportionally to plane area.
///
/// Planes are visited from largest to smallest (ties in the fixed plane
/// order) and each receives its share of the still-unassigned anchors,
/// rounded to nearest; the last plane takes the remainder. For the testbed
/// this puts one anchor on each wall and two on the ceiling when `m = 4`.
pub fn plane_apportionment(room: &Room, m: usize) -> Vec<(Plane, usize)> {
    let mut planes: Vec<Plane> = room.allowed_planes().to_vec();
    planes.sort_by(|a, b| {
        room.plane_area(*b)
            .total_cmp(&room.plane_area(*a))
            .then(a.cmp(b))
    });
    let mut remaining_m = m;
    let mut remaining_area: f64 = planes.iter().map(|&p| room.plane_area(p)).sum();
    let mut quota: Vec<(Plane, usize)> = Vec::with_capacity(planes.len());
    for (i, &plane) in planes.iter().enumerate() {
        let area = room.plane_area(plane);
        let take = if i + 1 == planes.len() {
            remaining_m
        } else {
            // The epsilon keeps exact .5 shares (jittered by binary area
            // arithmetic) rounding up, e.g. 5 anchors over two equal walls.
            let share = remaining_m as f64 * area / remaining_area;
            ((share + 1e-9).round() as usize).min(remaining_m)
        };
        quota.push((plane, take));
        remaining_m -= take;
        remaining_area -= area;
    }
    // Report in canonical plane order.
    quota.sort_by_key(|(p, _)| *p);
    quota
}

fn decode(room: &Room, x: &[f64]) -> Result<AnchorLayout> {
    AnchorLayout::from_stacked(room, x)
}

fn evaluate_cost<F>(cost_fn: &F, layout: &AnchorLayout) -> f64
where
    F: Fn(&AnchorLayout) -> Result<f64> + Sync,
{
    match cost_fn(layout) {
        Ok(c) if c.is_finite() => c,
        _ => f64::INFINITY,
    }
}

/// Initialize a swarm: anchors apportioned to planes by area, placed
/// uniformly at random on each plane's anchor surface, zero velocities,
/// directivities aimed at the centroid, costs evaluated.
pub fn init_swarm<F>(
    room: &Room,
    m: usize,
    hp: &PsoHyperParams,
    cost_fn: &F,
    master_seed: u64,
) -> Result<SwarmState>
where
    F: Fn(&AnchorLayout) -> Result<f64> + Sync,
{
    hp.validate()?;
    if m < 4 {
        return Err(Error::InvalidArgument(format!(
            "need at least 4 anchors, got {m}"
        )));
    }
    let quota = plane_apportionment(room, m);
    let seeds: Vec<usize> = (0..hp.swarm_size).collect();
    let particles: Vec<Particle> = seeds
        .par_iter()
        .map(|&i| {
            let mut rng = substream(master_seed, &[domain::PSO_INIT, i as u64]);
            let mut x = Vec::with_capacity(3 * m);
            let mut planes = Vec::with_capacity(m);
            for &(plane, count) in &quota {
                let surface = room.anchor_surface(plane);
                for _ in 0..count {
                    let p = surface.sample(&mut rng);
                    x.extend_from_slice(p.coords.as_slice());
                    planes.push(plane);
                }
            }
            debug_assert_eq!(planes.len(), m);
            let layout = decode(room, &x).expect("sampled anchors lie on their surfaces");
            let cost = evaluate_cost(cost_fn, &layout);
            Particle {
                p_best: x.clone(),
                p_best_cost: cost,
                v: vec![0.0; 3 * m],
                x,
                planes,
            }
        })
        .collect();
    // Deterministic reduction in particle order.
    let mut g_best = particles[0].p_best.clone();
    let mut g_best_cost = particles[0].p_best_cost;
    for p in &particles[1..] {
        if p.p_best_cost < g_best_cost {
            g_best_cost = p.p_best_cost;
            g_best = p.p_best.clone();
        }
    }
    Ok(SwarmState {
        particles,
        g_best,
        g_best_cost,
        iteration: 0,
        cost_history: vec![g_best_cost],
    })
}

/// Advance the swarm by one iteration.
pub fn step<F>(
    room: &Room,
    swarm: &mut SwarmState,
    hp: &PsoHyperParams,
    cost_fn: &F,
    master_seed: u64,
) -> Result<()>
where
    F: Fn(&AnchorLayout) -> Result<f64> + Sync,
{
    let t = swarm.iteration + 1;
    let dims = room.dims();
    // Per-component velocity clamp: half the room extent per coordinate.
    let clamp = [dims.x / 2.0, dims.y / 2.0, dims.z / 2.0];
    let g_best = swarm.g_best.clone();

    struct Moved {
        x: Vec<f64>,
        v: Vec<f64>,
        planes: Vec<Plane>,
        cost: f64,
    }

    let moved: Vec<Moved> = swarm
        .particles
        .par_iter()
        .enumerate()
        .map(|(i, particle)| {
            let mut rng = substream(master_seed, &[domain::PSO_STEP, t as u64, i as u64]);
            let n = particle.x.len();
            let r1: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
            let r2: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
            let mut v = vec![0.0; n];
            let mut raw = vec![0.0; n];
            for c in 0..n {
                let vel = hp.omega * particle.v[c]
                    + hp.c1 * r1[c] * (particle.p_best[c] - particle.x[c])
                    + hp.c2 * r2[c] * (g_best[c] - particle.x[c]);
                let lim = clamp[c % 3];
                v[c] = vel.clamp(-lim, lim);
                raw[c] = particle.x[c] + v[c];
            }
            let layout = decode(room, &raw).expect("projection yields a feasible layout");
            // Projection may have moved the anchors; keep x consistent and
            // reflect the velocity components the projection overrode, so a
            // particle pinned against a surface edge bounces back into the
            // rectangle instead of freezing there.
            let x = layout.to_stacked();
            for c in 0..n {
                if (x[c] - raw[c]).abs() > 1e-12 {
                    v[c] = -v[c];
                }
            }
            let cost = evaluate_cost(cost_fn, &layout);
            Moved {
                x,
                v,
                planes: layout.plane_of().to_vec(),
                cost,
            }
        })
        .collect();

    for (particle, m) in swarm.particles.iter_mut().zip(moved) {
        particle.x = m.x;
        particle.v = m.v;
        particle.planes = m.planes;
        if m.cost < particle.p_best_cost {
            particle.p_best_cost = m.cost;
            particle.p_best = particle.x.clone();
        }
    }
    for p in &swarm.particles {
        if p.p_best_cost < swarm.g_best_cost {
            swarm.g_best_cost = p.p_best_cost;
            swarm.g_best = p.p_best.clone();
        }
    }
    swarm.iteration = t;
    swarm.cost_history.push(swarm.g_best_cost);
    Ok(())
}

/// Run the swarm until the stopping criterion or the iteration cap.
///
/// Stops early once the relative improvement of the best cost over
/// `stop_patience` iterations falls below `stop_threshold`. Returns the
/// decoded best layout and per-iteration snapshots.
pub fn optimize<F>(
    room: &Room,
    m: usize,
    hp: &PsoHyperParams,
    cost_fn: &F,
    master_seed: u64,
) -> Result<OptimizeOutcome>
where
    F: Fn(&AnchorLayout) -> Result<f64> + Sync,
{
    let mut swarm = init_swarm(room, m, hp, cost_fn, master_seed)?;
    let mut history = vec![IterationRecord {
        iteration: 0,
        g_best_cost: swarm.g_best_cost,
        layout: decode(room, &swarm.g_best)?,
    }];
    while swarm.iteration < hp.max_iterations {
        step(room, &mut swarm, hp, cost_fn, master_seed)?;
        history.push(IterationRecord {
            iteration: swarm.iteration,
            g_best_cost: swarm.g_best_cost,
            layout: decode(room, &swarm.g_best)?,
        });
        let t = swarm.iteration;
        if t >= hp.stop_patience {
            let old = swarm.cost_history[t - hp.stop_patience];
            let new = swarm.cost_history[t];
            if old.is_finite() && old > 0.0 && (old - new) / old < hp.stop_threshold {
                break;
            }
        }
    }
    if !swarm.g_best_cost.is_finite() {
        return Err(Error::OptimizationFailed(
            "no particle ever produced a finite cost".into(),
        ));
    }
    Ok(OptimizeOutcome {
        layout: decode(room, &swarm.g_best)?,
        state: swarm,
        history,
    })
}

/// Number of `m`-subsets of `n` candidates, or `None` on overflow.
pub fn combination_count(n: usize, m: usize) -> Option<u128> {
    if m > n {
        return Some(0);
    }
    let m = m.min(n - m);
    let mut acc: u128 = 1;
    for i in 0..m {
        acc = acc.checked_mul((n - i) as u128)?;
        acc /= (i + 1) as u128;
    }
    Some(acc)
}

/// Result of an exhaustive subset search.
#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub best_indices: Vec<usize>,
    pub best_cost: f64,
    /// Cost of every evaluated subset, in lexicographic enumeration order.
    pub table: Vec<(Vec<usize>, f64)>,
}

/// Evaluate every `m`-subset of the candidate positions and return the best,
/// refusing up front when the combination count exceeds `budget`.
pub fn extensive_search<F>(
    room: &Room,
    candidates: &[(nalgebra::Point3<f64>, Plane)],
    m: usize,
    cost_fn: &F,
    budget: u128,
) -> Result<SearchOutcome>
where
    F: Fn(&AnchorLayout) -> Result<f64> + Sync,
{
    let n = candidates.len();
    if m > n {
        return Err(Error::InvalidArgument(format!(
            "cannot choose {m} anchors from {n} candidates"
        )));
    }
    let combinations = combination_count(n, m).ok_or(Error::BudgetExceeded {
        combinations: u128::MAX,
        budget,
    })?;
    if combinations > budget {
        return Err(Error::BudgetExceeded {
            combinations,
            budget,
        });
    }
    let subsets: Vec<Vec<usize>> = (0..n).combinations(m).collect();
    let table: Vec<(Vec<usize>, f64)> = subsets
        .into_par_iter()
        .map(|subset| {
            let anchors = subset.iter().map(|&i| candidates[i].0).collect();
            let planes = subset.iter().map(|&i| candidates[i].1).collect();
            let cost = match AnchorLayout::new(room, anchors, planes) {
                Ok(layout) => evaluate_cost(cost_fn, &layout),
                Err(_) => f64::INFINITY,
            };
            (subset, cost)
        })
        .collect();
    let (best_indices, best_cost) = table
        .iter()
        .min_by(|a, b| a.1.total_cmp(&b.1))
        .map(|(s, c)| (s.clone(), *c))
        .ok_or_else(|| Error::OptimizationFailed("empty search table".into()))?;
    Ok(SearchOutcome {
        best_indices,
        best_cost,
        table,
    })
}

/// Map each anchor of a stacked layout to the nearest candidate index.
pub fn snap_to_candidates(
    stacked: &[f64],
    candidates: &[(nalgebra::Point3<f64>, Plane)],
) -> Vec<usize> {
    stacked
        .chunks_exact(3)
        .map(|c| {
            let p = nalgebra::Point3::new(c[0], c[1], c[2]);
            candidates
                .iter()
                .enumerate()
                .min_by(|(_, a), (_, b)| (p - a.0).norm().total_cmp(&(p - b.0).norm()))
                .map(|(i, _)| i)
                .expect("candidate set is non-empty")
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use nalgebra::Point3;

    fn testbed() -> Room {
        Room::testbed()
    }

    /// A feasible layout away from surface edges, anchor slots in the same
    /// plane order the swarm initializes with.
    fn interior_target(room: &Room) -> AnchorLayout {
        AnchorLayout::new(
            room,
            vec![
                Point3::new(2.0, 0.03, 1.5),
                Point3::new(6.0, 3.97, 1.2),
                Point3::new(2.5, 1.5, 2.37),
                Point3::new(5.5, 2.5, 2.37),
            ],
            vec![Plane::WallY0, Plane::WallYMax, Plane::Ceiling, Plane::Ceiling],
        )
        .unwrap()
    }

    /// Smooth feasible-target cost used by the mechanics tests.
    fn sphere_cost(target: &AnchorLayout) -> impl Fn(&AnchorLayout) -> Result<f64> + Sync + '_ {
        move |layout: &AnchorLayout| {
            Ok(layout
                .to_stacked()
                .iter()
                .zip(target.to_stacked())
                .map(|(a, b)| (a - b) * (a - b))
                .sum())
        }
    }

    #[test]
    fn apportionment_matches_surface_ratios() {
        let room = testbed();
        // Ceiling 32 m^2, each wall 19.2 m^2.
        assert_eq!(
            plane_apportionment(&room, 4),
            vec![(Plane::WallY0, 1), (Plane::WallYMax, 1), (Plane::Ceiling, 2)]
        );
        assert_eq!(
            plane_apportionment(&room, 10),
            vec![(Plane::WallY0, 3), (Plane::WallYMax, 2), (Plane::Ceiling, 5)]
        );
        let total: usize = plane_apportionment(&room, 7).iter().map(|(_, c)| c).sum();
        assert_eq!(total, 7);
    }

    #[test]
    fn init_respects_constraints() {
        let room = testbed();
        let hp = PsoHyperParams::default();
        let cost = |_: &AnchorLayout| Ok(1.0);
        let swarm = init_swarm(&room, 4, &hp, &cost, 7).unwrap();
        assert_eq!(swarm.particles.len(), 15);
        for p in &swarm.particles {
            assert!(p.v.iter().all(|&v| v == 0.0));
            let layout = AnchorLayout::from_stacked(&room, &p.x).unwrap();
            // from_stacked validates surfaces; also check plane bookkeeping.
            assert_eq!(layout.plane_of(), p.planes.as_slice());
        }
        assert!(init_swarm(&room, 3, &hp, &cost, 7).is_err());
    }

    #[test]
    fn null_update_keeps_particles_fixed() {
        let room = testbed();
        let hp = PsoHyperParams {
            omega: 0.0,
            c1: 0.0,
            c2: 0.0,
            ..Default::default()
        };
        let target = AnchorLayout::corner_reference(&room).unwrap();
        let cost = sphere_cost(&target);
        let mut swarm = init_swarm(&room, 4, &hp, &cost, 8).unwrap();
        let before: Vec<Vec<f64>> = swarm.particles.iter().map(|p| p.x.clone()).collect();
        step(&room, &mut swarm, &hp, &cost, 8).unwrap();
        for (p, b) in swarm.particles.iter().zip(&before) {
            assert_eq!(&p.x, b);
            assert!(p.v.iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn attraction_vanishes_at_shared_best() {
        let room = testbed();
        let hp = PsoHyperParams {
            omega: 0.5,
            c1: 1.7,
            c2: 1.3,
            ..Default::default()
        };
        let cost = |_: &AnchorLayout| Ok(1.0);
        let mut swarm = init_swarm(&room, 4, &hp, &cost, 9).unwrap();
        // Force x = p_best = g_best with a nonzero velocity memory at an
        // interior layout, so only the plane-normal components get projected.
        let shared = interior_target(&room).to_stacked();
        for p in &mut swarm.particles {
            p.x = shared.clone();
            p.p_best = shared.clone();
            p.v = vec![0.25; shared.len()];
        }
        swarm.g_best = shared.clone();
        step(&room, &mut swarm, &hp, &cost, 9).unwrap();
        let normal_axis = [1usize, 1, 2, 2]; // y for walls, z for ceiling
        for p in &swarm.particles {
            // v <- omega * v exactly: attraction terms vanish. In-plane
            // components keep the sign; the normal component bounced.
            for (c, &v) in p.v.iter().enumerate() {
                let expected = if c % 3 == normal_axis[c / 3] { -0.125 } else { 0.125 };
                assert!((v - expected).abs() < 1e-12, "component {c}: {v}");
            }
        }
    }

    #[test]
    fn sphere_benchmark_converges_over_seeds() {
        let room = testbed();
        let hp = PsoHyperParams {
            max_iterations: 100,
            stop_threshold: 0.0,
            ..Default::default()
        };
        let target = interior_target(&room);
        let cost = sphere_cost(&target);
        for seed in 0..20u64 {
            let outcome = optimize(&room, 4, &hp, &cost, seed).unwrap();
            let initial = outcome.state.cost_history[0];
            let final_cost = outcome.state.g_best_cost;
            assert!(
                final_cost < 1e-3 * initial,
                "seed {seed}: {final_cost} vs initial {initial}"
            );
        }
    }

    #[test]
    fn g_best_history_non_increasing() {
        let room = testbed();
        let hp = PsoHyperParams {
            max_iterations: 30,
            stop_threshold: 0.0,
            ..Default::default()
        };
        let target = interior_target(&room);
        let cost = sphere_cost(&target);
        for seed in 0..20u64 {
            let outcome = optimize(&room, 4, &hp, &cost, seed).unwrap();
            for w in outcome.state.cost_history.windows(2) {
                assert!(w[1] <= w[0], "seed {seed}: history increased");
            }
        }
    }

    #[test]
    fn runs_are_bit_identical_for_same_seed() {
        let room = testbed();
        let hp = PsoHyperParams {
            max_iterations: 10,
            ..Default::default()
        };
        let target = AnchorLayout::corner_reference(&room).unwrap();
        let cost = sphere_cost(&target);
        let a = optimize(&room, 4, &hp, &cost, 1234).unwrap();
        let b = optimize(&room, 4, &hp, &cost, 1234).unwrap();
        assert_eq!(a.state.cost_history, b.state.cost_history);
        assert_eq!(a.state.g_best, b.state.g_best);
        for (ra, rb) in a.history.iter().zip(&b.history) {
            assert_eq!(ra.layout.to_stacked(), rb.layout.to_stacked());
        }
    }

    #[test]
    fn particles_contract_toward_g_best_without_inertia_and_cognition() {
        let room = testbed();
        let hp = PsoHyperParams {
            omega: 0.0,
            c1: 0.0,
            c2: 1.49445,
            max_iterations: 15,
            stop_threshold: 0.0,
            ..Default::default()
        };
        let cost = |_: &AnchorLayout| Ok(1.0); // constant: g_best never moves
        let mut medians = Vec::new();
        for seed in 0..20u64 {
            let mut swarm = init_swarm(&room, 4, &hp, &cost, seed).unwrap();
            let dist = |s: &SwarmState| -> f64 {
                let sum: f64 = s
                    .particles
                    .iter()
                    .map(|p| {
                        p.x.iter()
                            .zip(&s.g_best)
                            .map(|(a, b)| (a - b) * (a - b))
                            .sum::<f64>()
                            .sqrt()
                    })
                    .sum();
                sum / s.particles.len() as f64
            };
            let before = dist(&swarm);
            for _ in 0..hp.max_iterations {
                step(&room, &mut swarm, &hp, &cost, seed).unwrap();
            }
            medians.push(dist(&swarm) / before);
        }
        medians.sort_by(|a, b| a.total_cmp(b));
        let median = medians[medians.len() / 2];
        assert!(median < 1.0, "median contraction ratio {median}");
    }

    #[test]
    fn infeasible_costs_become_infinity_and_all_infeasible_fails() {
        let room = testbed();
        let hp = PsoHyperParams {
            max_iterations: 3,
            ..Default::default()
        };
        let cost = |_: &AnchorLayout| -> Result<f64> {
            Err(Error::InvalidArgument("always infeasible".into()))
        };
        let err = optimize(&room, 4, &hp, &cost, 5).unwrap_err();
        assert!(matches!(err, Error::OptimizationFailed(_)));
    }

    #[test]
    fn combination_counts() {
        assert_eq!(combination_count(100, 6), Some(1_192_052_400));
        assert_eq!(combination_count(12, 4), Some(495));
        assert_eq!(combination_count(5, 5), Some(1));
        assert_eq!(combination_count(4, 6), Some(0));
    }

    fn candidate_set(room: &Room) -> Vec<(Point3<f64>, Plane)> {
        let mut out = Vec::new();
        for &plane in room.allowed_planes() {
            let surface = room.anchor_surface(plane);
            for (u, v) in [(0.25, 0.3), (0.5, 0.7), (0.75, 0.4), (0.9, 0.8)] {
                let dims = room.dims();
                let p = match plane {
                    Plane::WallY0 | Plane::WallYMax => {
                        Point3::new(u * dims.x, 0.0, v * dims.z)
                    }
                    Plane::Ceiling => Point3::new(u * dims.x, v * dims.y, 0.0),
                };
                out.push((surface.clamp(&p), plane));
            }
        }
        out
    }

    #[test]
    fn extensive_search_refuses_over_budget() {
        let room = testbed();
        let candidates = candidate_set(&room);
        let cost = |_: &AnchorLayout| Ok(1.0);
        let err = extensive_search(&room, &candidates, 4, &cost, 100).unwrap_err();
        match err {
            Error::BudgetExceeded {
                combinations,
                budget,
            } => {
                assert_eq!(combinations, 495);
                assert_eq!(budget, 100);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn extensive_search_single_combination() {
        let room = testbed();
        let candidates: Vec<_> = candidate_set(&room).into_iter().take(4).collect();
        let target = AnchorLayout::corner_reference(&room).unwrap();
        let cost = sphere_cost(&target);
        let outcome = extensive_search(&room, &candidates, 4, &cost, 1000).unwrap();
        assert_eq!(outcome.best_indices, vec![0, 1, 2, 3]);
        assert_eq!(outcome.table.len(), 1);
    }

    #[test]
    fn extensive_search_finds_planted_optimum() {
        let room = testbed();
        let candidates = candidate_set(&room);
        // Plant the target as a specific subset.
        let planted: Vec<usize> = vec![1, 5, 8, 11];
        let anchors: Vec<Point3<f64>> = planted.iter().map(|&i| candidates[i].0).collect();
        let planes: Vec<Plane> = planted.iter().map(|&i| candidates[i].1).collect();
        let target = AnchorLayout::new(&room, anchors, planes).unwrap();
        let cost = sphere_cost(&target);
        let outcome = extensive_search(&room, &candidates, 4, &cost, 1000).unwrap();
        assert_eq!(outcome.best_indices, planted);
        assert!(outcome.best_cost < 1e-18);
    }

    #[test]
    fn snapping_picks_nearest_candidates() {
        let room = testbed();
        let candidates = candidate_set(&room);
        let stacked: Vec<f64> = [candidates[2].0, candidates[7].0, candidates[9].0, candidates[0].0]
            .iter()
            .flat_map(|p| p.coords.as_slice().to_vec())
            .collect();
        assert_eq!(snap_to_candidates(&stacked, &candidates), vec![2, 7, 9, 0]);
    }
}
