//! Least-squares multilateration.
//!
//! Position estimation minimizes the range residual cost
//! `sum_j (||p - a_j|| - r_j)^2`. A closed-form linearization (differences of
//! squared ranges referenced to the first anchor) provides the starting
//! point, and damped Gauss-Newton iterations refine it. With four or more
//! non-coplanar anchors and exact ranges the minimizer recovers the true
//! position to solver tolerance.

use nalgebra::{DMatrix, DVector, Matrix3, Point3, Vector3};

use crate::error::{Error, Result};

/// Condition number above which the linearized anchor geometry is treated
/// as rank deficient.
pub const DEGENERATE_CONDITION: f64 = 1e8;

const GRADIENT_TOL: f64 = 1e-9;
const MAX_ITERATIONS: usize = 50;

/// Result of a position solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositionEstimate {
    pub position: Point3<f64>,
    /// Euclidean norm of the range residual vector at the solution, meters.
    pub residual_norm: f64,
    /// Whether the gradient tolerance was reached within the iteration cap.
    pub converged: bool,
    pub iterations: usize,
}

fn residual_norm(anchors: &[Point3<f64>], ranges: &[f64], p: &Point3<f64>) -> f64 {
    cost(anchors, ranges, p).sqrt()
}

fn cost(anchors: &[Point3<f64>], ranges: &[f64], p: &Point3<f64>) -> f64 {
    anchors
        .iter()
        .zip(ranges)
        .map(|(a, r)| {
            let e = (p - a).norm() - r;
            e * e
        })
        .sum()
}

fn check_inputs(anchors: &[Point3<f64>], ranges: &[f64]) -> Result<()> {
    if anchors.len() < 4 {
        return Err(Error::Underdetermined {
            have: anchors.len(),
        });
    }
    if anchors.len() != ranges.len() {
        return Err(Error::InvalidArgument(format!(
            "{} anchors but {} ranges",
            anchors.len(),
            ranges.len()
        )));
    }
    Ok(())
}

/// Closed-form linear estimate. Subtracting the squared range equation of
/// anchor 1 from anchor j removes the quadratic term and leaves
/// `2 (a_j - a_1)^T p = ||a_j||^2 - ||a_1||^2 + r_1^2 - r_j^2`,
/// solved in the least-squares sense via SVD.
///
/// Returns the estimate and the condition number of the geometry matrix.
fn linear_estimate(anchors: &[Point3<f64>], ranges: &[f64]) -> (Point3<f64>, f64) {
    let m = anchors.len();
    let a1 = anchors[0];
    let r1 = ranges[0];
    let mut a = DMatrix::zeros(m - 1, 3);
    let mut b = DVector::zeros(m - 1);
    for j in 1..m {
        let row = 2.0 * (anchors[j] - a1);
        a.set_row(j - 1, &row.transpose());
        b[j - 1] =
            anchors[j].coords.norm_squared() - a1.coords.norm_squared() + r1 * r1
                - ranges[j] * ranges[j];
    }
    let svd = a.svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    // Minimum-norm solution; rank-deficient directions are truncated.
    let eps = smax * 1e-12;
    let sol = svd
        .solve(&b, eps)
        .unwrap_or_else(|_| DVector::zeros(3));
    (Point3::new(sol[0], sol[1], sol[2]), condition)
}

/// Linear-only solve: the closed-form initialization without refinement.
pub fn solve_ls_linear(anchors: &[Point3<f64>], ranges: &[f64]) -> Result<PositionEstimate> {
    check_inputs(anchors, ranges)?;
    let (p, condition) = linear_estimate(anchors, ranges);
    let estimate = PositionEstimate {
        position: p,
        residual_norm: residual_norm(anchors, ranges, &p),
        converged: false,
        iterations: 0,
    };
    if condition > DEGENERATE_CONDITION {
        return Err(Error::DegenerateGeometry {
            condition,
            linear: estimate,
        });
    }
    Ok(estimate)
}

/// Full least-squares solve: linear initialization followed by damped
/// Gauss-Newton refinement until the cost gradient norm drops below `1e-9`
/// or 50 iterations have run.
pub fn solve_ls(anchors: &[Point3<f64>], ranges: &[f64]) -> Result<PositionEstimate> {
    let init = solve_ls_linear(anchors, ranges)?;
    let mut p = init.position;
    let mut converged = false;
    let mut iterations = 0;
    for _ in 0..MAX_ITERATIONS {
        let mut jtj = Matrix3::zeros();
        let mut jte = Vector3::zeros();
        for (a, &r) in anchors.iter().zip(ranges) {
            let diff = p - a;
            let d = diff.norm().max(1e-15);
            let u = diff / d;
            jtj += u * u.transpose();
            jte += u * (d - r);
        }
        let gradient = 2.0 * jte;
        if gradient.norm() < GRADIENT_TOL {
            converged = true;
            break;
        }
        iterations += 1;
        let step = match jtj.try_inverse() {
            Some(inv) => -(inv * jte),
            None => break,
        };
        // Backtracking keeps the cost non-increasing from the linear init.
        let base = cost(anchors, ranges, &p);
        let mut t = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let q = p + t * step;
            if cost(anchors, ranges, &q) <= base {
                p = q;
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    Ok(PositionEstimate {
        position: p,
        residual_norm: residual_norm(anchors, ranges, &p),
        converged,
        iterations,
    })
}
