//! Independent brute-force oracle: constrained minimization of
//!
//!   N0[v] = (1/4) int |v'|^2 + omega int v,   subject to int v^{p/2} = 1,
//!
//! over nonnegative bell-shaped grid functions, by projected gradient
//! descent. Each step is projected by clamping at zero, symmetric decreasing
//! rearrangement, and renormalization to the constraint; rearrangement
//! cannot increase the Dirichlet term and preserves the other two, so
//! accepted steps decrease the objective monotonically.
//!
//! The converged minimizer is phi = Phi^2, the square of the normalized
//! wave, and its multiplier (1/2) int (v')^2 + omega int v recovers the
//! normalization coefficient c(omega, p) by a route entirely independent of
//! the closed-form quadratures.

use crate::error::{Error, Result};
use crate::profile::{normalized_profile, WaveParams};
use serde::Serialize;

/// Symmetric decreasing rearrangement on a grid: the values, sorted in
/// descending order, are placed center-out alternately. Preserves every
/// l^q norm of the sample multiset; the output is bell-shaped.
pub fn symmetric_decreasing_rearrange(v: &[f64]) -> Result<Vec<f64>> {
    if v.iter().any(|&x| x < 0.0 || !x.is_finite()) {
        return Err(Error::Domain(
            "rearrangement requires finite nonnegative entries".into(),
        ));
    }
    let n = v.len();
    let mut sorted = v.to_vec();
    sorted.sort_unstable_by(|a, b| b.total_cmp(a));
    let mut out = vec![0.0; n];
    let c = n / 2;
    if n == 0 {
        return Ok(out);
    }
    out[c] = sorted[0];
    // Odd length: symmetric pairs around the exact center, right first.
    // Even length: the center sits right of the midpoint, so go left first.
    let right_first = n % 2 == 1;
    for (k, &val) in sorted.iter().enumerate().skip(1) {
        let idx = if (k % 2 == 1) == right_first {
            c + k.div_ceil(2)
        } else {
            c - k.div_ceil(2)
        };
        out[idx] = val;
    }
    Ok(out)
}

/// Result of a minimization run.
#[derive(Debug, Clone, Serialize)]
pub struct MinimizeResult {
    pub p: f64,
    pub omega: f64,
    pub x_max: f64,
    pub n: usize,
    pub h: f64,
    /// Final iterate on the grid.
    pub v: Vec<f64>,
    /// Final objective value m_est.
    pub objective: f64,
    /// Accepted objective values at the target resolution (index 0 is the
    /// starting value).
    pub trace: Vec<f64>,
    /// Accepted objective values of the coarse warm-start levels, one trace
    /// per level, coarsest first. Each is monotone nonincreasing.
    pub warm_start_traces: Vec<Vec<f64>>,
    pub iterations: usize,
    pub converged: bool,
}

/// Grid point i of n over [-x_max, x_max], exactly antisymmetric about 0.
fn grid_point(i: usize, n: usize, x_max: f64) -> f64 {
    x_max * (2.0 * i as f64 - (n - 1) as f64) / (n - 1) as f64
}

impl MinimizeResult {
    pub fn grid(&self) -> Vec<f64> {
        (0..self.n)
            .map(|i| grid_point(i, self.n, self.x_max))
            .collect()
    }

    /// The Euler-Lagrange multiplier (1/2) int (v')^2 + omega int v on the
    /// minimizer; converges to c(omega, p).
    pub fn multiplier(&self) -> f64 {
        let mut dirichlet = 0.0;
        for i in 0..self.n - 1 {
            let d = (self.v[i + 1] - self.v[i]) / self.h;
            dirichlet += d * d;
        }
        0.5 * dirichlet * self.h + self.omega * self.v.iter().sum::<f64>() * self.h
    }
}

fn objective(v: &[f64], h: f64, omega: f64) -> f64 {
    let mut dirichlet = 0.0;
    for i in 0..v.len() - 1 {
        let d = (v[i + 1] - v[i]) / h;
        dirichlet += d * d;
    }
    0.25 * dirichlet * h + omega * v.iter().sum::<f64>() * h
}

fn constraint_scale(v: &[f64], h: f64, p: f64) -> f64 {
    (v.iter().map(|&x| x.powf(p / 2.0)).sum::<f64>() * h).powf(2.0 / p)
}

fn project(v: &mut Vec<f64>, h: f64, p: f64) -> Result<()> {
    for x in v.iter_mut() {
        if *x < 0.0 {
            *x = 0.0;
        }
    }
    *v = symmetric_decreasing_rearrange(v)?;
    let s = constraint_scale(v, h, p);
    if !(s.is_finite() && s > 0.0) {
        return Err(Error::Domain("iterate collapsed to zero".into()));
    }
    for x in v.iter_mut() {
        *x /= s;
    }
    Ok(())
}

struct LevelRun {
    v: Vec<f64>,
    trace: Vec<f64>,
    converged: bool,
}

/// Projected gradient descent at one resolution.
///
/// The gradient of the linear omega-term is omega at every grid point;
/// combined with the clamp this gives the correct free-boundary
/// complementarity (a zero sample activates only where the curvature
/// exceeds 2 omega). The step direction is the gradient projected onto the
/// tangent of the constraint manifold {sum v^{p/2} h = 1}: the multiplicative
/// renormalization rescales along v, which is the constraint normal
/// v^{p/2-1} only at p = 4, so without the tangent projection the composite
/// map has spurious fixed points solving -v''/2 + omega proportional to v
/// instead of the Euler-Lagrange equation.
fn descend(
    mut v: Vec<f64>,
    h: f64,
    p: f64,
    omega: f64,
    max_iter: usize,
    tol: f64,
) -> Result<LevelRun> {
    let base_step = 0.25 * h * h;
    let n = v.len();
    let mut obj = objective(&v, h, omega);
    let mut trace = vec![obj];
    let mut grad = vec![0.0; n];
    let mut converged = false;

    for _ in 0..max_iter {
        for i in 1..n - 1 {
            let lap = (v[i + 1] - 2.0 * v[i] + v[i - 1]) / (h * h);
            grad[i] = -0.5 * lap + omega;
        }
        grad[0] = omega;
        grad[n - 1] = omega;

        // Remove the constraint-normal component.
        let normal: Vec<f64> = v.iter().map(|&x| x.powf(p / 2.0 - 1.0)).collect();
        let gn: f64 = grad.iter().zip(&normal).map(|(g, u)| g * u).sum();
        let nn: f64 = normal.iter().map(|u| u * u).sum();
        if nn > 0.0 {
            let coef = gn / nn;
            for (g, u) in grad.iter_mut().zip(&normal) {
                *g -= coef * u;
            }
        }

        let mut step = base_step;
        let mut accepted = false;
        for _ in 0..48 {
            let mut trial: Vec<f64> = v.iter().zip(&grad).map(|(x, g)| x - step * g).collect();
            if project(&mut trial, h, p).is_err() {
                step *= 0.5;
                continue;
            }
            let trial_obj = objective(&trial, h, omega);
            if trial_obj < obj {
                let decrease = obj - trial_obj;
                v = trial;
                obj = trial_obj;
                trace.push(obj);
                accepted = true;
                if decrease < tol {
                    converged = true;
                }
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            // No step of any size descends: stationary to machine precision.
            converged = true;
        }
        if converged {
            break;
        }
    }
    Ok(LevelRun {
        v,
        trace,
        converged,
    })
}

fn linear_resample(coarse: &[f64], x_max: f64, n_fine: usize) -> Vec<f64> {
    let nc = coarse.len();
    let hc = 2.0 * x_max / (nc - 1) as f64;
    (0..n_fine)
        .map(|i| {
            let x = grid_point(i, n_fine, x_max);
            let s = ((x + x_max) / hc).clamp(0.0, (nc - 1) as f64);
            let j = (s.floor() as usize).min(nc - 2);
            let w = s - j as f64;
            coarse[j] * (1.0 - w) + coarse[j + 1] * w
        })
        .collect()
}

/// Solve the constrained minimization on [-x_max, x_max] with `n` grid
/// points. The descent at the target resolution starts from a warm start
/// produced by the same iteration on coarsened grids, seeded at the
/// coarsest level with a truncated cosine bump sized by the closed-form
/// support (used for sizing only).
pub fn minimize(
    p: f64,
    omega: f64,
    x_max: f64,
    n: usize,
    max_iter: usize,
    tol: f64,
) -> Result<MinimizeResult> {
    WaveParams::natural(p, omega)?;
    if n < 101 {
        return Err(Error::Domain(format!(
            "need at least 101 grid points, got {n}"
        )));
    }
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::Domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let support = normalized_profile(p, omega)?.half_support();
    if !x_max.is_finite() || x_max <= support {
        return Err(Error::Domain(format!(
            "domain half-width {x_max} must exceed the minimizer support {support}"
        )));
    }

    // Resolution ladder, coarsest last; each level stays odd so the exact
    // center is a grid point.
    let mut ladder = vec![n];
    while *ladder.last().unwrap() > 129 {
        let next = ladder.last().unwrap().div_ceil(2) | 1;
        ladder.push(next);
    }
    ladder.reverse();

    let mut warm_start_traces = Vec::new();
    let mut v: Option<Vec<f64>> = None;
    let mut final_run = None;
    for (li, &level_n) in ladder.iter().enumerate() {
        let h = 2.0 * x_max / (level_n - 1) as f64;
        let mut start = match v {
            None => {
                // Truncated cosine bump over the expected support width.
                (0..level_n)
                    .map(|i| {
                        let x = grid_point(i, level_n, x_max);
                        if x.abs() < support {
                            (0.5 * std::f64::consts::PI * x / support).cos()
                        } else {
                            0.0
                        }
                    })
                    .collect::<Vec<f64>>()
            }
            Some(prev) => linear_resample(&prev, x_max, level_n),
        };
        project(&mut start, h, p)?;
        let run = descend(start, h, p, omega, max_iter, tol)?;
        v = Some(run.v.clone());
        if li + 1 == ladder.len() {
            final_run = Some(run);
        } else {
            warm_start_traces.push(run.trace);
        }
    }
    let run = final_run.expect("ladder nonempty");
    let h = 2.0 * x_max / (n - 1) as f64;
    let objective = *run.trace.last().unwrap();
    Ok(MinimizeResult {
        p,
        omega,
        x_max,
        n,
        h,
        v: run.v,
        objective,
        iterations: run.trace.len() - 1,
        trace: run.trace,
        warm_start_traces,
        converged: run.converged,
    })
}

/// Convenience: minimize with the default domain (1.5x the closed-form
/// support of the normalized wave, used for sizing only).
pub fn minimize_default(p: f64, omega: f64, n: usize) -> Result<MinimizeResult> {
    let support = normalized_profile(p, omega)?.half_support();
    minimize(p, omega, 1.5 * support, n, 20_000, 1e-13)
}

/// The oracle's value of c(omega, p): the Euler-Lagrange multiplier of a
/// converged run. Kept as a free function to mirror the module surface.
pub fn oracle_c(result: &MinimizeResult) -> Result<f64> {
    if !result.converged {
        return Err(Error::MaxIterations {
            iterations: result.iterations,
            detail: "minimizer not converged; multiplier unreliable".into(),
        });
    }
    Ok(result.multiplier())
}
