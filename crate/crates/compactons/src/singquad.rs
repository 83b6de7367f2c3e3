//! Shared numerical kernels: adaptive Gauss-Kronrod quadrature for integrands
//! with inverse-square-root endpoint singularities, and bracket-safe root
//! finding for monotone functions.
//!
//! Endpoint singularities are removed by the substitution z = a + u^2
//! (resp. z = b - u^2) on the half-interval that owns them, after which the
//! integrand is smooth and ordinary adaptive refinement applies.

use crate::error::{Error, Result};

// 15-point Kronrod abscissae (positive half) and weights, with the embedded
// 7-point Gauss weights. Values as tabulated in QUADPACK.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

const MAX_PANELS: usize = 8192;

/// An integrand on the open interval `(a, b)` whose endpoint blow-up is
/// declared as |z-a|^(-left) and |b-z|^(-right) with exponents in [0, 1).
pub struct SingularIntegrand<F> {
    f: F,
    a: f64,
    b: f64,
    left: f64,
    right: f64,
}

impl<F: Fn(f64) -> f64> SingularIntegrand<F> {
    /// Integrand with no declared endpoint singularities.
    pub fn new(f: F, a: f64, b: f64) -> Result<Self> {
        Self::with_exponents(f, a, b, 0.0, 0.0)
    }

    /// Integrand with declared endpoint exponents. An exponent of 1/2 also
    /// covers integrands that merely contain a half-power factor at the
    /// endpoint (the substitution smooths either case).
    pub fn with_exponents(f: F, a: f64, b: f64, left: f64, right: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a <= b) {
            return Err(Error::Domain(format!("bad interval [{a}, {b}]")));
        }
        if !(0.0..1.0).contains(&left) || !(0.0..1.0).contains(&right) {
            return Err(Error::Domain(format!(
                "endpoint exponents must lie in [0, 1): got {left}, {right}"
            )));
        }
        Ok(Self {
            f,
            a,
            b,
            left,
            right,
        })
    }
}

/// Single Gauss-Kronrod 15-point pass over `[a, b]`.
/// Returns (kronrod value, error estimate). Non-finite samples are replaced
/// by zero and flagged with an infinite error so the panel keeps refining.
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut bad = false;
    let mut eval = |x: f64| -> f64 {
        let v = f(x);
        if v.is_finite() {
            v
        } else {
            bad = true;
            0.0
        }
    };

    let fc = eval(center);
    let mut resg = fc * WG[3];
    let mut resk = fc * WGK[7];
    let mut resabs = resk.abs();
    let mut fv = [0.0f64; 15];
    fv[7] = fc;

    for (j, &wg_j) in WG.iter().enumerate().take(3) {
        let idx = 2 * j + 1;
        let dx = half * XGK[idx];
        let f1 = eval(center - dx);
        let f2 = eval(center + dx);
        fv[7 - idx] = f1;
        fv[7 + idx] = f2;
        resg += wg_j * (f1 + f2);
        resk += WGK[idx] * (f1 + f2);
        resabs += WGK[idx] * (f1.abs() + f2.abs());
    }
    for j in 0..4 {
        let idx = 2 * j;
        let dx = half * XGK[idx];
        let f1 = eval(center - dx);
        let f2 = eval(center + dx);
        fv[7 - idx] = f1;
        fv[7 + idx] = f2;
        resk += WGK[idx] * (f1 + f2);
        resabs += WGK[idx] * (f1.abs() + f2.abs());
    }

    let mean = resk * 0.5;
    let mut resasc = 0.0;
    for (j, &w) in WGK.iter().enumerate() {
        if j == 7 {
            resasc += w * (fv[7] - mean).abs();
        } else {
            resasc += w * ((fv[7 - j] - mean).abs() + (fv[7 + j] - mean).abs());
        }
    }

    let value = resk * half;
    resabs *= half.abs();
    resasc *= half.abs();
    if bad || !value.is_finite() || !resabs.is_finite() || !resasc.is_finite() {
        // Non-finite samples or overflowed sums: keep the error huge but
        // finite so the accumulated totals stay NaN-free.
        return (if value.is_finite() { value } else { 0.0 }, 1e300);
    }

    // QUADPACK error rescaling.
    let mut err = ((resk - resg) * half).abs();
    if resasc != 0.0 && err != 0.0 {
        let scale = (200.0 * err / resasc).powf(1.5);
        err = if scale < 1.0 { resasc * scale } else { resasc };
    }
    let tiny = f64::MIN_POSITIVE / (50.0 * f64::EPSILON);
    if resabs > tiny {
        err = err.max(50.0 * f64::EPSILON * resabs);
    }
    (value, err)
}

struct Panel {
    err: f64,
    seq: u64,
    a: f64,
    b: f64,
    val: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err && self.seq == other.seq
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.err
            .total_cmp(&other.err)
            .then(self.seq.cmp(&other.seq).reverse())
    }
}

/// Globally adaptive quadrature on a smooth (possibly endpoint-substituted)
/// integrand. Worst panel first; deterministic for fixed inputs.
fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    let mut heap = std::collections::BinaryHeap::new();
    let (val, err) = gk15(f, a, b);
    let mut total_err = err;
    let mut abs_acc = val.abs();
    let mut seq = 0u64;
    heap.push(Panel {
        err,
        seq,
        a,
        b,
        val,
    });

    while total_err > tol.max(100.0 * f64::EPSILON * abs_acc) && heap.len() < MAX_PANELS {
        let worst = heap.pop().expect("heap nonempty");
        // Cannot usefully split further: the panel has collapsed to
        // machine width.
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            heap.push(worst);
            break;
        }
        let (v1, e1) = gk15(f, worst.a, mid);
        let (v2, e2) = gk15(f, mid, worst.b);
        total_err = total_err - worst.err + e1 + e2;
        abs_acc = abs_acc - worst.val.abs() + v1.abs() + v2.abs();
        seq += 1;
        heap.push(Panel {
            err: e1,
            seq,
            a: worst.a,
            b: mid,
            val: v1,
        });
        seq += 1;
        heap.push(Panel {
            err: e2,
            seq,
            a: mid,
            b: worst.b,
            val: v2,
        });
    }

    // Deterministic summation independent of heap layout.
    let mut panels: Vec<Panel> = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let mut sum = 0.0;
    let mut comp = 0.0;
    for p in &panels {
        let y = p.val - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    // Final error from the panels themselves, free of accumulation drift.
    let total_err: f64 = panels.iter().map(|p| p.err).sum();

    // Round-off floor: do not report failure when the estimate is already at
    // the resolution limit of the summed magnitudes.
    let floor = 100.0 * f64::EPSILON * panels.iter().map(|p| p.val.abs()).sum::<f64>();
    if total_err > tol.max(floor) {
        return Err(Error::QuadratureNonConvergence {
            estimate: sum,
            error_bound: total_err,
            tol,
        });
    }
    Ok(sum)
}

/// Integrate a declared-singular integrand to absolute tolerance `tol`.
///
/// Each singular endpoint is removed by the square-root substitution before
/// adaptive refinement; the evaluator is never called at the endpoints
/// themselves.
pub fn integrate_singular<F: Fn(f64) -> f64>(f: &SingularIntegrand<F>, tol: f64) -> Result<f64> {
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::Domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let (a, b) = (f.a, f.b);
    if a == b {
        return Ok(0.0);
    }
    if f.left == 0.0 && f.right == 0.0 {
        return adaptive(&f.f, a, b, tol);
    }

    let mid = 0.5 * (a + b);
    let mut sum = 0.0;
    // Left half: z = a + u^2.
    sum += if f.left > 0.0 {
        let g = |u: f64| 2.0 * u * (f.f)(a + u * u);
        adaptive(&g, 0.0, (mid - a).sqrt(), 0.5 * tol)?
    } else {
        adaptive(&f.f, a, mid, 0.5 * tol)?
    };
    // Right half: z = b - u^2.
    sum += if f.right > 0.0 {
        let g = |u: f64| 2.0 * u * (f.f)(b - u * u);
        adaptive(&g, 0.0, (b - mid).sqrt(), 0.5 * tol)?
    } else {
        adaptive(&f.f, mid, b, 0.5 * tol)?
    };
    Ok(sum)
}

/// Bracketed root finding for a monotone function: Illinois-accelerated
/// bisection, always keeping a sign-changing bracket.
///
/// Returns `r` with bracket width <= `tol` (or `g(r) == 0` exactly).
pub fn bracket_root<G: Fn(f64) -> f64>(g: G, lo: f64, hi: f64, tol: f64) -> Result<f64> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::Domain(format!("bad bracket [{lo}, {hi}]")));
    }
    if !tol.is_finite() || tol <= 0.0 {
        return Err(Error::Domain(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let mut a = lo;
    let mut b = hi;
    let mut fa = g(a);
    let mut fb = g(b);
    if !fa.is_finite() || !fb.is_finite() {
        return Err(Error::Domain(
            "non-finite function value at bracket endpoint".into(),
        ));
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::NoSignChange {
            lo,
            hi,
            g_lo: fa,
            g_hi: fb,
        });
    }

    let mut side: i8 = 0;
    for _ in 0..256 {
        if (b - a) <= tol {
            break;
        }
        // Secant proposal from the (possibly Illinois-damped) bracket values;
        // midpoint when the proposal degenerates or leaves the bracket.
        let mut x = (a * fb - b * fa) / (fb - fa);
        if !x.is_finite() || x <= a || x >= b {
            x = 0.5 * (a + b);
        }
        let fx = g(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if !fx.is_finite() {
            return Err(Error::Domain(format!("non-finite function value at {x}")));
        }
        if fx.signum() == fa.signum() {
            a = x;
            fa = fx;
            if side == -1 {
                fb *= 0.5;
            }
            side = -1;
        } else {
            b = x;
            fb = fx;
            if side == 1 {
                fa *= 0.5;
            }
            side = 1;
        }
    }
    Ok(0.5 * (a + b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    #[test]
    fn beta_half_half_is_pi() {
        let f = SingularIntegrand::with_exponents(
            |z: f64| 1.0 / (z - z * z).sqrt(),
            0.0,
            1.0,
            0.5,
            0.5,
        )
        .unwrap();
        let v = integrate_singular(&f, 1e-12).unwrap();
        assert!((v - PI).abs() < 1e-11, "got {v}, want pi");
    }

    #[test]
    fn quarter_circle_moment() {
        let f = SingularIntegrand::with_exponents(
            |z: f64| z * z / (1.0 - z * z).sqrt(),
            0.0,
            1.0,
            0.0,
            0.5,
        )
        .unwrap();
        let v = integrate_singular(&f, 1e-12).unwrap();
        assert!((v - PI / 4.0).abs() < 1e-11, "got {v}, want pi/4");
    }

    /// Independent oracle for int_0^1 dz / sqrt(z - z^{p/2}) at p = 5:
    /// substitute z = u^2 on the left half and z = 1 - u^2 on the right half,
    /// then refine a trapezoid rule until successive doublings agree.
    fn p5_support_integral_oracle() -> f64 {
        let left = |u: f64| 2.0 / (1.0 - u * u * u).sqrt();
        let right = |v: f64| {
            if v == 0.0 {
                let z: f64 = 1.0;
                2.0 / (z * 1.5f64).sqrt()
            } else {
                let z = 1.0 - v * v;
                2.0 * v / (z * (1.0 - z * z.sqrt())).sqrt()
            }
        };
        let half = 0.5f64.sqrt();
        let trapz = |f: &dyn Fn(f64) -> f64, n: usize| {
            let h = half / n as f64;
            let mut s = 0.5 * (f(0.0) + f(half));
            for i in 1..n {
                s += f(i as f64 * h);
            }
            s * h
        };
        let refine = |f: &dyn Fn(f64) -> f64| {
            let mut n = 64;
            let mut prev = trapz(f, n);
            loop {
                n *= 2;
                let cur = trapz(f, n);
                if (cur - prev).abs() < 3e-11 || n > (1 << 22) {
                    return cur;
                }
                prev = cur;
            }
        };
        refine(&left) + refine(&right)
    }

    #[test]
    fn p5_support_integral_matches_substitution_oracle() {
        let p = 5.0;
        let f = SingularIntegrand::with_exponents(
            move |z: f64| 1.0 / (z - z.powf(p / 2.0)).sqrt(),
            0.0,
            1.0,
            0.5,
            0.5,
        )
        .unwrap();
        let v = integrate_singular(&f, 1e-12).unwrap();
        let oracle = p5_support_integral_oracle();
        assert!(
            (v - oracle).abs() < 2e-10,
            "adaptive {v} vs oracle {oracle}, diff {:e}",
            (v - oracle).abs()
        );
    }

    #[test]
    fn nonintegrable_singularity_reports_nonconvergence() {
        // 1/z with a lying exponent declaration: must refuse, carrying the
        // last estimate.
        let f = SingularIntegrand::new(|z: f64| 1.0 / z, 0.0, 1.0).unwrap();
        match integrate_singular(&f, 1e-10) {
            Err(Error::QuadratureNonConvergence { error_bound, .. }) => {
                assert!(error_bound > 1e-10);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn root_of_linear_and_cubic() {
        let r = bracket_root(|x| x - 1.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 1.0).abs() < 1e-13);
        let r = bracket_root(|x| x * x * x - 2.0, 1.0, 2.0, 1e-14).unwrap();
        assert!((r - 2f64.powf(1.0 / 3.0)).abs() < 1e-13);
    }

    #[test]
    fn missing_sign_change_is_an_error() {
        match bracket_root(|x| x * x + 1.0, -1.0, 1.0, 1e-10) {
            Err(Error::NoSignChange { .. }) => {}
            other => panic!("expected NoSignChange, got {other:?}"),
        }
    }

    proptest! {
        /// Halving the tolerance never moves the result by more than the
        /// larger tolerance.
        #[test]
        fn refinement_consistency(c0 in -2.0f64..2.0, c1 in -2.0f64..2.0, c2 in -2.0f64..2.0,
                                  k in 0usize..3) {
            let tol = [1e-8, 1e-9, 1e-10][k];
            let f = move |z: f64| (c0 + c1 * z + c2 * z * z) / ((z + 0.25) * (1.25 - z)).sqrt();
            let s1 = SingularIntegrand::with_exponents(f, -0.25, 1.25, 0.5, 0.5).unwrap();
            let v1 = integrate_singular(&s1, tol).unwrap();
            let s2 = SingularIntegrand::with_exponents(f, -0.25, 1.25, 0.5, 0.5).unwrap();
            let v2 = integrate_singular(&s2, tol / 2.0).unwrap();
            prop_assert!((v1 - v2).abs() <= tol, "{v1} vs {v2} at tol {tol}");
        }

        /// Even integrand over a symmetric interval equals twice the
        /// half-interval integral within 2 tol.
        #[test]
        fn even_symmetry(a0 in 0.1f64..2.0, a2 in -1.0f64..1.0, s in 0.5f64..2.0) {
            let tol = 1e-11;
            let f = move |z: f64| (a0 + a2 * z * z) / ((s - z) * (s + z)).sqrt();
            let whole = integrate_singular(
                &SingularIntegrand::with_exponents(f, -s, s, 0.5, 0.5).unwrap(), tol).unwrap();
            let half = integrate_singular(
                &SingularIntegrand::with_exponents(f, 0.0, s, 0.0, 0.5).unwrap(), tol).unwrap();
            prop_assert!((whole - 2.0 * half).abs() <= 2.0 * tol + 1e-12 * whole.abs(),
                "whole {whole} vs half {half}");
        }

        /// Round trip: the root of a monotone cubic maps back to ~0.
        #[test]
        fn monotone_root_round_trip(c in 0.1f64..4.0, d in -5.0f64..5.0) {
            let g = move |x: f64| x * x * x + c * x + d;
            let r = bracket_root(g, -4.0, 4.0, 1e-13).unwrap();
            let slope = 3.0 * 16.0 + c;
            prop_assert!(g(r).abs() <= slope * 1e-12 + 1e-12, "g(r) = {:e}", g(r));
        }
    }
}
