//! The traveling-frame change of variables t(x) = int_0^x dy/phi(y), which
//! maps the support (-L, L) onto the whole line, and the nondegenerate
//! Schrodinger operators it produces from the linearized operators about
//! the wave:
//!
//!   L_plus  = -d^2/dt^2 + omega/4   - gamma (2p^2-5p+3)/(2p) phi^{p-2}(x(t))
//!   L_minus = -d^2/dt^2 + 9 omega/4 - 3 gamma (p+1)/(2p)    phi^{p-2}(x(t))
//!
//! The map is evaluated in the log-depth variable V = ln(phi_0/phi), in which
//!
//!   t(V) = int_0^V dv / sqrt(omega (1 - e^{-(p-2) v}))
//!
//! has a removable square-root singularity at v = 0 and approaches a unit
//! slope (in units of 1/sqrt(omega)) as v grows; the inverse map is obtained
//! by bracketed root finding.

use crate::error::{Error, Result};
use crate::profile::{CompactonProfile, WaveParams};
use crate::singquad::{bracket_root, integrate_singular, SingularIntegrand};

/// Potential samples below this multiple of omega are considered negligible
/// when choosing the default truncation.
const POTENTIAL_CUT: f64 = 1e-12;

/// Monotone map between x in (-L, L) and t on the line, for a fixed profile.
#[derive(Debug, Clone)]
pub struct TravelingFrame {
    profile: CompactonProfile,
}

impl TravelingFrame {
    pub fn new(profile: &CompactonProfile) -> Self {
        Self {
            profile: profile.clone(),
        }
    }

    pub fn profile(&self) -> &CompactonProfile {
        &self.profile
    }

    /// t as a function of the log-depth V = ln(phi_0 / phi) >= 0.
    fn t_of_logdepth(&self, v: f64) -> Result<f64> {
        if v == 0.0 {
            return Ok(0.0);
        }
        let params = self.profile.params();
        let omega = params.omega;
        let k = params.p - 2.0;
        let f = SingularIntegrand::with_exponents(
            move |u: f64| 1.0 / (omega * (-f64::exp_m1(-k * u))).sqrt(),
            0.0,
            v,
            0.5,
            0.0,
        )?;
        integrate_singular(&f, 1e-13 * (1.0 + v))
    }

    /// Inverse of `t_of_logdepth` for tau >= 0. Since the integrand is at
    /// least 1/sqrt(omega), the solution always lies in [0, tau sqrt(omega)].
    fn logdepth_at(&self, tau: f64) -> Result<f64> {
        if tau == 0.0 {
            return Ok(0.0);
        }
        let hi = tau * self.profile.params().omega.sqrt() + 1e-9;
        bracket_root(
            |v| self.t_of_logdepth(v).unwrap_or(f64::NAN) - tau,
            0.0,
            hi,
            1e-13 * (1.0 + hi),
        )
    }

    /// Forward map t(x); defined for |x| < L only.
    pub fn t_of_x(&self, x: f64) -> Result<f64> {
        let l = self.profile.half_support();
        if x.abs() >= l {
            return Err(Error::Domain(format!(
                "|x| = {} outside the open support (-{l}, {l})",
                x.abs()
            )));
        }
        let phi = self.profile.phi(x);
        let v = (self.profile.amplitude() / phi).ln();
        Ok(self.t_of_logdepth(v)?.copysign(x))
    }

    /// Profile value transported to the line: phi(x(t)).
    pub fn phi_at_t(&self, t: f64) -> Result<f64> {
        let v = self.logdepth_at(t.abs())?;
        Ok(self.profile.amplitude() * (-v).exp())
    }

    /// Inverse map x(t), by monotone inversion and the forward abscissa
    /// quadrature.
    pub fn x_of_t(&self, t: f64) -> Result<f64> {
        let phi = self.phi_at_t(t)?;
        Ok(self.profile.x_of_phi(phi)?.copysign(t))
    }

    /// L - |x(t)| computed without cancellation, as the tail quadrature
    /// int_0^{phi(t)} ds / sqrt(omega - (2 gamma/p) s^{p-2}).
    pub fn edge_distance(&self, t: f64) -> Result<f64> {
        let phi = self.phi_at_t(t)?;
        let prof = self.profile.clone();
        let f = SingularIntegrand::new(
            move |s: f64| {
                1.0 / prof
                    .first_integral_radicand(s)
                    .max(f64::MIN_POSITIVE)
                    .sqrt()
            },
            0.0,
            phi,
        )?;
        integrate_singular(&f, 1e-15 * (1.0 + phi))
    }

    /// Coefficient of phi^{p-2} in the plus potential.
    pub fn kappa_plus(&self) -> f64 {
        let WaveParams { p, gamma, .. } = self.profile.params();
        gamma * (2.0 * p * p - 5.0 * p + 3.0) / (2.0 * p)
    }

    /// Coefficient of phi^{p-2} in the minus potential.
    pub fn kappa_minus(&self) -> f64 {
        let WaveParams { p, gamma, .. } = self.profile.params();
        3.0 * gamma * (p + 1.0) / (2.0 * p)
    }

    /// W_plus(t) = kappa_plus phi^{p-2}(x(t)).
    pub fn potential_plus(&self, t: f64) -> Result<f64> {
        let params = self.profile.params();
        let v = self.logdepth_at(t.abs())?;
        Ok(self.kappa_plus()
            * self.profile.amplitude().powf(params.p - 2.0)
            * (-(params.p - 2.0) * v).exp())
    }

    /// Default half-width of the truncated line grid: large enough that the
    /// potential tail is below 1e-12 omega AND that the slowest-decaying
    /// zero-mode tail exp(-sqrt(omega) t) is negligible at the Dirichlet cut.
    pub fn default_half_width(&self) -> Result<f64> {
        let params = self.profile.params();
        let omega = params.omega;
        let sw = omega.sqrt();
        let w0 = self.kappa_plus() * self.profile.amplitude().powf(params.p - 2.0);
        let t_pot = ((4.0 * w0) / (POTENTIAL_CUT * omega)).ln() / ((params.p - 2.0) * sw);
        let mut t = t_pot.max(24.0 / sw);
        while self.potential_plus(t)? > POTENTIAL_CUT * omega {
            t *= 1.25;
        }
        Ok(t)
    }
}

/// Which of the two conjugated operators a grid represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum OperatorKind {
    Plus,
    Minus,
}

/// A Dirichlet-truncated Schrodinger operator -d^2/dt^2 + shift - W(t) with
/// its potential sampled on a uniform interior grid over [-T, T].
///
/// The grid holds `n` interior points t_i = -T + (i+1) h with h = 2T/(n+1);
/// the Dirichlet endpoints t = +-T carry implicit zeros.
#[derive(Debug, Clone)]
pub struct SchrodingerOperator {
    kind: OperatorKind,
    frame: TravelingFrame,
    shift: f64,
    kappa: f64,
    half_width: f64,
    n: usize,
    h: f64,
    w: Vec<f64>,
    phi: Vec<f64>,
}

fn assemble(
    frame: &TravelingFrame,
    kind: OperatorKind,
    half_width: f64,
    n: usize,
) -> Result<SchrodingerOperator> {
    if !(half_width > 0.0 && half_width.is_finite()) {
        return Err(Error::Domain(format!(
            "half-width must be positive, got {half_width}"
        )));
    }
    if n < 3 {
        return Err(Error::Domain(format!(
            "need at least 3 grid points, got {n}"
        )));
    }
    let params = frame.profile().params();
    let (shift, kappa) = match kind {
        OperatorKind::Plus => (params.omega / 4.0, frame.kappa_plus()),
        OperatorKind::Minus => (9.0 * params.omega / 4.0, frame.kappa_minus()),
    };
    let h = 2.0 * half_width / (n + 1) as f64;
    let phi0 = frame.profile().amplitude();
    let peak = phi0.powf(params.p - 2.0);

    let mut phi = vec![0.0; n];
    let mut w = vec![0.0; n];
    // The grid is symmetric: t_{n-1-i} = -t_i exactly. Fill the upper half
    // and mirror.
    for i in (n / 2)..n {
        let t = -half_width + (i + 1) as f64 * h;
        let v = frame.logdepth_at(t)?;
        let p_val = phi0 * (-v).exp();
        let w_val = kappa * peak * (-(params.p - 2.0) * v).exp();
        phi[i] = p_val;
        w[i] = w_val;
        phi[n - 1 - i] = p_val;
        w[n - 1 - i] = w_val;
    }
    Ok(SchrodingerOperator {
        kind,
        frame: frame.clone(),
        shift,
        kappa,
        half_width,
        n,
        h,
        w,
        phi,
    })
}

/// The conjugate of the second-variation "plus" operator:
/// shift omega/4, potential coefficient gamma (2p^2 - 5p + 3)/(2p).
pub fn assemble_plus(
    frame: &TravelingFrame,
    half_width: f64,
    n: usize,
) -> Result<SchrodingerOperator> {
    assemble(frame, OperatorKind::Plus, half_width, n)
}

/// The conjugate of the "minus" operator:
/// shift 9 omega/4, potential coefficient 3 gamma (p+1)/(2p).
pub fn assemble_minus(
    frame: &TravelingFrame,
    half_width: f64,
    n: usize,
) -> Result<SchrodingerOperator> {
    assemble(frame, OperatorKind::Minus, half_width, n)
}

impl SchrodingerOperator {
    pub fn kind(&self) -> OperatorKind {
        self.kind
    }
    pub fn params(&self) -> WaveParams {
        self.frame.profile().params()
    }
    pub fn frame(&self) -> &TravelingFrame {
        &self.frame
    }
    pub fn shift(&self) -> f64 {
        self.shift
    }
    pub fn kappa(&self) -> f64 {
        self.kappa
    }
    pub fn half_width(&self) -> f64 {
        self.half_width
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn h(&self) -> f64 {
        self.h
    }
    pub fn grid_point(&self, i: usize) -> f64 {
        -self.half_width + (i + 1) as f64 * self.h
    }
    pub fn potential(&self) -> &[f64] {
        &self.w
    }
    /// phi(x(t_i)) samples.
    pub fn phi_samples(&self) -> &[f64] {
        &self.phi
    }

    /// phi'(x(t_i)) samples (odd in t).
    pub fn dphi_samples(&self) -> Vec<f64> {
        let prof = self.frame.profile();
        (0..self.n)
            .map(|i| {
                let slope = prof.first_integral_radicand(self.phi[i]).sqrt();
                -slope * self.grid_point(i).signum()
            })
            .collect()
    }

    /// x(t_i) samples (computed on demand; one quadrature per point).
    pub fn x_samples(&self) -> Result<Vec<f64>> {
        let prof = self.frame.profile();
        (0..self.n)
            .map(|i| Ok(prof.x_of_phi(self.phi[i])?.copysign(self.grid_point(i))))
            .collect()
    }

    /// The analytic kernel candidate transported to the grid:
    /// sqrt(phi) phi' for the plus operator, phi^{3/2} for the minus one.
    /// Not normalized.
    pub fn kernel_candidate(&self) -> Vec<f64> {
        match self.kind {
            OperatorKind::Plus => {
                let d = self.dphi_samples();
                (0..self.n).map(|i| self.phi[i].sqrt() * d[i]).collect()
            }
            OperatorKind::Minus => self.phi.iter().map(|&p| p.powf(1.5)).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profile::WaveParams;

    fn profile(p: f64, omega: f64, gamma: f64) -> CompactonProfile {
        CompactonProfile::build(WaveParams::new(p, omega, gamma).unwrap()).unwrap()
    }

    #[test]
    fn t_vanishes_at_origin() {
        let frame = TravelingFrame::new(&profile(5.0, 1.3, 1.0));
        assert_eq!(frame.t_of_x(0.0).unwrap(), 0.0);
        assert_eq!(frame.phi_at_t(0.0).unwrap(), frame.profile().amplitude());
    }

    #[test]
    #[allow(clippy::excessive_precision)]
    fn p4_forward_map_matches_direct_quadrature_values() {
        // For p = 4, omega = 1 the map is t(x) = arcsech(cos(x/sqrt 2));
        // reference values from a dense independent quadrature of
        // int_0^x dy / sqrt(1 + cos(sqrt 2 y)).
        let frame = TravelingFrame::new(&profile(4.0, 1.0, 1.0));
        for (x, want) in [
            (0.3, 0.213741160585190400),
            (1.0, 0.774670286002814774),
            (2.0, 2.545271635774261172),
        ] {
            let t = frame.t_of_x(x).unwrap();
            assert!((t - want).abs() < 1e-10, "t({x}) = {t}, want {want}");
            let tm = frame.t_of_x(-x).unwrap();
            assert_eq!(tm, -t, "odd symmetry");
        }
    }

    #[test]
    fn transported_profile_matches_sech_closed_form() {
        // phi(x(t)) = phi_0 sech((p-2) sqrt(omega) t / 2)^{2/(p-2)}, the
        // closed form of the first-order reduction in the frame variable.
        let (p, omega) = (5.5, 0.8);
        let frame = TravelingFrame::new(&profile(p, omega, 1.0));
        let phi0 = frame.profile().amplitude();
        let alpha = (p - 2.0) * omega.sqrt() / 2.0;
        for t in [0.2, 1.0, 3.0, 8.0] {
            let got = frame.phi_at_t(t).unwrap();
            let want = phi0 * (1.0 / (alpha * t).cosh()).powf(2.0 / (p - 2.0));
            assert!(
                (got - want).abs() < 1e-10 * phi0,
                "t={t}: {got} vs sech form {want}"
            );
        }
    }

    #[test]
    fn round_trip_x_to_t_to_x() {
        let frame = TravelingFrame::new(&profile(3.2, 2.0, 0.7));
        let l = frame.profile().half_support();
        for frac in [0.1, 0.45, 0.8, 0.95] {
            let x = frac * l;
            let t = frame.t_of_x(x).unwrap();
            let back = frame.x_of_t(t).unwrap();
            assert!((back - x).abs() < 1e-10 * l, "x={x} -> t={t} -> {back}");
        }
    }

    #[test]
    fn forward_map_outside_support_is_rejected() {
        let frame = TravelingFrame::new(&profile(4.0, 1.0, 1.0));
        let l = frame.profile().half_support();
        assert!(frame.t_of_x(l).is_err());
        assert!(frame.t_of_x(-1.5 * l).is_err());
    }

    #[test]
    fn kappa_values() {
        let frame = TravelingFrame::new(&profile(3.0, 1.0, 1.0));
        assert_eq!(frame.kappa_plus(), 1.0);
        let frame = TravelingFrame::new(&profile(4.0, 1.0, 1.0));
        assert_eq!(frame.kappa_minus(), 15.0 / 8.0);
    }

    #[test]
    fn assembled_potentials_are_even_and_peak_correctly() {
        let (p, omega, gamma) = (5.0, 1.3, 1.0);
        let frame = TravelingFrame::new(&profile(p, omega, gamma));
        let t_max = frame.default_half_width().unwrap();
        let op = assemble_plus(&frame, t_max, 801).unwrap();
        let w = op.potential();
        for i in 0..op.n() {
            assert_eq!(w[i], w[op.n() - 1 - i], "evenness at {i}");
        }
        // Center sample (odd n puts t = 0 on the grid): W(0) = kappa p omega / (2 gamma).
        let center = w[op.n() / 2];
        let want = frame.kappa_plus() * p * omega / (2.0 * gamma);
        assert!((center - want).abs() < 1e-12 * want, "{center} vs {want}");
        // Tail below threshold.
        assert!(w[op.n() - 1] < 1e-10 * omega, "tail {}", w[op.n() - 1]);
    }

    #[test]
    fn plus_minus_difference_identity() {
        // (shift_minus - shift_plus) - (W_minus - W_plus)
        //   = 2 omega - (4 - p) gamma phi^{p-2} pointwise.
        let (p, omega, gamma) = (5.0, 1.3, 1.0);
        let frame = TravelingFrame::new(&profile(p, omega, gamma));
        let t_max = frame.default_half_width().unwrap();
        let plus = assemble_plus(&frame, t_max, 401).unwrap();
        let minus = assemble_minus(&frame, t_max, 401).unwrap();
        for i in 0..plus.n() {
            let lhs = (minus.shift() - plus.shift()) - (minus.potential()[i] - plus.potential()[i]);
            let rhs = 2.0 * omega - (4.0 - p) * gamma * plus.phi_samples()[i].powf(p - 2.0);
            assert!(
                (lhs - rhs).abs() < 1e-12 * (1.0 + rhs.abs()),
                "i={i}: {lhs} vs {rhs}"
            );
        }
    }

    #[test]
    fn default_half_width_covers_zero_mode() {
        let frame = TravelingFrame::new(&profile(10.0, 1.0, 1.0));
        let t = frame.default_half_width().unwrap();
        assert!(t >= 24.0, "T = {t}");
        assert!(frame.potential_plus(t).unwrap() <= 1e-12);
    }

    #[test]
    fn norm_transport_between_variables() {
        // int u^2 dx = int (sqrt(phi) u)^2 dt in the continuum. For a smooth
        // compactly supported u the grid sum converges faster than any power
        // of h, so the transported norm already matches the x-quadrature to
        // near machine precision at moderate resolution.
        let prof = profile(4.0, 1.0, 1.0);
        let frame = TravelingFrame::new(&prof);
        let l = prof.half_support();
        let r = 0.8 * l;
        let u = |x: f64| {
            let s = x / r;
            if s.abs() >= 1.0 {
                0.0
            } else {
                (-1.0 / (1.0 - s * s)).exp()
            }
        };
        let x_norm = {
            let f = crate::singquad::SingularIntegrand::new(
                |x: f64| {
                    let v = u(x);
                    v * v
                },
                -r,
                r,
            )
            .unwrap();
            crate::singquad::integrate_singular(&f, 1e-12).unwrap()
        };
        let t_norm = |n: usize| {
            let op = assemble_plus(&frame, 20.0, n).unwrap();
            let xs = op.x_samples().unwrap();
            let mut s = 0.0;
            for (&x, &ph) in xs.iter().zip(op.phi_samples()) {
                let g = ph.sqrt() * u(x);
                s += g * g;
            }
            s * op.h()
        };
        for n in [1001, 2003] {
            let d = (t_norm(n) - x_norm).abs();
            assert!(
                d < 1e-12 * x_norm.max(1.0),
                "n={n}: |t-norm - x-norm| = {d:e}"
            );
        }
    }

    #[test]
    fn rejects_degenerate_grids() {
        let frame = TravelingFrame::new(&profile(4.0, 1.0, 1.0));
        assert!(assemble_plus(&frame, 0.0, 101).is_err());
        assert!(assemble_plus(&frame, 10.0, 2).is_err());
    }
}
