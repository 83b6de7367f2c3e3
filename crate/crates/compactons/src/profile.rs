//! Construction and evaluation of the bell-shaped compacton profile.
//!
//! For parameters (p, omega, gamma) the wave solves
//!
//!   -phi (phi phi')' + omega phi - gamma phi^{p-1} = 0
//!
//! on its support [-L, L], with the first-order reduction
//! (phi')^2 = omega - (2 gamma / p) phi^{p-2}. gamma = 1 is the natural
//! traveling/standing wave; gamma = c(omega, p) is the normalized wave with
//! unit L^p mass. The profile is evaluated by inverting the abscissa
//! quadrature x(phi) with a bracketed root finder rather than integrating
//! the degenerate ODE forward.

use crate::error::{Error, Result};
use crate::singquad::{bracket_root, integrate_singular, SingularIntegrand};
use serde::Serialize;

/// Default absolute tolerance for the profile quadratures.
pub const QUAD_TOL: f64 = 1e-12;
/// Fraction of the half-support near +-L where the boundary asymptotic
/// Q = omega (L - |x|)^2 replaces the quadrature inversion.
const EDGE_BAND: f64 = 1e-6;
/// Fraction of the center curvature length below which the center series
/// replaces the quadrature inversion.
const CENTER_BAND: f64 = 1e-3;

/// 1 - r^e for r in (0, 1], computed without cancellation near r = 1.
pub(crate) fn one_minus_pow(r: f64, e: f64) -> f64 {
    -f64::exp_m1(e * f64::ln_1p(r - 1.0))
}

/// omega (1 - (1 - w^2)^e): the first-integral radicand at s = phi_0 (1 - w^2),
/// exact near the peak because ln(1 - w^2) is formed from w directly.
fn peak_radicand(omega: f64, e: f64, w: f64) -> f64 {
    omega * (-f64::exp_m1(e * f64::ln_1p(-w * w)))
}

/// The pair (p, omega) plus the nonlinearity coefficient gamma.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WaveParams {
    pub p: f64,
    pub omega: f64,
    pub gamma: f64,
}

impl WaveParams {
    pub fn new(p: f64, omega: f64, gamma: f64) -> Result<Self> {
        if !(p.is_finite() && p > 2.0) {
            return Err(Error::Domain(format!("need p > 2, got {p}")));
        }
        if !(omega.is_finite() && omega > 0.0) {
            return Err(Error::Domain(format!("need omega > 0, got {omega}")));
        }
        if !(gamma.is_finite() && gamma > 0.0) {
            return Err(Error::Domain(format!("need gamma > 0, got {gamma}")));
        }
        Ok(Self { p, omega, gamma })
    }

    /// The natural wave of the PDE models (gamma = 1).
    pub fn natural(p: f64, omega: f64) -> Result<Self> {
        Self::new(p, omega, 1.0)
    }

    /// Peak amplitude phi_0 = (p omega / (2 gamma))^{1/(p-2)}.
    pub fn amplitude(&self) -> f64 {
        (self.p * self.omega / (2.0 * self.gamma)).powf(1.0 / (self.p - 2.0))
    }
}

/// int_0^1 dz / sqrt(z - z^{p/2}), the support quadrature.
pub fn support_quadrature(p: f64) -> Result<f64> {
    let f = SingularIntegrand::with_exponents(
        move |z: f64| 1.0 / (z * one_minus_pow(z, p / 2.0 - 1.0)).sqrt(),
        0.0,
        1.0,
        0.5,
        0.5,
    )?;
    integrate_singular(&f, 1e-12)
}

/// int_0^1 z^2 / sqrt(1 - z^{p-2}) dz, the mass moment.
pub fn mass_moment_quadrature(p: f64) -> Result<f64> {
    let f = SingularIntegrand::with_exponents(
        move |z: f64| z * z / one_minus_pow(z, p - 2.0).sqrt(),
        0.0,
        1.0,
        0.0,
        0.5,
    )?;
    integrate_singular(&f, 1e-12)
}

/// Closed form of the mass int phi^2 dx for the natural wave (gamma = 1):
/// 2 (p/2)^{3/(p-2)} omega^{(8-p)/(2(p-2))} int_0^1 z^2 / sqrt(1 - z^{p-2}) dz.
pub fn mass_closed_form(p: f64, omega: f64) -> Result<f64> {
    WaveParams::natural(p, omega)?;
    Ok(2.0
        * (p / 2.0).powf(3.0 / (p - 2.0))
        * omega.powf((8.0 - p) / (2.0 * (p - 2.0)))
        * mass_moment_quadrature(p)?)
}

/// The normalization coefficient c(omega, p) for the unit-L^p-mass wave:
///
/// c = (p/2)^{3/(p+1)} omega^{(p+4)/(2(p+1))}
///     (2 int_0^1 sqrt(z - z^{p/2}) dz + int_0^1 z / sqrt(z - z^{p/2}) dz)^{(p-2)/(p+1)}.
pub fn c_coefficient(p: f64, omega: f64) -> Result<f64> {
    WaveParams::natural(p, omega)?;
    let root = move |z: f64| (z * one_minus_pow(z, p / 2.0 - 1.0)).sqrt();
    let a1 = integrate_singular(
        &SingularIntegrand::with_exponents(root, 0.0, 1.0, 0.5, 0.5)?,
        1e-12,
    )?;
    let a2 = integrate_singular(
        &SingularIntegrand::with_exponents(move |z: f64| z / root(z), 0.0, 1.0, 0.5, 0.5)?,
        1e-12,
    )?;
    let a = 2.0 * a1 + a2;
    Ok((p / 2.0).powf(3.0 / (p + 1.0))
        * omega.powf((p + 4.0) / (2.0 * (p + 1.0)))
        * a.powf((p - 2.0) / (p + 1.0)))
}

/// Integral functionals of a profile. All are computed by the
/// phi-substitution quadrature dx = -dphi / sqrt(omega - (2 gamma/p) phi^{p-2}).
#[derive(Debug, Clone, Copy, Serialize)]
pub struct WaveFunctionals {
    /// int (phi phi')^2 dx
    pub i1: f64,
    /// int phi^2 dx (the mass)
    pub i2: f64,
    /// int phi^p dx
    pub i3: f64,
    /// (1/2) i1 - (1/p) i3
    pub hamiltonian: f64,
    /// i3^{(p-2)/(p+1)}: for gamma = 1 this equals c(omega, p)
    pub c_norm: f64,
}

/// The unique bell-shaped compacton for given parameters.
#[derive(Debug, Clone)]
pub struct CompactonProfile {
    params: WaveParams,
    half_support: f64,
    amplitude: f64,
}

impl CompactonProfile {
    /// Build the profile: L by the support quadrature, evaluators by
    /// inversion of the abscissa map.
    pub fn build(params: WaveParams) -> Result<Self> {
        let amplitude = params.amplitude();
        let half_support = amplitude / (2.0 * params.omega.sqrt()) * support_quadrature(params.p)?;
        Ok(Self {
            params,
            half_support,
            amplitude,
        })
    }

    pub fn params(&self) -> WaveParams {
        self.params
    }

    pub fn half_support(&self) -> f64 {
        self.half_support
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    /// omega (1 - (phi/phi_0)^{p-2}) = omega - (2 gamma / p) phi^{p-2},
    /// the square of phi' on the support. Clamped at zero.
    pub fn first_integral_radicand(&self, phi: f64) -> f64 {
        if phi <= 0.0 {
            return self.params.omega;
        }
        let r = phi / self.amplitude;
        if r >= 1.0 {
            return 0.0;
        }
        (self.params.omega * one_minus_pow(r, self.params.p - 2.0)).max(0.0)
    }

    /// Forward abscissa map x(phi) = int_phi^{phi_0} ds / sqrt(omega - (2 gamma/p) s^{p-2}),
    /// the distance from the peak at which the profile takes the value phi.
    ///
    /// Evaluated in the variable w = sqrt(1 - s/phi_0), which removes the
    /// square-root singularity at the peak and keeps the radicand accurate
    /// to full precision arbitrarily close to it.
    pub fn x_of_phi(&self, phi: f64) -> Result<f64> {
        if !(0.0..=self.amplitude).contains(&phi) {
            return Err(Error::Domain(format!(
                "phi = {phi} outside [0, {}]",
                self.amplitude
            )));
        }
        let omega = self.params.omega;
        let e = self.params.p - 2.0;
        let phi0 = self.amplitude;
        let w1 = ((phi0 - phi) / phi0).max(0.0).sqrt();
        let f = SingularIntegrand::new(
            move |w: f64| 2.0 * phi0 * w / peak_radicand(omega, e, w).sqrt(),
            0.0,
            w1,
        )?;
        integrate_singular(&f, QUAD_TOL)
    }

    /// phi at the distance `ax >= 0` from the peak.
    fn phi_at_abs(&self, ax: f64) -> f64 {
        let l = self.half_support;
        if ax >= l {
            return 0.0;
        }
        let omega = self.params.omega;
        let p = self.params.p;
        if ax >= l * (1.0 - EDGE_BAND) {
            // Boundary asymptotic Q = omega (L - |x|)^2 + O((L - |x|)^3).
            return omega.sqrt() * (l - ax);
        }
        let q0 = self.amplitude * self.amplitude;
        let center_len = (q0 / (omega * (p - 2.0))).sqrt();
        if ax <= CENTER_BAND * center_len {
            // Even series of Q about the peak.
            let x2 = ax * ax;
            let q = q0 - 0.5 * omega * (p - 2.0) * x2
                + omega * omega * p * (p - 2.0) * (p - 2.0) / (48.0 * q0) * x2 * x2;
            return q.max(0.0).sqrt();
        }
        let target = ax;
        let root = bracket_root(
            |phi| self.x_of_phi(phi).unwrap_or(f64::NAN) - target,
            0.0,
            self.amplitude,
            1e-13 * self.amplitude,
        );
        // The abscissa map is monotone and finite on the bracket; failure here
        // would indicate a quadrature breakdown, which the tolerances rule out.
        root.expect("abscissa inversion")
    }

    /// phi(x); zero outside the support, even in x.
    pub fn phi(&self, x: f64) -> f64 {
        self.phi_at_abs(x.abs())
    }

    /// phi'(x) = -sign(x) sqrt(omega - (2 gamma/p) phi^{p-2}) inside the
    /// support, zero outside.
    pub fn dphi(&self, x: f64) -> f64 {
        let ax = x.abs();
        if ax >= self.half_support {
            return 0.0;
        }
        let slope = self.first_integral_radicand(self.phi_at_abs(ax)).sqrt();
        if x > 0.0 {
            -slope
        } else if x < 0.0 {
            slope
        } else {
            0.0
        }
    }

    /// Q(x) = phi^2(x).
    pub fn q(&self, x: f64) -> f64 {
        let v = self.phi_at_abs(x.abs());
        v * v
    }

    /// I1, I2, I3 and derived quantities by phi-substitution quadrature,
    /// in the same peak-regular variable as `x_of_phi`:
    ///
    ///   int g(phi) / sqrt(radicand) dphi = int g(phi_0 (1-w^2)) 2 phi_0 w / sqrt(rad(w)) dw.
    pub fn functionals(&self) -> Result<WaveFunctionals> {
        let omega = self.params.omega;
        let p = self.params.p;
        let phi0 = self.amplitude;
        let e = p - 2.0;

        // g(s, radicand) integrated over w in (0, 1).
        let quad = |g: Box<dyn Fn(f64, f64) -> f64>| -> Result<f64> {
            let f = SingularIntegrand::new(
                move |w: f64| {
                    let s = phi0 * (1.0 - w * w);
                    let rad = peak_radicand(omega, e, w);
                    2.0 * phi0 * w * g(s, rad)
                },
                0.0,
                1.0,
            )?;
            // Two passes: a coarse estimate sets the absolute tolerance scale.
            let coarse = integrate_singular(&f, 1e-6)?;
            let tol = 1e-12 * (1.0 + coarse.abs());
            integrate_singular(&f, tol)
        };

        let i1 = 2.0 * quad(Box::new(move |s, rad| s * s * rad.sqrt()))?;
        let i2 = 2.0 * quad(Box::new(move |s, rad| s * s / rad.sqrt()))?;
        let i3 = 2.0 * quad(Box::new(move |s, rad| s.powf(p) / rad.sqrt()))?;
        Ok(WaveFunctionals {
            i1,
            i2,
            i3,
            hamiltonian: 0.5 * i1 - i3 / p,
            c_norm: i3.powf((p - 2.0) / (p + 1.0)),
        })
    }
}

/// The normalized minimizer Phi_omega: the profile with gamma = c(omega, p),
/// which carries unit L^p mass.
pub fn normalized_profile(p: f64, omega: f64) -> Result<CompactonProfile> {
    let c = c_coefficient(p, omega)?;
    CompactonProfile::build(WaveParams::new(p, omega, c)?)
}

/// Evaluate Phi_omega through the scaling law
/// Phi_omega(x) = omega^{1/(2(p+1))} Phi_1(omega^{p/(2p+2)} x),
/// given the normalized profile at omega = 1.
pub fn normalized_scaled_eval(phi1: &CompactonProfile, omega: f64, x: f64) -> f64 {
    let p = phi1.params().p;
    omega.powf(1.0 / (2.0 * (p + 1.0))) * phi1.phi(omega.powf(p / (2.0 * p + 2.0)) * x)
}
