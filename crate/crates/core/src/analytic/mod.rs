//! Closed-form model with continuous (infinite-resolution) phase shifters.

mod allocation;
mod optimum;
mod search;

pub use allocation::{beta_grid, pa_sweep, PaSweep, PaSweepRow, PowerSplit, EPA_BETA};
pub use optimum::{
    optimal_reflect_power, optimal_reflect_power_with, AnalyticRootMaximizer, Boundary,
    GoldenSectionMaximizer, MaximizerRegistry, OptimumMethod, ReflectPowerMaximizer,
    ReflectPowerOptimum, ReflectPowerSearch,
};
pub use search::{golden_section_max, log_grid};

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

use crate::error::{IrsError, Result};
use crate::scenario::Scenario;

/// Average SNR at the IRS in the large-N limit, `2 P_s L_g a_g^2 / s_i^2`.
pub fn gamma0_asymptotic(p_s: f64, l_g: f64, alpha_g_sq: f64, sigma_i_sq: f64) -> Result<f64> {
    if sigma_i_sq <= 0.0 {
        return Err(IrsError::domain("IRS noise power must be positive"));
    }
    if p_s < 0.0 || l_g <= 0.0 || alpha_g_sq <= 0.0 {
        return Err(IrsError::domain("gamma0 inputs must be positive"));
    }
    Ok(2.0 * p_s * l_g * alpha_g_sq / sigma_i_sq)
}

/// Average SNR at the IRS for one set of BS -> IRS channel draws.
pub fn gamma0_empirical(g: &[Complex64], p_s: f64, l_g: f64, sigma_i_sq: f64) -> Result<f64> {
    if g.is_empty() {
        return Err(IrsError::domain("empty channel vector"));
    }
    if sigma_i_sq <= 0.0 {
        return Err(IrsError::domain("IRS noise power must be positive"));
    }
    let energy: f64 = g.iter().map(|x| x.norm_sqr()).sum();
    Ok(p_s * l_g * energy / (g.len() as f64 * sigma_i_sq))
}

/// Common amplification factor when `sum |g|^2` is replaced by its
/// expectation `2 N a_g^2`.
pub fn amplification_factor_asymptotic(
    p_i: f64,
    p_s: f64,
    l_g: f64,
    alpha_g_sq: f64,
    sigma_i_sq: f64,
    n: usize,
) -> f64 {
    (p_i / (n as f64 * (2.0 * p_s * l_g * alpha_g_sq + sigma_i_sq))).sqrt()
}

/// Derived constants of the rational SNR form
/// `(C1 + C2 P_i + C3 sqrt(P_i)) / (C4 P_i + C5)`.
///
/// The stationarity coefficients are for the numerator of the derivative
/// written as `a sqrt(P_i) + b / sqrt(P_i) + c`, obtained by differentiating
/// the rational form directly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SnrCoefficients {
    pub a1: f64,
    pub a2: f64,
    pub a3: f64,
    pub a4: f64,
    pub a5: f64,
    pub a6: f64,
    pub b1: f64,
    pub b2: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub c5: f64,
    pub d_a: f64,
    pub stationarity_a: f64,
    pub stationarity_b: f64,
    pub stationarity_c: f64,
}

impl SnrCoefficients {
    pub fn from_scenario(sc: &Scenario) -> Self {
        let l = &sc.link;
        let (ah, af, ag) = (
            sc.alpha_h_sq.sqrt(),
            sc.alpha_f_sq.sqrt(),
            sc.alpha_g_sq.sqrt(),
        );
        let n = sc.n();
        let (ps, si, su) = (sc.p_s, sc.sigma_i_sq, sc.sigma_u_sq);

        let a1 = PI * l.l_h * l.l_g * sc.alpha_h_sq * sc.alpha_g_sq;
        let a2 = FRAC_PI_2 * l.l_h * sc.alpha_h_sq;
        let a3 = PI * PI / 4.0 * l.l_f * l.l_g * sc.alpha_f_sq * sc.alpha_g_sq;
        let a4 = PI * FRAC_PI_2.sqrt() * ah * af * ag;
        let a5 = 2.0 * l.l_h * l.l_g * l.l_g * l.l_f * sc.alpha_g_sq;
        let a6 = l.l_f * l.l_g * l.l_h;
        let b1 = 2.0 * l.l_f * sc.alpha_f_sq;
        let b2 = 2.0 * l.l_g * sc.alpha_g_sq;

        let c1 = a1 * ps * ps + a2 * ps * si;
        let c2 = a3 * n * ps;
        let c3 = a4 * ps * (n * (a5 * ps + a6 * si)).sqrt();
        let c4 = b1 * si;
        let c5 = b2 * ps * su + su * si;

        let d_a =
            FRAC_PI_2.sqrt() * ah * (n * l.l_h * (2.0 * ps * l.l_g * sc.alpha_g_sq + si)).sqrt();

        SnrCoefficients {
            a1,
            a2,
            a3,
            a4,
            a5,
            a6,
            b1,
            b2,
            c1,
            c2,
            c3,
            c4,
            c5,
            d_a,
            stationarity_a: -c3 * c4,
            stationarity_b: c3 * c5,
            stationarity_c: 2.0 * (c2 * c5 - c1 * c4),
        }
    }

    /// User SNR at reflect power `p_i`.
    pub fn snr(&self, p_i: f64) -> f64 {
        (self.c1 + self.c2 * p_i + self.c3 * p_i.sqrt()) / (self.c4 * p_i + self.c5)
    }

    /// Exact derivative d(snr)/d(P_i).
    pub fn snr_derivative(&self, p_i: f64) -> f64 {
        let x = p_i.sqrt();
        let den = self.c4 * p_i + self.c5;
        (self.stationarity_a * x + self.stationarity_b / x + self.stationarity_c)
            / (2.0 * den * den)
    }

    /// Both candidate stationary points, `(-2ab + c^2 +/- sqrt(c^4 - 4abc^2)) / (2a^2)`.
    /// `None` if the discriminant is negative or `a` vanishes.
    pub fn candidate_roots(&self) -> Option<[f64; 2]> {
        let (a, b, c) = (
            self.stationarity_a,
            self.stationarity_b,
            self.stationarity_c,
        );
        if a == 0.0 {
            return None;
        }
        let disc = c.powi(4) - 4.0 * a * b * c * c;
        if disc < 0.0 {
            return None;
        }
        let base = c * c - 2.0 * a * b;
        let denom = 2.0 * a * a;
        Some([(base + disc.sqrt()) / denom, (base - disc.sqrt()) / denom])
    }

    /// The candidate root that is an actual zero of the derivative, i.e.
    /// whose square root solves `a x^2 + c x + b = 0` with `x > 0`.
    ///
    /// Squaring in the root template admits one spurious candidate, so the
    /// positive quadratic root is selected directly.
    pub fn stationary_point(&self) -> Option<f64> {
        let (a, b, c) = (
            self.stationarity_a,
            self.stationarity_b,
            self.stationarity_c,
        );
        if a == 0.0 {
            return None;
        }
        let disc = c * c - 4.0 * a * b;
        if disc < 0.0 {
            return None;
        }
        // Stable quadratic roots.
        let q = -0.5 * (c + c.signum() * disc.sqrt());
        let roots = [q / a, if q != 0.0 { b / q } else { f64::NAN }];
        roots
            .into_iter()
            .filter(|x| x.is_finite() && *x > 0.0)
            .map(|x| x * x)
            .fold(None, |best: Option<f64>, p| match best {
                Some(q) if self.snr(q) >= self.snr(p) => Some(q),
                _ => Some(p),
            })
    }
}

/// User SNR without phase quantization, via the rational coefficient form.
pub fn snr_user_noqe(sc: &Scenario) -> f64 {
    SnrCoefficients::from_scenario(sc).snr(sc.p_i)
}

/// The same SNR evaluated as received-signal power over noise with the
/// asymptotic amplification factor substituted, without collecting terms.
pub fn snr_user_noqe_direct(sc: &Scenario) -> f64 {
    let l = &sc.link;
    let lambda = amplification_factor_asymptotic(
        sc.p_i,
        sc.p_s,
        l.l_g,
        sc.alpha_g_sq,
        sc.sigma_i_sq,
        sc.n_elements,
    );
    let (ah, af, ag) = (
        sc.alpha_h_sq.sqrt(),
        sc.alpha_f_sq.sqrt(),
        sc.alpha_g_sq.sqrt(),
    );
    let amplitude = FRAC_PI_2.sqrt() * l.l_h.sqrt() * ah
        + FRAC_PI_2 * lambda * sc.n() * (l.l_f * l.l_g).sqrt() * af * ag;
    let noise =
        2.0 * lambda * lambda * sc.n() * l.l_f * sc.alpha_f_sq * sc.sigma_i_sq + sc.sigma_u_sq;
    sc.p_s * amplitude * amplitude / noise
}

/// Limit of the user SNR as `P_i -> infinity`: `(pi^2 / 16) N gamma0`.
pub fn snr_limit_large_pi(sc: &Scenario) -> f64 {
    let gamma0 = 2.0 * sc.p_s * sc.link.l_g * sc.alpha_g_sq / sc.sigma_i_sq;
    PI * PI / 16.0 * sc.n() * gamma0
}

/// Limit as the IRS noise dominates (`s_i^2 -> infinity`).
pub fn snr_limit_noise_dominated(sc: &Scenario) -> f64 {
    let k = SnrCoefficients::from_scenario(sc);
    k.a2 * sc.p_s / (k.b1 * sc.p_i + sc.sigma_u_sq)
}

/// Limit for a noiseless IRS (`s_i^2 -> 0`).
pub fn snr_limit_noiseless_irs(sc: &Scenario) -> f64 {
    let k = SnrCoefficients::from_scenario(sc);
    let (ps, pi, n) = (sc.p_s, sc.p_i, sc.n());
    (k.a1 * ps * ps + k.a3 * n * ps * pi + k.a4 * ps * (k.a5 * n * ps * pi).sqrt())
        / (k.b2 * ps * sc.sigma_u_sq)
}
