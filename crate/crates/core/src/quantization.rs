//! Finite-resolution phase shifters: the k-bit phase set, quantization error
//! statistics and the resulting SNR / rate / BER losses for active and
//! passive IRS.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use crate::analytic::SnrCoefficients;
use crate::error::{IrsError, Result};
use crate::scenario::Scenario;

/// Largest supported bit count; beyond this the phase step is below f64
/// resolution on `[0, 2 pi)`.
pub const MAX_BITS: u32 = 52;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum IrsKind {
    Active,
    Passive,
}

impl IrsKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            IrsKind::Active => "active",
            IrsKind::Passive => "passive",
        }
    }
}

/// Which mean phase-error factor multiplies the reflected amplitude.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PhaseModel {
    /// No quantization error (factor 1).
    ExactNoQe,
    /// Exact mean of `e^{j dtheta}` under uniform error: `sinc(pi / 2^k)`.
    Quantized,
    /// Second-order Taylor approximation `1 - (pi / 2^k)^2 / 6`.
    Taylor,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LossForm {
    Exact,
    Taylor,
}

/// k-bit phase shifter with feasible set
/// `{pi/2^k, 3 pi/2^k, ..., (2^{k+1} - 1) pi/2^k}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuantizerConfig {
    bits: u32,
    half_width: f64,
}

impl QuantizerConfig {
    pub fn new(bits: u32) -> Result<Self> {
        if bits < 1 {
            return Err(IrsError::domain("quantizer needs at least one bit"));
        }
        if bits > MAX_BITS {
            return Err(IrsError::domain(format!(
                "at most {MAX_BITS} bits are supported"
            )));
        }
        Ok(QuantizerConfig {
            bits,
            half_width: PI / 2f64.powi(bits as i32),
        })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Half-width of the quantization error interval, `pi / 2^k`.
    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    pub fn levels(&self) -> u64 {
        1u64 << self.bits
    }

    pub fn phases(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.levels()).map(move |m| (2 * m + 1) as f64 * self.half_width)
    }

    /// Nearest feasible phase in circular distance and the error
    /// `theta_q - theta` wrapped to `[-pi, pi)`. Exact ties go to the
    /// smaller phase value.
    pub fn quantize(&self, theta: f64) -> (f64, f64) {
        let t = theta.rem_euclid(TAU);
        let step = 2.0 * self.half_width;
        let levels = self.levels() as f64;
        let pos = t / step - 0.5;
        let lo = pos.floor();
        let hi = lo + 1.0;
        let wrap = |m: f64| m.rem_euclid(levels);
        let m = match (pos - lo).partial_cmp(&(hi - pos)) {
            Some(std::cmp::Ordering::Less) => wrap(lo),
            Some(std::cmp::Ordering::Greater) => wrap(hi),
            _ => wrap(lo).min(wrap(hi)),
        };
        let theta_q = (m + 0.5) * step;
        (theta_q, wrap_to_pi(theta_q - t))
    }

    pub fn mean_factor(&self) -> f64 {
        sinc(self.half_width)
    }

    pub fn mean_factor_taylor(&self) -> f64 {
        1.0 - self.half_width * self.half_width / 6.0
    }

    fn factor(&self, model: PhaseModel) -> f64 {
        match model {
            PhaseModel::ExactNoQe => 1.0,
            PhaseModel::Quantized => self.mean_factor(),
            PhaseModel::Taylor => self.mean_factor_taylor(),
        }
    }
}

fn wrap_to_pi(x: f64) -> f64 {
    (x + PI).rem_euclid(TAU) - PI
}

fn sinc(x: f64) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        x.sin() / x
    }
}

/// `E[e^{j dtheta}] = sinc(pi / 2^k)` for a uniform quantization error.
pub fn qe_mean_factor(bits: u32) -> Result<f64> {
    Ok(QuantizerConfig::new(bits)?.mean_factor())
}

pub fn qe_mean_factor_taylor(bits: u32) -> Result<f64> {
    Ok(QuantizerConfig::new(bits)?.mean_factor_taylor())
}

/// Reflected-path amplitude scale without the phase factor, for the active
/// IRS: `(pi/2) N sqrt(P_i L_f L_g) a_f a_g`.
fn active_reflect_amplitude(sc: &Scenario) -> f64 {
    FRAC_PI_2
        * sc.n()
        * (sc.p_i * sc.link.l_f * sc.link.l_g).sqrt()
        * (sc.alpha_f_sq * sc.alpha_g_sq).sqrt()
}

fn passive_reflect_amplitude(sc: &Scenario) -> f64 {
    FRAC_PI_2 * sc.n() * (sc.link.l_f * sc.link.l_g).sqrt() * (sc.alpha_f_sq * sc.alpha_g_sq).sqrt()
}

/// Direct-link term for the passive IRS, `sqrt(pi/2) sqrt(L_h) a_h`.
fn passive_direct_amplitude(sc: &Scenario) -> f64 {
    FRAC_PI_2.sqrt() * sc.link.l_h.sqrt() * sc.alpha_h_sq.sqrt()
}

fn active_noise(sc: &Scenario) -> f64 {
    let l = &sc.link;
    2.0 * sc.n() * sc.p_i * l.l_f * sc.alpha_f_sq * sc.sigma_i_sq
        + sc.n() * sc.sigma_u_sq * (2.0 * sc.p_s * l.l_g * sc.alpha_g_sq + sc.sigma_i_sq)
}

pub fn snr_active(sc: &Scenario, q: &QuantizerConfig, model: PhaseModel) -> f64 {
    let d_a = SnrCoefficients::from_scenario(sc).d_a;
    let amp = d_a + active_reflect_amplitude(sc) * q.factor(model);
    sc.p_s * amp * amp / active_noise(sc)
}

pub fn snr_passive(sc: &Scenario, q: &QuantizerConfig, model: PhaseModel) -> f64 {
    let amp = passive_direct_amplitude(sc) + passive_reflect_amplitude(sc) * q.factor(model);
    sc.p_s * amp * amp / sc.sigma_u_sq
}

pub fn snr(sc: &Scenario, q: &QuantizerConfig, kind: IrsKind, model: PhaseModel) -> f64 {
    match kind {
        IrsKind::Active => snr_active(sc, q, model),
        IrsKind::Passive => snr_passive(sc, q, model),
    }
}

/// SNR loss (linear, >= 1) in its collected form
/// `(1 + r (1 - F) / (D / N + r F))^2`, where `r` is the per-element
/// reflected amplitude and `F` the phase factor.
pub fn loss_snr(sc: &Scenario, q: &QuantizerConfig, kind: IrsKind, form: LossForm) -> f64 {
    let n = sc.n();
    let (direct, reflect) = match kind {
        IrsKind::Active => (
            SnrCoefficients::from_scenario(sc).d_a,
            active_reflect_amplitude(sc) / n,
        ),
        IrsKind::Passive => (
            passive_direct_amplitude(sc),
            passive_reflect_amplitude(sc) / n,
        ),
    };
    let factor = match form {
        LossForm::Exact => q.mean_factor(),
        LossForm::Taylor => q.mean_factor_taylor(),
    };
    let ratio = 1.0 + reflect * (1.0 - factor) / (direct / n + reflect * factor);
    ratio * ratio
}

/// `log2(1 + snr)` in bits/s/Hz.
pub fn achievable_rate(snr: f64) -> Result<f64> {
    if snr < 0.0 || snr.is_nan() {
        return Err(IrsError::domain("SNR must be non-negative"));
    }
    Ok(snr.ln_1p() / std::f64::consts::LN_2)
}

/// Gaussian tail probability `P(X > z)`, `X ~ N(0, 1)`.
pub fn q_function(z: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(z / std::f64::consts::SQRT_2)
}

/// QPSK bit error rate approximation `Q(sqrt(snr))`. Negative inputs are
/// treated as zero SNR.
pub fn ber_qpsk(snr: f64) -> f64 {
    q_function(snr.max(0.0).sqrt())
}

/// Performance of one IRS kind with and without quantization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LossReport {
    pub snr_exact: f64,
    pub snr_quantized: f64,
    pub snr_taylor: f64,
    pub loss: f64,
    pub loss_approx: f64,
    pub ar_exact: f64,
    pub ar_quantized: f64,
    pub ar_taylor: f64,
    pub ber_exact: f64,
    pub ber_quantized: f64,
    pub ber_taylor: f64,
}

impl LossReport {
    pub fn evaluate(sc: &Scenario, q: &QuantizerConfig, kind: IrsKind) -> Result<Self> {
        let snr_exact = snr(sc, q, kind, PhaseModel::ExactNoQe);
        let snr_quantized = snr(sc, q, kind, PhaseModel::Quantized);
        let snr_taylor = snr(sc, q, kind, PhaseModel::Taylor);
        Ok(LossReport {
            snr_exact,
            snr_quantized,
            snr_taylor,
            loss: loss_snr(sc, q, kind, LossForm::Exact),
            loss_approx: loss_snr(sc, q, kind, LossForm::Taylor),
            ar_exact: achievable_rate(snr_exact)?,
            ar_quantized: achievable_rate(snr_quantized)?,
            ar_taylor: achievable_rate(snr_taylor)?,
            ber_exact: ber_qpsk(snr_exact),
            ber_quantized: ber_qpsk(snr_quantized),
            ber_taylor: ber_qpsk(snr_taylor),
        })
    }
}
