//! Channel-simulation oracle. Draws Rayleigh realizations, applies the exact
//! per-realization amplification factor, discrete phase shifts and amplified
//! noise, and estimates the true received SNR.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::analytic::gamma0_empirical;
use crate::error::{IrsError, Result};
use crate::quantization::{IrsKind, QuantizerConfig};
use crate::scenario::Scenario;

pub const DEFAULT_TRIALS: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    /// BS to user.
    pub h: Complex64,
    /// BS to IRS, one entry per element.
    pub g: Vec<Complex64>,
    /// IRS to user, one entry per element.
    pub f: Vec<Complex64>,
}

impl ChannelRealization {
    pub fn n(&self) -> usize {
        self.g.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialResult {
    pub snr: f64,
    pub signal_power: f64,
    pub amplified_noise_power: f64,
    pub receiver_noise_power: f64,
    pub lambda_a_exact: f64,
}

/// RNG for one trial. Each trial owns the ChaCha stream numbered by its
/// index, so trials can run in any order.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

fn complex_normal<R: Rng>(rng: &mut R, std_dev: f64) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re * std_dev, im * std_dev)
}

/// Each coefficient has independent real and imaginary parts of variance
/// `alpha^2`, so `E|x|^2 = 2 alpha^2`.
pub fn sample_channels_from<R: Rng>(sc: &Scenario, rng: &mut R) -> ChannelRealization {
    let (sh, sg, sf) = (
        sc.alpha_h_sq.sqrt(),
        sc.alpha_g_sq.sqrt(),
        sc.alpha_f_sq.sqrt(),
    );
    let h = complex_normal(rng, sh);
    let g = (0..sc.n_elements)
        .map(|_| complex_normal(rng, sg))
        .collect();
    let f = (0..sc.n_elements)
        .map(|_| complex_normal(rng, sf))
        .collect();
    ChannelRealization { h, g, f }
}

pub fn sample_channels(sc: &Scenario, seed: u64) -> ChannelRealization {
    sample_channels_from(sc, &mut trial_rng(seed, 0))
}

/// Common gain that makes the total reflected power equal `p_i` for this
/// realization.
pub fn amplification_factor_exact(
    real: &ChannelRealization,
    p_i: f64,
    p_s: f64,
    l_g: f64,
    sigma_i_sq: f64,
) -> f64 {
    let g_energy: f64 = real.g.iter().map(|g| g.norm_sqr()).sum();
    (p_i / (p_s * l_g * g_energy + real.n() as f64 * sigma_i_sq)).sqrt()
}

/// Total power leaving the IRS: signal plus amplified noise over all
/// elements, for per-element gain `lambda`.
pub fn reflected_power(
    real: &ChannelRealization,
    lambda: f64,
    p_s: f64,
    l_g: f64,
    sigma_i_sq: f64,
) -> f64 {
    real.g
        .iter()
        .map(|g| lambda * lambda * (p_s * l_g * g.norm_sqr() + sigma_i_sq))
        .sum()
}

/// Evaluates one realization. Phases are aligned against the realization's
/// own direct-link phase, then quantized when `q` is given.
pub fn evaluate_trial(
    sc: &Scenario,
    real: &ChannelRealization,
    q: Option<&QuantizerConfig>,
    kind: IrsKind,
) -> TrialResult {
    let link = &sc.link;
    let lambda = match kind {
        IrsKind::Active => {
            amplification_factor_exact(real, sc.p_i, sc.p_s, link.l_g, sc.sigma_i_sq)
        }
        IrsKind::Passive => 1.0,
    };
    let theta_h = real.h.arg();
    let mut reflected = Complex64::new(0.0, 0.0);
    let mut f_energy = 0.0;
    for (f, g) in real.f.iter().zip(&real.g) {
        let ideal = f.arg() - g.arg() - theta_h;
        let theta = match q {
            Some(q) => q.quantize(ideal).0,
            None => ideal,
        };
        reflected += f.conj() * g * Complex64::from_polar(lambda, theta);
        f_energy += f.norm_sqr();
    }
    let composite = link.l_h.sqrt() * real.h.conj() + (link.l_f * link.l_g).sqrt() * reflected;
    let signal_power = sc.p_s * composite.norm_sqr();
    let amplified_noise_power = match kind {
        IrsKind::Active => link.l_f * sc.sigma_i_sq * lambda * lambda * f_energy,
        IrsKind::Passive => 0.0,
    };
    let receiver_noise_power = sc.sigma_u_sq;
    TrialResult {
        snr: signal_power / (amplified_noise_power + receiver_noise_power),
        signal_power,
        amplified_noise_power,
        receiver_noise_power,
        lambda_a_exact: lambda,
    }
}

/// Sample mean and standard error of the mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub std_err: f64,
}

fn pairwise_sum(xs: &[f64]) -> f64 {
    if xs.len() <= 16 {
        return xs.iter().sum();
    }
    let (a, b) = xs.split_at(xs.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

impl Estimate {
    pub fn from_samples(xs: &[f64]) -> Self {
        let n = xs.len() as f64;
        let mean = pairwise_sum(xs) / n;
        if xs.len() < 2 {
            return Estimate { mean, std_err: 0.0 };
        }
        let dev: Vec<f64> = xs.iter().map(|x| (x - mean) * (x - mean)).collect();
        let var = pairwise_sum(&dev) / (n - 1.0);
        Estimate {
            mean,
            std_err: (var / n).sqrt(),
        }
    }
}

/// Runs `trials` independent realizations, in parallel if asked. Output is
/// collected in trial order, so the result does not depend on scheduling.
pub fn run_trials<T, F>(trials: usize, seed: u64, parallel: bool, body: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(&mut ChaCha8Rng) -> T + Sync,
{
    if trials == 0 {
        return Err(IrsError::domain("at least one trial is required"));
    }
    let one = |t: usize| body(&mut trial_rng(seed, t as u64));
    Ok(if parallel {
        (0..trials).into_par_iter().map(one).collect()
    } else {
        (0..trials).map(one).collect()
    })
}

pub fn simulate_trials(
    sc: &Scenario,
    q: Option<&QuantizerConfig>,
    kind: IrsKind,
    trials: usize,
    seed: u64,
    parallel: bool,
) -> Result<Vec<TrialResult>> {
    run_trials(trials, seed, parallel, |rng| {
        let real = sample_channels_from(sc, rng);
        evaluate_trial(sc, &real, q, kind)
    })
}

/// Mean received SNR (linear) and its standard error.
pub fn simulate_received_snr(
    sc: &Scenario,
    q: Option<&QuantizerConfig>,
    kind: IrsKind,
    trials: usize,
    seed: u64,
    parallel: bool,
) -> Result<(f64, f64)> {
    let snrs: Vec<f64> = simulate_trials(sc, q, kind, trials, seed, parallel)?
        .iter()
        .map(|t| t.snr)
        .collect();
    let est = Estimate::from_samples(&snrs);
    Ok((est.mean, est.std_err))
}

/// Empirical SNR loss for one bit count, measured on the same realizations
/// as the unquantized reference.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmpiricalLoss {
    pub bits: u32,
    pub snr_exact: Estimate,
    pub snr_quantized: Estimate,
    /// `mean(snr_exact) / mean(snr_quantized)`.
    pub loss: f64,
    /// Standard error of `10 log10(loss)`, accounting for the pairing.
    pub loss_std_err_db: f64,
}

/// Delta-method standard error of `10 log10(mean(a) / mean(b))` for paired
/// samples.
fn log_ratio_std_err_db(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len() as f64;
    if a.len() < 2 {
        return 0.0;
    }
    let (ma, mb) = (pairwise_sum(a) / n, pairwise_sum(b) / n);
    // per-trial influence of each sample on ln(ma / mb)
    let infl: Vec<f64> = a.iter().zip(b).map(|(x, y)| x / ma - y / mb).collect();
    let mean = pairwise_sum(&infl) / n;
    let dev: Vec<f64> = infl.iter().map(|v| (v - mean) * (v - mean)).collect();
    let var = pairwise_sum(&dev) / (n - 1.0);
    10.0 / std::f64::consts::LN_10 * (var / n).sqrt()
}

pub fn simulate_quantization_loss(
    sc: &Scenario,
    bits: &[u32],
    kind: IrsKind,
    trials: usize,
    seed: u64,
    parallel: bool,
) -> Result<Vec<EmpiricalLoss>> {
    let quantizers = bits
        .iter()
        .map(|&k| QuantizerConfig::new(k))
        .collect::<Result<Vec<_>>>()?;
    let rows = run_trials(trials, seed, parallel, |rng| {
        let real = sample_channels_from(sc, rng);
        let mut out = Vec::with_capacity(quantizers.len() + 1);
        out.push(evaluate_trial(sc, &real, None, kind).snr);
        out.extend(
            quantizers
                .iter()
                .map(|q| evaluate_trial(sc, &real, Some(q), kind).snr),
        );
        out
    })?;
    let column = |j: usize| rows.iter().map(|r| r[j]).collect::<Vec<f64>>();
    let exact_samples = column(0);
    let exact = Estimate::from_samples(&exact_samples);
    Ok(bits
        .iter()
        .enumerate()
        .map(|(i, &k)| {
            let samples = column(i + 1);
            let quantized = Estimate::from_samples(&samples);
            EmpiricalLoss {
                bits: k,
                snr_exact: exact,
                snr_quantized: quantized,
                loss: exact.mean / quantized.mean,
                loss_std_err_db: log_ratio_std_err_db(&exact_samples, &samples),
            }
        })
        .collect())
}

/// Average SNR at the IRS measured from sampled BS to IRS channels.
pub fn simulate_gamma0(
    sc: &Scenario,
    trials: usize,
    seed: u64,
    parallel: bool,
) -> Result<Estimate> {
    let samples = run_trials(trials, seed, parallel, |rng| {
        let real = sample_channels_from(sc, rng);
        gamma0_empirical(&real.g, sc.p_s, sc.link.l_g, sc.sigma_i_sq)
    })?
    .into_iter()
    .collect::<Result<Vec<f64>>>()?;
    Ok(Estimate::from_samples(&samples))
}

/// Compares the mean received signal power with the power of the mean
/// signal amplitude. The closed-form model squares the expectation of the
/// amplitude, so `ratio_db` is the bias that approximation carries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignalBias {
    pub mean_power: f64,
    pub power_of_mean: f64,
    pub ratio_db: f64,
}

pub fn signal_bias_diagnostic(
    sc: &Scenario,
    kind: IrsKind,
    trials: usize,
    seed: u64,
    parallel: bool,
) -> Result<SignalBias> {
    let results = simulate_trials(sc, None, kind, trials, seed, parallel)?;
    let powers: Vec<f64> = results.iter().map(|t| t.signal_power).collect();
    let amps: Vec<f64> = powers.iter().map(|p| p.sqrt()).collect();
    let mean_power = Estimate::from_samples(&powers).mean;
    let mean_amp = Estimate::from_samples(&amps).mean;
    let power_of_mean = mean_amp * mean_amp;
    Ok(SignalBias {
        mean_power,
        power_of_mean,
        ratio_db: crate::scenario::linear_to_db(mean_power / power_of_mean),
    })
}
