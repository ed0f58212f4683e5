use super::{
    db_with_err, Cell, Column, Experiment, PlotStyle, Provenance, ResultTable, RunContext, Sweep,
};
use crate::analytic::{
    gamma0_asymptotic, optimal_reflect_power_with, snr_limit_large_pi, snr_user_noqe, Boundary,
    ReflectPowerSearch, SnrCoefficients,
};
use crate::error::{IrsError, Result};
use crate::montecarlo::{
    simulate_gamma0, simulate_quantization_loss, simulate_received_snr, EmpiricalLoss,
};
use crate::quantization::{achievable_rate, ber_qpsk, IrsKind, LossReport, QuantizerConfig};
use crate::scenario::{dbm_to_watts, linear_to_db, watts_to_dbm, ScenarioConfig};

/// IRS noise levels of the three reflect-power scenarios.
pub const FIG3_SIGMA_I_DBM: [f64; 3] = [-60.0, -65.0, -70.0];

/// Array sizes used for the quantization figures.
pub const QUANT_ELEMENTS: [usize; 2] = [256, 1024];

const ELEMENT_GRID: [f64; 9] = [4.0, 8.0, 16.0, 32.0, 64.0, 128.0, 256.0, 512.0, 1024.0];

fn element_counts(sweep: &Sweep) -> Result<Vec<usize>> {
    sweep
        .grid
        .iter()
        .map(|&x| {
            if x >= 1.0 && x.fract() == 0.0 {
                Ok(x as usize)
            } else {
                Err(IrsError::InvalidConfig(format!(
                    "element count {x} is not a positive integer"
                )))
            }
        })
        .collect()
}

fn bit_counts(sweep: &Sweep) -> Result<Vec<u32>> {
    sweep
        .grid
        .iter()
        .map(|&x| {
            if x >= 1.0 && x.fract() == 0.0 && x <= 52.0 {
                Ok(x as u32)
            } else {
                Err(IrsError::InvalidConfig(format!(
                    "bit count {x} must be an integer in 1..=52"
                )))
            }
        })
        .collect()
}

fn snr_columns(x: Column, y: Column) -> Vec<Column> {
    vec![
        x,
        Column::new("series", "-"),
        Column::new("provenance", "-"),
        y,
        Column::new("std_err", "dB"),
    ]
}

/// Average SNR at the IRS versus element count.
pub struct Fig2a;

impl Experiment for Fig2a {
    fn name(&self) -> &'static str {
        "fig2a"
    }

    fn about(&self) -> &'static str {
        "SNR at the active IRS versus N: asymptotic vs simulated"
    }

    fn default_sweep(&self) -> Option<Sweep> {
        Some(Sweep::new("n_elements", ELEMENT_GRID.to_vec()))
    }

    fn run(&self, ctx: &RunContext<'_>) -> Result<Vec<ResultTable>> {
        let base = ctx.config.resolve()?;
        let mut t = ctx.table(
            "fig2a",
            "SNR at active IRS versus N",
            snr_columns(Column::new("N", "count"), Column::new("gamma0", "dB")),
            PlotStyle::line("N", "gamma0", "series").log_x(),
            true,
        );
        let asym = gamma0_asymptotic(base.p_s, base.link.l_g, base.alpha_g_sq, base.sigma_i_sq)?;
        for n in element_counts(&ctx.sweep)? {
            let sc = base.with_elements(n);
            let est = simulate_gamma0(&sc, ctx.trials, ctx.seed, ctx.parallel)?;
            let (mc_db, mc_err) = db_with_err(est.mean, est.std_err);
            t.push(vec![
                (n as f64).into(),
                "asymptotic".into(),
                Provenance::Analytic.into(),
                linear_to_db(asym).into(),
                Cell::Empty,
            ]);
            t.push(vec![
                (n as f64).into(),
                "actual".into(),
                Provenance::MonteCarlo.into(),
                mc_db.into(),
                mc_err.into(),
            ]);
        }
        Ok(vec![t])
    }
}

/// User SNR versus element count.
pub struct Fig2b;

impl Experiment for Fig2b {
    fn name(&self) -> &'static str {
        "fig2b"
    }

    fn about(&self) -> &'static str {
        "SNR at the user versus N: closed form vs simulated"
    }

    fn default_sweep(&self) -> Option<Sweep> {
        Some(Sweep::new("n_elements", ELEMENT_GRID.to_vec()))
    }

    fn run(&self, ctx: &RunContext<'_>) -> Result<Vec<ResultTable>> {
        let base = ctx.config.resolve()?;
        let mut t = ctx.table(
            "fig2b",
            "SNR at user versus N",
            snr_columns(Column::new("N", "count"), Column::new("SNR", "dB")),
            PlotStyle::line("N", "SNR", "series").log_x(),
            true,
        );
        for n in element_counts(&ctx.sweep)? {
            let sc = base.with_elements(n);
            let (mean, se) = simulate_received_snr(
                &sc,
                None,
                IrsKind::Active,
                ctx.trials,
                ctx.seed,
                ctx.parallel,
            )?;
            let (mc_db, mc_err) = db_with_err(mean, se);
            let closed = linear_to_db(snr_user_noqe(&sc));
            t.push(vec![
                (n as f64).into(),
                "asymptotic".into(),
                Provenance::Analytic.into(),
                closed.into(),
                Cell::Empty,
            ]);
            t.push(vec![
                (n as f64).into(),
                "actual".into(),
                Provenance::MonteCarlo.into(),
                mc_db.into(),
                mc_err.into(),
            ]);
        }
        Ok(vec![t])
    }
}

/// User SNR versus reflect power for three IRS noise levels, plus the
/// located optimum of each curve.
pub struct Fig3;

impl Experiment for Fig3 {
    fn name(&self) -> &'static str {
        "fig3"
    }

    fn about(&self) -> &'static str {
        "SNR at the user versus reflect power, with the optimal reflect power"
    }

    fn preset(&self) -> ScenarioConfig {
        ScenarioConfig {
            sigma_u_sq_dbm: -100.0,
            ..ScenarioConfig::default()
        }
    }

    fn default_sweep(&self) -> Option<Sweep> {
        Some(Sweep::new(
            "pi_dbm",
            (0..=220).map(|i| -60.0 + 0.5 * i as f64).collect(),
        ))
    }

    fn run(&self, ctx: &RunContext<'_>) -> Result<Vec<ResultTable>> {
        let base = ctx.config.resolve()?;
        let mut curve = ctx.table(
            "fig3",
            "SNR versus reflect power at active IRS",
            vec![
                Column::new("P_i", "dBm"),
                Column::new("series", "-"),
                Column::new("provenance", "-"),
                Column::new("SNR", "dB"),
                Column::new("SNR_floor", "dB"),
            ],
            PlotStyle::line("P_i", "SNR", "series"),
            false,
        );
        let mut opt = ctx.table(
            "fig3-optimum",
            "Optimal reflect power",
            vec![
                Column::new("sigma_i_sq", "dBm"),
                Column::new("maximizer", "-"),
                Column::new("provenance", "-"),
                Column::new("P_i_opt", "dBm"),
                Column::new("SNR_opt", "dB"),
                Column::new("grid_peak", "dBm"),
                Column::new("analytic_root", "dBm"),
                Column::new("SNR_floor", "dB"),
                Column::new("boundary", "-"),
            ],
            PlotStyle::line("sigma_i_sq", "P_i_opt", "maximizer"),
            false,
        );
        opt.param("maximizer", ctx.maximizer.name());
        let search = ReflectPowerSearch::default();
        for sigma_i_dbm in FIG3_SIGMA_I_DBM {
            let sc = base.with_noise(dbm_to_watts(sigma_i_dbm), base.sigma_u_sq);
            let coeffs = SnrCoefficients::from_scenario(&sc);
            let floor = linear_to_db(snr_limit_large_pi(&sc));
            let label = format!("sigma_i^2={sigma_i_dbm} dBm");
            for &p_dbm in &ctx.sweep.grid {
                let snr = linear_to_db(coeffs.snr(dbm_to_watts(p_dbm)));
                curve.push(vec![
                    p_dbm.into(),
                    label.clone().into(),
                    Provenance::Analytic.into(),
                    snr.into(),
                    floor.into(),
                ]);
            }
            let o = optimal_reflect_power_with(ctx.maximizer, &sc, &search);
            let boundary = match o.boundary {
                None => "interior",
                Some(Boundary::Lower) => "lower",
                Some(Boundary::Upper) => "upper",
            };
            opt.push(vec![
                sigma_i_dbm.into(),
                ctx.maximizer.name().into(),
                Provenance::Analytic.into(),
                watts_to_dbm(o.p_i_opt).into(),
                linear_to_db(o.snr_at_opt).into(),
                watts_to_dbm(o.grid_peak).into(),
                o.analytic_root.map(watts_to_dbm).into(),
                floor.into(),
                boundary.into(),
            ]);
        }
        Ok(vec![curve, opt])
    }
}

/// Closed-form and simulated results for one IRS kind and array size.
struct QuantPoint {
    bits: u32,
    closed: LossReport,
    empirical: EmpiricalLoss,
}

fn quant_points(ctx: &RunContext<'_>, kind: IrsKind, n: usize) -> Result<Vec<QuantPoint>> {
    let sc = ctx.config.resolve()?.with_elements(n);
    let bits = bit_counts(&ctx.sweep)?;
    let empirical =
        simulate_quantization_loss(&sc, &bits, kind, ctx.trials, ctx.seed, ctx.parallel)?;
    bits.iter()
        .zip(empirical)
        .map(|(&k, empirical)| {
            let q = QuantizerConfig::new(k)?;
            Ok(QuantPoint {
                bits: k,
                closed: LossReport::evaluate(&sc, &q, kind)?,
                empirical,
            })
        })
        .collect()
}

fn quant_table(
    ctx: &RunContext<'_>,
    panel: &str,
    title: &str,
    y: Column,
    plot: PlotStyle,
) -> ResultTable {
    ctx.table(
        panel,
        title,
        vec![
            Column::new("k", "bits"),
            Column::new("N", "count"),
            Column::new("series", "-"),
            Column::new("provenance", "-"),
            y.clone(),
            Column::new("std_err", &y.unit),
        ],
        plot,
        true,
    )
}

fn quant_row(
    p: &QuantPoint,
    n: usize,
    series: &str,
    prov: Provenance,
    value: f64,
    err: Option<f64>,
) -> Vec<Cell> {
    vec![
        (p.bits as f64).into(),
        (n as f64).into(),
        format!("{series} N={n}").into(),
        prov.into(),
        value.into(),
        err.into(),
    ]
}

const KINDS: [IrsKind; 2] = [IrsKind::Active, IrsKind::Passive];

fn bits_sweep() -> Sweep {
    Sweep::new("bits", (1..=6).map(f64::from).collect())
}

/// SNR loss versus quantization bits.
pub struct Fig4;

impl Experiment for Fig4 {
    fn name(&self) -> &'static str {
        "fig4"
    }

    fn about(&self) -> &'static str {
        "SNR loss versus phase-shifter bits (exact, Taylor, simulated)"
    }

    fn default_sweep(&self) -> Option<Sweep> {
        Some(bits_sweep())
    }

    fn run(&self, ctx: &RunContext<'_>) -> Result<Vec<ResultTable>> {
        let mut out = Vec::new();
        for kind in KINDS {
            let mut t = quant_table(
                ctx,
                &format!("fig4-{}", kind.as_str()),
                &format!("SNR loss versus k, {} IRS", kind.as_str()),
                Column::new("loss", "dB"),
                PlotStyle::line("k", "loss", "series"),
            );
            for n in QUANT_ELEMENTS {
                for p in quant_points(ctx, kind, n)? {
                    let e = &p.empirical;
                    let err = e.loss_std_err_db;
                    t.push(quant_row(
                        &p,
                        n,
                        "PL",
                        Provenance::Analytic,
                        linear_to_db(p.closed.loss),
                        None,
                    ));
                    t.push(quant_row(
                        &p,
                        n,
                        "APL",
                        Provenance::Taylor,
                        linear_to_db(p.closed.loss_approx),
                        None,
                    ));
                    t.push(quant_row(
                        &p,
                        n,
                        "empirical",
                        Provenance::MonteCarlo,
                        linear_to_db(e.loss),
                        Some(err),
                    ));
                }
            }
            out.push(t);
        }
        Ok(out)
    }
}

/// Achievable rate versus quantization bits.
pub struct Fig5;

impl Experiment for Fig5 {
    fn name(&self) -> &'static str {
        "fig5"
    }

    fn about(&self) -> &'static str {
        "Achievable rate versus phase-shifter bits"
    }

    fn default_sweep(&self) -> Option<Sweep> {
        Some(bits_sweep())
    }

    fn run(&self, ctx: &RunContext<'_>) -> Result<Vec<ResultTable>> {
        let mut out = Vec::new();
        for kind in KINDS {
            let mut t = quant_table(
                ctx,
                &format!("fig5-{}", kind.as_str()),
                &format!("Achievable rate versus k, {} IRS", kind.as_str()),
                Column::new("AR", "bits/s/Hz"),
                PlotStyle::line("k", "AR", "series"),
            );
            for n in QUANT_ELEMENTS {
                for p in quant_points(ctx, kind, n)? {
                    let c = &p.closed;
                    let e = &p.empirical.snr_quantized;
                    let err = e.std_err / ((1.0 + e.mean) * std::f64::consts::LN_2);
                    t.push(quant_row(
                        &p,
                        n,
                        "no PL",
                        Provenance::Analytic,
                        c.ar_exact,
                        None,
                    ));
                    t.push(quant_row(
                        &p,
                        n,
                        "PL",
                        Provenance::Analytic,
                        c.ar_quantized,
                        None,
                    ));
                    t.push(quant_row(
                        &p,
                        n,
                        "APL",
                        Provenance::Taylor,
                        c.ar_taylor,
                        None,
                    ));
                    t.push(quant_row(
                        &p,
                        n,
                        "empirical",
                        Provenance::MonteCarlo,
                        achievable_rate(e.mean)?,
                        Some(err),
                    ));
                }
            }
            out.push(t);
        }
        Ok(out)
    }
}

/// QPSK bit error rate versus quantization bits.
pub struct Fig6;

impl Experiment for Fig6 {
    fn name(&self) -> &'static str {
        "fig6"
    }

    fn about(&self) -> &'static str {
        "QPSK BER versus phase-shifter bits"
    }

    fn default_sweep(&self) -> Option<Sweep> {
        Some(bits_sweep())
    }

    fn run(&self, ctx: &RunContext<'_>) -> Result<Vec<ResultTable>> {
        let mut out = Vec::new();
        for kind in KINDS {
            let mut t = quant_table(
                ctx,
                &format!("fig6-{}", kind.as_str()),
                &format!("BER versus k, {} IRS", kind.as_str()),
                Column::new("BER", "probability"),
                PlotStyle::line("k", "BER", "series").log_y(),
            );
            for n in QUANT_ELEMENTS {
                for p in quant_points(ctx, kind, n)? {
                    let c = &p.closed;
                    let e = &p.empirical.snr_quantized;
                    // |dQ(sqrt s)/ds| = phi(sqrt s) / (2 sqrt s)
                    let z = e.mean.sqrt();
                    let slope =
                        (-0.5 * z * z).exp() / (2.0 * std::f64::consts::PI).sqrt() / (2.0 * z);
                    t.push(quant_row(
                        &p,
                        n,
                        "no PL",
                        Provenance::Analytic,
                        c.ber_exact,
                        None,
                    ));
                    t.push(quant_row(
                        &p,
                        n,
                        "PL",
                        Provenance::Analytic,
                        c.ber_quantized,
                        None,
                    ));
                    t.push(quant_row(
                        &p,
                        n,
                        "APL",
                        Provenance::Taylor,
                        c.ber_taylor,
                        None,
                    ));
                    t.push(quant_row(
                        &p,
                        n,
                        "empirical",
                        Provenance::MonteCarlo,
                        ber_qpsk(e.mean),
                        Some(slope * e.std_err),
                    ));
                }
            }
            out.push(t);
        }
        Ok(out)
    }
}
