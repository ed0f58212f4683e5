use super::{Column, Experiment, PlotStyle, Provenance, ResultTable, RunContext, Sweep};
use crate::analytic::{beta_grid, pa_sweep};
use crate::error::Result;
use crate::scenario::{dbm_to_watts, linear_to_db};

/// Total power budget `P_T` shared between BS and IRS.
pub const TABLE_TOTAL_POWER_DBM: f64 = 20.0;

/// Optimal PA factor and its rate gain over equal allocation, for a list of
/// `(sigma_i^2, sigma_u^2)` pairs in dBm.
fn allocation_tables(
    ctx: &RunContext<'_>,
    name: &str,
    title: &str,
    noise: &[(f64, f64)],
) -> Result<Vec<ResultTable>> {
    let base = ctx.config.resolve()?;
    let p_total = dbm_to_watts(TABLE_TOTAL_POWER_DBM);
    let mut summary = ctx.table(
        name,
        title,
        vec![
            Column::new("sigma_i_sq", "dBm"),
            Column::new("sigma_u_sq", "dBm"),
            Column::new("provenance", "-"),
            Column::new("beta_opt", "-"),
            Column::new("rate_opt", "bits/s/Hz"),
            Column::new("rate_epa", "bits/s/Hz"),
            Column::new("gain", "bits/s/Hz"),
        ],
        PlotStyle::line(
            if name == "table1" {
                "sigma_u_sq"
            } else {
                "sigma_i_sq"
            },
            "gain",
            "provenance",
        ),
        false,
    );
    let mut sweep = ctx.table(
        &format!("{name}-beta"),
        "SNR at user versus power allocation factor",
        vec![
            Column::new("beta", "-"),
            Column::new("series", "-"),
            Column::new("provenance", "-"),
            Column::new("SNR", "dB"),
            Column::new("rate", "bits/s/Hz"),
        ],
        PlotStyle::line("beta", "SNR", "series"),
        false,
    );
    for t in [&mut summary, &mut sweep] {
        t.param("p_total_dbm", TABLE_TOTAL_POWER_DBM);
    }
    for &(si, su) in noise {
        let sc = base.with_noise(dbm_to_watts(si), dbm_to_watts(su));
        let pa = pa_sweep(&sc, p_total, &ctx.sweep.grid)?;
        summary.push(vec![
            si.into(),
            su.into(),
            Provenance::Analytic.into(),
            pa.beta_opt.into(),
            pa.rate_opt.into(),
            pa.rate_epa.into(),
            pa.gain.into(),
        ]);
        let label = format!("sigma_i^2={si} dBm, sigma_u^2={su} dBm");
        for row in &pa.rows {
            sweep.push(vec![
                row.beta.into(),
                label.clone().into(),
                Provenance::Analytic.into(),
                linear_to_db(row.snr).into(),
                row.rate.into(),
            ]);
        }
    }
    Ok(vec![summary, sweep])
}

fn beta_sweep() -> Sweep {
    Sweep::new("beta", beta_grid(0.1))
}

/// Fixed IRS noise, varying user noise.
pub struct Table1;

impl Experiment for Table1 {
    fn name(&self) -> &'static str {
        "table1"
    }

    fn about(&self) -> &'static str {
        "Rate gain of the optimal PA factor over EPA, IRS noise fixed at -100 dBm"
    }

    fn default_sweep(&self) -> Option<Sweep> {
        Some(beta_sweep())
    }

    fn run(&self, ctx: &RunContext<'_>) -> Result<Vec<ResultTable>> {
        let noise: Vec<(f64, f64)> = [-70.0, -80.0, -90.0, -100.0]
            .iter()
            .map(|&u| (-100.0, u))
            .collect();
        allocation_tables(
            ctx,
            "table1",
            "Rate gain of optimal PA over EPA, sigma_i^2 = -100 dBm",
            &noise,
        )
    }
}

/// Fixed user noise, varying IRS noise.
pub struct Table2;

impl Experiment for Table2 {
    fn name(&self) -> &'static str {
        "table2"
    }

    fn about(&self) -> &'static str {
        "Rate gain of the optimal PA factor over EPA, user noise fixed at -100 dBm"
    }

    fn default_sweep(&self) -> Option<Sweep> {
        Some(beta_sweep())
    }

    fn run(&self, ctx: &RunContext<'_>) -> Result<Vec<ResultTable>> {
        let noise: Vec<(f64, f64)> = [-70.0, -80.0, -90.0].iter().map(|&i| (i, -100.0)).collect();
        allocation_tables(
            ctx,
            "table2",
            "Rate gain of optimal PA over EPA, sigma_u^2 = -100 dBm",
            &noise,
        )
    }
}
