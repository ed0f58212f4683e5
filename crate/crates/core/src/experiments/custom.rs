use super::{
    db_with_err, Cell, Column, Experiment, PlotStyle, Provenance, ResultTable, RunContext, Sweep,
};
use crate::analytic::snr_user_noqe;
use crate::error::{IrsError, Result};
use crate::montecarlo::simulate_received_snr;
use crate::quantization::{snr_passive, IrsKind, PhaseModel, QuantizerConfig};
use crate::scenario::{linear_to_db, CONFIG_KEYS};

/// Sweeps any scalar configuration key and reports closed-form and simulated
/// user SNR for both IRS kinds.
pub struct Custom;

const VECTOR_KEYS: [&str; 3] = ["bs_pos", "irs_pos", "user_pos"];

fn unit_of(key: &str) -> &'static str {
    if key.ends_with("_dbm") {
        "dBm"
    } else if key.ends_with("_db") {
        "dB"
    } else if key == "n_elements" {
        "count"
    } else if key == "ref_distance" {
        "m"
    } else {
        "-"
    }
}

impl Experiment for Custom {
    fn name(&self) -> &'static str {
        "custom"
    }

    fn about(&self) -> &'static str {
        "User SNR over a sweep of any scalar configuration key"
    }

    fn default_sweep(&self) -> Option<Sweep> {
        None
    }

    fn run(&self, ctx: &RunContext<'_>) -> Result<Vec<ResultTable>> {
        let var = ctx.sweep.variable.as_str();
        if !CONFIG_KEYS.contains(&var) || VECTOR_KEYS.contains(&var) {
            return Err(IrsError::InvalidConfig(format!(
                "`{var}` is not a scalar configuration key"
            )));
        }
        // Resolve every grid point before simulating anything.
        let scenarios = ctx
            .sweep
            .grid
            .iter()
            .map(|&x| {
                let mut cfg = ctx.config.clone();
                cfg.apply_overrides(&[format!("{var}={x}")])?;
                cfg.resolve()
            })
            .collect::<Result<Vec<_>>>()?;
        let mut t = ctx.table(
            "custom",
            &format!("SNR at user versus {var}"),
            vec![
                Column::new(var, unit_of(var)),
                Column::new("series", "-"),
                Column::new("provenance", "-"),
                Column::new("SNR", "dB"),
                Column::new("std_err", "dB"),
            ],
            PlotStyle::line(var, "SNR", "series"),
            true,
        );
        let unquantized = QuantizerConfig::new(crate::quantization::MAX_BITS)?;
        for (&x, sc) in ctx.sweep.grid.iter().zip(&scenarios) {
            for kind in [IrsKind::Active, IrsKind::Passive] {
                let closed = match kind {
                    IrsKind::Active => snr_user_noqe(sc),
                    IrsKind::Passive => snr_passive(sc, &unquantized, PhaseModel::ExactNoQe),
                };
                let (mean, se) =
                    simulate_received_snr(sc, None, kind, ctx.trials, ctx.seed, ctx.parallel)?;
                let (mc_db, mc_err) = db_with_err(mean, se);
                let k = kind.as_str();
                t.push(vec![
                    x.into(),
                    format!("{k} closed-form").into(),
                    Provenance::Analytic.into(),
                    linear_to_db(closed).into(),
                    Cell::Empty,
                ]);
                t.push(vec![
                    x.into(),
                    format!("{k} simulated").into(),
                    Provenance::MonteCarlo.into(),
                    mc_db.into(),
                    mc_err.into(),
                ]);
            }
        }
        Ok(vec![t])
    }
}
