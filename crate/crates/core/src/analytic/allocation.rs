//! Power allocation between BS transmission and IRS reflection under a
//! total power budget.

use super::snr_user_noqe;
use crate::error::{IrsError, Result};
use crate::scenario::Scenario;

/// Equal power allocation baseline.
pub const EPA_BETA: f64 = 0.5;

/// `P_i = beta P_T`, `P_s = P_T - P_i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSplit {
    pub beta: f64,
    pub p_total: f64,
    pub p_s: f64,
    pub p_i: f64,
}

impl PowerSplit {
    pub fn new(beta: f64, p_total: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&beta) {
            return Err(IrsError::domain(format!("PA factor {beta} outside [0, 1]")));
        }
        if !(p_total >= 0.0 && p_total.is_finite()) {
            return Err(IrsError::domain(
                "total power must be finite and non-negative",
            ));
        }
        let p_i = beta * p_total;
        Ok(PowerSplit {
            beta,
            p_total,
            p_s: p_total - p_i,
            p_i,
        })
    }

    pub fn apply(&self, sc: &Scenario) -> Scenario {
        sc.with_transmit_power(self.p_s)
            .with_reflect_power(self.p_i)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PaSweepRow {
    pub beta: f64,
    pub snr: f64,
    /// bits/s/Hz
    pub rate: f64,
    /// Rate minus the equal-allocation rate.
    pub gain: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PaSweep {
    pub rows: Vec<PaSweepRow>,
    pub beta_opt: f64,
    pub rate_opt: f64,
    pub rate_epa: f64,
    /// `rate_opt - rate_epa`, bits/s/Hz.
    pub gain: f64,
}

fn rate_at(sc: &Scenario, beta: f64, p_total: f64) -> Result<(f64, f64)> {
    let snr = snr_user_noqe(&PowerSplit::new(beta, p_total)?.apply(sc));
    Ok((snr, (1.0 + snr).log2()))
}

/// Sweeps the PA factor over `beta_grid` at total power `p_total` (watts).
pub fn pa_sweep(sc: &Scenario, p_total: f64, beta_grid: &[f64]) -> Result<PaSweep> {
    if beta_grid.is_empty() {
        return Err(IrsError::domain("empty PA grid"));
    }
    let (_, rate_epa) = rate_at(sc, EPA_BETA, p_total)?;
    let rows = beta_grid
        .iter()
        .map(|&beta| {
            let (snr, rate) = rate_at(sc, beta, p_total)?;
            Ok(PaSweepRow {
                beta,
                snr,
                rate,
                gain: rate - rate_epa,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let best = rows.iter().fold(
        &rows[0],
        |best, r| if r.rate > best.rate { r } else { best },
    );
    Ok(PaSweep {
        beta_opt: best.beta,
        rate_opt: best.rate,
        rate_epa,
        gain: best.rate - rate_epa,
        rows,
    })
}

/// `0.0, 0.1, ..., 1.0` (or any other step that divides one).
pub fn beta_grid(step: f64) -> Vec<f64> {
    let n = (1.0 / step).round() as usize;
    (0..=n).map(|i| i as f64 / n as f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::dbm_to_watts;
    use proptest::prelude::*;

    #[test]
    fn epa_row_has_zero_gain() {
        let sc = Scenario::default();
        let sweep = pa_sweep(&sc, dbm_to_watts(20.0), &beta_grid(0.1)).unwrap();
        let epa = sweep.rows.iter().find(|r| r.beta == 0.5).unwrap();
        assert_eq!(epa.gain, 0.0);
        assert!(sweep.gain >= 0.0);
        assert_eq!(sweep.rows.len(), 11);
    }

    #[test]
    fn endpoints_are_finite() {
        let sc = Scenario::default();
        let sweep = pa_sweep(&sc, 0.1, &[0.0, 1.0]).unwrap();
        assert!(sweep
            .rows
            .iter()
            .all(|r| r.rate.is_finite() && r.rate >= 0.0));
        // No transmit power, nothing to receive.
        assert_eq!(sweep.rows[1].snr, 0.0);
    }

    #[test]
    fn errors() {
        assert!(pa_sweep(&Scenario::default(), 1.0, &[]).is_err());
        assert!(pa_sweep(&Scenario::default(), 1.0, &[1.2]).is_err());
        assert!(PowerSplit::new(-0.1, 1.0).is_err());
    }

    #[test]
    fn fine_grid() {
        let g = beta_grid(0.01);
        assert_eq!(g.len(), 101);
        assert_eq!(g[50], 0.5);
    }

    proptest! {
        #[test]
        fn split_conserves_power(beta in 0.0f64..=1.0, p in 1e-6f64..1e3) {
            let s = PowerSplit::new(beta, p).unwrap();
            prop_assert!((s.p_s + s.p_i - p).abs() <= f64::EPSILON * p);
            prop_assert!(s.p_s >= 0.0 && s.p_i >= 0.0);
        }
    }
}
