//! Acceptance criteria 1 to 8. Each test writes one `criterion N: PASS|FAIL`
//! line (plus its sub-checks) straight to stdout so the lines show up even
//! when the harness captures output.

use std::io::Write;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use irs_core::analytic::{
    snr_limit_large_pi, snr_user_noqe, snr_user_noqe_direct, ReflectPowerSearch, SnrCoefficients,
};
use irs_core::experiments::{run_experiment, ExperimentSpec, ResultTable, FIG3_SIGMA_I_DBM};
use irs_core::montecarlo::{
    amplification_factor_exact, reflected_power, sample_channels, simulate_received_snr,
};
use irs_core::quantization::{
    ber_qpsk, loss_snr, q_function, qe_mean_factor, qe_mean_factor_taylor, IrsKind, LossForm,
    LossReport, QuantizerConfig,
};
use irs_core::scenario::{
    db_to_linear, dbm_to_watts, linear_to_db, watts_to_dbm, Scenario, ScenarioConfig,
};

const SEED: u64 = 7_771;

struct Report {
    id: u32,
    title: &'static str,
    checks: Vec<(bool, String)>,
}

impl Report {
    fn new(id: u32, title: &'static str) -> Self {
        Report {
            id,
            title,
            checks: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, detail: String) {
        self.checks.push((ok, detail));
    }

    fn runtime(&mut self, start: Instant, limit: Duration) {
        let took = start.elapsed();
        self.check(
            took <= limit,
            format!(
                "runtime {:.1} s (limit {} s)",
                took.as_secs_f64(),
                limit.as_secs()
            ),
        );
    }

    /// Prints the verdict and panics if any sub-check failed.
    fn finish(self) {
        let ok = self.checks.iter().all(|c| c.0);
        let mut out = std::io::stdout().lock();
        let verdict = if ok { "PASS" } else { "FAIL" };
        writeln!(out, "criterion {}: {} ({})", self.id, verdict, self.title).unwrap();
        for (pass, detail) in &self.checks {
            writeln!(
                out,
                "    [{}] {}",
                if *pass { "ok" } else { "FAIL" },
                detail
            )
            .unwrap();
        }
        out.flush().unwrap();
        drop(out);
        let failed: Vec<&String> = self.checks.iter().filter(|c| !c.0).map(|c| &c.1).collect();
        assert!(
            failed.is_empty(),
            "criterion {} failed: {:?}",
            self.id,
            failed
        );
    }
}

fn run(name: &str) -> Vec<ResultTable> {
    let mut spec = ExperimentSpec::new(name);
    spec.seed = SEED;
    spec.parallel = true;
    run_experiment(&spec).expect("experiment runs")
}

fn panel<'a>(tables: &'a [ResultTable], name: &str) -> &'a ResultTable {
    tables
        .iter()
        .find(|t| t.panel == name)
        .expect("panel present")
}

/// Value of column `y` in the row where `series` matches and the numeric
/// columns in `keys` equal the given values.
fn lookup(t: &ResultTable, series: &str, keys: &[(&str, f64)], y: &str) -> f64 {
    t.rows_where("series", series)
        .find(|r| keys.iter().all(|(k, v)| t.value(r, k) == Some(*v)))
        .and_then(|r| t.value(r, y))
        .unwrap_or_else(|| panic!("no row {series} {keys:?}"))
}

#[test]
fn criterion_1_lln_convergence() {
    let mut rep = Report::new(1, "Monte Carlo mean SNR converges to the closed form");
    let start = Instant::now();
    let base = ScenarioConfig::default().resolve().unwrap();
    let mut gaps = Vec::new();
    for n in [64usize, 256, 1024] {
        let sc = base.with_elements(n);
        let (mean, se) =
            simulate_received_snr(&sc, None, IrsKind::Active, 10_000, SEED, true).unwrap();
        let closed = linear_to_db(snr_user_noqe(&sc));
        let gap = (linear_to_db(mean) - closed).abs();
        let se_db = 10.0 / std::f64::consts::LN_10 * se / mean;
        rep.check(
            gap <= 0.5,
            format!("N={n}: |MC - closed| = {gap:.4} dB (SE {se_db:.4} dB, limit 0.5)"),
        );
        gaps.push(gap);
    }
    rep.check(
        gaps.windows(2).all(|w| w[1] <= w[0]),
        format!("gap non-increasing in N: {gaps:.4?}"),
    );
    rep.runtime(start, Duration::from_secs(60));
    rep.finish();
}

#[test]
fn criterion_2_large_reflect_power_limit() {
    let mut rep = Report::new(2, "large-P_i limit");
    let sc = Scenario::default();
    let big = sc.with_reflect_power(sc.p_i * 1e8);
    let limit = snr_limit_large_pi(&sc);
    let rel = (snr_user_noqe(&big) - limit).abs() / limit;
    rep.check(
        rel < 0.01,
        format!("relative gap at 1e8 x P_i: {rel:.2e} (limit 1e-2)"),
    );
    rep.finish();
}

#[test]
fn criterion_3_optimal_reflect_power() {
    let mut rep = Report::new(3, "SNR versus P_i: interior peak, floor, optimum");
    let tables = run("fig3");
    let curve = panel(&tables, "fig3");
    let opt = panel(&tables, "fig3-optimum");
    let base = ScenarioConfig {
        sigma_u_sq_dbm: -100.0,
        ..ScenarioConfig::default()
    }
    .resolve()
    .unwrap();
    let search = ReflectPowerSearch::default();
    for (i, sigma_i) in FIG3_SIGMA_I_DBM.iter().enumerate() {
        let label = format!("sigma_i^2={sigma_i} dBm");
        let pts: Vec<(f64, f64)> = curve
            .rows_where("series", &label)
            .map(|r| {
                (
                    curve.value(r, "P_i").unwrap(),
                    curve.value(r, "SNR").unwrap(),
                )
            })
            .collect();
        let peak = pts
            .iter()
            .enumerate()
            .fold(0, |b, (j, p)| if p.1 > pts[b].1 { j } else { b });
        let rising = pts[..=peak].windows(2).all(|w| w[1].1 >= w[0].1);
        let falling = pts[peak..].windows(2).all(|w| w[1].1 <= w[0].1);
        let interior = peak > 0 && peak + 1 < pts.len();
        rep.check(
            interior && rising && falling,
            format!("{label}: single interior peak at {:.1} dBm", pts[peak].0),
        );
        let floor = lookup(curve, &label, &[("P_i", 50.0)], "SNR_floor");
        let top = pts.last().unwrap();
        rep.check(
            top.0 == 50.0 && (top.1 - floor).abs() <= 0.1,
            format!(
                "{label}: SNR at 50 dBm within {:.4} dB of floor (limit 0.1)",
                (top.1 - floor).abs()
            ),
        );

        let row = &opt.rows[i];
        assert_eq!(opt.value(row, "sigma_i_sq"), Some(*sigma_i));
        let p_opt = dbm_to_watts(opt.value(row, "P_i_opt").unwrap());
        let grid_peak = dbm_to_watts(opt.value(row, "grid_peak").unwrap());
        let cells = (p_opt / grid_peak).ln().abs() / search.cell_ratio().ln();
        rep.check(
            cells <= 1.0,
            format!("{label}: optimum {cells:.3} grid cells from grid peak (limit 1)"),
        );
        let coeffs = SnrCoefficients::from_scenario(
            &base.with_noise(dbm_to_watts(*sigma_i), base.sigma_u_sq),
        );
        let h = 1e-4;
        let slope = (coeffs.snr(p_opt * (1.0 + h)) - coeffs.snr(p_opt * (1.0 - h)))
            / (2.0 * h * coeffs.snr(p_opt));
        rep.check(
            slope.abs() <= 1e-3,
            format!(
                "{label}: finite-difference elasticity {slope:.2e} at {:.3} dBm (limit 1e-3)",
                watts_to_dbm(p_opt)
            ),
        );
    }
    rep.finish();
}

#[test]
fn criterion_4_power_allocation() {
    let mut rep = Report::new(4, "optimal PA factor and rate gain over EPA");
    let start = Instant::now();
    let expected = [
        (
            "table1",
            vec![
                (-100.0, -70.0, 0.9, 0.83),
                (-100.0, -80.0, 0.9, 0.82),
                (-100.0, -90.0, 0.9, 0.79),
                (-100.0, -100.0, 0.8, 0.51),
            ],
        ),
        (
            "table2",
            vec![
                (-70.0, -100.0, 0.1, 0.62),
                (-80.0, -100.0, 0.3, 0.16),
                (-90.0, -100.0, 0.6, 0.06),
            ],
        ),
    ];
    for (name, rows) in expected {
        let tables = run(name);
        let t = panel(&tables, name);
        for (si, su, beta, gain) in rows {
            let row = t
                .rows
                .iter()
                .find(|r| {
                    t.value(r, "sigma_i_sq") == Some(si) && t.value(r, "sigma_u_sq") == Some(su)
                })
                .expect("row present");
            let b = t.value(row, "beta_opt").unwrap();
            let g = t.value(row, "gain").unwrap();
            rep.check(
                (b - beta).abs() < 1e-9,
                format!("{name} sigma_i^2={si} sigma_u^2={su}: beta_opt {b:.1} (expected {beta})"),
            );
            rep.check(
                (g - gain).abs() <= 0.05,
                format!("{name} sigma_i^2={si} sigma_u^2={su}: gain {g:.3} bit (expected {gain} +/- 0.05)"),
            );
        }
    }
    rep.runtime(start, Duration::from_secs(10));
    rep.finish();
}

#[test]
fn criterion_5_quantization_snr_loss() {
    let mut rep = Report::new(5, "SNR loss versus k at N = 1024");
    let start = Instant::now();
    let tables = run("fig4");
    let n = 1024.0;
    for (kind, k_min, limit) in [("active", 3, 0.22), ("passive", 2, 0.21)] {
        let t = panel(&tables, &format!("fig4-{kind}"));
        for k in 1..=6 {
            let key = [("k", k as f64), ("N", n)];
            let pl = lookup(t, "PL N=1024", &key, "loss");
            let apl = lookup(t, "APL N=1024", &key, "loss");
            let emp = lookup(t, "empirical N=1024", &key, "loss");
            let emp_se = lookup(t, "empirical N=1024", &key, "std_err");
            if k >= k_min {
                rep.check(
                    pl < limit,
                    format!("{kind} k={k}: loss {pl:.4} dB (limit < {limit})"),
                );
            }
            if k >= 3 {
                rep.check(
                    (pl - apl).abs() <= 0.02,
                    format!(
                        "{kind} k={k}: |exact - Taylor| = {:.4} dB (limit 0.02)",
                        (pl - apl).abs()
                    ),
                );
            }
            rep.check(
                (emp - pl).abs() <= 0.05,
                format!(
                    "{kind} k={k}: |empirical - closed| = {:.4} dB (SE {emp_se:.4}, limit 0.05)",
                    (emp - pl).abs()
                ),
            );
        }
    }
    rep.runtime(start, Duration::from_secs(120));
    rep.finish();
}

#[test]
fn criterion_6_achievable_rate_loss() {
    let mut rep = Report::new(6, "achievable-rate loss at N = 1024");
    let sc = ScenarioConfig::default()
        .resolve()
        .unwrap()
        .with_elements(1024);
    for (kind, k, limit) in [(IrsKind::Active, 3, 0.08), (IrsKind::Passive, 2, 0.07)] {
        let r = LossReport::evaluate(&sc, &QuantizerConfig::new(k).unwrap(), kind).unwrap();
        let loss = r.ar_exact - r.ar_quantized;
        rep.check(
            loss < limit,
            format!(
                "{} k={k}: AR loss {loss:.4} bits/s/Hz (limit < {limit})",
                kind.as_str()
            ),
        );
    }
    rep.finish();
}

#[test]
fn criterion_7_ber() {
    let mut rep = Report::new(7, "BER with quantization tracks the unquantized BER");
    let tables = run("fig6");
    for (kind, k) in [("active", 3.0), ("passive", 2.0)] {
        let t = panel(&tables, &format!("fig6-{kind}"));
        let key = [("k", k), ("N", 1024.0)];
        let reference = lookup(t, "no PL N=1024", &key, "BER");
        for series in ["PL N=1024", "APL N=1024", "empirical N=1024"] {
            let ber = lookup(t, series, &key, "BER");
            let rel = (ber - reference).abs() / reference;
            rep.check(
                rel <= 0.05,
                format!("{kind} k={k}: {series} BER {ber:.5} vs {reference:.5}, relative {rel:.4} (limit 0.05)"),
            );
        }
        let by_k: Vec<f64> = (1..=6)
            .map(|k| lookup(t, "PL N=1024", &[("k", k as f64), ("N", 1024.0)], "BER"))
            .collect();
        rep.check(
            by_k.windows(2).all(|w| w[1] < w[0]),
            format!("{kind}: PL BER strictly decreasing as k (and SNR) grows"),
        );
    }
    let snrs: Vec<f64> = (0..=400)
        .map(|i| db_to_linear(-30.0 + 0.1 * i as f64))
        .collect();
    let bers: Vec<f64> = snrs.iter().map(|&s| ber_qpsk(s)).collect();
    rep.check(
        bers.windows(2).all(|w| w[1] < w[0]),
        "ber_qpsk strictly decreasing over SNR -30..10 dB".to_string(),
    );
    rep.finish();
}

fn q_by_simpson(z: f64) -> f64 {
    let n = 200_000;
    let (a, b) = (z, z + 40.0);
    let h = (b - a) / n as f64;
    let pdf = |x: f64| (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt();
    let mut s = pdf(a) + pdf(b);
    for i in 1..n {
        s += if i % 2 == 1 { 4.0 } else { 2.0 } * pdf(a + i as f64 * h);
    }
    s * h / 3.0
}

#[test]
fn criterion_8_property_suites() {
    let mut rep = Report::new(8, "always-on property suites");
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);

    let worst = (0..1000)
        .map(|_| {
            let db: f64 = rng.random_range(-150.0..150.0);
            let w = dbm_to_watts(db);
            ((linear_to_db(db_to_linear(db)) - db).abs() / db.abs().max(1.0))
                .max((watts_to_dbm(w) - db).abs() / db.abs().max(1.0))
        })
        .fold(0.0, f64::max);
    rep.check(
        worst <= 1e-12,
        format!("dB round trips: worst relative error {worst:.1e} (limit 1e-12)"),
    );

    let mut worst = 0.0f64;
    for _ in 0..1000 {
        let cfg = ScenarioConfig {
            irs_pos: [rng.random_range(10.0..190.0), rng.random_range(1.0..80.0)],
            ps_dbm: rng.random_range(-20.0..40.0),
            pi_dbm: rng.random_range(-40.0..40.0),
            sigma_i_sq_dbm: rng.random_range(-110.0..-50.0),
            sigma_u_sq_dbm: rng.random_range(-110.0..-50.0),
            n_elements: rng.random_range(1..4096),
            ..ScenarioConfig::default()
        };
        let sc = cfg.resolve().unwrap();
        let (a, b) = (snr_user_noqe(&sc), snr_user_noqe_direct(&sc));
        worst = worst.max((a - b).abs() / b);
    }
    rep.check(
        worst <= 1e-10,
        format!("rational vs direct SNR form: worst relative gap {worst:.1e} over 1000 configs"),
    );

    let base = Scenario::default();
    let mut monotone = true;
    for kind in [IrsKind::Active, IrsKind::Passive] {
        for n in [16, 64, 256, 1024] {
            let sc = base.with_elements(n);
            let l: Vec<f64> = (1..=8)
                .map(|k| {
                    loss_snr(
                        &sc,
                        &QuantizerConfig::new(k).unwrap(),
                        kind,
                        LossForm::Exact,
                    )
                })
                .collect();
            monotone &= l.windows(2).all(|w| w[1] <= w[0]);
        }
        for k in 1..=6 {
            let q = QuantizerConfig::new(k).unwrap();
            let l: Vec<f64> = [16, 64, 256, 1024]
                .iter()
                .map(|&n| loss_snr(&base.with_elements(n), &q, kind, LossForm::Exact))
                .collect();
            monotone &= l.windows(2).all(|w| w[1] >= w[0]);
        }
    }
    rep.check(
        monotone,
        "loss non-increasing in k and non-decreasing in N".to_string(),
    );

    let bound_ok = (1..=20).all(|k| {
        let x = std::f64::consts::PI / 2f64.powi(k as i32);
        (qe_mean_factor(k).unwrap() - qe_mean_factor_taylor(k).unwrap()).abs()
            <= x.powi(4) / 120.0 + 1e-15
    });
    rep.check(
        bound_ok,
        "|sinc(x) - (1 - x^2/6)| <= x^4/120 for k = 1..20".to_string(),
    );

    let quad = [-1.0, 0.0, 1.0, 2.0]
        .iter()
        .map(|&z| (q_function(z) - q_by_simpson(z)).abs())
        .fold(0.0, f64::max);
    rep.check(
        q_function(0.0) == 0.5 && quad <= 1e-8,
        format!(
            "Q(0) = {}, quadrature gap {quad:.1e} (limit 1e-8)",
            q_function(0.0)
        ),
    );

    let mut worst = 0.0f64;
    for seed in 0..200 {
        let sc = base.with_elements(1 + (seed as usize * 53) % 1024);
        let real = sample_channels(&sc, seed);
        let lambda = amplification_factor_exact(&real, sc.p_i, sc.p_s, sc.link.l_g, sc.sigma_i_sq);
        let total = reflected_power(&real, lambda, sc.p_s, sc.link.l_g, sc.sigma_i_sq);
        worst = worst.max((total - sc.p_i).abs() / sc.p_i);
    }
    rep.check(
        worst <= 1e-10,
        format!("reflected power conservation: worst relative error {worst:.1e}"),
    );

    let replay = |parallel: bool| {
        let mut spec = ExperimentSpec::new("fig2b");
        spec.trials = 200;
        spec.seed = SEED;
        spec.parallel = parallel;
        run_experiment(&spec)
            .unwrap()
            .iter()
            .map(|t| t.to_csv().unwrap())
            .collect::<Vec<_>>()
    };
    let first = replay(false);
    rep.check(
        first == replay(false) && first == replay(true),
        "deterministic replay: byte-identical CSV across reruns and scheduling".to_string(),
    );
    rep.finish();
}
