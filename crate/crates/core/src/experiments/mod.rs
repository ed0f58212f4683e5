//! Named experiments that reproduce the reference figures and tables.
//!
//! Every experiment implements [`Experiment`] and is registered by name in
//! an [`ExperimentRegistry`]; the CLI builds one subcommand per entry.
//! Each run returns one [`ResultTable`] per figure panel.

mod custom;
mod figures;
mod plot;
mod power;
mod table;

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

pub use custom::Custom;
pub use figures::{Fig2a, Fig2b, Fig3, Fig4, Fig5, Fig6, FIG3_SIGMA_I_DBM, QUANT_ELEMENTS};
pub use plot::emit_plot_description;
pub use power::{Table1, Table2, TABLE_TOTAL_POWER_DBM};
pub use table::{Cell, Column, PlotStyle, Provenance, ResultTable};

use crate::analytic::{MaximizerRegistry, ReflectPowerMaximizer};
use crate::error::{IrsError, Result};
use crate::montecarlo::DEFAULT_TRIALS;
use crate::scenario::ScenarioConfig;

pub const DEFAULT_SEED: u64 = 20_240_601;

/// One swept variable and its grid values.
#[derive(Debug, Clone, PartialEq)]
pub struct Sweep {
    pub variable: String,
    pub grid: Vec<f64>,
}

impl Sweep {
    pub fn new(variable: &str, grid: Vec<f64>) -> Self {
        Sweep {
            variable: variable.to_string(),
            grid,
        }
    }

    /// Parses `var=v1,v2,...` or `var=start:step:stop` (inclusive).
    pub fn parse(text: &str) -> Result<Self> {
        let bad = |reason: &str| IrsError::InvalidConfig(format!("sweep `{text}`: {reason}"));
        let (var, spec) = text
            .split_once('=')
            .ok_or_else(|| bad("expected var=values"))?;
        let num = |s: &str| s.trim().parse::<f64>().map_err(|_| bad("not a number"));
        let grid = if spec.contains(':') {
            let parts: Vec<&str> = spec.split(':').collect();
            if parts.len() != 3 {
                return Err(bad("range must be start:step:stop"));
            }
            let (start, step, stop) = (num(parts[0])?, num(parts[1])?, num(parts[2])?);
            if step.is_nan() || step <= 0.0 || stop < start {
                return Err(bad("range needs a positive step and stop >= start"));
            }
            let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
            (0..count).map(|i| start + i as f64 * step).collect()
        } else {
            spec.split(',').map(num).collect::<Result<Vec<f64>>>()?
        };
        let sweep = Sweep::new(var.trim(), grid);
        sweep.validate()?;
        Ok(sweep)
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid.is_empty() {
            return Err(IrsError::InvalidConfig(format!(
                "sweep over `{}` has an empty grid",
                self.variable
            )));
        }
        if self.grid.iter().any(|x| !x.is_finite()) {
            return Err(IrsError::InvalidConfig(format!(
                "sweep over `{}` has non-finite values",
                self.variable
            )));
        }
        Ok(())
    }

    fn describe(&self) -> String {
        let vals: Vec<String> = self.grid.iter().map(|x| x.to_string()).collect();
        format!("{}=[{}]", self.variable, vals.join(" "))
    }
}

/// What to run and with which inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub name: String,
    /// Base configuration; `None` uses the experiment's own preset.
    pub config: Option<ScenarioConfig>,
    /// `key=value` assignments applied on top of the base configuration.
    pub overrides: Vec<String>,
    /// Replaces the experiment's default grid (same variable).
    pub sweep: Option<Sweep>,
    pub trials: usize,
    pub seed: u64,
    pub parallel: bool,
    /// Name of the reflect-power maximizer.
    pub maximizer: String,
}

impl ExperimentSpec {
    pub fn new(name: &str) -> Self {
        ExperimentSpec {
            name: name.to_string(),
            config: None,
            overrides: Vec::new(),
            sweep: None,
            trials: DEFAULT_TRIALS,
            seed: DEFAULT_SEED,
            parallel: false,
            maximizer: "numeric".to_string(),
        }
    }
}

/// Resolved inputs handed to an experiment.
pub struct RunContext<'a> {
    pub experiment: &'static str,
    pub config: ScenarioConfig,
    pub sweep: Sweep,
    pub trials: usize,
    pub seed: u64,
    pub parallel: bool,
    pub maximizer: &'a dyn ReflectPowerMaximizer,
}

impl RunContext<'_> {
    /// Empty table pre-filled with the run parameters.
    pub fn table(
        &self,
        panel: &str,
        title: &str,
        columns: Vec<Column>,
        plot: PlotStyle,
        monte_carlo: bool,
    ) -> ResultTable {
        let mut t = ResultTable::new(self.experiment, panel, title, columns, plot);
        if monte_carlo {
            t.param("seed", self.seed);
            t.param("trials", self.trials);
        }
        t.param("sweep", self.sweep.describe());
        let cfg = toml::Table::try_from(&self.config).expect("flat config always serializes");
        for (k, v) in cfg {
            t.param(&k, v);
        }
        t
    }
}

pub trait Experiment: Send + Sync {
    fn name(&self) -> &'static str;
    fn about(&self) -> &'static str;
    /// Configuration used when the caller supplies none.
    fn preset(&self) -> ScenarioConfig {
        ScenarioConfig::default()
    }
    /// Default sweep. `None` means the caller must provide one.
    fn default_sweep(&self) -> Option<Sweep>;
    fn run(&self, ctx: &RunContext<'_>) -> Result<Vec<ResultTable>>;
}

/// Name -> experiment lookup, ordered by name.
pub struct ExperimentRegistry {
    entries: BTreeMap<&'static str, Box<dyn Experiment>>,
}

impl ExperimentRegistry {
    pub fn empty() -> Self {
        ExperimentRegistry {
            entries: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, experiment: Box<dyn Experiment>) {
        self.entries.insert(experiment.name(), experiment);
    }

    pub fn get(&self, name: &str) -> Option<&dyn Experiment> {
        self.entries.get(name).map(|e| e.as_ref())
    }

    pub fn iter(&self) -> impl Iterator<Item = &dyn Experiment> {
        self.entries.values().map(|e| e.as_ref())
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.keys().copied().collect()
    }
}

impl Default for ExperimentRegistry {
    fn default() -> Self {
        let mut reg = ExperimentRegistry::empty();
        reg.register(Box::new(Fig2a));
        reg.register(Box::new(Fig2b));
        reg.register(Box::new(Fig3));
        reg.register(Box::new(Fig4));
        reg.register(Box::new(Fig5));
        reg.register(Box::new(Fig6));
        reg.register(Box::new(Table1));
        reg.register(Box::new(Table2));
        reg.register(Box::new(Custom));
        reg
    }
}

/// Runs `spec` against the default registries.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<Vec<ResultTable>> {
    run_experiment_with(
        &ExperimentRegistry::default(),
        &MaximizerRegistry::default(),
        spec,
    )
}

/// Validates `spec` completely before any work starts, then runs it.
pub fn run_experiment_with(
    experiments: &ExperimentRegistry,
    maximizers: &MaximizerRegistry,
    spec: &ExperimentSpec,
) -> Result<Vec<ResultTable>> {
    let exp = experiments
        .get(&spec.name)
        .ok_or_else(|| IrsError::UnknownExperiment(spec.name.clone()))?;
    if spec.trials == 0 {
        return Err(IrsError::domain("trials must be at least 1"));
    }
    let maximizer = maximizers.get(&spec.maximizer).ok_or_else(|| {
        IrsError::InvalidConfig(format!(
            "unknown maximizer `{}` (available: {})",
            spec.maximizer,
            maximizers.names().join(", ")
        ))
    })?;
    let mut config = spec.config.clone().unwrap_or_else(|| exp.preset());
    config.apply_overrides(&spec.overrides)?;
    config.validate()?;
    let sweep = match (&spec.sweep, exp.default_sweep()) {
        (Some(s), Some(d)) if s.variable != d.variable => {
            return Err(IrsError::InvalidConfig(format!(
                "{} sweeps `{}`, not `{}`",
                exp.name(),
                d.variable,
                s.variable
            )))
        }
        (Some(s), _) => s.clone(),
        (None, Some(d)) => d,
        (None, None) => {
            return Err(IrsError::InvalidConfig(format!(
                "{} needs an explicit sweep",
                exp.name()
            )))
        }
    };
    sweep.validate()?;
    let ctx = RunContext {
        experiment: exp.name(),
        config,
        sweep,
        trials: spec.trials,
        seed: spec.seed,
        parallel: spec.parallel,
        maximizer,
    };
    let tables = exp.run(&ctx)?;
    if tables.iter().any(|t| t.is_empty()) {
        return Err(IrsError::EmptyTable);
    }
    Ok(tables)
}

/// Writes `<panel>.csv` and `<panel>.vl.json` for every table into `dir`.
/// All files are rendered in memory before the first write.
pub fn write_outputs(tables: &[ResultTable], dir: &Path) -> Result<Vec<PathBuf>> {
    let mut rendered = Vec::new();
    for t in tables {
        rendered.push((dir.join(format!("{}.csv", t.file_stem())), t.to_csv()?));
        rendered.push((
            dir.join(format!("{}.vl.json", t.file_stem())),
            emit_plot_description(t, &t.plot)?,
        ));
    }
    std::fs::create_dir_all(dir)?;
    let mut paths = Vec::new();
    for (path, text) in rendered {
        std::fs::write(&path, text)?;
        paths.push(path);
    }
    Ok(paths)
}

/// `10 log10` with the delta-method standard error of the mean.
pub(crate) fn db_with_err(mean: f64, std_err: f64) -> (f64, f64) {
    (
        crate::scenario::linear_to_db(mean),
        10.0 / std::f64::consts::LN_10 * std_err / mean,
    )
}
