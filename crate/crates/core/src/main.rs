use std::path::PathBuf;
use std::process::ExitCode;

use clap::{value_parser, Arg, ArgAction, ArgMatches, Command};

use irs_core::analytic::MaximizerRegistry;
use irs_core::experiments::{
    run_experiment_with, write_outputs, ExperimentRegistry, ExperimentSpec, Sweep, DEFAULT_SEED,
};
use irs_core::montecarlo::DEFAULT_TRIALS;
use irs_core::scenario::ScenarioConfig;

fn run_args() -> Vec<Arg> {
    vec![
        Arg::new("seed")
            .long("seed")
            .value_parser(value_parser!(u64))
            .help(format!(
                "Base seed for the Monte Carlo trial streams [default: {DEFAULT_SEED}]"
            )),
        Arg::new("trials")
            .long("trials")
            .value_parser(value_parser!(usize))
            .help(format!(
                "Monte Carlo trials per point [default: {DEFAULT_TRIALS}]"
            )),
        Arg::new("config")
            .long("config")
            .value_parser(value_parser!(PathBuf))
            .help("Scenario file (key = value); replaces the experiment preset"),
        Arg::new("out")
            .long("out")
            .value_parser(value_parser!(PathBuf))
            .default_value("results")
            .help("Output directory for CSV and plot files"),
        Arg::new("override")
            .long("override")
            .short('o')
            .action(ArgAction::Append)
            .value_name("KEY=VALUE")
            .help("Override one configuration key (repeatable)"),
        Arg::new("sweep")
            .long("sweep")
            .value_name("VAR=V1,V2,..|VAR=START:STEP:STOP")
            .help("Replace the sweep grid"),
        Arg::new("parallel")
            .long("parallel")
            .action(ArgAction::SetTrue)
            .help("Run Monte Carlo trials in parallel (results are identical)"),
        Arg::new("maximizer")
            .long("maximizer")
            .default_value("numeric")
            .help("Reflect-power maximizer"),
    ]
}

fn build_cli(experiments: &ExperimentRegistry) -> Command {
    let mut cmd = Command::new("irs")
        .about("Closed-form and simulated performance of IRS-aided links")
        .subcommand_required(true)
        .arg_required_else_help(true)
        .subcommand(Command::new("list").about("List experiments and maximizers"))
        .subcommand(Command::new("config").about("Print the default scenario file"));
    for exp in experiments.iter() {
        cmd = cmd.subcommand(Command::new(exp.name()).about(exp.about()).args(run_args()));
    }
    cmd
}

fn spec_from(name: &str, m: &ArgMatches) -> irs_core::Result<ExperimentSpec> {
    let mut spec = ExperimentSpec::new(name);
    if let Some(&seed) = m.get_one::<u64>("seed") {
        spec.seed = seed;
    }
    if let Some(&trials) = m.get_one::<usize>("trials") {
        spec.trials = trials;
    }
    spec.parallel = m.get_flag("parallel");
    spec.maximizer = m.get_one::<String>("maximizer").expect("defaulted").clone();
    if let Some(path) = m.get_one::<PathBuf>("config") {
        spec.config = Some(ScenarioConfig::from_file(path)?);
    }
    spec.overrides = m
        .get_many::<String>("override")
        .map(|v| v.cloned().collect())
        .unwrap_or_default();
    if let Some(s) = m.get_one::<String>("sweep") {
        spec.sweep = Some(Sweep::parse(s)?);
    }
    Ok(spec)
}

fn run(
    name: &str,
    m: &ArgMatches,
    experiments: &ExperimentRegistry,
    maximizers: &MaximizerRegistry,
) -> irs_core::Result<()> {
    let spec = spec_from(name, m)?;
    let tables = run_experiment_with(experiments, maximizers, &spec)?;
    let out = m.get_one::<PathBuf>("out").expect("defaulted");
    for path in write_outputs(&tables, out)? {
        println!("{}", path.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    let experiments = ExperimentRegistry::default();
    let maximizers = MaximizerRegistry::default();
    let matches = build_cli(&experiments).get_matches();
    let result = match matches.subcommand() {
        Some(("list", _)) => {
            println!("experiments:");
            for e in experiments.iter() {
                println!("  {:<8} {}", e.name(), e.about());
            }
            println!("maximizers: {}", maximizers.names().join(", "));
            Ok(())
        }
        Some(("config", _)) => {
            print!("{}", ScenarioConfig::default().to_toml_string());
            Ok(())
        }
        Some((name, m)) => run(name, m, &experiments, &maximizers),
        None => unreachable!("subcommand required"),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
