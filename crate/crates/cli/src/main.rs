use std::path::PathBuf;
use std::process::ExitCode;

use clap::{ArgGroup, Parser};
use orbifold_cli::{config_for, execute, list_scenarios, load_registry, plan, write_outputs, CliResult, Config, RunOptions};

/// Runs orbifold workbench scenarios and writes report.json, spectra.csv and
/// summary.md.
#[derive(Parser, Debug)]
#[command(name = "orbifold", version)]
#[command(group(ArgGroup::new("input").args(["scenario", "config", "list"]).required(true)))]
struct Args {
    /// Built-in or registered scenario name.
    #[arg(long)]
    scenario: Option<String>,
    /// JSON scenario configuration.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Fourier mode cutoff M.
    #[arg(long)]
    modes: Option<usize>,
    /// Interior-band buffer B.
    #[arg(long)]
    buffer: Option<usize>,
    /// Output directory.
    #[arg(long, default_value = "out")]
    out: PathBuf,
    /// List scenarios and exit.
    #[arg(long)]
    list: bool,
    /// Allow tolerances looser than 10x the defaults.
    #[arg(long)]
    force: bool,
    /// Directory of user scenario files.
    #[arg(long)]
    registry: Option<PathBuf>,
}

fn run(args: Args) -> CliResult<bool> {
    let registry = match &args.registry {
        Some(dir) => load_registry(dir)?,
        None => Vec::new(),
    };
    if args.list {
        for (name, desc) in list_scenarios(&registry) {
            println!("{name:<24} {desc}");
        }
        return Ok(true);
    }
    let config = match (&args.scenario, &args.config) {
        (Some(name), _) => config_for(name, &registry)?,
        (None, Some(path)) => Config::load(path)?,
        (None, None) => unreachable!("clap requires an input"),
    };
    let opts = RunOptions {
        modes: args.modes,
        buffer: args.buffer,
        force: args.force,
    };
    let plan = plan(&config, &opts)?;
    let out = execute(&plan);
    write_outputs(&args.out, &out)?;
    for c in &out.report.checks {
        println!("{} {} {}", if c.passed { "pass" } else { "FAIL" }, c.check, c.detail);
    }
    println!("wrote {}", args.out.display());
    Ok(out.report.passed)
}

fn main() -> ExitCode {
    match run(Args::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
