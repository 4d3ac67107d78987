use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use overlay_crn::harness::{
    emit_csv, emit_plotdata, load_scenario, preset, run_scenario, run_validation, write_csv, Engine,
    ResultRow, Scenario,
};
use overlay_crn::meijer::SeriesBudget;
use overlay_crn::simulate::McConfig;
use overlay_crn::Result;

#[derive(Parser)]
#[command(version, about = "Outage, throughput and EE sweeps for relay-assisted overlay CRNs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a TOML scenario file.
    Run {
        file: PathBuf,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Run a built-in figure preset.
    Preset {
        name: String,
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Closed form against Monte Carlo on the 40-point validation grid.
    Validate {
        #[command(flatten)]
        opts: RunOpts,
    },
    /// Run a scenario file with only the optimizer engine.
    Optimize {
        file: PathBuf,
        #[command(flatten)]
        opts: RunOpts,
    },
}

#[derive(Args)]
struct RunOpts {
    /// Monte Carlo trials per point.
    #[arg(long)]
    trials: Option<u64>,
    /// Base RNG seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output CSV (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Engines to run, comma separated: mc, analytic, optimize.
    #[arg(long, value_delimiter = ',')]
    engine: Vec<Engine>,
    /// Also write per-series plot data into this directory.
    #[arg(long)]
    plot_dir: Option<PathBuf>,
    /// Exit nonzero with a JSON summary on stderr if any row failed.
    #[arg(long)]
    strict: bool,
}

impl RunOpts {
    fn apply(&self, scenario: &mut Scenario) {
        if let Some(t) = self.trials {
            scenario.mc.trials = t;
        }
        if let Some(s) = self.seed {
            scenario.mc.seed = s;
        }
        if !self.engine.is_empty() {
            scenario.engines = self.engine.clone();
        }
    }
}

fn run_rows(mut scenario: Scenario, opts: &RunOpts) -> Result<ExitCode> {
    opts.apply(&mut scenario);
    scenario.validate()?;
    let rows = run_scenario(&scenario)?;
    match &opts.out {
        Some(path) => emit_csv(&rows, path)?,
        None => write_csv(&rows, std::io::stdout().lock())?,
    }
    if let Some(dir) = &opts.plot_dir {
        emit_plotdata(&rows, dir, &scenario.name)?;
    }
    let failed: Vec<&ResultRow> = rows.iter().filter(|r| r.error.is_some()).collect();
    if opts.strict && !failed.is_empty() {
        let summary = json!({
            "scenario": scenario.name,
            "rows": rows.len(),
            "failed": failed.iter().map(|r| json!({
                "series_value": r.series_value,
                "sweep_value": r.sweep_value,
                "error": r.error,
            })).collect::<Vec<_>>(),
        });
        eprintln!("{summary}");
        return Ok(ExitCode::FAILURE);
    }
    Ok(ExitCode::SUCCESS)
}

fn validate(opts: &RunOpts) -> Result<ExitCode> {
    let mut mc = McConfig::default();
    if let Some(t) = opts.trials {
        mc.trials = t;
    }
    if let Some(s) = opts.seed {
        mc.seed = s;
    }
    let checks = run_validation(&mc, &SeriesBudget::default())?;
    let report = serde_json::to_string_pretty(&checks).expect("checks serialize");
    match &opts.out {
        Some(path) => std::fs::write(path, report + "\n")?,
        None => println!("{report}"),
    }
    let failed = checks.iter().filter(|c| !c.pass).count();
    eprintln!("{} of {} grid points agree", checks.len() - failed, checks.len());
    if opts.strict && failed > 0 {
        let labels: Vec<_> = checks.iter().filter(|c| !c.pass).map(|c| &c.label).collect();
        eprintln!("{}", json!({ "failed": labels }));
        return Ok(ExitCode::FAILURE);
    }
    Ok(ExitCode::SUCCESS)
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Run { file, opts } => run_rows(load_scenario(file)?, &opts),
        Command::Preset { name, opts } => run_rows(preset(&name)?, &opts),
        Command::Validate { opts } => validate(&opts),
        Command::Optimize { file, mut opts } => {
            opts.engine = vec![Engine::Optimize];
            run_rows(load_scenario(file)?, &opts)
        }
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{}", json!({ "error": e.to_string() }));
            ExitCode::FAILURE
        }
    }
}
