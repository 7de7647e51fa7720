use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use fas_outage_lab::spec::DEFAULT_TRIALS;
use fas_outage_lab::{
    run_compare, run_diversity, run_figure_preset, run_selftest, run_sweep, CliError, DiversitySpec, Preset,
    PresetOptions, Result, SweepSpec,
};

#[derive(Parser, Debug)]
#[command(
    name = "fas-outage-lab",
    version,
    about = "Outage probability sweeps for fluid antenna systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a parameter sweep described by a JSON config
    Sweep {
        config: PathBuf,
        /// Write CSV here instead of standard output
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Emit the data behind one of the figures (fig3 to fig10)
    Figure {
        name: String,
        /// Monte Carlo trials per point
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: u64,
        /// Skip the Monte Carlo column
        #[arg(long)]
        no_mc: bool,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Fit the diversity order of the exact outage
    Diversity {
        config: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Exact against Monte Carlo with a pass/fail verdict per row
    Compare {
        config: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run the built-in invariant checks
    Selftest,
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn emit(output: Option<&Path>, text: &str) -> Result<()> {
    match output {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Sweep { config, output } => {
            let spec = SweepSpec::from_json(&read(&config)?)?;
            emit(output.as_deref(), &run_sweep(&spec)?.to_csv())
        }
        Command::Figure {
            name,
            trials,
            no_mc,
            seed,
            output,
        } => {
            let preset: Preset = name.parse()?;
            let opts = PresetOptions {
                trials,
                mc: !no_mc,
                seed,
            };
            emit(output.as_deref(), &run_figure_preset(preset, &opts)?.to_csv())
        }
        Command::Diversity { config, output } => {
            let spec = DiversitySpec::from_json(&read(&config)?)?;
            let report = run_diversity(&spec)?;
            let json = serde_json::to_string_pretty(&report).expect("report serializes");
            emit(output.as_deref(), &(json + "\n"))
        }
        Command::Compare { config, output } => {
            let spec = SweepSpec::from_json(&read(&config)?)?;
            let cmp = run_compare(&spec)?;
            emit(output.as_deref(), &cmp.table.to_csv())?;
            cmp.verdict()
        }
        Command::Selftest => {
            let checks = run_selftest();
            for c in &checks {
                println!("{}", c.line());
            }
            let failures = checks.iter().filter(|c| !c.passed).count();
            if failures > 0 {
                return Err(CliError::Tolerance {
                    failures,
                    rows: checks.len(),
                });
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
