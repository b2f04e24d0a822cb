use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use carrel_cli::{load_scenario, run, write_rows, BetaSweep, CliError, Format, Options, Overrides};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(
    name = "carrel",
    version,
    about = "Relative entropies of fermionic excitation states"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute the scenario's tasks.
    Run(Common),
    /// Compute and compare every row with the Fock-space oracle.
    Verify(Common),
    /// Replace the scenario's beta with a geometric grid.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        beta_min: f64,
        #[arg(long)]
        beta_max: f64,
        #[arg(long)]
        steps: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Csv,
    Json,
}

#[derive(Args)]
struct Common {
    /// Scenario file (JSON).
    scenario: PathBuf,
    /// Output path; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "csv")]
    format: OutputFormat,
    /// Largest accepted |value - oracle_value|.
    #[arg(long, default_value_t = 1e-6)]
    tolerance: f64,
    /// Seed for `random` models, overriding the file.
    #[arg(long)]
    seed: Option<u64>,
    /// Oracle cap on the number of modes.
    #[arg(long, default_value_t = carrel_core::fock_oracle::DEFAULT_MAX_MODES)]
    max_modes: usize,
    /// Fill the `ms` column with wall-clock times.
    #[arg(long)]
    timing: bool,
}

fn execute(cli: Cli) -> Result<bool, CliError> {
    let (common, verify, sweep) = match cli.command {
        Command::Run(c) => (c, false, None),
        Command::Verify(c) => (c, true, None),
        Command::Sweep {
            common,
            beta_min,
            beta_max,
            steps,
        } => (
            common,
            false,
            Some(BetaSweep {
                min: beta_min,
                max: beta_max,
                steps,
            }),
        ),
    };
    if common.tolerance.is_nan() || common.tolerance < 0.0 {
        return Err(CliError::Input(format!(
            "tolerance must be nonnegative, got {}",
            common.tolerance
        )));
    }
    let overrides = Overrides {
        seed: common.seed,
        sweep,
    };
    let scenario = load_scenario(&common.scenario, overrides)?;
    let options = Options {
        verify,
        max_modes: common.max_modes,
        timing: common.timing,
    };
    let rows = run(&scenario, &options)?;
    let format = match common.format {
        OutputFormat::Csv => Format::Csv,
        OutputFormat::Json => Format::Json,
    };
    let sink: Box<dyn Write> = match &common.out {
        Some(path) => Box::new(File::create(path).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        })?),
        None => Box::new(io::stdout().lock()),
    };
    write_rows(&rows, format, BufWriter::new(sink), io::stderr().lock())?;

    let breaches: Vec<_> = rows
        .iter()
        .filter(|r| r.breaches(common.tolerance))
        .collect();
    for r in &breaches {
        eprintln!(
            "tolerance breach: {} [{}] beta={} abs_err={:e}",
            r.task,
            r.labels,
            r.beta,
            r.abs_err.unwrap_or(f64::NAN)
        );
    }
    Ok(breaches.is_empty())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
