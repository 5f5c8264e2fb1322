use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use jsacc::model::SystemParams;
use jsacc::sweep::{parse_sweep_config, preset, run_sweeps, DEFAULT_SEED, DEFAULT_TRIALS};
use jsacc::validate::{validate, ValidateOptions};
use jsacc::Error;

#[derive(Parser)]
#[command(name = "jsacc", version, about = "Outage, ergodic-rate and detection analytics for RIS-aided joint secrecy and covert links")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the sweep described by a `key = value` config file.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        /// CSV destination; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a built-in figure sweep.
    Preset {
        name: String,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: u64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check Monte Carlo against the closed forms; exits 1 on any failure.
    Validate {
        #[arg(long, default_value_t = 1_000_000)]
        trials: u64,
        #[arg(long, default_value_t = 3.0)]
        sigma: f64,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        /// Parameter file overriding the reference geometry.
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

fn output(path: Option<PathBuf>) -> jsacc::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn warn_self_interference(p: &SystemParams) {
    if p.self_interference_varrho > 0.0 {
        eprintln!(
            "jsacc: warning: self_interference_varrho = {}; closed forms assume 0, only Monte Carlo columns include it",
            p.self_interference_varrho
        );
    }
}

fn run(cli: Cli) -> jsacc::Result<bool> {
    match cli.command {
        Command::Sweep { config, out } => {
            let text = std::fs::read_to_string(&config).map_err(|e| Error::Io(format!("{}: {e}", config.display())))?;
            let (spec, params) = parse_sweep_config(&text)?;
            warn_self_interference(&params);
            let mut w = output(out)?;
            run_sweeps(&[(spec, params)], &mut w)?;
            w.flush()?;
            Ok(true)
        }
        Command::Preset { name, trials, seed, out } => {
            let runs = preset(&name, trials, seed)?;
            let mut w = output(out)?;
            run_sweeps(&runs, &mut w)?;
            w.flush()?;
            Ok(true)
        }
        Command::Validate { trials, sigma, seed, config } => {
            let base = match config {
                Some(path) => {
                    let text = std::fs::read_to_string(&path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
                    SystemParams::from_config_str(&text)?
                }
                None => SystemParams::table1(8, 1.0),
            };
            warn_self_interference(&base);
            let report = validate(&base, &ValidateOptions { trials, sigma, seed, corrupt_varpi1: None })?;
            println!("{report}");
            Ok(report.all_passed())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("jsacc: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
