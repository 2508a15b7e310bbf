use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use relaysel_cli::config::Mode;
use relaysel_cli::{emit_plotdata, parse_config, read_csv, run_experiment, write_csv, CliError, Experiment, Result};

/// Buffer-aided successive relay selection experiments.
#[derive(Parser)]
#[command(name = "relaysel", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run an experiment file and write the results table as CSV.
    Run {
        config: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        slots: Option<u64>,
        /// Output CSV (defaults to the file's `output` key, else stdout).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate only the Markov-chain model of an experiment file.
    Analyze {
        config: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Split a results table into per-curve files for one figure.
    Plotdata {
        table: PathBuf,
        /// outage, throughput, power, policy-outage, relay-outage or relay-power.
        figure: String,
        #[arg(long, default_value = "plotdata")]
        out: PathBuf,
    },
}

fn load(path: &Path) -> Result<Experiment> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Io { path: path.into(), source: e })?;
    parse_config(&text)
}

fn emit(exp: &Experiment, out: Option<PathBuf>) -> Result<()> {
    let rows = run_experiment(exp)?;
    match out.or_else(|| exp.output.clone()) {
        Some(path) => {
            let file = File::create(&path).map_err(|e| CliError::Io { path: path.clone(), source: e })?;
            write_csv(&rows, BufWriter::new(file)).map_err(|source| CliError::Csv { path, source })
        }
        None => {
            let stdout = io::stdout();
            write_csv(&rows, stdout.lock()).map_err(|source| CliError::Csv { path: "<stdout>".into(), source })
        }
    }
}

fn execute(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run { config, seed, slots, out } => {
            let mut exp = load(&config)?;
            if let Some(s) = seed {
                exp.seed = s;
            }
            if let Some(n) = slots {
                exp.slots = n;
                // re-validate the warmup against the new run length
                exp = parse_config(&relaysel_cli::serialize(&exp))?;
            }
            emit(&exp, out)
        }
        Command::Analyze { config, out } => {
            let mut exp = load(&config)?;
            exp.mode = Mode::Analytic;
            let exp = parse_config(&relaysel_cli::serialize(&exp))?;
            emit(&exp, out)
        }
        Command::Plotdata { table, figure, out } => {
            let rows = read_csv(&table)?;
            let files = emit_plotdata(&rows, &figure, &out)?;
            let mut stdout = io::stdout().lock();
            for f in files {
                let _ = writeln!(stdout, "{}\t{}\t{} points", f.path.display(), f.label, f.points);
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
