use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use rfso::config::load_config;
use rfso::runner;

/// Sweeps outage, bit error probability, or ergodic capacity for a mixed
/// RF/FSO relay link and writes a CSV plus a matplotlib plot script.
#[derive(Debug, Parser)]
#[command(name = "rfso", version, about)]
struct Cli {
    /// Experiment description (JSON).
    #[arg(long, value_name = "PATH")]
    config: PathBuf,

    /// Override a config value by dotted path, e.g. rf.n=8 or metric=bep.
    /// Repeatable; later overrides win.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,

    /// Output CSV path (defaults to the config's `output` field).
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,

    /// Monte Carlo seed (overrides the config's `mc.seed`).
    #[arg(long, value_name = "U64")]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::FAILURE
        }
    }
}

fn execute(cli: Cli) -> rfso::Result<()> {
    let mut config = load_config(&cli.config)?;
    for pair in &cli.overrides {
        let (key, value) = pair.split_once('=').ok_or_else(|| {
            rfso::RfsoError::Config(format!(
                "override '{pair}' is not of the form KEY=VALUE"
            ))
        })?;
        config.apply_override(key.trim(), value.trim())?;
    }
    if let Some(out) = cli.out {
        config.set_output(out);
    }
    if let Some(seed) = cli.seed {
        config.set_seed(seed);
    }
    let output = runner::run(&config)?;
    println!(
        "wrote {} ({} rows) and {}",
        output.csv_path.display(),
        output.rows.len(),
        output.plot_path.display()
    );
    Ok(())
}
