use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use rodsim_bench::{BenchError, Config, Experiment};

#[derive(Parser)]
#[command(name = "rodsim", version, about = "Cosserat rod benchmark experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write its CSV and SVG files.
    Run {
        /// One of the names printed by `rodsim list`.
        experiment: Experiment,
        /// Config file; defaults are used for everything it leaves out.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
        /// Worker threads for independent parameter sweeps.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
    /// List the experiments with their default config sections.
    List,
}

fn run(experiment: Experiment, config: Option<PathBuf>, out: PathBuf, jobs: usize) -> Result<(), BenchError> {
    let config = match config {
        Some(p) => Config::load(&p)?,
        None => Config::default(),
    };
    if jobs == 0 {
        return Err(BenchError::Config("--jobs must be at least 1".into()));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| BenchError::Config(format!("cannot start {jobs} worker threads: {e}")))?;
    let lines = pool.install(|| rodsim_bench::experiments::run(experiment, &config, &out))?;
    println!("{experiment}: results in {}", out.display());
    for l in lines {
        println!("  {l}");
    }
    Ok(())
}

fn list(out: &mut impl Write) -> std::io::Result<()> {
    for e in Experiment::ALL {
        writeln!(out, "{e}: {}", e.description())?;
        for line in Config::default_section(e).lines() {
            writeln!(out, "    {line}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::List => {
            // a closed pipe (`rodsim list | head`) is not an error
            let _ = list(&mut std::io::stdout().lock());
            ExitCode::SUCCESS
        }
        Command::Run { experiment, config, out, jobs } => match run(experiment, config, out, jobs) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("rodsim: {e}");
                ExitCode::from(e.exit_code() as u8)
            }
        },
    }
}
