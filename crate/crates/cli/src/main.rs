//! `agme` command line: run experiments, compare runs, replay dumps.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use agme::runner::{compare_runs, run_experiment, RunConfig, Replayer};

#[derive(Parser)]
#[command(name = "agme", version, about = "Goal manifold exploration experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run every replicate of an experiment config.
    Run {
        config: PathBuf,
        /// Override the trial budget.
        #[arg(long)]
        trials: Option<usize>,
        /// Evaluate every this many trials (regenerates the schedule).
        #[arg(long)]
        eval_every: Option<usize>,
        /// Override the replicate seeds (comma separated).
        #[arg(long, value_delimiter = ',')]
        seeds: Option<Vec<u64>>,
        /// Override the output directory.
        #[arg(long)]
        output_dir: Option<PathBuf>,
    },
    /// Mean performance per trial of two output directories.
    Compare { dir_a: PathBuf, dir_b: PathBuf },
    /// Re-execute a dump row (or `all`) and check the outcome bit for bit.
    Replay {
        dump: PathBuf,
        #[arg(value_parser = parse_index)]
        index: Target,
    },
}

#[derive(Clone, Copy)]
enum Target {
    All,
    Row(usize),
}

fn parse_index(s: &str) -> Result<Target, String> {
    if s == "all" {
        return Ok(Target::All);
    }
    s.parse()
        .map(Target::Row)
        .map_err(|_| format!("expected a row number or `all`, got `{s}`"))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> agme::Result<ExitCode> {
    match cli.command {
        Command::Run {
            config,
            trials,
            eval_every,
            seeds,
            output_dir,
        } => {
            let mut cfg = RunConfig::load(&config)?;
            if trials.is_some() || eval_every.is_some() {
                let t = trials.unwrap_or(cfg.trials);
                cfg = cfg.with_trials(t, eval_every);
            }
            if let Some(seeds) = seeds {
                cfg.seeds = seeds;
            }
            if let Some(dir) = output_dir {
                cfg.output_dir = dir;
            }
            let replicates = run_experiment(&cfg)?;
            for r in &replicates {
                let m = r.final_metrics();
                println!(
                    "seed {}: trial {} perf {} dispersion {} size {}",
                    r.seed, m.trial, m.perf, m.dispersion, m.repertoire_size
                );
            }
            println!("wrote {}", cfg.output_dir.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Compare { dir_a, dir_b } => {
            let c = compare_runs(&dir_a, &dir_b)?;
            c.write_csv(std::io::stdout().lock())
                .map_err(|e| agme::Error::Io {
                    path: "<stdout>".into(),
                    source: e,
                })?;
            println!("# final difference {}", c.final_difference());
            Ok(ExitCode::SUCCESS)
        }
        Command::Replay { dump, index } => {
            let mut replayer = Replayer::open(&dump)?;
            let results = match index {
                Target::All => replayer.replay_all()?,
                Target::Row(i) => vec![replayer.replay(i)?],
            };
            let matched = results.iter().filter(|r| r.matched).count();
            for r in results.iter().filter(|r| !r.matched) {
                println!("row {}: mismatch", r.index);
            }
            println!("{matched}/{} rows match", results.len());
            Ok(if matched == results.len() {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
    }
}
