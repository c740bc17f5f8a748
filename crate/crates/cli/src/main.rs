//! `rrcm` — reduced-rank constant-modulus beamforming experiments.
//!
//! Subcommands reproduce the standard experiment set and write
//! self-describing CSV files: `sinr-snapshots` (output SINR versus snapshot
//! count), `sinr-rank` (final SINR versus rank), `mismatch` (ideal versus
//! mismatched presumed DOA), and `complexity` (arithmetic-cost table).
//!
//! Configuration precedence: command-line flags > `--config` file > defaults.
//! Exit codes: 0 success, 1 I/O failure, 2 configuration error, 3 numerical
//! failure (annotated with the Monte-Carlo run index).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use rrcm_core::error::Error as CoreError;
use rrcm_core::experiments::{
    run_complexity_table, run_mismatch_compare, run_sinr_vs_rank, run_sinr_vs_snapshots,
    ExperimentConfig, ExperimentKind, RankSpec, RunAlgorithm,
};
use rrcm_core::report::{
    complexity_text_table, format_significant, write_complexity_csv, write_mismatch_csv,
    write_rank_csv, write_sinr_csv,
};

#[derive(Parser)]
#[command(
    name = "rrcm",
    version,
    about = "Reduced-rank constant-modulus adaptive beamforming experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,

    /// Flat `key = value` configuration file (flags override it).
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Directory for output CSV files.
    #[arg(long, global = true, default_value = "out", value_name = "DIR")]
    out: PathBuf,

    /// Base seed for the Monte-Carlo runs.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Number of Monte-Carlo runs K.
    #[arg(long, global = true, value_name = "K")]
    runs: Option<usize>,

    /// Rank r, or an inclusive range r1..r2 (rank sweep only).
    #[arg(long, global = true, value_name = "R|R1..R2")]
    rank: Option<String>,

    /// Comma-separated algorithms: fullrank-cmv, fullrank-ccm, jio-ccm, jio-ccm-gs.
    #[arg(long, global = true, value_name = "LIST")]
    algorithms: Option<String>,

    /// Use the full-scale run count (K = 1000); --runs takes precedence.
    #[arg(long, global = true)]
    paper_scale: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Output SINR versus the number of snapshots.
    SinrSnapshots,
    /// Final output SINR versus the rank r at fixed snapshot count.
    SinrRank,
    /// Ideal versus mismatched presumed DOA, on identical data.
    Mismatch,
    /// Arithmetic-cost table for all algorithm families.
    Complexity,
}

impl Command {
    fn kind(&self) -> ExperimentKind {
        match self {
            Command::SinrSnapshots => ExperimentKind::SinrVsSnapshots,
            Command::SinrRank => ExperimentKind::SinrVsRank,
            Command::Mismatch => ExperimentKind::MismatchCompare,
            Command::Complexity => ExperimentKind::ComplexityTable,
        }
    }
}

enum AppError {
    Core(CoreError),
    Io(std::io::Error),
}

impl From<CoreError> for AppError {
    fn from(err: CoreError) -> Self {
        AppError::Core(err)
    }
}

impl From<std::io::Error> for AppError {
    fn from(err: std::io::Error) -> Self {
        AppError::Io(err)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Io(err)) => {
            eprintln!("error: {err}");
            ExitCode::from(1)
        }
        Err(AppError::Core(err)) => {
            eprintln!("error: {err}");
            ExitCode::from(if err.is_config() { 2 } else { 3 })
        }
    }
}

fn resolve_config(cli: &Cli) -> Result<ExperimentConfig, AppError> {
    let mut config = match &cli.config {
        Some(path) => {
            let text = fs::read_to_string(path)?;
            ExperimentConfig::parse_str(&text)?
        }
        None => ExperimentConfig::default(),
    };
    config.experiment = cli.command.kind();
    if cli.paper_scale {
        config.num_runs = 1000;
    }
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(runs) = cli.runs {
        config.num_runs = runs;
    }
    if let Some(rank) = &cli.rank {
        config.rank = RankSpec::parse(rank)?;
    }
    if let Some(list) = &cli.algorithms {
        config.algorithms = list
            .split(',')
            .map(|part| RunAlgorithm::parse(part.trim()))
            .collect::<Result<Vec<_>, _>>()?;
    }
    config.validate()?;
    Ok(config)
}

fn output_path(out_dir: &Path, kind: ExperimentKind) -> PathBuf {
    let timestamp = chrono::Local::now().format("%Y%m%d-%H%M%S");
    out_dir.join(format!("{}_{timestamp}.csv", kind.label()))
}

fn run(cli: &Cli) -> Result<(), AppError> {
    let config = resolve_config(cli)?;
    fs::create_dir_all(&cli.out)?;
    let path = output_path(&cli.out, config.experiment);
    let mut file = fs::File::create(&path)?;

    match cli.command {
        Command::SinrSnapshots => {
            let curves = run_sinr_vs_snapshots(&config)?;
            write_sinr_csv(&mut file, &config, &curves)?;
            println!(
                "SINR at N = {} over K = {} runs:",
                config.num_snapshots, config.num_runs
            );
            for (algorithm, curve) in &curves {
                println!(
                    "  {:<13} {} dB",
                    algorithm.label(),
                    format_significant(curve.final_sinr_db(), 6)
                );
            }
        }
        Command::SinrRank => {
            let sweep = run_sinr_vs_rank(&config)?;
            write_rank_csv(&mut file, &config, &sweep)?;
            for (column, algorithm) in sweep.algorithms.iter().enumerate() {
                let best = sweep
                    .best_rank(*algorithm)
                    .expect("sweep contains every configured algorithm");
                let best_row = sweep.ranks.iter().position(|&r| r == best).unwrap();
                println!(
                    "  {:<13} best rank {} ({} dB at N = {})",
                    algorithm.label(),
                    best,
                    format_significant(sweep.final_sinr_db[best_row][column], 6),
                    config.num_snapshots
                );
            }
        }
        Command::Mismatch => {
            let comparison = run_mismatch_compare(&config)?;
            write_mismatch_csv(&mut file, &config, &comparison)?;
            println!(
                "Steady-state SINR, ideal vs {}° mismatch (trailing 50-snapshot mean):",
                config.mismatch_deg
            );
            for ((algorithm, ideal), (_, mismatched)) in
                comparison.ideal.iter().zip(&comparison.mismatched)
            {
                println!(
                    "  {:<13} {} dB -> {} dB",
                    algorithm.label(),
                    format_significant(ideal.steady_state_db(50), 6),
                    format_significant(mismatched.steady_state_db(50), 6)
                );
            }
        }
        Command::Complexity => {
            let reports = run_complexity_table(&config)?;
            write_complexity_csv(&mut file, &config, &reports)?;
            print!("{}", complexity_text_table(&reports));
        }
    }
    println!("wrote {}", path.display());
    Ok(())
}
