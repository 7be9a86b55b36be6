use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use ces_bench::{
    parse_dataset_csv, render_mse_csv, render_timing_csv, run_estimate, run_mse_sweep,
    run_timing_sweep, BenchError, EstimateKind, SweepConfig,
};

#[derive(Parser)]
#[command(name = "ces-bench", about = "Monte Carlo benchmarks for CES shape/location estimators")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Bias/MSE/bound sweep over the tail-parameter grid, CSV out.
    SweepMse {
        /// Flat JSON config (keys: n, l, trials, s_grid, sigma_x2,
        /// estimators, nu, seed, workers).
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Median wall-time comparison of the shape estimators, CSV out.
    SweepTiming {
        /// Comma-separated problem dimensions, e.g. 8,12,16.
        #[arg(long, value_delimiter = ',', required = true)]
        n: Vec<usize>,
        #[arg(long, default_value_t = 11)]
        reps: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run one estimator on an observation CSV, JSON out.
    Estimate {
        /// Input CSV with header re_1,im_1,…,re_N,im_N.
        #[arg(long = "in")]
        input: PathBuf,
        /// One of: tyler, r-vdw, r-t.
        #[arg(long)]
        estimator: String,
        #[arg(long, default_value_t = 5.0)]
        nu: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
}

fn read_file(path: &PathBuf) -> Result<String, BenchError> {
    fs::read_to_string(path)
        .map_err(|e| BenchError::Config(format!("cannot read {}: {e}", path.display())))
}

fn write_file(path: &PathBuf, contents: &str) -> Result<(), BenchError> {
    fs::write(path, contents)
        .map_err(|e| BenchError::Runtime(format!("cannot write {}: {e}", path.display())))
}

fn run(cmd: Cmd) -> Result<(), BenchError> {
    match cmd {
        Cmd::SweepMse { config, out } => {
            let cfg = SweepConfig::from_json_str(&read_file(&config)?)?;
            let rows = run_mse_sweep(&cfg)?;
            write_file(&out, &render_mse_csv(&rows))
        }
        Cmd::SweepTiming { n, reps, seed, out } => {
            let rows = run_timing_sweep(&n, reps, seed)?;
            write_file(&out, &render_timing_csv(&rows))
        }
        Cmd::Estimate {
            input,
            estimator,
            nu,
            seed,
            out,
        } => {
            let kind = EstimateKind::parse(&estimator)?;
            let d = parse_dataset_csv(&read_file(&input)?)?;
            let result = run_estimate(&d, kind, nu, seed)?;
            let json = serde_json::to_string_pretty(&result)
                .map_err(|e| BenchError::Runtime(e.to_string()))?;
            write_file(&out, &json)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
