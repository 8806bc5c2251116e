use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;

use twoscale::harness::{self, AnyCoeffSpec, Run1dConfig, Run2dConfig};
use twoscale::rng::ByteStreamRng;
use twoscale::{Error, Result};

const SCHEDULE: &str = "Every experiment reads the byte file from offset 0 in a fresh stream: \
the 1D coefficient takes two draws per interval (width, then value), the random-sines \
coefficient two draws per mode (angle, then phase). Without --random-bytes the bundled \
fixture is used.";

#[derive(Parser)]
#[command(name = "twoscale", version, about = "Two-scale upscaling experiments in 1D and 2D", after_help = SCHEDULE)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Byte file the random sequence is read from.
    #[arg(long, value_name = "PATH")]
    random_bytes: Option<PathBuf>,
    /// Output directory.
    #[arg(long, value_name = "DIR", default_value = "out")]
    out_dir: PathBuf,
    /// Worker threads for the cell sweep (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// 1D sweep over extensions and averaging sizes; writes errors1d.csv.
    Run1d {
        /// JSON configuration; missing fields take defaults.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Use the full solution grid (6.4e7 nodes).
        #[arg(long)]
        paper_scale: bool,
        #[command(flatten)]
        common: Common,
    },
    /// 2D sweep over mesh sizes; writes curves.csv, contrast.csv, tensors and cell stores.
    Run2d {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Use N_ref = 4096 and cell grids up to 512.
        #[arg(long)]
        paper_scale: bool,
        #[command(flatten)]
        common: Common,
    },
    /// Solves both cell problems for a square window of samples read from a CSV file.
    Cellprobe {
        /// Window file: one row of samples per line, first line at y2 = 0.
        window: PathBuf,
        /// Also write w1, w2 to this CSV file.
        #[arg(long)]
        solutions: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Samples a coefficient to CSV (stdout unless --output).
    DumpCoeff {
        /// a1 | a2 | a3 | const1d:<c> | mingyue | sines:<n>[:<contrast>] | const2d:<c>
        coefficient: AnyCoeffSpec,
        /// Points in 1D, squares per side in 2D.
        #[arg(long, default_value_t = 1000)]
        samples: usize,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long, value_name = "PATH")]
        random_bytes: Option<PathBuf>,
    },
}

fn load_config<T: DeserializeOwned + Default>(path: Option<&Path>) -> Result<T> {
    match path {
        None => Ok(T::default()),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
            Ok(serde_json::from_str(&text)?)
        }
    }
}

fn load_bytes(path: Option<&Path>) -> Result<ByteStreamRng> {
    match path {
        Some(p) => ByteStreamRng::from_file(p),
        None => Ok(ByteStreamRng::fixture()),
    }
}

fn set_threads(threads: Option<usize>) -> Result<()> {
    if let Some(n) = threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Error::Config(format!("thread pool: {e}")))?;
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run1d { config, paper_scale, common } => {
            set_threads(common.threads)?;
            let mut cfg: Run1dConfig = load_config(config.as_deref())?;
            if paper_scale {
                cfg = cfg.paper_scale();
            }
            let bytes = load_bytes(common.random_bytes.as_deref())?;
            let sweep = harness::run1d(&cfg, &bytes, common.random_bytes.as_deref(), &common.out_dir)?;
            let failed = sweep.rows.iter().filter(|r| r.e2.is_nan()).count();
            println!("{} rows written to {} ({failed} failed)", sweep.rows.len(), common.out_dir.display());
        }
        Command::Run2d { config, paper_scale, common } => {
            set_threads(common.threads)?;
            let mut cfg: Run2dConfig = load_config(config.as_deref())?;
            if paper_scale {
                cfg = cfg.paper_scale();
            }
            let bytes = load_bytes(common.random_bytes.as_deref())?;
            let sweep = harness::run2d(&cfg, &bytes, common.random_bytes.as_deref(), &common.out_dir)?;
            let failed = sweep.records.iter().filter(|r| r.failed()).count();
            println!("{} curve points written to {} ({failed} failed)", sweep.records.len(), common.out_dir.display());
        }
        Command::Cellprobe { window, solutions, threads } => {
            set_threads(threads)?;
            let (samples, n) = harness::read_window_csv(&window)?;
            let probe = harness::cellprobe(&samples, n)?;
            print!("{}", probe.report());
            if let Some(path) = solutions {
                let file = fs::File::create(&path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
                let mut out = std::io::BufWriter::new(file);
                probe
                    .write_solutions_csv(&mut out)
                    .and_then(|_| out.flush())
                    .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
            }
        }
        Command::DumpCoeff { coefficient, samples, output, random_bytes } => {
            let bytes = load_bytes(random_bytes.as_deref())?;
            match output {
                Some(path) => {
                    let file = fs::File::create(&path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
                    harness::dump_coeff(coefficient, &bytes, samples, std::io::BufWriter::new(file))?;
                }
                None => harness::dump_coeff(coefficient, &bytes, samples, std::io::stdout().lock())?,
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
