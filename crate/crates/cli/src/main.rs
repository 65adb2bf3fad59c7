//! `securesm`: runs the secrecy-rate experiments and writes CSV tables plus
//! matplotlib scripts.
//!
//! Exit codes: 0 success, 1 I/O failure, 2 configuration error, 3 numerical
//! failure.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use securesm::harness::{
    run_cdf, run_complexity_curve, run_iteration_pmf, run_sr_vs_snr, CdfRow, ExperimentConfig,
    FlopRow, IterRow, SrRow, Table,
};
use securesm::Error;

#[derive(Parser)]
#[command(name = "securesm", version, about = "Secure spatial-modulation precoding experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mean Monte-Carlo SR and ASR versus SNR for each method.
    SrVsSnr(Common),
    /// Per-realization secrecy rates at the configured `cdf_snr_db` points.
    Cdf(Common),
    /// Optimizer iteration counts at `iters_snr_db`.
    Iters(Common),
    /// FLOP counts over `flops.n_tx_grid`.
    Flops(Common),
}

#[derive(Args)]
struct Common {
    /// TOML experiment configuration; defaults apply to omitted keys.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the configured seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory, created if missing.
    #[arg(long)]
    out: PathBuf,
}

impl Common {
    fn load(&self) -> Result<ExperimentConfig, Error> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::from_path(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(seed) = self.seed {
            cfg.seed = seed;
        }
        Ok(cfg)
    }
}

fn run(command: &Command) -> Result<(PathBuf, &'static str, Table), Error> {
    let (common, stem, table) = match command {
        Command::SrVsSnr(c) => (c, "sr_vs_snr", SrRow::table(&run_sr_vs_snr(&c.load()?)?)),
        Command::Cdf(c) => {
            let cfg = c.load()?;
            (c, "cdf", CdfRow::table(&run_cdf(&cfg, &cfg.cdf_snr_db)?))
        }
        Command::Iters(c) => (c, "iters", IterRow::table(&run_iteration_pmf(&c.load()?)?)),
        Command::Flops(c) => {
            let cfg = c.load()?;
            let inputs = cfg.complexity_inputs(cfg.n_tx);
            (c, "flops", FlopRow::table(&run_complexity_curve(&cfg.flops.n_tx_grid, &inputs)?))
        }
    };
    table.emit(&common.out, stem)?;
    Ok((common.out.clone(), stem, table))
}

fn exit_code(err: &Error) -> u8 {
    if err.is_numerical() {
        3
    } else if matches!(err, Error::Io(_)) {
        1
    } else {
        2
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok((dir, stem, table)) => {
            let csv = Path::new(&dir).join(format!("{stem}.csv"));
            eprintln!("wrote {} rows to {}", table.rows.len(), csv.display());
            ExitCode::SUCCESS
        }
        Err(err) => {
            eprintln!("securesm: {err}");
            ExitCode::from(exit_code(&err))
        }
    }
}
