//! `tpng`: run t-PNG experiments and verifications from the command line.
//!
//! Exit status: 0 on success, 1 when a verification fails, 2 on usage or
//! configuration errors, 3 when a computation errors out.

mod commands;
mod config;
mod report;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::Result;
use clap::{Parser, Subcommand};
use serde::Deserialize;

use commands::Run;
use config::{merge, ConfigFile};

const EXIT_VERIFY: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_RUNTIME: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "tpng", version, about = "t-deformed polynuclear growth experiments")]
struct Cli {
    /// TOML file with global keys and one table per subcommand
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for reports and data
    #[arg(long, global = true, env = "TPNG_OUT_DIR")]
    out_dir: Option<PathBuf>,
    /// File stem of the outputs (defaults to the subcommand name)
    #[arg(long, global = true)]
    tag: Option<String>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for replicas; results do not depend on it
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Sample the continuum model and histogram the corner height
    SimulatePng(commands::SimulatePng),
    /// Sample a vertex model on a finite corner
    SimulateLattice(commands::SimulateLattice),
    /// Patience sorting with misses
    Patience(commands::Patience),
    /// Stochasticity and limits of the fused weights
    VerifyWeights(commands::VerifyWeights),
    /// Brute force, determinant and Schur forms of the quadrant partition function
    VerifyDetform(commands::VerifyDetform),
    /// Height observable against the Schur measure side
    VerifyIdentity(commands::VerifyIdentity),
    /// Normalized corner height against Tracy-Widom GUE
    TwStats(commands::TwStats),
    /// Finite-eps check of the KPZ normalization
    KpzScaling(commands::KpzScaling),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::SimulatePng(_) => "simulate-png",
            Command::SimulateLattice(_) => "simulate-lattice",
            Command::Patience(_) => "patience",
            Command::VerifyWeights(_) => "verify-weights",
            Command::VerifyDetform(_) => "verify-detform",
            Command::VerifyIdentity(_) => "verify-identity",
            Command::TwStats(_) => "tw-stats",
            Command::KpzScaling(_) => "kpz-scaling",
        }
    }
}

#[derive(Debug, Default, Deserialize)]
struct Globals {
    seed: Option<u64>,
    workers: Option<usize>,
    out_dir: Option<PathBuf>,
}

enum Failure {
    Usage(anyhow::Error),
    Runtime(anyhow::Error),
}

fn execute(cli: Cli) -> std::result::Result<bool, Failure> {
    let file = ConfigFile::load(cli.config.as_deref()).map_err(Failure::Usage)?;
    let globals: Globals =
        serde_json::from_value(serde_json::Value::Object(file.globals())).map_err(|e| Failure::Usage(e.into()))?;
    let run = Run {
        seed: cli.seed.or(globals.seed).unwrap_or(1),
        workers: cli
            .workers
            .or(globals.workers)
            .unwrap_or_else(tpng::stats::default_workers)
            .max(1),
    };
    let out_dir = cli
        .out_dir
        .or(globals.out_dir)
        .unwrap_or_else(|| PathBuf::from("tpng-out"));
    let name = cli.command.name();
    let section = file.section(name);
    let start = Instant::now();
    let result: Result<report::Report> = (|| {
        Ok(match cli.command {
            Command::SimulatePng(o) => commands::simulate_png(merge(section, &o)?, run)?,
            Command::SimulateLattice(o) => commands::simulate_lattice(merge(section, &o)?, run)?,
            Command::Patience(o) => commands::patience(merge(section, &o)?, run)?,
            Command::VerifyWeights(o) => commands::verify_weights(merge(section, &o)?, run)?,
            Command::VerifyDetform(o) => commands::verify_detform(merge(section, &o)?, run)?,
            Command::VerifyIdentity(o) => commands::verify_identity(merge(section, &o)?, run)?,
            Command::TwStats(o) => commands::tw_stats(merge(section, &o)?, run)?,
            Command::KpzScaling(o) => commands::kpz_scaling(merge(section, &o)?, run)?,
        })
    })();
    let report = result.map_err(|e| {
        // bad parameter values are usage errors, everything else from the library is a runtime error
        match e.downcast_ref::<tpng::Error>() {
            Some(tpng::Error::Domain(_)) | Some(tpng::Error::OutOfDomain(_)) | None => Failure::Usage(e),
            Some(_) => Failure::Runtime(e),
        }
    })?;
    let stem = cli.tag.unwrap_or_else(|| name.to_string());
    let files = report
        .write(&out_dir, &stem, start.elapsed())
        .map_err(Failure::Runtime)?;
    // a closed stdout (e.g. piped into head) is not an error; the files are written
    let mut out = std::io::stdout().lock();
    let _ = (|| -> std::io::Result<()> {
        writeln!(out, "{name}: {}", if report.pass { "pass" } else { "FAIL" })?;
        writeln!(
            out,
            "{}",
            serde_json::to_string_pretty(&report.metrics).unwrap_or_default()
        )?;
        for f in files {
            writeln!(out, "wrote {}", f.display())?;
        }
        Ok(())
    })();
    Ok(report.pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(EXIT_VERIFY),
        Err(Failure::Usage(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Runtime(e)) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_RUNTIME)
        }
    }
}
