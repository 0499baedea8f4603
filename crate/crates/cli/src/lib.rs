//! Command-line driver for the `moutard` binary.

pub mod commands;
pub mod config;
pub mod output;

use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

use commands::{CheckWhich, Failure};
use config::RunConfig;

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;
pub const EXIT_CHECK_FAILED: i32 = 4;

pub const THREADS_ENV: &str = "MOUTARD_THREADS";

#[derive(Debug, Parser)]
#[command(
    name = "moutard",
    version,
    about = "Faddeev Green functions, point-potential spectral data and Moutard transforms"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON run configuration; missing keys take their defaults.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Override the energy E (< 0).
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub energy: Option<f64>,
    /// Override the coupling alpha.
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub alpha: Option<f64>,
    /// Override the largest relative finite-difference step.
    #[arg(long = "fd-step", global = true)]
    pub fd_step: Option<f64>,
    /// Override the output directory.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate g(x, k) by both quadrature routes.
    Green,
    /// Singular circles and the B, b, a profiles of the point potential.
    Spectrum,
    /// Run one family of consistency checks.
    Check {
        #[arg(value_enum)]
        which: CheckArg,
    },
    /// Creation scenario.
    Create,
    /// Annihilation scenario.
    Annihilate,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
pub enum CheckArg {
    Dbar,
    Symmetry,
    Omega,
    Seed,
}

impl From<CheckArg> for CheckWhich {
    fn from(c: CheckArg) -> Self {
        match c {
            CheckArg::Dbar => CheckWhich::Dbar,
            CheckArg::Symmetry => CheckWhich::Symmetry,
            CheckArg::Omega => CheckWhich::Omega,
            CheckArg::Seed => CheckWhich::Seed,
        }
    }
}

fn thread_cap() -> Result<Option<usize>, String> {
    match std::env::var(THREADS_ENV) {
        Err(std::env::VarError::NotPresent) => Ok(None),
        Err(e) => Err(format!("{THREADS_ENV}: {e}")),
        Ok(s) => match s.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(format!(
                "{THREADS_ENV}: expected a positive integer, got {s:?}"
            )),
        },
    }
}

fn resolve(cli: &Cli) -> Result<RunConfig, Failure> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(e) = cli.energy {
        cfg.energy = e;
    }
    if let Some(a) = cli.alpha {
        cfg.alpha = Some(a);
    }
    if let Some(h) = cli.fd_step {
        cfg.fd_step = h;
    }
    if let Some(o) = &cli.out {
        cfg.output_dir = o.clone();
    }
    Ok(cfg)
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    match thread_cap() {
        Ok(Some(n)) => {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
        Ok(None) => {}
        Err(msg) => {
            eprintln!("config error: {msg}");
            return EXIT_CONFIG;
        }
    }
    let result = resolve(&cli).and_then(|cfg| {
        let v = cfg.validate()?;
        let record = match cli.command {
            Command::Green => commands::cmd_green(&cfg, &v),
            Command::Spectrum => commands::cmd_spectrum(&cfg, &v),
            Command::Check { which } => commands::cmd_check(&cfg, &v, which.into()),
            Command::Create => commands::cmd_create(&cfg, &v),
            Command::Annihilate => commands::cmd_annihilate(&cfg, &v),
        }?;
        record.write(&cfg.output_dir).map_err(|e| {
            Failure::Config(format!("output_dir: {}: {e}", cfg.output_dir.display()))
        })?;
        Ok(record)
    });
    match result {
        Ok(record) => {
            for c in &record.summary {
                let tag = if c.pass { "PASS" } else { "FAIL" };
                println!(
                    "{tag} {} value={:e} threshold={:e}",
                    c.name, c.value, c.threshold
                );
            }
            if record.passed {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            }
        }
        Err(Failure::Config(msg)) => {
            eprintln!("config error: {msg}");
            EXIT_CONFIG
        }
        Err(Failure::Numerical(msg)) => {
            eprintln!("numerical failure: {msg}");
            EXIT_NUMERICAL
        }
    }
}
