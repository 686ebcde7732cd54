//! Front end for the `spin1-epr` binary.

pub mod args;
pub mod commands;
pub mod numbers;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use anyhow::{Context, Result};

use args::{Cli, Command, ConfigFile};

/// Environment variable holding the worker thread count.
pub const THREADS_ENV: &str = "SPIN1_EPR_THREADS";

/// Configures the global thread pool from [`THREADS_ENV`], if set.
pub fn init_threads() -> Result<()> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .with_context(|| format!("{THREADS_ENV} must be a positive integer, got `{value}`"))?;
    rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    Ok(())
}

fn open_out(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

/// Executes a parsed command line and returns the exit status.
pub fn run(cli: &Cli) -> Result<i32> {
    let cfg = match &cli.config {
        Some(path) => ConfigFile::load(path)?,
        None => ConfigFile::default(),
    };
    let mut out_path = None;
    let status = match &cli.command {
        Command::Verify(a) => commands::cmd_verify(a, &cfg, &mut io::stdout().lock())?,
        Command::Probe(a) => {
            out_path = cfg.resolve_path(&a.out, "out");
            let mut out = open_out(&out_path)?;
            let s = commands::cmd_probe(a, &cfg, &mut out)?;
            out.flush()?;
            s
        }
        Command::Figure(a) => {
            out_path = cfg.resolve_path(&a.out, "out");
            let mut out = open_out(&out_path)?;
            let s = commands::cmd_figure(a, &cfg, &mut out, &mut io::stderr())?;
            out.flush()?;
            s
        }
        Command::BellMax(a) => {
            out_path = cfg.resolve_path(&a.out, "out");
            let mut out = open_out(&out_path)?;
            let s = commands::cmd_bell_max(a, &cfg, &mut out)?;
            out.flush()?;
            s
        }
        Command::Scan(a) => {
            out_path = cfg.resolve_path(&a.out, "out");
            let mut out = open_out(&out_path)?;
            let s = commands::cmd_scan(a, &cfg, &mut out)?;
            out.flush()?;
            s
        }
    };
    if let Some(p) = out_path {
        eprintln!("wrote {}", p.display());
    }
    Ok(status)
}
