//! Command-line definition and the key/value configuration file.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

#[derive(Debug, Parser)]
#[command(
    name = "spin1-epr",
    version,
    about = "Spin correlations and Bell tests for massive spin-1 boson pairs"
)]
pub struct Cli {
    /// Key/value file (`key = value` per line, `#` comments); flags win on conflict.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the randomized invariant suite; exit 2 if any check fails.
    Verify(VerifyArgs),
    /// Probabilities and correlations at one configuration, by every path.
    Probe(ProbeArgs),
    /// Write the table behind one of the reproduced figures.
    Figure(FigureArgs),
    /// Maximize (or, with --theta, evaluate) a Bell inequality.
    BellMax(BellMaxArgs),
    /// Locate interior extrema of a CMF quantity along x.
    Scan(ScanArgs),
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// default or strict (tolerances divided by ten).
    #[arg(long)]
    pub profile: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    /// Samples per randomized check.
    #[arg(long)]
    pub samples: Option<String>,
}

/// CMF dot products shared by probe and scan.
#[derive(Debug, Args)]
pub struct CmfArgs {
    /// Squared momentum |k|² in units of the mass.
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub ab: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub an: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub bn: Option<String>,
}

#[derive(Debug, Args)]
pub struct ProbeArgs {
    /// Alice's momentum `kx,ky,kz`.
    #[arg(long, allow_hyphen_values = true)]
    pub k: Option<String>,
    /// Bob's momentum `px,py,pz`.
    #[arg(long, allow_hyphen_values = true)]
    pub p: Option<String>,
    /// Alice's measurement axis (normalized if not unit).
    #[arg(long, allow_hyphen_values = true)]
    pub a: Option<String>,
    /// Bob's measurement axis.
    #[arg(long, allow_hyphen_values = true)]
    pub b: Option<String>,
    #[command(flatten)]
    pub cmf: CmfArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    /// probs-perp, corr-perp, probs-half, corr-half, ultrarel-array,
    /// bell-mermin, bell-theta or bell-weighted-x.
    pub id: Option<String>,
    /// Output CSV path; standard output if absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BellMaxArgs {
    /// chsh, mermin or weighted.
    pub inequality: Option<String>,
    /// A fixed x, or `free` to optimize over it.
    #[arg(long, allow_hyphen_values = true)]
    pub x: Option<String>,
    /// Evaluate the coplanar configuration at this angle instead of optimizing.
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    /// Number of random starts.
    #[arg(long)]
    pub starts: Option<String>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    /// C, C_norm, or P_xy with x, y in {p, 0, m}.
    pub quantity: Option<String>,
    #[command(flatten)]
    pub cmf: CmfArgs,
    /// `min:max:count:linear|log`.
    #[arg(long)]
    pub grid: Option<String>,
    /// Emit the sampled curve instead of the extrema.
    #[arg(long)]
    pub curve: bool,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Values read from a configuration file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let Some((key, value)) = line.split_once('=').or_else(|| line.split_once(':')) else {
                bail!("line {}: expected `key = value`, got `{}`", i + 1, raw.trim());
            };
            let key = key.trim().trim_start_matches("--").to_string();
            if key.is_empty() {
                bail!("line {}: empty key", i + 1);
            }
            values.insert(key, value.trim().to_string());
        }
        Ok(ConfigFile { values })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    /// The flag value if given, else the file value.
    pub fn resolve(&self, flag: &Option<String>, key: &str) -> Option<String> {
        flag.clone().or_else(|| self.get(key).map(str::to_string))
    }

    pub fn resolve_path(&self, flag: &Option<PathBuf>, key: &str) -> Option<PathBuf> {
        flag.clone().or_else(|| self.get(key).map(PathBuf::from))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_parsing_and_precedence() {
        let cfg = ConfigFile::parse("# sweep\nx = 1/6\n--ab: -0.5\n\nseed=3 # trailing\n").unwrap();
        assert_eq!(cfg.get("x"), Some("1/6"));
        assert_eq!(cfg.get("ab"), Some("-0.5"));
        assert_eq!(cfg.get("seed"), Some("3"));
        assert_eq!(cfg.resolve(&Some("2".into()), "seed").as_deref(), Some("2"));
        assert_eq!(cfg.resolve(&None, "seed").as_deref(), Some("3"));
        assert_eq!(cfg.resolve(&None, "theta"), None);
        assert!(ConfigFile::parse("just words").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
