//! Subcommand implementations. Each writes its product to `out` and returns
//! the process exit status.

use std::io::{self, Write};

use anyhow::{anyhow, bail, Context, Result};
use spin1_epr::bell::{self, maximize_violation_with, MaximizeOptions};
use spin1_epr::correlations::{
    cmf_correlation, cmf_probabilities, correlation_general, correlation_trace, extremum_scan, probabilities_general,
    ExtremumKind, Spacing,
};
use spin1_epr::observables::probability_oracle;
use spin1_epr::states::scalar_state;
use spin1_epr::verify::{Profile, Suite};
use spin1_epr::{
    BellConfig, BellReport, CmfConfig, Direction, FigureId, FourMomentum, Grid, Inequality, Outcome, ProbabilityTable,
    Quantity, Table,
};

use crate::args::{BellMaxArgs, CmfArgs, ConfigFile, FigureArgs, ProbeArgs, ScanArgs, VerifyArgs};
use crate::numbers::{fmt_f64, fmt_vector, parse_number, parse_vector};

/// Exit status of a successful command.
pub const EXIT_OK: i32 = 0;
/// Exit status for invalid input.
pub const EXIT_USAGE: i32 = 1;
/// Exit status when an invariant check fails.
pub const EXIT_VERIFY_FAILED: i32 = 2;

/// Default seed of `bell-max`.
pub const DEFAULT_SEED: u64 = 20_240_101;

fn number(cfg: &ConfigFile, flag: &Option<String>, key: &str) -> Result<Option<f64>> {
    cfg.resolve(flag, key)
        .map(|s| parse_number(&s).with_context(|| format!("--{key}")))
        .transpose()
}

fn integer<T: std::str::FromStr>(cfg: &ConfigFile, flag: &Option<String>, key: &str) -> Result<Option<T>> {
    cfg.resolve(flag, key)
        .map(|s| {
            s.trim()
                .parse::<T>()
                .map_err(|_| anyhow!("--{key}: expected a nonnegative integer, got `{s}`"))
        })
        .transpose()
}

/// Runs the invariant suite and prints one line per check.
pub fn verify(suite: &Suite, out: &mut dyn Write) -> Result<i32> {
    let report = suite.run();
    for check in &report.checks {
        writeln!(out, "{check}")?;
    }
    let failed = report.failures().count();
    writeln!(
        out,
        "summary: {} checks, {} passed, {} failed, profile {:?}",
        report.checks.len(),
        report.checks.len() - failed,
        failed,
        suite.profile
    )?;
    Ok(if failed == 0 { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

pub fn cmd_verify(args: &VerifyArgs, cfg: &ConfigFile, out: &mut dyn Write) -> Result<i32> {
    let profile = match cfg.resolve(&args.profile, "profile") {
        Some(p) => p.parse::<Profile>().map_err(|e| anyhow!(e))?,
        None => Profile::Default,
    };
    let mut suite = Suite::new(profile);
    if let Some(seed) = integer(cfg, &args.seed, "seed")? {
        suite.seed = seed;
    }
    if let Some(samples) = integer::<usize>(cfg, &args.samples, "samples")? {
        if samples == 0 {
            bail!("--samples must be positive");
        }
        suite.samples = samples;
    }
    verify(&suite, out)
}

fn cmf_config(args: &CmfArgs, cfg: &ConfigFile, require_x: bool) -> Result<CmfConfig> {
    let x = number(cfg, &args.x, "x")?;
    let get = |flag: &Option<String>, key: &str| -> Result<f64> {
        number(cfg, flag, key)?.ok_or_else(|| anyhow!("missing --{key}"))
    };
    let x = match (x, require_x) {
        (Some(x), _) => x,
        (None, false) => 0.0,
        (None, true) => bail!("missing --x"),
    };
    Ok(CmfConfig::new(
        x,
        get(&args.ab, "ab")?,
        get(&args.an, "an")?,
        get(&args.bn, "bn")?,
    )?)
}

fn write_table(out: &mut dyn Write, prefix: &str, t: &ProbabilityTable) -> Result<()> {
    for s in Outcome::ALL {
        for l in Outcome::ALL {
            writeln!(out, "{prefix}.P_{}{}: {}", s.short(), l.short(), fmt_f64(t.get(s, l)))?;
        }
    }
    Ok(())
}

/// Single-configuration report: probabilities by the trace formulas and the
/// spectral oracle, the correlation by every path, and the worst disagreement.
pub fn cmd_probe(args: &ProbeArgs, cfg: &ConfigFile, out: &mut dyn Write) -> Result<i32> {
    let explicit = ["k", "p", "a", "b"].map(|key| cfg.get(key).is_some());
    let use_vectors =
        args.k.is_some() || args.p.is_some() || args.a.is_some() || args.b.is_some() || explicit.iter().any(|&e| e);

    let (k, p, a, b, cmf) = if use_vectors {
        let vector = |flag: &Option<String>, key: &str| -> Result<nalgebra::Vector3<f64>> {
            let s = cfg.resolve(flag, key).ok_or_else(|| anyhow!("missing --{key}"))?;
            parse_vector(&s).with_context(|| format!("--{key}"))
        };
        let k = FourMomentum::on_shell(vector(&args.k, "k")?);
        let p = FourMomentum::on_shell(vector(&args.p, "p")?);
        let a = Direction::normalize(vector(&args.a, "a")?).context("--a")?;
        let b = Direction::normalize(vector(&args.b, "b")?).context("--b")?;
        (k, p, a, b, None)
    } else {
        let c = cmf_config(&args.cmf, cfg, true)?;
        let (a, b, n) = c.directions();
        let (k, p) = c.momenta(&n);
        (k, p, a, b, Some(c))
    };

    let trace = probabilities_general(&k, &p, &a, &b);
    let oracle = probability_oracle(&scalar_state(&k, &p), &a, &b)?;
    let c_table = trace.correlation();
    let c_trace = correlation_trace(&k, &p, &a, &b);
    let c_explicit = correlation_general(&k, &p, &a, &b);
    let mut residual = trace
        .max_deviation(&oracle)
        .max((c_table - c_trace).abs())
        .max((c_trace - c_explicit).abs())
        .max((oracle.correlation() - c_trace).abs());

    writeln!(out, "k: {}", fmt_vector(k.momentum()))?;
    writeln!(out, "p: {}", fmt_vector(p.momentum()))?;
    writeln!(out, "a: {}", fmt_vector(a.as_vector()))?;
    writeln!(out, "b: {}", fmt_vector(b.as_vector()))?;
    write_table(out, "trace", &trace)?;
    write_table(out, "oracle", &oracle)?;
    if let Some(c) = cmf {
        let closed = cmf_probabilities(&c);
        residual = residual
            .max(closed.max_deviation(&trace))
            .max((cmf_correlation(&c) - c_trace).abs());
        writeln!(out, "x: {}", fmt_f64(c.x))?;
        write_table(out, "cmf", &closed)?;
        writeln!(out, "C.cmf: {}", fmt_f64(cmf_correlation(&c)))?;
    }
    writeln!(out, "C.table: {}", fmt_f64(c_table))?;
    writeln!(out, "C.trace: {}", fmt_f64(c_trace))?;
    writeln!(out, "C.explicit: {}", fmt_f64(c_explicit))?;
    match trace.normalized_correlation() {
        Ok(v) => writeln!(out, "C_norm: {}", fmt_f64(v))?,
        Err(_) => writeln!(out, "C_norm: undefined")?,
    }
    writeln!(out, "residual: {}", fmt_f64(residual))?;
    Ok(EXIT_OK)
}

/// Writes a table as CSV with 17 significant digits.
fn csv_io(e: csv::Error) -> io::Error {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => e,
        other => io::Error::other(format!("{other:?}")),
    }
}

pub fn write_csv(table: &Table, out: &mut dyn Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(&table.header).map_err(csv_io)?;
    for row in &table.rows {
        w.write_record(row.iter().map(|v| fmt_f64(*v))).map_err(csv_io)?;
    }
    w.flush()?;
    Ok(())
}

pub fn cmd_figure(args: &FigureArgs, cfg: &ConfigFile, out: &mut dyn Write, notes: &mut dyn Write) -> Result<i32> {
    let id = cfg
        .resolve(&args.id, "id")
        .ok_or_else(|| anyhow!("missing figure id"))?;
    let figure: FigureId = id.parse().map_err(|e: String| anyhow!(e))?;
    let table = figure.table()?;
    write_csv(&table, out)?;
    if let Some(note) = figure.note() {
        writeln!(notes, "note: {note}")?;
    }
    Ok(EXIT_OK)
}

fn write_bell_report(out: &mut dyn Write, report: &BellReport, mode: &str, seed: Option<u64>) -> Result<()> {
    let cfg = &report.argmax;
    writeln!(out, "inequality: {}", report.inequality)?;
    writeln!(out, "mode: {mode}")?;
    writeln!(out, "lhs: {}", fmt_f64(report.lhs))?;
    writeln!(out, "bound: {}", fmt_f64(report.bound))?;
    writeln!(out, "violated: {}", report.violated)?;
    writeln!(out, "x: {}", fmt_f64(cfg.x))?;
    writeln!(out, "x_free: {}", report.x_free)?;
    if let Some(seed) = seed {
        writeln!(out, "seed: {seed}")?;
    }
    writeln!(out, "starts: {}", report.starts_used)?;
    writeln!(out, "evaluations: {}", report.evaluations)?;
    writeln!(out, "converged: {}", report.converged)?;
    writeln!(out, "a: {}", fmt_vector(cfg.a.as_vector()))?;
    writeln!(out, "b: {}", fmt_vector(cfg.b.as_vector()))?;
    writeln!(out, "c: {}", fmt_vector(cfg.c.as_vector()))?;
    if report.inequality.directions() == 4 {
        writeln!(out, "d: {}", fmt_vector(cfg.d.as_vector()))?;
    }
    writeln!(out, "n: {}", fmt_vector(cfg.n.as_vector()))?;
    if !report.parameters.is_empty() {
        let params: Vec<String> = report.parameters.iter().map(|v| fmt_f64(*v)).collect();
        writeln!(out, "parameters: {}", params.join(","))?;
    }
    Ok(())
}

pub fn cmd_bell_max(args: &BellMaxArgs, cfg: &ConfigFile, out: &mut dyn Write) -> Result<i32> {
    let name = cfg
        .resolve(&args.inequality, "inequality")
        .ok_or_else(|| anyhow!("missing inequality"))?;
    let inequality: Inequality = name.parse().map_err(|e: String| anyhow!(e))?;
    let x = match cfg.resolve(&args.x, "x") {
        None => None,
        Some(s) if s.trim() == "free" => None,
        Some(s) => Some(parse_number(&s).context("--x")?),
    };

    if let Some(theta) = number(cfg, &args.theta, "theta")? {
        let x = x.ok_or_else(|| anyhow!("--theta needs a fixed --x"))?;
        let config: BellConfig = BellConfig::coplanar(theta, x)?;
        let report = BellReport::evaluate(inequality, &config);
        write_bell_report(out, &report, "evaluate", None)?;
        writeln!(out, "theta: {}", fmt_f64(theta))?;
        writeln!(out, "coplanar_closed_form: {}", fmt_f64(bell::coplanar_lhs(theta, x)))?;
        return Ok(EXIT_OK);
    }

    let seed = integer(cfg, &args.seed, "seed")?.unwrap_or(DEFAULT_SEED);
    let mut options = MaximizeOptions::default();
    if let Some(starts) = integer::<usize>(cfg, &args.starts, "starts")? {
        options.starts = starts;
    }
    let report = maximize_violation_with(inequality, x, seed, &options)?;
    write_bell_report(out, &report, "optimize", Some(seed))?;
    Ok(EXIT_OK)
}

fn parse_grid(s: &str) -> Result<Grid> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 4 {
        bail!("--grid: expected `min:max:count:linear|log`, got `{s}`");
    }
    let spacing = match parts[3] {
        "linear" => Spacing::Linear,
        "log" => Spacing::Log,
        other => bail!("--grid: unknown spacing `{other}`"),
    };
    let count = parts[2]
        .parse::<usize>()
        .map_err(|_| anyhow!("--grid: invalid count `{}`", parts[2]))?;
    Ok(Grid::new(
        parse_number(parts[0])?,
        parse_number(parts[1])?,
        count,
        spacing,
    )?)
}

pub fn cmd_scan(args: &ScanArgs, cfg: &ConfigFile, out: &mut dyn Write) -> Result<i32> {
    let name = cfg
        .resolve(&args.quantity, "quantity")
        .ok_or_else(|| anyhow!("missing quantity"))?;
    let quantity = Quantity::parse(&name).ok_or_else(|| anyhow!("unknown quantity `{name}` (C, C_norm or P_xy)"))?;
    let config = cmf_config(&args.cmf, cfg, false)?;
    let grid = match cfg.resolve(&args.grid, "grid") {
        Some(s) => parse_grid(&s)?,
        None => Grid::default_x(),
    };
    let curve = args.curve || cfg.get("curve") == Some("true");
    let table = if curve {
        Table {
            header: vec!["x".to_string(), quantity.name()],
            rows: grid
                .points()
                .into_iter()
                .map(|x| vec![x, quantity.evaluate(&config.with_x(x))])
                .collect(),
        }
    } else {
        let mut w = csv::Writer::from_writer(&mut *out);
        w.write_record(["kind", "x", "value"])?;
        for e in extremum_scan(&config, quantity, &grid)? {
            let kind = match e.kind {
                ExtremumKind::Maximum => "max",
                ExtremumKind::Minimum => "min",
            };
            w.write_record([kind.to_string(), fmt_f64(e.x), fmt_f64(e.value)])?;
        }
        w.flush()?;
        return Ok(EXIT_OK);
    };
    write_csv(&table, out)?;
    Ok(EXIT_OK)
}
