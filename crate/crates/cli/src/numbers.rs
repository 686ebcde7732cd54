//! Parsing of numeric command-line values: plain floats, `pi` multiples and
//! simple fractions such as `1/6`, `pi/6`, `2pi/3`, `-0.5`.

use anyhow::{anyhow, bail, Result};
use nalgebra::Vector3;

fn term(s: &str) -> Result<f64> {
    let s = s.trim();
    let (sign, body) = match s.strip_prefix('-') {
        Some(rest) => (-1.0, rest.trim()),
        None => (1.0, s.strip_prefix('+').unwrap_or(s).trim()),
    };
    let value = if let Some(coef) = body.strip_suffix("pi") {
        let coef = coef.trim().trim_end_matches('*').trim();
        let c = if coef.is_empty() { 1.0 } else { coef.parse::<f64>()? };
        c * std::f64::consts::PI
    } else {
        body.parse::<f64>()?
    };
    Ok(sign * value)
}

/// Parses a finite number, optionally written as `numerator/denominator`.
pub fn parse_number(s: &str) -> Result<f64> {
    let value = match s.split_once('/') {
        Some((num, den)) => {
            let d = term(den).map_err(|_| anyhow!("invalid number `{s}`"))?;
            if d == 0.0 {
                bail!("division by zero in `{s}`");
            }
            term(num).map_err(|_| anyhow!("invalid number `{s}`"))? / d
        }
        None => term(s).map_err(|_| anyhow!("invalid number `{s}`"))?,
    };
    if !value.is_finite() {
        bail!("number `{s}` is not finite");
    }
    Ok(value)
}

/// Parses `x,y,z`.
pub fn parse_vector(s: &str) -> Result<Vector3<f64>> {
    let parts: Vec<&str> = s.split(',').collect();
    if parts.len() != 3 {
        bail!("expected three comma-separated components, got `{s}`");
    }
    let v: Vec<f64> = parts.iter().map(|p| parse_number(p)).collect::<Result<_>>()?;
    Ok(Vector3::new(v[0], v[1], v[2]))
}

/// Formats with 17 significant digits, which round-trips every `f64`.
pub fn fmt_f64(v: f64) -> String {
    // -0 prints as 0
    let v = v + 0.0;
    format!("{v:.16e}")
}

pub fn fmt_vector(v: &Vector3<f64>) -> String {
    format!("{},{},{}", fmt_f64(v.x), fmt_f64(v.y), fmt_f64(v.z))
}
