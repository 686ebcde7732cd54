//! Joint probabilities and correlation functions of the scalar state.
//!
//! The general-frame results come from traces of the `N`, `M`, `T` matrices;
//! the center-of-mass (CMF) results and the two kinematic limits are closed
//! formulas in `x = |k⃗|²` and the dot products of `a⃗`, `b⃗`, `n⃗ = k⃗/|k⃗|`.

use std::fmt;

use nalgebra::{Complex, Matrix3, SymmetricEigen, Vector3};

use crate::error::{Error, Result};
use crate::kinematics::{metric, minkowski_dot, Direction, FourMomentum};
use crate::observables::nmt_closed_form;
use crate::optimize::golden_section_max;
use crate::CMatrix4;

/// A spin-projection outcome.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Plus,
    Zero,
    Minus,
}

impl Outcome {
    pub const ALL: [Outcome; 3] = [Outcome::Plus, Outcome::Zero, Outcome::Minus];

    /// Row/column index in `(+1, 0, -1)` order.
    pub fn index(self) -> usize {
        match self {
            Outcome::Plus => 0,
            Outcome::Zero => 1,
            Outcome::Minus => 2,
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Outcome::Plus => 1.0,
            Outcome::Zero => 0.0,
            Outcome::Minus => -1.0,
        }
    }

    /// `p`, `0` or `m`, as used in column names like `P_p0`.
    pub fn short(self) -> char {
        match self {
            Outcome::Plus => 'p',
            Outcome::Zero => '0',
            Outcome::Minus => 'm',
        }
    }
}

/// `P_{σλ}`: Alice's outcome `σ` indexes rows, Bob's outcome `λ` columns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbabilityTable([[f64; 3]; 3]);

impl ProbabilityTable {
    pub fn from_rows(rows: [[f64; 3]; 3]) -> Self {
        ProbabilityTable(rows)
    }

    pub fn rows(&self) -> &[[f64; 3]; 3] {
        &self.0
    }

    pub fn get(&self, alice: Outcome, bob: Outcome) -> f64 {
        self.0[alice.index()][bob.index()]
    }

    pub fn total(&self) -> f64 {
        self.0.iter().flatten().sum()
    }

    /// `Σ σλ P_{σλ} = P₊₊ + P₋₋ − P₊₋ − P₋₊`.
    pub fn correlation(&self) -> f64 {
        self.0[0][0] + self.0[2][2] - self.0[0][2] - self.0[2][0]
    }

    /// Probability that neither outcome is zero.
    pub fn nonzero_mass(&self) -> f64 {
        self.0[0][0] + self.0[2][2] + self.0[0][2] + self.0[2][0]
    }

    /// Correlation conditioned on both outcomes being nonzero.
    pub fn normalized_correlation(&self) -> Result<f64> {
        let mass = self.nonzero_mass();
        if !(mass > 1e-12) {
            return Err(Error::DegenerateDenominator(mass));
        }
        Ok(self.correlation() / mass)
    }

    /// `Σ |σ − λ| P_{σλ}`, the mean absolute difference of the outcomes.
    pub fn mean_abs_difference(&self) -> f64 {
        let mut total = 0.0;
        for s in Outcome::ALL {
            for l in Outcome::ALL {
                total += (s.value() - l.value()).abs() * self.get(s, l);
            }
        }
        total
    }

    pub fn transposed(&self) -> Self {
        let mut t = [[0.0; 3]; 3];
        for (i, row) in self.0.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                t[j][i] = *v;
            }
        }
        ProbabilityTable(t)
    }

    pub fn max_deviation(&self, other: &ProbabilityTable) -> f64 {
        self.0
            .iter()
            .flatten()
            .zip(other.0.iter().flatten())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

impl fmt::Display for ProbabilityTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in Outcome::ALL {
            for l in Outcome::ALL {
                writeln!(f, "P_{}{}: {:.17e}", s.short(), l.short(), self.get(s, l))?;
            }
        }
        Ok(())
    }
}

/// Builds a table from the five distinct CMF / limit values.
fn symmetric_table(pp: f64, pm: f64, zero_alice: f64, zero_bob: f64, zz: f64) -> ProbabilityTable {
    ProbabilityTable([[pp, zero_bob, pm], [zero_alice, zz, zero_alice], [pm, zero_bob, pp]])
}

/// CMF configuration: `x = |k⃗|²` and the dot products `a⃗·b⃗`, `a⃗·n⃗`, `b⃗·n⃗`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CmfConfig {
    pub x: f64,
    pub ab: f64,
    pub an: f64,
    pub bn: f64,
}

const GRAM_TOLERANCE: f64 = 1e-9;

impl CmfConfig {
    /// Rejects negative `x` and dot products not realizable by three unit vectors.
    pub fn new(x: f64, ab: f64, an: f64, bn: f64) -> Result<Self> {
        if !(x >= 0.0) || !x.is_finite() {
            return Err(Error::OutOfRange { name: "x", value: x });
        }
        for (name, value) in [("ab", ab), ("an", an), ("bn", bn)] {
            if !(value.abs() <= 1.0 + GRAM_TOLERANCE) {
                return Err(Error::OutOfRange { name, value });
            }
        }
        let gram = Matrix3::new(1.0, ab, an, ab, 1.0, bn, an, bn, 1.0);
        let min_eigenvalue = SymmetricEigen::new(gram).eigenvalues.min();
        if min_eigenvalue < -GRAM_TOLERANCE {
            return Err(Error::Gram { min_eigenvalue });
        }
        Ok(CmfConfig { x, ab, an, bn })
    }

    /// Dot products taken from explicit unit vectors.
    pub fn from_directions(x: f64, a: &Direction, b: &Direction, n: &Direction) -> Result<Self> {
        Self::new(x, a.dot(b), a.dot(n), b.dot(n))
    }

    /// The CMF pair `(k, −k)` for this `x` along `n`, with Alice holding `k`.
    pub fn momenta(&self, n: &Direction) -> (FourMomentum, FourMomentum) {
        let k = FourMomentum::on_shell(n.as_vector() * self.x.sqrt());
        (k, k.partner())
    }

    /// Explicit unit vectors `(a⃗, b⃗, n⃗)` realizing the dot products, with
    /// `n⃗ = ẑ` and `a⃗` in the xz plane.
    pub fn directions(&self) -> (Direction, Direction, Direction) {
        let an = self.an.clamp(-1.0, 1.0);
        let bn = self.bn.clamp(-1.0, 1.0);
        let sa = (1.0 - an * an).sqrt();
        let bx = if sa > 1e-12 {
            ((self.ab - an * bn) / sa).clamp(-1.0, 1.0)
        } else {
            (1.0 - bn * bn).sqrt()
        };
        let by = (1.0 - bx * bx - bn * bn).max(0.0).sqrt();
        let a = Direction::normalize(Vector3::new(sa, 0.0, an)).expect("nonzero");
        let b = Direction::normalize(Vector3::new(bx, by, bn)).expect("nonzero");
        (a, b, Direction::z())
    }

    pub fn with_x(&self, x: f64) -> Self {
        CmfConfig { x, ..*self }
    }
}

/// `2 + (k·p)²`, the squared norm of the scalar state.
pub fn scalar_norm(k: &FourMomentum, p: &FourMomentum) -> f64 {
    let kp = minkowski_dot(k, p);
    2.0 + kp * kp
}

fn trace_eta(x: &CMatrix4, y: &CMatrix4) -> f64 {
    let eta = metric().map(|v| Complex::new(v, 0.0));
    (x * eta * y * eta).trace().re
}

/// Trace-formula probabilities for Alice measuring `a` on the particle with
/// momentum `k` and Bob measuring `b` on the one with momentum `p`.
pub fn probabilities_general(k: &FourMomentum, p: &FourMomentum, a: &Direction, b: &Direction) -> ProbabilityTable {
    let alice = nmt_closed_form(k, a);
    let bob = nmt_closed_form(p, b);
    let d = scalar_norm(k, p);
    let mm = trace_eta(&alice.m, &bob.m);
    let nn = trace_eta(&alice.n, &bob.n);
    symmetric_table(
        (mm - nn) / (4.0 * d),
        (mm + nn) / (4.0 * d),
        trace_eta(&alice.t, &bob.m) / (2.0 * d),
        trace_eta(&alice.m, &bob.t) / (2.0 * d),
        trace_eta(&alice.t, &bob.t) / d,
    )
}

/// `−Tr{N(k,a) η N(p,b) η} / (2 + (k·p)²)`.
pub fn correlation_trace(k: &FourMomentum, p: &FourMomentum, a: &Direction, b: &Direction) -> f64 {
    let nn = trace_eta(&nmt_closed_form(k, a).n, &nmt_closed_form(p, b).n);
    -nn / scalar_norm(k, p)
}

/// The explicit six-term correlation function in an arbitrary frame.
pub fn correlation_general(k: &FourMomentum, p: &FourMomentum, a: &Direction, b: &Direction) -> f64 {
    let (kv, pv) = (k.momentum(), p.momentum());
    let (av, bv) = (a.as_vector(), b.as_vector());
    let ck = 1.0 + k.energy();
    let cp = 1.0 + p.energy();
    let ab = av.dot(bv);
    let kxp = kv.cross(pv);
    let (ak, bk, ap, bp) = (av.dot(kv), bv.dot(kv), av.dot(pv), bv.dot(pv));
    let kp3 = kv.dot(pv);

    let braces = -ab - av.dot(&kxp) * bv.dot(&kxp) / (ck * cp) - (ap * bk - ab * kp3)
        + (ap * bp - pv.norm_squared() * ab) / cp
        + (ak * bk - kv.norm_squared() * ab) / ck
        + (kp3 * ap * bk - kp3 * kp3 * ab) / (ck * cp);
    2.0 * braces / scalar_norm(k, p)
}

/// Correlation normalized by the probability of two nonzero outcomes.
pub fn normalized_correlation(k: &FourMomentum, p: &FourMomentum, a: &Direction, b: &Direction) -> Result<f64> {
    probabilities_general(k, p, a, b).normalized_correlation()
}

/// CMF probabilities as closed functions of `x` and the dot products.
pub fn cmf_probabilities(c: &CmfConfig) -> ProbabilityTable {
    let CmfConfig { x, ab, an, bn } = *c;
    let s = 1.0 + 2.0 * x;
    let d = 2.0 + s * s;
    let g = ab + 2.0 * x * an * bn;
    let common = s * s - 4.0 * x * (x + 1.0) * (an * an + bn * bn) + g * g;
    let cross = 2.0 * s * ab - 4.0 * x * an * bn;
    symmetric_table(
        (common - cross) / (4.0 * d),
        (common + cross) / (4.0 * d),
        (1.0 + 4.0 * x * (1.0 + x) * an * an - g * g) / (2.0 * d),
        (1.0 + 4.0 * x * (1.0 + x) * bn * bn - g * g) / (2.0 * d),
        g * g / d,
    )
}

/// `2[−(1+2x) a⃗·b⃗ + 2x (a⃗·n⃗)(b⃗·n⃗)] / (2 + (1+2x)²)` without validation.
pub(crate) fn cmf_correlation_dots(x: f64, ab: f64, an: f64, bn: f64) -> f64 {
    let s = 1.0 + 2.0 * x;
    2.0 * (-s * ab + 2.0 * x * an * bn) / (2.0 + s * s)
}

/// CMF correlation function.
pub fn cmf_correlation(c: &CmfConfig) -> f64 {
    cmf_correlation_dots(c.x, c.ab, c.an, c.bn)
}

/// `x → ∞` limit of the CMF probabilities.
pub fn ultrarel_probabilities(an: f64, bn: f64) -> Result<ProbabilityTable> {
    for (name, value) in [("an", an), ("bn", bn)] {
        if !(value.abs() <= 1.0 + GRAM_TOLERANCE) {
            return Err(Error::OutOfRange { name, value });
        }
    }
    let (ta, tb) = (1.0 - an * an, 1.0 - bn * bn);
    Ok(symmetric_table(
        ta * tb / 4.0,
        ta * tb / 4.0,
        an * an * tb / 2.0,
        bn * bn * ta / 2.0,
        an * an * bn * bn,
    ))
}

/// `x → 0` limit, identical to the nonrelativistic spin-1 singlet.
pub fn nonrel_probabilities(ab: f64) -> Result<ProbabilityTable> {
    if !(ab.abs() <= 1.0 + GRAM_TOLERANCE) {
        return Err(Error::OutOfRange { name: "ab", value: ab });
    }
    let mixed = (1.0 - ab * ab) / 6.0;
    Ok(symmetric_table(
        (1.0 - ab).powi(2) / 12.0,
        (1.0 + ab).powi(2) / 12.0,
        mixed,
        mixed,
        ab * ab / 3.0,
    ))
}

/// A scalar CMF quantity that can be scanned in `x`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quantity {
    Correlation,
    NormalizedCorrelation,
    Probability(Outcome, Outcome),
}

impl Quantity {
    /// Value at `c`; `NaN` where the normalized correlation is undefined.
    pub fn evaluate(&self, c: &CmfConfig) -> f64 {
        match *self {
            Quantity::Correlation => cmf_correlation(c),
            Quantity::NormalizedCorrelation => cmf_probabilities(c).normalized_correlation().unwrap_or(f64::NAN),
            Quantity::Probability(s, l) => cmf_probabilities(c).get(s, l),
        }
    }

    /// `C`, `C_norm`, or `P_xy`.
    pub fn name(&self) -> String {
        match self {
            Quantity::Correlation => "C".to_string(),
            Quantity::NormalizedCorrelation => "C_norm".to_string(),
            Quantity::Probability(s, l) => format!("P_{}{}", s.short(), l.short()),
        }
    }

    pub fn parse(name: &str) -> Option<Quantity> {
        match name {
            "C" => Some(Quantity::Correlation),
            "C_norm" => Some(Quantity::NormalizedCorrelation),
            _ => {
                let rest = name.strip_prefix("P_")?;
                let mut chars = rest.chars();
                let pick = |c: char| Outcome::ALL.into_iter().find(|o| o.short() == c);
                let s = pick(chars.next()?)?;
                let l = pick(chars.next()?)?;
                chars.next().is_none().then_some(Quantity::Probability(s, l))
            }
        }
    }
}

/// Point spacing of a [`Grid`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

/// `count` points from `min` to `max` inclusive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl Grid {
    pub fn new(min: f64, max: f64, count: usize, spacing: Spacing) -> Result<Self> {
        if !(min < max) || !min.is_finite() || !max.is_finite() {
            return Err(Error::InvalidGrid(format!("need min < max, got [{min}, {max}]")));
        }
        if count < 2 {
            return Err(Error::InvalidGrid(format!("need at least 2 points, got {count}")));
        }
        if spacing == Spacing::Log && !(min > 0.0) {
            return Err(Error::InvalidGrid(format!("log grid needs min > 0, got {min}")));
        }
        Ok(Grid {
            min,
            max,
            count,
            spacing,
        })
    }

    /// 512 log-spaced points on `[1e-4, 1e4]`.
    pub fn default_x() -> Self {
        Grid {
            min: 1e-4,
            max: 1e4,
            count: 512,
            spacing: Spacing::Log,
        }
    }

    pub fn points(&self) -> Vec<f64> {
        let last = (self.count - 1) as f64;
        (0..self.count)
            .map(|i| {
                let t = i as f64 / last;
                // endpoints are exact; exp(ln(min)) need not round-trip
                if i == 0 {
                    return self.min;
                }
                if i + 1 == self.count {
                    return self.max;
                }
                match self.spacing {
                    Spacing::Linear => self.min + t * (self.max - self.min),
                    Spacing::Log => (self.min.ln() + t * (self.max.ln() - self.min.ln())).exp(),
                }
            })
            .map(|v| v.clamp(self.min, self.max))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremumKind {
    Maximum,
    Minimum,
}

/// A located interior extremum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Extremum {
    pub x: f64,
    pub value: f64,
    pub kind: ExtremumKind,
}

/// Interior local extrema of `quantity` along `x`, with the dot products of
/// `config` held fixed (its own `x` is ignored). See [`locate_extrema`].
pub fn extremum_scan(config: &CmfConfig, quantity: Quantity, grid: &Grid) -> Result<Vec<Extremum>> {
    if grid.count < 3 {
        return Err(Error::InvalidGrid(format!(
            "extremum scan needs at least 3 points, got {}",
            grid.count
        )));
    }
    Ok(locate_extrema(|x| quantity.evaluate(&config.with_x(x)), &grid.points()))
}

/// Interior local extrema of `f` sampled at the increasing points `xs`.
///
/// Sign changes of the grid differences bracket each extremum, which is then
/// refined by golden-section search to a bracket width of `1e-10`. Plateaus
/// flatter than `1e-14` are skipped, so constant functions yield nothing.
pub fn locate_extrema<F: Fn(f64) -> f64>(f: F, xs: &[f64]) -> Vec<Extremum> {
    let values: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    let mut found = Vec::new();
    // (sign, index of the left point of that difference)
    let mut last: Option<(f64, usize)> = None;
    for i in 0..xs.len().saturating_sub(1) {
        let diff = values[i + 1] - values[i];
        let eps = 1e-14 * values[i].abs().max(1.0);
        if !diff.is_finite() || diff.abs() <= eps {
            continue;
        }
        let sign = diff.signum();
        if let Some((prev, start)) = last {
            if sign != prev {
                let kind = if prev > 0.0 {
                    ExtremumKind::Maximum
                } else {
                    ExtremumKind::Minimum
                };
                let flip = if kind == ExtremumKind::Maximum { 1.0 } else { -1.0 };
                let (x, v) = golden_section_max(|x| flip * f(x), xs[start], xs[i + 1], 1e-10);
                found.push(Extremum {
                    x,
                    value: flip * v,
                    kind,
                });
            }
        }
        last = Some((sign, i));
    }
    found
}
