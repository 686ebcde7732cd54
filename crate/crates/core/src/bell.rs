//! Bell-type inequalities for the CMF correlation function and a seeded
//! multi-start search for their maximal violation.
//!
//! Every left-hand side is normalized so that local realism bounds it by 1.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use nalgebra::Vector3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::correlations::cmf_correlation_dots;
use crate::error::{Error, Result};
use crate::kinematics::Direction;
use crate::optimize::{golden_section_max, nelder_mead_max, NelderMeadOptions};

/// Slack applied when deciding whether a left-hand side exceeds its bound.
pub const VIOLATION_SLACK: f64 = 1e-12;

/// Measurement directions, momentum direction and `x` for one Bell test.
///
/// `d` is only read by the four-direction CHSH inequality.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BellConfig {
    pub a: Direction,
    pub b: Direction,
    pub c: Direction,
    pub d: Direction,
    pub n: Direction,
    pub x: f64,
}

impl BellConfig {
    pub fn new(a: Direction, b: Direction, c: Direction, d: Direction, n: Direction, x: f64) -> Result<Self> {
        if !(x >= 0.0) || !x.is_finite() {
            return Err(Error::OutOfRange { name: "x", value: x });
        }
        Ok(BellConfig { a, b, c, d, n, x })
    }

    /// Coplanar `a⃗, b⃗, c⃗ ⟂ n⃗ = ẑ` with `a⃗·b⃗ = cos(π − 2θ)` and
    /// `a⃗·c⃗ = b⃗·c⃗ = cos(π/2 + θ)`. At `θ = π/6` this is `a⃗ + b⃗ + c⃗ = 0`.
    pub fn coplanar(theta: f64, x: f64) -> Result<Self> {
        let alpha = std::f64::consts::FRAC_PI_2 + theta;
        let (s, c) = alpha.sin_cos();
        let a = Direction::normalize(Vector3::new(c, s, 0.0))?;
        let b = Direction::normalize(Vector3::new(c, -s, 0.0))?;
        Self::new(a, b, Direction::x(), Direction::x(), Direction::z(), x)
    }

    fn correlation(&self, u: &Direction, v: &Direction) -> f64 {
        cmf_correlation_dots(self.x, u.dot(v), u.dot(&self.n), v.dot(&self.n))
    }

    /// Rotates every direction, including `n⃗`.
    pub fn rotated(&self, r: &crate::kinematics::RotationMatrix) -> Self {
        BellConfig {
            a: self.a.rotated(r),
            b: self.b.rotated(r),
            c: self.c.rotated(r),
            d: self.d.rotated(r),
            n: self.n.rotated(r),
            x: self.x,
        }
    }
}

/// `(|C_ab − C_ad| + |C_cb + C_cd|) / 2`.
pub fn chsh_lhs(cfg: &BellConfig) -> f64 {
    let (a, b, c, d) = (&cfg.a, &cfg.b, &cfg.c, &cfg.d);
    ((cfg.correlation(a, b) - cfg.correlation(a, d)).abs() + (cfg.correlation(c, b) + cfg.correlation(c, d)).abs())
        / 2.0
}

/// `C_ab + C_bc + C_ca`.
pub fn mermin_lhs(cfg: &BellConfig) -> f64 {
    let (a, b, c) = (&cfg.a, &cfg.b, &cfg.c);
    cfg.correlation(a, b) + cfg.correlation(b, c) + cfg.correlation(c, a)
}

/// The inequality `Σ|λ−σ| P_{λσ}(a,b) ≥ C_ac + C_bc` rearranged to
/// `(2/D){−(1+2x)Σ a⃗·b⃗ + 2x Σ(a⃗·n⃗)(b⃗·n⃗) + ½[a⃗·b⃗ + 2x(a⃗·n⃗)(b⃗·n⃗)]²} ≤ 1`
/// with `D = 2 + (1+2x)²`.
pub fn weighted_lhs(cfg: &BellConfig) -> f64 {
    let s = 1.0 + 2.0 * cfg.x;
    let (an, bn, cn) = (cfg.a.dot(&cfg.n), cfg.b.dot(&cfg.n), cfg.c.dot(&cfg.n));
    let ab = cfg.a.dot(&cfg.b);
    let dots = ab + cfg.b.dot(&cfg.c) + cfg.c.dot(&cfg.a);
    let along_n = an * bn + bn * cn + cn * an;
    let g = ab + 2.0 * cfg.x * an * bn;
    2.0 * (-s * dots + 2.0 * cfg.x * along_n + 0.5 * g * g) / (2.0 + s * s)
}

/// [`weighted_lhs`] on the [`BellConfig::coplanar`] family, in closed form:
/// `[2(1+2x)(2 sin θ + cos 2θ) + cos² 2θ] / [2 + (1+2x)²]`.
pub fn coplanar_lhs(theta: f64, x: f64) -> f64 {
    let s = 1.0 + 2.0 * x;
    let c2 = (2.0 * theta).cos();
    (2.0 * s * (2.0 * theta.sin() + c2) + c2 * c2) / (2.0 + s * s)
}

/// The supported inequalities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Inequality {
    Chsh,
    Mermin,
    Weighted,
}

impl Inequality {
    pub const ALL: [Inequality; 3] = [Inequality::Chsh, Inequality::Mermin, Inequality::Weighted];

    pub fn id(self) -> &'static str {
        match self {
            Inequality::Chsh => "chsh",
            Inequality::Mermin => "mermin",
            Inequality::Weighted => "weighted",
        }
    }

    /// Local-realistic bound of the normalized left-hand side.
    pub fn bound(self) -> f64 {
        1.0
    }

    pub fn lhs(self, cfg: &BellConfig) -> f64 {
        match self {
            Inequality::Chsh => chsh_lhs(cfg),
            Inequality::Mermin => mermin_lhs(cfg),
            Inequality::Weighted => weighted_lhs(cfg),
        }
    }

    /// Number of measurement directions the inequality uses.
    pub fn directions(self) -> usize {
        match self {
            Inequality::Chsh => 4,
            Inequality::Mermin | Inequality::Weighted => 3,
        }
    }
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Inequality {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        Inequality::ALL
            .into_iter()
            .find(|i| i.id() == s)
            .ok_or_else(|| format!("unknown inequality `{s}` (expected chsh, mermin or weighted)"))
    }
}

/// Outcome of a maximization or of a single evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct BellReport {
    pub inequality: Inequality,
    pub lhs: f64,
    pub bound: f64,
    pub violated: bool,
    pub argmax: BellConfig,
    /// Polar/azimuthal angle pairs of the free directions at the optimum
    /// (`n⃗ = ẑ`), followed by `ln x` when `x` was free.
    pub parameters: Vec<f64>,
    pub starts_used: usize,
    pub evaluations: usize,
    pub converged: bool,
    pub x_free: bool,
}

impl BellReport {
    /// Report for a fixed configuration, without any search.
    pub fn evaluate(inequality: Inequality, cfg: &BellConfig) -> Self {
        let lhs = inequality.lhs(cfg);
        BellReport {
            inequality,
            lhs,
            bound: inequality.bound(),
            violated: lhs > inequality.bound() + VIOLATION_SLACK,
            argmax: *cfg,
            parameters: Vec::new(),
            starts_used: 0,
            evaluations: 1,
            converged: true,
            x_free: false,
        }
    }
}

/// Settings for [`maximize_violation_with`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaximizeOptions {
    pub starts: usize,
    /// Search range of `x` when it is free.
    pub x_min: f64,
    pub x_max: f64,
    pub simplex: NelderMeadOptions,
}

impl Default for MaximizeOptions {
    fn default() -> Self {
        MaximizeOptions {
            starts: 64,
            x_min: 1e-6,
            x_max: 1e4,
            simplex: NelderMeadOptions {
                initial_step: 0.4,
                f_tolerance: 1e-10,
                x_tolerance: 1e-8,
                max_evaluations: 20_000,
            },
        }
    }
}

struct Objective {
    inequality: Inequality,
    fixed_x: Option<f64>,
    log_x_range: (f64, f64),
}

impl Objective {
    fn dimension(&self) -> usize {
        2 * self.inequality.directions() + usize::from(self.fixed_x.is_none())
    }

    fn x_of(&self, params: &[f64]) -> f64 {
        match self.fixed_x {
            Some(x) => x,
            None => params[params.len() - 1]
                .clamp(self.log_x_range.0, self.log_x_range.1)
                .exp(),
        }
    }

    fn config(&self, params: &[f64]) -> BellConfig {
        let dir = |i: usize| Direction::from_angles(params[2 * i], params[2 * i + 1]);
        let a = dir(0);
        let b = dir(1);
        let c = dir(2);
        let d = if self.inequality.directions() == 4 { dir(3) } else { c };
        BellConfig {
            a,
            b,
            c,
            d,
            n: Direction::z(),
            x: self.x_of(params),
        }
    }

    fn value(&self, params: &[f64]) -> f64 {
        self.inequality.lhs(&self.config(params))
    }
}

struct StartResult {
    params: Vec<f64>,
    value: f64,
    evaluations: usize,
    converged: bool,
}

fn run_start(objective: &Objective, options: &MaximizeOptions, seed: u64, index: usize) -> StartResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let mut x0: Vec<f64> = Vec::with_capacity(objective.dimension());
    for _ in 0..objective.inequality.directions() {
        x0.push(rng.random_range(0.0..std::f64::consts::PI));
        x0.push(rng.random_range(0.0..std::f64::consts::TAU));
    }
    if objective.fixed_x.is_none() {
        let (lo, hi) = objective.log_x_range;
        x0.push(rng.random_range(lo.max(-7.0)..hi.min(4.0)));
    }

    let f = |p: &[f64]| objective.value(p);
    let first = nelder_mead_max(f, &x0, &options.simplex);
    // a restart from the first optimum guards against a collapsed simplex
    let restart_opts = NelderMeadOptions {
        initial_step: 0.05,
        ..options.simplex
    };
    let second = nelder_mead_max(f, &first.x, &restart_opts);
    let mut params = second.x;
    let mut value = second.value;
    let mut evaluations = first.evaluations + second.evaluations;

    if objective.fixed_x.is_none() {
        let last = params.len() - 1;
        let (lo, hi) = objective.log_x_range;
        let t = params[last].clamp(lo, hi);
        let mut probe = params.clone();
        let mut count = 0;
        let (t_best, v_best) = golden_section_max(
            |t| {
                count += 1;
                probe[last] = t;
                objective.value(&probe)
            },
            (t - 1.0).max(lo),
            (t + 1.0).min(hi),
            1e-12,
        );
        evaluations += count;
        if v_best > value {
            params[last] = t_best;
            value = v_best;
        } else {
            params[last] = t;
        }
    }

    StartResult {
        params,
        value,
        evaluations,
        converged: second.converged,
    }
}

fn lexicographic(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| *o != Ordering::Equal)
        .unwrap_or(Ordering::Equal)
}

/// [`maximize_violation_with`] using [`MaximizeOptions::default`].
pub fn maximize_violation(inequality: Inequality, fixed_x: Option<f64>, seed: u64) -> Result<BellReport> {
    maximize_violation_with(inequality, fixed_x, seed, &MaximizeOptions::default())
}

/// Multi-start Nelder–Mead search for the largest left-hand side over all
/// direction angles (with `n⃗ = ẑ`) and, when `fixed_x` is `None`, over
/// `ln x`. Starts are independent and may run in parallel; the result is a
/// pure function of the arguments.
pub fn maximize_violation_with(
    inequality: Inequality,
    fixed_x: Option<f64>,
    seed: u64,
    options: &MaximizeOptions,
) -> Result<BellReport> {
    if let Some(x) = fixed_x {
        if !(x >= 0.0) || !x.is_finite() {
            return Err(Error::OutOfRange { name: "x", value: x });
        }
    }
    if options.starts == 0 {
        return Err(Error::OutOfRange {
            name: "starts",
            value: 0.0,
        });
    }
    if !(options.x_min > 0.0 && options.x_min < options.x_max) {
        return Err(Error::OutOfRange {
            name: "x_min",
            value: options.x_min,
        });
    }
    let objective = Objective {
        inequality,
        fixed_x,
        log_x_range: (options.x_min.ln(), options.x_max.ln()),
    };

    let results: Vec<StartResult> = (0..options.starts)
        .into_par_iter()
        .map(|i| run_start(&objective, options, seed, i))
        .collect();

    let evaluations = results.iter().map(|r| r.evaluations).sum();
    let best = results
        .into_iter()
        .max_by(|a, b| {
            a.value
                .total_cmp(&b.value)
                // larger wins in max_by, so reverse to prefer the lexicographically smaller argmax
                .then_with(|| lexicographic(&b.params, &a.params))
        })
        .expect("at least one start");

    let lhs = best.value;
    Ok(BellReport {
        inequality,
        lhs,
        bound: inequality.bound(),
        violated: lhs > inequality.bound() + VIOLATION_SLACK,
        argmax: objective.config(&best.params),
        parameters: best.params,
        starts_used: options.starts,
        evaluations,
        converged: best.converged,
        x_free: fixed_x.is_none(),
    })
}
