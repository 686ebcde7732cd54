//! Fixed sweeps that tabulate the CMF probabilities, correlations and Bell
//! left-hand sides along one (or two) parameters.
//!
//! Each sweep is a uniform grid plus the interior extrema of every column,
//! located by [`locate_extrema`] and merged in order of the swept variable,
//! so the tabulated maxima and minima are exact to the refinement tolerance.

use std::f64::consts::{FRAC_PI_6, PI};
use std::fmt;
use std::str::FromStr;

use crate::bell::{coplanar_lhs, mermin_lhs, BellConfig};
use crate::correlations::{
    cmf_correlation, cmf_probabilities, locate_extrema, ultrarel_probabilities, CmfConfig, Grid, Outcome, Spacing,
};
use crate::error::Result;

/// Points on the uniform part of every one-parameter sweep.
pub const SWEEP_POINTS: usize = 512;

/// Points per axis of the ultra-relativistic `(a⃗·n⃗, b⃗·n⃗)` array; the step is 1/16.
pub const ARRAY_POINTS: usize = 33;

/// The reproducible tables.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FigureId {
    /// Probabilities vs `x` at `a⃗·b⃗ = −1`, `a⃗·n⃗ = b⃗·n⃗ = 0`.
    ProbsPerp,
    /// Correlation vs `x` in the same configuration.
    CorrPerp,
    /// Probabilities vs `x` at `a⃗·b⃗ = −½`, `a⃗·n⃗ = b⃗·n⃗ = ½`.
    ProbsHalf,
    /// Correlation vs `x` in the same configuration.
    CorrHalf,
    /// Ultra-relativistic probabilities over `(a⃗·n⃗, b⃗·n⃗) ∈ [−1, 1]²`.
    UltrarelArray,
    /// Mermin left-hand side vs `x` for `a⃗ + b⃗ + c⃗ = 0`, all perpendicular to `n⃗`.
    BellMermin,
    /// Coplanar weighted left-hand side vs `θ` at `x = 0` and `x = 1/6`.
    BellTheta,
    /// Coplanar weighted left-hand side vs `x` at `θ = π/6` and `θ = 2π/3`.
    BellWeightedX,
}

/// The swept variable, its grid and the output columns of a figure.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub variable: &'static str,
    pub grid: Grid,
    pub columns: Vec<String>,
}

/// A header row and numeric rows.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub header: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Table {
    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.header.iter().position(|h| h == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    /// The row holding the largest value of `name`.
    pub fn argmax(&self, name: &str) -> Option<&[f64]> {
        let i = self.column_index(name)?;
        self.rows.iter().max_by(|a, b| a[i].total_cmp(&b[i])).map(Vec::as_slice)
    }

    /// The row holding the smallest value of `name`.
    pub fn argmin(&self, name: &str) -> Option<&[f64]> {
        let i = self.column_index(name)?;
        self.rows.iter().min_by(|a, b| a[i].total_cmp(&b[i])).map(Vec::as_slice)
    }
}

const PROBABILITY_COLUMNS: [(Outcome, Outcome); 7] = [
    (Outcome::Plus, Outcome::Plus),
    (Outcome::Plus, Outcome::Minus),
    (Outcome::Minus, Outcome::Plus),
    (Outcome::Minus, Outcome::Minus),
    (Outcome::Zero, Outcome::Plus),
    (Outcome::Plus, Outcome::Zero),
    (Outcome::Zero, Outcome::Zero),
];

fn probability_name(s: Outcome, l: Outcome) -> String {
    format!("P_{}{}", s.short(), l.short())
}

impl FigureId {
    pub const ALL: [FigureId; 8] = [
        FigureId::ProbsPerp,
        FigureId::CorrPerp,
        FigureId::ProbsHalf,
        FigureId::CorrHalf,
        FigureId::UltrarelArray,
        FigureId::BellMermin,
        FigureId::BellTheta,
        FigureId::BellWeightedX,
    ];

    pub fn id(self) -> &'static str {
        match self {
            FigureId::ProbsPerp => "probs-perp",
            FigureId::CorrPerp => "corr-perp",
            FigureId::ProbsHalf => "probs-half",
            FigureId::CorrHalf => "corr-half",
            FigureId::UltrarelArray => "ultrarel-array",
            FigureId::BellMermin => "bell-mermin",
            FigureId::BellTheta => "bell-theta",
            FigureId::BellWeightedX => "bell-weighted-x",
        }
    }

    /// The fixed CMF dot products of the probability and correlation sweeps.
    pub fn cmf_config(self) -> Option<CmfConfig> {
        match self {
            FigureId::ProbsPerp | FigureId::CorrPerp => Some(CmfConfig {
                x: 0.0,
                ab: -1.0,
                an: 0.0,
                bn: 0.0,
            }),
            FigureId::ProbsHalf | FigureId::CorrHalf => Some(CmfConfig {
                x: 0.0,
                ab: -0.5,
                an: 0.5,
                bn: 0.5,
            }),
            _ => None,
        }
    }

    pub fn sweep(self) -> SweepSpec {
        let linear = |min, max, count| Grid {
            min,
            max,
            count,
            spacing: Spacing::Linear,
        };
        let names = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        let mut cmf_columns = vec!["x".to_string()];
        cmf_columns.extend(PROBABILITY_COLUMNS.iter().map(|&(s, l)| probability_name(s, l)));
        cmf_columns.push("C".to_string());
        match self {
            FigureId::ProbsPerp | FigureId::CorrPerp | FigureId::ProbsHalf | FigureId::CorrHalf => SweepSpec {
                variable: "x",
                grid: linear(0.0, 4.0, SWEEP_POINTS),
                columns: cmf_columns,
            },
            FigureId::UltrarelArray => SweepSpec {
                variable: "an,bn",
                grid: linear(-1.0, 1.0, ARRAY_POINTS),
                columns: names(&["an", "bn", "P_pp", "P_pm", "P_0p", "P_p0", "P_00"]),
            },
            FigureId::BellMermin => SweepSpec {
                variable: "x",
                grid: linear(0.0, 2.0, SWEEP_POINTS),
                columns: names(&["x", "lhs"]),
            },
            FigureId::BellTheta => SweepSpec {
                variable: "theta",
                grid: linear(0.0, PI, SWEEP_POINTS),
                columns: names(&["theta", "lhs_x0", "lhs_x1_6"]),
            },
            FigureId::BellWeightedX => SweepSpec {
                variable: "x",
                grid: linear(0.0, 2.0, SWEEP_POINTS),
                columns: names(&["x", "lhs_theta_pi_6", "lhs_theta_2pi_3"]),
            },
        }
    }

    /// Remark printed alongside the table, if any.
    pub fn note(self) -> Option<String> {
        match self {
            FigureId::BellWeightedX => Some(format!(
                "a+b+c=0 corresponds to theta=pi/6 in the coplanar parametrization; \
                 at x=1/6: lhs(theta=pi/6) = {:.16e}, lhs(theta=2pi/3) = {:.16e}",
                coplanar_lhs(FRAC_PI_6, 1.0 / 6.0),
                coplanar_lhs(2.0 * PI / 3.0, 1.0 / 6.0),
            )),
            FigureId::BellTheta => Some("columns are the coplanar curves at x=0 and x=1/6".to_string()),
            _ => None,
        }
    }

    /// Evaluates the sweep. Deterministic: no randomness, fixed grid.
    pub fn table(self) -> Result<Table> {
        let spec = self.sweep();
        let rows = match self {
            FigureId::UltrarelArray => {
                let axis = spec.grid.points();
                let mut rows = Vec::with_capacity(axis.len() * axis.len());
                for &an in &axis {
                    for &bn in &axis {
                        let t = ultrarel_probabilities(an, bn)?;
                        rows.push(vec![
                            an,
                            bn,
                            t.get(Outcome::Plus, Outcome::Plus),
                            t.get(Outcome::Plus, Outcome::Minus),
                            t.get(Outcome::Zero, Outcome::Plus),
                            t.get(Outcome::Plus, Outcome::Zero),
                            t.get(Outcome::Zero, Outcome::Zero),
                        ]);
                    }
                }
                rows
            }
            FigureId::BellMermin => {
                let f = |x: f64| mermin_lhs(&BellConfig::coplanar(FRAC_PI_6, x).expect("x is nonnegative"));
                sweep_rows(&spec.grid, &[&f])
            }
            FigureId::BellTheta => {
                let at_rest = |t: f64| coplanar_lhs(t, 0.0);
                let moving = |t: f64| coplanar_lhs(t, 1.0 / 6.0);
                sweep_rows(&spec.grid, &[&at_rest, &moving])
            }
            FigureId::BellWeightedX => {
                let triad = |x: f64| coplanar_lhs(FRAC_PI_6, x);
                let obtuse = |x: f64| coplanar_lhs(2.0 * PI / 3.0, x);
                sweep_rows(&spec.grid, &[&triad, &obtuse])
            }
            _ => {
                let base = self.cmf_config().expect("CMF figure");
                let columns: Vec<Box<dyn Fn(f64) -> f64>> = PROBABILITY_COLUMNS
                    .iter()
                    .map(|&(s, l)| {
                        Box::new(move |x: f64| cmf_probabilities(&base.with_x(x)).get(s, l)) as Box<dyn Fn(f64) -> f64>
                    })
                    .chain(std::iter::once(
                        Box::new(move |x: f64| cmf_correlation(&base.with_x(x))) as Box<dyn Fn(f64) -> f64>,
                    ))
                    .collect();
                let refs: Vec<&dyn Fn(f64) -> f64> = columns.iter().map(|b| b.as_ref()).collect();
                sweep_rows(&spec.grid, &refs)
            }
        };
        Ok(Table {
            header: spec.columns,
            rows,
        })
    }
}

/// Grid points plus the interior extrema of every column, sorted and
/// deduplicated, with one row per point.
fn sweep_rows(grid: &Grid, columns: &[&dyn Fn(f64) -> f64]) -> Vec<Vec<f64>> {
    let mut points = grid.points();
    for f in columns {
        points.extend(locate_extrema(f, &grid.points()).into_iter().map(|e| e.x));
    }
    points.sort_by(f64::total_cmp);
    points.dedup();
    points
        .into_iter()
        .map(|v| std::iter::once(v).chain(columns.iter().map(|f| f(v))).collect())
        .collect()
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for FigureId {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        FigureId::ALL.into_iter().find(|f| f.id() == s).ok_or_else(|| {
            let known: Vec<&str> = FigureId::ALL.iter().map(|f| f.id()).collect();
            format!("unknown figure `{s}` (expected one of {})", known.join(", "))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::SQRT_2;

    #[test]
    fn ids_round_trip() {
        for f in FigureId::ALL {
            assert_eq!(f.id().parse::<FigureId>().unwrap(), f);
        }
        assert!("fig-9".parse::<FigureId>().is_err());
    }

    #[test]
    fn corr_perp_maximum_is_tabulated() {
        let t = FigureId::CorrPerp.table().unwrap();
        let row = t.argmax("C").unwrap();
        assert_abs_diff_eq!(row[t.column_index("C").unwrap()], 1.0 / SQRT_2, epsilon = 1e-12);
        assert_abs_diff_eq!(row[0], (SQRT_2 - 1.0) / 2.0, epsilon = 1e-6);
        assert!(t.rows.len() >= SWEEP_POINTS);
        assert!(t.rows.windows(2).all(|w| w[0][0] < w[1][0]));
    }

    #[test]
    fn perp_zero_outcomes_vanish() {
        let t = FigureId::ProbsPerp.table().unwrap();
        for name in ["P_0p", "P_p0"] {
            assert!(t.column(name).unwrap().iter().all(|v| v.abs() < 1e-15));
        }
    }

    #[test]
    fn ultrarel_array_shape() {
        let t = FigureId::UltrarelArray.table().unwrap();
        assert_eq!(t.rows.len(), ARRAY_POINTS * ARRAY_POINTS);
        assert_eq!(t.header.len(), t.rows[0].len());
        assert_eq!(t.rows[0][0], -1.0);
        assert_eq!(t.rows[t.rows.len() - 1][1], 1.0);
    }

    #[test]
    fn weighted_x_columns() {
        let t = FigureId::BellWeightedX.table().unwrap();
        let row = t.argmax("lhs_theta_pi_6").unwrap();
        assert_abs_diff_eq!(row[1], 9.0 / 8.0, epsilon = 1e-14);
        assert_abs_diff_eq!(row[0], 1.0 / 6.0, epsilon = 1e-6);
        let obtuse = t.argmax("lhs_theta_2pi_3").unwrap();
        assert!(obtuse[2] < 1.0);
        assert!(FigureId::BellWeightedX.note().unwrap().contains("theta=2pi/3"));
    }

    #[test]
    fn tables_are_reproducible() {
        for f in FigureId::ALL {
            assert_eq!(f.table().unwrap(), f.table().unwrap());
        }
    }
}
