//! Randomized invariant suite covering every module.
//!
//! Each check draws its own seeded samples, records the worst residual and
//! compares it with a tolerance that the strict profile divides by ten.

use std::fmt;
use std::str::FromStr;

use nalgebra::{Complex, Matrix3, Vector3};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bell::{self, BellConfig, Inequality, MaximizeOptions};
use crate::correlations::{
    cmf_correlation, cmf_probabilities, correlation_general, correlation_trace, nonrel_probabilities,
    probabilities_general, scalar_norm, ultrarel_probabilities, CmfConfig,
};
use crate::error::Result;
use crate::kinematics::{
    metric, minkowski_dot, minkowski_dot4, standard_boost, wigner_rotation, Direction, FourMomentum, LorentzMatrix,
    RotationMatrix,
};
use crate::observables::{
    covariant_spin_action, nmt_closed_form, nmt_definitional, probability_oracle, ObservableMatrices,
};
use crate::polarization::{
    bilinear_residual, completeness_residual, conjugation_residual, orthonormality_residual, polarization,
    polarization_via_boost, transversality_residual, weinberg_residual,
};
use crate::spin_rep::{d_matrix, intertwiner, spin_component_raw, spin_matrices, spin_projectors};
use crate::states::{scalar_state, TwoParticleAmplitude};
use crate::{CMatrix3, CMatrix4};

/// Tolerance profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Profile {
    #[default]
    Default,
    /// Every tolerance divided by ten.
    Strict,
}

impl Profile {
    pub fn factor(self) -> f64 {
        match self {
            Profile::Default => 1.0,
            Profile::Strict => 0.1,
        }
    }
}

impl FromStr for Profile {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "default" => Ok(Profile::Default),
            "strict" => Ok(Profile::Strict),
            _ => Err(format!("unknown profile `{s}` (expected default or strict)")),
        }
    }
}

/// Outcome of one invariant check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: &'static str,
    pub worst: f64,
    pub tolerance: f64,
    pub samples: usize,
    pub passed: bool,
}

impl fmt::Display for CheckResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {}: worst={:.3e} tol={:.1e} samples={}",
            if self.passed { "PASS" } else { "FAIL" },
            self.name,
            self.worst,
            self.tolerance,
            self.samples
        )
    }
}

/// All check results, in execution order.
#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckResult> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

/// Signature of the closed-form `N, M, T` builder under test.
pub type NmtFn = fn(&FourMomentum, &Direction) -> ObservableMatrices;

/// Suite configuration.
#[derive(Debug, Clone, Copy)]
pub struct Suite {
    pub profile: Profile,
    pub samples: usize,
    pub seed: u64,
    /// The closed form compared against the definitional contraction.
    pub closed_form: NmtFn,
}

impl Suite {
    pub fn new(profile: Profile) -> Self {
        Suite {
            profile,
            samples: 1000,
            seed: 0x5eed,
            closed_form: nmt_closed_form,
        }
    }

    pub fn with_closed_form(self, closed_form: NmtFn) -> Self {
        Suite { closed_form, ..self }
    }

    pub fn run(&self) -> SuiteReport {
        let mut runner = Runner {
            suite: self,
            checks: Vec::new(),
        };
        runner.kinematics();
        runner.spin_rep();
        runner.polarization();
        runner.states();
        runner.observables();
        runner.correlations();
        runner.bell();
        SuiteReport { checks: runner.checks }
    }
}

/// Runs the suite with 1000 samples per check.
pub fn run_suite(profile: Profile) -> SuiteReport {
    Suite::new(profile).run()
}

fn momentum(rng: &mut ChaCha8Rng) -> FourMomentum {
    FourMomentum::on_shell(Vector3::from_fn(|_, _| rng.random_range(-2.0..2.0)))
}

fn direction(rng: &mut ChaCha8Rng) -> Direction {
    let cos_theta: f64 = rng.random_range(-1.0..1.0);
    Direction::from_angles(cos_theta.acos(), rng.random_range(0.0..std::f64::consts::TAU))
}

fn rotation(rng: &mut ChaCha8Rng) -> RotationMatrix {
    let axis = direction(rng);
    RotationMatrix::from_axis_angle(&axis, rng.random_range(-std::f64::consts::PI..std::f64::consts::PI))
}

/// Rotation · boost · rotation with rapidity of order one.
fn lorentz(rng: &mut ChaCha8Rng) -> LorentzMatrix {
    let r1 = LorentzMatrix::from_rotation(&rotation(rng));
    let r2 = LorentzMatrix::from_rotation(&rotation(rng));
    let boost = standard_boost(&FourMomentum::on_shell(Vector3::from_fn(|_, _| {
        rng.random_range(-1.0..1.0)
    })));
    r1 * boost * r2
}

fn max_abs3(m: &CMatrix3) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn max_abs4(m: &CMatrix4) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

fn residual_or_inf(r: Result<f64>) -> f64 {
    r.unwrap_or(f64::INFINITY)
}

struct Runner<'a> {
    suite: &'a Suite,
    checks: Vec<CheckResult>,
}

impl Runner<'_> {
    fn check<F: FnMut(&mut ChaCha8Rng) -> f64>(
        &mut self,
        name: &'static str,
        tolerance: f64,
        samples: usize,
        mut f: F,
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(self.suite.seed);
        rng.set_stream(self.checks.len() as u64);
        let mut worst: f64 = 0.0;
        for _ in 0..samples {
            let r = f(&mut rng);
            // NaN must fail, so it is mapped to infinity
            worst = worst.max(if r.is_nan() { f64::INFINITY } else { r });
        }
        let tolerance = tolerance * self.suite.profile.factor();
        self.checks.push(CheckResult {
            name,
            worst,
            tolerance,
            samples,
            passed: worst <= tolerance,
        });
    }

    fn randomized<F: FnMut(&mut ChaCha8Rng) -> f64>(&mut self, name: &'static str, tolerance: f64, f: F) {
        self.check(name, tolerance, self.suite.samples, f);
    }

    fn kinematics(&mut self) {
        self.randomized("standard boost maps rest momentum to k", 1e-12, |rng| {
            let k = momentum(rng);
            let image = standard_boost(&k).matrix() * FourMomentum::rest().to_vector();
            (image - k.to_vector()).amax()
        });
        self.randomized("Wigner rotation is orthogonal", 1e-10, |rng| {
            residual_or_inf(wigner_rotation(&lorentz(rng), &momentum(rng)).map(|r| r.orthogonality_residual()))
        });
        self.randomized("Wigner rotation cocycle", 1e-10, |rng| {
            let (l1, l2, k) = (lorentz(rng), lorentz(rng), momentum(rng));
            let run = || -> Result<f64> {
                let lhs = wigner_rotation(&(l1 * l2), &k)?;
                let rhs = wigner_rotation(&l1, &l2.apply(&k))? * wigner_rotation(&l2, &k)?;
                Ok((lhs.matrix() - rhs.matrix()).amax())
            };
            residual_or_inf(run())
        });
        self.randomized("Minkowski product symmetric and Lorentz invariant", 1e-10, |rng| {
            let (u, v, l) = (momentum(rng), momentum(rng), lorentz(rng));
            let sym = (minkowski_dot(&u, &v) - minkowski_dot(&v, &u)).abs();
            let (lu, lv) = (l.matrix() * u.to_vector(), l.matrix() * v.to_vector());
            sym.max((minkowski_dot4(&lu, &lv) - minkowski_dot(&u, &v)).abs())
        });
    }

    fn spin_rep(&mut self) {
        self.randomized("D(R) = V R V† agrees with exp(iφ·S)", 1e-9, |rng| {
            let phi = Vector3::from_fn(|_, _| rng.random_range(-2.0..2.0));
            let generator = spin_component_raw(&phi) * Complex::new(0.0, 1.0);
            max_abs3(&(d_matrix(&RotationMatrix::from_generator(&phi)) - generator.exp()))
        });
        self.randomized("D is a unitary representation", 1e-12, |rng| {
            let (r1, r2) = (rotation(rng), rotation(rng));
            let d = d_matrix(&(r1 * r2));
            let unitary = max_abs3(&(d * d.adjoint() - CMatrix3::identity()));
            unitary.max(max_abs3(&(d - d_matrix(&r1) * d_matrix(&r2))))
        });
        // 1/√2 is not representable, so "exact" means within a few ulps
        self.check("VVᵀ is the antidiagonal (-1, 1, -1) matrix", 4e-15, 1, |_| {
            let v = intertwiner();
            let expected = Matrix3::new(0.0, 0.0, -1.0, 0.0, 1.0, 0.0, -1.0, 0.0, 0.0).map(|x| Complex::new(x, 0.0));
            max_abs3(&(v * v.transpose() - expected))
        });
        self.check("spin algebra [S¹, S²] = iS³ and cyclic", 4e-15, 1, |_| {
            let s = spin_matrices();
            let i = Complex::new(0.0, 1.0);
            (0..3)
                .map(|a| {
                    let (b, c) = ((a + 1) % 3, (a + 2) % 3);
                    max_abs3(&(s[a] * s[b] - s[b] * s[a] - s[c] * i))
                })
                .fold(0.0, f64::max)
        });
        self.randomized("spin projectors are complete and idempotent", 1e-12, |rng| {
            let p = spin_projectors(&direction(rng));
            let sum = max_abs3(&(p[0] + p[1] + p[2] - CMatrix3::identity()));
            p.iter().map(|q| max_abs3(&(q * q - q))).fold(sum, f64::max)
        });
    }

    fn polarization(&mut self) {
        self.randomized("polarization transversal to k", 1e-12, |rng| {
            let k = momentum(rng);
            transversality_residual(&k, &polarization(&k))
        });
        self.randomized("polarization orthonormality", 1e-12, |rng| {
            orthonormality_residual(&polarization(&momentum(rng)))
        });
        self.randomized("polarization bilinear eᵀηe = -VVᵀ", 1e-12, |rng| {
            bilinear_residual(&polarization(&momentum(rng)))
        });
        self.randomized("polarization completeness", 1e-12, |rng| {
            let k = momentum(rng);
            completeness_residual(&k, &polarization(&k))
        });
        self.randomized("polarization conjugation e* = e VVᵀ", 1e-12, |rng| {
            conjugation_residual(&polarization(&momentum(rng)))
        });
        self.randomized("polarization equals boosted rest amplitudes", 1e-12, |rng| {
            let k = momentum(rng);
            (polarization(&k) - polarization_via_boost(&k))
                .iter()
                .map(|z| z.norm())
                .fold(0.0, f64::max)
        });
        self.randomized("polarization Lorentz covariance", 1e-10, |rng| {
            residual_or_inf(weinberg_residual(&lorentz(rng), &momentum(rng)))
        });
    }

    fn states(&mut self) {
        self.randomized("scalar state norm 2 + (kp)²", 1e-10, |rng| {
            let (k, p) = (momentum(rng), momentum(rng));
            (scalar_state(&k, &p).norm_sqr() - scalar_norm(&k, &p)).abs()
        });
        self.randomized("scalar state is a Lorentz scalar", 1e-10, |rng| {
            let (k, p, l) = (momentum(rng), momentum(rng), lorentz(rng));
            let moved = match scalar_state(&k, &p).transformed(&l) {
                Ok(m) => m,
                Err(_) => return f64::INFINITY,
            };
            max_abs3(&(moved.psi - scalar_state(&moved.k, &moved.p).psi))
        });
        self.randomized("scalar state exchange symmetry", 1e-12, |rng| {
            let (k, p) = (momentum(rng), momentum(rng));
            max_abs3(&(scalar_state(&k, &p).swapped().psi - scalar_state(&p, &k).psi))
        });
    }

    fn observables(&mut self) {
        let closed = self.suite.closed_form;
        self.randomized("N/M/T two-path (definitional vs closed form)", 1e-12, |rng| {
            let (q, w) = (momentum(rng), direction(rng));
            closed(&q, &w).max_deviation(&nmt_definitional(&q, &w))
        });
        self.randomized("M + T completeness", 1e-12, |rng| {
            let (q, w) = (momentum(rng), direction(rng));
            let nmt = nmt_definitional(&q, &w);
            let qv = q.to_vector();
            max_abs4(&(nmt.m + nmt.t - (-metric() + qv * qv.transpose()).map(|x| Complex::new(x, 0.0))))
        });
        self.randomized("Nη satisfies (Nη)³ = Nη (spectrum in {1, 0, -1})", 1e-10, |rng| {
            let (q, w) = (momentum(rng), direction(rng));
            let x = nmt_definitional(&q, &w).n * metric().map(|v| Complex::new(v, 0.0));
            max_abs4(&(x * x * x - x))
        });
        self.randomized("covariant spin action algebra", 1e-10, |rng| {
            let k = momentum(rng);
            let [a1, a2, a3] = [1, 2, 3].map(|i| covariant_spin_action(&k, i).transpose());
            max_abs4(&(a1 * a2 - a2 * a1 - a3 * Complex::new(0.0, 1.0)))
        });
        self.randomized("oracle invariant under phase and scale", 1e-12, |rng| {
            let (k, p, a, b) = (momentum(rng), momentum(rng), direction(rng), direction(rng));
            let psi = scalar_state(&k, &p);
            let factor = Complex::from_polar(
                rng.random_range(0.1..10.0),
                rng.random_range(0.0..std::f64::consts::TAU),
            );
            let scaled = TwoParticleAmplitude {
                psi: psi.psi * factor,
                ..psi
            };
            match (probability_oracle(&psi, &a, &b), probability_oracle(&scaled, &a, &b)) {
                (Ok(t1), Ok(t2)) => t1.max_deviation(&t2),
                _ => f64::INFINITY,
            }
        });
    }

    fn correlations(&mut self) {
        self.randomized("trace formulas match spectral oracle", 1e-10, |rng| {
            let (k, p, a, b) = (momentum(rng), momentum(rng), direction(rng), direction(rng));
            match probability_oracle(&scalar_state(&k, &p), &a, &b) {
                Ok(oracle) => probabilities_general(&k, &p, &a, &b).max_deviation(&oracle),
                Err(_) => f64::INFINITY,
            }
        });
        self.randomized("probabilities nonnegative and normalized", 1e-12, |rng| {
            let (k, p, a, b) = (momentum(rng), momentum(rng), direction(rng), direction(rng));
            let t = probabilities_general(&k, &p, &a, &b);
            let negative = t.rows().iter().flatten().map(|v| -v).fold(0.0, f64::max);
            negative.max((t.total() - 1.0).abs())
        });
        self.randomized("correlation paths agree (table, trace, explicit)", 1e-10, |rng| {
            let (k, p, a, b) = (momentum(rng), momentum(rng), direction(rng), direction(rng));
            let from_table = probabilities_general(&k, &p, &a, &b).correlation();
            let trace = correlation_trace(&k, &p, &a, &b);
            let explicit = correlation_general(&k, &p, &a, &b);
            (from_table - trace).abs().max((trace - explicit).abs())
        });
        self.randomized("general frame reduces to CMF formulas", 1e-12, |rng| {
            let (a, b, n) = (direction(rng), direction(rng), direction(rng));
            let x = rng.random_range(0.0..4.0);
            let cfg = CmfConfig::from_directions(x, &a, &b, &n).expect("unit vectors");
            let (k, p) = cfg.momenta(&n);
            let general = probabilities_general(&k, &p, &a, &b);
            general
                .max_deviation(&cmf_probabilities(&cfg))
                .max((general.correlation() - cmf_correlation(&cfg)).abs())
        });
        self.randomized("exchange symmetry of the table", 1e-12, |rng| {
            let (k, p, a, b) = (momentum(rng), momentum(rng), direction(rng), direction(rng));
            probabilities_general(&k, &p, &a, &b).max_deviation(&probabilities_general(&p, &k, &b, &a).transposed())
        });
        self.randomized("rotational covariance of the table", 1e-10, |rng| {
            let (k, p, a, b, r) = (
                momentum(rng),
                momentum(rng),
                direction(rng),
                direction(rng),
                rotation(rng),
            );
            let turn = |q: &FourMomentum| FourMomentum::on_shell(r.matrix() * q.momentum());
            probabilities_general(&k, &p, &a, &b).max_deviation(&probabilities_general(
                &turn(&k),
                &turn(&p),
                &a.rotated(&r),
                &b.rotated(&r),
            ))
        });
        self.randomized("|C| ≤ 1", 1e-12, |rng| {
            let (k, p, a, b) = (momentum(rng), momentum(rng), direction(rng), direction(rng));
            (correlation_general(&k, &p, &a, &b).abs() - 1.0).max(0.0)
        });
        self.randomized("nonrelativistic limit of CMF formulas", 1e-12, |rng| {
            let (a, b, n) = (direction(rng), direction(rng), direction(rng));
            let cfg = CmfConfig::from_directions(0.0, &a, &b, &n).expect("unit vectors");
            let limit = nonrel_probabilities(cfg.ab).expect("unit vectors");
            cmf_probabilities(&cfg)
                .max_deviation(&limit)
                .max((cmf_correlation(&cfg) + 2.0 * cfg.ab / 3.0).abs())
        });
        self.randomized("ultra-relativistic limit at x = 1e6", 1e-5, |rng| {
            let (a, b, n) = (direction(rng), direction(rng), direction(rng));
            let cfg = CmfConfig::from_directions(1e6, &a, &b, &n).expect("unit vectors");
            let limit = ultrarel_probabilities(cfg.an, cfg.bn).expect("unit vectors");
            cmf_probabilities(&cfg)
                .max_deviation(&limit)
                .max(cmf_correlation(&cfg).abs())
        });
    }

    fn bell(&mut self) {
        let random_config = |rng: &mut ChaCha8Rng, x: f64| BellConfig {
            a: direction(rng),
            b: direction(rng),
            c: direction(rng),
            d: direction(rng),
            n: direction(rng),
            x,
        };
        self.randomized("Bell sides invariant under rotation about n", 1e-12, |rng| {
            let x = rng.random_range(0.0..3.0);
            let cfg = random_config(rng, x);
            let r = RotationMatrix::from_axis_angle(&cfg.n, rng.random_range(0.0..std::f64::consts::TAU));
            let turned = cfg.rotated(&r);
            let turned = BellConfig { n: cfg.n, ..turned };
            Inequality::ALL
                .iter()
                .map(|i| (i.lhs(&cfg) - i.lhs(&turned)).abs())
                .fold(0.0, f64::max)
        });
        self.randomized("Bell sides invariant under global rotation at x = 0", 1e-12, |rng| {
            let cfg = random_config(rng, 0.0);
            let r = rotation(rng);
            let turned = BellConfig {
                n: cfg.n,
                ..cfg.rotated(&r)
            };
            Inequality::ALL
                .iter()
                .map(|i| (i.lhs(&cfg) - i.lhs(&turned)).abs())
                .fold(0.0, f64::max)
        });
        self.randomized("Mermin side on a+b+c=0 equals 3s/(2+s²)", 1e-12, |rng| {
            let x = rng.random_range(0.0..10.0);
            let s = 1.0 + 2.0 * x;
            let cfg = BellConfig::coplanar(std::f64::consts::FRAC_PI_6, x).expect("x >= 0");
            (bell::mermin_lhs(&cfg) - 3.0 * s / (2.0 + s * s)).abs()
        });
        self.randomized("coplanar closed form matches vector construction", 1e-12, |rng| {
            let theta = rng.random_range(0.0..std::f64::consts::TAU);
            let x = rng.random_range(0.0..5.0);
            let cfg = BellConfig::coplanar(theta, x).expect("x >= 0");
            (bell::coplanar_lhs(theta, x) - bell::weighted_lhs(&cfg)).abs()
        });
        self.randomized("weighted side dominates the Mermin side", 1e-12, |rng| {
            let x = rng.random_range(0.0..3.0);
            let cfg = random_config(rng, x);
            (bell::mermin_lhs(&cfg) - bell::weighted_lhs(&cfg)).max(0.0)
        });
        self.check("optimizer reproducible for a fixed seed", 0.0, 1, |_| {
            let opts = MaximizeOptions {
                starts: 3,
                ..Default::default()
            };
            let run = || bell::maximize_violation_with(Inequality::Weighted, None, 7, &opts);
            match (run(), run()) {
                (Ok(a), Ok(b)) if a == b => 0.0,
                _ => f64::INFINITY,
            }
        });
    }
}
