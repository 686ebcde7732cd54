//! The `N`, `M`, `T` observable matrices, the covariant spin action, and the
//! brute-force spectral oracle for joint probabilities.

use nalgebra::{Complex, Matrix3, Matrix4, Vector3};

use crate::correlations::ProbabilityTable;
use crate::error::{Error, Result};
use crate::kinematics::{metric, Direction, FourMomentum};
use crate::polarization::polarization;
use crate::spin_rep::{spin_component, spin_eigensystem, spin_matrices};
use crate::states::TwoParticleAmplitude;
use crate::{CMatrix3, CMatrix4};

/// `N^{αβ}`, `M^{αβ}`, `T^{αβ}` for one particle and one measurement axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObservableMatrices {
    /// Built from `ω·S`.
    pub n: CMatrix4,
    /// Built from `(ω·S)²`.
    pub m: CMatrix4,
    /// Built from `1 − (ω·S)²`.
    pub t: CMatrix4,
}

impl ObservableMatrices {
    /// Largest entrywise deviation between two sets.
    pub fn max_deviation(&self, other: &ObservableMatrices) -> f64 {
        [self.n - other.n, self.m - other.m, self.t - other.t]
            .iter()
            .flat_map(|d| d.iter())
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

/// `e*(q) X e(q)ᵀ` for `X = ω·S, (ω·S)², 1 − (ω·S)²`.
pub fn nmt_definitional(q: &FourMomentum, omega: &Direction) -> ObservableMatrices {
    let e = polarization(q);
    let a = spin_component(omega);
    let a2 = a * a;
    let sandwich = |x: CMatrix3| e.conjugate() * x * e.transpose();
    ObservableMatrices {
        n: sandwich(a),
        m: sandwich(a2),
        t: sandwich(CMatrix3::identity() - a2),
    }
}

fn block(time: f64, row: Vector3<f64>, col: Vector3<f64>, spatial: Matrix3<f64>) -> Matrix4<f64> {
    let mut out = Matrix4::zeros();
    out[(0, 0)] = time;
    for i in 0..3 {
        out[(0, i + 1)] = row[i];
        out[(i + 1, 0)] = col[i];
    }
    out.fixed_view_mut::<3, 3>(1, 1).copy_from(&spatial);
    out
}

fn cross_matrix(w: &Vector3<f64>) -> Matrix3<f64> {
    // (row i, col j) entry ε_{ijk} w_k
    Matrix3::new(0.0, w.z, -w.y, -w.z, 0.0, w.x, w.y, -w.x, 0.0)
}

/// Closed block forms of `N`, `M`, `T` in terms of `q⃗`, `ω⃗` and their products.
pub fn nmt_closed_form(q: &FourMomentum, omega: &Direction) -> ObservableMatrices {
    let qv = *q.momentum();
    let w = *omega.as_vector();
    let c = 1.0 + q.energy();
    let wq = w.dot(&qv);
    let qxw = qv.cross(&w);
    let qq = qv * qv.transpose();
    let wq_sym = w * qv.transpose() + qv * w.transpose();

    // N is i times a real antisymmetric matrix
    let n_spatial = -cross_matrix(&w) + (qv * qxw.transpose() - qxw * qv.transpose()) / c;
    let n = block(0.0, qxw, -qxw, n_spatial).map(|x| Complex::new(0.0, x));

    let mixed = qv * (q.energy() - wq * wq / c) - w * wq;
    let m_spatial = Matrix3::identity() - w * w.transpose() - wq_sym * (wq / c) + qq * (1.0 - wq * wq / (c * c));
    let m = block(qv.norm_squared() - wq * wq, mixed, mixed, m_spatial);

    let t_mixed = (w + qv * (wq / c)) * wq;
    let t_spatial = w * w.transpose() + wq_sym * (wq / c) + qq * (wq * wq / (c * c));
    let t = block(wq * wq, t_mixed, t_mixed, t_spatial);

    ObservableMatrices {
        n,
        m: m.map(|x| Complex::new(x, 0.0)),
        t: t.map(|x| Complex::new(x, 0.0)),
    }
}

/// Matrix action of the spin component along `axis` (1, 2 or 3) on covariant
/// one-particle states: `Ŝ|(α,k)⟩ = A^α_β |(β,k)⟩` with `A = −e(k) Sᵀ e†(k) η`.
///
/// # Panics
///
/// If `axis` is not 1, 2 or 3.
pub fn covariant_spin_action(k: &FourMomentum, axis: usize) -> CMatrix4 {
    assert!((1..=3).contains(&axis), "spin axis must be 1, 2 or 3");
    let s = spin_matrices()[axis - 1];
    let e = polarization(k);
    let eta = metric().map(|x| Complex::new(x, 0.0));
    -(e * s.transpose() * e.adjoint() * eta)
}

/// Joint outcome probabilities by explicit spectral projection.
///
/// Alice measures `a·S` on the row index of `ψ`, Bob `b·S` on the column
/// index: `P_{σλ} = |v_σ(a)† ψ v̄_λ(b)|² / Σ|ψ|²`, with eigenvectors from a
/// numerical eigensolver.
pub fn probability_oracle(amplitude: &TwoParticleAmplitude, a: &Direction, b: &Direction) -> Result<ProbabilityTable> {
    let norm = amplitude.norm_sqr();
    if !(norm > 0.0) || !norm.is_finite() {
        return Err(Error::ZeroNorm);
    }
    let alice = spin_eigensystem(a);
    let bob = spin_eigensystem(b);
    let mut table = [[0.0; 3]; 3];
    for (i, va) in alice.iter().enumerate() {
        for (j, vb) in bob.iter().enumerate() {
            let amp = va.vector.adjoint() * amplitude.psi * vb.vector.conjugate();
            table[i][j] = amp[(0, 0)].norm_sqr() / norm;
        }
    }
    Ok(ProbabilityTable::from_rows(table))
}
