//! Spin-1 generators, the intertwiner `V` and the rotation representation
//! `D(R) = V R V†`.
//!
//! Spin labels are ordered `(+1, 0, -1)` everywhere, matching the rows of `S³`.

use nalgebra::{Complex, Matrix3, SymmetricEigen, Vector3};

use crate::kinematics::{Direction, RotationMatrix};
use crate::{CMatrix3, C64};

/// Spin labels in matrix order.
pub const SPIN_LABELS: [i8; 3] = [1, 0, -1];

fn c(re: f64, im: f64) -> C64 {
    Complex::new(re, im)
}

/// `(S¹, S², S³)` in the `(+1, 0, -1)` basis.
#[rustfmt::skip]
pub fn spin_matrices() -> [CMatrix3; 3] {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let z = c(0.0, 0.0);
    let s1 = Matrix3::new(
        z, c(h, 0.0), z,
        c(h, 0.0), z, c(h, 0.0),
        z, c(h, 0.0), z,
    );
    let s2 = Matrix3::new(
        z, c(0.0, -h), z,
        c(0.0, h), z, c(0.0, -h),
        z, c(0.0, h), z,
    );
    let s3 = Matrix3::new(
        c(1.0, 0.0), z, z,
        z, z, z,
        z, z, c(-1.0, 0.0),
    );
    [s1, s2, s3]
}

/// The unitary `V` intertwining the vector and spin-1 representations.
#[rustfmt::skip]
pub fn intertwiner() -> CMatrix3 {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let z = c(0.0, 0.0);
    Matrix3::new(
        c(-h, 0.0), c(0.0, h), z,
        z, z, c(1.0, 0.0),
        c(h, 0.0), c(0.0, h), z,
    )
}

/// `D(R) = V R V†`.
pub fn d_matrix(rotation: &RotationMatrix) -> CMatrix3 {
    let v = intertwiner();
    v * rotation.matrix().map(|x| c(x, 0.0)) * v.adjoint()
}

/// `ω¹S¹ + ω²S² + ω³S³`.
pub fn spin_component(omega: &Direction) -> CMatrix3 {
    spin_component_raw(omega.as_vector())
}

pub(crate) fn spin_component_raw(omega: &Vector3<f64>) -> CMatrix3 {
    let [s1, s2, s3] = spin_matrices();
    s1 * c(omega.x, 0.0) + s2 * c(omega.y, 0.0) + s3 * c(omega.z, 0.0)
}

/// Closed-form spectral projectors of `ω·S` for outcomes `(+1, 0, -1)`:
/// `½A(A + 1)`, `1 − A²`, `½A(A − 1)`.
pub fn spin_projectors(omega: &Direction) -> [CMatrix3; 3] {
    let a = spin_component(omega);
    let id = CMatrix3::identity();
    let a2 = a * a;
    let half = c(0.5, 0.0);
    [(a2 + a) * half, id - a2, (a2 - a) * half]
}

/// An eigenpair of a spin component.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinEigenpair {
    pub eigenvalue: i8,
    pub vector: Vector3<C64>,
}

/// Eigenvectors of `ω·S` obtained from a numerical Hermitian eigensolver,
/// ordered `(+1, 0, -1)`.
///
/// Each eigenvector's largest-magnitude component is made real positive;
/// ties go to the lowest index.
pub fn spin_eigensystem(omega: &Direction) -> [SpinEigenpair; 3] {
    let eig = SymmetricEigen::new(spin_component(omega));
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));

    let mut out = [SpinEigenpair {
        eigenvalue: 0,
        vector: Vector3::zeros(),
    }; 3];
    for (slot, (&idx, &label)) in out.iter_mut().zip(order.iter().zip(SPIN_LABELS.iter())) {
        debug_assert!((eig.eigenvalues[idx] - f64::from(label)).abs() < 1e-8);
        let v: Vector3<C64> = eig.eigenvectors.column(idx).into_owned();
        *slot = SpinEigenpair {
            eigenvalue: label,
            vector: fix_phase(v.normalize()),
        };
    }
    out
}

fn fix_phase(v: Vector3<C64>) -> Vector3<C64> {
    let largest = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let pivot = v.iter().position(|z| z.norm() >= largest - 1e-12).unwrap_or(0);
    let phase = v[pivot] / v[pivot].norm();
    v / phase
}
