//! Polarization amplitudes `e^μ_σ(k)` linking four-vector indices to spin labels.

use nalgebra::{Complex, Matrix3, Matrix4x3};

use crate::error::Result;
use crate::kinematics::{metric, standard_boost, wigner_rotation, FourMomentum, LorentzMatrix};
use crate::spin_rep::{d_matrix, intertwiner};
use crate::{CMatrix3, CMatrix4, C64};

/// A 4×3 complex array; row `μ ∈ 0..4`, column `σ` in `(+1, 0, -1)` order.
pub type PolarizationMatrix = Matrix4x3<C64>;

fn complexify4(m: &nalgebra::Matrix4<f64>) -> CMatrix4 {
    m.map(|x| Complex::new(x, 0.0))
}

fn max_abs<I: IntoIterator<Item = C64>>(it: I) -> f64 {
    it.into_iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Amplitudes at rest: zero time row, spatial block `Vᵀ`.
pub fn rest_polarization() -> PolarizationMatrix {
    let mut e = PolarizationMatrix::zeros();
    e.fixed_view_mut::<3, 3>(1, 0).copy_from(&intertwiner().transpose());
    e
}

/// `e(k)`: time row `k⃗ᵀVᵀ`, spatial block `(1 + k⃗k⃗ᵀ/(1 + k⁰))Vᵀ`.
pub fn polarization(k: &FourMomentum) -> PolarizationMatrix {
    let kv = k.momentum();
    let vt = intertwiner().transpose();
    let spatial = (Matrix3::identity() + kv * kv.transpose() / (1.0 + k.energy())).map(|x| Complex::new(x, 0.0));
    let time = kv.transpose().map(|x| Complex::new(x, 0.0)) * vt;

    let mut e = PolarizationMatrix::zeros();
    e.fixed_view_mut::<1, 3>(0, 0).copy_from(&time);
    e.fixed_view_mut::<3, 3>(1, 0).copy_from(&(spatial * vt));
    e
}

/// `L_k e(k̃)`, the same amplitudes reached through the standard boost.
pub fn polarization_via_boost(k: &FourMomentum) -> PolarizationMatrix {
    complexify4(standard_boost(k).matrix()) * rest_polarization()
}

/// `max |e(Λk) − Λ e(k) D(R(Λ,k))ᵀ|`.
pub fn weinberg_residual(lambda: &LorentzMatrix, k: &FourMomentum) -> Result<f64> {
    let r = wigner_rotation(lambda, k)?;
    let lhs = polarization(&lambda.apply(k));
    let rhs = complexify4(lambda.matrix()) * polarization(k) * d_matrix(&r).transpose();
    Ok(max_abs((lhs - rhs).iter().copied()))
}

/// `max_σ |k_μ e^μ_σ|`.
pub fn transversality_residual(k: &FourMomentum, e: &PolarizationMatrix) -> f64 {
    let lowered = k.lowered().map(|x| Complex::new(x, 0.0));
    max_abs((lowered.transpose() * e).iter().copied())
}

/// `max |e† η e + 1|` (orthonormality).
pub fn orthonormality_residual(e: &PolarizationMatrix) -> f64 {
    let g = e.adjoint() * complexify4(&metric()) * e;
    max_abs((g + CMatrix3::identity()).iter().copied())
}

/// `max |eᵀ η e + VVᵀ|`.
pub fn bilinear_residual(e: &PolarizationMatrix) -> f64 {
    let v = intertwiner();
    let g = e.transpose() * complexify4(&metric()) * e;
    max_abs((g + v * v.transpose()).iter().copied())
}

/// `max |Σ_σ e*^μ_σ e^ν_σ − (−η^{μν} + k^μ k^ν)|`.
pub fn completeness_residual(k: &FourMomentum, e: &PolarizationMatrix) -> f64 {
    let kv = k.to_vector();
    let expected = complexify4(&(-metric() + kv * kv.transpose()));
    max_abs((e.conjugate() * e.transpose() - expected).iter().copied())
}

/// `max |e VVᵀ − e*|`.
pub fn conjugation_residual(e: &PolarizationMatrix) -> f64 {
    let v = intertwiner();
    max_abs((e * (v * v.transpose()) - e.conjugate()).iter().copied())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::{Direction, RotationMatrix};
    use nalgebra::Vector3;

    #[test]
    fn rest_frame_amplitudes() {
        let e = polarization(&FourMomentum::rest());
        assert_eq!(e, rest_polarization());
        for s in 0..3 {
            assert_eq!(e[(0, s)], Complex::new(0.0, 0.0));
        }
    }

    #[test]
    fn relations_at_a_fixed_momentum() {
        let k = FourMomentum::on_shell(Vector3::new(0.7, -1.3, 2.1));
        let e = polarization(&k);
        assert!(transversality_residual(&k, &e) < 1e-12);
        assert!(orthonormality_residual(&e) < 1e-12);
        assert!(bilinear_residual(&e) < 1e-12);
        assert!(completeness_residual(&k, &e) < 1e-12);
        assert!(conjugation_residual(&e) < 1e-12);
        let diff = polarization_via_boost(&k) - e;
        assert!(max_abs(diff.iter().copied()) < 1e-12);
    }

    #[test]
    fn weinberg_identity_transform() {
        let k = FourMomentum::on_shell(Vector3::new(0.1, 0.2, 0.3));
        assert!(weinberg_residual(&LorentzMatrix::identity(), &k).unwrap() < 1e-15);
    }

    #[test]
    fn weinberg_standard_boost_at_rest() {
        let q = FourMomentum::on_shell(Vector3::new(-1.1, 0.4, 0.9));
        assert!(weinberg_residual(&standard_boost(&q), &FourMomentum::rest()).unwrap() < 1e-12);
    }

    #[test]
    fn weinberg_rotation_times_boost() {
        let axis = Direction::normalize(Vector3::new(0.3, 1.0, -0.2)).unwrap();
        let lambda = LorentzMatrix::from_rotation(&RotationMatrix::from_axis_angle(&axis, 1.2))
            * standard_boost(&FourMomentum::on_shell(Vector3::new(0.5, -0.8, 1.4)));
        let k = FourMomentum::on_shell(Vector3::new(-0.6, 1.7, 0.2));
        assert!(weinberg_residual(&lambda, &k).unwrap() < 1e-10);
    }
}
