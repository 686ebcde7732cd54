//! Minkowski algebra, standard boosts and Wigner rotations for massive momenta.
//!
//! Units: the particle mass is 1, so a momentum is fully specified by its
//! spatial part and `k⁰ = √(1 + |k⃗|²)`. The metric is `η = diag(1, -1, -1, -1)`.

use std::ops::Mul;

use nalgebra::{Matrix3, Matrix4, Rotation3, Unit, Vector3, Vector4};

use crate::error::{Error, Result};

/// Tolerance on `|ω| - 1` accepted by [`Direction::new`].
pub const UNIT_TOLERANCE: f64 = 1e-9;

/// Tolerance for on-shell and pseudo-orthogonality checks of user input.
const INPUT_TOLERANCE: f64 = 1e-10;

/// The Minkowski metric `diag(1, -1, -1, -1)`.
pub fn metric() -> Matrix4<f64> {
    Matrix4::from_diagonal(&Vector4::new(1.0, -1.0, -1.0, -1.0))
}

/// A real unit three-vector: a measurement axis or a momentum direction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Direction(Vector3<f64>);

impl Direction {
    /// Accepts `v` if its norm is 1 within [`UNIT_TOLERANCE`].
    pub fn new(v: Vector3<f64>) -> Result<Self> {
        let norm = v.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > UNIT_TOLERANCE {
            return Err(Error::NotUnit { norm });
        }
        Ok(Direction(v))
    }

    /// Rescales any nonzero finite vector to unit length.
    pub fn normalize(v: Vector3<f64>) -> Result<Self> {
        let norm = v.norm();
        if !norm.is_finite() || norm == 0.0 {
            return Err(Error::NotUnit { norm });
        }
        Ok(Direction(v / norm))
    }

    /// Polar angle `theta` from the z axis, azimuth `phi` in the xy plane.
    pub fn from_angles(theta: f64, phi: f64) -> Self {
        let (st, ct) = theta.sin_cos();
        let (sp, cp) = phi.sin_cos();
        Direction(Vector3::new(st * cp, st * sp, ct))
    }

    pub fn x() -> Self {
        Direction(Vector3::x())
    }

    pub fn y() -> Self {
        Direction(Vector3::y())
    }

    pub fn z() -> Self {
        Direction(Vector3::z())
    }

    pub fn as_vector(&self) -> &Vector3<f64> {
        &self.0
    }

    pub fn dot(&self, other: &Direction) -> f64 {
        self.0.dot(&other.0)
    }

    pub fn rotated(&self, rotation: &RotationMatrix) -> Direction {
        Direction(rotation.matrix() * self.0)
    }
}

/// On-shell four-momentum of a unit-mass particle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FourMomentum {
    energy: f64,
    momentum: Vector3<f64>,
}

impl FourMomentum {
    /// Builds the on-shell momentum with spatial part `momentum`.
    pub fn on_shell(momentum: Vector3<f64>) -> Self {
        FourMomentum {
            energy: (1.0 + momentum.norm_squared()).sqrt(),
            momentum,
        }
    }

    /// The rest momentum `k̃ = (1, 0, 0, 0)`.
    pub fn rest() -> Self {
        Self::on_shell(Vector3::zeros())
    }

    /// Accepts explicit components, checking the mass shell and positive energy.
    pub fn new(e0: f64, e1: f64, e2: f64, e3: f64) -> Result<Self> {
        let momentum = Vector3::new(e1, e2, e3);
        let expected = (1.0 + momentum.norm_squared()).sqrt();
        let residual = (e0 - expected).abs();
        if !(e0 > 0.0) || residual > INPUT_TOLERANCE * expected {
            return Err(Error::OffShell { residual });
        }
        Ok(FourMomentum { energy: e0, momentum })
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    pub fn momentum(&self) -> &Vector3<f64> {
        &self.momentum
    }

    /// Contravariant components `(k⁰, k¹, k², k³)`.
    pub fn to_vector(&self) -> Vector4<f64> {
        Vector4::new(self.energy, self.momentum.x, self.momentum.y, self.momentum.z)
    }

    /// Covariant components `k_μ = η_μν k^ν`.
    pub fn lowered(&self) -> Vector4<f64> {
        Vector4::new(self.energy, -self.momentum.x, -self.momentum.y, -self.momentum.z)
    }

    /// The three-momentum reversed, i.e. the center-of-mass partner of `self`.
    pub fn partner(&self) -> Self {
        FourMomentum {
            energy: self.energy,
            momentum: -self.momentum,
        }
    }
}

/// `u⁰v⁰ − u⃗·v⃗`.
pub fn minkowski_dot(u: &FourMomentum, v: &FourMomentum) -> f64 {
    u.energy * v.energy - u.momentum.dot(&v.momentum)
}

/// Minkowski product of two raw four-vectors.
pub fn minkowski_dot4(u: &Vector4<f64>, v: &Vector4<f64>) -> f64 {
    u[0] * v[0] - u[1] * v[1] - u[2] * v[2] - u[3] * v[3]
}

/// Squared momentum in units of the mass, `x = |k⃗|²`.
pub fn cmf_x(k: &FourMomentum) -> f64 {
    k.momentum.norm_squared()
}

/// A proper orthochronous Lorentz transformation acting on contravariant vectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzMatrix(Matrix4<f64>);

impl LorentzMatrix {
    /// Validates `ΛᵀηΛ = η` and `Λ⁰₀ ≥ 1`.
    pub fn new(m: Matrix4<f64>) -> Result<Self> {
        let residual = Self::pseudo_orthogonality_residual(&m);
        let scale = m.abs().max().max(1.0);
        if !residual.is_finite() || residual > INPUT_TOLERANCE * scale * scale || m[(0, 0)] < 1.0 - INPUT_TOLERANCE {
            return Err(Error::NotLorentz { residual });
        }
        Ok(LorentzMatrix(m))
    }

    pub fn identity() -> Self {
        LorentzMatrix(Matrix4::identity())
    }

    /// Embeds a spatial rotation.
    pub fn from_rotation(rotation: &RotationMatrix) -> Self {
        let mut m = Matrix4::identity();
        m.fixed_view_mut::<3, 3>(1, 1).copy_from(rotation.matrix());
        LorentzMatrix(m)
    }

    /// `max |ΛᵀηΛ − η|`.
    pub fn pseudo_orthogonality_residual(m: &Matrix4<f64>) -> f64 {
        let eta = metric();
        (m.transpose() * eta * m - eta).abs().max()
    }

    pub fn matrix(&self) -> &Matrix4<f64> {
        &self.0
    }

    /// `Λ⁻¹ = η Λᵀ η`.
    pub fn inverse(&self) -> Self {
        let eta = metric();
        LorentzMatrix(eta * self.0.transpose() * eta)
    }

    /// Transforms a momentum; the energy is recomputed on shell from the
    /// transformed spatial part.
    pub fn apply(&self, k: &FourMomentum) -> FourMomentum {
        let v = self.0 * k.to_vector();
        FourMomentum::on_shell(Vector3::new(v[1], v[2], v[3]))
    }
}

impl Mul for LorentzMatrix {
    type Output = LorentzMatrix;

    fn mul(self, rhs: LorentzMatrix) -> LorentzMatrix {
        LorentzMatrix(self.0 * rhs.0)
    }
}

/// A proper rotation of three-space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RotationMatrix(Matrix3<f64>);

impl RotationMatrix {
    /// Validates `RᵀR = I` and `det R = 1`.
    pub fn new(m: Matrix3<f64>) -> Result<Self> {
        let residual = (m.transpose() * m - Matrix3::identity())
            .abs()
            .max()
            .max((m.determinant() - 1.0).abs());
        if !residual.is_finite() || residual > INPUT_TOLERANCE {
            return Err(Error::NotLorentz { residual });
        }
        Ok(RotationMatrix(m))
    }

    pub fn identity() -> Self {
        RotationMatrix(Matrix3::identity())
    }

    /// Active right-handed rotation by `angle` about `axis`.
    pub fn from_axis_angle(axis: &Direction, angle: f64) -> Self {
        let axis = Unit::new_unchecked(*axis.as_vector());
        RotationMatrix(*Rotation3::from_axis_angle(&axis, angle).matrix())
    }

    /// `exp(i φ⃗·I⃗)` with generators `(Iⁱ)ⱼₖ = −i εᵢⱼₖ`.
    ///
    /// With this convention the spin-1 representation is `D(R) = exp(i φ⃗·S⃗)`.
    /// It is the active rotation about `φ⃗` by the angle `−|φ⃗|`.
    pub fn from_generator(phi: &Vector3<f64>) -> Self {
        RotationMatrix(*Rotation3::new(-phi).matrix())
    }

    pub fn matrix(&self) -> &Matrix3<f64> {
        &self.0
    }

    /// `max(|RᵀR − I|, |det R − 1|)`.
    pub fn orthogonality_residual(&self) -> f64 {
        (self.0.transpose() * self.0 - Matrix3::identity())
            .abs()
            .max()
            .max((self.0.determinant() - 1.0).abs())
    }
}

impl Mul for RotationMatrix {
    type Output = RotationMatrix;

    fn mul(self, rhs: RotationMatrix) -> RotationMatrix {
        RotationMatrix(self.0 * rhs.0)
    }
}

/// The boost `L_k` carrying the rest momentum to `k`.
pub fn standard_boost(k: &FourMomentum) -> LorentzMatrix {
    let k0 = k.energy;
    let kv = k.momentum;
    let mut m = Matrix4::zeros();
    m[(0, 0)] = k0;
    for i in 0..3 {
        m[(0, i + 1)] = kv[i];
        m[(i + 1, 0)] = kv[i];
    }
    let spatial = Matrix3::identity() + kv * kv.transpose() / (1.0 + k0);
    m.fixed_view_mut::<3, 3>(1, 1).copy_from(&spatial);
    LorentzMatrix(m)
}

/// The Wigner rotation `R(Λ, k) = L_{Λk}⁻¹ Λ L_k`.
///
/// Fails if the 4×4 product is not block diagonal, which signals that `Λ`
/// or `k` was not what it claimed to be.
pub fn wigner_rotation(lambda: &LorentzMatrix, k: &FourMomentum) -> Result<RotationMatrix> {
    let lk = lambda.apply(k);
    let w = standard_boost(&lk).inverse().0 * lambda.0 * standard_boost(k).0;

    let mut residual = (w[(0, 0)] - 1.0).abs();
    for i in 1..4 {
        residual = residual.max(w[(0, i)].abs()).max(w[(i, 0)].abs());
    }
    // rounding grows with the size of the three factors
    let scale = lambda.0[(0, 0)] * k.energy * lk.energy;
    if !residual.is_finite() || residual > 1e-11 * scale {
        return Err(Error::NotBlockDiagonal { residual });
    }
    Ok(RotationMatrix(w.fixed_view::<3, 3>(1, 1).into_owned()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn dot_products() {
        let rest = FourMomentum::rest();
        assert_eq!(minkowski_dot(&rest, &rest), 1.0);
        let null = Vector4::new(1.0, 1.0, 0.0, 0.0);
        assert_eq!(minkowski_dot4(&null, &null), 0.0);

        let k = FourMomentum::on_shell(Vector3::new(0.3, -0.4, 0.5));
        let x = cmf_x(&k);
        assert_abs_diff_eq!(minkowski_dot(&k, &k.partner()), 1.0 + 2.0 * x, epsilon = 1e-12);
    }

    #[test]
    fn boost_of_rest_is_identity() {
        assert_eq!(*standard_boost(&FourMomentum::rest()).matrix(), Matrix4::identity());
    }

    #[test]
    fn boost_maps_rest_to_momentum() {
        let k = FourMomentum::on_shell(Vector3::z());
        let image = standard_boost(&k).matrix() * FourMomentum::rest().to_vector();
        assert_abs_diff_eq!(image, Vector4::new(2f64.sqrt(), 0.0, 0.0, 1.0), epsilon = 1e-12);
    }

    #[test]
    fn wigner_rotation_of_standard_boost_is_trivial() {
        let k = FourMomentum::rest();
        let q = FourMomentum::on_shell(Vector3::new(1.0, 2.0, -0.5));
        let r = wigner_rotation(&standard_boost(&q), &k).unwrap();
        assert_abs_diff_eq!(*r.matrix(), Matrix3::identity(), epsilon = 1e-12);
    }

    #[test]
    fn rotations_stabilize_rest_momentum() {
        let r0 = RotationMatrix::from_axis_angle(&Direction::normalize(Vector3::new(1.0, 1.0, 0.2)).unwrap(), 0.7);
        let r = wigner_rotation(&LorentzMatrix::from_rotation(&r0), &FourMomentum::rest()).unwrap();
        assert_abs_diff_eq!(*r.matrix(), *r0.matrix(), epsilon = 1e-12);
    }

    #[test]
    fn transverse_boost_gives_nontrivial_rotation() {
        let boost = standard_boost(&FourMomentum::on_shell(Vector3::new(1.5, 0.0, 0.0)));
        let k = FourMomentum::on_shell(Vector3::new(0.0, 0.0, 2.0));
        let r = wigner_rotation(&boost, &k).unwrap();
        assert!(r.orthogonality_residual() < 1e-12);
        assert!((r.matrix() - Matrix3::identity()).abs().max() > 0.1);
        // axis of a Wigner rotation for boost ⟂ momentum is along k⃗ × v⃗ (here y)
        assert_abs_diff_eq!(r.matrix()[(1, 1)], 1.0, epsilon = 1e-12);
    }

    #[test]
    fn broken_input_is_reported() {
        let mut m = *standard_boost(&FourMomentum::on_shell(Vector3::new(0.4, 0.0, 0.0))).matrix();
        m[(1, 2)] += 0.3;
        assert!(matches!(LorentzMatrix::new(m), Err(Error::NotLorentz { .. })));
        // bypass validation to exercise the block-diagonal check
        let fake = LorentzMatrix(m);
        let k = FourMomentum::on_shell(Vector3::new(0.0, 1.0, 0.0));
        assert!(matches!(
            wigner_rotation(&fake, &k),
            Err(Error::NotBlockDiagonal { .. })
        ));
    }

    #[test]
    fn off_shell_rejected() {
        assert!(FourMomentum::new(1.0, 0.0, 0.0, 0.0).is_ok());
        assert!(matches!(
            FourMomentum::new(1.0, 1.0, 0.0, 0.0),
            Err(Error::OffShell { .. })
        ));
        assert!(FourMomentum::new(-(2f64.sqrt()), 1.0, 0.0, 0.0).is_err());
    }

    #[test]
    fn cmf_x_values() {
        assert_eq!(cmf_x(&FourMomentum::rest()), 0.0);
        assert_abs_diff_eq!(
            cmf_x(&FourMomentum::on_shell(Vector3::new(0.6, 0.8, 0.0))),
            1.0,
            epsilon = 1e-15
        );
        let xm = (2f64.sqrt() - 1.0) / 2.0;
        let k = FourMomentum::on_shell(Vector3::new(0.0, xm.sqrt(), 0.0));
        assert_abs_diff_eq!(cmf_x(&k), xm, epsilon = 1e-15);
    }

    #[test]
    fn direction_validation() {
        assert!(Direction::new(Vector3::new(1.0, 1e-10, 0.0)).is_ok());
        assert!(matches!(
            Direction::new(Vector3::new(1.1, 0.0, 0.0)),
            Err(Error::NotUnit { .. })
        ));
        assert!(Direction::normalize(Vector3::zeros()).is_err());
    }

    #[test]
    fn generator_convention() {
        let phi = 0.3;
        let r = RotationMatrix::from_generator(&Vector3::new(0.0, 0.0, phi));
        // exp(iφI³) has (1,2) entry +sin φ
        assert_abs_diff_eq!(r.matrix()[(0, 1)], phi.sin(), epsilon = 1e-15);
    }
}
