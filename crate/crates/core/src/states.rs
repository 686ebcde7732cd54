//! Two-particle amplitudes at sharp momenta: the scalar state, the tensor
//! states, and the map from covariant to spin-label amplitudes.
//!
//! Amplitudes are stored unnormalized. Alice's particle carries momentum `k`
//! and the row index of `psi`; Bob's carries `p` and the column index.

use nalgebra::{Complex, Matrix4};

use crate::error::{Error, Result};
use crate::kinematics::{metric, wigner_rotation, FourMomentum, LorentzMatrix};
use crate::polarization::polarization;
use crate::spin_rep::d_matrix;
use crate::{CMatrix3, CMatrix4};

/// Spin-label amplitude `ψ_{σλ}(k, p)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoParticleAmplitude {
    pub psi: CMatrix3,
    pub k: FourMomentum,
    pub p: FourMomentum,
}

impl TwoParticleAmplitude {
    /// `Σ |ψ_{σλ}|²`.
    pub fn norm_sqr(&self) -> f64 {
        self.psi.iter().map(|z| z.norm_sqr()).sum()
    }

    /// The amplitude seen by an observer transformed by `Λ`:
    /// `D(R(Λ,k)) ψ D(R(Λ,p))ᵀ` at momenta `(Λk, Λp)`.
    pub fn transformed(&self, lambda: &LorentzMatrix) -> Result<Self> {
        let dk = d_matrix(&wigner_rotation(lambda, &self.k)?);
        let dp = d_matrix(&wigner_rotation(lambda, &self.p)?);
        Ok(TwoParticleAmplitude {
            psi: dk * self.psi * dp.transpose(),
            k: lambda.apply(&self.k),
            p: lambda.apply(&self.p),
        })
    }

    /// Exchanges the two particles.
    pub fn swapped(&self) -> Self {
        TwoParticleAmplitude {
            psi: self.psi.transpose(),
            k: self.p,
            p: self.k,
        }
    }
}

/// Covariant amplitude `Ψ^{μν}(k, p)` (both indices up).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CovariantAmplitude {
    pub psi: CMatrix4,
    pub k: FourMomentum,
    pub p: FourMomentum,
}

impl CovariantAmplitude {
    pub fn new(psi: CMatrix4, k: FourMomentum, p: FourMomentum) -> Self {
        CovariantAmplitude { psi, k, p }
    }

    /// Projects `Ψ` onto the subspace with `k_μΨ^{μν} = Ψ^{μν}p_ν = 0`.
    ///
    /// Components along `k` or `p` drop out of every spin-label amplitude, so
    /// the projection leaves [`covariant_to_spin`] unchanged.
    pub fn transversal_part(psi: CMatrix4, k: FourMomentum, p: FourMomentum) -> Self {
        let pk = transverse_projector(&k);
        let pp = transverse_projector(&p);
        CovariantAmplitude {
            psi: pk * psi * pp.transpose(),
            k,
            p,
        }
    }

    /// `max(|k_μΨ^{μν}|, |Ψ^{μν}p_ν|)`.
    pub fn transversality_residual(&self) -> f64 {
        let kl = self.k.lowered().map(|x| Complex::new(x, 0.0));
        let pl = self.p.lowered().map(|x| Complex::new(x, 0.0));
        let left = kl.transpose() * self.psi;
        let right = self.psi * pl;
        left.iter().chain(right.iter()).map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `Ψ^{νμ}(p, k)`.
    pub fn swapped(&self) -> Self {
        CovariantAmplitude {
            psi: self.psi.transpose(),
            k: self.p,
            p: self.k,
        }
    }
}

/// `(Π_k)^μ_ρ = δ^μ_ρ − k^μ k_ρ`.
fn transverse_projector(k: &FourMomentum) -> CMatrix4 {
    let m = Matrix4::identity() - k.to_vector() * k.lowered().transpose();
    m.map(|x| Complex::new(x, 0.0))
}

fn eta() -> CMatrix4 {
    metric().map(|x| Complex::new(x, 0.0))
}

/// `ψ_{σλ} = Ψ_{μν} e^μ_σ(k) e^ν_λ(p)`; rejects non-transversal input.
pub fn covariant_to_spin(amplitude: &CovariantAmplitude) -> Result<TwoParticleAmplitude> {
    let residual = amplitude.transversality_residual();
    let scale =
        amplitude.psi.iter().map(|z| z.norm()).fold(1.0, f64::max) * amplitude.k.energy().max(amplitude.p.energy());
    if !(residual <= 1e-9 * scale) {
        return Err(Error::NotTransversal { residual });
    }
    let lowered = eta() * amplitude.psi * eta();
    Ok(TwoParticleAmplitude {
        psi: polarization(&amplitude.k).transpose() * lowered * polarization(&amplitude.p),
        k: amplitude.k,
        p: amplitude.p,
    })
}

/// The scalar state `η_{μν} e^μ_σ(k) e^ν_λ(p)`.
pub fn scalar_state(k: &FourMomentum, p: &FourMomentum) -> TwoParticleAmplitude {
    TwoParticleAmplitude {
        psi: polarization(k).transpose() * eta() * polarization(p),
        k: *k,
        p: *p,
    }
}

/// Irreducible rank-2 tensor states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TensorKind {
    /// `½(δ^μ_α δ^ν_β + δ^μ_β δ^ν_α − ½η^{μν}η_{αβ})`
    Symmetric,
    /// `½(δ^μ_α δ^ν_β − δ^μ_β δ^ν_α)`
    Antisymmetric,
}

/// Spin-label amplitude of the `(μ, ν)` component of a tensor state.
///
/// # Panics
///
/// If `mu` or `nu` is not in `0..4`.
pub fn tensor_state(
    k: &FourMomentum,
    p: &FourMomentum,
    kind: TensorKind,
    mu: usize,
    nu: usize,
) -> TwoParticleAmplitude {
    assert!(mu < 4 && nu < 4, "Lorentz index out of range");
    let ek = polarization(k);
    let ep = polarization(p);
    let half = Complex::new(0.5, 0.0);

    let direct = ek.row(mu).transpose() * ep.row(nu);
    let crossed = ek.row(nu).transpose() * ep.row(mu);
    let psi = match kind {
        TensorKind::Symmetric => {
            let trace = ek.transpose() * eta() * ep * Complex::new(0.5 * metric()[(mu, nu)], 0.0);
            (direct + crossed - trace) * half
        }
        TensorKind::Antisymmetric => (direct - crossed) * half,
    };
    TwoParticleAmplitude { psi, k: *k, p: *p }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kinematics::minkowski_dot;
    use nalgebra::{Matrix3, Vector3};

    fn max_abs(m: &CMatrix3) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    fn momenta() -> (FourMomentum, FourMomentum) {
        (
            FourMomentum::on_shell(Vector3::new(0.4, -1.2, 0.7)),
            FourMomentum::on_shell(Vector3::new(-0.9, 0.3, 1.6)),
        )
    }

    #[test]
    fn rest_frame_scalar_state_is_singlet() {
        let rest = FourMomentum::rest();
        let psi = scalar_state(&rest, &rest).psi;
        let (o, z) = (Complex::new(1.0, 0.0), Complex::new(0.0, 0.0));
        let expected = Matrix3::new(z, z, o, z, -o, z, o, z, z);
        assert!(max_abs(&(psi - expected)) < 1e-15);
    }

    #[test]
    fn scalar_state_norm() {
        let (k, p) = momenta();
        let kp = minkowski_dot(&k, &p);
        let norm = scalar_state(&k, &p).norm_sqr();
        assert!((norm - (2.0 + kp * kp)).abs() < 1e-10);

        let x: f64 = 0.8;
        let k = FourMomentum::on_shell(Vector3::new(0.0, x.sqrt(), 0.0));
        let norm = scalar_state(&k, &k.partner()).norm_sqr();
        let d = 1.0 + 2.0 * x;
        assert!((norm - (2.0 + d * d)).abs() < 1e-12);
    }

    #[test]
    fn scalar_state_exchange_symmetry() {
        let (k, p) = momenta();
        let a = scalar_state(&k, &p);
        let b = scalar_state(&p, &k);
        assert!(max_abs(&(a.psi.transpose() - b.psi)) < 1e-12);
    }

    #[test]
    fn metric_as_covariant_amplitude() {
        let (k, p) = momenta();
        let cov = CovariantAmplitude::transversal_part(eta(), k, p);
        assert!(cov.transversality_residual() < 1e-12);
        let psi = covariant_to_spin(&cov).unwrap();
        assert!(max_abs(&(psi.psi - scalar_state(&k, &p).psi)) < 1e-12);
    }

    #[test]
    fn momentum_dyad_is_rejected() {
        let (k, p) = momenta();
        let dyad = (k.to_vector() * p.to_vector().transpose()).map(|x| Complex::new(x, 0.0));
        let err = covariant_to_spin(&CovariantAmplitude::new(dyad, k, p)).unwrap_err();
        assert!(matches!(err, Error::NotTransversal { .. }));
    }

    #[test]
    fn antisymmetric_diagonal_vanishes() {
        let (k, p) = momenta();
        for mu in 0..4 {
            let psi = tensor_state(&k, &p, TensorKind::Antisymmetric, mu, mu);
            assert_eq!(psi.norm_sqr(), 0.0);
        }
    }

    #[test]
    fn symmetric_tensor_is_symmetric_and_traceless() {
        let (k, p) = momenta();
        let eta = metric();
        let mut trace = CMatrix3::zeros();
        for mu in 0..4 {
            for nu in 0..4 {
                let a = tensor_state(&k, &p, TensorKind::Symmetric, mu, nu);
                let b = tensor_state(&k, &p, TensorKind::Symmetric, nu, mu);
                assert!(max_abs(&(a.psi - b.psi)) < 1e-15);
                trace += a.psi * Complex::new(eta[(mu, nu)], 0.0);
            }
        }
        assert!(max_abs(&trace) < 1e-12);
    }
}
