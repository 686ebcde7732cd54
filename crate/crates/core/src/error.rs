use thiserror::Error;

/// Errors reported by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("direction is not a unit vector (norm {norm})")]
    NotUnit { norm: f64 },

    #[error("four-momentum is off shell (residual {residual:e})")]
    OffShell { residual: f64 },

    #[error("matrix is not an orthochronous Lorentz transformation (residual {residual:e})")]
    NotLorentz { residual: f64 },

    #[error("L(Λk)⁻¹ Λ L(k) is not block diagonal (residual {residual:e})")]
    NotBlockDiagonal { residual: f64 },

    #[error("covariant amplitude is not transversal (residual {residual:e})")]
    NotTransversal { residual: f64 },

    #[error("two-particle amplitude has zero norm")]
    ZeroNorm,

    #[error("dot products are not realizable by unit vectors (Gram eigenvalue {min_eigenvalue:e})")]
    Gram { min_eigenvalue: f64 },

    #[error("parameter `{name}` out of range: {value}")]
    OutOfRange { name: &'static str, value: f64 },

    #[error("normalized correlation undefined: nonzero-outcome probability {0:e}")]
    DegenerateDenominator(f64),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
