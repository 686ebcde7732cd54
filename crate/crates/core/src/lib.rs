//! Spin-measurement statistics for pairs of massive spin-1 bosons.
//!
//! The crate computes joint probabilities, correlation functions and
//! Bell-type inequality values for two vector bosons prepared in the
//! Lorentz-scalar two-particle state with sharp momenta. Every closed-form
//! expression has an independent numerical counterpart (brute-force spectral
//! projection, definitional matrix contractions) so the two can be checked
//! against each other; [`verify`] bundles those checks into a suite.
//!
//! Units: the boson mass is 1 and `x = |k⃗|²`.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bell;
pub mod correlations;
pub mod error;
pub mod figures;
pub mod kinematics;
pub mod observables;
pub mod optimize;
pub mod polarization;
pub mod spin_rep;
pub mod states;
pub mod verify;

use nalgebra::{Complex, Matrix3, Matrix4};

pub type C64 = Complex<f64>;
pub type CMatrix3 = Matrix3<C64>;
pub type CMatrix4 = Matrix4<C64>;

pub use bell::{BellConfig, BellReport, Inequality};
pub use correlations::{CmfConfig, Grid, Outcome, ProbabilityTable, Quantity};
pub use error::{Error, Result};
pub use figures::{FigureId, Table};
pub use kinematics::{Direction, FourMomentum, LorentzMatrix, RotationMatrix};
pub use observables::ObservableMatrices;
pub use polarization::PolarizationMatrix;
pub use states::{CovariantAmplitude, TensorKind, TwoParticleAmplitude};
