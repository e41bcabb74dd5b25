//! Measurement-cohering power of quantum channels.
//!
//! A channel `E` acting before a measurement can turn an incoherent
//! measurement into a coherent one. This crate computes how much:
//!
//! * [`resources`]: measurement coherence `C_m`, the measurement relative
//!   entropy `D_m`, the structure of incoherent POVMs, and a marginal-entropy
//!   lower bound on the relative entropy of entanglement;
//! * [`powers`]: measurement- and state-cohering powers, the generalized-CNOT
//!   conversion channel and its entanglement certificate, and the unital
//!   adjoint duality;
//! * [`verify`]: seeded randomized suites that check the identities and
//!   inequalities relating these quantities.
//!
//! All numerics are generic over [`Scalar`] (`f64` and `f32`). The aliases
//! below fix the scalar to `f64`, which is what every stated tolerance
//! assumes.

pub mod error;
pub mod generators;
pub mod io;
pub mod matcore;
pub mod powers;
pub mod qobjects;
pub mod resources;
pub mod scalar;
pub mod verify;

pub use error::{Error, Result};
pub use scalar::{CMatrix, Cx, Scalar, Tolerances};

pub type HermitianOperator = matcore::Hermitian<f64>;
pub type Povm = qobjects::Measurement<f64>;
pub type QuantumChannel = qobjects::Channel<f64>;
pub type StochasticMatrix = qobjects::Stochastic<f64>;
pub type IncoherentDecomposition = resources::IncoherentDecomposition<f64>;

pub type HermitianOperatorF32 = matcore::Hermitian<f32>;
pub type PovmF32 = qobjects::Measurement<f32>;
pub type QuantumChannelF32 = qobjects::Channel<f32>;
pub type StochasticMatrixF32 = qobjects::Stochastic<f32>;
