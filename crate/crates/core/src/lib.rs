//! Gaussian (covariance-matrix) simulation of two-mode quantum light
//! propagating through Raman-coupled Λ-type atomic media.
//!
//! The crate is organised bottom-up:
//!
//! * [`gaussian`] holds states, symplectic maps, the one-mode transmission
//!   channel and the entanglement/statistics measures.
//! * [`medium`] derives effective couplings from raw atomic parameters,
//!   evaluates the per-frequency transfer function and marches states
//!   through a sample.
//! * [`oracle`] collects the closed-form results used to check the engine.
//! * [`scenarios`] runs the named end-to-end experiments.
//! * [`verify`] is the oracle-versus-engine acceptance sweep.
//!
//! Conventions: ħ = 1, quadratures ordered (X₁, P₁, X₂, P₂, …) and the vacuum
//! has Var(X) = Var(P) = 1/2.

// NaN must fail validation, so guards are written as `!(x >= lo)`.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod gaussian;
pub mod medium;
pub mod oracle;
pub mod scenarios;
pub mod verify;

pub use error::{Error, Result};
pub use gaussian::{ComplexTransmission, GaussianState, QuadTerm, Quadrature, SymplecticTransform};
pub use medium::{
    derive_effective, propagate, swap_sample, transfer_function, validate_adiabatic,
    AdiabaticReport, DetuningProfile, EffectiveParams, PropagationGrid, RawAtomParams, Snapshot,
};
pub use scenarios::{InputState, ScenarioConfig, ScenarioKind, ScenarioReport};
