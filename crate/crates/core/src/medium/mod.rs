//! The Λ medium: effective couplings, the per-frequency transfer function,
//! slice-wise propagation and the idealised light/spin-wave swap.

mod params;
mod propagate;
mod swap;
mod transfer;

pub use params::{
    derive_effective, validate_adiabatic, validate_adiabatic_with, AdiabaticReport,
    EffectiveParams, RawAtomParams, DEFAULT_ADIABATIC_THRESHOLD,
};
pub use propagate::{
    march, propagate, Coupling, PropagationGrid, Snapshot, BRIGHT_LABEL, DARK_LABEL,
};
pub use swap::swap_sample;
pub use transfer::{transfer_function, DetuningProfile};
