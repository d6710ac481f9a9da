//! Gaussian states, symplectic maps, the one-mode transmission channel and
//! the statistics built on them.

mod channel;
mod measures;
mod state;
mod symplectic;

pub use channel::{ComplexTransmission, TRANSMISSION_TOL};
pub use measures::symplectic_spectrum;
pub use state::{
    GaussianState, QuadTerm, Quadrature, PHYSICALITY_TOL, SYMMETRY_TOL, VACUUM_VARIANCE,
};
pub use symplectic::{omega, symplectic_residual, SymplecticTransform, SYMPLECTIC_TOL};
