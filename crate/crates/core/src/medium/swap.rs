use crate::error::Result;
use crate::gaussian::GaussianState;

/// Infinite-optical-depth limit of the beam-splitter coupling between a
/// light mode and a spin-wave mode: the two modes exchange their states,
/// including every correlation with the rest of the system.
pub fn swap_sample(
    state: &GaussianState,
    light_mode: &str,
    atom_mode: &str,
) -> Result<GaussianState> {
    state.swap_modes(light_mode, atom_mode)
}
