//! Named end-to-end experiments. Each returns per-(z, ω) observable
//! trajectories and a list of comparisons against [`crate::oracle`].

mod config;
mod report;
mod run;

pub use config::{
    InputState, ModeBasis, ScenarioConfig, ScenarioKind, IDLER, MIN_Z_STEPS, SIGNAL,
};
pub use report::{AtomRow, Check, ReportRow, ScenarioReport};
pub(crate) use run::{bd_to_physical, swap_stages};
pub use run::{
    convention_notes, gem_statistics, run, GemStatistics, BRIGHT_VARIANCE_TOL, GEM_PEAK_THRESHOLD,
    GEM_PLATEAU_TOL, PRESERVATION_TOL, SWAP_TOL, TERMINAL_TOL,
};
