//! Oracle-versus-engine acceptance sweep.
//!
//! Each criterion drives the propagation engine directly and compares what
//! it produces with the closed forms in [`crate::oracle`] (or, for the
//! property suites, with the algebraic identities the types promise). The
//! sweep is deterministic: property suites draw from a fixed-seed ChaCha
//! stream and no criterion reduces across threads.

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gaussian::{
    symplectic_residual, ComplexTransmission, GaussianState, QuadTerm, SymplecticTransform,
    PHYSICALITY_TOL, SYMPLECTIC_TOL, VACUUM_VARIANCE,
};
use crate::medium::{
    march, Coupling, DetuningProfile, EffectiveParams, PropagationGrid, Snapshot, BRIGHT_LABEL,
    DARK_LABEL,
};
use crate::oracle;
use crate::scenarios::{bd_to_physical, gem_statistics, swap_stages, Check, ReportRow};

const SIGNAL: &str = "a";
const IDLER: &str = "b";
const GAMMA12: f64 = 1.0;
const PROPERTY_SEED: u64 = 0x0d51_5eed;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifyOptions {
    /// Multiplies the optical-depth rate used by the engine (never the
    /// oracle); 1 for a faithful run.
    pub kappa_scale: f64,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        Self { kappa_scale: 1.0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionOutcome {
    pub id: u32,
    pub name: &'static str,
    pub checks: Vec<Check>,
}

impl CriterionOutcome {
    pub fn pass(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.pass)
    }

    pub fn max_delta(&self) -> f64 {
        self.checks.iter().map(|c| c.delta).fold(0.0, f64::max)
    }
}

type CriterionFn = fn(&VerifyOptions) -> Result<Vec<Check>>;

const CRITERIA: [(u32, &str, CriterionFn); 9] = [
    (1, "OD preservation", od_preservation),
    (2, "Beer-law transmission", beer_law),
    (3, "bright-variance decay", bright_variance_decay),
    (4, "single-sample terminal state", single_sample_terminal),
    (5, "cascade TMSV generation", cascade_generation),
    (6, "intermediate photon numbers", intermediate_photons),
    (7, "gradient-echo trajectory", gem_trajectory),
    (8, "memory-swap equivalence", memory_swap_equivalence),
    (9, "property suites", property_suites),
];

/// Criteria 1–9, in order.
pub fn run_criteria(opts: &VerifyOptions) -> Vec<CriterionOutcome> {
    CRITERIA
        .par_iter()
        .map(|&(id, name, f)| CriterionOutcome {
            id,
            name,
            checks: f(opts).unwrap_or_else(|e| {
                vec![Check::at_most(format!("error: {e}"), f64::INFINITY, 0.0)]
            }),
        })
        .collect()
}

/// Criteria 1–9 followed by the thread-count independence check.
pub fn run_all(opts: &VerifyOptions) -> Vec<CriterionOutcome> {
    let mut outcomes = run_criteria(opts);
    outcomes.push(CriterionOutcome {
        id: 10,
        name: "determinism",
        checks: determinism(opts)
            .unwrap_or_else(|e| vec![Check::at_most(format!("error: {e}"), f64::INFINITY, 0.0)]),
    });
    outcomes
}

/// One line per criterion; with `verbose`, one indented line per check.
pub fn render(outcomes: &[CriterionOutcome], verbose: bool) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "{:<6} {:<4} {:<32} {:>12}",
        "result", "id", "criterion", "max |delta|"
    );
    for o in outcomes {
        let _ = writeln!(
            out,
            "{:<6} {:<4} {:<32} {:>12.3e}",
            if o.pass() { "PASS" } else { "FAIL" },
            o.id,
            o.name,
            o.max_delta()
        );
        if verbose {
            for c in &o.checks {
                let _ = writeln!(
                    out,
                    "         {} {:<44} value {:>14.8e}  expected {:>14.8e}  delta {:.3e}  tol {:.1e}",
                    if c.pass { "ok  " } else { "FAIL" },
                    c.name,
                    c.value,
                    c.expected,
                    c.delta,
                    c.tolerance
                );
            }
        }
    }
    let failed: Vec<String> = outcomes
        .iter()
        .filter(|o| !o.pass())
        .map(|o| format!("{} ({})", o.id, o.name))
        .collect();
    if failed.is_empty() {
        let _ = writeln!(out, "all {} criteria passed", outcomes.len());
    } else {
        let _ = writeln!(out, "failed criteria: {}", failed.join(", "));
    }
    out
}

fn engine(epsilon: f64, opts: &VerifyOptions) -> Result<EffectiveParams> {
    EffectiveParams::from_epsilon_kappa(epsilon, opts.kappa_scale)
}

fn single(
    input: &GaussianState,
    eff: &EffectiveParams,
    length: f64,
    steps: usize,
    omega: f64,
    coupling: Coupling,
) -> Result<Vec<Snapshot>> {
    let grid = PropagationGrid::new(length, steps, vec![omega])?;
    march(
        input,
        eff,
        GAMMA12,
        &grid,
        omega,
        &DetuningProfile::None,
        coupling,
    )
}

fn terminal(snaps: &[Snapshot]) -> &Snapshot {
    &snaps[snaps.len() - 1]
}

fn observe(s: &Snapshot) -> Result<ReportRow> {
    ReportRow::observe(1, 0.0, s.z, s.omega, &s.physical, &s.bogoliubov)
}

fn od_preservation(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for eps in [0.1, 0.3, 0.5, 0.7, 0.9] {
        let eff = engine(eps, opts)?;
        let input = GaussianState::tmsv(eps, (SIGNAL, IDLER))?;
        for omega in [0.0, 1.0, 5.0] {
            let snaps = single(&input, &eff, 10.0, 100, omega, Coupling::Direct)?;
            let reference = observe(&snaps[0])?.values();
            let mut dev: f64 = 0.0;
            for s in &snaps {
                dev = dev
                    .max((s.physical.cov() - input.cov()).amax())
                    .max((s.physical.mean() - input.mean()).amax());
                for (v, r) in observe(s)?.values().iter().zip(&reference).skip(4) {
                    dev = dev.max((v - r).abs());
                }
            }
            checks.push(Check::at_most(
                format!("eps={eps} omega={omega} deviation"),
                dev,
                1e-9,
            ));
        }
    }
    Ok(checks)
}

fn beer_law(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let eff = engine(0.5, opts)?;
    let input = GaussianState::vacuum(&[SIGNAL, IDLER])?;
    let mut checks = Vec::new();
    for (omega, factor, label) in [
        (0.0, 1.0, "omega=0 tau"),
        (GAMMA12, 0.5, "omega=gamma |tau|"),
    ] {
        let snaps = single(&input, &eff, 10.0, 200, omega, Coupling::Direct)?;
        let dev = snaps
            .iter()
            .map(|s| {
                if omega == 0.0 {
                    (s.transmission.amplitude() - (-s.z).exp()).norm()
                } else {
                    (s.transmission.modulus() - (-factor * s.z).exp()).abs()
                }
            })
            .fold(0.0, f64::max);
        checks.push(Check::at_most(label, dev, 1e-12));
    }
    Ok(checks)
}

fn bright_variance_decay(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let eps = 0.5;
    let eff = engine(eps, opts)?;
    let input = GaussianState::vacuum(&[SIGNAL, IDLER])?;
    let mut checks = Vec::new();
    for omega in [0.0, 1.0, 3.0] {
        let snaps = single(&input, &eff, 10.0, 500, omega, Coupling::Direct)?;
        let mut dev: f64 = 0.0;
        for s in &snaps {
            let got = s
                .bogoliubov
                .quad_combo_variance(&[QuadTerm::x(BRIGHT_LABEL, 1.0)])?;
            dev = dev.max((got - oracle::bright_variance(eps, s.z, omega / GAMMA12)?).abs());
        }
        checks.push(Check::at_most(
            format!("omega/gamma={omega} Var(X_B)"),
            dev,
            1e-9,
        ));
    }
    Ok(checks)
}

fn sum_diff(state: &GaussianState) -> Result<(f64, f64)> {
    Ok((
        state.quad_combo_variance(&[QuadTerm::x(SIGNAL, 1.0), QuadTerm::x(IDLER, 1.0)])?,
        state.quad_combo_variance(&[QuadTerm::x(SIGNAL, 1.0), QuadTerm::x(IDLER, -1.0)])?,
    ))
}

fn single_sample_terminal(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let eps = 0.5;
    let eff = engine(eps, opts)?;
    let input = GaussianState::vacuum(&[SIGNAL, IDLER])?;
    let snaps = single(&input, &eff, 20.0, 200, 0.0, Coupling::Direct)?;
    let last = terminal(&snaps);
    let (sum, diff) = sum_diff(&last.physical)?;
    let post = oracle::post_sample_variances(eps)?;
    Ok(vec![
        Check::close("Var(X_a+X_b)", sum, post.sum_var, 1e-6),
        Check::close("Var(X_a-X_b)", diff, post.diff_var, 1e-6),
        Check::at_most(
            "log-negativity B:D",
            last.bogoliubov
                .log_negativity(&[BRIGHT_LABEL], &[DARK_LABEL])?,
            1e-6,
        ),
        Check::close(
            "n_D",
            last.bogoliubov.mean_photon_number(DARK_LABEL)?,
            oracle::thermal_dark_mean(eps)?,
            1e-6,
        ),
    ])
}

fn cascade(
    eps: f64,
    length: f64,
    steps: usize,
    opts: &VerifyOptions,
) -> Result<(Snapshot, Snapshot)> {
    let eff = engine(eps, opts)?;
    let input = GaussianState::vacuum(&[SIGNAL, IDLER])?;
    let first = single(&input, &eff, length, steps, 0.0, Coupling::Direct)?;
    let mid = terminal(&first).clone();
    let second = single(&mid.physical, &eff, length, steps, 0.0, Coupling::Inverted)?;
    Ok((mid, terminal(&second).clone()))
}

fn cascade_generation(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut checks = Vec::new();
    for eps in [0.3, 0.5, 0.8] {
        let (_, last) = cascade(eps, 20.0, 200, opts)?;
        let (sum, diff) = sum_diff(&last.physical)?;
        let od = oracle::od_variances(eps)?;
        checks.push(Check::close(
            format!("eps={eps} Var(X_a+X_b)"),
            sum,
            od.sum_var,
            1e-5,
        ));
        checks.push(Check::close(
            format!("eps={eps} Var(X_a-X_b)"),
            diff,
            od.diff_var,
            1e-5,
        ));
        checks.push(Check::at_least(
            format!("eps={eps} purity"),
            last.physical.purity()?,
            1.0 - 1e-5,
        ));
        checks.push(Check::close(
            format!("eps={eps} log-negativity a:b"),
            last.physical.log_negativity(&[SIGNAL], &[IDLER])?,
            oracle::tmsv_log_negativity(eps)?,
            1e-5,
        ));
    }
    Ok(checks)
}

/// Between-sample state assembled by hand: bright vacuum, dark thermal,
/// mapped back with the inverse Bogoliubov matrix written out explicitly.
fn between_samples_by_hand(eps: f64) -> DMatrix<f64> {
    let n_dark = eps * eps / (1.0 - eps * eps);
    let bd = DMatrix::from_diagonal(&DVector::from_vec(vec![
        0.5,
        0.5,
        n_dark + 0.5,
        n_dark + 0.5,
    ]));
    let k = 1.0 / (1.0 - eps * eps).sqrt();
    #[rustfmt::skip]
    let inv = DMatrix::from_row_slice(4, 4, &[
        k,       0.0,      k * eps, 0.0,
        0.0,     k,        0.0,     -k * eps,
        k * eps, 0.0,      k,       0.0,
        0.0,     -k * eps, 0.0,     k,
    ]);
    &inv * bd * inv.transpose()
}

fn photons_from_cov(cov: &DMatrix<f64>, mode: usize) -> f64 {
    0.5 * (cov[(2 * mode, 2 * mode)] + cov[(2 * mode + 1, 2 * mode + 1)]) - VACUUM_VARIANCE
}

fn intermediate_photons(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let eps = 0.5;
    let (mid, last) = cascade(eps, 20.0, 200, opts)?;
    let by_hand = between_samples_by_hand(eps);
    let tmsv_n = oracle::tmsv_mean_photons(eps)?;
    Ok(vec![
        Check::close(
            "sample 1 n_a",
            mid.physical.mean_photon_number(SIGNAL)?,
            oracle::signal_photons_between_samples(eps)?,
            1e-6,
        ),
        Check::close(
            "sample 1 n_b",
            mid.physical.mean_photon_number(IDLER)?,
            oracle::idler_photons_between_samples(eps)?,
            1e-6,
        ),
        Check::close(
            "sample 1 n_a (covariance algebra)",
            mid.physical.mean_photon_number(SIGNAL)?,
            photons_from_cov(&by_hand, 0),
            1e-6,
        ),
        Check::close(
            "sample 1 n_b (covariance algebra)",
            mid.physical.mean_photon_number(IDLER)?,
            photons_from_cov(&by_hand, 1),
            1e-6,
        ),
        Check::close(
            "sample 2 n_a",
            last.physical.mean_photon_number(SIGNAL)?,
            tmsv_n,
            1e-6,
        ),
        Check::close(
            "sample 2 n_b",
            last.physical.mean_photon_number(IDLER)?,
            tmsv_n,
            1e-6,
        ),
    ])
}

fn gem_rows(
    eps: f64,
    beta_norm: f64,
    length: f64,
    steps: usize,
    opts: &VerifyOptions,
) -> Result<Vec<ReportRow>> {
    let eff = engine(eps, opts)?;
    let grid = PropagationGrid::new(length, steps, vec![0.0])?;
    let profile = DetuningProfile::Linear {
        beta: GAMMA12 / beta_norm,
    };
    let input = GaussianState::vacuum(&[SIGNAL, IDLER])?;
    march(
        &input,
        &eff,
        GAMMA12,
        &grid,
        0.0,
        &profile,
        Coupling::Direct,
    )?
    .iter()
    .map(observe)
    .collect()
}

fn gem_trajectory(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let (eps, beta_norm, length) = (0.5, 5.0, 100.0);
    let coarse = gem_rows(eps, beta_norm, length, 2000, opts)?;
    let fine = gem_rows(eps, beta_norm, length, 4000, opts)?;
    let traj: Vec<&ReportRow> = coarse.iter().collect();
    let stats = gem_statistics(&traj, length);
    let refinement = coarse
        .iter()
        .zip(fine.iter().step_by(2))
        .map(|(c, f)| (c.n_a - f.n_a).abs())
        .fold(0.0, f64::max);
    let beta_over_gamma = 1.0 / beta_norm;
    Ok(vec![
        Check::close("n_a(0)", coarse[0].n_a, 0.0, 1e-12),
        Check::at_least("peak n_a before L/2", stats.peak_before_resonance, 0.5),
        Check::close(
            "plateau n_a",
            stats.terminal,
            oracle::signal_photons_between_samples(eps)?,
            1e-3,
        ),
        Check::at_most(
            "|slope| over final 20%",
            stats.tail_slope,
            1e-4 * beta_over_gamma,
        ),
        Check::at_most("z_steps doubling change", refinement, 1e-3),
    ])
}

fn memory_swap_equivalence(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let eps = 0.5;
    let stages = swap_stages(eps)?;
    let full = bd_to_physical(&stages[stages.len() - 1], eps)?;
    let light = full.reduced(&[SIGNAL, IDLER])?;
    let (_, last) = cascade(eps, 30.0, 300, opts)?;
    Ok(vec![
        Check::at_most(
            "swap vs kappa L = 30 light covariance",
            (light.cov() - last.physical.cov()).amax(),
            1e-6,
        ),
        Check::close(
            "log-negativity S1:S2",
            full.log_negativity(&["S1"], &["S2"])?,
            3f64.log2(),
            1e-9,
        ),
    ])
}

const RANDOM_MODES: [&str; 4] = ["m0", "m1", "m2", "m3"];

fn random_symplectic(rng: &mut ChaCha8Rng, modes: usize) -> Result<DMatrix<f64>> {
    let labels = &RANDOM_MODES[..modes];
    let mut s = DMatrix::identity(2 * modes, 2 * modes);
    for _ in 0..6 {
        let i = rng.gen_range(0..modes);
        let j = (i + rng.gen_range(1..modes.max(2))) % modes;
        let (mi, mj) = (labels[i], labels[j]);
        let op = match (rng.gen_range(0..5), i != j) {
            (0, _) => SymplecticTransform::rotation(rng.gen_range(-3.2..3.2), mi)?,
            (1, _) => SymplecticTransform::single_mode_squeezer(rng.gen_range(-0.3..0.3), mi)?,
            (2, true) => SymplecticTransform::beam_splitter(rng.gen_range(-3.2..3.2), mi, mj)?,
            (3, true) => SymplecticTransform::two_mode_squeezer(rng.gen_range(-0.3..0.3), mi, mj)?,
            (4, true) => SymplecticTransform::bogoliubov(rng.gen_range(0.0..0.5), mi, mj)?,
            _ => SymplecticTransform::rotation(rng.gen_range(-3.2..3.2), mi)?,
        };
        s = op.embed(labels)? * s;
    }
    Ok(s)
}

fn random_state(rng: &mut ChaCha8Rng, modes: usize) -> Result<GaussianState> {
    let labels = &RANDOM_MODES[..modes];
    let diag: Vec<f64> = (0..modes)
        .flat_map(|_| {
            let v = VACUUM_VARIANCE + rng.gen_range(0.0..2.0);
            [v, v]
        })
        .collect();
    let s = random_symplectic(rng, modes)?;
    let cov = &s * DMatrix::from_diagonal(&DVector::from_vec(diag)) * s.transpose();
    let mean = DVector::from_fn(2 * modes, |_, _| rng.gen_range(-2.0..2.0));
    GaussianState::new(labels, mean, (&cov + cov.transpose()) * 0.5)
}

fn property_suites(_opts: &VerifyOptions) -> Result<Vec<Check>> {
    let mut rng = ChaCha8Rng::seed_from_u64(PROPERTY_SEED);

    let mut worst_residual: f64 = 0.0;
    for _ in 0..1000 {
        let modes = rng.gen_range(1..=4);
        worst_residual =
            worst_residual.max(symplectic_residual(&random_symplectic(&mut rng, modes)?));
    }

    let mut worst_shortfall: f64 = 0.0;
    for _ in 0..1000 {
        let modes = rng.gen_range(1..=4);
        let state = random_state(&mut rng, modes)?;
        let mode = RANDOM_MODES[rng.gen_range(0..modes)];
        let tau = ComplexTransmission::from_polar(
            rng.gen_range(0.0..=1.0),
            rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI),
        )?;
        let nu = state.transmit(mode, tau)?.min_symplectic_eigenvalue()?;
        worst_shortfall = worst_shortfall.max(VACUUM_VARIANCE - nu);
    }

    let mut worst_identity: f64 = 0.0;
    for _ in 0..100 {
        let eps = rng.gen_range(0.0..0.99);
        let od = oracle::od_variances(eps)?;
        worst_identity = worst_identity.max((od.product() - 1.0).abs());
        let right = oracle::post_sample_variances(eps)?;
        let middle =
            oracle::post_sample_variances_from_squeezing(oracle::squeezing_parameter(eps)?);
        worst_identity = worst_identity
            .max((right.sum_var - middle.sum_var).abs())
            .max((right.diff_var - middle.diff_var).abs() / right.diff_var.max(1.0));
    }

    Ok(vec![
        Check::at_most(
            "1000 random transforms: max |S W S^T - W|",
            worst_residual,
            SYMPLECTIC_TOL,
        ),
        Check::at_most(
            "1000 random channels: max (1/2 - nu_min)",
            worst_shortfall,
            PHYSICALITY_TOL,
        ),
        Check::at_most("100 random eps: oracle identities", worst_identity, 1e-12),
    ])
}

fn determinism(opts: &VerifyOptions) -> Result<Vec<Check>> {
    let pool = |n: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::InvalidInput(format!("thread pool: {e}")))
    };
    let serial = pool(1)?.install(|| run_criteria(opts));
    let parallel = pool(8)?.install(|| run_criteria(opts));
    let mismatches = serial
        .iter()
        .zip(&parallel)
        .filter(|(a, b)| format!("{a:?}") != format!("{b:?}"))
        .count();
    Ok(vec![Check::at_most(
        "criteria differing between 1 and 8 threads",
        mismatches as f64,
        0.0,
    )])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_transforms_are_symplectic() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let s = random_symplectic(&mut rng, 3).unwrap();
            assert!(symplectic_residual(&s) < SYMPLECTIC_TOL);
        }
    }

    #[test]
    fn hand_built_between_state_matches_oracle() {
        let cov = between_samples_by_hand(0.5);
        assert!((photons_from_cov(&cov, 0) - 4.0 / 9.0).abs() < 1e-14);
        assert!((photons_from_cov(&cov, 1) - 7.0 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn render_names_failures() {
        let outcomes = vec![CriterionOutcome {
            id: 2,
            name: "Beer-law transmission",
            checks: vec![Check::at_most("x", 1.0, 0.0)],
        }];
        let text = render(&outcomes, false);
        assert!(text.contains("FAIL"));
        assert!(text.contains("failed criteria: 2 (Beer-law transmission)"));
    }
}
