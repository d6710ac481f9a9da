use odsim_core::scenarios::run;
use odsim_core::{Error, InputState, ScenarioConfig, ScenarioKind};

fn cfg(kind: ScenarioKind) -> ScenarioConfig {
    ScenarioConfig::defaults(kind)
}

#[test]
fn preservation_reports_no_evolution() {
    let mut c = cfg(ScenarioKind::Preservation);
    c.omega_over_gamma_list = vec![0.0, 1.0, 5.0];
    let report = run(&c).unwrap();
    assert_eq!(report.rows.len(), 3 * (c.z_steps + 1));
    assert!(report.pass(), "{:?}", report.checks);
    let first = &report.rows[0];
    for row in &report.rows {
        assert!((row.var_xa_plus_xb - first.var_xa_plus_xb).abs() < 1e-9);
        assert!((row.log_neg_ab - first.log_neg_ab).abs() < 1e-9);
    }
}

#[test]
fn preservation_at_zero_epsilon_is_identity() {
    let mut c = cfg(ScenarioKind::Preservation);
    c.epsilon = 0.0;
    let report = run(&c).unwrap();
    assert!(report.pass());
    for row in &report.rows {
        assert!((row.var_xa_plus_xb - 1.0).abs() < 1e-12);
        assert!(row.n_a.abs() < 1e-12);
    }
}

#[test]
fn coherent_bright_input_follows_beer_law() {
    let mut c = cfg(ScenarioKind::Preservation);
    c.input_state = InputState::Coherent {
        basis: odsim_core::scenarios::ModeBasis::Bogoliubov,
        amplitudes: [[1.0, 0.0], [0.0, 0.0]],
    };
    let report = run(&c).unwrap();
    let kappa_l = c.kappa_l;
    let last = report.rows.last().unwrap();
    assert!((last.amp_bright - (-kappa_l).exp()).abs() < 1e-12);
    assert!(last.amp_dark.abs() < 1e-12);
}

#[test]
fn cascade_terminal_is_tmsv() {
    let report = run(&cfg(ScenarioKind::Cascade)).unwrap();
    let t = report.terminal_rows()[0];
    assert!((t.var_xa_minus_xb - 1.0 / 3.0).abs() < 1e-6);
    assert!((t.var_xa_plus_xb - 3.0).abs() < 1e-6);
    assert!((t.purity - 1.0).abs() < 1e-6);
    assert!(report.max_oracle_delta().is_finite());
}

#[test]
fn resonant_scenarios_ignore_step_count() {
    for kind in [ScenarioKind::SingleSample, ScenarioKind::Cascade] {
        let mut coarse = cfg(kind);
        coarse.z_steps = 10;
        let mut fine = cfg(kind);
        fine.z_steps = 400;
        let a = run(&coarse).unwrap();
        let b = run(&fine).unwrap();
        let (ta, tb) = (a.terminal_rows()[0], b.terminal_rows()[0]);
        for (x, y) in ta.values().iter().zip(tb.values()).skip(4) {
            assert!((x - y).abs() < 1e-12, "{kind:?}: {x} vs {y}");
        }
    }
}

#[test]
fn gem_trajectory_shape() {
    let report = run(&cfg(ScenarioKind::Gem)).unwrap();
    let first = &report.rows[0];
    assert_eq!(first.n_a, 0.0);
    let peak = report.rows.iter().map(|r| r.n_a).fold(0.0, f64::max);
    assert!(peak > 0.5);
    let last = report.rows.last().unwrap();
    assert!((last.n_a - 4.0 / 9.0).abs() < 1e-3);
}

#[test]
fn memory_swap_entangles_the_samples() {
    let report = run(&cfg(ScenarioKind::MemorySwap)).unwrap();
    let last = report.rows.last().unwrap();
    let atoms = last.atoms.expect("memory swap rows carry atom columns");
    assert!((atoms.log_neg_s1_s2 - 3f64.log2()).abs() < 1e-9);
    assert!((last.log_neg_ab - 3f64.log2()).abs() < 1e-9);
    assert_eq!(report.columns().len(), last.values().len());
    assert!(report.pass(), "{:?}", report.checks);
}

#[test]
fn reports_are_deterministic() {
    for kind in ScenarioKind::ALL {
        let mut c = cfg(kind);
        c.omega_over_gamma_list = vec![0.0, 0.5, 2.0];
        assert_eq!(run(&c).unwrap(), run(&c).unwrap());
    }
}

#[test]
fn bad_configs_are_rejected() {
    let mut c = cfg(ScenarioKind::Cascade);
    c.epsilon = 1.2;
    assert!(matches!(run(&c), Err(Error::Unphysical(_))));

    let mut c = cfg(ScenarioKind::Gem);
    c.beta_norm = None;
    assert!(run(&c).is_err());

    let mut c = cfg(ScenarioKind::SingleSample);
    c.input_state = InputState::Tmsv;
    assert!(run(&c).is_err());
}
