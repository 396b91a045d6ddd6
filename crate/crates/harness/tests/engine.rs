//! Integration tests for the sweep, fuzz, and search engines.

use qflux_core::{PhysicalConstants, Waveform};
use qflux_harness::config::{
    FuzzSpec, GenericOperators, Mode, NamedState, RunConfig, SaturateSpec, Scenario, StateSpec,
    TimeGrid,
};
use qflux_harness::{find_min_slack, run_check, run_fuzz, run_sweep, HarnessError};

fn spin_config(mode: Mode, scenario: Scenario) -> RunConfig {
    RunConfig {
        mode,
        scenario,
        constants: PhysicalConstants {
            hbar: 1.0,
            gamma: 1.0,
            tau: if scenario == Scenario::ExplicitTimeSpin { Some(1.0) } else { None },
        },
        field_waveform: Some(Waveform::constant(1.0)),
        state: Some(StateSpec::Named(NamedState::PlusZ)),
        t: 0.0,
        time_grid: None,
        fuzz: None,
        saturate: None,
        operators: None,
        output: None,
    }
}

#[test]
fn static_sweep_with_constant_field_is_flat_and_saturating() {
    let mut config = spin_config(Mode::Sweep, Scenario::StaticSpin);
    config.time_grid = Some(TimeGrid { t_start: 0.0, t_end: 1.0, num_points: 11 });
    config.validate().unwrap();

    let trace = run_sweep(&config).unwrap();
    assert_eq!(trace.rows.len(), 11);
    let first = &trace.rows[0];
    assert!((first.lhs - 0.25).abs() < 1e-14);
    assert!((first.rhs_comm - 0.25).abs() < 1e-14);
    assert!(first.slack.abs() <= 1e-12);
    assert_eq!(first.exp_sz, Some(0.5));
    for row in &trace.rows[1..] {
        assert_eq!(row.lhs, first.lhs);
        assert_eq!(row.rhs_comm, first.rhs_comm);
        assert_eq!(row.slack, first.slack);
    }
    // Rows strictly increasing in t.
    for pair in trace.rows.windows(2) {
        assert!(pair[1].t > pair[0].t);
    }
}

#[test]
fn explicit_sweep_grows_quadratically() {
    // γ = B = τ = ħ = 1 in |+z⟩: rhs_comm(t) = (ħ/2)·|⟨S_z⟩|·(2 + t²) = (2 + t²)/4.
    let mut config = spin_config(Mode::Sweep, Scenario::ExplicitTimeSpin);
    config.time_grid = Some(TimeGrid { t_start: 0.0, t_end: 2.0, num_points: 21 });
    config.validate().unwrap();

    let trace = run_sweep(&config).unwrap();
    let mut previous = f64::NEG_INFINITY;
    for row in &trace.rows {
        let expected = (2.0 + row.t * row.t) / 4.0;
        assert!(
            (row.rhs_comm - expected).abs() <= 1e-12,
            "t = {}: rhs_comm = {}, expected {}",
            row.t,
            row.rhs_comm,
            expected
        );
        assert!(row.rhs_comm > previous, "monotone increase violated at t = {}", row.t);
        assert!(row.slack >= -1e-9 * row.lhs.max(1.0));
        previous = row.rhs_comm;
    }
}

#[test]
fn degenerate_sweep_rows_are_flagged_without_blowups() {
    let mut config = spin_config(Mode::Sweep, Scenario::ExplicitTimeSpin);
    config.state = Some(StateSpec::Named(NamedState::PlusX));
    config.time_grid = Some(TimeGrid { t_start: 0.0, t_end: 1.0, num_points: 5 });
    config.validate().unwrap();

    let trace = run_sweep(&config).unwrap();
    // A(0) = S_x, so |+x⟩ starts degenerate; later rows need not be. No row
    // may contain a non-finite value.
    assert!(trace.rows[0].degenerate);
    for row in &trace.rows {
        assert!(row.lhs.is_finite() && row.slack.is_finite());
        assert!(row.rhs_comm.is_finite());
    }
}

#[test]
fn check_reports_saturation_and_chain() {
    let config = spin_config(Mode::Check, Scenario::StaticSpin);
    config.validate().unwrap();
    let outcome = run_check(&config).unwrap();
    assert!(outcome.passed());
    assert!(outcome.report.saturated);
    assert_eq!(outcome.exp_sz, Some(0.5));
    assert_eq!(outcome.chain.len(), 3);
}

#[test]
fn saturation_search_finds_the_saturating_family() {
    let mut config = spin_config(Mode::Saturate, Scenario::StaticSpin);
    config.saturate =
        Some(SaturateSpec { restarts: 10, max_iterations: 500, target_slack: 1e-6, seed: 2024 });
    config.validate().unwrap();

    let (state, report) = find_min_slack(&config).unwrap();
    assert!(report.slack <= 1e-6, "slack {}", report.slack);
    assert!(!report.degenerate);

    // Deterministic: same config, same state, bitwise.
    let (state2, report2) = find_min_slack(&config).unwrap();
    assert_eq!(state.to_vec(), state2.to_vec());
    assert_eq!(report.slack, report2.slack);
}

#[test]
fn saturation_search_with_commuting_operators_is_honest() {
    // H = A: the bound is zero everywhere, so either every probe collapses
    // into the degenerate wall or the result honestly reports rhs = 0.
    let pauli_z = vec![
        vec![[1.0, 0.0], [0.0, 0.0]],
        vec![[0.0, 0.0], [-1.0, 0.0]],
    ];
    let config = RunConfig {
        mode: Mode::Saturate,
        scenario: Scenario::Generic,
        constants: PhysicalConstants { hbar: 1.0, gamma: 0.0, tau: None },
        field_waveform: None,
        state: None,
        t: 0.0,
        time_grid: None,
        fuzz: None,
        saturate: Some(SaturateSpec { restarts: 6, max_iterations: 200, target_slack: 1e-6, seed: 7 }),
        operators: Some(GenericOperators { hamiltonian: pauli_z.clone(), observable: pauli_z }),
        output: None,
    };
    config.validate().unwrap();

    match find_min_slack(&config) {
        Ok((_, report)) => {
            assert_eq!(report.rhs_comm, 0.0);
            assert!((report.slack - report.lhs).abs() <= 1e-12);
        }
        Err(HarnessError::NoNonDegenerateCandidate) => {}
        Err(other) => panic!("unexpected error: {other}"),
    }
}

#[cfg(feature = "parallel")]
#[test]
fn fuzz_content_is_worker_count_independent() {
    let config = RunConfig {
        mode: Mode::Fuzz,
        scenario: Scenario::Generic,
        constants: PhysicalConstants { hbar: 1.0, gamma: 0.0, tau: None },
        field_waveform: None,
        state: None,
        t: 0.0,
        time_grid: None,
        fuzz: Some(FuzzSpec { trials: 100, dim_min: 2, dim_max: 6, seed: 31337 }),
        saturate: None,
        operators: None,
        output: None,
    };
    config.validate().unwrap();

    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(|| run_fuzz(&config).unwrap());
    let many = rayon::ThreadPoolBuilder::new()
        .num_threads(4)
        .build()
        .unwrap()
        .install(|| run_fuzz(&config).unwrap());

    assert_eq!(single.trials, many.trials);
    assert_eq!(single.min_slack_seen, many.min_slack_seen);
    assert_eq!(single.violations, many.violations);
}

#[test]
fn sweep_of_a_haar_state_is_seeded() {
    let mut config = spin_config(Mode::Sweep, Scenario::StaticSpin);
    config.state = Some(StateSpec::HaarRandom { seed: 5 });
    config.time_grid = Some(TimeGrid { t_start: 0.0, t_end: 1.0, num_points: 3 });
    config.validate().unwrap();
    let a = run_sweep(&config).unwrap();
    let b = run_sweep(&config).unwrap();
    assert_eq!(a, b);
}
