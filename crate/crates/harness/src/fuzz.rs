//! Randomized fuzz campaigns over the uncertainty relation.
//!
//! Each trial derives `child_seed(seed, trial)` through the SplitMix64
//! finalizer, draws its instance from that seed alone, and records the slack.
//! Trials are independent, so campaigns parallelize without affecting
//! content: the report is assembled in trial order.

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use qflux_core::{
    evaluate_static, evaluate_timedep, HermitianOperator, OperatorSchedule, PhysicalConstants,
    PureState, SpinHalfScenario, UncertaintyReport, Waveform,
};
use rand::SeedableRng;

use crate::config::{RunConfig, Scenario};
use crate::error::{HarnessError, Result};
use crate::exec::{map_indexed, map_indexed_seq};
use crate::sample::{child_seed, next_seed, sample_haar_state, sample_hermitian, uniform, uniform_dim};

/// Serialized inputs of a violating trial, sufficient to replay it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FuzzInputs {
    Static {
        hamiltonian: Vec<Vec<[f64; 2]>>,
        observable: Vec<Vec<[f64; 2]>>,
        state: Vec<[f64; 2]>,
    },
    ExplicitSpin {
        gamma: f64,
        tau: f64,
        hbar: f64,
        field: Waveform,
        t: f64,
        state: Vec<[f64; 2]>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub trial: u64,
    pub seed: u64,
    pub dim: usize,
    pub min_slack: f64,
    pub inputs: FuzzInputs,
}

/// Campaign summary. `violations` is nonempty iff some trial produced
/// `slack < −1e−9·max(1, lhs)`.
#[derive(Debug, Clone, Serialize)]
pub struct FuzzReport {
    pub trials: u64,
    pub violations: Vec<Violation>,
    pub min_slack_seen: f64,
    pub wall_time: f64,
}

/// One evaluated fuzz trial, exposed so test suites can re-walk a campaign's
/// exact instances.
#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub trial: u64,
    pub child_seed: u64,
    pub dim: usize,
    pub report: UncertaintyReport,
    pub inputs: FuzzInputs,
}

fn matrix_pairs(op: &HermitianOperator) -> Vec<Vec<[f64; 2]>> {
    op.matrix()
        .to_rows()
        .into_iter()
        .map(|row| row.into_iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

fn state_pairs(psi: &PureState) -> Vec<[f64; 2]> {
    psi.to_vec().into_iter().map(|z| [z.re, z.im]).collect()
}

/// A random static instance: GUE-style `H`, `A` and a Haar state at a
/// dimension drawn uniformly from `[dim_min, dim_max]`, evaluated at ħ = 1.
pub fn static_trial(seed: u64, trial: u64, dim_min: usize, dim_max: usize) -> TrialOutcome {
    let child = child_seed(seed, trial);
    let mut rng = ChaCha8Rng::seed_from_u64(child);
    let dim = uniform_dim(&mut rng, dim_min, dim_max);
    let h_seed = next_seed(&mut rng);
    let a_seed = next_seed(&mut rng);
    let psi_seed = next_seed(&mut rng);

    let h = sample_hermitian(dim, h_seed, 1.0);
    let a = sample_hermitian(dim, a_seed, 1.0);
    let psi = sample_haar_state(dim, psi_seed);
    let report = evaluate_static(&h, &a, &psi, 1.0).expect("dimensions agree by construction");
    let inputs = FuzzInputs::Static {
        hamiltonian: matrix_pairs(&h),
        observable: matrix_pairs(&a),
        state: state_pairs(&psi),
    };
    TrialOutcome { trial, child_seed: child, dim, report, inputs }
}

/// A random explicit-time spin instance: `A(t) = S_x + (t/τ)S_y` under
/// `H = −γB(t)S_z` with random γ, τ, a sinusoid or ramp field, a Haar state,
/// and a uniform evaluation time.
pub fn explicit_spin_trial(seed: u64, trial: u64) -> TrialOutcome {
    let child = child_seed(seed, trial);
    let mut rng = ChaCha8Rng::seed_from_u64(child);

    let gamma = uniform(&mut rng, -3.0, 3.0);
    let tau = uniform(&mut rng, 0.1, 10.0);
    let field = if uniform(&mut rng, 0.0, 1.0) < 0.5 {
        Waveform::sinusoid(
            uniform(&mut rng, -2.0, 2.0),
            uniform(&mut rng, 0.1, 5.0),
            uniform(&mut rng, 0.0, std::f64::consts::TAU),
        )
    } else {
        Waveform::ramp(uniform(&mut rng, -1.0, 1.0), uniform(&mut rng, -2.0, 2.0))
    };
    let t = uniform(&mut rng, 0.0, 5.0);
    let psi_seed = next_seed(&mut rng);
    let psi = sample_haar_state(2, psi_seed);

    let hbar = 1.0;
    let constants = PhysicalConstants::new(hbar, gamma, Some(tau)).expect("valid draw");
    let base = SpinHalfScenario::new(constants, field.clone()).expect("valid draw");
    let scenario =
        qflux_core::ExplicitTimeScenario::new(base, tau).expect("tau positive by construction");
    let report = evaluate_timedep(
        &scenario.observable_schedule(),
        &scenario.hamiltonian(),
        t,
        &psi,
        hbar,
    )
    .expect("well-formed spin schedule");

    let inputs = FuzzInputs::ExplicitSpin { gamma, tau, hbar, field, t, state: state_pairs(&psi) };
    TrialOutcome { trial, child_seed: child, dim: 2, report, inputs }
}

fn campaign_trial(scenario: Scenario, seed: u64, trial: u64, dim_min: usize, dim_max: usize) -> TrialOutcome {
    match scenario {
        Scenario::ExplicitTimeSpin => explicit_spin_trial(seed, trial),
        _ => static_trial(seed, trial, dim_min, dim_max),
    }
}

fn assemble(trials: u64, outcomes: Vec<TrialOutcome>, wall_time: f64) -> FuzzReport {
    let mut min_slack_seen = f64::INFINITY;
    let mut violations = Vec::new();
    for outcome in outcomes {
        min_slack_seen = min_slack_seen.min(outcome.report.slack);
        if !outcome.report.holds() {
            violations.push(Violation {
                trial: outcome.trial,
                seed: outcome.child_seed,
                dim: outcome.dim,
                min_slack: outcome.report.slack,
                inputs: outcome.inputs,
            });
        }
    }
    FuzzReport { trials, violations, min_slack_seen, wall_time }
}

fn fuzz_with(config: &RunConfig, parallel: bool) -> Result<FuzzReport> {
    let spec = config
        .fuzz
        .ok_or_else(|| HarnessError::Config("fuzz: required for fuzz mode".into()))?;
    let scenario = config.scenario;
    let trial_fn =
        move |trial: u64| campaign_trial(scenario, spec.seed, trial, spec.dim_min, spec.dim_max);
    let start = std::time::Instant::now();
    let outcomes = if parallel {
        map_indexed(spec.trials, trial_fn)
    } else {
        map_indexed_seq(spec.trials, trial_fn)
    };
    Ok(assemble(spec.trials, outcomes, start.elapsed().as_secs_f64()))
}

/// Run the configured campaign with the default execution strategy
/// (parallel when the `parallel` feature is enabled).
pub fn run_fuzz(config: &RunConfig) -> Result<FuzzReport> {
    fuzz_with(config, true)
}

/// Run the configured campaign strictly sequentially. Content is identical
/// to [`run_fuzz`] for the same config.
pub fn run_fuzz_sequential(config: &RunConfig) -> Result<FuzzReport> {
    fuzz_with(config, false)
}

/// Rebuild the static operators of a violating trial for replay.
pub fn replay_static_inputs(inputs: &FuzzInputs) -> Option<(HermitianOperator, HermitianOperator, PureState)> {
    match inputs {
        FuzzInputs::Static { hamiltonian, observable, state } => {
            let to_matrix = |rows: &Vec<Vec<[f64; 2]>>| {
                let entries: Vec<Vec<Complex64>> = rows
                    .iter()
                    .map(|row| row.iter().map(|[re, im]| Complex64::new(*re, *im)).collect())
                    .collect();
                HermitianOperator::from_rows(&entries).ok()
            };
            let h = to_matrix(hamiltonian)?;
            let a = to_matrix(observable)?;
            let amps: Vec<Complex64> =
                state.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
            let psi = PureState::new(amps).ok()?;
            Some((h, a, psi))
        }
        FuzzInputs::ExplicitSpin { .. } => None,
    }
}

/// The constant-coefficient schedule pair for a static pair `(H, A)`, used
/// when a replayed instance needs the schedule interface.
pub fn constant_schedules(
    h: &HermitianOperator,
    a: &HermitianOperator,
) -> (OperatorSchedule, OperatorSchedule) {
    (OperatorSchedule::constant(a.clone()), OperatorSchedule::constant(h.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::{FuzzSpec, Mode};

    fn fuzz_config(scenario: Scenario, trials: u64, seed: u64) -> RunConfig {
        RunConfig {
            mode: Mode::Fuzz,
            scenario,
            constants: PhysicalConstants { hbar: 1.0, gamma: 0.0, tau: None },
            field_waveform: None,
            state: None,
            t: 0.0,
            time_grid: None,
            fuzz: Some(FuzzSpec { trials, dim_min: 2, dim_max: 5, seed }),
            saturate: None,
            operators: None,
            output: None,
        }
    }

    #[test]
    fn single_trial_campaign_has_one_sample() {
        let config = fuzz_config(Scenario::Generic, 1, 11);
        let report = run_fuzz(&config).unwrap();
        assert_eq!(report.trials, 1);
        assert!(report.violations.is_empty());
        assert!(report.min_slack_seen.is_finite());
        let outcome = static_trial(11, 0, 2, 5);
        assert_eq!(report.min_slack_seen, outcome.report.slack);
    }

    #[test]
    fn parallel_and_sequential_content_agree() {
        for scenario in [Scenario::Generic, Scenario::ExplicitTimeSpin] {
            let config = fuzz_config(scenario, 64, 23);
            let par = run_fuzz(&config).unwrap();
            let seq = run_fuzz_sequential(&config).unwrap();
            assert_eq!(par.trials, seq.trials);
            assert_eq!(par.violations, seq.violations);
            assert_eq!(par.min_slack_seen, seq.min_slack_seen);
        }
    }

    #[test]
    fn small_campaigns_have_no_violations() {
        let config = fuzz_config(Scenario::Generic, 300, 7);
        let report = run_fuzz(&config).unwrap();
        assert!(report.violations.is_empty(), "violations: {:?}", report.violations);
        assert!(report.min_slack_seen >= -1e-9);

        let config = fuzz_config(Scenario::ExplicitTimeSpin, 200, 7);
        let report = run_fuzz(&config).unwrap();
        assert!(report.violations.is_empty(), "violations: {:?}", report.violations);
    }

    #[test]
    fn trials_are_reproducible_from_child_seeds() {
        let a = static_trial(99, 5, 2, 6);
        let b = static_trial(99, 5, 2, 6);
        assert_eq!(a.child_seed, b.child_seed);
        assert_eq!(a.report, b.report);
        let (h, _, psi) = replay_static_inputs(&a.inputs).unwrap();
        assert_eq!(h.dim(), a.dim);
        assert_eq!(psi.dim(), a.dim);
        let c = explicit_spin_trial(99, 5);
        let d = explicit_spin_trial(99, 5);
        assert_eq!(c.report, d.report);
    }
}
