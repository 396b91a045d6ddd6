//! Derivative-free saturation search: minimize the slack of a fixed
//! scenario's relation over pure states.
//!
//! States are parameterized by `2·dim` real numbers (re/im interleaved) and
//! normalized on evaluation; the global phase is irrelevant to every report
//! field, so the redundant directions are harmless to the simplex. Degenerate
//! probes (`lhs < 1e−12`) score infinity and can never be returned.

use num_complex::Complex64;

use qflux_core::{PureState, UncertaintyReport};

use crate::config::{BuiltScenario, RunConfig};
use crate::error::{HarnessError, Result};
use crate::exec::map_indexed;
use crate::sample::{child_seed, sample_haar_state};

const REFLECT: f64 = 1.0;
const EXPAND: f64 = 2.0;
const CONTRACT: f64 = 0.5;
const SHRINK: f64 = 0.5;
const SPREAD_TOL: f64 = 1e-13;
const INITIAL_STEP: f64 = 0.25;

/// Standard Nelder–Mead on `f` from `start`, returning the best vertex.
fn nelder_mead(f: &dyn Fn(&[f64]) -> f64, start: &[f64], max_iterations: usize) -> (Vec<f64>, f64) {
    let dim = start.len();
    let mut simplex: Vec<Vec<f64>> = Vec::with_capacity(dim + 1);
    simplex.push(start.to_vec());
    for i in 0..dim {
        let mut p = start.to_vec();
        p[i] += INITIAL_STEP;
        simplex.push(p);
    }
    let mut scores: Vec<f64> = simplex.iter().map(|p| f(p)).collect();

    for _ in 0..max_iterations {
        let mut order: Vec<usize> = (0..=dim).collect();
        order.sort_by(|&a, &b| scores[a].partial_cmp(&scores[b]).unwrap_or(std::cmp::Ordering::Equal));
        let best = order[0];
        let second_worst = order[dim - 1];
        let worst = order[dim];

        if scores[worst].is_finite()
            && scores[best].is_finite()
            && (scores[worst] - scores[best]).abs() < SPREAD_TOL
        {
            break;
        }

        // Centroid of everything but the worst vertex.
        let mut centroid = vec![0.0; dim];
        for &idx in &order[..dim] {
            for (c, x) in centroid.iter_mut().zip(&simplex[idx]) {
                *c += x;
            }
        }
        for c in centroid.iter_mut() {
            *c /= dim as f64;
        }

        let blend = |from: &[f64], toward: &[f64], factor: f64| -> Vec<f64> {
            from.iter().zip(toward).map(|(c, w)| c + factor * (c - w)).collect()
        };

        let reflected = blend(&centroid, &simplex[worst], REFLECT);
        let reflected_score = f(&reflected);

        if reflected_score < scores[best] {
            let expanded = blend(&centroid, &simplex[worst], EXPAND);
            let expanded_score = f(&expanded);
            if expanded_score < reflected_score {
                simplex[worst] = expanded;
                scores[worst] = expanded_score;
            } else {
                simplex[worst] = reflected;
                scores[worst] = reflected_score;
            }
            continue;
        }
        if reflected_score < scores[second_worst] {
            simplex[worst] = reflected;
            scores[worst] = reflected_score;
            continue;
        }

        let contracted = blend(&centroid, &simplex[worst], -CONTRACT);
        let contracted_score = f(&contracted);
        if contracted_score < scores[worst] {
            simplex[worst] = contracted;
            scores[worst] = contracted_score;
            continue;
        }

        // Shrink toward the best vertex.
        let best_point = simplex[best].clone();
        for &idx in &order[1..] {
            let shrunk: Vec<f64> = simplex[idx]
                .iter()
                .zip(&best_point)
                .map(|(x, b)| b + SHRINK * (x - b))
                .collect();
            simplex[idx] = shrunk;
            scores[idx] = f(&simplex[idx]);
        }
    }

    let best = scores
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| a.partial_cmp(b).unwrap_or(std::cmp::Ordering::Equal))
        .map(|(i, _)| i)
        .unwrap_or(0);
    (simplex[best].clone(), scores[best])
}

fn params_to_state(params: &[f64]) -> Option<PureState> {
    let norm_sq: f64 = params.iter().map(|x| x * x).sum();
    if !norm_sq.is_finite() || norm_sq < 1e-12 {
        return None;
    }
    let amps: Vec<Complex64> =
        params.chunks_exact(2).map(|pair| Complex64::new(pair[0], pair[1])).collect();
    PureState::normalized(amps).ok()
}

fn state_to_params(psi: &PureState) -> Vec<f64> {
    psi.to_vec().into_iter().flat_map(|z| [z.re, z.im]).collect()
}

struct Candidate {
    restart: usize,
    state: PureState,
    report: UncertaintyReport,
}

/// Search for the pure state minimizing the slack of the configured
/// scenario's relation at `config.t`, over `restarts` Haar-random starts of
/// `max_iterations` simplex steps each. Degenerate states are rejected as
/// candidates; if every probe is degenerate the search fails with
/// [`HarnessError::NoNonDegenerateCandidate`].
pub fn find_min_slack(config: &RunConfig) -> Result<(PureState, UncertaintyReport)> {
    let spec = config
        .saturate
        .ok_or_else(|| HarnessError::Config("saturate: required for saturate mode".into()))?;
    let scenario = BuiltScenario::from_config(config)?;
    let dim = scenario.dim();
    let hbar = config.constants.hbar;
    let t = config.t;

    // Fail fast if the scenario itself is broken (bad waveform domain etc.).
    scenario.evaluate(t, &sample_haar_state(dim, child_seed(spec.seed, u64::MAX)), hbar)?;

    let objective = |params: &[f64]| -> f64 {
        let Some(state) = params_to_state(params) else {
            return f64::INFINITY;
        };
        match scenario.evaluate(t, &state, hbar) {
            Ok(report) if !report.degenerate => report.slack,
            _ => f64::INFINITY,
        }
    };

    let candidates: Vec<Option<Candidate>> = map_indexed(spec.restarts as u64, |restart| {
        let start = state_to_params(&sample_haar_state(dim, child_seed(spec.seed, restart)));
        let (best_params, best_score) = nelder_mead(&objective, &start, spec.max_iterations);
        if !best_score.is_finite() {
            return None;
        }
        let state = params_to_state(&best_params)?;
        let report = scenario.evaluate(t, &state, hbar).ok()?;
        if report.degenerate {
            return None;
        }
        Some(Candidate { restart: restart as usize, state, report })
    });

    // Deterministic winner: minimal slack, ties broken by restart index.
    let mut best: Option<Candidate> = None;
    for candidate in candidates.into_iter().flatten() {
        best = match best {
            None => Some(candidate),
            Some(current) => {
                if candidate.report.slack < current.report.slack
                    || (candidate.report.slack == current.report.slack
                        && candidate.restart < current.restart)
                {
                    Some(candidate)
                } else {
                    Some(current)
                }
            }
        };
    }

    match best {
        Some(candidate) => Ok((candidate.state, candidate.report)),
        None => Err(HarnessError::NoNonDegenerateCandidate),
    }
}
