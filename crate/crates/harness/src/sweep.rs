//! Single-point checks and time sweeps of a scenario's uncertainty relation.

use serde::{Deserialize, Serialize};

use qflux_core::{chain_diagnostics, ChainLink, PureState, UncertaintyReport};

use crate::config::{resolve_state, BuiltScenario, RunConfig};
use crate::error::Result;
use crate::exec::map_indexed;

/// One sweep row; `exp_Sz` is populated for spin scenarios only.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub t: f64,
    pub lhs: f64,
    pub rhs_comm: f64,
    pub rhs_cs: f64,
    pub slack: f64,
    #[serde(rename = "delta_A")]
    pub delta_a: f64,
    #[serde(rename = "delta_dAdt")]
    pub delta_dadt: f64,
    #[serde(rename = "exp_Sz")]
    pub exp_sz: Option<f64>,
    pub degenerate: bool,
}

impl TraceRow {
    pub fn from_report(report: &UncertaintyReport, exp_sz: Option<f64>) -> Self {
        Self {
            t: report.t,
            lhs: report.lhs,
            rhs_comm: report.rhs_comm,
            rhs_cs: report.rhs_cs,
            slack: report.slack,
            delta_a: report.delta_a,
            delta_dadt: report.delta_dadt,
            exp_sz,
            degenerate: report.degenerate,
        }
    }
}

/// Rows ordered by strictly increasing `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeTrace {
    pub rows: Vec<TraceRow>,
}

/// Result of a single-point `check` run.
#[derive(Debug, Clone, Serialize)]
pub struct CheckOutcome {
    pub report: UncertaintyReport,
    pub chain: Vec<ChainLink>,
    #[serde(rename = "exp_Sz")]
    pub exp_sz: Option<f64>,
}

impl CheckOutcome {
    /// The relation and every chain link hold within tolerance.
    pub fn passed(&self) -> bool {
        self.report.holds() && self.chain.iter().all(|link| link.holds)
    }
}

/// Evaluate the configured scenario at `config.t` with full diagnostics.
pub fn run_check(config: &RunConfig) -> Result<CheckOutcome> {
    let scenario = BuiltScenario::from_config(config)?;
    let psi = resolve_state(config, scenario.dim())?;
    let report = scenario.evaluate(config.t, &psi, config.constants.hbar)?;
    let chain = chain_diagnostics(&report);
    let exp_sz = scenario.exp_sz(&psi)?;
    Ok(CheckOutcome { report, chain, exp_sz })
}

/// Evaluate the scenario on the configured time grid. Rows may be computed
/// in parallel; they are assembled in grid order regardless.
pub fn run_sweep(config: &RunConfig) -> Result<TimeTrace> {
    let scenario = BuiltScenario::from_config(config)?;
    let psi = resolve_state(config, scenario.dim())?;
    let grid = config
        .time_grid
        .ok_or_else(|| crate::error::HarnessError::Config("time_grid: required".into()))?;
    let hbar = config.constants.hbar;

    let step = (grid.t_end - grid.t_start) / (grid.num_points - 1) as f64;
    let results: Vec<qflux_core::Result<TraceRow>> =
        map_indexed(grid.num_points as u64, |k| row_at(&scenario, &psi, grid.t_start, step, k, hbar));

    let mut rows = Vec::with_capacity(results.len());
    for row in results {
        rows.push(row?);
    }
    Ok(TimeTrace { rows })
}

fn row_at(
    scenario: &BuiltScenario,
    psi: &PureState,
    t_start: f64,
    step: f64,
    k: u64,
    hbar: f64,
) -> qflux_core::Result<TraceRow> {
    let t = t_start + step * k as f64;
    let report = scenario.evaluate(t, psi, hbar)?;
    let exp_sz = scenario.exp_sz(psi)?;
    Ok(TraceRow::from_report(&report, exp_sz))
}
