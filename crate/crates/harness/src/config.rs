//! JSON run configuration and scenario construction.
//!
//! Unknown keys are a hard parse error: a typo in a physics parameter must
//! never be silently ignored.

use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use qflux_core::{
    evaluate_static, evaluate_timedep, expectation, ExplicitTimeScenario, HermitianOperator,
    PhysicalConstants, PureState, SpinHalfScenario, UncertaintyReport, Waveform,
};

use crate::error::{HarnessError, Result};
use crate::sample::sample_haar_state;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Check,
    Sweep,
    Fuzz,
    Saturate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    StaticSpin,
    ExplicitTimeSpin,
    Generic,
}

/// Initial state selection: a named spin-1/2 state, explicit amplitudes as
/// `[re, im]` pairs, or a seeded Haar-random draw.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateSpec {
    Named(NamedState),
    Amplitudes(Vec<[f64; 2]>),
    HaarRandom { seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum NamedState {
    #[serde(rename = "+z")]
    PlusZ,
    #[serde(rename = "-z")]
    MinusZ,
    #[serde(rename = "+x")]
    PlusX,
    #[serde(rename = "+y")]
    PlusY,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    pub t_start: f64,
    pub t_end: f64,
    pub num_points: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FuzzSpec {
    pub trials: u64,
    pub dim_min: usize,
    pub dim_max: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SaturateSpec {
    pub restarts: usize,
    pub max_iterations: usize,
    pub target_slack: f64,
    #[serde(default)]
    pub seed: u64,
}

/// Explicit operator matrices for the generic scenario, entries as
/// `[re, im]` pairs in row-major order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenericOperators {
    pub hamiltonian: Vec<Vec<[f64; 2]>>,
    pub observable: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSpec {
    pub format: OutputFormat,
    #[serde(default)]
    pub path: Option<PathBuf>,
}

impl Default for OutputSpec {
    fn default() -> Self {
        Self { format: OutputFormat::Json, path: None }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub mode: Mode,
    pub scenario: Scenario,
    #[serde(default = "default_constants")]
    pub constants: PhysicalConstants,
    #[serde(default)]
    pub field_waveform: Option<Waveform>,
    #[serde(default)]
    pub state: Option<StateSpec>,
    /// Evaluation time for `check` mode (and for saturation on
    /// time-dependent scenarios).
    #[serde(default)]
    pub t: f64,
    #[serde(default)]
    pub time_grid: Option<TimeGrid>,
    #[serde(default)]
    pub fuzz: Option<FuzzSpec>,
    #[serde(default)]
    pub saturate: Option<SaturateSpec>,
    #[serde(default)]
    pub operators: Option<GenericOperators>,
    #[serde(default)]
    pub output: Option<OutputSpec>,
}

fn default_constants() -> PhysicalConstants {
    PhysicalConstants { hbar: 1.0, gamma: 0.0, tau: None }
}

/// Read and validate a configuration file.
pub fn load_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)?;
    let config: RunConfig = serde_json::from_str(&text)
        .map_err(|e| HarnessError::Config(format!("{}: {e}", path.display())))?;
    config.validate()?;
    Ok(config)
}

impl RunConfig {
    pub fn validate(&self) -> Result<()> {
        self.constants.validate().map_err(HarnessError::Core)?;
        if let Some(waveform) = &self.field_waveform {
            waveform.validate().map_err(HarnessError::Core)?;
        }
        if let Some(StateSpec::Amplitudes(amps)) = &self.state {
            if amps.is_empty() {
                return Err(HarnessError::Config("state.amplitudes must be nonempty".into()));
            }
        }
        match self.scenario {
            Scenario::StaticSpin | Scenario::ExplicitTimeSpin => {
                if self.field_waveform.is_none() && self.mode != Mode::Fuzz {
                    return Err(HarnessError::Config(
                        "field_waveform: required for spin scenarios".into(),
                    ));
                }
                if self.scenario == Scenario::ExplicitTimeSpin
                    && self.mode != Mode::Fuzz
                    && self.constants.tau.is_none()
                {
                    return Err(HarnessError::Config(
                        "constants.tau: required for the explicit_time_spin scenario".into(),
                    ));
                }
            }
            Scenario::Generic => {
                if self.mode != Mode::Fuzz {
                    let ops = self.operators.as_ref().ok_or_else(|| {
                        HarnessError::Config(
                            "operators: the generic scenario requires explicit matrices".into(),
                        )
                    })?;
                    validate_matrix_shape("operators.hamiltonian", &ops.hamiltonian)?;
                    validate_matrix_shape("operators.observable", &ops.observable)?;
                    if ops.hamiltonian.len() != ops.observable.len() {
                        return Err(HarnessError::Config(
                            "operators: hamiltonian and observable must share a dimension".into(),
                        ));
                    }
                }
            }
        }
        match self.mode {
            Mode::Check => {
                if self.state.is_none() {
                    return Err(HarnessError::Config("state: required for check mode".into()));
                }
            }
            Mode::Sweep => {
                if self.state.is_none() {
                    return Err(HarnessError::Config("state: required for sweep mode".into()));
                }
                let grid = self
                    .time_grid
                    .ok_or_else(|| HarnessError::Config("time_grid: required for sweep mode".into()))?;
                if grid.num_points < 2 {
                    return Err(HarnessError::Config("time_grid.num_points: must be >= 2".into()));
                }
                if !(grid.t_start.is_finite() && grid.t_end.is_finite() && grid.t_end > grid.t_start)
                {
                    return Err(HarnessError::Config(
                        "time_grid: t_end must exceed t_start".into(),
                    ));
                }
            }
            Mode::Fuzz => {
                let fuzz = self
                    .fuzz
                    .ok_or_else(|| HarnessError::Config("fuzz: required for fuzz mode".into()))?;
                if fuzz.trials < 1 {
                    return Err(HarnessError::Config("fuzz.trials: must be >= 1".into()));
                }
                if fuzz.dim_min < 2 {
                    return Err(HarnessError::Config("fuzz.dim_min: must be >= 2".into()));
                }
                if fuzz.dim_max < fuzz.dim_min {
                    return Err(HarnessError::Config("fuzz.dim_max: must be >= dim_min".into()));
                }
                if self.scenario == Scenario::StaticSpin {
                    return Err(HarnessError::Config(
                        "fuzz mode supports the generic (random static instances) and \
                         explicit_time_spin (random spin configurations) scenarios"
                            .into(),
                    ));
                }
            }
            Mode::Saturate => {
                let sat = self.saturate.ok_or_else(|| {
                    HarnessError::Config("saturate: required for saturate mode".into())
                })?;
                if sat.restarts < 1 {
                    return Err(HarnessError::Config("saturate.restarts: must be >= 1".into()));
                }
                if sat.max_iterations < 1 {
                    return Err(HarnessError::Config(
                        "saturate.max_iterations: must be >= 1".into(),
                    ));
                }
                if !sat.target_slack.is_finite() {
                    return Err(HarnessError::Config(
                        "saturate.target_slack: must be finite".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Check that the config's declared mode matches the CLI subcommand.
    pub fn expect_mode(&self, mode: Mode) -> Result<()> {
        if self.mode == mode {
            Ok(())
        } else {
            Err(HarnessError::Config(format!(
                "config declares mode {:?} but the {:?} subcommand was invoked",
                self.mode, mode
            )))
        }
    }

    pub fn output(&self) -> OutputSpec {
        self.output.clone().unwrap_or_default()
    }
}

fn validate_matrix_shape(name: &str, rows: &[Vec<[f64; 2]>]) -> Result<()> {
    let dim = rows.len();
    if dim == 0 {
        return Err(HarnessError::Config(format!("{name}: must be nonempty")));
    }
    if rows.iter().any(|row| row.len() != dim) {
        return Err(HarnessError::Config(format!("{name}: must be square")));
    }
    Ok(())
}

fn matrix_from_pairs(rows: &[Vec<[f64; 2]>]) -> qflux_core::Result<HermitianOperator> {
    let entries: Vec<Vec<Complex64>> = rows
        .iter()
        .map(|row| row.iter().map(|[re, im]| Complex64::new(*re, *im)).collect())
        .collect();
    HermitianOperator::from_rows(&entries)
}

/// A scenario with its operators materialized.
#[derive(Debug, Clone)]
pub enum BuiltScenario {
    StaticSpin(SpinHalfScenario),
    ExplicitSpin(ExplicitTimeScenario),
    Generic { hamiltonian: HermitianOperator, observable: HermitianOperator },
}

impl BuiltScenario {
    pub fn from_config(config: &RunConfig) -> Result<Self> {
        match config.scenario {
            Scenario::StaticSpin => {
                let field = config.field_waveform.clone().ok_or_else(|| {
                    HarnessError::Config("field_waveform: required for spin scenarios".into())
                })?;
                Ok(BuiltScenario::StaticSpin(SpinHalfScenario::new(config.constants, field)?))
            }
            Scenario::ExplicitTimeSpin => {
                let field = config.field_waveform.clone().ok_or_else(|| {
                    HarnessError::Config("field_waveform: required for spin scenarios".into())
                })?;
                let tau = config.constants.tau.ok_or_else(|| {
                    HarnessError::Config("constants.tau: required for explicit_time_spin".into())
                })?;
                let base = SpinHalfScenario::new(config.constants, field)?;
                Ok(BuiltScenario::ExplicitSpin(ExplicitTimeScenario::new(base, tau)?))
            }
            Scenario::Generic => {
                let ops = config.operators.as_ref().ok_or_else(|| {
                    HarnessError::Config("operators: required for the generic scenario".into())
                })?;
                Ok(BuiltScenario::Generic {
                    hamiltonian: matrix_from_pairs(&ops.hamiltonian)?,
                    observable: matrix_from_pairs(&ops.observable)?,
                })
            }
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            BuiltScenario::StaticSpin(_) | BuiltScenario::ExplicitSpin(_) => 2,
            BuiltScenario::Generic { hamiltonian, .. } => hamiltonian.dim(),
        }
    }

    /// Evaluate the scenario's uncertainty relation at time `t`. Spin
    /// scenarios carry their own ħ; the generic scenario uses `hbar`.
    pub fn evaluate(&self, t: f64, psi: &PureState, hbar: f64) -> qflux_core::Result<UncertaintyReport> {
        match self {
            BuiltScenario::StaticSpin(s) => {
                let h_t = s.hamiltonian().at(t)?;
                let mut report = evaluate_static(&h_t, &s.observable(), psi, s.constants().hbar)?;
                report.t = t;
                Ok(report)
            }
            BuiltScenario::ExplicitSpin(s) => evaluate_timedep(
                &s.observable_schedule(),
                &s.hamiltonian(),
                t,
                psi,
                s.base().constants().hbar,
            ),
            BuiltScenario::Generic { hamiltonian, observable } => {
                let mut report = evaluate_static(hamiltonian, observable, psi, hbar)?;
                report.t = t;
                Ok(report)
            }
        }
    }

    /// `⟨S_z⟩` for spin scenarios; `None` for generic ones.
    pub fn exp_sz(&self, psi: &PureState) -> qflux_core::Result<Option<f64>> {
        let spin = match self {
            BuiltScenario::StaticSpin(s) => s.spin(),
            BuiltScenario::ExplicitSpin(s) => s.base().spin(),
            BuiltScenario::Generic { .. } => return Ok(None),
        };
        Ok(Some(expectation(&spin.sz, psi)?))
    }
}

/// Materialize the configured state at the scenario's dimension.
pub fn resolve_state(config: &RunConfig, dim: usize) -> Result<PureState> {
    let spec = config
        .state
        .as_ref()
        .ok_or_else(|| HarnessError::Config("state: required".into()))?;
    let state = match spec {
        StateSpec::Named(named) => {
            if dim != 2 {
                return Err(HarnessError::Config(format!(
                    "state.named: named states are 2-dimensional, scenario has dim {dim}"
                )));
            }
            match named {
                NamedState::PlusZ => PureState::plus_z(),
                NamedState::MinusZ => PureState::minus_z(),
                NamedState::PlusX => PureState::plus_x(),
                NamedState::PlusY => PureState::plus_y(),
            }
        }
        StateSpec::Amplitudes(pairs) => {
            let amps: Vec<Complex64> =
                pairs.iter().map(|[re, im]| Complex64::new(*re, *im)).collect();
            if amps.len() != dim {
                return Err(HarnessError::Config(format!(
                    "state.amplitudes: expected {dim} amplitudes, got {}",
                    amps.len()
                )));
            }
            PureState::normalized(amps).map_err(HarnessError::Core)?
        }
        StateSpec::HaarRandom { seed } => sample_haar_state(dim, *seed),
    };
    Ok(state)
}
