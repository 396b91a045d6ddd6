//! Evaluation of the uncertainty relation between an observable and its time
//! derivative: the left-hand product, both right-hand forms, and every
//! intermediate inequality of the derivation chain, packaged as a report.
//!
//! Two independent arithmetic routes produce the bound. The commutator route
//! evaluates `½|⟨[A, dA/dt]⟩|` from the derivative operator itself; the
//! double-commutator route assembles `(1/2ħ)|⟨i[A,[H,A]]⟩|` (plus the
//! explicit-derivative commutator in the time-dependent case). The two are
//! algebraically identical and the report invariants pin their numerical
//! agreement.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{heisenberg_derivative, total_derivative, HamiltonianSchedule, OperatorSchedule};
use crate::error::{Error, Result};
use crate::operators::{
    commutator, complex_expectation, fluctuation, sym_antisym_split, variance,
    HermitianOperator, PureState,
};

/// Below this left-hand side the relation is degenerate (both sides vanish)
/// and no saturation ratio is reported.
pub const DEGENERATE_LHS_TOL: f64 = 1e-12;

/// Relative slack tolerance: the inequality holds when
/// `slack ≥ −SLACK_REL_TOL · max(1, lhs)`.
pub const SLACK_REL_TOL: f64 = 1e-9;

/// Relative tolerance for agreement of the two bound routes.
pub const TWO_PATH_REL_TOL: f64 = 1e-10;

/// One `(state, time)` evaluation of the uncertainty relation with full chain
/// diagnostics. A plain value record with no references back to its inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UncertaintyReport {
    /// Evaluation time (zero for static evaluations).
    pub t: f64,
    /// `ΔA`.
    #[serde(rename = "delta_A")]
    pub delta_a: f64,
    /// `Δ(dA/dt)`.
    #[serde(rename = "delta_dAdt")]
    pub delta_dadt: f64,
    /// `ΔA · Δ(dA/dt)`.
    pub lhs: f64,
    /// Cauchy–Schwarz cross term `|⟨δA δ(dA/dt)⟩|`.
    pub rhs_cs: f64,
    /// Commutator bound `½|⟨[A, dA/dt]⟩|`.
    pub rhs_comm: f64,
    /// The same bound through the double-commutator route.
    pub rhs_double: f64,
    /// `½⟨{δA, δ(dA/dt)}⟩` (real part of the cross term).
    pub sym_part: f64,
    /// `|½⟨[δA, δ(dA/dt)]⟩|` (imaginary part of the cross term, modulus).
    pub antisym_part: f64,
    /// `lhs − rhs_comm`.
    pub slack: f64,
    /// `rhs_comm / lhs`; omitted when the instance is degenerate.
    pub saturation_ratio: Option<f64>,
    /// Both sides vanish (`lhs < DEGENERATE_LHS_TOL`); cancellation
    /// arguments do not apply.
    pub degenerate: bool,
    /// Equality holds within the slack tolerance (and the instance is not
    /// degenerate).
    pub saturated: bool,
}

impl UncertaintyReport {
    /// Absolute slack tolerance for this instance.
    pub fn slack_tolerance(&self) -> f64 {
        SLACK_REL_TOL * self.lhs.max(1.0)
    }

    /// Whether the relation holds within tolerance.
    pub fn holds(&self) -> bool {
        self.slack >= -self.slack_tolerance()
    }
}

fn assemble_report(
    t: f64,
    a: &HermitianOperator,
    dadt: &HermitianOperator,
    rhs_double: f64,
    psi: &PureState,
) -> Result<UncertaintyReport> {
    let delta_a = variance(a, psi)?.sqrt();
    let delta_dadt = variance(dadt, psi)?.sqrt();
    let lhs = delta_a * delta_dadt;

    let fluct_a = fluctuation(a, psi)?;
    let fluct_d = fluctuation(dadt, psi)?;
    let cross = complex_expectation(&fluct_a.matrix().matmul(fluct_d.matrix())?, psi)?;
    let rhs_cs = cross.norm();
    let (sym_part, antisym_part) = sym_antisym_split(&fluct_a, &fluct_d, psi)?;

    // Shift cancellation makes the commutator of the raw operators equal to
    // that of the fluctuations, so this route shares no arithmetic with the
    // cross term above.
    let comm = commutator(a.matrix(), dadt.matrix())?;
    let rhs_comm = 0.5 * complex_expectation(&comm, psi)?.norm();

    let slack = lhs - rhs_comm;
    let degenerate = lhs < DEGENERATE_LHS_TOL;
    let saturation_ratio = (!degenerate).then(|| rhs_comm / lhs);
    let saturated = !degenerate && slack.abs() <= SLACK_REL_TOL * lhs.max(1.0);

    Ok(UncertaintyReport {
        t,
        delta_a,
        delta_dadt,
        lhs,
        rhs_cs,
        rhs_comm,
        rhs_double,
        sym_part,
        antisym_part,
        slack,
        saturation_ratio,
        degenerate,
        saturated,
    })
}

/// Evaluate the relation for a static observable: `dA/dt = (i/ħ)[H, A]` and
/// the bound `ΔA·Δ(dA/dt) ≥ (1/2ħ)|⟨i[A,[H,A]]⟩|`.
pub fn evaluate_static(
    h: &HermitianOperator,
    a: &HermitianOperator,
    psi: &PureState,
    hbar: f64,
) -> Result<UncertaintyReport> {
    if h.dim() != a.dim() {
        return Err(Error::Dimension { expected: h.dim(), found: a.dim() });
    }
    let dadt = heisenberg_derivative(h, a, hbar)?;

    // Independent route: the i stays inside the modulus, exactly as the
    // bound is written.
    let double = crate::dynamics::double_commutator(h, a)?;
    let i_double = double.matrix().scaled(Complex64::new(0.0, 1.0));
    let rhs_double = complex_expectation(&i_double, psi)?.norm() / (2.0 * hbar);

    assemble_report(0.0, a, &dadt, rhs_double, psi)
}

/// Evaluate the relation for an observable with explicit time dependence at
/// time `t`: `dA/dt = ∂A/∂t + (i/ħ)[H, A]` and the bound
/// `½|⟨[A, ∂A/∂t] + (i/ħ)[A,[H,A]]⟩|`, assembled term by term.
pub fn evaluate_timedep(
    a: &OperatorSchedule,
    h: &HamiltonianSchedule,
    t: f64,
    psi: &PureState,
    hbar: f64,
) -> Result<UncertaintyReport> {
    if a.dim() != h.dim() {
        return Err(Error::Dimension { expected: a.dim(), found: h.dim() });
    }
    let a_t = a.at(t)?;
    let dadt = total_derivative(a, h, t, hbar)?;

    let explicit_comm = commutator(a_t.matrix(), a.time_derivative_at(t)?.matrix())?;
    let double = crate::dynamics::double_commutator(&h.at(t)?, &a_t)?;
    let z_explicit = complex_expectation(&explicit_comm, psi)?;
    let z_double = complex_expectation(double.matrix(), psi)?;
    let rhs_double = 0.5 * (z_explicit + Complex64::new(0.0, 1.0 / hbar) * z_double).norm();

    assemble_report(t, &a_t, &dadt, rhs_double, psi)
}

/// One link of the derivation chain with its numerical margin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainLink {
    pub name: &'static str,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    pub holds: bool,
}

/// The three links of the derivation chain: the Cauchy–Schwarz step, the
/// anticommutator drop, and the identity between the two bound routes.
pub fn chain_diagnostics(report: &UncertaintyReport) -> Vec<ChainLink> {
    let cs_margin = report.lhs - report.rhs_cs;
    let drop_margin = report.rhs_cs - report.rhs_comm;
    let route_margin = (report.rhs_comm - report.rhs_double).abs();
    vec![
        ChainLink {
            name: "cauchy_schwarz",
            lhs: report.lhs,
            rhs: report.rhs_cs,
            margin: cs_margin,
            holds: cs_margin >= -SLACK_REL_TOL * report.lhs.max(1.0),
        },
        ChainLink {
            name: "anticommutator_drop",
            lhs: report.rhs_cs,
            rhs: report.rhs_comm,
            margin: drop_margin,
            holds: drop_margin >= -SLACK_REL_TOL * report.rhs_cs.max(1.0),
        },
        ChainLink {
            name: "two_path_identity",
            lhs: report.rhs_comm,
            rhs: report.rhs_double,
            margin: route_margin,
            holds: route_margin <= TWO_PATH_REL_TOL * report.rhs_comm.max(1.0),
        },
    ]
}
