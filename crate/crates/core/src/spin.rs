//! Spin-1/2 operators and scenario builders for a particle in a magnetic
//! field along z: `H(t) = −γB(t)·S_z`, with either the static observable
//! `A = S_x` or the explicitly time-dependent `A(t) = S_x + (t/τ)·S_y`.
//!
//! Each scenario also carries closed-form left- and right-hand sides of its
//! uncertainty relation, so the generic evaluation pipeline can be checked
//! against hand-derived expressions.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::dynamics::{HamiltonianSchedule, OperatorSchedule, PhysicalConstants, Waveform};
use crate::error::{Error, Result};
use crate::operators::{expectation, variance, HermitianOperator, PureState};

/// The spin-1/2 operator triple `S_k = (ħ/2)·σ_k` in the standard basis
/// `|+z⟩ = (1, 0)`, `|−z⟩ = (0, 1)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinOperators {
    pub sx: HermitianOperator,
    pub sy: HermitianOperator,
    pub sz: HermitianOperator,
}

/// Build `(S_x, S_y, S_z)` for the given ħ. The triple satisfies the cyclic
/// commutation relations `[S_x, S_y] = iħ·S_z` and permutations.
pub fn spin_operators(hbar: f64) -> SpinOperators {
    assert!(hbar.is_finite() && hbar > 0.0, "hbar must be positive");
    let h = 0.5 * hbar;
    let zero = Complex64::new(0.0, 0.0);
    let sx = HermitianOperator::from_rows(&[
        vec![zero, Complex64::new(h, 0.0)],
        vec![Complex64::new(h, 0.0), zero],
    ])
    .unwrap();
    let sy = HermitianOperator::from_rows(&[
        vec![zero, Complex64::new(0.0, -h)],
        vec![Complex64::new(0.0, h), zero],
    ])
    .unwrap();
    let sz = HermitianOperator::from_rows(&[
        vec![Complex64::new(h, 0.0), zero],
        vec![zero, Complex64::new(-h, 0.0)],
    ])
    .unwrap();
    SpinOperators { sx, sy, sz }
}

/// Spin-1/2 in a z-axis field with the static observable `A = S_x`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinHalfScenario {
    constants: PhysicalConstants,
    field: Waveform,
}

impl SpinHalfScenario {
    pub fn new(constants: PhysicalConstants, field: Waveform) -> Result<Self> {
        constants.validate()?;
        field.validate()?;
        Ok(Self { constants, field })
    }

    pub fn constants(&self) -> &PhysicalConstants {
        &self.constants
    }

    pub fn field(&self) -> &Waveform {
        &self.field
    }

    pub fn spin(&self) -> SpinOperators {
        spin_operators(self.constants.hbar)
    }

    /// `H(t) = −γB(t)·S_z` as a single-term schedule.
    pub fn hamiltonian(&self) -> HamiltonianSchedule {
        let sz = self.spin().sz.scaled(-self.constants.gamma);
        OperatorSchedule::new(vec![(self.field.clone(), sz)]).expect("single well-formed term")
    }

    /// The observable under study, `A = S_x`.
    pub fn observable(&self) -> HermitianOperator {
        self.spin().sx
    }
}

/// Extension of [`SpinHalfScenario`] with `A(t) = S_x + (t/τ)·S_y`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExplicitTimeScenario {
    base: SpinHalfScenario,
    tau: f64,
}

impl ExplicitTimeScenario {
    pub fn new(base: SpinHalfScenario, tau: f64) -> Result<Self> {
        if !(tau.is_finite() && tau > 0.0) {
            return Err(Error::InvalidConstant(format!("tau must be positive, got {tau}")));
        }
        Ok(Self { base, tau })
    }

    pub fn base(&self) -> &SpinHalfScenario {
        &self.base
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn hamiltonian(&self) -> HamiltonianSchedule {
        self.base.hamiltonian()
    }

    /// `A(t) = S_x + (t/τ)·S_y`: constant coefficient on `S_x`, ramp on `S_y`.
    pub fn observable_schedule(&self) -> OperatorSchedule {
        let spin = self.base.spin();
        OperatorSchedule::new(vec![
            (Waveform::constant(1.0), spin.sx),
            (Waveform::ramp(1.0 / self.tau, 0.0), spin.sy),
        ])
        .expect("two well-formed terms")
    }
}

/// Closed forms for the static scenario at time `t`:
/// `lhs = |γB(t)|·ΔS_x·ΔS_y` and `rhs = (|γħB(t)|/2)·|⟨S_z⟩|`.
pub fn static_closed_forms(
    s: &SpinHalfScenario,
    t: f64,
    psi: &PureState,
) -> Result<(f64, f64)> {
    if psi.dim() != 2 {
        return Err(Error::Dimension { expected: 2, found: psi.dim() });
    }
    let spin = s.spin();
    let gamma_b = s.constants().gamma * s.field().value(t)?;
    let delta_sx = variance(&spin.sx, psi)?.sqrt();
    let delta_sy = variance(&spin.sy, psi)?.sqrt();
    let mean_sz = expectation(&spin.sz, psi)?;
    let lhs = gamma_b.abs() * delta_sx * delta_sy;
    let rhs = 0.5 * (gamma_b * s.constants().hbar).abs() * mean_sz.abs();
    Ok((lhs, rhs))
}

/// Closed form of the explicit-time bound at time `t`:
/// `bracket = 1/τ + γB(t)(1 + t²/τ²)` and
/// `rhs = (ħ/2)·|⟨S_z⟩|·|bracket|`. Returns `(rhs, bracket)`.
pub fn timedep_closed_forms(
    s: &ExplicitTimeScenario,
    t: f64,
    psi: &PureState,
) -> Result<(f64, f64)> {
    if psi.dim() != 2 {
        return Err(Error::Dimension { expected: 2, found: psi.dim() });
    }
    let constants = s.base().constants();
    let tau = s.tau();
    let gamma_b = constants.gamma * s.base().field().value(t)?;
    let bracket = 1.0 / tau + gamma_b * (1.0 + (t / tau) * (t / tau));
    let mean_sz = expectation(&s.base().spin().sz, psi)?;
    let rhs = 0.5 * constants.hbar * mean_sz.abs() * bracket.abs();
    Ok((rhs, bracket))
}

/// Either spin scenario, for operations defined on both.
#[derive(Debug, Clone, PartialEq)]
pub enum SpinScenario {
    Static(SpinHalfScenario),
    ExplicitTime(ExplicitTimeScenario),
}

/// Result of cancelling the common factor from both sides of a spin
/// scenario's relation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReductionOutcome {
    /// `ΔS_x·ΔS_y` after cancellation (direct closed form when degenerate).
    pub reduced_lhs: f64,
    /// `(ħ/2)·|⟨S_z⟩|` after cancellation (direct closed form when degenerate).
    pub reduced_rhs: f64,
    /// The cancelled factor: `|γB(t)|` for the static scenario,
    /// `|1/τ + γB(0)|` for the explicit-time scenario at `t = 0`.
    pub factor: f64,
    /// The factor (or the full left-hand side) vanished, so the cancellation
    /// argument does not apply and no division was performed.
    pub degenerate: bool,
}

/// Divide both sides of the scenario's relation by their common factor,
/// recovering the standard spin uncertainty relation
/// `ΔS_x·ΔS_y ≥ (ħ/2)|⟨S_z⟩|`.
///
/// For the explicit-time scenario the cancellation is only exact at `t = 0`,
/// where the factor is `|1/τ + γB(0)|`; the `t` argument selects the field
/// evaluation point for the static scenario. When the factor vanishes
/// (within an absolute guard of `1e-12`) the outcome is flagged degenerate,
/// no division is performed, and the reduced sides are reported directly
/// from their closed forms.
pub fn reduction_check(s: &SpinScenario, t: f64, psi: &PureState) -> Result<ReductionOutcome> {
    if psi.dim() != 2 {
        return Err(Error::Dimension { expected: 2, found: psi.dim() });
    }
    let (base, factor, eval_t) = match s {
        SpinScenario::Static(scenario) => {
            let factor = (scenario.constants().gamma * scenario.field().value(t)?).abs();
            (scenario, factor, t)
        }
        SpinScenario::ExplicitTime(scenario) => {
            let constants = scenario.base().constants();
            let gamma_b0 = constants.gamma * scenario.base().field().value(0.0)?;
            (scenario.base(), (1.0 / scenario.tau() + gamma_b0).abs(), 0.0)
        }
    };

    let spin = base.spin();
    let delta_sx = variance(&spin.sx, psi)?.sqrt();
    let delta_sy = variance(&spin.sy, psi)?.sqrt();
    let mean_sz = expectation(&spin.sz, psi)?;
    let direct_lhs = delta_sx * delta_sy;
    let direct_rhs = 0.5 * base.constants().hbar * mean_sz.abs();

    if factor < 1e-12 {
        return Ok(ReductionOutcome {
            reduced_lhs: direct_lhs,
            reduced_rhs: direct_rhs,
            factor,
            degenerate: true,
        });
    }

    // Perform the actual cancellation on the full relation sides.
    let (full_lhs, full_rhs) = match s {
        SpinScenario::Static(scenario) => {
            let report = crate::bounds::evaluate_static(
                &scenario.hamiltonian().at(eval_t)?,
                &scenario.observable(),
                psi,
                scenario.constants().hbar,
            )?;
            (report.lhs, report.rhs_comm)
        }
        SpinScenario::ExplicitTime(scenario) => {
            let report = crate::bounds::evaluate_timedep(
                &scenario.observable_schedule(),
                &scenario.hamiltonian(),
                0.0,
                psi,
                scenario.base().constants().hbar,
            )?;
            (report.lhs, report.rhs_comm)
        }
    };

    Ok(ReductionOutcome {
        reduced_lhs: full_lhs / factor,
        reduced_rhs: full_rhs / factor,
        factor,
        degenerate: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{evaluate_static, evaluate_timedep, DEGENERATE_LHS_TOL};
    use crate::operators::{commutator, complex_expectation};
    use approx::assert_abs_diff_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn constants(hbar: f64, gamma: f64) -> PhysicalConstants {
        PhysicalConstants::new(hbar, gamma, None).unwrap()
    }

    #[test]
    fn cyclic_commutation_relations() {
        for hbar in [0.5, 1.0, 2.0] {
            let s = spin_operators(hbar);
            let i_hbar = c(0.0, hbar);
            let xy = commutator(s.sx.matrix(), s.sy.matrix()).unwrap();
            assert!(xy.max_abs_diff(&s.sz.matrix().scaled(i_hbar)).unwrap() <= 1e-14);
            let zx = commutator(s.sz.matrix(), s.sx.matrix()).unwrap();
            assert!(zx.max_abs_diff(&s.sy.matrix().scaled(i_hbar)).unwrap() <= 1e-14);
            let zy = commutator(s.sz.matrix(), s.sy.matrix()).unwrap();
            assert!(zy.max_abs_diff(&s.sx.matrix().scaled(-i_hbar)).unwrap() <= 1e-14);
        }
    }

    #[test]
    fn sz_at_hbar_two_is_diag_one_minus_one() {
        let s = spin_operators(2.0);
        assert_eq!(s.sz.matrix().entry(0, 0), c(1.0, 0.0));
        assert_eq!(s.sz.matrix().entry(1, 1), c(-1.0, 0.0));
        assert_eq!(s.sz.matrix().entry(0, 1), c(0.0, 0.0));
    }

    #[test]
    fn static_closed_forms_examples() {
        let psi = PureState::plus_z();

        let s = SpinHalfScenario::new(constants(1.0, 1.0), Waveform::constant(1.0)).unwrap();
        let (lhs, rhs) = static_closed_forms(&s, 0.0, &psi).unwrap();
        assert_abs_diff_eq!(lhs, 0.25, epsilon = 1e-14);
        assert_abs_diff_eq!(rhs, 0.25, epsilon = 1e-14);

        let s = SpinHalfScenario::new(constants(1.0, 1.0), Waveform::constant(0.0)).unwrap();
        let (lhs, rhs) = static_closed_forms(&s, 3.0, &PureState::plus_y()).unwrap();
        assert_eq!((lhs, rhs), (0.0, 0.0));

        let s = SpinHalfScenario::new(constants(1.0, 2.0), Waveform::sinusoid(1.0, 1.0, 0.0))
            .unwrap();
        let (lhs, rhs) = static_closed_forms(&s, std::f64::consts::FRAC_PI_2, &psi).unwrap();
        assert_abs_diff_eq!(lhs, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(rhs, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn static_closed_forms_agree_with_generic_pipeline() {
        let s = SpinHalfScenario::new(constants(0.5, 1.7), Waveform::sinusoid(0.8, 1.3, 0.2))
            .unwrap();
        let states = [
            PureState::plus_z(),
            PureState::plus_y(),
            PureState::normalized(vec![c(0.6, 0.3), c(-0.2, 0.7)]).unwrap(),
        ];
        for t in [0.0, 0.7, 1.9] {
            let h_t = s.hamiltonian().at(t).unwrap();
            for psi in &states {
                let (lhs, rhs) = static_closed_forms(&s, t, psi).unwrap();
                let report = evaluate_static(&h_t, &s.observable(), psi, 0.5).unwrap();
                assert!((lhs - report.lhs).abs() <= 1e-10 * report.lhs.max(1.0));
                assert!((rhs - report.rhs_comm).abs() <= 1e-10 * report.rhs_comm.max(1.0));
            }
        }
    }

    #[test]
    fn timedep_closed_forms_examples() {
        let psi = PureState::plus_z();
        let base = SpinHalfScenario::new(constants(1.0, 1.0), Waveform::constant(1.0)).unwrap();
        let s = ExplicitTimeScenario::new(base, 1.0).unwrap();

        let (rhs, bracket) = timedep_closed_forms(&s, 0.0, &psi).unwrap();
        assert_abs_diff_eq!(bracket, 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(rhs, 0.5, epsilon = 1e-14);

        let (rhs, bracket) = timedep_closed_forms(&s, 1.0, &psi).unwrap();
        assert_abs_diff_eq!(bracket, 3.0, epsilon = 1e-14);
        assert_abs_diff_eq!(rhs, 0.75, epsilon = 1e-14);

        let free = SpinHalfScenario::new(constants(1.0, 0.0), Waveform::constant(5.0)).unwrap();
        let s = ExplicitTimeScenario::new(free, 1.0).unwrap();
        let (rhs, bracket) = timedep_closed_forms(&s, 0.0, &psi).unwrap();
        assert_abs_diff_eq!(bracket, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(rhs, 0.25, epsilon = 1e-14);
    }

    #[test]
    fn timedep_closed_forms_agree_with_generic_pipeline() {
        let base = SpinHalfScenario::new(constants(1.0, 0.9), Waveform::sinusoid(1.1, 0.7, 0.3))
            .unwrap();
        let s = ExplicitTimeScenario::new(base, 1.4).unwrap();
        let states = [
            PureState::plus_z(),
            PureState::normalized(vec![c(0.9, -0.1), c(0.3, 0.2)]).unwrap(),
        ];
        for t in [0.0, 0.6, 1.8, 3.1] {
            for psi in &states {
                let (rhs, _) = timedep_closed_forms(&s, t, psi).unwrap();
                let report = evaluate_timedep(
                    &s.observable_schedule(),
                    &s.hamiltonian(),
                    t,
                    psi,
                    1.0,
                )
                .unwrap();
                assert!(
                    (rhs - report.rhs_comm).abs() <= 1e-10 * report.rhs_comm.max(1.0),
                    "t = {t}: closed {rhs} vs pipeline {}",
                    report.rhs_comm
                );
            }
        }
    }

    #[test]
    fn heisenberg_derivative_matches_gamma_b_sy() {
        let s = SpinHalfScenario::new(constants(1.0, 1.3), Waveform::sinusoid(0.9, 1.1, 0.4))
            .unwrap();
        let spin = s.spin();
        for t in [0.0, 0.5, 1.3, 2.9] {
            let h_t = s.hamiltonian().at(t).unwrap();
            let d = crate::dynamics::heisenberg_derivative(&h_t, &s.observable(), 1.0).unwrap();
            let gamma_b = 1.3 * s.field().value(t).unwrap();
            let expected = spin.sy.scaled(gamma_b);
            assert!(d.matrix().max_abs_diff(expected.matrix()).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn double_commutator_matches_closed_form() {
        let base = SpinHalfScenario::new(constants(1.0, 1.0), Waveform::sinusoid(1.0, 0.9, 0.1))
            .unwrap();
        let s = ExplicitTimeScenario::new(base, 1.3).unwrap();
        let spin = s.base().spin();
        for t in [0.0, 0.4, 1.1, 2.6] {
            let a_t = s.observable_schedule().at(t).unwrap();
            let h_t = s.hamiltonian().at(t).unwrap();
            let dc = crate::dynamics::double_commutator(&h_t, &a_t).unwrap();
            let gamma_b = s.base().field().value(t).unwrap();
            let scale = gamma_b * (1.0 + (t / 1.3) * (t / 1.3));
            let expected = spin.sz.scaled(scale);
            assert!(dc.matrix().max_abs_diff(expected.matrix()).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn explicit_derivative_commutator_is_time_independent() {
        // [A(t), ∂A/∂t] = (iħ/τ)·S_z for every t.
        for (hbar, tau) in [(1.0, 1.0), (2.0, 0.5), (0.5, 2.0)] {
            let base =
                SpinHalfScenario::new(constants(hbar, 1.0), Waveform::constant(1.0)).unwrap();
            let s = ExplicitTimeScenario::new(base, tau).unwrap();
            let sched = s.observable_schedule();
            let spin = s.base().spin();
            let expected = spin.sz.matrix().scaled(c(0.0, hbar / tau));
            for t in [0.0, 0.3, 1.0, 4.2] {
                let a_t = sched.at(t).unwrap();
                let da_t = sched.time_derivative_at(t).unwrap();
                let comm = commutator(a_t.matrix(), da_t.matrix()).unwrap();
                assert!(comm.max_abs_diff(&expected).unwrap() <= 1e-14);
            }
        }
    }

    #[test]
    fn reduction_of_the_static_relation() {
        let s = SpinHalfScenario::new(constants(1.0, 1.0), Waveform::constant(1.0)).unwrap();
        let outcome =
            reduction_check(&SpinScenario::Static(s.clone()), 0.0, &PureState::plus_z()).unwrap();
        assert!(!outcome.degenerate);
        assert_abs_diff_eq!(outcome.factor, 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(outcome.reduced_lhs, 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(outcome.reduced_rhs, 0.25, epsilon = 1e-12);

        let outcome =
            reduction_check(&SpinScenario::Static(s), 0.0, &PureState::plus_x()).unwrap();
        assert!(!outcome.degenerate);
        assert_abs_diff_eq!(outcome.reduced_lhs, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(outcome.reduced_rhs, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn reduction_degenerate_when_factor_vanishes() {
        // γB(0) = −1/τ makes the common factor vanish exactly.
        let base = SpinHalfScenario::new(constants(1.0, 1.0), Waveform::constant(-1.0)).unwrap();
        let s = ExplicitTimeScenario::new(base, 1.0).unwrap();
        let outcome =
            reduction_check(&SpinScenario::ExplicitTime(s), 0.0, &PureState::plus_z()).unwrap();
        assert!(outcome.degenerate);
        assert_eq!(outcome.factor, 0.0);
        // Direct closed forms are still reported.
        assert_abs_diff_eq!(outcome.reduced_lhs, 0.25, epsilon = 1e-12);
        assert_abs_diff_eq!(outcome.reduced_rhs, 0.25, epsilon = 1e-12);
    }

    #[test]
    fn reduction_satisfies_the_standard_relation() {
        let s = SpinHalfScenario::new(constants(1.0, 1.4), Waveform::sinusoid(1.0, 1.0, 0.7))
            .unwrap();
        let states = [
            PureState::plus_z(),
            PureState::plus_y(),
            PureState::normalized(vec![c(0.4, 0.5), c(0.7, -0.1)]).unwrap(),
        ];
        for t in [0.1, 0.9, 2.2] {
            for psi in &states {
                let outcome =
                    reduction_check(&SpinScenario::Static(s.clone()), t, psi).unwrap();
                if !outcome.degenerate {
                    assert!(outcome.reduced_lhs >= outcome.reduced_rhs - 1e-9);
                }
            }
        }
    }

    #[test]
    fn degenerate_scenario_report_agrees_with_reduction_guard() {
        // A state degenerate for the report is degenerate for the reduction
        // whenever the shared left-hand side vanishes.
        let s = SpinHalfScenario::new(constants(1.0, 1.0), Waveform::constant(1.0)).unwrap();
        let report = crate::bounds::evaluate_static(
            &s.hamiltonian().at(0.0).unwrap(),
            &s.observable(),
            &PureState::plus_x(),
            1.0,
        )
        .unwrap();
        assert!(report.degenerate);
        assert!(report.lhs < DEGENERATE_LHS_TOL);
        let ex =
            complex_expectation(s.spin().sz.matrix(), &PureState::plus_x()).unwrap();
        assert_abs_diff_eq!(ex.re, 0.0, epsilon = 1e-15);
    }
}
