//! Operator-algebra core for uncertainty bounds between quantum observables
//! and their time derivatives.
//!
//! The crate is organized around four layers:
//!
//! - [`operators`]: dense complex matrices, certified Hermitian operators,
//!   normalized pure states, and the expectation/variance/commutator algebra.
//! - [`dynamics`]: time-dependent operator schedules built from analytic
//!   waveforms, Heisenberg-picture derivatives, and an RK4 state propagator.
//! - [`bounds`]: evaluation of the uncertainty relation
//!   `ΔA · Δ(dA/dt) ≥ ½|⟨[A, dA/dt]⟩|` together with every intermediate link
//!   of its derivation chain, packaged as a diagnosable report.
//! - [`spin`]: spin-1/2 scenario builders (`H(t) = −γB(t)·S_z`) with
//!   closed-form left- and right-hand sides for golden tests.
//!
//! All types are immutable after construction and all operations are pure
//! functions, so everything here is safe to evaluate from parallel workers.

pub mod bounds;
pub mod dynamics;
pub mod error;
pub mod operators;
pub mod spin;

pub use bounds::{
    chain_diagnostics, evaluate_static, evaluate_timedep, ChainLink, UncertaintyReport,
};
pub use dynamics::{
    double_commutator, heisenberg_derivative, propagate_state, total_derivative,
    HamiltonianSchedule, OperatorSchedule, PhysicalConstants, Waveform,
};
pub use error::{Error, Result};
pub use operators::{
    anticommutator, commutator, complex_expectation, expectation, fluctuation,
    sym_antisym_split, variance, ComplexMatrix, HermitianOperator, PureState,
};
pub use spin::{
    reduction_check, spin_operators, static_closed_forms, timedep_closed_forms,
    ExplicitTimeScenario, ReductionOutcome, SpinHalfScenario, SpinOperators, SpinScenario,
};
