//! Time-dependent Hamiltonians and observables as waveform-weighted sums of
//! constant Hermitian terms, Heisenberg-picture derivatives, and a fixed-step
//! RK4 state propagator used to cross-validate the derivative operators.
//!
//! Explicit time dependence is carried analytically: each schedule term is a
//! real coefficient waveform with an exact derivative, so `∂A/∂t` never goes
//! through finite differences.

use nalgebra::DVector;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operators::{ComplexMatrix, HermitianOperator, PureState};

/// Per-step norm drift above which the propagator renormalizes the state.
pub const RENORM_DRIFT: f64 = 1e-12;

/// Per-step norm drift above which the propagator aborts with
/// [`Error::StepTooLarge`].
pub const MAX_STEP_DRIFT: f64 = 1e-6;

/// A real-valued coefficient of time with an analytic derivative.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Waveform {
    Constant { value: f64 },
    Sinusoid { amplitude: f64, angular_frequency: f64, phase: f64 },
    Ramp { slope: f64, intercept: f64 },
    /// Piecewise-linear interpolation through `(t, value)` samples with
    /// strictly increasing `t`; evaluation outside the sample range is a
    /// domain error. The derivative at an interior knot is the slope of the
    /// segment to its left.
    PiecewiseLinear { samples: Vec<(f64, f64)> },
}

impl Waveform {
    pub fn constant(value: f64) -> Self {
        Waveform::Constant { value }
    }

    pub fn sinusoid(amplitude: f64, angular_frequency: f64, phase: f64) -> Self {
        Waveform::Sinusoid { amplitude, angular_frequency, phase }
    }

    pub fn ramp(slope: f64, intercept: f64) -> Self {
        Waveform::Ramp { slope, intercept }
    }

    pub fn piecewise_linear(samples: Vec<(f64, f64)>) -> Result<Self> {
        let w = Waveform::PiecewiseLinear { samples };
        w.validate()?;
        Ok(w)
    }

    /// Check construction invariants. Deserialized waveforms must be passed
    /// through this before use.
    pub fn validate(&self) -> Result<()> {
        let finite = |x: f64| x.is_finite();
        match self {
            Waveform::Constant { value } => {
                if !finite(*value) {
                    return Err(Error::InvalidWaveform("constant value must be finite".into()));
                }
            }
            Waveform::Sinusoid { amplitude, angular_frequency, phase } => {
                if ![*amplitude, *angular_frequency, *phase].iter().all(|x| finite(*x)) {
                    return Err(Error::InvalidWaveform("sinusoid parameters must be finite".into()));
                }
            }
            Waveform::Ramp { slope, intercept } => {
                if !finite(*slope) || !finite(*intercept) {
                    return Err(Error::InvalidWaveform("ramp parameters must be finite".into()));
                }
            }
            Waveform::PiecewiseLinear { samples } => {
                if samples.len() < 2 {
                    return Err(Error::InvalidWaveform(
                        "piecewise_linear needs at least two samples".into(),
                    ));
                }
                for (t, v) in samples {
                    if !finite(*t) || !finite(*v) {
                        return Err(Error::InvalidWaveform("samples must be finite".into()));
                    }
                }
                if samples.windows(2).any(|w| w[0].0 >= w[1].0) {
                    return Err(Error::InvalidWaveform(
                        "piecewise_linear sample times must be strictly increasing".into(),
                    ));
                }
            }
        }
        Ok(())
    }

    /// Index of the segment used for both value and derivative at `t`; the
    /// left-segment convention assigns interior knots to the segment ending
    /// at them.
    fn segment(samples: &[(f64, f64)], t: f64) -> Result<usize> {
        let t_min = samples[0].0;
        let t_max = samples[samples.len() - 1].0;
        if t < t_min || t > t_max {
            return Err(Error::WaveformDomain { t, t_min, t_max });
        }
        if t == t_min {
            return Ok(0);
        }
        // Largest k with samples[k].0 < t.
        let k = samples.partition_point(|(tk, _)| *tk < t);
        Ok(k - 1)
    }

    pub fn value(&self, t: f64) -> Result<f64> {
        match self {
            Waveform::Constant { value } => Ok(*value),
            Waveform::Sinusoid { amplitude, angular_frequency, phase } => {
                Ok(amplitude * (angular_frequency * t + phase).sin())
            }
            Waveform::Ramp { slope, intercept } => Ok(slope * t + intercept),
            Waveform::PiecewiseLinear { samples } => {
                let k = Self::segment(samples, t)?;
                let (t0, v0) = samples[k];
                let (t1, v1) = samples[k + 1];
                Ok(v0 + (v1 - v0) * (t - t0) / (t1 - t0))
            }
        }
    }

    pub fn derivative(&self, t: f64) -> Result<f64> {
        match self {
            Waveform::Constant { .. } => Ok(0.0),
            Waveform::Sinusoid { amplitude, angular_frequency, phase } => {
                Ok(amplitude * angular_frequency * (angular_frequency * t + phase).cos())
            }
            Waveform::Ramp { slope, .. } => Ok(*slope),
            Waveform::PiecewiseLinear { samples } => {
                let k = Self::segment(samples, t)?;
                let (t0, v0) = samples[k];
                let (t1, v1) = samples[k + 1];
                Ok((v1 - v0) / (t1 - t0))
            }
        }
    }

    /// Multiply the waveform (and hence its derivative) by a real factor.
    pub fn scaled(&self, factor: f64) -> Self {
        match self {
            Waveform::Constant { value } => Waveform::Constant { value: factor * value },
            Waveform::Sinusoid { amplitude, angular_frequency, phase } => Waveform::Sinusoid {
                amplitude: factor * amplitude,
                angular_frequency: *angular_frequency,
                phase: *phase,
            },
            Waveform::Ramp { slope, intercept } => {
                Waveform::Ramp { slope: factor * slope, intercept: factor * intercept }
            }
            Waveform::PiecewiseLinear { samples } => Waveform::PiecewiseLinear {
                samples: samples.iter().map(|(t, v)| (*t, factor * v)).collect(),
            },
        }
    }
}

/// ħ, γ, and τ in consistent arbitrary units. The library never fixes a unit
/// system beyond `hbar > 0` and `tau > 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PhysicalConstants {
    #[serde(default = "default_hbar")]
    pub hbar: f64,
    #[serde(default)]
    pub gamma: f64,
    #[serde(default)]
    pub tau: Option<f64>,
}

fn default_hbar() -> f64 {
    1.0
}

impl PhysicalConstants {
    pub fn new(hbar: f64, gamma: f64, tau: Option<f64>) -> Result<Self> {
        let c = Self { hbar, gamma, tau };
        c.validate()?;
        Ok(c)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.hbar.is_finite() && self.hbar > 0.0) {
            return Err(Error::InvalidConstant(format!("hbar must be positive, got {}", self.hbar)));
        }
        if !self.gamma.is_finite() {
            return Err(Error::InvalidConstant("gamma must be finite".into()));
        }
        if let Some(tau) = self.tau {
            if !(tau.is_finite() && tau > 0.0) {
                return Err(Error::InvalidConstant(format!("tau must be positive, got {tau}")));
            }
        }
        Ok(())
    }
}

fn check_hbar(hbar: f64) -> Result<()> {
    if hbar.is_finite() && hbar > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidConstant(format!("hbar must be positive, got {hbar}")))
    }
}

/// A time-dependent operator `A(t) = Σ_k f_k(t)·A_k` with real coefficient
/// waveforms on constant Hermitian terms, so `A(t)` is Hermitian for all `t`
/// and `∂A/∂t(t) = Σ_k f_k'(t)·A_k` is available analytically.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorSchedule {
    terms: Vec<(Waveform, HermitianOperator)>,
    dim: usize,
}

/// A time-dependent Hamiltonian; same representation as [`OperatorSchedule`].
pub type HamiltonianSchedule = OperatorSchedule;

impl OperatorSchedule {
    pub fn new(terms: Vec<(Waveform, HermitianOperator)>) -> Result<Self> {
        let dim = terms.first().ok_or(Error::EmptySchedule)?.1.dim();
        for (waveform, op) in &terms {
            waveform.validate()?;
            if op.dim() != dim {
                return Err(Error::Dimension { expected: dim, found: op.dim() });
            }
        }
        Ok(Self { terms, dim })
    }

    /// A schedule with no time dependence at all.
    pub fn constant(op: HermitianOperator) -> Self {
        let dim = op.dim();
        Self { terms: vec![(Waveform::constant(1.0), op)], dim }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn terms(&self) -> &[(Waveform, HermitianOperator)] {
        &self.terms
    }

    /// `A(t)`.
    pub fn at(&self, t: f64) -> Result<HermitianOperator> {
        self.weighted_sum(t, Waveform::value)
    }

    /// `∂A/∂t(t)`, assembled from the analytic waveform derivatives.
    pub fn time_derivative_at(&self, t: f64) -> Result<HermitianOperator> {
        self.weighted_sum(t, Waveform::derivative)
    }

    fn weighted_sum(&self, t: f64, coeff: impl Fn(&Waveform, f64) -> Result<f64>) -> Result<HermitianOperator> {
        let mut sum = ComplexMatrix::zeros(self.dim);
        for (waveform, op) in &self.terms {
            let f = coeff(waveform, t)?;
            sum = sum.add(&op.matrix().scaled(Complex64::new(f, 0.0)))?;
        }
        HermitianOperator::certify_arithmetic(sum)
    }
}

/// The Heisenberg-picture derivative `(i/ħ)[H, A]` of an observable with no
/// explicit time dependence. The commutator of Hermitian operators is
/// anti-Hermitian, so the result certifies Hermitian.
pub fn heisenberg_derivative(
    h: &HermitianOperator,
    a: &HermitianOperator,
    hbar: f64,
) -> Result<HermitianOperator> {
    check_hbar(hbar)?;
    let comm = crate::operators::commutator(h.matrix(), a.matrix())?;
    HermitianOperator::certify_arithmetic(comm.scaled(Complex64::new(0.0, 1.0 / hbar)))
}

/// The total derivative `∂A/∂t(t) + (i/ħ)[H(t), A(t)]` of a schedule with
/// explicit time dependence. Reduces to [`heisenberg_derivative`] when every
/// coefficient is constant.
pub fn total_derivative(
    a: &OperatorSchedule,
    h: &HamiltonianSchedule,
    t: f64,
    hbar: f64,
) -> Result<HermitianOperator> {
    if a.dim() != h.dim() {
        return Err(Error::Dimension { expected: a.dim(), found: h.dim() });
    }
    let explicit = a.time_derivative_at(t)?;
    let heisenberg = heisenberg_derivative(&h.at(t)?, &a.at(t)?, hbar)?;
    explicit.add(&heisenberg)
}

/// The double commutator `[A, [H, A]]`; Hermitian for Hermitian `H`, `A`.
pub fn double_commutator(
    h: &HermitianOperator,
    a: &HermitianOperator,
) -> Result<HermitianOperator> {
    let inner = crate::operators::commutator(h.matrix(), a.matrix())?;
    let outer = crate::operators::commutator(a.matrix(), &inner)?;
    HermitianOperator::certify_arithmetic(outer)
}

/// Integrate `dψ/dt = −(i/ħ)H(t)ψ` from `t0` to `t1` with classical
/// fixed-step fourth-order Runge–Kutta.
///
/// The state is renormalized whenever the per-step norm drift exceeds
/// [`RENORM_DRIFT`]; drift beyond [`MAX_STEP_DRIFT`] aborts with
/// [`Error::StepTooLarge`] since it signals an unstable step size.
pub fn propagate_state(
    h: &HamiltonianSchedule,
    psi0: &PureState,
    t0: f64,
    t1: f64,
    step: f64,
    hbar: f64,
) -> Result<PureState> {
    check_hbar(hbar)?;
    if !(step.is_finite() && step > 0.0) {
        return Err(Error::InvalidConstant(format!("step must be positive, got {step}")));
    }
    if !(t0.is_finite() && t1.is_finite()) || t1 < t0 {
        return Err(Error::InvalidConstant(format!("need finite t1 >= t0, got [{t0}, {t1}]")));
    }
    if h.dim() != psi0.dim() {
        return Err(Error::Dimension { expected: h.dim(), found: psi0.dim() });
    }

    let minus_i_over_hbar = Complex64::new(0.0, -1.0 / hbar);
    let rhs = |t: f64, y: &DVector<Complex64>| -> Result<DVector<Complex64>> {
        Ok(h.at(t)?.matrix().apply(y) * minus_i_over_hbar)
    };

    let mut y = psi0.vector().clone();
    let mut t = t0;
    while t < t1 {
        let dt = step.min(t1 - t);
        let k1 = rhs(t, &y)?;
        let k2 = rhs(t + 0.5 * dt, &(&y + &k1 * Complex64::from(0.5 * dt)))?;
        let k3 = rhs(t + 0.5 * dt, &(&y + &k2 * Complex64::from(0.5 * dt)))?;
        let k4 = rhs(t + dt, &(&y + &k3 * Complex64::from(dt)))?;
        y += (k1 + k2 * Complex64::from(2.0) + k3 * Complex64::from(2.0) + k4)
            * Complex64::from(dt / 6.0);

        let drift = (y.norm() - 1.0).abs();
        if drift > MAX_STEP_DRIFT {
            return Err(Error::StepTooLarge { t: t + dt, drift });
        }
        if drift > RENORM_DRIFT {
            let norm = y.norm();
            y /= Complex64::from(norm);
        }
        t += dt;
    }

    PureState::new(y.iter().copied().collect())
}
