//! Dense complex matrices, certified Hermitian operators, normalized pure
//! states, and the expectation/variance/commutator algebra built on them.
//!
//! Matrices are stored dense in double-precision complex; every system this
//! crate targets is desk-scale (dim ≤ ~8), so no sparse or blocked storage is
//! provided. Operators are certified Hermitian at construction and rejected —
//! never silently symmetrized — when they fail the certificate.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Largest allowed deviation `max_ij |M[i][j] − conj(M[j][i])|` for a matrix
/// to certify as Hermitian.
pub const HERMITICITY_TOL: f64 = 1e-10;

/// Largest allowed deviation of a pure-state norm from one.
pub const NORM_TOL: f64 = 1e-10;

/// Negative raw variances are roundoff on near-eigenstates and are clamped
/// to zero; this window is their expected magnitude for unit-norm operators.
pub const VARIANCE_CLAMP: f64 = -1e-12;

fn check_dims(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::Dimension { expected, found })
    }
}

/// A finite, square, dense complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    data: DMatrix<Complex64>,
}

impl ComplexMatrix {
    pub(crate) fn from_data(data: DMatrix<Complex64>) -> Result<Self> {
        if data.nrows() != data.ncols() {
            return Err(Error::InvalidOperator(format!(
                "matrix must be square, got {}x{}",
                data.nrows(),
                data.ncols()
            )));
        }
        if data.nrows() == 0 {
            return Err(Error::InvalidOperator("matrix dimension must be >= 1".into()));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidOperator("matrix entries must be finite".into()));
        }
        Ok(Self { data })
    }

    /// Build from row-major nested slices; every row must have length `dim`.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let dim = rows.len();
        for row in rows {
            check_dims(dim, row.len())?;
        }
        Self::from_data(DMatrix::from_fn(dim, dim, |i, j| rows[i][j]))
    }

    /// Build entry-by-entry from a function of `(row, col)`.
    pub fn from_fn(dim: usize, f: impl Fn(usize, usize) -> Complex64) -> Result<Self> {
        Self::from_data(DMatrix::from_fn(dim, dim, f))
    }

    pub fn zeros(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be >= 1");
        Self { data: DMatrix::zeros(dim, dim) }
    }

    pub fn identity(dim: usize) -> Self {
        assert!(dim >= 1, "matrix dimension must be >= 1");
        Self { data: DMatrix::identity(dim, dim) }
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.data[(i, j)]
    }

    /// Row-major copy of the entries, convenient for serialization.
    pub fn to_rows(&self) -> Vec<Vec<Complex64>> {
        (0..self.dim())
            .map(|i| (0..self.dim()).map(|j| self.data[(i, j)]).collect())
            .collect()
    }

    pub fn adjoint(&self) -> Self {
        Self { data: self.data.adjoint() }
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self { data: &self.data * factor }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        check_dims(self.dim(), rhs.dim())?;
        Ok(Self { data: &self.data + &rhs.data })
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        check_dims(self.dim(), rhs.dim())?;
        Ok(Self { data: &self.data - &rhs.data })
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        check_dims(self.dim(), rhs.dim())?;
        Ok(Self { data: &self.data * &rhs.data })
    }

    /// `self + c·I`.
    pub fn add_scaled_identity(&self, c: Complex64) -> Self {
        let mut data = self.data.clone();
        for i in 0..data.nrows() {
            data[(i, i)] += c;
        }
        Self { data }
    }

    /// `max_ij |self[i][j] − other[i][j]|`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        check_dims(self.dim(), other.dim())?;
        Ok((&self.data - &other.data).iter().map(|z| z.norm()).fold(0.0, f64::max))
    }

    /// `max_ij |self[i][j] − conj(self[j][i])|`.
    pub fn hermiticity_deviation(&self) -> f64 {
        let n = self.dim();
        let mut dev = 0.0f64;
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self.data[(i, j)] - self.data[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub(crate) fn apply(&self, v: &DVector<Complex64>) -> DVector<Complex64> {
        &self.data * v
    }
}

/// A dense complex matrix certified Hermitian within [`HERMITICITY_TOL`] at
/// construction. Matrices failing the certificate are rejected rather than
/// symmetrized, so a failure always points at the caller.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
}

impl HermitianOperator {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        let dev = matrix.hermiticity_deviation();
        if dev > HERMITICITY_TOL {
            return Err(Error::InvalidOperator(format!(
                "hermiticity certificate failed (max deviation {dev:.3e})"
            )));
        }
        Ok(Self { matrix })
    }

    /// Certify the result of operator arithmetic that is Hermitian by
    /// algebra; a failure here signals corrupted arithmetic, not bad input.
    pub(crate) fn certify_arithmetic(matrix: ComplexMatrix) -> Result<Self> {
        let dev = matrix.hermiticity_deviation();
        if dev > HERMITICITY_TOL {
            return Err(Error::NonHermitianResult { max_dev: dev });
        }
        Ok(Self { matrix })
    }

    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        Self::new(ComplexMatrix::from_rows(rows)?)
    }

    pub fn zeros(dim: usize) -> Self {
        Self { matrix: ComplexMatrix::zeros(dim) }
    }

    pub fn identity(dim: usize) -> Self {
        Self { matrix: ComplexMatrix::identity(dim) }
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    /// Scale by a real factor; real scaling preserves the certificate.
    pub fn scaled(&self, factor: f64) -> Self {
        Self { matrix: self.matrix.scaled(Complex64::new(factor, 0.0)) }
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        Ok(Self { matrix: self.matrix.add(&rhs.matrix)? })
    }

    /// `A + c·I` for real `c`.
    pub fn shifted(&self, c: f64) -> Self {
        Self { matrix: self.matrix.add_scaled_identity(Complex64::new(c, 0.0)) }
    }
}

/// A normalized complex state vector: `| ‖ψ‖₂ − 1 | ≤ NORM_TOL`.
///
/// The global phase is not normalized away; every quantity computed by this
/// crate is phase-invariant by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    amplitudes: DVector<Complex64>,
}

impl PureState {
    /// Accept amplitudes already normalized within [`NORM_TOL`].
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidState("state dimension must be >= 1".into()));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidState("amplitudes must be finite".into()));
        }
        let v = DVector::from_vec(amplitudes);
        let deviation = (v.norm() - 1.0).abs();
        if deviation > NORM_TOL {
            return Err(Error::InvalidState(format!(
                "norm deviates from one by {deviation:.3e}"
            )));
        }
        Ok(Self { amplitudes: v })
    }

    /// Normalize arbitrary finite amplitudes; rejects (near-)zero vectors.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidState("state dimension must be >= 1".into()));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidState("amplitudes must be finite".into()));
        }
        let mut v = DVector::from_vec(amplitudes);
        let norm = v.norm();
        if norm < 1e-300 {
            return Err(Error::InvalidState("cannot normalize a zero vector".into()));
        }
        v /= Complex64::new(norm, 0.0);
        Ok(Self { amplitudes: v })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitude(&self, i: usize) -> Complex64 {
        self.amplitudes[i]
    }

    pub fn to_vec(&self) -> Vec<Complex64> {
        self.amplitudes.iter().copied().collect()
    }

    pub(crate) fn vector(&self) -> &DVector<Complex64> {
        &self.amplitudes
    }

    /// `⟨self|other⟩`.
    pub fn overlap(&self, other: &Self) -> Result<Complex64> {
        check_dims(self.dim(), other.dim())?;
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }

    /// Spin-up along z: `(1, 0)`.
    pub fn plus_z() -> Self {
        Self::new(vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)]).unwrap()
    }

    /// Spin-down along z: `(0, 1)`.
    pub fn minus_z() -> Self {
        Self::new(vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)]).unwrap()
    }

    /// Spin-up along x: `(1, 1)/√2`.
    pub fn plus_x() -> Self {
        let a = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Self::new(vec![a, a]).unwrap()
    }

    /// Spin-up along y: `(1, i)/√2`.
    pub fn plus_y() -> Self {
        let r = std::f64::consts::FRAC_1_SQRT_2;
        Self::new(vec![Complex64::new(r, 0.0), Complex64::new(0.0, r)]).unwrap()
    }
}

/// `Re⟨ψ|A|ψ⟩`. The imaginary part vanishes for a certified Hermitian
/// operator (up to roundoff) and is discarded.
pub fn expectation(a: &HermitianOperator, psi: &PureState) -> Result<f64> {
    check_dims(a.dim(), psi.dim())?;
    Ok(complex_expectation(a.matrix(), psi)?.re)
}

/// `⟨ψ|M|ψ⟩` for an arbitrary (not necessarily Hermitian) matrix, both
/// parts retained.
pub fn complex_expectation(m: &ComplexMatrix, psi: &PureState) -> Result<Complex64> {
    check_dims(m.dim(), psi.dim())?;
    Ok(psi.vector().dotc(&m.apply(psi.vector())))
}

/// The fluctuation operator `δA = A − ⟨A⟩·I`.
pub fn fluctuation(a: &HermitianOperator, psi: &PureState) -> Result<HermitianOperator> {
    let mean = expectation(a, psi)?;
    Ok(a.shifted(-mean))
}

/// `⟨(δA)²⟩`, clamped to zero when roundoff makes it slightly negative.
pub fn variance(a: &HermitianOperator, psi: &PureState) -> Result<f64> {
    let delta = fluctuation(a, psi)?;
    let squared = delta.matrix().matmul(delta.matrix())?;
    let raw = complex_expectation(&squared, psi)?.re;
    Ok(raw.max(0.0))
}

/// `[A, B] = AB − BA`.
pub fn commutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.matmul(b)?.sub(&b.matmul(a)?)
}

/// `{A, B} = AB + BA`.
pub fn anticommutator(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.matmul(b)?.add(&b.matmul(a)?)
}

/// Split `⟨AB⟩` into its symmetric and antisymmetric parts:
/// `s = ½⟨{A,B}⟩` (real) and `a = |½⟨[A,B]⟩|` (modulus of a purely
/// imaginary number). For Hermitian inputs, `|⟨AB⟩|² = s² + a²`.
pub fn sym_antisym_split(
    a: &HermitianOperator,
    b: &HermitianOperator,
    psi: &PureState,
) -> Result<(f64, f64)> {
    check_dims(a.dim(), b.dim())?;
    let sym = complex_expectation(&anticommutator(a.matrix(), b.matrix())?, psi)?;
    let antisym = complex_expectation(&commutator(a.matrix(), b.matrix())?, psi)?;
    Ok((0.5 * sym.re, 0.5 * antisym.norm()))
}
