//! Independent dense complex arithmetic used as the test oracle.
//!
//! Everything here is implemented with plain nested `Vec`s and index loops,
//! deliberately sharing no code path with the library it checks.

use num_complex::Complex64;

pub type Mat = Vec<Vec<Complex64>>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

pub fn identity(dim: usize) -> Mat {
    (0..dim)
        .map(|i| (0..dim).map(|j| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) }).collect())
        .collect()
}

pub fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let n = a.len();
    let mut out = vec![vec![c(0.0, 0.0); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = c(0.0, 0.0);
            for k in 0..n {
                acc += a[i][k] * b[k][j];
            }
            out[i][j] = acc;
        }
    }
    out
}

pub fn mat_add(a: &Mat, b: &Mat) -> Mat {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + y).collect())
        .collect()
}

pub fn mat_sub(a: &Mat, b: &Mat) -> Mat {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x - y).collect())
        .collect()
}

pub fn mat_scale(a: &Mat, z: Complex64) -> Mat {
    a.iter().map(|row| row.iter().map(|x| x * z).collect()).collect()
}

pub fn mat_vec(m: &Mat, v: &[Complex64]) -> Vec<Complex64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, x)| a * x).fold(c(0.0, 0.0), |s, t| s + t))
        .collect()
}

/// `⟨u|v⟩ = Σ conj(u_i)·v_i`.
pub fn inner(u: &[Complex64], v: &[Complex64]) -> Complex64 {
    u.iter().zip(v).map(|(a, b)| a.conj() * b).fold(c(0.0, 0.0), |s, t| s + t)
}

/// `⟨v|M|v⟩`.
pub fn expect(m: &Mat, v: &[Complex64]) -> Complex64 {
    inner(v, &mat_vec(m, v))
}

pub fn commutator_m(a: &Mat, b: &Mat) -> Mat {
    mat_sub(&mat_mul(a, b), &mat_mul(b, a))
}

pub fn anticommutator_m(a: &Mat, b: &Mat) -> Mat {
    mat_add(&mat_mul(a, b), &mat_mul(b, a))
}

/// `⟨M²⟩ − ⟨M⟩²` for Hermitian `M` (real parts).
pub fn variance_m(m: &Mat, v: &[Complex64]) -> f64 {
    let mean = expect(m, v).re;
    expect(&mat_mul(m, m), v).re - mean * mean
}

/// Spin operators `(ħ/2)·σ_k` as raw matrices.
pub fn spin(hbar: f64) -> (Mat, Mat, Mat) {
    let h = 0.5 * hbar;
    let sx = vec![vec![c(0.0, 0.0), c(h, 0.0)], vec![c(h, 0.0), c(0.0, 0.0)]];
    let sy = vec![vec![c(0.0, 0.0), c(0.0, -h)], vec![c(0.0, h), c(0.0, 0.0)]];
    let sz = vec![vec![c(h, 0.0), c(0.0, 0.0)], vec![c(0.0, 0.0), c(-h, 0.0)]];
    (sx, sy, sz)
}

/// Largest entrywise distance between a library matrix and an oracle matrix.
pub fn diff_to_oracle(lib: &qflux_core::ComplexMatrix, oracle: &Mat) -> f64 {
    assert_eq!(lib.dim(), oracle.len());
    let mut dev = 0.0f64;
    for (i, row) in oracle.iter().enumerate() {
        for (j, expected) in row.iter().enumerate() {
            dev = dev.max((lib.entry(i, j) - expected).norm());
        }
    }
    dev
}
