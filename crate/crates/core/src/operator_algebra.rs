//! Dense complex matrices and the bipartite operations built on them.
//!
//! Matrices are stored row-major. Two-mode operators use [`ModeIndexing`],
//! where mode A is the slow index: `i = n_a * dim_b + n_b`.

use std::ops::{Add, Index, IndexMut, Mul, Sub};

use faer::{Mat, Side};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Default cap on the composite dimension of a two-mode space (64 x 64).
pub const DEFAULT_MAX_COMPOSITE_DIM: usize = 4096;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim, dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries cannot fill a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = d;
        }
        m
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len(), diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = C64::new(d, 0.0);
        }
        m
    }

    /// `|v><v|` for a column vector `v`.
    pub fn outer(v: &[C64]) -> Self {
        let n = v.len();
        Self::from_fn(n, n, |i, j| v[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scaled(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| z * s).collect(),
        }
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let rhs_row = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// `U M U†`.
    pub fn conjugate_by(&self, u: &Self) -> Result<Self> {
        u.matmul(self)?.matmul(&u.adjoint())
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, z| m.max(z.norm()))
    }

    /// Sum of the moduli of the columns, maximized over columns.
    pub fn norm_one(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    /// `max |M - M†|` entrywise.
    pub fn hermiticity_defect(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in i..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Hermitian within `tol * max(1, max|M|)`.
    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.hermiticity_defect() <= tol * self.max_abs().max(1.0)
    }

    pub fn is_anti_hermitian(&self, tol: f64) -> bool {
        if !self.is_square() {
            return false;
        }
        let scale = self.max_abs().max(1.0);
        for i in 0..self.rows {
            for j in i..self.cols {
                if (self[(i, j)] + self[(j, i)].conj()).norm() > tol * scale {
                    return false;
                }
            }
        }
        true
    }

    /// `(M + M†) / 2`.
    pub fn hermitian_part(&self) -> Self {
        Self::from_fn(self.rows, self.cols, |i, j| {
            (self[(i, j)] + self[(j, i)].conj()) * 0.5
        })
    }

    /// Top-left `dim x dim` block.
    pub fn cropped(&self, dim: usize) -> Self {
        Self::from_fn(dim.min(self.rows), dim.min(self.cols), |i, j| self[(i, j)])
    }

    /// Zero-padded copy of size `dim x dim` (`dim` at least the current size).
    pub fn padded(&self, dim: usize) -> Self {
        let mut out = Self::zeros(dim.max(self.rows), dim.max(self.cols));
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(i, j)] = self[(i, j)];
            }
        }
        out
    }

    pub fn is_real(&self) -> bool {
        self.data.iter().all(|z| z.im == 0.0)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;

    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs).expect("matrix product shape mismatch")
    }
}

/// Flat indexing of a two-mode space, mode A slow.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ModeIndexing {
    pub dim_a: usize,
    pub dim_b: usize,
}

impl ModeIndexing {
    pub fn new(dim_a: usize, dim_b: usize) -> Result<Self> {
        Self::with_cap(dim_a, dim_b, DEFAULT_MAX_COMPOSITE_DIM)
    }

    pub fn with_cap(dim_a: usize, dim_b: usize, max_composite: usize) -> Result<Self> {
        match dim_a.checked_mul(dim_b) {
            Some(total) if total <= max_composite => Ok(Self { dim_a, dim_b }),
            _ => Err(Error::Dimension {
                requested: dim_a.saturating_mul(dim_b),
                max: max_composite,
            }),
        }
    }

    pub fn total(&self) -> usize {
        self.dim_a * self.dim_b
    }

    #[inline]
    pub fn flat(&self, n_a: usize, n_b: usize) -> usize {
        n_a * self.dim_b + n_b
    }

    #[inline]
    pub fn split(&self, i: usize) -> (usize, usize) {
        (i / self.dim_b, i % self.dim_b)
    }

    fn check(&self, rho: &ComplexMatrix) -> Result<()> {
        if !rho.is_square() || rho.rows() != self.total() {
            return Err(Error::Shape(format!(
                "expected a square matrix of size {} for modes {}x{}, got {}x{}",
                self.total(),
                self.dim_a,
                self.dim_b,
                rho.rows(),
                rho.cols()
            )));
        }
        Ok(())
    }
}

/// Kronecker product `a ⊗ b`, capped at [`DEFAULT_MAX_COMPOSITE_DIM`] per side.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    tensor_with_cap(a, b, DEFAULT_MAX_COMPOSITE_DIM)
}

pub fn tensor_with_cap(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    max_composite: usize,
) -> Result<ComplexMatrix> {
    let rows = ModeIndexing::with_cap(a.rows, b.rows, max_composite)?;
    let cols = ModeIndexing::with_cap(a.cols, b.cols, max_composite)?;
    let mut out = ComplexMatrix::zeros(rows.total(), cols.total());
    for ia in 0..a.rows {
        for ja in 0..a.cols {
            let x = a[(ia, ja)];
            if x == ZERO {
                continue;
            }
            for ib in 0..b.rows {
                for jb in 0..b.cols {
                    out[(rows.flat(ia, ib), cols.flat(ja, jb))] = x * b[(ib, jb)];
                }
            }
        }
    }
    Ok(out)
}

/// Transpose on mode A: `out[(m,j),(n,k)] = rho[(n,j),(m,k)]`.
pub fn partial_transpose_a(rho: &ComplexMatrix, idx: ModeIndexing) -> Result<ComplexMatrix> {
    idx.check(rho)?;
    let n = idx.total();
    Ok(ComplexMatrix::from_fn(n, n, |row, col| {
        let (m, j) = idx.split(row);
        let (nn, k) = idx.split(col);
        rho[(idx.flat(nn, j), idx.flat(m, k))]
    }))
}

/// Trace over mode B: `out[m,n] = sum_j rho[(m,j),(n,j)]`.
pub fn partial_trace_b(rho: &ComplexMatrix, idx: ModeIndexing) -> Result<ComplexMatrix> {
    idx.check(rho)?;
    Ok(ComplexMatrix::from_fn(idx.dim_a, idx.dim_a, |m, n| {
        (0..idx.dim_b)
            .map(|j| rho[(idx.flat(m, j), idx.flat(n, j))])
            .sum()
    }))
}

/// Trace over mode A: `out[j,k] = sum_m rho[(m,j),(m,k)]`.
pub fn partial_trace_a(rho: &ComplexMatrix, idx: ModeIndexing) -> Result<ComplexMatrix> {
    idx.check(rho)?;
    Ok(ComplexMatrix::from_fn(idx.dim_b, idx.dim_b, |j, k| {
        (0..idx.dim_a)
            .map(|m| rho[(idx.flat(m, j), idx.flat(m, k))])
            .sum()
    }))
}

fn require_square(m: &ComplexMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::Shape(format!(
            "expected a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

/// Eigenvalues of the Hermitian part of `m`, ascending.
///
/// Purely real input takes the real symmetric solver, which is several
/// times faster on the large partially transposed blocks.
pub fn hermitian_eigenvalues(m: &ComplexMatrix) -> Result<Vec<f64>> {
    require_square(m)?;
    let n = m.rows();
    if n == 0 {
        return Ok(Vec::new());
    }
    let h = m.hermitian_part();
    let values = if h.is_real() {
        let mat = Mat::<f64>::from_fn(n, n, |i, j| h[(i, j)].re);
        mat.self_adjoint_eigenvalues(Side::Lower)
            .map_err(|e| Error::numeric(n, format!("eigensolver failed: {e:?}")))?
    } else {
        let mat = Mat::<C64>::from_fn(n, n, |i, j| h[(i, j)]);
        mat.self_adjoint_eigenvalues(Side::Lower)
            .map_err(|e| Error::numeric(n, format!("eigensolver failed: {e:?}")))?
    };
    let sum: f64 = values.iter().sum();
    let trace = h.trace().re;
    if (sum - trace).abs() > 1e-10 * n as f64 * trace.abs().max(1.0) {
        return Err(Error::numeric(
            n,
            format!("eigenvalue sum {sum} disagrees with trace {trace}"),
        ));
    }
    Ok(values)
}

/// Singular values of `m`.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let (rows, cols) = (m.rows(), m.cols());
    if rows == 0 || cols == 0 {
        return Ok(Vec::new());
    }
    let values = if m.is_real() {
        Mat::<f64>::from_fn(rows, cols, |i, j| m[(i, j)].re).singular_values()
    } else {
        Mat::<C64>::from_fn(rows, cols, |i, j| m[(i, j)]).singular_values()
    };
    values.map_err(|e| Error::numeric(rows.max(cols), format!("SVD failed: {e:?}")))
}

/// Eigenvalues (ascending) and orthonormal eigenvectors (as columns) of the
/// Hermitian part of `m`.
pub fn hermitian_eigen(m: &ComplexMatrix) -> Result<(Vec<f64>, ComplexMatrix)> {
    require_square(m)?;
    let n = m.rows();
    let h = m.hermitian_part();
    let mat = Mat::<C64>::from_fn(n, n, |i, j| h[(i, j)]);
    let evd = mat
        .self_adjoint_eigen(Side::Lower)
        .map_err(|e| Error::numeric(n, format!("eigensolver failed: {e:?}")))?;
    let s = evd.S().column_vector();
    let u = evd.U();
    let values = (0..n).map(|i| s[i].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| u[(i, j)]);
    Ok((values, vectors))
}

/// `exp(g)` for anti-Hermitian `g`, by scaling and squaring of the Taylor series.
pub fn expm_antihermitian(g: &ComplexMatrix) -> Result<ComplexMatrix> {
    require_square(g)?;
    let n = g.rows();
    if !g.is_anti_hermitian(1e-12) {
        return Err(Error::Parameter(
            "generator is not anti-Hermitian".to_string(),
        ));
    }
    let norm = g.norm_one();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let a = g.scaled(C64::new(0.5f64.powi(squarings as i32), 0.0));

    let mut result = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    let mut converged = false;
    for k in 1..=40 {
        term = term.matmul(&a)?.scaled(C64::new(1.0 / k as f64, 0.0));
        result = &result + &term;
        if term.max_abs() <= 1e-18 * result.max_abs() {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::numeric(n, "Taylor series for exp did not converge"));
    }
    for _ in 0..squarings {
        result = result.matmul(&result)?;
    }

    let defect = (&result.adjoint().matmul(&result)? - &ComplexMatrix::identity(n)).max_abs();
    if defect > 1e-9 {
        return Err(Error::numeric(
            n,
            format!("exponential lost unitarity (defect {defect:e})"),
        ));
    }
    Ok(result)
}
