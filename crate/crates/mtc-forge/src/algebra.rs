//! Dense complex matrices and the numeric certificates used by every
//! verifier: unitarity residuals and Hermitian positive-definiteness.
//!
//! Positive-definiteness is certified twice on small matrices: once through a
//! Hermitian eigendecomposition and once through a pivoted Cholesky
//! factorization, so a defect in either solver cannot silently pass.

use num_complex::Complex64;
use thiserror::Error;

/// Complex scalar used throughout the crate.
pub type Scalar = Complex64;

pub const ONE: Scalar = Complex64::new(1.0, 0.0);
pub const ZERO: Scalar = Complex64::new(0.0, 0.0);

pub fn re(x: f64) -> Scalar {
    Complex64::new(x, 0.0)
}

/// Unit complex number `exp(i a)`.
pub fn phase(a: f64) -> Scalar {
    Complex64::new(a.cos(), a.sin())
}

#[derive(Debug, Error)]
pub enum AlgebraError {
    #[error("dimension mismatch: {left_rows}x{left_cols} incompatible with {right_rows}x{right_cols}")]
    DimensionMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },
    #[error("operation requires a square matrix, got {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix is singular at pivot {pivot}")]
    Singular { pivot: usize },
    #[error("eigensolver did not converge within {iterations} iterations")]
    NonConvergence { iterations: usize },
    #[error("non-finite entry at ({row},{col})")]
    NonFinite { row: usize, col: usize },
}

/// Absolute/relative comparison gate.
///
/// Two scalars agree when `|x - y| <= abs_eps + rel_eps * max(|x|, |y|)`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct Tolerance {
    pub abs_eps: f64,
    pub rel_eps: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance { abs_eps: 1e-9, rel_eps: 1e-9 }
    }
}

impl Tolerance {
    pub fn new(abs_eps: f64, rel_eps: f64) -> Self {
        Tolerance { abs_eps, rel_eps }
    }

    /// Uniform tolerance with the same absolute and relative epsilon.
    pub fn uniform(eps: f64) -> Self {
        Tolerance { abs_eps: eps, rel_eps: eps }
    }

    pub fn close(&self, x: Scalar, y: Scalar) -> bool {
        (x - y).norm() <= self.abs_eps + self.rel_eps * x.norm().max(y.norm())
    }

    pub fn close_real(&self, x: f64, y: f64) -> bool {
        (x - y).abs() <= self.abs_eps + self.rel_eps * x.abs().max(y.abs())
    }

    /// Acceptance gate for a residual measured against quantities of the
    /// given magnitude.
    pub fn gate(&self, scale: f64) -> f64 {
        self.abs_eps + self.rel_eps * scale
    }
}

/// Summation strategy for the inner products of matrix arithmetic.
///
/// `Compensated` uses Neumaier accumulation on the real and imaginary parts;
/// it is the backing for the catalog-level "extended" precision request.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SumMode {
    #[default]
    Plain,
    Compensated,
}

#[derive(Default, Clone, Copy)]
struct Neumaier {
    sum: f64,
    carry: f64,
}

impl Neumaier {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// Sum of a scalar iterator under the requested mode.
pub fn sum_scalars<I: IntoIterator<Item = Scalar>>(mode: SumMode, it: I) -> Scalar {
    match mode {
        SumMode::Plain => it.into_iter().fold(ZERO, |a, b| a + b),
        SumMode::Compensated => {
            let (mut sr, mut si) = (Neumaier::default(), Neumaier::default());
            for v in it {
                sr.add(v.re);
                si.add(v.im);
            }
            Complex64::new(sr.value(), si.value())
        }
    }
}

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_rows(rows: &[Vec<Scalar>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.concat() }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut m = Matrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn scalar(v: Scalar) -> Self {
        Matrix { rows: 1, cols: 1, data: vec![v] }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn check_finite(&self) -> Result<(), AlgebraError> {
        for i in 0..self.rows {
            for j in 0..self.cols {
                let v = self[(i, j)];
                if !v.re.is_finite() || !v.im.is_finite() {
                    return Err(AlgebraError::NonFinite { row: i, col: j });
                }
            }
        }
        Ok(())
    }

    pub fn adjoint(&self) -> Matrix {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn scale(&self, s: Scalar) -> Matrix {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| v * s).collect() }
    }

    pub fn sub(&self, other: &Matrix) -> Result<Matrix, AlgebraError> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(AlgebraError::DimensionMismatch {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: other.rows,
                right_cols: other.cols,
            });
        }
        Ok(Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn mul(&self, other: &Matrix, mode: SumMode) -> Result<Matrix, AlgebraError> {
        if self.cols != other.rows {
            return Err(AlgebraError::DimensionMismatch {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: other.rows,
                right_cols: other.cols,
            });
        }
        let mut out = Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for j in 0..other.cols {
                out[(i, j)] =
                    sum_scalars(mode, (0..self.cols).map(|k| self[(i, k)] * other[(k, j)]));
            }
        }
        Ok(out)
    }

    /// Largest entry magnitude; zero for empty matrices.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Largest entry-wise deviation from another matrix of the same shape.
    pub fn max_diff(&self, other: &Matrix) -> Result<f64, AlgebraError> {
        Ok(self.sub(other)?.max_abs())
    }

    /// Gauss-Jordan inverse with partial pivoting.
    pub fn inverse(&self) -> Result<Matrix, AlgebraError> {
        if !self.is_square() {
            return Err(AlgebraError::NonSquare { rows: self.rows, cols: self.cols });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        let scale = self.max_abs().max(1.0);
        for col in 0..n {
            let (pivot_row, pivot_mag) = (col..n)
                .map(|r| (r, a[(r, col)].norm()))
                .max_by(|x, y| x.1.total_cmp(&y.1))
                .unwrap();
            if pivot_mag <= 1e-14 * scale {
                return Err(AlgebraError::Singular { pivot: col });
            }
            if pivot_row != col {
                for j in 0..n {
                    a.data.swap(col * n + j, pivot_row * n + j);
                    inv.data.swap(col * n + j, pivot_row * n + j);
                }
            }
            let p = a[(col, col)];
            for j in 0..n {
                a[(col, j)] /= p;
                inv[(col, j)] /= p;
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a[(r, col)];
                if f == ZERO {
                    continue;
                }
                for j in 0..n {
                    let (av, iv) = (a[(col, j)], inv[(col, j)]);
                    a[(r, j)] -= f * av;
                    inv[(r, j)] -= f * iv;
                }
            }
        }
        Ok(inv)
    }

    /// Solve `A x = b` for a square system; `b` is a column vector.
    pub fn solve(&self, b: &[Scalar]) -> Result<Vec<Scalar>, AlgebraError> {
        if !self.is_square() {
            return Err(AlgebraError::NonSquare { rows: self.rows, cols: self.cols });
        }
        if b.len() != self.rows {
            return Err(AlgebraError::DimensionMismatch {
                left_rows: self.rows,
                left_cols: self.cols,
                right_rows: b.len(),
                right_cols: 1,
            });
        }
        let inv = self.inverse()?;
        Ok((0..self.rows)
            .map(|i| sum_scalars(SumMode::Plain, (0..self.rows).map(|k| inv[(i, k)] * b[k])))
            .collect())
    }
}

impl std::ops::Index<(usize, usize)> for Matrix {
    type Output = Scalar;
    fn index(&self, (i, j): (usize, usize)) -> &Scalar {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Scalar {
        &mut self.data[i * self.cols + j]
    }
}

/// Outcome of a unitarity test.
#[derive(Debug, Clone, Copy)]
pub struct UnitaryVerdict {
    pub unitary: bool,
    /// `max |M† M - I|`.
    pub residual: f64,
}

pub fn is_unitary(m: &Matrix, tol: Tolerance) -> Result<UnitaryVerdict, AlgebraError> {
    if !m.is_square() {
        return Err(AlgebraError::NonSquare { rows: m.nrows(), cols: m.ncols() });
    }
    m.check_finite()?;
    let gram = m.adjoint().mul(m, SumMode::Plain)?;
    let residual = gram.max_diff(&Matrix::identity(m.nrows()))?;
    Ok(UnitaryVerdict { unitary: residual <= tol.gate(1.0), residual })
}

/// Outcome of a Hermitian positive-definiteness test.
#[derive(Debug, Clone, Copy)]
pub struct PdVerdict {
    pub hermitian: bool,
    pub positive_definite: bool,
    /// Smallest eigenvalue of the Hermitian part; absent when the input is
    /// not Hermitian within tolerance.
    pub min_eigenvalue: Option<f64>,
    pub hermitian_residual: f64,
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &Matrix) -> Result<Vec<f64>, AlgebraError> {
    if !m.is_square() {
        return Err(AlgebraError::NonSquare { rows: m.nrows(), cols: m.ncols() });
    }
    if m.is_empty() {
        return Ok(vec![]);
    }
    m.check_finite()?;
    let n = m.nrows();
    let na = nalgebra::DMatrix::from_fn(n, n, |i, j| m[(i, j)]);
    let max_iters = 100 * n.max(8);
    let eig = na
        .try_symmetric_eigen(f64::EPSILON, max_iters)
        .ok_or(AlgebraError::NonConvergence { iterations: max_iters })?;
    let mut vals: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    vals.sort_by(f64::total_cmp);
    Ok(vals)
}

/// Pivoted Cholesky: succeeds iff every pivot exceeds `eps`.
fn pivoted_cholesky_pd(m: &Matrix, eps: f64) -> bool {
    let n = m.nrows();
    let mut a = m.clone();
    let mut order: Vec<usize> = (0..n).collect();
    for step in 0..n {
        let (best, best_val) = (step..n)
            .map(|r| (r, a[(order[r], order[r])].re))
            .max_by(|x, y| x.1.total_cmp(&y.1))
            .unwrap();
        order.swap(step, best);
        if best_val <= eps {
            return false;
        }
        let p = order[step];
        let pivot = a[(p, p)].re;
        for ri in step + 1..n {
            let r = order[ri];
            let f = a[(r, p)] / pivot;
            for ci in step + 1..n {
                let c = order[ci];
                let v = a[(p, c)];
                a[(r, c)] -= f * v;
            }
        }
        for ci in step + 1..n {
            let c = order[ci];
            a[(p, c)] = ZERO;
            a[(c, p)] = ZERO;
        }
    }
    true
}

/// Certify that a matrix is Hermitian and positive definite.
///
/// The eigenvalue bound is cross-checked against a pivoted Cholesky
/// factorization for dimensions up to 64.
pub fn is_hermitian_pd(m: &Matrix, tol: Tolerance) -> Result<PdVerdict, AlgebraError> {
    if !m.is_square() {
        return Err(AlgebraError::NonSquare { rows: m.nrows(), cols: m.ncols() });
    }
    m.check_finite()?;
    if m.is_empty() {
        // Vacuously positive: nothing to pair against.
        return Ok(PdVerdict {
            hermitian: true,
            positive_definite: true,
            min_eigenvalue: None,
            hermitian_residual: 0.0,
        });
    }
    let hermitian_residual = m.max_diff(&m.adjoint())?;
    let hermitian = hermitian_residual <= tol.gate(m.max_abs().max(1.0));
    if !hermitian {
        return Ok(PdVerdict {
            hermitian: false,
            positive_definite: false,
            min_eigenvalue: None,
            hermitian_residual,
        });
    }
    let sym = Matrix::from_fn(m.nrows(), m.ncols(), |i, j| {
        (m[(i, j)] + m[(j, i)].conj()) * 0.5
    });
    let vals = hermitian_eigenvalues(&sym)?;
    let min_eig = vals[0];
    let mut pd = min_eig > tol.abs_eps;
    if pd && m.nrows() <= 64 {
        pd = pivoted_cholesky_pd(&sym, tol.abs_eps);
    }
    Ok(PdVerdict {
        hermitian: true,
        positive_definite: pd,
        min_eigenvalue: Some(min_eig),
        hermitian_residual,
    })
}
