//! Dense complex matrices and the handful of kernels everything else is
//! built on: the real inner product ⟨X,Y⟩ = Re tr(XᴴY), the zero-diagonal
//! operator, the matrix exponential, LU-based solves and a Hermitian
//! eigensolver.
//!
//! Matrices are row-major `Complex64` buffers. Problem sizes are desk scale
//! (m, n ≤ 64), so everything is straightforward dense arithmetic.

mod eigh;
mod expm;
mod lu;

pub use eigh::{hermitian_eig, hpd_inv_sqrt, hpd_sqrt};
pub use expm::mat_exp;
pub use lu::LuFactors;

use num_complex::Complex64;
use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};

/// Dense complex matrix, row-major storage.
#[derive(Clone, PartialEq)]
pub struct CMat {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat {
            rows,
            cols,
            data: vec![Complex64::ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::ONE;
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMat { rows, cols, data }
    }

    /// Builds a matrix from nested rows, checking shape consistency and
    /// finiteness of every entry.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        if rows.is_empty() || rows[0].is_empty() {
            return Err(Error::Dimension("empty matrix".into()));
        }
        let cols = rows[0].len();
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        let m = CMat {
            rows: rows.len(),
            cols,
            data: rows.iter().flatten().copied().collect(),
        };
        m.check_finite()?;
        Ok(m)
    }

    pub fn diag(entries: &[Complex64]) -> Self {
        let n = entries.len();
        let mut m = CMat::zeros(n, n);
        for (i, &e) in entries.iter().enumerate() {
            m[(i, i)] = e;
        }
        m
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

    pub fn same_shape(&self, other: &CMat) -> bool {
        self.rows == other.rows && self.cols == other.cols
    }

    pub fn check_finite(&self) -> Result<()> {
        if self.data.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            Ok(())
        } else {
            Err(Error::Domain("non-finite matrix entry".into()))
        }
    }

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Matrix product `self * rhs`. Panics on shape mismatch; callers that
    /// take user input validate shapes first.
    pub fn matmul(&self, rhs: &CMat) -> CMat {
        assert_eq!(self.cols, rhs.rows, "matmul shape mismatch");
        let mut out = CMat::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == Complex64::ZERO {
                    continue;
                }
                let rrow = &rhs.data[k * rhs.cols..(k + 1) * rhs.cols];
                let orow = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, &b) in orow.iter_mut().zip(rrow) {
                    *o += a * b;
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &CMat) -> CMat {
        assert!(self.same_shape(rhs), "add shape mismatch");
        self.zip(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &CMat) -> CMat {
        assert!(self.same_shape(rhs), "sub shape mismatch");
        self.zip(rhs, |a, b| a - b)
    }

    fn zip(&self, rhs: &CMat, f: impl Fn(Complex64, Complex64) -> Complex64) -> CMat {
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    pub fn scale(&self, s: f64) -> CMat {
        self.map(|z| z * s)
    }

    pub fn scale_c(&self, s: Complex64) -> CMat {
        self.map(|z| z * s)
    }

    pub fn neg(&self) -> CMat {
        self.map(|z| -z)
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> CMat {
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&z| f(z)).collect(),
        }
    }

    /// In-place `self += s * rhs`.
    pub fn axpy(&mut self, s: Complex64, rhs: &CMat) {
        assert!(self.same_shape(rhs), "axpy shape mismatch");
        for (a, &b) in self.data.iter_mut().zip(&rhs.data) {
            *a += s * b;
        }
    }

    pub fn transpose(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> CMat {
        self.map(|z| z.conj())
    }

    /// Conjugate transpose Xᴴ.
    pub fn adjoint(&self) -> CMat {
        CMat::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> Complex64 {
        assert!(self.is_square(), "trace of non-square matrix");
        (0..self.rows).map(|i| self[(i, i)]).sum()
    }

    /// Frobenius norm.
    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// Squared Frobenius norm = ⟨X,X⟩.
    pub fn norm_sq(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum()
    }

    /// Maximum absolute column sum, used by the exponential scaling logic.
    pub fn one_norm(&self) -> f64 {
        (0..self.cols)
            .map(|j| (0..self.rows).map(|i| self[(i, j)].norm()).sum())
            .fold(0.0_f64, f64::max)
    }

    /// ‖X − Xᴴ‖, zero iff Hermitian.
    pub fn hermitian_defect(&self) -> f64 {
        self.sub(&self.adjoint()).norm()
    }

    /// ‖X − Xᵀ‖, zero iff complex symmetric.
    pub fn symmetric_defect(&self) -> f64 {
        self.sub(&self.transpose()).norm()
    }

    /// Hermitian part (X + Xᴴ)/2.
    pub fn herm_part(&self) -> CMat {
        self.add(&self.adjoint()).scale(0.5)
    }

    /// Skew-Hermitian part (X − Xᴴ)/2.
    pub fn skew_part(&self) -> CMat {
        self.sub(&self.adjoint()).scale(0.5)
    }

    pub fn det(&self) -> Result<Complex64> {
        Ok(LuFactors::new(self)?.det())
    }

    pub fn inverse(&self) -> Result<CMat> {
        LuFactors::new(self)?.inverse()
    }

    /// Solves `self · X = rhs`.
    pub fn solve(&self, rhs: &CMat) -> Result<CMat> {
        LuFactors::new(self)?.solve(rhs)
    }
}

impl Index<(usize, usize)> for CMat {
    type Output = Complex64;
    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for CMat {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for CMat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "CMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:.4}{:+.4}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Real-valued inner product ⟨X,Y⟩ = Re tr(XᴴY), which turns ℂ^{n×m} into a
/// real Euclidean space of dimension 2nm.
pub fn real_inner(x: &CMat, y: &CMat) -> Result<f64> {
    if !x.same_shape(y) {
        return Err(Error::Dimension(format!(
            "real_inner: {}x{} vs {}x{}",
            x.rows, x.cols, y.rows, y.cols
        )));
    }
    Ok(x.data
        .iter()
        .zip(&y.data)
        .map(|(a, b)| a.re * b.re + a.im * b.im)
        .sum())
}

/// Copy of `w` with the diagonal set to zero.
pub fn offdiag(w: &CMat) -> Result<CMat> {
    if !w.is_square() {
        return Err(Error::Dimension(format!(
            "offdiag: {}x{} not square",
            w.rows, w.cols
        )));
    }
    let mut out = w.clone();
    for i in 0..w.rows {
        out[(i, i)] = Complex64::ZERO;
    }
    Ok(out)
}

/// Squared off-diagonal energy ‖offdiag(W)‖² without allocating.
pub fn offdiag_norm_sq(w: &CMat) -> f64 {
    let n = w.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += w[(i, j)].norm_sqr();
            }
        }
    }
    s
}
