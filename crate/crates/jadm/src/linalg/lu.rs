//! LU factorization with partial pivoting for square complex matrices.
//! Backs determinants, inverses and the linear solves inside the matrix
//! exponential.

use num_complex::Complex64;

use super::CMat;
use crate::error::{Error, Result};

pub struct LuFactors {
    lu: CMat,
    piv: Vec<usize>,
    sign_flips: usize,
}

impl LuFactors {
    pub fn new(a: &CMat) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::Dimension(format!(
                "LU of non-square {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        let n = a.rows();
        let mut lu = a.clone();
        let mut piv: Vec<usize> = (0..n).collect();
        let mut sign_flips = 0;
        for k in 0..n {
            let mut p = k;
            let mut best = lu[(k, k)].norm();
            for i in k + 1..n {
                let v = lu[(i, k)].norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if p != k {
                for j in 0..n {
                    let t = lu[(k, j)];
                    lu[(k, j)] = lu[(p, j)];
                    lu[(p, j)] = t;
                }
                piv.swap(k, p);
                sign_flips += 1;
            }
            let pivot = lu[(k, k)];
            if pivot == Complex64::ZERO {
                continue; // singular; det() will report zero
            }
            for i in k + 1..n {
                let f = lu[(i, k)] / pivot;
                lu[(i, k)] = f;
                for j in k + 1..n {
                    let s = lu[(k, j)];
                    lu[(i, j)] -= f * s;
                }
            }
        }
        Ok(LuFactors { lu, piv, sign_flips })
    }

    pub fn det(&self) -> Complex64 {
        let n = self.lu.rows();
        let mut d = if self.sign_flips % 2 == 0 {
            Complex64::ONE
        } else {
            -Complex64::ONE
        };
        for i in 0..n {
            d *= self.lu[(i, i)];
        }
        d
    }

    /// Solves A X = B for (possibly multi-column) B.
    pub fn solve(&self, b: &CMat) -> Result<CMat> {
        let n = self.lu.rows();
        if b.rows() != n {
            return Err(Error::Dimension("solve rhs rows".into()));
        }
        for i in 0..n {
            if self.lu[(i, i)] == Complex64::ZERO {
                return Err(Error::Numerical("singular matrix in solve".into()));
            }
        }
        let cols = b.cols();
        let mut x = CMat::zeros(n, cols);
        for i in 0..n {
            for j in 0..cols {
                x[(i, j)] = b[(self.piv[i], j)];
            }
        }
        // forward substitution (unit lower triangle)
        for k in 0..n {
            for i in k + 1..n {
                let f = self.lu[(i, k)];
                if f == Complex64::ZERO {
                    continue;
                }
                for j in 0..cols {
                    let s = x[(k, j)];
                    x[(i, j)] -= f * s;
                }
            }
        }
        // back substitution
        for k in (0..n).rev() {
            let d = self.lu[(k, k)];
            for j in 0..cols {
                x[(k, j)] /= d;
            }
            for i in 0..k {
                let f = self.lu[(i, k)];
                if f == Complex64::ZERO {
                    continue;
                }
                for j in 0..cols {
                    let s = x[(k, j)];
                    x[(i, j)] -= f * s;
                }
            }
        }
        Ok(x)
    }

    pub fn inverse(&self) -> Result<CMat> {
        self.solve(&CMat::identity(self.lu.rows()))
    }
}
