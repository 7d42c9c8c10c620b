//! Cyclic Jacobi eigensolver for Hermitian matrices, plus the positive
//! definite square-root helpers built on it (polar factors, determinant
//! repairs, condition numbers downstream all go through here).

use num_complex::Complex64;

use super::CMat;
use crate::error::{Error, Result};

/// Eigendecomposition of a Hermitian matrix: eigenvalues ascending and a
/// unitary matrix whose columns are the matching eigenvectors.
///
/// The input is symmetrized first; callers pass matrices that are Hermitian
/// up to roundoff.
pub fn hermitian_eig(a: &CMat) -> Result<(Vec<f64>, CMat)> {
    if !a.is_square() {
        return Err(Error::Dimension("hermitian_eig: not square".into()));
    }
    let n = a.rows();
    let mut m = a.herm_part();
    let mut v = CMat::identity(n);
    let scale = m.norm().max(1.0);
    let tol = 1e-14 * scale;

    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for i in 0..n {
            for j in i + 1..n {
                off = off.max(m[(i, j)].norm());
            }
        }
        if off <= tol {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[(p, q)];
                let r = apq.norm();
                if r <= tol * 1e-2 {
                    continue;
                }
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                // phase that makes the pivot real, then a real Jacobi rotation
                let phase = apq / r;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (tau - (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // J restricted to (p,q): [[c, s·phase], [−s·conj(phase)·… ]]
                let jpp = Complex64::new(c, 0.0);
                let jpq = phase * s;
                let jqp = -phase.conj() * s;
                let jqq = Complex64::new(c, 0.0);
                // m ← Jᴴ m J  (row update then column update)
                for k in 0..n {
                    let mp = m[(p, k)];
                    let mq = m[(q, k)];
                    m[(p, k)] = jpp.conj() * mp + jqp.conj() * mq;
                    m[(q, k)] = jpq.conj() * mp + jqq.conj() * mq;
                }
                for k in 0..n {
                    let mp = m[(k, p)];
                    let mq = m[(k, q)];
                    m[(k, p)] = mp * jpp + mq * jqp;
                    m[(k, q)] = mp * jpq + mq * jqq;
                }
                for k in 0..n {
                    let vp = v[(k, p)];
                    let vq = v[(k, q)];
                    v[(k, p)] = vp * jpp + vq * jqp;
                    v[(k, q)] = vp * jpq + vq * jqq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let evals: Vec<f64> = (0..n).map(|i| m[(i, i)].re).collect();
    order.sort_by(|&a, &b| evals[a].partial_cmp(&evals[b]).unwrap());
    let sorted: Vec<f64> = order.iter().map(|&i| evals[i]).collect();
    let vecs = CMat::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok((sorted, vecs))
}

/// H^{1/2} for Hermitian positive semidefinite H.
pub fn hpd_sqrt(h: &CMat) -> Result<CMat> {
    spectral_map(h, |l| {
        if l < -1e-10 {
            Err(Error::Domain(format!("hpd_sqrt: negative eigenvalue {l}")))
        } else {
            Ok(l.max(0.0).sqrt())
        }
    })
}

/// H^{−1/2} for Hermitian positive definite H.
pub fn hpd_inv_sqrt(h: &CMat) -> Result<CMat> {
    let scale = h.norm().max(f64::MIN_POSITIVE);
    spectral_map(h, move |l| {
        if l <= 1e-13 * scale {
            Err(Error::Numerical(format!(
                "hpd_inv_sqrt: eigenvalue {l} too small"
            )))
        } else {
            Ok(1.0 / l.sqrt())
        }
    })
}

fn spectral_map(h: &CMat, f: impl Fn(f64) -> Result<f64>) -> Result<CMat> {
    let (evals, v) = hermitian_eig(h)?;
    let mapped: Result<Vec<f64>> = evals.iter().map(|&l| f(l)).collect();
    let d = CMat::diag(
        &mapped?
            .into_iter()
            .map(|x| Complex64::new(x, 0.0))
            .collect::<Vec<_>>(),
    );
    Ok(v.matmul(&d).matmul(&v.adjoint()))
}
