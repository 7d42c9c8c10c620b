//! Points on SL_m(ℂ) = {X : det X = 1} with the left-invariant metric.
//! Tangent vectors are kept in left-translated coordinates Ω (trace zero),
//! i.e. the actual tangent is XΩ; in these coordinates the metric is the
//! flat real inner product and the gradient coordinate is Λ(X).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{mat_exp, real_inner, CMat};

/// Determinant drift accepted without repair.
const DET_TOL: f64 = 1e-8;
/// Drift up to this is repaired by rescaling with det(X)^{−1/m}.
const DET_REPAIR_TOL: f64 = 1e-4;
/// Trace tolerance for tangent coordinates.
const TRACE_TOL: f64 = 1e-10;

/// A point X ∈ SL_m(ℂ).
#[derive(Clone, Debug, PartialEq)]
pub struct SlPoint {
    x: CMat,
}

impl SlPoint {
    /// Wraps an m×m matrix with det X = 1. Drift |det−1| ∈ (1e−8, 1e−4] is
    /// repaired by rescaling with the principal m-th root of 1/det; larger
    /// drift is rejected.
    pub fn new(x: CMat) -> Result<Self> {
        if !x.is_square() {
            return Err(Error::Dimension("SL point must be square".into()));
        }
        x.check_finite()?;
        let det = x.det()?;
        let drift = (det - Complex64::ONE).norm();
        if drift <= DET_TOL {
            return Ok(SlPoint { x });
        }
        if drift > DET_REPAIR_TOL {
            return Err(Error::Domain(format!(
                "determinant drift {drift:.3e} beyond repair threshold"
            )));
        }
        let m = x.rows() as f64;
        // principal m-th root: det = r·e^{iφ} ⇒ scale by r^{−1/m} e^{−iφ/m}
        let scale = Complex64::from_polar(det.norm().powf(-1.0 / m), -det.arg() / m);
        let repaired = x.scale_c(scale);
        let residual = (repaired.det()? - Complex64::ONE).norm();
        if residual > DET_TOL {
            return Err(Error::Numerical(format!(
                "determinant repair left drift {residual:.3e}"
            )));
        }
        Ok(SlPoint { x: repaired })
    }

    pub fn identity(m: usize) -> Self {
        SlPoint {
            x: CMat::identity(m),
        }
    }

    pub fn mat(&self) -> &CMat {
        &self.x
    }

    pub fn m(&self) -> usize {
        self.x.rows()
    }

    pub fn det_defect(&self) -> Result<f64> {
        Ok((self.x.det()? - Complex64::ONE).norm())
    }

    /// Group multiplication X·V, revalidating the determinant.
    pub fn mul(&self, v: &CMat) -> Result<SlPoint> {
        SlPoint::new(self.x.matmul(v))
    }
}

/// Left-translated tangent coordinates Ω ∈ 𝔰𝔩_m(ℂ) (trace zero); the
/// tangent vector at X is XΩ.
#[derive(Clone, Debug)]
pub struct SlTangentCoord {
    omega: CMat,
}

impl SlTangentCoord {
    pub fn new(omega: CMat) -> Result<Self> {
        if !omega.is_square() {
            return Err(Error::Dimension("tangent coordinate must be square".into()));
        }
        let t = omega.trace().norm();
        if t > TRACE_TOL * (1.0 + omega.norm()) {
            return Err(Error::Domain(format!("tangent coordinate trace {t:.3e}")));
        }
        Ok(SlTangentCoord { omega })
    }

    pub fn zero(m: usize) -> Self {
        SlTangentCoord {
            omega: CMat::zeros(m, m),
        }
    }

    pub(crate) fn from_traceless(omega: CMat) -> Self {
        SlTangentCoord { omega }
    }

    pub fn mat(&self) -> &CMat {
        &self.omega
    }

    pub fn norm(&self) -> f64 {
        self.omega.norm()
    }

    pub fn scale(&self, t: f64) -> SlTangentCoord {
        SlTangentCoord {
            omega: self.omega.scale(t),
        }
    }

    pub fn at(&self, i: usize, j: usize) -> Complex64 {
        self.omega[(i, j)]
    }
}

/// Left-invariant metric in coordinates: ⟨XΩ₁, XΩ₂⟩_X = Re tr(Ω₁ᴴΩ₂),
/// independent of the base point.
pub fn sl_metric(a: &SlTangentCoord, b: &SlTangentCoord) -> Result<f64> {
    real_inner(a.mat(), b.mat())
}

/// Gradient coordinate Λ = Xᴴ∇g(X) − (tr(Xᴴ∇g(X))/m)·I from a Euclidean
/// gradient; the Riemannian gradient itself is X·Λ and its metric norm is
/// ‖Λ‖.
pub fn lambda_of(x: &SlPoint, egrad: &CMat) -> Result<SlTangentCoord> {
    if !egrad.same_shape(x.mat()) {
        return Err(Error::Dimension("lambda_of: gradient shape".into()));
    }
    let m = x.m();
    let xh_g = x.mat().adjoint().matmul(egrad);
    let shift = xh_g.trace() / m as f64;
    let mut omega = xh_g;
    for i in 0..m {
        omega[(i, i)] -= shift;
    }
    Ok(SlTangentCoord::from_traceless(omega))
}

/// Exponential map Exp_X(XΩ) = X·exp(Ω*)·exp(Ω − Ω*), where Ω* is the
/// entrywise conjugate. Both factors have unit determinant, so the result
/// stays in the group.
pub fn sl_exp(x: &SlPoint, omega: &SlTangentCoord) -> Result<SlPoint> {
    let conj = omega.mat().conj();
    let first = mat_exp(&conj)?;
    let second = mat_exp(&omega.mat().sub(&conj))?;
    x.mul(&first.matmul(&second))
}
