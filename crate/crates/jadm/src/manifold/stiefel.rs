//! Points and tangent vectors on St(m,n,ℂ) = {U ∈ ℂ^{n×m} : UᴴU = I_m},
//! with the embedded (Frobenius) metric.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{hpd_inv_sqrt, mat_exp, real_inner, CMat};

/// Orthonormality drift below this is accepted as-is.
const ORTHO_TOL: f64 = 1e-10;
/// Drift up to this is silently repaired by the polar factor.
const REPAIR_TOL: f64 = 1e-6;
/// Tangents are compared to their base point with this tolerance.
const BASE_TOL: f64 = 1e-9;

/// A point U on the complex Stiefel manifold (n×m, n ≥ m, UᴴU = I_m).
#[derive(Clone, Debug, PartialEq)]
pub struct StiefelPoint {
    u: CMat,
}

impl StiefelPoint {
    /// Wraps an n×m matrix as a manifold point. Drift ‖UᴴU − I‖ ≤ 1e−6 is
    /// repaired by replacing U with its polar factor (the closest matrix
    /// with orthonormal columns); larger drift is rejected.
    pub fn new(u: CMat) -> Result<Self> {
        if u.rows() < u.cols() {
            return Err(Error::Dimension(format!(
                "Stiefel point needs n >= m, got {}x{}",
                u.rows(),
                u.cols()
            )));
        }
        u.check_finite()?;
        let drift = gram_defect(&u);
        if drift <= ORTHO_TOL {
            return Ok(StiefelPoint { u });
        }
        if drift > REPAIR_TOL {
            return Err(Error::Domain(format!(
                "orthonormality drift {drift:.3e} beyond repair threshold"
            )));
        }
        let gram = u.adjoint().matmul(&u);
        let repaired = u.matmul(&hpd_inv_sqrt(&gram)?);
        let residual = gram_defect(&repaired);
        if residual > ORTHO_TOL {
            return Err(Error::Numerical(format!(
                "polar repair left drift {residual:.3e}"
            )));
        }
        Ok(StiefelPoint { u: repaired })
    }

    /// Identity-like frame: the first m columns of I_n.
    pub fn standard(n: usize, m: usize) -> Result<Self> {
        if n < m {
            return Err(Error::Dimension("standard frame needs n >= m".into()));
        }
        Ok(StiefelPoint {
            u: CMat::from_fn(n, m, |i, j| {
                if i == j {
                    Complex64::ONE
                } else {
                    Complex64::ZERO
                }
            }),
        })
    }

    pub fn mat(&self) -> &CMat {
        &self.u
    }

    pub fn n(&self) -> usize {
        self.u.rows()
    }

    pub fn m(&self) -> usize {
        self.u.cols()
    }

    /// ‖UᴴU − I_m‖.
    pub fn ortho_defect(&self) -> f64 {
        gram_defect(&self.u)
    }
}

fn gram_defect(u: &CMat) -> f64 {
    u.adjoint()
        .matmul(u)
        .sub(&CMat::identity(u.cols()))
        .norm()
}

/// A tangent vector Z ∈ T_U St, stored with its base point. The defining
/// condition is sym(UᴴZ) = 0.
#[derive(Clone, Debug)]
pub struct StiefelTangent {
    z: CMat,
    base: StiefelPoint,
}

impl StiefelTangent {
    pub fn mat(&self) -> &CMat {
        &self.z
    }

    pub fn base(&self) -> &StiefelPoint {
        &self.base
    }

    pub fn norm(&self) -> f64 {
        self.z.norm()
    }

    pub fn scale(&self, t: f64) -> StiefelTangent {
        StiefelTangent {
            z: self.z.scale(t),
            base: self.base.clone(),
        }
    }

    pub fn neg(&self) -> StiefelTangent {
        self.scale(-1.0)
    }

    /// ‖Proj_U(Z) − Z‖, zero for a true tangent.
    pub fn tangency_defect(&self) -> f64 {
        let p = stiefel_project(&self.base, &self.z).expect("shapes match by construction");
        p.z.sub(&self.z).norm()
    }

    fn based_at(&self, u: &StiefelPoint) -> bool {
        self.base.u.same_shape(&u.u) && self.base.u.sub(&u.u).norm() <= BASE_TOL
    }
}

/// Orthogonal projection of an ambient ξ onto T_U St: ξ − U·sym(Uᴴξ).
pub fn stiefel_project(u: &StiefelPoint, xi: &CMat) -> Result<StiefelTangent> {
    if !xi.same_shape(u.mat()) {
        return Err(Error::Dimension(format!(
            "stiefel_project: ambient {}x{} vs point {}x{}",
            xi.rows(),
            xi.cols(),
            u.n(),
            u.m()
        )));
    }
    let sym = u.mat().adjoint().matmul(xi).herm_part();
    let z = xi.sub(&u.mat().matmul(&sym));
    Ok(StiefelTangent {
        z,
        base: u.clone(),
    })
}

/// Riemannian gradient from a Euclidean gradient (∇h = 2 ∂h/∂X* convention):
/// the projection of ∇h onto the tangent space.
pub fn stiefel_rgrad(u: &StiefelPoint, egrad: &CMat) -> Result<StiefelTangent> {
    stiefel_project(u, egrad)
}

/// Exponential map on the Stiefel manifold:
/// Exp_U(Z) = [U Z] · exp([[A, −ZᴴZ], [I, A]]) · [exp(−A); 0] with A = UᴴZ.
pub fn stiefel_exp(u: &StiefelPoint, z: &StiefelTangent) -> Result<StiefelPoint> {
    if !z.based_at(u) {
        return Err(Error::Contract(
            "stiefel_exp: tangent is based at a different point".into(),
        ));
    }
    let m = u.m();
    let a = u.mat().adjoint().matmul(z.mat());
    let zhz = z.mat().adjoint().matmul(z.mat());
    let mut block = CMat::zeros(2 * m, 2 * m);
    for i in 0..m {
        for j in 0..m {
            block[(i, j)] = a[(i, j)];
            block[(i, m + j)] = -zhz[(i, j)];
            block[(m + i, m + j)] = a[(i, j)];
        }
        block[(m + i, i)] = Complex64::ONE;
    }
    let big = mat_exp(&block)?;
    let ema = mat_exp(&a.neg())?;
    // C = exp(block)[:, :m] · exp(−A), split into its top and bottom halves
    let mut top = CMat::zeros(m, m);
    let mut bottom = CMat::zeros(m, m);
    for i in 0..m {
        for j in 0..m {
            let mut t = Complex64::ZERO;
            let mut b = Complex64::ZERO;
            for k in 0..m {
                t += big[(i, k)] * ema[(k, j)];
                b += big[(m + i, k)] * ema[(k, j)];
            }
            top[(i, j)] = t;
            bottom[(i, j)] = b;
        }
    }
    let result = u.mat().matmul(&top).add(&z.mat().matmul(&bottom));
    StiefelPoint::new(result)
}

/// Embedded metric on tangents (both must share the base point).
pub fn stiefel_metric(a: &StiefelTangent, b: &StiefelTangent) -> Result<f64> {
    real_inner(a.mat(), b.mat())
}
