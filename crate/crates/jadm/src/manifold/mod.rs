//! First-order geometry of the two factor manifolds: the complex Stiefel
//! manifold St(m,n,ℂ) of orthonormal n×m frames and the special linear
//! group SL_m(ℂ). Points validate (and gently repair) their defining
//! constraints on construction; tangent vectors, projections, Riemannian
//! gradients and exponential maps live here.

mod sl;
mod stiefel;

pub use sl::{lambda_of, sl_exp, sl_metric, SlPoint, SlTangentCoord};
pub use stiefel::{
    stiefel_exp, stiefel_metric, stiefel_project, stiefel_rgrad, StiefelPoint, StiefelTangent,
};
