//! Backtracking line search on the Stiefel block: steepest-descent
//! directions, the sufficient-decrease (first Wolfe / Armijo) acceptance
//! test, and the shrinking-gradient monitor.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::real_inner;
use crate::manifold::{stiefel_exp, StiefelPoint, StiefelTangent};

/// Line-search configuration.
///
/// `delta_s` is the direction-quality constant of the descent condition
/// ⟨grad, Z⟩ ≤ −δ_s‖grad‖‖Z‖; `delta_w` the sufficient-decrease constant;
/// `backtrack` the step-shrink factor τ; `kappa_p` the shrinking-gradient
/// monitor threshold (recorded, never enforced).
#[derive(Clone, Copy, Debug, Serialize)]
pub struct LineSearchParams {
    pub delta_s: f64,
    pub delta_w: f64,
    pub backtrack: f64,
    pub t_init: f64,
    pub max_backtracks: usize,
    pub kappa_p: f64,
}

impl Default for LineSearchParams {
    fn default() -> Self {
        LineSearchParams {
            delta_s: 0.5,
            delta_w: 1e-4,
            backtrack: 0.5,
            t_init: 1.0,
            max_backtracks: 50,
            kappa_p: 1e-4,
        }
    }
}

impl LineSearchParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.delta_s > 0.0 && self.delta_s <= 1.0) {
            return Err(Error::Domain("delta_s must lie in (0, 1]".into()));
        }
        if !(self.delta_w > 0.0 && self.delta_w < 1.0) {
            return Err(Error::Domain("delta_w must lie in (0, 1)".into()));
        }
        if !(self.backtrack > 0.0 && self.backtrack < 1.0) {
            return Err(Error::Domain("backtrack factor must lie in (0, 1)".into()));
        }
        if !(self.t_init > 0.0) {
            return Err(Error::Domain("t_init must be positive".into()));
        }
        Ok(())
    }
}

/// The steepest-descent direction −grad, which meets the descent condition
/// with δ_s = 1.
pub fn steepest_descent_direction(grad: &StiefelTangent) -> StiefelTangent {
    grad.neg()
}

/// Checks the descent condition ⟨grad, Z⟩ ≤ −δ_s‖grad‖‖Z‖ for a
/// caller-supplied direction.
pub fn validate_direction(
    grad: &StiefelTangent,
    z: &StiefelTangent,
    delta_s: f64,
) -> Result<()> {
    let inner = real_inner(grad.mat(), z.mat())?;
    let bound = -delta_s * grad.norm() * z.norm();
    // tiny slack so that the tight case δ_s = 1, Z = −grad passes in floats
    if inner <= bound + 1e-12 * (1.0 + grad.norm() * z.norm()) {
        Ok(())
    } else {
        Err(Error::Contract(format!(
            "search direction fails the descent condition: ⟨g,Z⟩ = {inner:.6e} > {bound:.6e}"
        )))
    }
}

/// An accepted backtracking step.
#[derive(Clone, Debug)]
pub struct ArmijoStep {
    pub t: f64,
    pub point: StiefelPoint,
    pub cost: f64,
    pub decrease: f64,
    pub backtracks: usize,
    /// ‖t·Z‖, the movement in the tangent space.
    pub step_norm: f64,
    /// Whether ‖t·Z‖ ≥ κ_p‖grad‖ held.
    pub shrinking_ok: bool,
}

/// Largest step t ∈ {t_start·τ^r} satisfying
/// p(Exp_U(tZ)) ≤ p(U) + δ_w·t·⟨grad, Z⟩.
///
/// `cost0` must equal `cost(u)`. Fails with `Error::StepFailure` when the
/// backtracking budget runs out (the caller may switch blocks).
pub fn armijo_step(
    cost: &mut dyn FnMut(&StiefelPoint) -> Result<f64>,
    u: &StiefelPoint,
    cost0: f64,
    grad: &StiefelTangent,
    z: &StiefelTangent,
    params: &LineSearchParams,
    t_start: f64,
) -> Result<ArmijoStep> {
    params.validate()?;
    validate_direction(grad, z, params.delta_s)?;
    let slope = real_inner(grad.mat(), z.mat())?;
    let z_norm = z.norm();
    if z_norm == 0.0 {
        // stationary: a no-op step
        return Ok(ArmijoStep {
            t: 0.0,
            point: u.clone(),
            cost: cost0,
            decrease: 0.0,
            backtracks: 0,
            step_norm: 0.0,
            shrinking_ok: true,
        });
    }
    let mut t = t_start;
    for r in 0..params.max_backtracks {
        let candidate = stiefel_exp(u, &z.scale(t))?;
        let f_t = cost(&candidate)?;
        if f_t <= cost0 + params.delta_w * t * slope {
            let step_norm = t * z_norm;
            return Ok(ArmijoStep {
                t,
                point: candidate,
                cost: f_t,
                decrease: cost0 - f_t,
                backtracks: r,
                step_norm,
                shrinking_ok: step_norm >= params.kappa_p * grad.norm(),
            });
        }
        t *= params.backtrack;
    }
    Err(Error::StepFailure(params.max_backtracks))
}
