//! Gradient-based block coordinate descent on St(m,n,ℂ) × SL_m(ℂ): each
//! iteration picks the block whose restricted Riemannian gradient carries
//! the larger share of the full gradient norm, then takes one line-search
//! step (U block) or one elementary rotation (X block).

use std::time::Instant;

use serde::Serialize;

use crate::cost::{congest_base, cost, rgrad_u, JadmProblem, JointPoint};
use crate::error::{Error, Result};
use crate::jacobi::{condition_number, Family, JacobiEngine, RotationParams, StepOutcome, StopRule};
use crate::linesearch::{armijo_step, steepest_descent_direction, LineSearchParams};
use crate::manifold::{SlTangentCoord, StiefelTangent};
use crate::trace::{IterationTrace, RunStatus, SolveRun};

/// Configuration of a BCD run.
#[derive(Clone, Debug, Serialize)]
pub struct BcdConfig {
    /// Block-selection threshold υ ∈ (0, √2/2): the chosen block must carry
    /// at least υ·‖grad f‖ of gradient norm.
    pub upsilon: f64,
    pub family: Family,
    pub stop: StopRule,
    pub line_search: LineSearchParams,
    pub rotation: RotationParams,
}

impl BcdConfig {
    pub fn new(family: Family) -> Self {
        BcdConfig {
            upsilon: 0.5,
            family,
            stop: StopRule::default(),
            line_search: LineSearchParams::default(),
            rotation: RotationParams::new(family),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.upsilon > 0.0 && self.upsilon < std::f64::consts::FRAC_1_SQRT_2) {
            return Err(Error::Domain(format!(
                "upsilon must lie in (0, sqrt(2)/2), got {}",
                self.upsilon
            )));
        }
        if self.family.is_cyclic() {
            return Err(Error::Domain(
                "BCD uses the gradient-based families (GLU or GLQ)".into(),
            ));
        }
        if self.rotation.family != self.family {
            return Err(Error::Domain("rotation family differs from BCD family".into()));
        }
        self.line_search.validate()?;
        self.rotation.validate()
    }
}

/// Riemannian gradients of both restricted functions at ω, with their norms
/// in the respective metrics and the product-manifold total.
#[derive(Clone, Debug)]
pub struct GradientBundle {
    pub rgrad_u: StiefelTangent,
    pub lambda: SlTangentCoord,
    pub norm_u_block: f64,
    pub norm_x_block: f64,
    pub norm_total: f64,
}

impl GradientBundle {
    fn from_parts(rgrad_u: StiefelTangent, lambda: SlTangentCoord) -> Self {
        let n1 = rgrad_u.norm();
        let n2 = lambda.norm();
        GradientBundle {
            rgrad_u,
            lambda,
            norm_u_block: n1,
            norm_x_block: n2,
            norm_total: (n1 * n1 + n2 * n2).sqrt(),
        }
    }
}

/// Both block gradients at ω. ‖grad f₂‖ is the left-invariant norm ‖Λ‖.
pub fn block_gradients(problem: &JadmProblem, omega: &JointPoint) -> Result<GradientBundle> {
    let g1 = rgrad_u(problem, omega)?;
    let lambda = crate::cost::rgrad_x(problem, omega)?;
    Ok(GradientBundle::from_parts(g1, lambda))
}

/// Block with the larger restricted gradient norm (ties prefer the U
/// block); `None` when the full gradient vanishes. The returned block
/// always satisfies ‖grad f_t‖ ≥ υ‖grad f‖ for any υ < √2/2.
pub fn select_block(bundle: &GradientBundle, upsilon: f64) -> Option<u8> {
    if bundle.norm_total == 0.0 {
        return None;
    }
    let block = if bundle.norm_u_block >= bundle.norm_x_block {
        1
    } else {
        2
    };
    debug_assert!(
        bundle.norm_u_block.max(bundle.norm_x_block) >= upsilon * bundle.norm_total,
        "max block always carries at least 1/sqrt(2) of the total norm"
    );
    let _ = upsilon;
    Some(block)
}

/// Runs BCD from ω₀. Produces a full per-iteration trace; the cost column
/// decreases monotonically by construction of the two block solvers.
pub fn run_bcd(problem: &JadmProblem, omega0: &JointPoint, config: &BcdConfig) -> Result<SolveRun> {
    config.validate()?;
    let start = Instant::now();
    let mut u = omega0.u.clone();
    let mut engine = JacobiEngine::new(
        congest_base(problem, &u)?,
        omega0.x.clone(),
        problem.weights().to_vec(),
        problem.dagger(),
    );
    let initial_cost = cost(problem, omega0)?;
    let grad_tol = config.stop.resolve_grad_tol(initial_cost);
    let mut running_cost = initial_cost;
    let mut warm_t = config.line_search.t_init;
    let mut trace: Vec<IterationTrace> = Vec::new();

    let status = loop {
        let omega = JointPoint::new(u.clone(), engine.x().clone())?;
        let g1 = rgrad_u(problem, &omega)?;
        let lambda = engine.lambda()?;
        let bundle = GradientBundle::from_parts(g1, lambda);

        if bundle.norm_total <= grad_tol {
            break RunStatus::Converged;
        }
        if omega.norm() > config.stop.norm_cap {
            break RunStatus::Diverged;
        }
        if trace.len() >= config.stop.max_iters {
            break RunStatus::MaxIters;
        }
        let Some(primary) = select_block(&bundle, config.upsilon) else {
            break RunStatus::Converged;
        };
        // a block is admissible for the selection inequality when it carries
        // at least υ of the total norm; the fallback block must also qualify
        let admissible = |block: u8| {
            let n = if block == 1 {
                bundle.norm_u_block
            } else {
                bundle.norm_x_block
            };
            n >= config.upsilon * bundle.norm_total
        };

        let mut stepped = false;
        for (attempt, block) in [primary, 3 - primary].into_iter().enumerate() {
            if attempt == 1 && !admissible(block) {
                break;
            }
            if block == 1 {
                let direction = steepest_descent_direction(&bundle.rgrad_u);
                let x_frozen = engine.x().clone();
                let mut restricted = |cand: &crate::manifold::StiefelPoint| -> Result<f64> {
                    cost(problem, &JointPoint::new(cand.clone(), x_frozen.clone())?)
                };
                let f0 = restricted(&u)?;
                match armijo_step(
                    &mut restricted,
                    &u,
                    f0,
                    &bundle.rgrad_u,
                    &direction,
                    &config.line_search,
                    warm_t,
                ) {
                    Ok(step) => {
                        u = step.point.clone();
                        engine = JacobiEngine::new(
                            congest_base(problem, &u)?,
                            engine.x().clone(),
                            problem.weights().to_vec(),
                            problem.dagger(),
                        );
                        running_cost -= step.decrease;
                        warm_t = (step.t / config.line_search.backtrack)
                            .min(config.line_search.t_init);
                        trace.push(IterationTrace {
                            iter: trace.len() + 1,
                            block: 1,
                            pair: None,
                            kind: None,
                            cost: running_cost,
                            grad_f1: bundle.norm_u_block,
                            grad_f2: bundle.norm_x_block,
                            grad_f: bundle.norm_total,
                            step_size: step.step_norm,
                            decrease: step.decrease,
                            norm_u: u.mat().norm(),
                            norm_x: engine.x().mat().norm(),
                            cond_x: condition_number(engine.x().mat()),
                            predicted_decrease: None,
                            selection_norm: None,
                            shrinking_ok: Some(step.shrinking_ok),
                            ortho_defect: u.ortho_defect(),
                            det_defect: engine.x().det_defect()?,
                        });
                        stepped = true;
                    }
                    Err(Error::StepFailure(_)) => continue,
                    Err(e) => return Err(e),
                }
            } else {
                match engine.rotation_step(&bundle.lambda, &config.rotation)? {
                    StepOutcome::Applied(rec) => {
                        running_cost -= rec.actual_decrease;
                        trace.push(IterationTrace {
                            iter: trace.len() + 1,
                            block: 2,
                            pair: Some(rec.pair),
                            kind: Some(rec.kind),
                            cost: running_cost,
                            grad_f1: bundle.norm_u_block,
                            grad_f2: bundle.norm_x_block,
                            grad_f: bundle.norm_total,
                            step_size: rec.psi_dist,
                            decrease: rec.actual_decrease,
                            norm_u: u.mat().norm(),
                            norm_x: engine.x().mat().norm(),
                            cond_x: condition_number(engine.x().mat()),
                            predicted_decrease: Some(rec.predicted_decrease),
                            selection_norm: Some(rec.derivative_norm),
                            shrinking_ok: None,
                            ortho_defect: u.ortho_defect(),
                            det_defect: engine.x().det_defect()?,
                        });
                        stepped = true;
                    }
                    StepOutcome::Stationary | StepOutcome::Stalled => continue,
                }
            }
            if stepped {
                break;
            }
        }
        if !stepped {
            break RunStatus::Stalled;
        }
    };

    let final_point = JointPoint::new(u, engine.x().clone())?;
    let final_cost = cost(problem, &final_point)?;
    let bundle = block_gradients(problem, &final_point)?;
    Ok(SolveRun {
        trace,
        status,
        initial_cost,
        final_cost,
        final_grad_f1: bundle.norm_u_block,
        final_grad_f2: bundle.norm_x_block,
        final_grad: bundle.norm_total,
        grad_tol_used: grad_tol,
        wall_time_seconds: start.elapsed().as_secs_f64(),
        final_point,
    })
}
