//! Per-iteration records and the common result type for solver runs.

use serde::Serialize;

use crate::cost::JointPoint;
use crate::rotation::RotationKind;

/// One row of a solver run. `cost` is the running objective value after the
/// step; norms are measured at the start of the iteration.
#[derive(Clone, Debug, Serialize)]
pub struct IterationTrace {
    pub iter: usize,
    /// 1 = Stiefel block, 2 = special-linear block.
    pub block: u8,
    /// Zero-based rotation pair, block 2 only.
    pub pair: Option<(usize, usize)>,
    pub kind: Option<RotationKind>,
    pub cost: f64,
    pub grad_f1: f64,
    pub grad_f2: f64,
    pub grad_f: f64,
    /// ‖t·Z‖ for block 1, ‖Ψ − I₂‖ for block 2.
    pub step_size: f64,
    pub decrease: f64,
    pub norm_u: f64,
    pub norm_x: f64,
    pub cond_x: f64,
    /// Closed-form predicted decrease of the chosen rotation (block 2).
    pub predicted_decrease: Option<f64>,
    /// ‖∂ν(I₂)‖ of the selected elementary function (block 2).
    pub selection_norm: Option<f64>,
    /// Whether the shrinking-gradient monitor ‖tZ‖ ≥ κ_p‖grad‖ held (block 1).
    pub shrinking_ok: Option<bool>,
    /// ‖UᴴU − I‖ at the new iterate.
    pub ortho_defect: f64,
    /// |det X − 1| at the new iterate.
    pub det_defect: f64,
}

/// Terminal state of a run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    /// Final gradient norm at or below the tolerance.
    Converged,
    MaxIters,
    /// No block could produce a numerically meaningful decrease.
    Stalled,
    /// Iterate norm exceeded the boundedness cap.
    Diverged,
}

impl std::fmt::Display for RunStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            RunStatus::Converged => "converged",
            RunStatus::MaxIters => "max_iters",
            RunStatus::Stalled => "stalled",
            RunStatus::Diverged => "diverged",
        };
        write!(f, "{s}")
    }
}

/// Everything a solver hands back.
#[derive(Clone, Debug)]
pub struct SolveRun {
    pub trace: Vec<IterationTrace>,
    pub final_point: JointPoint,
    pub status: RunStatus,
    pub initial_cost: f64,
    /// Exact re-evaluation at the final point (the trace column carries the
    /// running value).
    pub final_cost: f64,
    pub final_grad_f1: f64,
    pub final_grad_f2: f64,
    pub final_grad: f64,
    pub grad_tol_used: f64,
    pub wall_time_seconds: f64,
}

impl SolveRun {
    pub fn iterations(&self) -> usize {
        self.trace.len()
    }
}
