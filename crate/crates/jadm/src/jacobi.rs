//! Jacobi-type iterations on the special-linear block: gradient-based
//! rotation selection (the GLU family works with upper/lower/diagonal
//! rotations, the GLQ family with plane/lower/diagonal), the standalone
//! solvers built on them, and the cyclic-ordering baselines CLU/CLQ.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::cost::{congest_base, lambda_from_set, set_cost, transform_with_base, Dagger, JadmProblem, JointPoint};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, CMat};
use crate::manifold::{SlPoint, SlTangentCoord, StiefelPoint};
use crate::rotation::{
    build_gamma, derivative_norm, diagonal_coeffs, elementary_derivative, local_offdiag_energy,
    minimize_diagonal, minimize_plane, minimize_triangular, triangular_coeffs, Rotation2,
    RotationKind, TriangularRole,
};
use crate::trace::{IterationTrace, RunStatus, SolveRun};

/// Rotation family. The G variants choose the pair by the gradient rule;
/// the C variants sweep pairs cyclically and take the best of the family's
/// three rotation kinds at each pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Glu,
    Glq,
    Clu,
    Clq,
}

impl Family {
    pub fn kinds(&self) -> &'static [RotationKind] {
        match self {
            Family::Glu | Family::Clu => {
                &[RotationKind::Upper, RotationKind::Lower, RotationKind::Diagonal]
            }
            Family::Glq | Family::Clq => {
                &[RotationKind::Plane, RotationKind::Lower, RotationKind::Diagonal]
            }
        }
    }

    pub fn is_cyclic(&self) -> bool {
        matches!(self, Family::Clu | Family::Clq)
    }
}

impl std::fmt::Display for Family {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Family::Glu => "glu",
            Family::Glq => "glq",
            Family::Clu => "clu",
            Family::Clq => "clq",
        };
        write!(f, "{s}")
    }
}

/// Largest ε for which the LU-family selection inequality is always
/// satisfiable: √(2 / (3m(m−1))).
pub fn glu_epsilon_bound(m: usize) -> f64 {
    (2.0 / (3.0 * m as f64 * (m as f64 - 1.0))).sqrt()
}

/// The satisfiability bound that actually follows from the averaging
/// argument for the LQ family: √((3−√5) / (3m(m−1))).
pub fn glq_epsilon_bound_derived(m: usize) -> f64 {
    ((3.0 - 5.0f64.sqrt()) / (3.0 * m as f64 * (m as f64 - 1.0))).sqrt()
}

/// The looser LQ bound as stated with the algorithm: √((3+√5) / (3m(m−1))).
pub fn glq_epsilon_bound_stated(m: usize) -> f64 {
    ((3.0 + 5.0f64.sqrt()) / (3.0 * m as f64 * (m as f64 - 1.0))).sqrt()
}

/// Default gate constant: half of the provably satisfiable bound.
pub fn default_epsilon(family: Family, m: usize) -> f64 {
    match family {
        Family::Glu | Family::Clu => 0.5 * glu_epsilon_bound(m),
        Family::Glq | Family::Clq => 0.5 * glq_epsilon_bound_derived(m),
    }
}

/// Parameters of a rotation family.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct RotationParams {
    pub family: Family,
    /// Selection gate ε; `None` takes the family default for the problem's m.
    pub epsilon: Option<f64>,
    /// Safeguard ratio ς ∈ (0, 1/4) for the diagonal rotation.
    pub sigma_var: f64,
    /// Alignment threshold ϵ for the plane-rotation eigenvector branch.
    pub epsilon_inner: f64,
}

impl RotationParams {
    pub fn new(family: Family) -> Self {
        RotationParams {
            family,
            epsilon: None,
            sigma_var: 0.1,
            epsilon_inner: 0.1,
        }
    }

    pub fn resolve_epsilon(&self, m: usize) -> Result<f64> {
        let eps = self.epsilon.unwrap_or_else(|| default_epsilon(self.family, m));
        let bound = match self.family {
            Family::Glu | Family::Clu => glu_epsilon_bound(m),
            Family::Glq | Family::Clq => glq_epsilon_bound_stated(m),
        };
        if !(eps > 0.0 && eps < bound) {
            return Err(Error::Domain(format!(
                "epsilon {eps} outside (0, {bound}) for family {} at m={m}",
                self.family
            )));
        }
        Ok(eps)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma_var > 0.0 && self.sigma_var < 0.25) {
            return Err(Error::Domain("sigma_var must lie in (0, 1/4)".into()));
        }
        if self.epsilon_inner <= 0.0 {
            return Err(Error::Domain("epsilon_inner must be positive".into()));
        }
        Ok(())
    }
}

/// Outcome of the gradient-based selection: the admissible (pair, kind)
/// with the largest derivative norm.
#[derive(Clone, Copy, Debug)]
pub struct SelectionResult {
    pub pair: (usize, usize),
    pub kind: RotationKind,
    pub derivative_norm: f64,
    pub lambda_norm: f64,
}

/// Scans all pairs i < j and the family's kinds for the largest ‖∂ν(I₂)‖.
/// Ties break lexicographically on (i, j) and then on the family's kind
/// order. Returns `None` when ‖Λ‖ = 0.
pub fn select_rotation(lambda: &SlTangentCoord, family: Family, m: usize) -> Option<SelectionResult> {
    let lambda_norm = lambda.norm();
    if lambda_norm == 0.0 {
        return None;
    }
    let mut best: Option<SelectionResult> = None;
    for i in 0..m {
        for j in i + 1..m {
            for &kind in family.kinds() {
                let norm = derivative_norm(&elementary_derivative(lambda, (i, j), kind));
                let better = match &best {
                    None => true,
                    Some(b) => norm > b.derivative_norm,
                };
                if better {
                    best = Some(SelectionResult {
                        pair: (i, j),
                        kind,
                        derivative_norm: norm,
                        lambda_norm,
                    });
                }
            }
        }
    }
    best
}

/// What a single rotation attempt produced.
#[derive(Clone, Debug)]
pub enum StepOutcome {
    Applied(StepRecord),
    /// ‖Λ‖ = 0: nothing to select.
    Stationary,
    /// No candidate clears the numerical decrease floor.
    Stalled,
}

/// Record of one applied rotation.
#[derive(Clone, Debug)]
pub struct StepRecord {
    pub pair: (usize, usize),
    pub kind: RotationKind,
    pub predicted_decrease: f64,
    pub actual_decrease: f64,
    pub psi_dist: f64,
    pub derivative_norm: f64,
    pub lambda_norm: f64,
    pub cost_after: f64,
}

/// Measured decreases below this multiple of the touched off-diagonal
/// energy are treated as numerical noise rather than progress. The
/// measurement itself sums a few hundred squared entries, so its relative
/// error sits near 2e−14; one extra decade keeps the monotonicity
/// bookkeeping exact without discarding real progress.
const DECREASE_FLOOR_REL: f64 = 1e-13;
/// Full W-cache recomputation period, in applied rotations.
const REFRESH_PERIOD: usize = 50;

/// Iteration state for the X block at fixed U: the congested base
/// B^(ℓ) = U^†A^(ℓ)U, the current X, and the cached transformed set
/// W^(ℓ) = X^†B^(ℓ)X (updated incrementally, rebuilt every
/// `REFRESH_PERIOD` rotations to bound drift).
pub struct JacobiEngine {
    b: Vec<CMat>,
    x: SlPoint,
    w: Vec<CMat>,
    weights: Vec<f64>,
    dagger: Dagger,
    cost: f64,
    steps_since_refresh: usize,
    cyclic_cursor: usize,
}

impl JacobiEngine {
    pub fn new(b: Vec<CMat>, x0: SlPoint, weights: Vec<f64>, dagger: Dagger) -> Self {
        let w = transform_with_base(&b, &x0, dagger);
        let cost = set_cost(&w, &weights);
        JacobiEngine {
            b,
            x: x0,
            w,
            weights,
            dagger,
            cost,
            steps_since_refresh: 0,
            cyclic_cursor: 0,
        }
    }

    pub fn x(&self) -> &SlPoint {
        &self.x
    }

    pub fn wset(&self) -> &[CMat] {
        &self.w
    }

    pub fn running_cost(&self) -> f64 {
        self.cost
    }

    /// Exact cost at the current X, bypassing the incremental bookkeeping.
    pub fn exact_cost(&self) -> f64 {
        set_cost(
            &transform_with_base(&self.b, &self.x, self.dagger),
            &self.weights,
        )
    }

    pub fn m(&self) -> usize {
        self.x.m()
    }

    pub fn lambda(&self) -> Result<SlTangentCoord> {
        lambda_from_set(&self.w, &self.weights, self.dagger)
    }

    /// Closed-form minimizer for one (pair, kind) with predicted decrease.
    pub fn minimizer(
        &self,
        pair: (usize, usize),
        kind: RotationKind,
        params: &RotationParams,
    ) -> Result<(Rotation2, f64)> {
        match kind {
            RotationKind::Upper => Ok(minimize_triangular(&triangular_coeffs(
                &self.w,
                &self.weights,
                pair,
                TriangularRole::Upper,
                self.dagger,
            ))),
            RotationKind::Lower => Ok(minimize_triangular(&triangular_coeffs(
                &self.w,
                &self.weights,
                pair,
                TriangularRole::Lower,
                self.dagger,
            ))),
            RotationKind::Diagonal => minimize_diagonal(
                &diagonal_coeffs(&self.w, &self.weights, pair),
                params.sigma_var,
            ),
            RotationKind::Plane => minimize_plane(
                &build_gamma(&self.w, &self.weights, pair, self.dagger)?,
                params.epsilon_inner,
            ),
        }
    }

    /// Applies a rotation: X ← X·V, incremental W update, decrease measured
    /// from the off-diagonal energy actually touched.
    pub fn apply_rotation(&mut self, rot: &Rotation2, predicted: f64) -> Result<StepRecord> {
        let local_before = local_offdiag_energy(&self.w, &self.weights, rot.pair);
        let embedded = rot.embed(self.m())?;
        self.x = self.x.mul(&embedded)?;
        rot.apply_to_set(&mut self.w, self.dagger);
        let local_after = local_offdiag_energy(&self.w, &self.weights, rot.pair);
        let decrease = local_before - local_after;
        if decrease < -1e-10 * (1.0 + self.cost) {
            return Err(Error::Numerical(format!(
                "rotation increased the cost by {:.3e}",
                -decrease
            )));
        }
        self.cost -= decrease;
        self.steps_since_refresh += 1;
        if self.steps_since_refresh >= REFRESH_PERIOD {
            self.w = transform_with_base(&self.b, &self.x, self.dagger);
            self.steps_since_refresh = 0;
        }
        Ok(StepRecord {
            pair: rot.pair,
            kind: rot.kind,
            predicted_decrease: predicted,
            actual_decrease: decrease,
            psi_dist: rot.dist_from_identity(),
            derivative_norm: 0.0,
            lambda_norm: 0.0,
            cost_after: self.cost,
        })
    }

    fn decrease_floor(&self, pair: (usize, usize)) -> f64 {
        DECREASE_FLOOR_REL * local_offdiag_energy(&self.w, &self.weights, pair)
    }

    /// One gradient-selected rotation (the G families).
    pub fn gradient_step(&mut self, params: &RotationParams) -> Result<StepOutcome> {
        let lambda = self.lambda()?;
        self.rotation_step(&lambda, params)
    }

    /// Gradient-selected rotation against a caller-supplied Λ (which must
    /// describe the current iterate).
    ///
    /// Among every (pair, kind) admissible for the family whose derivative
    /// norm clears the gate ‖∂ν(I₂)‖ ≥ ε‖Λ‖, the candidate with the largest
    /// closed-form predicted decrease is applied. The gate is what the
    /// convergence analysis needs; picking the best decrease among gated
    /// candidates keeps the iterates from chasing large-derivative pairs
    /// whose quadratic coefficients allow almost no progress.
    pub fn rotation_step(
        &mut self,
        lambda: &SlTangentCoord,
        params: &RotationParams,
    ) -> Result<StepOutcome> {
        let lambda_norm = lambda.norm();
        if lambda_norm == 0.0 {
            return Ok(StepOutcome::Stationary);
        }
        let m = self.m();
        let epsilon = params.resolve_epsilon(m)?;
        let mut gated = 0usize;
        let mut best: Option<(Rotation2, f64, f64, f64)> = None;
        for i in 0..m {
            for j in i + 1..m {
                let floor = self.decrease_floor((i, j));
                for &kind in params.family.kinds() {
                    let dnorm = derivative_norm(&elementary_derivative(lambda, (i, j), kind));
                    if dnorm < epsilon * lambda_norm {
                        continue;
                    }
                    gated += 1;
                    let (rot, predicted) = self.minimizer((i, j), kind, params)?;
                    if predicted <= floor {
                        continue;
                    }
                    // decrease per unit rotation movement, the quantity the
                    // per-kind descent lemmas bound below by c·ε‖Λ‖
                    let score = predicted / rot.dist_from_identity();
                    let better = match &best {
                        None => true,
                        Some((_, _, s, _)) => score > *s,
                    };
                    if better {
                        best = Some((rot, predicted, score, dnorm));
                    }
                }
            }
        }
        if gated == 0 {
            // the maximizing candidate clears the gate for any epsilon below
            // the family bound, so an empty gate set is a numerical defect
            return Err(Error::Numerical(format!(
                "no rotation cleared the selection gate at ‖Λ‖ = {lambda_norm:.3e}"
            )));
        }
        let Some((rot, predicted, _, dnorm)) = best else {
            return Ok(StepOutcome::Stalled);
        };
        let mut record = self.apply_rotation(&rot, predicted)?;
        record.derivative_norm = dnorm;
        record.lambda_norm = lambda_norm;
        Ok(StepOutcome::Applied(record))
    }

    /// One cyclic-baseline rotation: visit pairs in row order, take the best
    /// of the family's kinds at the first pair that clears the floor.
    pub fn cyclic_step(&mut self, params: &RotationParams) -> Result<StepOutcome> {
        let m = self.m();
        let pairs: Vec<(usize, usize)> = (0..m)
            .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
            .collect();
        if pairs.is_empty() {
            return Ok(StepOutcome::Stationary);
        }
        let lambda = self.lambda()?;
        let lambda_norm = lambda.norm();
        for attempt in 0..pairs.len() {
            let pair = pairs[(self.cyclic_cursor + attempt) % pairs.len()];
            let mut best: Option<(Rotation2, f64, RotationKind)> = None;
            for &kind in params.family.kinds() {
                let (rot, predicted) = self.minimizer(pair, kind, params)?;
                let better = match &best {
                    None => true,
                    Some((_, p, _)) => predicted > *p,
                };
                if better {
                    best = Some((rot, predicted, kind));
                }
            }
            let (rot, predicted, kind) = best.expect("family has kinds");
            if predicted > self.decrease_floor(pair) {
                self.cyclic_cursor = (self.cyclic_cursor + attempt + 1) % pairs.len();
                let dnorm = derivative_norm(&elementary_derivative(&lambda, pair, kind));
                let mut record = self.apply_rotation(&rot, predicted)?;
                record.derivative_norm = dnorm;
                record.lambda_norm = lambda_norm;
                return Ok(StepOutcome::Applied(record));
            }
        }
        Ok(StepOutcome::Stalled)
    }

    pub fn step(&mut self, params: &RotationParams) -> Result<StepOutcome> {
        if params.family.is_cyclic() {
            self.cyclic_step(params)
        } else {
            self.gradient_step(params)
        }
    }
}

/// Stopping rule shared by the solvers.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct StopRule {
    /// Absolute gradient-norm tolerance; `None` resolves to
    /// 1e−8·(1 + initial cost) at run start.
    pub grad_tol: Option<f64>,
    pub max_iters: usize,
    /// Boundedness monitor: exceeding this iterate norm flags divergence.
    pub norm_cap: f64,
}

impl Default for StopRule {
    fn default() -> Self {
        StopRule {
            grad_tol: None,
            max_iters: 5000,
            norm_cap: 1e6,
        }
    }
}

impl StopRule {
    pub fn resolve_grad_tol(&self, initial_cost: f64) -> f64 {
        self.grad_tol.unwrap_or(1e-8 * (1.0 + initial_cost))
    }
}

/// Condition number of X from the extreme eigenvalues of XᴴX.
pub fn condition_number(x: &CMat) -> f64 {
    let gram = x.adjoint().matmul(x);
    match hermitian_eig(&gram) {
        Ok((evals, _)) => {
            let lo = evals.first().copied().unwrap_or(0.0).max(0.0);
            let hi = evals.last().copied().unwrap_or(0.0).max(0.0);
            if lo == 0.0 {
                f64::INFINITY
            } else {
                (hi / lo).sqrt()
            }
        }
        Err(_) => f64::NAN,
    }
}

/// Standalone Jacobi solver on the X block with U frozen at `u0`:
/// minimizes g(X) = f(U₀, X) by elementary rotations until ‖Λ(X)‖ falls
/// under the tolerance.
pub fn run_jacobi(
    problem: &JadmProblem,
    u0: &StiefelPoint,
    x0: &SlPoint,
    params: &RotationParams,
    stop: &StopRule,
) -> Result<SolveRun> {
    params.validate()?;
    if x0.m() != problem.m() {
        return Err(Error::Dimension("x0 size mismatch".into()));
    }
    let start = Instant::now();
    let b = congest_base(problem, u0)?;
    let mut engine = JacobiEngine::new(
        b,
        x0.clone(),
        problem.weights().to_vec(),
        problem.dagger(),
    );
    let initial_cost = engine.running_cost();
    let grad_tol = stop.resolve_grad_tol(initial_cost);
    let norm_u = u0.mat().norm();
    let mut trace: Vec<IterationTrace> = Vec::new();

    let status = loop {
        let lambda_norm = engine.lambda()?.norm();
        if lambda_norm <= grad_tol {
            break RunStatus::Converged;
        }
        if engine.x().mat().norm() > stop.norm_cap {
            break RunStatus::Diverged;
        }
        if trace.len() >= stop.max_iters {
            break RunStatus::MaxIters;
        }
        match engine.step(params)? {
            StepOutcome::Applied(rec) => {
                trace.push(IterationTrace {
                    iter: trace.len() + 1,
                    block: 2,
                    pair: Some(rec.pair),
                    kind: Some(rec.kind),
                    cost: rec.cost_after,
                    grad_f1: 0.0,
                    grad_f2: rec.lambda_norm,
                    grad_f: rec.lambda_norm,
                    step_size: rec.psi_dist,
                    decrease: rec.actual_decrease,
                    norm_u,
                    norm_x: engine.x().mat().norm(),
                    cond_x: condition_number(engine.x().mat()),
                    predicted_decrease: Some(rec.predicted_decrease),
                    selection_norm: Some(rec.derivative_norm),
                    shrinking_ok: None,
                    ortho_defect: u0.ortho_defect(),
                    det_defect: engine.x().det_defect()?,
                });
            }
            StepOutcome::Stationary => break RunStatus::Converged,
            StepOutcome::Stalled => break RunStatus::Stalled,
        }
    };

    let final_x = engine.x().clone();
    let final_cost = engine.exact_cost();
    let final_grad = engine.lambda()?.norm();
    Ok(SolveRun {
        trace,
        final_point: JointPoint::new(u0.clone(), final_x)?,
        status,
        initial_cost,
        final_cost,
        final_grad_f1: 0.0,
        final_grad_f2: final_grad,
        final_grad,
        grad_tol_used: grad_tol,
        wall_time_seconds: start.elapsed().as_secs_f64(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64 as C;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn traceless(m: usize, rng: &mut ChaCha8Rng) -> SlTangentCoord {
        let g = CMat::from_fn(m, m, |_, _| {
            C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        });
        let shift = g.trace() / m as f64;
        let mut o = g;
        for i in 0..m {
            o[(i, i)] -= shift;
        }
        SlTangentCoord::new(o).unwrap()
    }

    #[test]
    fn select_single_entry_upper() {
        let mut o = CMat::zeros(3, 3);
        o[(0, 1)] = C::ONE;
        let lambda = SlTangentCoord::new(o).unwrap();
        let sel = select_rotation(&lambda, Family::Glu, 3).unwrap();
        assert_eq!(sel.pair, (0, 1));
        assert_eq!(sel.kind, RotationKind::Upper);
        assert!((sel.derivative_norm - 1.0).abs() < 1e-15);
        assert!(sel.derivative_norm >= default_epsilon(Family::Glu, 3) * sel.lambda_norm);
    }

    #[test]
    fn select_diagonal_for_diagonal_lambda() {
        let o = CMat::diag(&[C::ONE, -C::ONE]);
        let lambda = SlTangentCoord::new(o).unwrap();
        let sel = select_rotation(&lambda, Family::Glu, 2).unwrap();
        assert_eq!(sel.kind, RotationKind::Diagonal);
        assert!((sel.derivative_norm - 2.0).abs() < 1e-15);
        assert!(sel.derivative_norm >= default_epsilon(Family::Glu, 2) * 2.0f64.sqrt());
    }

    #[test]
    fn selection_satisfies_quantitative_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(60);
        for m in 2..=8 {
            let glu_c = 2.0 / (3.0 * m as f64 * (m as f64 - 1.0));
            let glq_c = (3.0 - 5.0f64.sqrt()) / (3.0 * m as f64 * (m as f64 - 1.0));
            for _ in 0..100 {
                let lambda = traceless(m, &mut rng);
                let n2 = lambda.norm() * lambda.norm();
                let sel_u = select_rotation(&lambda, Family::Glu, m).unwrap();
                assert!(
                    sel_u.derivative_norm.powi(2) >= glu_c * n2 * (1.0 - 1e-12),
                    "m={m}"
                );
                let sel_q = select_rotation(&lambda, Family::Glq, m).unwrap();
                assert!(
                    sel_q.derivative_norm.powi(2) >= glq_c * n2 * (1.0 - 1e-12),
                    "m={m}"
                );
            }
        }
    }

    #[test]
    fn stationary_signal_on_zero_lambda() {
        let lambda = SlTangentCoord::zero(3);
        assert!(select_rotation(&lambda, Family::Glu, 3).is_none());
        assert!(select_rotation(&lambda, Family::Glq, 3).is_none());
    }

    #[test]
    fn epsilon_defaults_within_bounds() {
        for m in 2..=10 {
            assert!(default_epsilon(Family::Glu, m) < glu_epsilon_bound(m));
            assert!(default_epsilon(Family::Glq, m) < glq_epsilon_bound_derived(m));
            assert!(glq_epsilon_bound_derived(m) < glq_epsilon_bound_stated(m));
        }
    }

    #[test]
    fn engine_swap_matrix_plane_step() {
        // the 2×2 swap matrix is a stationary saddle: Λ = 0, the engine
        // signals it; the plane rotation applied explicitly still clears
        // the cost in one move
        let b = vec![CMat::from_rows(&[
            vec![C::ZERO, C::ONE],
            vec![C::ONE, C::ZERO],
        ])
        .unwrap()];
        let params = RotationParams::new(Family::Glq);
        let mut engine = JacobiEngine::new(b, SlPoint::identity(2), vec![1.0], Dagger::Hermitian);
        assert!((engine.running_cost() - 2.0).abs() < 1e-14);
        assert!(engine.lambda().unwrap().norm() < 1e-14);
        assert!(matches!(
            engine.step(&params).unwrap(),
            StepOutcome::Stationary
        ));
        let (rot, predicted) = engine
            .minimizer((0, 1), RotationKind::Plane, &params)
            .unwrap();
        assert!((predicted - 2.0).abs() < 1e-12);
        let rec = engine.apply_rotation(&rot, predicted).unwrap();
        assert!((rec.actual_decrease - 2.0).abs() < 1e-12);
        assert!(engine.running_cost().abs() < 1e-12);
    }

    #[test]
    fn jacobi_terminates_immediately_on_diagonal_input() {
        let a = CMat::diag(&[C::new(1.0, 0.0), C::new(-0.5, 0.0), C::new(2.0, 0.0)]);
        let problem = JadmProblem::new(3, 3, Dagger::Hermitian, true, vec![a], vec![1.0]).unwrap();
        let u0 = StiefelPoint::standard(3, 3).unwrap();
        let run = run_jacobi(
            &problem,
            &u0,
            &SlPoint::identity(3),
            &RotationParams::new(Family::Glu),
            &StopRule::default(),
        )
        .unwrap();
        assert_eq!(run.status, RunStatus::Converged);
        assert_eq!(run.iterations(), 0);
    }

    #[test]
    fn cost_monotone_and_gate_satisfied_along_run() {
        let mut rng = ChaCha8Rng::seed_from_u64(61);
        for &family in &[Family::Glu, Family::Glq] {
            let m = 4;
            let mats: Vec<CMat> = (0..3)
                .map(|_| {
                    let g = CMat::from_fn(m, m, |_, _| {
                        C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
                    });
                    g.herm_part()
                })
                .collect();
            let problem =
                JadmProblem::new(m, m, Dagger::Hermitian, true, mats, vec![1.0; 3]).unwrap();
            let u0 = StiefelPoint::standard(m, m).unwrap();
            let params = RotationParams::new(family);
            let stop = StopRule {
                max_iters: 400,
                ..Default::default()
            };
            let run = run_jacobi(&problem, &u0, &SlPoint::identity(m), &params, &stop).unwrap();
            let eps = params.resolve_epsilon(m).unwrap();
            let mut prev = run.initial_cost;
            for row in &run.trace {
                assert!(row.cost <= prev, "cost must not increase");
                prev = row.cost;
                let sel = row.selection_norm.unwrap();
                assert!(sel >= eps * row.grad_f2 * (1.0 - 1e-12), "gate violated");
                let pred = row.predicted_decrease.unwrap();
                assert!((pred - row.decrease).abs() <= 1e-8 * (1.0 + row.cost));
            }
            assert!(run.final_point.x.det_defect().unwrap() <= 1e-8);
        }
    }
}
