//! The joint approximate diagonalization objective
//! f(U, X) = Σ_ℓ μ_ℓ ‖offdiag(W^(ℓ))‖², W^(ℓ) = (UX)^† A^(ℓ) (UX),
//! together with its Euclidean and Riemannian gradients for both blocks
//! and both dagger modes.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{offdiag, offdiag_norm_sq, CMat};
use crate::manifold::{stiefel_rgrad, SlPoint, SlTangentCoord, StiefelPoint, StiefelTangent};

/// Which transpose the congruence uses: conjugate transpose (Hermitian
/// problems) or plain transpose (complex-symmetric problems).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Dagger {
    #[serde(rename = "H")]
    Hermitian,
    #[serde(rename = "T")]
    Transpose,
}

impl Dagger {
    /// A^† per mode.
    pub fn apply(&self, a: &CMat) -> CMat {
        match self {
            Dagger::Hermitian => a.adjoint(),
            Dagger::Transpose => a.transpose(),
        }
    }

    /// Sign ϱ that flips between the two modes in the coefficient formulas.
    pub fn rho(&self) -> f64 {
        match self {
            Dagger::Hermitian => 1.0,
            Dagger::Transpose => -1.0,
        }
    }

    /// Structural defect of a matrix for the mode's structured class.
    pub fn structure_defect(&self, a: &CMat) -> f64 {
        match self {
            Dagger::Hermitian => a.hermitian_defect(),
            Dagger::Transpose => a.symmetric_defect(),
        }
    }
}

impl std::fmt::Display for Dagger {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Dagger::Hermitian => write!(f, "H"),
            Dagger::Transpose => write!(f, "T"),
        }
    }
}

/// A problem instance: the matrix set, its weights, the dagger mode and the
/// target dimensions 1 ≤ m ≤ n.
#[derive(Clone, Debug)]
pub struct JadmProblem {
    n: usize,
    m: usize,
    dagger: Dagger,
    structured: bool,
    matrices: Vec<CMat>,
    weights: Vec<f64>,
}

impl JadmProblem {
    pub fn new(
        n: usize,
        m: usize,
        dagger: Dagger,
        structured: bool,
        matrices: Vec<CMat>,
        weights: Vec<f64>,
    ) -> Result<Self> {
        if m == 0 || m > n {
            return Err(Error::Dimension(format!("need 1 <= m <= n, got m={m} n={n}")));
        }
        if matrices.is_empty() {
            return Err(Error::Domain("need at least one matrix".into()));
        }
        if matrices.len() != weights.len() {
            return Err(Error::Dimension("weights length != matrix count".into()));
        }
        if weights.iter().any(|&w| !(w > 0.0) || !w.is_finite()) {
            return Err(Error::Domain("weights must be positive and finite".into()));
        }
        for a in &matrices {
            if a.rows() != n || a.cols() != n {
                return Err(Error::Dimension(format!(
                    "matrix is {}x{}, expected {n}x{n}",
                    a.rows(),
                    a.cols()
                )));
            }
            a.check_finite()?;
            if structured {
                let defect = dagger.structure_defect(a);
                if defect > 1e-10 * (1.0 + a.norm()) {
                    return Err(Error::Domain(format!(
                        "structured flag set but defect is {defect:.3e}"
                    )));
                }
            }
        }
        Ok(JadmProblem {
            n,
            m,
            dagger,
            structured,
            matrices,
            weights,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn dagger(&self) -> Dagger {
        self.dagger
    }

    pub fn structured(&self) -> bool {
        self.structured
    }

    pub fn matrices(&self) -> &[CMat] {
        &self.matrices
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }

    /// Same instance with every weight multiplied by c > 0.
    pub fn scale_weights(&self, c: f64) -> Result<JadmProblem> {
        JadmProblem::new(
            self.n,
            self.m,
            self.dagger,
            self.structured,
            self.matrices.clone(),
            self.weights.iter().map(|w| w * c).collect(),
        )
    }
}

/// A joint iterate ω = (U, X).
#[derive(Clone, Debug)]
pub struct JointPoint {
    pub u: StiefelPoint,
    pub x: SlPoint,
}

impl JointPoint {
    pub fn new(u: StiefelPoint, x: SlPoint) -> Result<Self> {
        if u.m() != x.m() {
            return Err(Error::Dimension(format!(
                "U has m={} but X is {}x{}",
                u.m(),
                x.m(),
                x.m()
            )));
        }
        Ok(JointPoint { u, x })
    }

    /// ‖ω‖ = sqrt(‖U‖² + ‖X‖²).
    pub fn norm(&self) -> f64 {
        (self.u.mat().norm_sq() + self.x.mat().norm_sq()).sqrt()
    }
}

/// The transformed matrix set W^(ℓ) = (UX)^† A^(ℓ) (UX).
#[derive(Clone, Debug)]
pub struct CongestedSet {
    pub w: Vec<CMat>,
}

/// W^(ℓ) for every ℓ.
pub fn transform(problem: &JadmProblem, omega: &JointPoint) -> Result<CongestedSet> {
    check_point(problem, omega)?;
    let y = omega.u.mat().matmul(omega.x.mat());
    let yd = problem.dagger().apply(&y);
    let w = problem
        .matrices()
        .iter()
        .map(|a| yd.matmul(a).matmul(&y))
        .collect();
    Ok(CongestedSet { w })
}

/// Congests the base set to m×m with U only: B^(ℓ) = U^† A^(ℓ) U. These are
/// fixed while the X block is optimized.
pub fn congest_base(problem: &JadmProblem, u: &StiefelPoint) -> Result<Vec<CMat>> {
    if u.n() != problem.n() || u.m() != problem.m() {
        return Err(Error::Dimension("congest_base: point shape".into()));
    }
    let ud = problem.dagger().apply(u.mat());
    Ok(problem
        .matrices()
        .iter()
        .map(|a| ud.matmul(a).matmul(u.mat()))
        .collect())
}

/// W^(ℓ) = X^† B^(ℓ) X from a congested base.
pub fn transform_with_base(b: &[CMat], x: &SlPoint, dagger: Dagger) -> Vec<CMat> {
    let xd = dagger.apply(x.mat());
    b.iter().map(|bl| xd.matmul(bl).matmul(x.mat())).collect()
}

/// Weighted off-diagonal energy of an already-transformed set.
pub fn set_cost(w: &[CMat], weights: &[f64]) -> f64 {
    w.iter()
        .zip(weights)
        .map(|(wl, &mu)| mu * offdiag_norm_sq(wl))
        .sum()
}

/// f(U, X) = Σ_ℓ μ_ℓ ‖offdiag(W^(ℓ))‖².
pub fn cost(problem: &JadmProblem, omega: &JointPoint) -> Result<f64> {
    Ok(set_cost(&transform(problem, omega)?.w, problem.weights()))
}

/// Υ(W) — the algebraic core of every gradient here:
///   H mode: W·offdiag(W)ᴴ + Wᴴ·offdiag(W)
///   T mode: W*·offdiag(W)ᵀ + Wᴴ·offdiag(W)
pub fn upsilon(w: &CMat, dagger: Dagger) -> Result<CMat> {
    let o = offdiag(w)?;
    Ok(match dagger {
        Dagger::Hermitian => w.matmul(&o.adjoint()).add(&w.adjoint().matmul(&o)),
        Dagger::Transpose => w.conj().matmul(&o.transpose()).add(&w.adjoint().matmul(&o)),
    })
}

/// Euclidean gradient of Y ↦ ‖offdiag(Y^† A Y)‖² (one matrix, no weight):
///   H mode: 2(A·Y·Oᴴ + Aᴴ·Y·O)
///   T mode: 2(A*·Y*·Oᵀ + Aᴴ·Y*·O)
/// with O = offdiag(Y^† A Y).
pub fn egrad_ambient(a: &CMat, y: &CMat, dagger: Dagger) -> Result<CMat> {
    let yd = dagger.apply(y);
    let w = yd.matmul(a).matmul(y);
    let o = offdiag(&w)?;
    Ok(match dagger {
        Dagger::Hermitian => {
            let v = a.matmul(y);
            let vp = a.adjoint().matmul(y);
            v.matmul(&o.adjoint()).add(&vp.matmul(&o)).scale(2.0)
        }
        Dagger::Transpose => {
            let yc = y.conj();
            let vc = a.conj().matmul(&yc);
            let vpc = a.adjoint().matmul(&yc);
            vc.matmul(&o.transpose()).add(&vpc.matmul(&o)).scale(2.0)
        }
    })
}

/// Euclidean gradient of the U-restricted cost p(U) = f(U, X) at fixed X:
/// ∇p(U) = Σ_ℓ μ_ℓ ∇p̃_ℓ(UX) · Xᴴ.
pub fn egrad_u(problem: &JadmProblem, omega: &JointPoint) -> Result<CMat> {
    check_point(problem, omega)?;
    let y = omega.u.mat().matmul(omega.x.mat());
    let mut acc = CMat::zeros(problem.n(), problem.m());
    for (a, &mu) in problem.matrices().iter().zip(problem.weights()) {
        let g = egrad_ambient(a, &y, problem.dagger())?;
        acc.axpy(Complex64::new(mu, 0.0), &g);
    }
    Ok(acc.matmul(&omega.x.mat().adjoint()))
}

/// Riemannian gradient of the U-restricted cost.
pub fn rgrad_u(problem: &JadmProblem, omega: &JointPoint) -> Result<StiefelTangent> {
    stiefel_rgrad(&omega.u, &egrad_u(problem, omega)?)
}

/// Gradient coordinate Λ of the X-restricted cost from an already
/// transformed set: Λ = 2 Σ_ℓ μ_ℓ (Υ(W^(ℓ)) − tr(Υ(W^(ℓ)))/m · I).
pub fn lambda_from_set(w: &[CMat], weights: &[f64], dagger: Dagger) -> Result<SlTangentCoord> {
    let m = w[0].rows();
    let mut acc = CMat::zeros(m, m);
    for (wl, &mu) in w.iter().zip(weights) {
        let ups = upsilon(wl, dagger)?;
        let shift = ups.trace() / m as f64;
        let mut term = ups;
        for i in 0..m {
            term[(i, i)] -= shift;
        }
        acc.axpy(Complex64::new(2.0 * mu, 0.0), &term);
    }
    SlTangentCoord::new(acc)
}

/// Riemannian gradient coordinate of the X-restricted cost g(X) = f(U, X);
/// the gradient itself is X·Λ and ‖grad g‖ = ‖Λ‖ in the left-invariant
/// metric.
pub fn rgrad_x(problem: &JadmProblem, omega: &JointPoint) -> Result<SlTangentCoord> {
    let wset = transform(problem, omega)?;
    lambda_from_set(&wset.w, problem.weights(), problem.dagger())
}

fn check_point(problem: &JadmProblem, omega: &JointPoint) -> Result<()> {
    if omega.u.n() != problem.n() || omega.u.m() != problem.m() {
        return Err(Error::Dimension(format!(
            "point is {}x{}, problem expects {}x{}",
            omega.u.n(),
            omega.u.m(),
            problem.n(),
            problem.m()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::real_inner;
    use num_complex::Complex64 as C;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> C {
        C::new(re, im)
    }

    fn random_cmat(r: usize, cl: usize, rng: &mut ChaCha8Rng) -> CMat {
        CMat::from_fn(r, cl, |_, _| {
            c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
        })
    }

    pub fn random_problem(
        n: usize,
        m: usize,
        l: usize,
        dagger: Dagger,
        rng: &mut ChaCha8Rng,
    ) -> JadmProblem {
        let matrices: Vec<CMat> = (0..l)
            .map(|_| {
                let g = random_cmat(n, n, rng);
                match dagger {
                    Dagger::Hermitian => g.herm_part(),
                    Dagger::Transpose => g.add(&g.transpose()).scale(0.5),
                }
            })
            .collect();
        let weights = (0..l).map(|_| rng.gen_range(0.2..2.0)).collect();
        JadmProblem::new(n, m, dagger, true, matrices, weights).unwrap()
    }

    pub fn random_point(n: usize, m: usize, rng: &mut ChaCha8Rng) -> JointPoint {
        use crate::linalg::hpd_inv_sqrt;
        use crate::manifold::{sl_exp, SlPoint};
        let y = random_cmat(n, m, rng);
        let gram = y.adjoint().matmul(&y);
        let u = StiefelPoint::new(y.matmul(&hpd_inv_sqrt(&gram).unwrap())).unwrap();
        let g = random_cmat(m, m, rng).scale(0.4);
        let shift = g.trace() / m as f64;
        let mut o = g;
        for i in 0..m {
            o[(i, i)] -= shift;
        }
        let x = sl_exp(
            &SlPoint::identity(m),
            &SlTangentCoord::new(o).unwrap(),
        )
        .unwrap();
        JointPoint::new(u, x).unwrap()
    }

    #[test]
    fn transform_identity_set() {
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        let problem = JadmProblem::new(
            4,
            2,
            Dagger::Hermitian,
            true,
            vec![CMat::identity(4)],
            vec![1.0],
        )
        .unwrap();
        let omega = JointPoint::new(
            crate::manifold::StiefelPoint::standard(4, 2).unwrap(),
            SlPoint::identity(2),
        )
        .unwrap();
        let w = transform(&problem, &omega).unwrap();
        assert!(w.w[0].sub(&CMat::identity(2)).norm() < 1e-12);
        let _ = rng;
    }

    #[test]
    fn transform_square_identity_point() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        let a = random_cmat(3, 3, &mut rng);
        let problem =
            JadmProblem::new(3, 3, Dagger::Hermitian, false, vec![a.clone()], vec![1.0]).unwrap();
        let omega = JointPoint::new(
            StiefelPoint::standard(3, 3).unwrap(),
            SlPoint::identity(3),
        )
        .unwrap();
        let w = transform(&problem, &omega).unwrap();
        assert!(w.w[0].sub(&a).norm() < 1e-13);
    }

    #[test]
    fn transform_two_paths_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for &dagger in &[Dagger::Hermitian, Dagger::Transpose] {
            let problem = random_problem(5, 3, 4, dagger, &mut rng);
            let omega = random_point(5, 3, &mut rng);
            let direct = transform(&problem, &omega).unwrap();
            let b = congest_base(&problem, &omega.u).unwrap();
            let via_base = transform_with_base(&b, &omega.x, dagger);
            for (w1, w2) in direct.w.iter().zip(&via_base) {
                assert!(w1.sub(w2).norm() < 1e-12 * (1.0 + w1.norm()));
            }
        }
    }

    #[test]
    fn cost_single_offdiag_matrix() {
        let a = CMat::from_rows(&[vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]])
            .unwrap();
        let problem = JadmProblem::new(2, 2, Dagger::Hermitian, true, vec![a], vec![1.0]).unwrap();
        let omega = JointPoint::new(
            StiefelPoint::standard(2, 2).unwrap(),
            SlPoint::identity(2),
        )
        .unwrap();
        assert!((cost(&problem, &omega).unwrap() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn upsilon_diagonal_is_zero() {
        let w = CMat::diag(&[c(1.0, 2.0), c(-3.0, 0.5)]);
        for &dg in &[Dagger::Hermitian, Dagger::Transpose] {
            assert!(upsilon(&w, dg).unwrap().norm() < 1e-15);
        }
    }

    #[test]
    fn upsilon_swap_matrix() {
        let w = CMat::from_rows(&[vec![c(0.0, 0.0), c(1.0, 0.0)], vec![c(1.0, 0.0), c(0.0, 0.0)]])
            .unwrap();
        let u = upsilon(&w, Dagger::Hermitian).unwrap();
        assert!(u.sub(&CMat::identity(2).scale(2.0)).norm() < 1e-14);
    }

    #[test]
    fn upsilon_trace_identity_h_mode() {
        // ⟨I, Υ(W)⟩ = 2‖offdiag(W)‖² in H mode
        let mut rng = ChaCha8Rng::seed_from_u64(43);
        for _ in 0..20 {
            let w = random_cmat(4, 4, &mut rng);
            let ups = upsilon(&w, Dagger::Hermitian).unwrap();
            let lhs = real_inner(&CMat::identity(4), &ups).unwrap();
            let rhs = 2.0 * offdiag_norm_sq(&w);
            assert!((lhs - rhs).abs() < 1e-11 * (1.0 + rhs));
        }
    }

    #[test]
    fn gradients_scale_linearly_with_weights() {
        let mut rng = ChaCha8Rng::seed_from_u64(44);
        let problem = random_problem(4, 3, 3, Dagger::Hermitian, &mut rng);
        let doubled = problem.scale_weights(2.0).unwrap();
        let omega = random_point(4, 3, &mut rng);
        let f1 = cost(&problem, &omega).unwrap();
        let f2 = cost(&doubled, &omega).unwrap();
        assert!((f2 - 2.0 * f1).abs() < 1e-12 * (1.0 + f1));
        let g1 = egrad_u(&problem, &omega).unwrap();
        let g2 = egrad_u(&doubled, &omega).unwrap();
        assert!(g2.sub(&g1.scale(2.0)).norm() < 1e-12 * (1.0 + g1.norm()));
        let l1 = rgrad_x(&problem, &omega).unwrap();
        let l2 = rgrad_x(&doubled, &omega).unwrap();
        assert!(l2.mat().sub(&l1.mat().scale(2.0)).norm() < 1e-12 * (1.0 + l1.norm()));
    }

    #[test]
    fn euclidean_gradient_identity_eq_3_2() {
        // Uᴴ·∇p(U) = 2(Xᴴ)⁻¹ Σ μ_ℓ Υ(W^(ℓ)) Xᴴ
        let mut rng = ChaCha8Rng::seed_from_u64(45);
        for &dagger in &[Dagger::Hermitian, Dagger::Transpose] {
            for _ in 0..10 {
                let problem = random_problem(5, 3, 3, dagger, &mut rng);
                let omega = random_point(5, 3, &mut rng);
                let lhs = omega.u.mat().adjoint().matmul(&egrad_u(&problem, &omega).unwrap());
                let wset = transform(&problem, &omega).unwrap();
                let mut ups_sum = CMat::zeros(3, 3);
                for (wl, &mu) in wset.w.iter().zip(problem.weights()) {
                    ups_sum.axpy(C::new(mu, 0.0), &upsilon(wl, dagger).unwrap());
                }
                let xh = omega.x.mat().adjoint();
                let rhs = xh.inverse().unwrap().matmul(&ups_sum).matmul(&xh).scale(2.0);
                assert!(
                    lhs.sub(&rhs).norm() < 1e-9 * (1.0 + rhs.norm()),
                    "dagger={dagger}"
                );
            }
        }
    }

    #[test]
    fn lambda_traceless_always() {
        let mut rng = ChaCha8Rng::seed_from_u64(46);
        for &dagger in &[Dagger::Hermitian, Dagger::Transpose] {
            let problem = random_problem(4, 4, 3, dagger, &mut rng);
            let omega = random_point(4, 4, &mut rng);
            let l = rgrad_x(&problem, &omega).unwrap();
            assert!(l.mat().trace().norm() < 1e-12 * (1.0 + l.norm()));
        }
    }

    #[test]
    fn restriction_paths_agree_square_case() {
        // with m = n and X = I, the U-block and X-block derivations describe
        // the same function; their projected gradients must agree
        let mut rng = ChaCha8Rng::seed_from_u64(47);
        for &dagger in &[Dagger::Hermitian, Dagger::Transpose] {
            let problem = random_problem(4, 4, 3, dagger, &mut rng);
            let omega = JointPoint::new(
                random_point(4, 4, &mut rng).u,
                SlPoint::identity(4),
            )
            .unwrap();
            let path_u = rgrad_u(&problem, &omega).unwrap();
            // §5 path: ∇g(X) = 2(Xᴴ)⁻¹ Σ μ Υ(W) evaluated at X = U (unitary)
            let wset = transform(&problem, &omega).unwrap();
            let mut ups_sum = CMat::zeros(4, 4);
            for (wl, &mu) in wset.w.iter().zip(problem.weights()) {
                ups_sum.axpy(C::new(mu, 0.0), &upsilon(wl, dagger).unwrap());
            }
            let egrad_g = omega.u.mat().matmul(&ups_sum).scale(2.0);
            let path_x = stiefel_rgrad(&omega.u, &egrad_g).unwrap();
            assert!(
                path_u.mat().sub(path_x.mat()).norm() < 1e-9 * (1.0 + path_u.norm()),
                "dagger={dagger}"
            );
        }
    }
}
