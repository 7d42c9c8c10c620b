//! Random instance generation with a known exact joint diagonalizer, and
//! the polar factorization that splits a rectangular special-linear matrix
//! into its Stiefel and special-linear parts.
//!
//! All randomness flows through a seeded ChaCha generator with fixed
//! substreams: stream 0 draws the mixing matrix, stream 1 the target
//! diagonals, stream 2 the noise, stream 3 random starting points. Equal
//! seeds therefore reproduce instances and runs bit for bit.

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::cost::{Dagger, JadmProblem, JointPoint};
use crate::error::{Error, Result};
use crate::linalg::{hpd_inv_sqrt, hpd_sqrt, CMat};
use crate::manifold::{SlPoint, StiefelPoint};

/// Recipe for a synthetic instance.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct InstanceSpec {
    pub n: usize,
    pub m: usize,
    pub l: usize,
    pub dagger: Dagger,
    /// Noise level η ≥ 0 applied as a unit-norm structured perturbation.
    pub noise: f64,
    pub seed: u64,
    /// Target diagonals draw magnitudes from [spread, 1], keeping them away
    /// from zero and from each other's scale.
    #[serde(default = "default_spread")]
    pub diag_spread: f64,
}

fn default_spread() -> f64 {
    0.1
}

impl InstanceSpec {
    pub fn validate(&self) -> Result<()> {
        if self.m == 0 || self.m > self.n {
            return Err(Error::Dimension("need 1 <= m <= n".into()));
        }
        if self.l == 0 {
            return Err(Error::Domain("need at least one matrix".into()));
        }
        if !(self.noise >= 0.0) {
            return Err(Error::Domain("noise must be nonnegative".into()));
        }
        if !(self.diag_spread > 0.0 && self.diag_spread < 1.0) {
            return Err(Error::Domain("diag_spread must lie in (0, 1)".into()));
        }
        Ok(())
    }
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn complex_gaussian(rng: &mut ChaCha8Rng) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

fn gaussian_matrix(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> CMat {
    CMat::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Draws A^(ℓ) = (Y⁺)^† D^(ℓ) Y⁺ around a random Y ∈ RSL(m,n,ℂ), so that
/// Y^† A^(ℓ) Y = D^(ℓ) exactly; returns the problem and the ground-truth
/// factorization of Y. With `noise` > 0 each matrix is perturbed by a
/// unit-norm structured matrix scaled by the noise level.
pub fn generate_instance(spec: &InstanceSpec) -> Result<(JadmProblem, JointPoint)> {
    spec.validate()?;
    let (n, m, l) = (spec.n, spec.m, spec.l);

    let mut rng_y = stream_rng(spec.seed, 0);
    let mut y = None;
    for _ in 0..10 {
        let cand = gaussian_matrix(n, m, &mut rng_y);
        let gram = cand.adjoint().matmul(&cand);
        let det = gram.det()?.re;
        if det > 1e-8 {
            // rescale into RSL: det(YᴴY) = 1
            y = Some(cand.scale(det.powf(-1.0 / (2.0 * m as f64))));
            break;
        }
    }
    let y = y.ok_or_else(|| Error::Numerical("rank-deficient draws 10 times in a row".into()))?;

    let mut rng_d = stream_rng(spec.seed, 1);
    let diagonals: Vec<CMat> = (0..l)
        .map(|_| {
            CMat::diag(
                &(0..m)
                    .map(|_| {
                        let mag = rng_d.gen_range(spec.diag_spread..1.0);
                        let sign = if rng_d.gen::<bool>() { 1.0 } else { -1.0 };
                        Complex64::new(sign * mag, 0.0)
                    })
                    .collect::<Vec<_>>(),
            )
        })
        .collect();

    // pseudo-inverse of the full-column-rank Y
    let gram = y.adjoint().matmul(&y);
    let pinv = gram.inverse()?.matmul(&y.adjoint());
    let pinv_dag = spec.dagger.apply(&pinv);

    let mut rng_noise = stream_rng(spec.seed, 2);
    let mut matrices = Vec::with_capacity(l);
    for d in &diagonals {
        let mut a = pinv_dag.matmul(d).matmul(&pinv);
        // exact structural cleanup, then unit Frobenius scale so that cost
        // and gradient magnitudes are comparable across instances
        a = match spec.dagger {
            Dagger::Hermitian => a.herm_part(),
            Dagger::Transpose => a.add(&a.transpose()).scale(0.5),
        };
        a = a.scale(1.0 / a.norm());
        if spec.noise > 0.0 {
            let g = gaussian_matrix(n, n, &mut rng_noise);
            let structured = match spec.dagger {
                Dagger::Hermitian => g.herm_part(),
                Dagger::Transpose => g.add(&g.transpose()).scale(0.5),
            };
            a.axpy(
                Complex64::new(spec.noise / structured.norm(), 0.0),
                &structured,
            );
        }
        matrices.push(a);
    }

    let problem = JadmProblem::new(n, m, spec.dagger, true, matrices, vec![1.0; l])?;
    let truth = factor_rsl(&y)?;
    Ok((problem, truth))
}

/// Splits Y ∈ RSL(m,n,ℂ) by polar decomposition: U = Y(YᴴY)^{−1/2} has
/// orthonormal columns and X = (YᴴY)^{1/2} has determinant one, with
/// Y = U·X.
pub fn factor_rsl(y: &CMat) -> Result<JointPoint> {
    let gram = y.adjoint().matmul(y);
    let det = gram.det()?;
    if (det - Complex64::ONE).norm() > 1e-6 {
        return Err(Error::Domain(format!(
            "not in RSL: det(YᴴY) = {det}"
        )));
    }
    let x = SlPoint::new(hpd_sqrt(&gram)?)?;
    let u = StiefelPoint::new(y.matmul(&hpd_inv_sqrt(&gram)?))?;
    JointPoint::new(u, x)
}

/// Random starting point: a Gaussian draw rescaled into RSL, split by
/// `factor_rsl`. Uses stream 3 of the seed.
pub fn random_joint_point(n: usize, m: usize, seed: u64) -> Result<JointPoint> {
    let mut rng = stream_rng(seed, 3);
    for _ in 0..10 {
        let cand = gaussian_matrix(n, m, &mut rng);
        let gram = cand.adjoint().matmul(&cand);
        let det = gram.det()?.re;
        if det > 1e-8 {
            let y = cand.scale(det.powf(-1.0 / (2.0 * m as f64)));
            return factor_rsl(&y);
        }
    }
    Err(Error::Numerical("rank-deficient draws 10 times in a row".into()))
}
