//! Elementary 2×2 rotations in SL_m(ℂ) — plane (special unitary), upper and
//! lower unipotent triangular, and diagonal with reciprocal entries — their
//! embeddings, the derivative read-offs from Λ, and the closed-form
//! minimizers of the restricted cost along each rotation family.
//!
//! Index pairs (i, j) are zero-based with i < j throughout.

use num_complex::Complex64;

use crate::cost::Dagger;
use crate::error::{Error, Result};
use crate::linalg::CMat;
use crate::manifold::SlTangentCoord;

/// The four elementary rotation families.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RotationKind {
    Plane,
    Upper,
    Lower,
    Diagonal,
}

impl std::fmt::Display for RotationKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            RotationKind::Plane => "plane",
            RotationKind::Upper => "upper",
            RotationKind::Lower => "lower",
            RotationKind::Diagonal => "diagonal",
        };
        write!(f, "{s}")
    }
}

/// A 2×2 rotation Ψ tagged with its kind and the index pair it embeds at.
#[derive(Clone, Debug)]
pub struct Rotation2 {
    pub kind: RotationKind,
    pub psi: CMat,
    pub pair: (usize, usize),
}

impl Rotation2 {
    /// Plane rotation Ψ(θ, φ) = [[cos θ, −sin θ e^{iφ}], [sin θ e^{−iφ}, cos θ]].
    pub fn plane(theta: f64, phi: f64, pair: (usize, usize)) -> Self {
        let c = Complex64::new(theta.cos(), 0.0);
        let s = Complex64::from_polar(theta.sin(), phi);
        let psi = CMat::from_fn(2, 2, |r, cl| match (r, cl) {
            (0, 0) | (1, 1) => c,
            (0, 1) => -s,
            _ => s.conj(),
        });
        Rotation2 {
            kind: RotationKind::Plane,
            psi,
            pair,
        }
    }

    /// Upper unipotent rotation [[1, z], [0, 1]].
    pub fn upper(z: Complex64, pair: (usize, usize)) -> Self {
        let mut psi = CMat::identity(2);
        psi[(0, 1)] = z;
        Rotation2 {
            kind: RotationKind::Upper,
            psi,
            pair,
        }
    }

    /// Lower unipotent rotation [[1, 0], [z, 1]].
    pub fn lower(z: Complex64, pair: (usize, usize)) -> Self {
        let mut psi = CMat::identity(2);
        psi[(1, 0)] = z;
        Rotation2 {
            kind: RotationKind::Lower,
            psi,
            pair,
        }
    }

    /// Diagonal rotation diag(z, 1/z), z ≠ 0.
    pub fn diagonal(z: Complex64, pair: (usize, usize)) -> Result<Self> {
        if z == Complex64::ZERO {
            return Err(Error::Domain("diagonal rotation needs z != 0".into()));
        }
        let psi = CMat::diag(&[z, Complex64::ONE / z]);
        Ok(Rotation2 {
            kind: RotationKind::Diagonal,
            psi,
            pair,
        })
    }

    /// ‖Ψ − I₂‖, the rotation's distance from a no-op.
    pub fn dist_from_identity(&self) -> f64 {
        self.psi.sub(&CMat::identity(2)).norm()
    }

    /// Embeds Ψ into the identity of size m at the tagged pair.
    /// det of the result is 1 for every kind.
    pub fn embed(&self, m: usize) -> Result<CMat> {
        let (i, j) = self.pair;
        check_pair(i, j, m)?;
        let mut v = CMat::identity(m);
        v[(i, i)] = self.psi[(0, 0)];
        v[(i, j)] = self.psi[(0, 1)];
        v[(j, i)] = self.psi[(1, 0)];
        v[(j, j)] = self.psi[(1, 1)];
        Ok(v)
    }

    /// In-place congruence update W ← Ψ^† W Ψ of a transformed set; only
    /// rows i, j and columns i, j change.
    pub fn apply_to_set(&self, wset: &mut [CMat], dagger: Dagger) {
        let (i, j) = self.pair;
        let pd = dagger.apply(&self.psi);
        for w in wset.iter_mut() {
            let m = w.cols();
            for p in 0..m {
                let wi = w[(i, p)];
                let wj = w[(j, p)];
                w[(i, p)] = pd[(0, 0)] * wi + pd[(0, 1)] * wj;
                w[(j, p)] = pd[(1, 0)] * wi + pd[(1, 1)] * wj;
            }
            for p in 0..m {
                let wi = w[(p, i)];
                let wj = w[(p, j)];
                w[(p, i)] = wi * self.psi[(0, 0)] + wj * self.psi[(1, 0)];
                w[(p, j)] = wi * self.psi[(0, 1)] + wj * self.psi[(1, 1)];
            }
        }
    }
}

fn check_pair(i: usize, j: usize, m: usize) -> Result<()> {
    if i >= j || j >= m {
        return Err(Error::Dimension(format!(
            "pair ({i}, {j}) out of range for m={m}"
        )));
    }
    Ok(())
}

/// Extracts the 2×2 principal submatrix [[W_ii, W_ij], [W_ji, W_jj]].
pub fn extract_pair(w: &CMat, i: usize, j: usize) -> Result<CMat> {
    check_pair(i, j, w.rows())?;
    if !w.is_square() {
        return Err(Error::Dimension("extract_pair needs a square matrix".into()));
    }
    Ok(CMat::from_fn(2, 2, |r, c| {
        let a = if r == 0 { i } else { j };
        let b = if c == 0 { i } else { j };
        w[(a, b)]
    }))
}

/// Partial derivative of the elementary function at the identity rotation,
/// read off the gradient coordinate Λ:
///   plane    → [0, −Re(Λ_ij − Λ_ji), −Im(Λ_ij + Λ_ji)]
///   upper    → [Re Λ_ij, Im Λ_ij]
///   lower    → [Re Λ_ji, Im Λ_ji]
///   diagonal → [Re(Λ_ii − Λ_jj), Im(Λ_ii − Λ_jj)]
pub fn elementary_derivative(
    lambda: &SlTangentCoord,
    pair: (usize, usize),
    kind: RotationKind,
) -> Vec<f64> {
    let (i, j) = pair;
    let lij = lambda.at(i, j);
    let lji = lambda.at(j, i);
    match kind {
        RotationKind::Plane => vec![0.0, -(lij - lji).re, -(lij + lji).im],
        RotationKind::Upper => vec![lij.re, lij.im],
        RotationKind::Lower => vec![lji.re, lji.im],
        RotationKind::Diagonal => {
            let d = lambda.at(i, i) - lambda.at(j, j);
            vec![d.re, d.im]
        }
    }
}

/// Euclidean norm of a derivative vector.
pub fn derivative_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Which triangular rotation a coefficient triple belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TriangularRole {
    Upper,
    Lower,
}

/// Quadratic-model coefficients of the upper (α's) or lower (β's)
/// elementary function: ν(x,y) − ν(0,0) = c1·(x²+y²) + 2·c2·x + 2·c3·y.
#[derive(Clone, Copy, Debug)]
pub struct TriangularCoeffs {
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub role: TriangularRole,
    pub pair: (usize, usize),
}

/// Coefficients of the triangular elementary functions (sums over p ≠ j for
/// the upper role, p ≠ i for the lower role; ϱ = ±1 per dagger mode).
pub fn triangular_coeffs(
    wset: &[CMat],
    weights: &[f64],
    pair: (usize, usize),
    role: TriangularRole,
    dagger: Dagger,
) -> TriangularCoeffs {
    let (i, j) = pair;
    let rho = dagger.rho();
    let excluded = match role {
        TriangularRole::Upper => j,
        TriangularRole::Lower => i,
    };
    let mut c1 = 0.0;
    let mut c2 = 0.0;
    let mut c3 = 0.0;
    for (w, &mu) in wset.iter().zip(weights) {
        let m = w.rows();
        for p in 0..m {
            if p == excluded {
                continue;
            }
            let row = w[(i, p)] * w[(j, p)].conj();
            let col = w[(p, i)] * w[(p, j)].conj();
            match role {
                TriangularRole::Upper => {
                    c1 += mu * (w[(i, p)].norm_sqr() + w[(p, i)].norm_sqr());
                    c2 += mu * (row.re + col.re);
                    c3 += mu * (rho * row.im - col.im);
                }
                TriangularRole::Lower => {
                    c1 += mu * (w[(j, p)].norm_sqr() + w[(p, j)].norm_sqr());
                    c2 += mu * (row.re + col.re);
                    c3 += mu * (-rho * row.im + col.im);
                }
            }
        }
    }
    TriangularCoeffs {
        c1,
        c2,
        c3,
        role,
        pair,
    }
}

/// Evaluates the triangular quadratic model ν(x,y) − ν(0,0).
pub fn triangular_model(c: &TriangularCoeffs, x: f64, y: f64) -> f64 {
    c.c1 * (x * x + y * y) + 2.0 * c.c2 * x + 2.0 * c.c3 * y
}

/// Closed-form minimizer of the triangular model: z* = −(c2 + i·c3)/c1 when
/// c1 > 0 with predicted decrease (c2² + c3²)/c1; the identity rotation
/// (decrease 0) when c1 = 0.
pub fn minimize_triangular(c: &TriangularCoeffs) -> (Rotation2, f64) {
    let (z, decrease) = if c.c1 > 0.0 {
        (
            Complex64::new(-c.c2 / c.c1, -c.c3 / c.c1),
            (c.c2 * c.c2 + c.c3 * c.c3) / c.c1,
        )
    } else {
        (Complex64::ZERO, 0.0)
    };
    let rot = match c.role {
        TriangularRole::Upper => Rotation2::upper(z, c.pair),
        TriangularRole::Lower => Rotation2::lower(z, c.pair),
    };
    (rot, decrease)
}

/// Coefficients of the diagonal elementary function:
/// ρ(x,y) − ρ(1,0) = g1·(x²+y²) + g2/(x²+y²) − g1 − g2.
#[derive(Clone, Copy, Debug)]
pub struct DiagonalCoeffs {
    pub g1: f64,
    pub g2: f64,
    pub pair: (usize, usize),
}

/// Sums over p ∉ {i, j} of the weighted row/column energies of rows i and j.
pub fn diagonal_coeffs(wset: &[CMat], weights: &[f64], pair: (usize, usize)) -> DiagonalCoeffs {
    let (i, j) = pair;
    let mut g1 = 0.0;
    let mut g2 = 0.0;
    for (w, &mu) in wset.iter().zip(weights) {
        let m = w.rows();
        for p in 0..m {
            if p == i || p == j {
                continue;
            }
            g1 += mu * (w[(i, p)].norm_sqr() + w[(p, i)].norm_sqr());
            g2 += mu * (w[(j, p)].norm_sqr() + w[(p, j)].norm_sqr());
        }
    }
    DiagonalCoeffs { g1, g2, pair }
}

/// Evaluates the diagonal model ρ(x,y) − ρ(1,0).
pub fn diagonal_model(c: &DiagonalCoeffs, x: f64, y: f64) -> f64 {
    let r2 = x * x + y * y;
    c.g1 * r2 + c.g2 / r2 - c.g1 - c.g2
}

/// Closed-form minimizer of the diagonal model with the safeguards of the
/// ratio rule: y* = 0 always; with ϖ = g2/g1,
///   g1 = g2 = 0       → x* = 1 (identity; the scale is indifferent),
///   ϖ ∈ [0, ς)        → x* = 1/2,
///   ϖ ∈ (1/ς, ∞]      → x* = 2,
///   ϖ ∈ [ς, 1/ς]      → x* = ϖ^{1/4} (the interior optimum).
/// Requires 0 < ς < 1/4.
pub fn minimize_diagonal(
    c: &DiagonalCoeffs,
    sigma_var: f64,
) -> Result<(Rotation2, f64)> {
    if !(sigma_var > 0.0 && sigma_var < 0.25) {
        return Err(Error::Domain(format!(
            "sigma_var must lie in (0, 1/4), got {sigma_var}"
        )));
    }
    // the decrease formulas are expanded per branch so that nearly equal
    // coefficients cannot cancel through the model evaluation
    let (x_star, decrease) = if c.g1 == 0.0 && c.g2 == 0.0 {
        (1.0, 0.0)
    } else if c.g1 == 0.0 {
        // ϖ = +∞
        (2.0, 0.75 * c.g2 - 3.0 * c.g1)
    } else {
        let ratio = c.g2 / c.g1;
        if ratio < sigma_var {
            (0.5, 0.75 * c.g1 - 3.0 * c.g2)
        } else if ratio > 1.0 / sigma_var {
            (2.0, 0.75 * c.g2 - 3.0 * c.g1)
        } else {
            let d = c.g1.sqrt() - c.g2.sqrt();
            (ratio.powf(0.25), d * d)
        }
    };
    let rot = Rotation2::diagonal(Complex64::new(x_star, 0.0), c.pair)?;
    Ok((rot, decrease))
}

/// The symmetric 3×3 quadratic form Γ and offset c₀ describing the plane
/// elementary function: h(θ,φ) − h(0,·) = −(r'Γr − c₀) with
/// r = [cos 2θ, −sin 2θ cos φ, −sin 2θ sin φ].
#[derive(Clone, Debug)]
pub struct GammaForm {
    pub gamma: [[f64; 3]; 3],
    pub c0: f64,
    pub pair: (usize, usize),
}

/// Builds Γ = (ϱ/2)·Σ_ℓ μ_ℓ Re(z z ᴴ) from the per-matrix 3-vectors
///   H mode: z = [W_jj − W_ii, W_ij + W_ji, −i(W_ij − W_ji)]
///   T mode: z = [W_ij + W_ji, W_ii − W_jj, i(W_ii + W_jj)]
/// and checks the internal consistency c₀ = Γ₁₁.
pub fn build_gamma(
    wset: &[CMat],
    weights: &[f64],
    pair: (usize, usize),
    dagger: Dagger,
) -> Result<GammaForm> {
    let (i, j) = pair;
    let rho = dagger.rho();
    let mut gamma = [[0.0f64; 3]; 3];
    let mut c0 = 0.0f64;
    let im = Complex64::new(0.0, 1.0);
    for (w, &mu) in wset.iter().zip(weights) {
        let wii = w[(i, i)];
        let wij = w[(i, j)];
        let wji = w[(j, i)];
        let wjj = w[(j, j)];
        let z: [Complex64; 3] = match dagger {
            Dagger::Hermitian => [wjj - wii, wij + wji, -im * (wij - wji)],
            Dagger::Transpose => [wij + wji, wii - wjj, im * (wii + wjj)],
        };
        for a in 0..3 {
            for b in 0..3 {
                gamma[a][b] += 0.5 * rho * mu * (z[a] * z[b].conj()).re;
            }
        }
        c0 += match dagger {
            Dagger::Hermitian => 0.5 * mu * (wjj - wii).norm_sqr(),
            Dagger::Transpose => -0.5 * mu * (wij + wji).norm_sqr(),
        };
    }
    let scale = 1.0 + gamma.iter().flatten().map(|x| x.abs()).fold(0.0, f64::max);
    if (c0 - gamma[0][0]).abs() > 1e-8 * scale {
        return Err(Error::Numerical(format!(
            "gamma form inconsistent: c0={c0} vs gamma11={}",
            gamma[0][0]
        )));
    }
    Ok(GammaForm { gamma, c0, pair })
}

/// q(θ, φ) = r'Γr with r = [cos 2θ, −sin 2θ cos φ, −sin 2θ sin φ].
pub fn gamma_quadratic(g: &GammaForm, theta: f64, phi: f64) -> f64 {
    let r = [
        (2.0 * theta).cos(),
        -(2.0 * theta).sin() * phi.cos(),
        -(2.0 * theta).sin() * phi.sin(),
    ];
    quad_form(&g.gamma, &r)
}

fn quad_form(g: &[[f64; 3]; 3], r: &[f64; 3]) -> f64 {
    let mut s = 0.0;
    for a in 0..3 {
        for b in 0..3 {
            s += r[a] * g[a][b] * r[b];
        }
    }
    s
}

/// Maximizer of q over the plane-rotation parameters. The top eigenvector u
/// of Γ (sign-normalized to u₁ ≥ 0) gives the optimum; when the alignment
/// test |⟨v, w⟩| ≥ ϵ‖v‖‖w‖ with v = [Γ₁₂, Γ₁₃], w = [u₂, u₃] fails, φ* is
/// taken from v and θ* maximized in closed form at that φ*. Returns the
/// rotation and the predicted decrease q(θ*, φ*) − c₀.
pub fn minimize_plane(g: &GammaForm, epsilon_inner: f64) -> Result<(Rotation2, f64)> {
    if epsilon_inner <= 0.0 {
        return Err(Error::Domain("epsilon_inner must be positive".into()));
    }
    let (_, mut u) = sym3_top_eigenpair(&g.gamma);
    // sign normalization: u and −u are equivalent for the quadratic form
    if u[0] < 0.0 || (u[0] == 0.0 && (u[1] < 0.0 || (u[1] == 0.0 && u[2] < 0.0))) {
        for x in &mut u {
            *x = -*x;
        }
    }
    let v = [g.gamma[0][1], g.gamma[0][2]];
    let w = [u[1], u[2]];
    let v_norm = (v[0] * v[0] + v[1] * v[1]).sqrt();
    let w_norm = (w[0] * w[0] + w[1] * w[1]).sqrt();
    let inner = (v[0] * w[0] + v[1] * w[1]).abs();

    let (theta, phi) = if inner >= epsilon_inner * v_norm * w_norm {
        // recover angles from r = u
        let sin2t = (u[1] * u[1] + u[2] * u[2]).sqrt();
        let theta = 0.5 * sin2t.atan2(u[0]);
        let phi = if sin2t > 0.0 {
            (-u[2]).atan2(-u[1])
        } else {
            0.0
        };
        (theta, phi)
    } else {
        // v_norm > 0 here: with v = 0 the alignment test holds vacuously
        let phi = v[1].atan2(v[0]);
        let (cp, sp) = (phi.cos(), phi.sin());
        let alpha = 0.5
            * (g.gamma[0][0]
                - g.gamma[1][1] * cp * cp
                - g.gamma[2][2] * sp * sp
                - g.gamma[1][2] * (2.0 * phi).sin());
        let beta = -(g.gamma[0][1] * cp + g.gamma[0][2] * sp);
        let theta = 0.25 * beta.atan2(alpha);
        (theta, phi)
    };
    let decrease = plane_decrease(g, theta, phi);
    Ok((Rotation2::plane(theta, phi, g.pair), decrease))
}

/// q(θ, φ) − Γ₁₁ expanded so every term carries a sin 2θ factor; evaluating
/// q and subtracting would cancel catastrophically for the tiny optimal
/// angles that arise near convergence.
pub fn plane_decrease(g: &GammaForm, theta: f64, phi: f64) -> f64 {
    let s2 = (2.0 * theta).sin();
    let c2 = (2.0 * theta).cos();
    let (cp, sp) = (phi.cos(), phi.sin());
    let lower_block =
        g.gamma[1][1] * cp * cp + 2.0 * g.gamma[1][2] * cp * sp + g.gamma[2][2] * sp * sp;
    s2 * s2 * (lower_block - g.gamma[0][0])
        - 2.0 * s2 * c2 * (g.gamma[0][1] * cp + g.gamma[0][2] * sp)
}

/// Largest eigenvalue and a unit eigenvector of a symmetric 3×3 matrix,
/// by cyclic Jacobi sweeps to tolerance 1e−12.
pub fn sym3_top_eigenpair(g: &[[f64; 3]; 3]) -> (f64, [f64; 3]) {
    let mut a = *g;
    // enforce symmetry of the work copy
    for p in 0..3 {
        for q in p + 1..3 {
            let avg = 0.5 * (a[p][q] + a[q][p]);
            a[p][q] = avg;
            a[q][p] = avg;
        }
    }
    let mut v = [[0.0f64; 3]; 3];
    for (idx, row) in v.iter_mut().enumerate() {
        row[idx] = 1.0;
    }
    let scale = a
        .iter()
        .flatten()
        .map(|x| x.abs())
        .fold(0.0, f64::max)
        .max(1.0);
    for _ in 0..30 {
        let off = a[0][1].abs().max(a[0][2].abs()).max(a[1][2].abs());
        if off <= 1e-12 * scale {
            break;
        }
        for p in 0..3 {
            for q in p + 1..3 {
                if a[p][q].abs() <= 1e-15 * scale {
                    continue;
                }
                let tau = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    1.0 / (tau - (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                for k in 0..3 {
                    let akp = a[k][p];
                    let akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..3 {
                    let apk = a[p][k];
                    let aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for row in &mut v {
                    let vp = row[p];
                    let vq = row[q];
                    row[p] = c * vp - s * vq;
                    row[q] = s * vp + c * vq;
                }
            }
        }
    }
    let mut best = 0;
    for k in 1..3 {
        if a[k][k] > a[best][best] {
            best = k;
        }
    }
    let mut u = [v[0][best], v[1][best], v[2][best]];
    let norm = (u[0] * u[0] + u[1] * u[1] + u[2] * u[2]).sqrt();
    for x in &mut u {
        *x /= norm;
    }
    (a[best][best], u)
}

/// Weighted off-diagonal energy carried by rows i, j and columns i, j — the
/// only part of the cost an elementary rotation at (i, j) can change.
pub fn local_offdiag_energy(wset: &[CMat], weights: &[f64], pair: (usize, usize)) -> f64 {
    let (i, j) = pair;
    let mut total = 0.0;
    for (w, &mu) in wset.iter().zip(weights) {
        let m = w.rows();
        let mut s = 0.0;
        for p in 0..m {
            if p != i {
                s += w[(i, p)].norm_sqr() + w[(p, i)].norm_sqr();
            }
            if p != j {
                s += w[(j, p)].norm_sqr() + w[(p, j)].norm_sqr();
            }
        }
        // the (i,j) and (j,i) entries were counted once as row and once as
        // column members
        s -= w[(i, j)].norm_sqr() + w[(j, i)].norm_sqr();
        total += mu * s;
    }
    total
}
