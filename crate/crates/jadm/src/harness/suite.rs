//! The full oracle suite behind `jadm check`: every analytic formula in
//! the crate is confronted with an independent evaluation (finite
//! differences, duplicate implementations, model-vs-direct comparisons,
//! coarse grid searches) at one point of one problem.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cost::{
    congest_base, cost, egrad_u, rgrad_u, rgrad_x, set_cost, transform, transform_with_base,
    upsilon, JadmProblem, JointPoint,
};
use crate::error::Result;
use crate::jacobi::{default_epsilon, select_rotation, Family};
use crate::linalg::{real_inner, CMat};
use crate::manifold::{sl_exp, stiefel_exp, stiefel_project, SlTangentCoord};
use crate::rotation::{
    build_gamma, derivative_norm, diagonal_coeffs, diagonal_model, elementary_derivative,
    gamma_quadratic, minimize_diagonal, minimize_plane, minimize_triangular, triangular_coeffs,
    triangular_model, Rotation2, RotationKind, TriangularRole,
};

use super::oracle::{central_diff, grid_min_2d, grid_min_log_1d, reference_cost};

pub struct SuiteOutcome {
    pub passed: usize,
    pub failed: usize,
}

struct Reporter<'a> {
    emit: &'a mut dyn FnMut(String),
    passed: usize,
    failed: usize,
}

impl<'a> Reporter<'a> {
    fn record(&mut self, name: &str, ok: bool, detail: String) {
        if ok {
            self.passed += 1;
            (self.emit)(format!("PASS {name} ({detail})"));
        } else {
            self.failed += 1;
            (self.emit)(format!("FAIL {name} ({detail})"));
        }
    }
}

const FD_STEP: f64 = 1e-5;
const FD_TOL: f64 = 1e-5;

fn fd_ok(analytic: f64, fd: f64) -> bool {
    let scale = analytic.abs().max(fd.abs());
    if scale < 1e-8 {
        (analytic - fd).abs() <= 1e-8
    } else {
        (analytic - fd).abs() <= FD_TOL * scale
    }
}

/// Runs every check, emitting one line per check; returns the counts.
pub fn oracle_suite(
    problem: &JadmProblem,
    omega: &JointPoint,
    emit: &mut dyn FnMut(String),
) -> Result<SuiteOutcome> {
    let mut r = Reporter {
        emit,
        passed: 0,
        failed: 0,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
    let (n, m) = (problem.n(), problem.m());
    let dagger = problem.dagger();
    let weights = problem.weights().to_vec();

    // transformed set along two algebraic routes
    let wset = transform(problem, omega)?.w;
    {
        let b = congest_base(problem, &omega.u)?;
        let via_base = transform_with_base(&b, &omega.x, dagger);
        let err: f64 = wset
            .iter()
            .zip(&via_base)
            .map(|(a, c)| a.sub(c).norm() / (1.0 + a.norm()))
            .fold(0.0, f64::max);
        r.record("transform-two-paths", err <= 1e-12, format!("max rel err {err:.3e}"));
    }

    let f0 = cost(problem, omega)?;
    {
        let oracle = reference_cost(problem, omega);
        let err = (f0 - oracle).abs() / (1.0 + f0);
        r.record("cost-duplicate-oracle", err <= 1e-12, format!("rel err {err:.3e}"));
    }

    // Euclidean gradient identity for the U block
    {
        let lhs = omega.u.mat().adjoint().matmul(&egrad_u(problem, omega)?);
        let mut ups = CMat::zeros(m, m);
        for (wl, &mu) in wset.iter().zip(&weights) {
            ups.axpy(Complex64::new(mu, 0.0), &upsilon(wl, dagger)?);
        }
        let xh = omega.x.mat().adjoint();
        let rhs = xh.inverse()?.matmul(&ups).matmul(&xh).scale(2.0);
        let err = lhs.sub(&rhs).norm() / (1.0 + rhs.norm());
        r.record("egrad-u-upsilon-identity", err <= 1e-9, format!("rel err {err:.3e}"));
    }

    // Stiefel-block gradient against finite differences through the
    // exponential map
    {
        let grad = rgrad_u(problem, omega)?;
        let mut worst = 0.0f64;
        let mut ok = true;
        for _ in 0..20 {
            let ambient = CMat::from_fn(n, m, |_, _| {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            let dir = stiefel_project(&omega.u, &ambient)?;
            let analytic = real_inner(grad.mat(), dir.mat())?;
            let fd = central_diff(
                &mut |t| {
                    let u_t = stiefel_exp(&omega.u, &dir.scale(t))?;
                    cost(problem, &JointPoint::new(u_t, omega.x.clone())?)
                },
                FD_STEP,
            )?;
            if !fd_ok(analytic, fd) {
                ok = false;
            }
            worst = worst.max((analytic - fd).abs() / analytic.abs().max(fd.abs()).max(1e-8));
        }
        r.record("rgrad-u-finite-differences", ok, format!("worst rel err {worst:.3e}"));
    }

    // X-block gradient coordinate against finite differences through the
    // group exponential
    {
        let lambda = rgrad_x(problem, omega)?;
        let mut worst = 0.0f64;
        let mut ok = true;
        for _ in 0..20 {
            let g = CMat::from_fn(m, m, |_, _| {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            let shift = g.trace() / m as f64;
            let mut o = g;
            for i in 0..m {
                o[(i, i)] -= shift;
            }
            let dir = SlTangentCoord::new(o)?;
            let analytic = real_inner(lambda.mat(), dir.mat())?;
            let fd = central_diff(
                &mut |t| {
                    let x_t = sl_exp(&omega.x, &dir.scale(t))?;
                    cost(problem, &JointPoint::new(omega.u.clone(), x_t)?)
                },
                FD_STEP,
            )?;
            if !fd_ok(analytic, fd) {
                ok = false;
            }
            worst = worst.max((analytic - fd).abs() / analytic.abs().max(fd.abs()).max(1e-8));
        }
        r.record("lambda-finite-differences", ok, format!("worst rel err {worst:.3e}"));
    }

    // derivatives of the four elementary functions at the identity rotation
    if m >= 2 {
        let lambda = rgrad_x(problem, omega)?;
        let g_of = |rot: &Rotation2| -> f64 {
            let mut moved = wset.clone();
            rot.apply_to_set(&mut moved, dagger);
            set_cost(&moved, &weights)
        };
        let mut worst = 0.0f64;
        let mut ok = true;
        let pairs: Vec<(usize, usize)> = (0..m)
            .flat_map(|i| (i + 1..m).map(move |j| (i, j)))
            .collect();
        for &pair in &pairs {
            for kind in [
                RotationKind::Plane,
                RotationKind::Upper,
                RotationKind::Lower,
                RotationKind::Diagonal,
            ] {
                let analytic = elementary_derivative(&lambda, pair, kind);
                let components: Vec<Box<dyn Fn(f64) -> Rotation2>> = match kind {
                    RotationKind::Upper => vec![
                        Box::new(move |t| Rotation2::upper(Complex64::new(t, 0.0), pair)),
                        Box::new(move |t| Rotation2::upper(Complex64::new(0.0, t), pair)),
                    ],
                    RotationKind::Lower => vec![
                        Box::new(move |t| Rotation2::lower(Complex64::new(t, 0.0), pair)),
                        Box::new(move |t| Rotation2::lower(Complex64::new(0.0, t), pair)),
                    ],
                    RotationKind::Diagonal => vec![
                        Box::new(move |t| {
                            Rotation2::diagonal(Complex64::new(1.0 + t, 0.0), pair).unwrap()
                        }),
                        Box::new(move |t| {
                            Rotation2::diagonal(Complex64::new(1.0, t), pair).unwrap()
                        }),
                    ],
                    // sphere coordinates (c, s1, s2) around the pole: the
                    // radial component is identically zero, s1 and s2 move
                    // along (cos θ = √(1−t²), φ ∈ {0, π/2})
                    RotationKind::Plane => vec![
                        Box::new(move |t: f64| Rotation2::plane(t.asin(), 0.0, pair)),
                        Box::new(move |t: f64| {
                            Rotation2::plane(t.asin(), std::f64::consts::FRAC_PI_2, pair)
                        }),
                    ],
                };
                let offset = if kind == RotationKind::Plane { 1 } else { 0 };
                for (c_idx, path) in components.iter().enumerate() {
                    let fd = central_diff(&mut |t| Ok(g_of(&path(t))), FD_STEP)?;
                    let a = analytic[c_idx + offset];
                    if !fd_ok(a, fd) {
                        ok = false;
                    }
                    worst = worst.max((a - fd).abs() / a.abs().max(fd.abs()).max(1e-8));
                }
            }
        }
        r.record(
            "elementary-derivatives-fd",
            ok,
            format!("worst rel err {worst:.3e} over {} pairs x 4 kinds", pairs.len()),
        );

        // coefficient forms against the Λ read-offs
        {
            let mut worst = 0.0f64;
            for &pair in &pairs {
                let (i, j) = pair;
                let a = triangular_coeffs(&wset, &weights, pair, TriangularRole::Upper, dagger);
                let b = triangular_coeffs(&wset, &weights, pair, TriangularRole::Lower, dagger);
                let g = diagonal_coeffs(&wset, &weights, pair);
                let gamma = build_gamma(&wset, &weights, pair, dagger)?;
                let lij = lambda.at(i, j);
                let lji = lambda.at(j, i);
                let ldd = lambda.at(i, i) - lambda.at(j, j);
                worst = worst
                    .max((lij - Complex64::new(2.0 * a.c2, 2.0 * a.c3)).norm())
                    .max((lji - Complex64::new(2.0 * b.c2, 2.0 * b.c3)).norm())
                    .max((ldd.re - 2.0 * (g.g1 - g.g2)).abs())
                    .max(ldd.im.abs());
                // ∂h(I₂) = −4[0, Γ₁₂, Γ₁₃]
                let dh = elementary_derivative(&lambda, pair, RotationKind::Plane);
                worst = worst
                    .max((dh[1] + 4.0 * gamma.gamma[0][1]).abs())
                    .max((dh[2] + 4.0 * gamma.gamma[0][2]).abs());
            }
            let scale = 1.0 + lambda.norm();
            r.record(
                "coefficients-match-lambda",
                worst <= 1e-9 * scale,
                format!("worst abs err {worst:.3e}"),
            );
        }

        // closed-form models against direct evaluation, and minimizers
        // against coarse grid oracles
        {
            let pair = pairs[rng.gen_range(0..pairs.len())];
            let g_direct = |rot: &Rotation2| g_of(rot) - f0;
            let a = triangular_coeffs(&wset, &weights, pair, TriangularRole::Upper, dagger);
            let mut worst = 0.0f64;
            for gx in -2..=2 {
                for gy in -2..=2 {
                    let (x, y) = (0.8 * gx as f64, 0.8 * gy as f64);
                    let direct = g_direct(&Rotation2::upper(Complex64::new(x, y), pair));
                    worst = worst.max((direct - triangular_model(&a, x, y)).abs() / (1.0 + f0));
                }
            }
            r.record("triangular-model", worst <= 1e-9, format!("worst rel err {worst:.3e}"));

            let d = diagonal_coeffs(&wset, &weights, pair);
            let mut worst = 0.0f64;
            for k in 1..=10 {
                let x = 0.3 * k as f64;
                let direct = g_direct(&Rotation2::diagonal(Complex64::new(x, 0.0), pair).unwrap());
                worst = worst.max((direct - diagonal_model(&d, x, 0.0)).abs() / (1.0 + f0));
            }
            r.record("diagonal-model", worst <= 1e-9, format!("worst rel err {worst:.3e}"));

            let gamma = build_gamma(&wset, &weights, pair, dagger)?;
            r.record(
                "gamma-c0-consistency",
                (gamma.c0 - gamma.gamma[0][0]).abs() <= 1e-8 * (1.0 + gamma.c0.abs()),
                format!("c0 {:.6e} vs gamma11 {:.6e}", gamma.c0, gamma.gamma[0][0]),
            );
            let mut worst = 0.0f64;
            for ai in 0..10 {
                for bi in 0..10 {
                    let theta = -std::f64::consts::FRAC_PI_4
                        + std::f64::consts::FRAC_PI_2 * ai as f64 / 9.0;
                    let phi = 2.0 * std::f64::consts::PI * bi as f64 / 10.0;
                    let direct = g_direct(&Rotation2::plane(theta, phi, pair));
                    let model = -(gamma_quadratic(&gamma, theta, phi) - gamma.c0);
                    worst = worst.max((direct - model).abs() / (1.0 + f0));
                }
            }
            r.record("plane-model", worst <= 1e-9, format!("worst rel err {worst:.3e}"));

            // minimizers against coarse grids (the acceptance suite runs the
            // full-resolution versions)
            let (_, dec) = minimize_triangular(&a);
            let grid = grid_min_2d(&|x, y| triangular_model(&a, x, y), (-5.0, 5.0), (-5.0, 5.0), 0.01)?;
            r.record(
                "triangular-minimizer-vs-grid",
                -dec <= grid.best_value + 1e-6,
                format!("closed form {:.6e} vs grid {:.6e}", -dec, grid.best_value),
            );
            let (_, dec) = minimize_diagonal(&d, 0.1)?;
            let grid = grid_min_log_1d(&|x| diagonal_model(&d, x, 0.0), (0.1, 10.0), 1e-3)?;
            r.record(
                "diagonal-minimizer-vs-grid",
                -dec <= grid.best_value + 1e-6,
                format!("closed form {:.6e} vs grid {:.6e}", -dec, grid.best_value),
            );
            let (_, dec) = minimize_plane(&gamma, 0.1)?;
            let grid = grid_min_2d(
                &|theta, phi| -(gamma_quadratic(&gamma, theta, phi) - gamma.c0),
                (-std::f64::consts::FRAC_PI_4, std::f64::consts::FRAC_PI_4),
                (0.0, 2.0 * std::f64::consts::PI),
                0.01,
            )?;
            r.record(
                "plane-minimizer-vs-grid",
                -dec <= grid.best_value + 1e-6,
                format!("closed form {:.6e} vs grid {:.6e}", -dec, grid.best_value),
            );
        }

        // gradient selection gate for both families
        {
            let lambda = rgrad_x(problem, omega)?;
            let mut ok = true;
            let mut detail = String::from("stationary point, gate vacuous");
            if lambda.norm() > 0.0 {
                for family in [Family::Glu, Family::Glq] {
                    if let Some(sel) = select_rotation(&lambda, family, m) {
                        let eps = default_epsilon(family, m);
                        if sel.derivative_norm < eps * sel.lambda_norm {
                            ok = false;
                        }
                        detail = format!(
                            "max |dv| {:.3e} vs eps*|lambda| {:.3e}",
                            sel.derivative_norm,
                            eps * sel.lambda_norm
                        );
                        let check = derivative_norm(&elementary_derivative(
                            &lambda, sel.pair, sel.kind,
                        ));
                        if (check - sel.derivative_norm).abs() > 1e-12 {
                            ok = false;
                        }
                    }
                }
            }
            r.record("selection-gate", ok, detail);
        }
    }

    // exponential maps land on their manifolds
    {
        let mut worst_st = 0.0f64;
        let mut worst_sl = 0.0f64;
        for _ in 0..10 {
            let ambient = CMat::from_fn(n, m, |_, _| {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            let mut dir = stiefel_project(&omega.u, &ambient)?;
            if dir.norm() > 2.0 {
                let s = 2.0 / dir.norm();
                dir = dir.scale(s);
            }
            worst_st = worst_st.max(stiefel_exp(&omega.u, &dir)?.ortho_defect());

            let gmat = CMat::from_fn(m, m, |_, _| {
                Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            let shift = gmat.trace() / m as f64;
            let mut o = gmat;
            for i in 0..m {
                o[(i, i)] -= shift;
            }
            let mut om = SlTangentCoord::new(o)?;
            if om.norm() > 2.0 {
                let s = 2.0 / om.norm();
                om = om.scale(s);
            }
            worst_sl = worst_sl.max(sl_exp(&omega.x, &om)?.det_defect()?);
        }
        r.record(
            "exponential-map-closure",
            worst_st <= 1e-10 && worst_sl <= 1e-8,
            format!("stiefel defect {worst_st:.3e}, sl det defect {worst_sl:.3e}"),
        );
    }

    Ok(SuiteOutcome {
        passed: r.passed,
        failed: r.failed,
    })
}
