//! Acceptance suite: one test per criterion, each printing a PASS/FAIL
//! line (run with `cargo test --test acceptance -- --nocapture` to see the
//! lines for passing criteria too). Tolerances are pinned in the code.

use std::sync::OnceLock;
use std::time::Instant;

use num_complex::Complex64 as C;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use jadm::cost::{cost, rgrad_u, rgrad_x, transform, Dagger, JadmProblem, JointPoint};
use jadm::harness::{
    central_diff, generate_instance, grid_min_log_1d, plane_grid_min, run_algo,
    triangular_grid_min, trace_csv_string, AlgoKind, InstanceSpec, SolverSettings,
};
use jadm::jacobi::{default_epsilon, select_rotation, Family};
use jadm::linalg::{real_inner, CMat};
use jadm::manifold::{sl_exp, stiefel_exp, stiefel_project, SlPoint, SlTangentCoord, StiefelPoint};
use jadm::rotation::{
    build_gamma, diagonal_coeffs, diagonal_model, elementary_derivative, gamma_quadratic,
    minimize_diagonal, minimize_plane, minimize_triangular, triangular_coeffs, triangular_model,
    Rotation2, RotationKind, TriangularCoeffs, TriangularRole,
};
use jadm::trace::SolveRun;

const FD_STEP: f64 = 1e-5;

fn report(criterion: &str, pass: bool, detail: &str) {
    println!(
        "criterion {criterion}: {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} failed: {detail}");
}

fn rel_err(a: f64, b: f64) -> f64 {
    let scale = a.abs().max(b.abs());
    if scale < 1e-8 {
        0.0
    } else {
        (a - b).abs() / scale
    }
}

fn random_traceless(m: usize, rng: &mut ChaCha8Rng) -> SlTangentCoord {
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

// ----------------------------------------------------------------------
// criterion 1: every analytic gradient matches central finite differences
// ----------------------------------------------------------------------

#[test]
fn criterion_01_gradient_correctness() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut worst = 0.0f64;
    let mut checks = 0usize;

    for trial in 0..50 {
        let dagger = if trial % 2 == 0 {
            Dagger::Hermitian
        } else {
            Dagger::Transpose
        };
        let n = rng.gen_range(2..=6usize);
        let m = rng.gen_range(1..=n.min(4));
        let l = rng.gen_range(1..=5usize);
        let spec = InstanceSpec {
            n,
            m,
            l,
            dagger,
            noise: 0.05,
            seed: 1000 + trial,
            diag_spread: 0.1,
        };
        let (problem, _) = generate_instance(&spec).unwrap();
        let omega = jadm::harness::random_joint_point(n, m, 2000 + trial).unwrap();

        // Stiefel-block Riemannian gradient through the exponential map
        let grad_u = rgrad_u(&problem, &omega).unwrap();
        for _ in 0..3 {
            let ambient = CMat::from_fn(n, m, |_, _| {
                C::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
            });
            let dir = stiefel_project(&omega.u, &ambient).unwrap();
            let analytic = real_inner(grad_u.mat(), dir.mat()).unwrap();
            let fd = central_diff(
                &mut |t| {
                    let u_t = stiefel_exp(&omega.u, &dir.scale(t))?;
                    cost(&problem, &JointPoint::new(u_t, omega.x.clone())?)
                },
                FD_STEP,
            )
            .unwrap();
            worst = worst.max(rel_err(analytic, fd));
            checks += 1;
        }

        // special-linear block gradient coordinate Λ through the group
        // exponential
        let lambda = rgrad_x(&problem, &omega).unwrap();
        for _ in 0..3 {
            let dir = random_traceless(m, &mut rng);
            let analytic = real_inner(lambda.mat(), dir.mat()).unwrap();
            let fd = central_diff(
                &mut |t| {
                    let x_t = sl_exp(&omega.x, &dir.scale(t))?;
                    cost(&problem, &JointPoint::new(omega.u.clone(), x_t)?)
                },
                FD_STEP,
            )
            .unwrap();
            worst = worst.max(rel_err(analytic, fd));
            checks += 1;
        }

        if m < 2 {
            continue;
        }
        // elementary derivatives and the coefficient closed forms at a pair
        let wset = transform(&problem, &omega).unwrap().w;
        let weights = problem.weights().to_vec();
        let f0 = jadm::cost::set_cost(&wset, &weights);
        let i = rng.gen_range(0..m - 1);
        let j = rng.gen_range(i + 1..m);
        let g_of = |rot: &Rotation2| -> f64 {
            let mut moved = wset.clone();
            rot.apply_to_set(&mut moved, dagger);
            jadm::cost::set_cost(&moved, &weights)
        };
        let _ = f0;
        for kind in [
            RotationKind::Plane,
            RotationKind::Upper,
            RotationKind::Lower,
            RotationKind::Diagonal,
        ] {
            let analytic = elementary_derivative(&lambda, (i, j), kind);
            // coefficient forms give the same derivative vectors
            let coeff_form: Vec<f64> = match kind {
                RotationKind::Upper => {
                    let a = triangular_coeffs(&wset, &weights, (i, j), TriangularRole::Upper, dagger);
                    vec![2.0 * a.c2, 2.0 * a.c3]
                }
                RotationKind::Lower => {
                    let b = triangular_coeffs(&wset, &weights, (i, j), TriangularRole::Lower, dagger);
                    vec![2.0 * b.c2, 2.0 * b.c3]
                }
                RotationKind::Diagonal => {
                    let g = diagonal_coeffs(&wset, &weights, (i, j));
                    vec![2.0 * (g.g1 - g.g2), 0.0]
                }
                RotationKind::Plane => {
                    let g = build_gamma(&wset, &weights, (i, j), dagger).unwrap();
                    vec![0.0, -4.0 * g.gamma[0][1], -4.0 * g.gamma[0][2]]
                }
            };
            for (idx, (a, c)) in analytic.iter().zip(&coeff_form).enumerate() {
                let e = rel_err(*a, *c);
                if e > 1e-5 {
                    eprintln!("COEFF MISMATCH kind={kind:?} dagger={dagger} comp={idx} analytic={a:.6e} coeff={c:.6e}");
                }
                worst = worst.max(e);
                checks += 1;
            }
            // finite differences along the rotation parameters
            let paths: Vec<Box<dyn Fn(f64) -> Rotation2>> = match kind {
                RotationKind::Upper => vec![
                    Box::new(move |t| Rotation2::upper(C::new(t, 0.0), (i, j))),
                    Box::new(move |t| Rotation2::upper(C::new(0.0, t), (i, j))),
                ],
                RotationKind::Lower => vec![
                    Box::new(move |t| Rotation2::lower(C::new(t, 0.0), (i, j))),
                    Box::new(move |t| Rotation2::lower(C::new(0.0, t), (i, j))),
                ],
                RotationKind::Diagonal => vec![
                    Box::new(move |t| Rotation2::diagonal(C::new(1.0 + t, 0.0), (i, j)).unwrap()),
                    Box::new(move |t| Rotation2::diagonal(C::new(1.0, t), (i, j)).unwrap()),
                ],
                RotationKind::Plane => vec![
                    Box::new(move |t: f64| Rotation2::plane(t.asin(), 0.0, (i, j))),
                    Box::new(move |t: f64| {
                        Rotation2::plane(t.asin(), std::f64::consts::FRAC_PI_2, (i, j))
                    }),
                ],
            };
            let offset = usize::from(kind == RotationKind::Plane);
            for (c_idx, path) in paths.iter().enumerate() {
                let fd = central_diff(&mut |t| Ok(g_of(&path(t))), FD_STEP).unwrap();
                let e = rel_err(analytic[c_idx + offset], fd);
                if e > 1e-5 {
                    eprintln!("FD MISMATCH kind={kind:?} dagger={dagger} comp={c_idx} analytic={:.6e} fd={fd:.6e}", analytic[c_idx + offset]);
                }
                worst = worst.max(e);
                checks += 1;
            }
        }
    }
    let elapsed = t0.elapsed().as_secs_f64();
    report(
        "1 (gradient correctness)",
        worst <= 1e-5 && elapsed < 60.0,
        &format!("worst rel err {worst:.3e} over {checks} checks, {elapsed:.1}s"),
    );
}

// ----------------------------------------------------------------------
// criterion 2: closed-form minimizers against exhaustive grids
// ----------------------------------------------------------------------

#[test]
fn criterion_02_minimizer_optimality() {
    let t0 = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(202);
    let mut worst_gap = f64::NEG_INFINITY;
    let sigma_var = 0.1;
    let eps_inner = 0.1;

    // triangular: model value of the closed form vs the [−5,5]² grid
    for k in 0..200 {
        let c1 = if k % 25 == 0 { 0.0 } else { rng.gen_range(0.05..3.0) };
        let (c2, c3) = if c1 == 0.0 {
            (0.0, 0.0)
        } else {
            (rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0))
        };
        let coeffs = TriangularCoeffs {
            c1,
            c2,
            c3,
            role: TriangularRole::Upper,
            pair: (0, 1),
        };
        let (_, dec) = minimize_triangular(&coeffs);
        let grid = triangular_grid_min(&coeffs, (-5.0, 5.0), 1e-3).unwrap();
        worst_gap = worst_gap.max(-dec - grid.best_value);
    }
    let triangular_gap = worst_gap;

    // diagonal: ratios inside [ς, 1/ς], where the closed form is the
    // unconstrained optimum (outside that band the safeguard deliberately
    // trades optimality for bounded steps)
    worst_gap = f64::NEG_INFINITY;
    for _ in 0..200 {
        let g1 = 10f64.powf(rng.gen_range(-2.0..1.0));
        let ratio = 10f64.powf(rng.gen_range(-1.0..1.0)); // [0.1, 10] = [ς, 1/ς]
        let coeffs = diagonal_coeffs(&[CMat::zeros(2, 2)], &[1.0], (0, 1));
        let _ = coeffs;
        let d = jadm::rotation::DiagonalCoeffs {
            g1,
            g2: ratio * g1,
            pair: (0, 1),
        };
        let (_, dec) = minimize_diagonal(&d, sigma_var).unwrap();
        let grid = grid_min_log_1d(&|x| diagonal_model(&d, x, 0.0), (0.1, 10.0), 1e-3).unwrap();
        worst_gap = worst_gap.max(-dec - grid.best_value);
    }
    let diagonal_gap = worst_gap;

    // plane: eigenvector branch draws vs the (θ, φ) grid
    worst_gap = f64::NEG_INFINITY;
    let mut eigen_branch = 0usize;
    for _ in 0..200 {
        let mut gamma = [[0.0f64; 3]; 3];
        for a in 0..3 {
            for b in a..3 {
                let v = rng.gen_range(-1.0..1.0);
                gamma[a][b] = v;
                gamma[b][a] = v;
            }
        }
        let g = jadm::rotation::GammaForm {
            c0: gamma[0][0],
            gamma,
            pair: (0, 1),
        };
        let (rot, dec) = minimize_plane(&g, eps_inner).unwrap();
        let grid = plane_grid_min(&g, 1e-3).unwrap();
        // detect which branch was taken by recomputing the alignment test
        let (_, mut u) = jadm::rotation::sym3_top_eigenpair(&g.gamma);
        if u[0] < 0.0 {
            for x in &mut u {
                *x = -*x;
            }
        }
        let v = [g.gamma[0][1], g.gamma[0][2]];
        let w = [u[1], u[2]];
        let inner = (v[0] * w[0] + v[1] * w[1]).abs();
        let aligned = inner
            >= eps_inner * (v[0] * v[0] + v[1] * v[1]).sqrt() * (w[0] * w[0] + w[1] * w[1]).sqrt();
        if aligned {
            eigen_branch += 1;
            worst_gap = worst_gap.max(-dec - grid.best_value);
        } else {
            // the fallback branch still never loses to the identity
            assert!(dec >= -1e-12, "fallback rotation increased the model");
        }
        let _ = rot;
    }
    let plane_gap = worst_gap;

    let elapsed = t0.elapsed().as_secs_f64();
    let pass = triangular_gap <= 1e-6 && diagonal_gap <= 1e-6 && plane_gap <= 1e-6 && elapsed < 120.0;
    report(
        "2 (closed-form minimizer optimality)",
        pass,
        &format!(
            "gaps vs grids: triangular {triangular_gap:.2e}, diagonal {diagonal_gap:.2e}, plane {plane_gap:.2e} ({eigen_branch}/200 eigen-branch), {elapsed:.1}s"
        ),
    );
}

// ----------------------------------------------------------------------
// shared solver runs for criteria 3, 4, 7, 8
// ----------------------------------------------------------------------

struct RecoveryRuns {
    per_algo: Vec<(AlgoKind, Vec<SolveRun>)>,
    wall_seconds: f64,
}

fn recovery_runs() -> &'static RecoveryRuns {
    static RUNS: OnceLock<RecoveryRuns> = OnceLock::new();
    RUNS.get_or_init(|| {
        let t0 = Instant::now();
        let mut per_algo = Vec::new();
        for (algo, n, m) in [
            (AlgoKind::BcdGlu, 6usize, 4usize),
            (AlgoKind::BcdGlq, 6, 4),
            (AlgoKind::JacobiGlu, 6, 6),
            (AlgoKind::JacobiGlq, 6, 6),
        ] {
            let mut runs = Vec::new();
            for seed in 0..20u64 {
                let spec = InstanceSpec {
                    n,
                    m,
                    l: 5,
                    dagger: Dagger::Hermitian,
                    noise: 0.0,
                    seed,
                    diag_spread: 0.1,
                };
                let (problem, _) = generate_instance(&spec).unwrap();
                let init = JointPoint::new(
                    StiefelPoint::standard(n, m).unwrap(),
                    SlPoint::identity(m),
                )
                .unwrap();
                let settings = SolverSettings {
                    max_iters: Some(5000),
                    upsilon: Some(0.5),
                    ..Default::default()
                };
                let (run, _) = run_algo(&problem, &init, algo, &settings).unwrap();
                runs.push(run);
            }
            per_algo.push((algo, runs));
        }
        RecoveryRuns {
            per_algo,
            wall_seconds: t0.elapsed().as_secs_f64(),
        }
    })
}

#[test]
fn criterion_03_exact_recovery() {
    let runs = recovery_runs();
    let mut detail = String::new();
    let mut all_ok = true;
    for (algo, algo_runs) in &runs.per_algo {
        let ok = algo_runs
            .iter()
            .filter(|r| r.final_cost <= 1e-10 * r.initial_cost && r.final_grad <= 1e-6)
            .count();
        detail.push_str(&format!("{algo} {ok}/20  "));
        if ok < 20 {
            all_ok = false;
        }
    }
    detail.push_str(&format!("({:.0}s total)", runs.wall_seconds));
    let pass = all_ok && runs.wall_seconds < 300.0;
    report("3 (exact recovery, 20/20 seeds)", pass, &detail);
}

#[test]
fn criterion_04_monotonicity_and_selection() {
    let runs = recovery_runs();
    let upsilon = 0.5;
    let mut violations = 0usize;
    let mut rows = 0usize;
    for (algo, algo_runs) in &runs.per_algo {
        for run in algo_runs {
            let eps = default_epsilon(algo.family(), run.final_point.x.m());
            let mut prev = run.initial_cost;
            for row in &run.trace {
                rows += 1;
                // exact non-increase of the cost column
                if row.cost > prev {
                    violations += 1;
                }
                prev = row.cost;
                // block selection inequality with υ = 0.5
                let g_t = if row.block == 1 { row.grad_f1 } else { row.grad_f2 };
                if g_t < upsilon * row.grad_f * (1.0 - 1e-12) {
                    violations += 1;
                }
                // rotation selection gate with the default ε
                if row.block == 2 {
                    let sel = row.selection_norm.unwrap();
                    if sel < eps * row.grad_f2 * (1.0 - 1e-12) {
                        violations += 1;
                    }
                }
            }
        }
    }
    report(
        "4 (monotonicity and selection inequalities)",
        violations == 0,
        &format!("{violations} violations over {rows} trace rows"),
    );
}

// ----------------------------------------------------------------------
// criterion 5: quantitative selection bound
// ----------------------------------------------------------------------

#[test]
fn criterion_05_selection_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(505);
    let mut violations = 0usize;
    let mut worst_margin = f64::INFINITY;
    for m in 2..=8usize {
        let glu_c = 2.0 / (3.0 * m as f64 * (m as f64 - 1.0));
        let glq_c = (3.0 - 5.0f64.sqrt()) / (3.0 * m as f64 * (m as f64 - 1.0));
        for _ in 0..1000 {
            let lambda = random_traceless(m, &mut rng);
            let n2 = lambda.norm().powi(2);
            let su = select_rotation(&lambda, Family::Glu, m).unwrap();
            let sq = select_rotation(&lambda, Family::Glq, m).unwrap();
            let mu = su.derivative_norm.powi(2) / (glu_c * n2);
            let mq = sq.derivative_norm.powi(2) / (glq_c * n2);
            worst_margin = worst_margin.min(mu).min(mq);
            if mu < 1.0 - 1e-12 || mq < 1.0 - 1e-12 {
                violations += 1;
            }
        }
    }
    report(
        "5 (quantitative selection bound)",
        violations == 0,
        &format!("{violations} violations; worst bound ratio {worst_margin:.4}"),
    );
}

// ----------------------------------------------------------------------
// criterion 6: the two pairwise identities behind the bound
// ----------------------------------------------------------------------

#[test]
fn criterion_06_pairwise_identities() {
    let mut rng = ChaCha8Rng::seed_from_u64(606);
    let ratio = (3.0 - 5.0f64.sqrt()) / 2.0;
    let mut violations = 0usize;
    for _ in 0..10_000 {
        let z1 = C::new(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
        let z2 = C::new(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
        let lhs = (z1 - z2).norm_sqr() + z2.norm_sqr();
        let rhs = ratio * (z1.norm_sqr() + z2.norm_sqr());
        if lhs - rhs < -1e-12 * (1.0 + rhs) {
            violations += 1;
        }
    }
    let mut worst_rel = 0.0f64;
    for _ in 0..1000 {
        let m = rng.gen_range(2..=9usize);
        let mut zs: Vec<C> = (0..m)
            .map(|_| C::new(rng.gen_range(-5.0..5.0), rng.gen_range(-5.0..5.0)))
            .collect();
        let mean = zs.iter().sum::<C>() / m as f64;
        for z in &mut zs {
            *z -= mean;
        }
        let lhs: f64 = (0..m)
            .flat_map(|a| (a + 1..m).map(move |b| (a, b)))
            .map(|(a, b)| (zs[a] - zs[b]).norm_sqr())
            .sum();
        let rhs = m as f64 * zs.iter().map(|z| z.norm_sqr()).sum::<f64>();
        worst_rel = worst_rel.max((lhs - rhs).abs() / (1.0 + rhs));
    }
    report(
        "6 (pairwise inequality and zero-sum identity)",
        violations == 0 && worst_rel <= 1e-10,
        &format!("{violations} inequality violations; identity worst rel {worst_rel:.2e}"),
    );
}

#[test]
fn criterion_07_manifold_closure() {
    let runs = recovery_runs();
    let mut worst_ortho = 0.0f64;
    let mut worst_det = 0.0f64;
    for (_, algo_runs) in &runs.per_algo {
        for run in algo_runs {
            for row in &run.trace {
                worst_ortho = worst_ortho.max(row.ortho_defect);
                worst_det = worst_det.max(row.det_defect);
            }
        }
    }
    report(
        "7 (manifold closure along all runs)",
        worst_ortho <= 1e-9 && worst_det <= 1e-7,
        &format!("max ‖UᴴU−I‖ {worst_ortho:.2e}, max |det X − 1| {worst_det:.2e}"),
    );
}

#[test]
fn criterion_08_predicted_vs_actual_decrease() {
    let runs = recovery_runs();
    let mut violations = 0usize;
    let mut rows = 0usize;
    let mut worst = 0.0f64;
    for (_, algo_runs) in &runs.per_algo {
        for run in algo_runs {
            for row in &run.trace {
                if row.block != 2 {
                    continue;
                }
                rows += 1;
                let predicted = row.predicted_decrease.unwrap();
                let gap = (predicted - row.decrease).abs();
                let tol = 1e-8 * (1.0 + row.cost);
                worst = worst.max(gap / tol);
                if gap > tol {
                    violations += 1;
                }
            }
        }
    }
    report(
        "8 (predicted equals realized decrease)",
        violations == 0,
        &format!("{violations} violations over {rows} rotations; worst gap {worst:.2e}× tolerance"),
    );
}

// ----------------------------------------------------------------------
// criterion 9: noisy-regime behavior
// ----------------------------------------------------------------------

#[test]
fn criterion_09_noisy_regime() {
    let mut ok = 0usize;
    let total = 40usize;
    let mut worst_grad = 0.0f64;
    let mut worst_tail = 0.0f64;
    for algo in [AlgoKind::BcdGlu, AlgoKind::BcdGlq] {
        for seed in 0..20u64 {
            let spec = InstanceSpec {
                n: 6,
                m: 4,
                l: 5,
                dagger: Dagger::Hermitian,
                noise: 1e-3,
                seed,
                diag_spread: 0.1,
            };
            let (problem, _) = generate_instance(&spec).unwrap();
            let init = JointPoint::new(
                StiefelPoint::standard(6, 4).unwrap(),
                SlPoint::identity(4),
            )
            .unwrap();
            let settings = SolverSettings {
                max_iters: Some(20_000),
                grad_tol: Some(1e-7),
                ..Default::default()
            };
            let (run, _) = run_algo(&problem, &init, algo, &settings).unwrap();
            // iterate movement over the last 10% of iterations; block-2
            // steps move X by at most ‖X‖·‖Ψ−I‖
            let k = run.trace.len();
            let tail: f64 = run.trace[(9 * k) / 10..]
                .iter()
                .map(|r| {
                    if r.block == 1 {
                        r.step_size
                    } else {
                        r.step_size * r.norm_x
                    }
                })
                .sum();
            worst_grad = worst_grad.max(run.final_grad);
            worst_tail = worst_tail.max(tail);
            if run.final_grad <= 1e-6 && tail <= 1e-4 {
                ok += 1;
            }
        }
    }
    report(
        "9 (noisy-regime gradient and tail movement)",
        ok == total,
        &format!("{ok}/{total} runs met both bounds; worst grad {worst_grad:.2e}, worst tail {worst_tail:.2e}"),
    );
}

// ----------------------------------------------------------------------
// criterion 10: byte-identical traces from identical seeds
// ----------------------------------------------------------------------

#[test]
fn criterion_10_determinism() {
    let configs: Vec<(AlgoKind, usize, usize, Dagger, f64, u64)> = vec![
        (AlgoKind::BcdGlu, 6, 4, Dagger::Hermitian, 0.0, 3),
        (AlgoKind::BcdGlq, 6, 4, Dagger::Transpose, 1e-3, 5),
        (AlgoKind::JacobiGlu, 5, 5, Dagger::Hermitian, 0.0, 7),
        (AlgoKind::JacobiClq, 4, 4, Dagger::Transpose, 1e-2, 9),
        (AlgoKind::JacobiClu, 6, 6, Dagger::Hermitian, 1e-4, 11),
    ];
    let mut all_same = true;
    for (algo, n, m, dagger, noise, seed) in configs {
        let one = || {
            let spec = InstanceSpec {
                n,
                m,
                l: 3,
                dagger,
                noise,
                seed,
                diag_spread: 0.1,
            };
            let (problem, _) = generate_instance(&spec).unwrap();
            let init = jadm::harness::random_joint_point(n, m, seed).unwrap();
            let settings = SolverSettings {
                max_iters: Some(400),
                ..Default::default()
            };
            let (run, _) = run_algo(&problem, &init, algo, &settings).unwrap();
            trace_csv_string(&run.trace)
        };
        let a = one();
        let b = one();
        if a != b {
            all_same = false;
        }
    }
    report(
        "10 (determinism: byte-identical traces)",
        all_same,
        "5 configs solved twice each",
    );
}

// ----------------------------------------------------------------------
// supporting consistency checks referenced by the criteria
// ----------------------------------------------------------------------

/// The plane model q(θ,φ) reproduces the elementary cost exactly, so the
/// grid comparisons in criterion 2 transfer to the real cost.
#[test]
fn plane_model_spot_check() {
    let mut rng = ChaCha8Rng::seed_from_u64(707);
    let spec = InstanceSpec {
        n: 4,
        m: 4,
        l: 3,
        dagger: Dagger::Hermitian,
        noise: 0.1,
        seed: 99,
        diag_spread: 0.1,
    };
    let (problem, _) = generate_instance(&spec).unwrap();
    let omega = jadm::harness::random_joint_point(4, 4, 17).unwrap();
    let wset = transform(&problem, &omega).unwrap().w;
    let weights = problem.weights().to_vec();
    let f0 = jadm::cost::set_cost(&wset, &weights);
    let g = build_gamma(&wset, &weights, (1, 3), Dagger::Hermitian).unwrap();
    for _ in 0..50 {
        let theta = rng.gen_range(-std::f64::consts::FRAC_PI_4..std::f64::consts::FRAC_PI_4);
        let phi = rng.gen_range(0.0..2.0 * std::f64::consts::PI);
        let rot = Rotation2::plane(theta, phi, (1, 3));
        let mut moved = wset.clone();
        rot.apply_to_set(&mut moved, Dagger::Hermitian);
        let direct = jadm::cost::set_cost(&moved, &weights) - f0;
        let model = -(gamma_quadratic(&g, theta, phi) - g.c0);
        assert!((direct - model).abs() <= 1e-9 * (1.0 + f0));
    }
}

/// The triangular model reproduces the elementary cost exactly on a grid.
#[test]
fn triangular_model_spot_check() {
    let spec = InstanceSpec {
        n: 5,
        m: 3,
        l: 4,
        dagger: Dagger::Transpose,
        noise: 0.05,
        seed: 3,
        diag_spread: 0.1,
    };
    let (problem, _) = generate_instance(&spec).unwrap();
    let omega = jadm::harness::random_joint_point(5, 3, 4).unwrap();
    let wset = transform(&problem, &omega).unwrap().w;
    let weights = problem.weights().to_vec();
    let f0 = jadm::cost::set_cost(&wset, &weights);
    let coeffs = triangular_coeffs(&wset, &weights, (0, 2), TriangularRole::Lower, Dagger::Transpose);
    for gx in -2..=2 {
        for gy in -2..=2 {
            let (x, y) = (0.9 * gx as f64, 0.9 * gy as f64);
            let rot = Rotation2::lower(C::new(x, y), (0, 2));
            let mut moved = wset.clone();
            rot.apply_to_set(&mut moved, Dagger::Transpose);
            let direct = jadm::cost::set_cost(&moved, &weights) - f0;
            let model = triangular_model(&coeffs, x, y);
            assert!((direct - model).abs() <= 1e-9 * (1.0 + f0));
        }
    }
}
