//! Independent oracles: central finite differences through an arbitrary
//! curve, exhaustive grid minima over the rotation-parameter domains, and
//! a from-scratch cost evaluator that shares no code with the library
//! implementation.

use crate::cost::{Dagger, JadmProblem, JointPoint};
use crate::error::{Error, Result};

/// One line of a gradient-check table.
#[derive(Clone, Copy, Debug)]
pub struct PairingRow {
    pub analytic: f64,
    pub fd: f64,
    pub abs_err: f64,
    pub rel_err: f64,
}

impl PairingRow {
    pub fn new(analytic: f64, fd: f64) -> Self {
        let abs_err = (analytic - fd).abs();
        let scale = analytic.abs().max(fd.abs());
        PairingRow {
            analytic,
            fd,
            abs_err,
            rel_err: if scale > 0.0 { abs_err / scale } else { abs_err },
        }
    }
}

/// Central difference (f(+h) − f(−h)) / 2h of a scalar curve through 0.
pub fn central_diff(eval: &mut dyn FnMut(f64) -> Result<f64>, step: f64) -> Result<f64> {
    Ok((eval(step)? - eval(-step)?) / (2.0 * step))
}

/// Pairs analytic directional derivatives against central differences for
/// a set of directions. `cost_along(d, t)` evaluates the cost at the point
/// reached by moving t along direction d through the relevant exponential
/// map; `pairing(d)` is the analytic metric pairing ⟨grad, d⟩.
pub fn fd_gradient_table<D>(
    cost_along: &mut dyn FnMut(&D, f64) -> Result<f64>,
    pairing: &mut dyn FnMut(&D) -> Result<f64>,
    directions: &[D],
    step: f64,
) -> Result<Vec<PairingRow>> {
    if !(1e-7..=1e-3).contains(&step) {
        return Err(Error::Domain(format!(
            "finite-difference step {step} outside [1e-7, 1e-3]"
        )));
    }
    directions
        .iter()
        .map(|d| {
            let fd = central_diff(&mut |t| cost_along(d, t), step)?;
            Ok(PairingRow::new(pairing(d)?, fd))
        })
        .collect()
}

/// Result of a grid search.
#[derive(Clone, Copy, Debug)]
pub struct GridResult {
    pub best_value: f64,
    pub best_point: (f64, f64),
}

/// Exhaustive minimum of f over [x0, x1] × [y0, y1] with the given grid
/// spacing (both endpoints included).
pub fn grid_min_2d(
    f: &dyn Fn(f64, f64) -> f64,
    x_range: (f64, f64),
    y_range: (f64, f64),
    resolution: f64,
) -> Result<GridResult> {
    if !(resolution > 0.0) {
        return Err(Error::Domain("grid resolution must be positive".into()));
    }
    let nx = ((x_range.1 - x_range.0) / resolution).round() as usize;
    let ny = ((y_range.1 - y_range.0) / resolution).round() as usize;
    let mut best = GridResult {
        best_value: f64::INFINITY,
        best_point: (x_range.0, y_range.0),
    };
    for i in 0..=nx {
        let x = x_range.0 + i as f64 * resolution;
        for j in 0..=ny {
            let y = y_range.0 + j as f64 * resolution;
            let v = f(x, y);
            if v < best.best_value {
                best = GridResult {
                    best_value: v,
                    best_point: (x, y),
                };
            }
        }
    }
    Ok(best)
}

/// Exhaustive minimum of f over a log-spaced grid on [lo, hi]; `resolution`
/// is the spacing in log10. The second coordinate of the result is unused.
pub fn grid_min_log_1d(
    f: &dyn Fn(f64) -> f64,
    range: (f64, f64),
    resolution: f64,
) -> Result<GridResult> {
    if !(resolution > 0.0) || range.0 <= 0.0 || range.1 <= range.0 {
        return Err(Error::Domain("bad log-grid parameters".into()));
    }
    let (u0, u1) = (range.0.log10(), range.1.log10());
    let n = ((u1 - u0) / resolution).round() as usize;
    let mut best = GridResult {
        best_value: f64::INFINITY,
        best_point: (range.0, 0.0),
    };
    for i in 0..=n {
        let x = 10f64.powf(u0 + i as f64 * resolution);
        let v = f(x);
        if v < best.best_value {
            best = GridResult {
                best_value: v,
                best_point: (x, 0.0),
            };
        }
    }
    Ok(best)
}

/// Exhaustive scan of the triangular model c1·(x²+y²)+2·c2·x+2·c3·y over
/// the square grid on [lo, hi]². Visits exactly the `grid_min_2d` points;
/// the x-profile is precomputed once per scan so the 10⁸-point acceptance
/// grids stay affordable on one core.
pub fn triangular_grid_min(
    c: &crate::rotation::TriangularCoeffs,
    range: (f64, f64),
    resolution: f64,
) -> Result<GridResult> {
    if !(resolution > 0.0) {
        return Err(Error::Domain("grid resolution must be positive".into()));
    }
    let n = ((range.1 - range.0) / resolution).round() as usize;
    let xs: Vec<f64> = (0..=n).map(|i| range.0 + i as f64 * resolution).collect();
    let x_profile: Vec<f64> = xs.iter().map(|&x| c.c1 * x * x + 2.0 * c.c2 * x).collect();
    let mut best = GridResult {
        best_value: f64::INFINITY,
        best_point: (range.0, range.0),
    };
    for (j, &y) in xs.iter().enumerate() {
        let row = c.c1 * y * y + 2.0 * c.c3 * y;
        let mut row_best = f64::INFINITY;
        let mut row_arg = 0usize;
        for (i, &px) in x_profile.iter().enumerate() {
            let v = px + row;
            if v < row_best {
                row_best = v;
                row_arg = i;
            }
        }
        if row_best < best.best_value {
            best = GridResult {
                best_value: row_best,
                best_point: (xs[row_arg], xs[j]),
            };
        }
    }
    Ok(best)
}

/// Exhaustive scan of −(q(θ,φ) − c₀) over the plane-rotation domain
/// (θ, φ) ∈ [−π/4, π/4] × [0, 2π). For each φ the θ-dependence is
/// A·cos4θ + B·sin4θ + C, so the trig work is linear in the grid side.
pub fn plane_grid_min(g: &crate::rotation::GammaForm, resolution: f64) -> Result<GridResult> {
    if !(resolution > 0.0) {
        return Err(Error::Domain("grid resolution must be positive".into()));
    }
    use std::f64::consts::{FRAC_PI_4, PI};
    let nt = (2.0 * FRAC_PI_4 / resolution).round() as usize;
    let np = (2.0 * PI / resolution).round() as usize;
    let thetas: Vec<(f64, f64, f64)> = (0..=nt)
        .map(|i| {
            let t = -FRAC_PI_4 + i as f64 * resolution;
            (t, (4.0 * t).cos(), (4.0 * t).sin())
        })
        .collect();
    let m = &g.gamma;
    let mut best = GridResult {
        best_value: f64::INFINITY,
        best_point: (0.0, 0.0),
    };
    for j in 0..np {
        let phi = j as f64 * resolution;
        let (cp, sp) = (phi.cos(), phi.sin());
        let lower = m[1][1] * cp * cp + 2.0 * m[1][2] * cp * sp + m[2][2] * sp * sp;
        // q = a·cos4θ + b·sin4θ + c with the split of the quadratic form
        let a = 0.5 * (m[0][0] - lower);
        let b = -(m[0][1] * cp + m[0][2] * sp);
        let c = 0.5 * (m[0][0] + lower);
        for &(t, c4, s4) in &thetas {
            let v = -(a * c4 + b * s4 + c - g.c0);
            if v < best.best_value {
                best = GridResult {
                    best_value: v,
                    best_point: (t, phi),
                };
            }
        }
    }
    Ok(best)
}

/// Duplicate-implementation cost oracle: evaluates
/// Σ_ℓ μ_ℓ ‖offdiag((UX)^† A^(ℓ) (UX))‖² with raw index loops over
/// (re, im) pairs, sharing nothing with the matrix code under test.
pub fn reference_cost(problem: &JadmProblem, omega: &JointPoint) -> f64 {
    let n = problem.n();
    let m = problem.m();
    let u = omega.u.mat();
    let x = omega.x.mat();

    // y = u · x as raw pairs
    let mut y = vec![(0.0f64, 0.0f64); n * m];
    for r in 0..n {
        for c in 0..m {
            let mut acc = (0.0, 0.0);
            for k in 0..m {
                let a = u[(r, k)];
                let b = x[(k, c)];
                acc.0 += a.re * b.re - a.im * b.im;
                acc.1 += a.re * b.im + a.im * b.re;
            }
            y[r * m + c] = acc;
        }
    }
    let conj_rows = matches!(problem.dagger(), Dagger::Hermitian);

    let mut total = 0.0;
    for (a, &mu) in problem.matrices().iter().zip(problem.weights()) {
        // t = A·y
        let mut t = vec![(0.0f64, 0.0f64); n * m];
        for r in 0..n {
            for c in 0..m {
                let mut acc = (0.0, 0.0);
                for k in 0..n {
                    let av = a[(r, k)];
                    let yv = y[k * m + c];
                    acc.0 += av.re * yv.0 - av.im * yv.1;
                    acc.1 += av.re * yv.1 + av.im * yv.0;
                }
                t[r * m + c] = acc;
            }
        }
        // w = y^† t, off-diagonal energy only
        let mut energy = 0.0;
        for r in 0..m {
            for c in 0..m {
                if r == c {
                    continue;
                }
                let mut acc = (0.0, 0.0);
                for k in 0..n {
                    let yv = y[k * m + r];
                    let tv = t[k * m + c];
                    let (yre, yim) = if conj_rows { (yv.0, -yv.1) } else { yv };
                    acc.0 += yre * tv.0 - yim * tv.1;
                    acc.1 += yre * tv.1 + yim * tv.0;
                }
                energy += acc.0 * acc.0 + acc.1 * acc.1;
            }
        }
        total += mu * energy;
    }
    total
}
