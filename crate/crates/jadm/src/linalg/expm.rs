//! Matrix exponential by scaling and squaring with diagonal Padé
//! approximants (degrees 3/5/7/9/13 chosen from the 1-norm). Backward
//! error stays at unit-roundoff level over the norm range used here.

use num_complex::Complex64;

use super::CMat;
use crate::error::{Error, Result};

const THETA_3: f64 = 1.495585217958292e-2;
const THETA_5: f64 = 2.539398330063230e-1;
const THETA_7: f64 = 9.504178996162932e-1;
const THETA_9: f64 = 2.097847961257068;
const THETA_13: f64 = 5.371920351148152;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [
    17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
];
const B9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// exp(A) for square A.
pub fn mat_exp(a: &CMat) -> Result<CMat> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "mat_exp: {}x{} not square",
            a.rows(),
            a.cols()
        )));
    }
    a.check_finite()?;
    let norm = a.one_norm();
    if norm <= THETA_3 {
        return pade(a, &B3);
    }
    if norm <= THETA_5 {
        return pade(a, &B5);
    }
    if norm <= THETA_7 {
        return pade(a, &B7);
    }
    if norm <= THETA_9 {
        return pade(a, &B9);
    }
    let s = if norm > THETA_13 {
        (norm / THETA_13).log2().ceil() as u32
    } else {
        0
    };
    let scaled = a.scale(0.5f64.powi(s as i32));
    let mut e = pade13(&scaled)?;
    for _ in 0..s {
        e = e.matmul(&e);
    }
    Ok(e)
}

/// Padé approximant of odd degree from coefficients b: r(A) = (V−U)⁻¹(V+U)
/// with U the odd and V the even part of the numerator polynomial.
fn pade(a: &CMat, b: &[f64]) -> Result<CMat> {
    let n = a.rows();
    let a2 = a.matmul(a);
    // u_poly = b1 I + b3 A² + b5 A⁴ + …, v_poly = b0 I + b2 A² + …
    let mut u_poly = CMat::identity(n).scale(b[1]);
    let mut v_poly = CMat::identity(n).scale(b[0]);
    let mut power = CMat::identity(n);
    for k in (2..b.len()).step_by(2) {
        power = power.matmul(&a2);
        u_poly.axpy(Complex64::new(b[k + 1], 0.0), &power);
        v_poly.axpy(Complex64::new(b[k], 0.0), &power);
    }
    let u = a.matmul(&u_poly);
    v_poly.sub(&u).solve(&v_poly.add(&u))
}

fn pade13(a: &CMat) -> Result<CMat> {
    let n = a.rows();
    let b = &B13;
    let a2 = a.matmul(a);
    let a4 = a2.matmul(&a2);
    let a6 = a2.matmul(&a4);
    let mut w = a6.scale(b[13]);
    w.axpy(Complex64::new(b[11], 0.0), &a4);
    w.axpy(Complex64::new(b[9], 0.0), &a2);
    let mut u_poly = a6.matmul(&w);
    u_poly.axpy(Complex64::new(b[7], 0.0), &a6);
    u_poly.axpy(Complex64::new(b[5], 0.0), &a4);
    u_poly.axpy(Complex64::new(b[3], 0.0), &a2);
    u_poly = u_poly.add(&CMat::identity(n).scale(b[1]));
    let u = a.matmul(&u_poly);

    let mut w2 = a6.scale(b[12]);
    w2.axpy(Complex64::new(b[10], 0.0), &a4);
    w2.axpy(Complex64::new(b[8], 0.0), &a2);
    let mut v = a6.matmul(&w2);
    v.axpy(Complex64::new(b[6], 0.0), &a6);
    v.axpy(Complex64::new(b[4], 0.0), &a4);
    v.axpy(Complex64::new(b[2], 0.0), &a2);
    v = v.add(&CMat::identity(n).scale(b[0]));

    v.sub(&u).solve(&v.add(&u))
}
