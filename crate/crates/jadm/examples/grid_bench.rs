use jadm::harness::grid_min_2d;
use std::time::Instant;
fn main() {
    let t0 = Instant::now();
    let f = |x: f64, y: f64| 2.0 * (x * x + y * y) + 2.0 * 1.0 * x + 2.0 * 0.5 * y;
    let r = grid_min_2d(&f, (-5.0, 5.0), (-5.0, 5.0), 1e-3).unwrap();
    println!("one triangular grid: {:?} best={:.6}", t0.elapsed(), r.best_value);
    let t1 = Instant::now();
    let g = [[0.3, 0.1, -0.2], [0.1, -0.5, 0.05], [-0.2, 0.05, 0.8]];
    let q = |theta: f64, phi: f64| {
        let r = [(2.0*theta).cos(), -(2.0*theta).sin()*phi.cos(), -(2.0*theta).sin()*phi.sin()];
        let mut s = 0.0;
        for a in 0..3 { for b in 0..3 { s += r[a]*g[a][b]*r[b]; } }
        -s
    };
    let r2 = grid_min_2d(&q, (-0.7853981633974483, 0.7853981633974483), (0.0, 6.283185307179586), 1e-3).unwrap();
    println!("one plane grid: {:?} best={:.6}", t1.elapsed(), r2.best_value);
}
