//! Gauss-Legendre quadrature helpers shared by the analytic modules.

use num_complex::Complex64;
use std::f64::consts::PI;

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
///
/// Newton iteration on the Legendre polynomial, seeded with the Chebyshev
/// angle estimate. Accurate to machine precision for the orders used here.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Initial guess for the i-th root (descending).
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Evaluate P_n(x) and P_n'(x) by the three-term recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 1 { x } else { p1 };
            dp = (n as f64) * (x * p - p0) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n == 1 {
        nodes[0] = 0.0;
        weights[0] = 2.0;
    }
    (nodes, weights)
}

/// Integrate `f` over `[a, b]` with a composite rule of `panels` equal
/// panels, `order`-point Gauss-Legendre each.
pub fn integrate(f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64, panels: usize, order: usize) -> f64 {
    let (xs, ws) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + h * p as f64;
        let mid = lo + 0.5 * h;
        let mut acc = 0.0;
        for (x, w) in xs.iter().zip(ws.iter()) {
            acc += w * f(mid + 0.5 * h * x);
        }
        total += acc * 0.5 * h;
    }
    total
}

/// Complex-valued variant of [`integrate`].
pub fn integrate_complex(
    f: &mut dyn FnMut(f64) -> Complex64,
    a: f64,
    b: f64,
    panels: usize,
    order: usize,
) -> Complex64 {
    let (xs, ws) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut total = Complex64::new(0.0, 0.0);
    for p in 0..panels {
        let lo = a + h * p as f64;
        let mid = lo + 0.5 * h;
        let mut acc = Complex64::new(0.0, 0.0);
        for (x, w) in xs.iter().zip(ws.iter()) {
            acc += f(mid + 0.5 * h * x) * *w;
        }
        total += acc * 0.5 * h;
    }
    total
}

/// Integrate over `[a, b]` with explicit panel edges (graded meshes).
pub fn integrate_graded(f: &mut dyn FnMut(f64) -> f64, edges: &[f64], order: usize) -> f64 {
    let (xs, ws) = gauss_legendre(order);
    let mut total = 0.0;
    for pair in edges.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        let h = hi - lo;
        let mid = 0.5 * (lo + hi);
        let mut acc = 0.0;
        for (x, w) in xs.iter().zip(ws.iter()) {
            acc += w * f(mid + 0.5 * h * x);
        }
        total += acc * 0.5 * h;
    }
    total
}

/// Geometrically graded panel edges from `a` toward `b`, first panel width
/// `first`, doubling until `b` is reached.
pub fn geometric_edges(a: f64, b: f64, first: f64) -> Vec<f64> {
    assert!(b > a && first > 0.0);
    let mut edges = vec![a];
    let mut w = first;
    let mut x = a;
    while x + w < b {
        x += w;
        edges.push(x);
        w *= 2.0;
    }
    edges.push(b);
    edges
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl_integrates_polynomials_exactly() {
        // 8-point rule is exact through degree 15.
        let v = integrate(&mut |x| x.powi(14), -1.0, 1.0, 1, 8);
        assert!((v - 2.0 / 15.0).abs() < 1e-14);
    }

    #[test]
    fn gl_gaussian() {
        let v = integrate(&mut |x| (-x * x).exp(), -8.0, 8.0, 16, 16);
        assert!((v - PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn graded_matches_uniform() {
        let mut f = |x: f64| (-20.0 * x).exp();
        let edges = geometric_edges(0.0, 3.0, 0.01);
        let a = integrate_graded(&mut f, &edges, 16);
        let b = integrate(&mut f, 0.0, 3.0, 200, 16);
        assert!((a - b).abs() < 1e-13);
    }
}
