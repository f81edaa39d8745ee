//! Gauss-Legendre quadrature used by the verification suites.
//!
//! Nodes and weights are computed at runtime by Newton iteration on the
//! Legendre recurrence, so no tabulated constants are involved.

/// Nodes and weights of the order-n Gauss-Legendre rule on [-1, 1].
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 2, "need at least a two-point rule");
    let n = order;
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev-based starting point, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p0 = 1.0;
            let mut p1 = x;
            for j in 2..=n {
                let jf = j as f64;
                let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
                p0 = p1;
                p1 = p2;
            }
            pp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / pp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Composite Gauss-Legendre integral of `f` over [a, b] with equal panels.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize, order: usize) -> f64 {
    let (nodes, weights) = gauss_legendre(order);
    let h = (b - a) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let lo = a + h * p as f64;
        let mid = lo + 0.5 * h;
        let half = 0.5 * h;
        let mut acc = 0.0;
        for (x, w) in nodes.iter().zip(&weights) {
            acc += w * f(mid + half * x);
        }
        total += acc * half;
    }
    total
}

/// Adaptive bisection built on a fixed-order rule: a panel is accepted when
/// splitting it changes the estimate by less than its share of `tol`.
pub fn integrate_auto<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    let (nodes, weights) = gauss_legendre(16);
    fn panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, nodes: &[f64], weights: &[f64]) -> f64 {
        let mid = 0.5 * (a + b);
        let half = 0.5 * (b - a);
        let mut acc = 0.0;
        for (x, w) in nodes.iter().zip(weights) {
            acc += w * f(mid + half * x);
        }
        acc * half
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        whole: f64,
        tol: f64,
        depth: usize,
        nodes: &[f64],
        weights: &[f64],
    ) -> f64 {
        let mid = 0.5 * (a + b);
        let left = panel(f, a, mid, nodes, weights);
        let right = panel(f, mid, b, nodes, weights);
        if depth == 0 || (left + right - whole).abs() <= tol {
            return left + right;
        }
        recurse(f, a, mid, left, 0.5 * tol, depth - 1, nodes, weights)
            + recurse(f, mid, b, right, 0.5 * tol, depth - 1, nodes, weights)
    }
    let whole = panel(f, a, b, &nodes, &weights);
    recurse(f, a, b, whole, tol, 40, &nodes, &weights)
}

/// Tensor-product composite rule over a rectangle.
pub fn integrate2d<F: Fn(f64, f64) -> f64>(
    f: F,
    x_range: (f64, f64),
    y_range: (f64, f64),
    panels_x: usize,
    panels_y: usize,
    order: usize,
) -> f64 {
    let (nodes, weights) = gauss_legendre(order);
    let hx = (x_range.1 - x_range.0) / panels_x as f64;
    let hy = (y_range.1 - y_range.0) / panels_y as f64;
    let mut total = 0.0;
    for px in 0..panels_x {
        let x_lo = x_range.0 + hx * px as f64;
        let x_mid = x_lo + 0.5 * hx;
        for py in 0..panels_y {
            let y_lo = y_range.0 + hy * py as f64;
            let y_mid = y_lo + 0.5 * hy;
            let mut acc = 0.0;
            for (xi, wx) in nodes.iter().zip(&weights) {
                let x = x_mid + 0.5 * hx * xi;
                let mut row = 0.0;
                for (yi, wy) in nodes.iter().zip(&weights) {
                    row += wy * f(x, y_mid + 0.5 * hy * yi);
                }
                acc += wx * row;
            }
            total += acc * 0.25 * hx * hy;
        }
    }
    total
}
