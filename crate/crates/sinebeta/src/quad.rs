//! Small quadrature toolkit: Gauss–Legendre rules, composite panels and
//! Chebyshev interpolation on an interval.
//!
//! Everything here is plain 1-D machinery; the domain-specific integrands
//! live with their owners.

use std::f64::consts::PI;
use std::sync::OnceLock;

/// Nodes and weights of an `n`-point Gauss–Legendre rule on [-1, 1].
///
/// Computed by Newton iteration on the Legendre polynomial; accurate to
/// machine precision for the orders used here (<= 64).
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Evaluate P_n and P_n' via the three-term recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn gl32() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(32))
}

/// Integrate `f` over `[a, b]` with a single 32-point Gauss–Legendre panel.
pub fn gl32_panel(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64) -> f64 {
    let (nodes, weights) = gl32();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut acc = 0.0;
    for (x, w) in nodes.iter().zip(weights.iter()) {
        acc += w * f(mid + half * x);
    }
    acc * half
}

/// Composite 32-point Gauss–Legendre over `panels` equal subintervals.
pub fn gl32_composite(mut f: impl FnMut(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let panels = panels.max(1);
    let h = (b - a) / panels as f64;
    let mut acc = 0.0;
    for i in 0..panels {
        let lo = a + i as f64 * h;
        acc += gl32_panel(&mut f, lo, lo + h);
    }
    acc
}

/// Adaptive panel-splitting integration: a panel is accepted once one more
/// halving changes its value by less than its share of `tol`.
pub fn integrate_adaptive(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    fn recurse(
        f: &mut impl FnMut(f64) -> f64,
        a: f64,
        b: f64,
        whole: f64,
        tol: f64,
        depth: usize,
    ) -> f64 {
        let mid = 0.5 * (a + b);
        let left = gl32_panel(f, a, mid);
        let right = gl32_panel(f, mid, b);
        if depth >= 40 || (left + right - whole).abs() <= tol {
            return left + right;
        }
        recurse(f, a, mid, left, 0.5 * tol, depth + 1)
            + recurse(f, mid, b, right, 0.5 * tol, depth + 1)
    }
    let whole = gl32_panel(f, a, b);
    recurse(f, a, b, whole, tol, 0)
}

/// Chebyshev interpolation coefficients of `f` on `[a, b]`.
///
/// Uses Chebyshev–Gauss nodes; `degree + 1` coefficients are returned, for
/// evaluation with [`chebyshev_eval`].
pub fn chebyshev_fit(f: &mut impl FnMut(f64) -> f64, a: f64, b: f64, degree: usize) -> Vec<f64> {
    let n = degree + 1;
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let values: Vec<f64> = (0..n)
        .map(|i| {
            let t = PI * (i as f64 + 0.5) / n as f64;
            f(mid + half * t.cos())
        })
        .collect();
    let mut coeffs = vec![0.0; n];
    for (j, c) in coeffs.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (i, v) in values.iter().enumerate() {
            acc += v * (PI * j as f64 * (i as f64 + 0.5) / n as f64).cos();
        }
        *c = 2.0 * acc / n as f64;
    }
    coeffs[0] *= 0.5;
    coeffs
}

/// Clenshaw evaluation of a Chebyshev series fitted on `[a, b]`.
pub fn chebyshev_eval(coeffs: &[f64], a: f64, b: f64, x: f64) -> f64 {
    let t = (2.0 * x - a - b) / (b - a);
    let t2 = 2.0 * t;
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for &c in coeffs.iter().skip(1).rev() {
        let tmp = b1;
        b1 = t2 * b1 - b2 + c;
        b2 = tmp;
    }
    t * b1 - b2 + coeffs[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl_integrates_polynomials_exactly() {
        // 32-point rule is exact through degree 63.
        let val = gl32_composite(|x| x.powi(10) - 3.0 * x.powi(3) + 1.0, -1.0, 2.0, 1);
        let exact = (2048.0 + 1.0) / 11.0 - 3.0 * (16.0 - 1.0) / 4.0 + 3.0;
        assert!((val - exact).abs() < 1e-12);
    }

    #[test]
    fn adaptive_handles_kinks() {
        let val = integrate_adaptive(&mut |x: f64| x.abs(), -1.0, 1.0, 1e-12);
        assert!((val - 1.0).abs() < 1e-11);
    }

    #[test]
    fn chebyshev_reproduces_smooth_functions() {
        let mut f = |x: f64| (2.5 * x).sin() * (-x).exp();
        let coeffs = chebyshev_fit(&mut f, 0.0, 1.0, 20);
        for i in 0..=25 {
            let x = i as f64 / 25.0;
            assert!((chebyshev_eval(&coeffs, 0.0, 1.0, x) - f(x)).abs() < 1e-13);
        }
    }

    #[test]
    fn gl_nodes_symmetric() {
        let (nodes, weights) = gauss_legendre(16);
        for i in 0..16 {
            assert!((nodes[i] + nodes[15 - i]).abs() < 1e-15);
            assert!((weights[i] - weights[15 - i]).abs() < 1e-15);
        }
        let total: f64 = weights.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
    }
}
