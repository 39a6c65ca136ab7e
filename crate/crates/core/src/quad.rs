//! Gauss-Legendre quadrature and Chebyshev interpolation.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Paired quadrature nodes and weights.
pub type Rule = (Vec<f64>, Vec<f64>);

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
///
/// Computed by Newton iteration on the Legendre recurrence and cached per n.
pub fn gauss_legendre(n: usize) -> Arc<Rule> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<Rule>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().unwrap();
    guard.entry(n).or_insert_with(|| Arc::new(compute_gl(n))).clone()
}

fn compute_gl(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi-style starting guess for the i-th root.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre recurrence: p0 = 1, p1 = x.
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
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Integrate f over [a, b] with the n-point Gauss-Legendre rule.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let rule = gauss_legendre(n);
    let (nodes, weights) = (&rule.0, &rule.1);
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut sum = 0.0;
    for (x, w) in nodes.iter().zip(weights) {
        sum += w * f(mid + half * x);
    }
    half * sum
}

/// Integrate f over [a, b], doubling the node count from `n0` until the
/// relative change drops below `rel_tol`.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n0: usize, rel_tol: f64) -> f64 {
    let mut n = n0;
    let mut prev = integrate(&f, a, b, n);
    for _ in 0..6 {
        n *= 2;
        let next = integrate(&f, a, b, n);
        let scale = next.abs().max(1e-300);
        if ((next - prev) / scale).abs() < rel_tol {
            return next;
        }
        prev = next;
    }
    prev
}

/// Barycentric interpolant on Chebyshev-Lobatto points of [a, b].
#[derive(Debug, Clone)]
pub struct ChebyshevInterpolant {
    a: f64,
    b: f64,
    nodes: Vec<f64>,
    values: Vec<f64>,
}

impl ChebyshevInterpolant {
    /// Sample f at degree+1 Chebyshev-Lobatto points of [a, b].
    pub fn from_fn<F: Fn(f64) -> f64>(a: f64, b: f64, degree: usize, f: F) -> Self {
        assert!(degree >= 1 && b > a);
        let n = degree;
        let mut nodes = Vec::with_capacity(n + 1);
        let mut values = Vec::with_capacity(n + 1);
        for k in 0..=n {
            let x = (std::f64::consts::PI * k as f64 / n as f64).cos();
            let t = 0.5 * (a + b) + 0.5 * (b - a) * x;
            nodes.push(t);
            values.push(f(t));
        }
        Self { a, b, nodes, values }
    }

    pub fn eval(&self, t: f64) -> f64 {
        debug_assert!(
            t >= self.a - 1e-12 && t <= self.b + 1e-12,
            "evaluation outside interpolation interval"
        );
        let n = self.nodes.len() - 1;
        let mut num = 0.0;
        let mut den = 0.0;
        for (k, (&x, &v)) in self.nodes.iter().zip(&self.values).enumerate() {
            let d = t - x;
            if d == 0.0 {
                return v;
            }
            // Lobatto barycentric weights: (-1)^k, halved at the endpoints.
            let mut w = if k % 2 == 0 { 1.0 } else { -1.0 };
            if k == 0 || k == n {
                w *= 0.5;
            }
            let q = w / d;
            num += q * v;
            den += q;
        }
        num / den
    }
}
