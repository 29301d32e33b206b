//! Gauss–Legendre rules and an adaptive bisection integrator.

use crate::error::{Error, Result};

/// Nodes and weights of the `order`-point Gauss–Legendre rule on `[-1, 1]`.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; order];
    let mut weights = vec![0.0; order];
    let n = order as f64;
    for i in 0..order.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(order, x);
            dp = d;
            let step = p / d;
            x -= step;
            if step.abs() <= 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(order, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[order - 1 - i] = x;
        weights[i] = w;
        weights[order - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(order: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if order == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=order {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = order as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Adaptive integrator: a panel is accepted when its rule value agrees with
/// the sum over its two halves within `abs_tol + rel_tol·|value|`.
#[derive(Debug, Clone)]
pub struct AdaptiveGaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_depth: usize,
}

impl Default for AdaptiveGaussLegendre {
    fn default() -> Self {
        let (nodes, weights) = gauss_legendre(10);
        Self {
            nodes,
            weights,
            abs_tol: 1e-15,
            rel_tol: 1e-13,
            max_depth: 20,
        }
    }
}

impl AdaptiveGaussLegendre {
    fn panel<F: Fn(f64) -> f64>(&self, f: &F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        half * self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum::<f64>()
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> Result<f64> {
        let whole = self.panel(&f, a, b);
        self.refine(&f, a, b, whole, 0)
    }

    fn refine<F: Fn(f64) -> f64>(&self, f: &F, a: f64, b: f64, whole: f64, depth: usize) -> Result<f64> {
        let m = 0.5 * (a + b);
        let left = self.panel(f, a, m);
        let right = self.panel(f, m, b);
        let split = left + right;
        if (split - whole).abs() <= self.abs_tol + self.rel_tol * split.abs() {
            return Ok(split);
        }
        if depth + 1 > self.max_depth {
            return Err(Error::QuadratureFailure { depth: depth + 1 });
        }
        Ok(self.refine(f, a, m, left, depth + 1)? + self.refine(f, m, b, right, depth + 1)?)
    }
}
