//! One-dimensional node/weight sets combined into tensor-product grids.

use serde::{Deserialize, Serialize};

/// Largest Gauss–Legendre panel used by the composite rule.
pub const PANEL_ORDER: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    GaussLegendre,
    Trapezoid,
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`, ascending.
pub fn gauss_legendre(order: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(order >= 1);
    let mut nodes = vec![0.0; order];
    let mut weights = vec![0.0; order];
    let n = order as f64;
    for i in 0..order.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(order, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
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
    if order % 2 == 1 {
        nodes[order / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Nodes and weights along one frequency axis.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl AxisRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Uniform grid of `n` nodes including both ends, trapezoid weights.
    pub fn trapezoid(n: usize, lo: f64, hi: f64) -> Self {
        assert!(n >= 2 && hi > lo);
        let h = (hi - lo) / (n - 1) as f64;
        let nodes = (0..n).map(|i| lo + h * i as f64).collect();
        let weights = (0..n)
            .map(|i| if i == 0 || i == n - 1 { 0.5 * h } else { h })
            .collect();
        AxisRule { nodes, weights }
    }

    /// Composite Gauss–Legendre with roughly `n` nodes; panel edges always
    /// include the interior `breakpoints`.
    pub fn composite_gauss_legendre(n: usize, lo: f64, hi: f64, breakpoints: &[f64]) -> Self {
        assert!(n >= 1 && hi > lo);
        let order = n.min(PANEL_ORDER);
        let mut edges: Vec<f64> = vec![lo, hi];
        edges.extend(breakpoints.iter().copied().filter(|&b| b > lo && b < hi));
        edges.sort_by(|a, b| a.partial_cmp(b).unwrap());
        edges.dedup();
        let span = hi - lo;
        let segments = edges.len() - 1;
        let panels = n.div_ceil(order).max(segments);
        let (gx, gw) = gauss_legendre(order);
        let mut nodes = Vec::with_capacity(panels * order);
        let mut weights = Vec::with_capacity(panels * order);
        for s in edges.windows(2) {
            let len = s[1] - s[0];
            let count = ((panels as f64 * len / span).round() as usize).max(1);
            let h = len / count as f64;
            for p in 0..count {
                let a = s[0] + h * p as f64;
                let mid = a + 0.5 * h;
                for (x, w) in gx.iter().zip(&gw) {
                    nodes.push(mid + 0.5 * h * x);
                    weights.push(0.5 * h * w);
                }
            }
        }
        AxisRule { nodes, weights }
    }

    pub fn build(rule: Rule, n: usize, lo: f64, hi: f64, breakpoints: &[f64]) -> Self {
        match rule {
            Rule::GaussLegendre => Self::composite_gauss_legendre(n, lo, hi, breakpoints),
            Rule::Trapezoid => Self::trapezoid(n, lo, hi),
        }
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}
