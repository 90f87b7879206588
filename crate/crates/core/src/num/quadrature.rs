//! Fixed-order Gauss–Legendre rules on [-1, 1].
//!
//! Nodes are the roots of the Legendre polynomial `P_q`, found by Newton
//! iteration from the Tricomi initial guess, with weights
//! `2 / ((1 − t²) P_q'(t)²)`. An order-q rule integrates polynomials of
//! degree ≤ 2q − 1 exactly.

use serde::Serialize;

use crate::{Error, Result};

pub const MAX_QUAD_ORDER: usize = 64;
/// Exact through degree 31, which covers every Kantorovich moment used here.
pub const DEFAULT_QUAD_ORDER: usize = 16;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
    pub order: usize,
}

/// Returns `(P_q(t), P_q'(t))` via the three-term recurrence.
fn legendre_with_derivative(q: usize, t: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, t);
    for j in 2..=q {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * t * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    let dp = q as f64 * (t * p1 - p0) / (t * t - 1.0);
    (p1, dp)
}

pub fn gauss_legendre(order: usize) -> Result<QuadratureRule> {
    if !(1..=MAX_QUAD_ORDER).contains(&order) {
        return Err(Error::QuadratureOrder(order));
    }
    let q = order;
    let mut nodes = vec![0.0; q];
    let mut weights = vec![0.0; q];
    let half = q.div_ceil(2);
    for i in 0..half {
        // i-th largest root
        let theta = std::f64::consts::PI * (i as f64 + 0.75) / (q as f64 + 0.5);
        let mut t = theta.cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(q, t);
            let step = p / dp;
            t -= step;
            if step.abs() <= 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(q, t);
        let w = 2.0 / ((1.0 - t * t) * dp * dp);
        // ascending order, mirrored pairs
        nodes[q - 1 - i] = t;
        nodes[i] = -t;
        weights[q - 1 - i] = w;
        weights[i] = w;
    }
    if q % 2 == 1 {
        let mid = q / 2;
        nodes[mid] = 0.0;
        let (_, dp) = legendre_with_derivative(q, 0.0);
        weights[mid] = 2.0 / (dp * dp);
    }
    Ok(QuadratureRule { nodes, weights, order })
}

impl QuadratureRule {
    pub fn default_rule() -> Self {
        gauss_legendre(DEFAULT_QUAD_ORDER).expect("default order is in range")
    }

    /// `∫_a^b f(t) dt` with the rule mapped affinely onto [a, b].
    pub fn integrate<F: Fn(f64) -> f64 + ?Sized>(&self, a: f64, b: f64, f: &F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        let mut acc = 0.0;
        for (t, w) in self.nodes.iter().zip(&self.weights) {
            acc += w * f(mid + half * t);
        }
        half * acc
    }

    /// Mapped nodes and half-width-scaled weights on [a, b].
    pub fn mapped(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        self.nodes.iter().zip(&self.weights).map(move |(t, w)| (mid + half * t, half * w))
    }
}

impl Default for QuadratureRule {
    fn default() -> Self {
        Self::default_rule()
    }
}
