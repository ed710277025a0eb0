//! The discrete measures `ψ_n` carried by `z = 1` and the zeros of `R_n`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::bijection::{pair_to_verblunsky, SequencePair};
use crate::error::{Error, Result};
use crate::poly::eval_rq;
use crate::zeros::w_zeros;

/// Node tolerance in `x`, tighter than the zero-finder default: near isolated
/// mass points the weights react strongly enough to node errors that `1e-13`
/// moves `Σλ` by up to `1e-7`.
pub const NODE_TOL: f64 = 1e-15;

/// Below this the rational weight formulas carry no correct digits.
pub const TINY_WEIGHT: f64 = 1e-13;

/// Largest tolerated `|Σλ - 1|`.
const SUM_TOL: f64 = 1e-10;

/// Point masses `λ_j` at `node_j = e^{iθ_j}`; `node_0 = 1` (`θ_0 = 0`) and
/// the remaining nodes are the zeros of `R_n` in increasing angle.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteMeasure {
    pub level: usize,
    pub theta: Vec<f64>,
    pub nodes: Vec<Complex64>,
    pub weights: Vec<f64>,
    /// Largest imaginary part discarded from the weight formulas.
    pub imag_residual: f64,
    /// `max |rational formula - Christoffel number|` over the nodes; large
    /// values flag ill-conditioned coefficients.
    pub christoffel_residual: f64,
}

impl DiscreteMeasure {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }

    /// `μ_k = Σ λ_j conj(node_j)^k` for `0 ≤ k ≤ k_max`.
    pub fn moments(&self, k_max: usize) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); k_max + 1];
        for (t, w) in self.theta.iter().zip(&self.weights) {
            for (k, m) in out.iter_mut().enumerate() {
                // e^{-ikθ} directly: powers of the node would accumulate drift.
                *m += Complex64::from_polar(*w, -(k as f64) * t);
            }
        }
        out
    }

    /// `ψ_n(e^{iθ})`: `0` at `θ = 0`, then constant on each
    /// `(θ_k, θ_{k+1}]`, so the value at a node excludes that node's weight;
    /// `1` on `(θ_n, 2π]`.
    pub fn step_eval(&self, theta: f64) -> Result<f64> {
        if !(0.0..=TAU).contains(&theta) {
            return Err(Error::InvalidParameters(format!("theta = {theta} outside [0, 2π]")));
        }
        if theta == 0.0 {
            return Ok(0.0);
        }
        let k = self.theta[1..].partition_point(|&t| t < theta);
        if k == self.level {
            return Ok(1.0);
        }
        Ok(self.weights[..=k].iter().sum::<f64>().min(1.0))
    }
}

/// `ψ_n` from the weight formulas
/// `λ_0 = 1 - Q_n(1)/R_n(1)` and `λ_j = Q_n(z_j) / ((1 - z_j) R_n'(z_j))`.
///
/// A weight within rounding of zero (below [`TINY_WEIGHT`]) is replaced by the
/// Christoffel number `1 / Σ_{k=0}^{n} |φ_k(z_j)|²` (orthonormal `φ_k`; the
/// nodes are the zeros of `z φ_n - τ_n φ_n*`), which is positive by
/// construction and accurate in exactly that regime.
pub fn quadrature(pair: &SequencePair, n: usize) -> Result<DiscreteMeasure> {
    quadrature_with_tol(pair, n, NODE_TOL)
}

pub fn quadrature_with_tol(pair: &SequencePair, n: usize, tol: f64) -> Result<DiscreteMeasure> {
    let zeros = w_zeros(pair, n, tol)?;

    let at_one = eval_rq(pair, n, Complex64::new(1.0, 0.0))?;
    if !(at_one.r.norm() > 1e-14 * at_one.q.norm()) || at_one.r.norm() == 0.0 {
        return Err(Error::NodeAtOne(at_one.r.norm()));
    }
    let first = Complex64::new(1.0, 0.0) - at_one.q / at_one.r;
    let alpha = pair_to_verblunsky(pair)?.into_alpha();
    let alpha = &alpha[..n];

    let mut theta = Vec::with_capacity(n + 1);
    let mut nodes = Vec::with_capacity(n + 1);
    let mut raw = Vec::with_capacity(n + 1);
    theta.push(0.0);
    nodes.push(Complex64::new(1.0, 0.0));
    raw.push(first);
    for &t in &zeros.theta {
        let z = Complex64::from_polar(1.0, t);
        let e = eval_rq(pair, n, z)?;
        raw.push(e.q / ((Complex64::new(1.0, 0.0) - z) * e.dr));
        theta.push(t);
        nodes.push(z);
    }

    let imag_residual = raw.iter().map(|w| w.im.abs()).fold(0.0, f64::max);
    let mut christoffel_residual: f64 = 0.0;
    let weights: Vec<f64> = nodes
        .iter()
        .zip(&raw)
        .map(|(&z, r)| {
            let k = christoffel(alpha, z);
            christoffel_residual = christoffel_residual.max((k - r.re).abs());
            if r.re < TINY_WEIGHT {
                k
            } else {
                r.re
            }
        })
        .collect();
    for (j, &w) in weights.iter().enumerate() {
        if !(w > 0.0) {
            return Err(Error::NegativeWeight { j, value: w });
        }
    }
    let total: f64 = weights.iter().sum();
    if (total - 1.0).abs() > SUM_TOL {
        return Err(Error::InternalInvariant(format!(
            "quadrature weights sum to {total}, off by {:e}",
            total - 1.0
        )));
    }
    Ok(DiscreteMeasure {
        level: n,
        theta,
        nodes,
        weights,
        imag_residual,
        christoffel_residual,
    })
}

/// `1 / Σ_{k=0}^{n} |φ_k(z)|²` for the orthonormal polynomials of `alpha`.
fn christoffel(alpha: &[Complex64], z: Complex64) -> f64 {
    let (mut phi, mut phi_star) = (Complex64::new(1.0, 0.0), Complex64::new(1.0, 0.0));
    let mut kappa2 = 1.0;
    let mut sum = 1.0;
    for a in alpha {
        let next = z * phi - a.conj() * phi_star;
        phi_star -= a * z * phi;
        phi = next;
        kappa2 /= 1.0 - a.norm_sqr();
        sum += kappa2 * phi.norm_sqr();
    }
    1.0 / sum
}
