//! Periodicity of the Verblunsky coefficients read off the `(c, m)` pair, and
//! the parallel-lines picture for even periods.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

use crate::bijection::{pair_to_verblunsky, SequencePair};
use crate::error::{Error, Result};

pub const PERIODICITY_TOL: f64 = 1e-9;
pub const PARALLEL_TOL: f64 = 1e-9;

/// `|u|` below which the argument condition is skipped (the argument of a
/// vanishing number carries no information).
const TINY_MODULUS: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicityReport {
    pub periodic: bool,
    pub p: usize,
    /// Number of indices `n` tested (`0 ≤ n < horizon`).
    pub horizon: usize,
    pub argument_residual: f64,
    pub modulus_residual: f64,
    /// `max |α_{n+p} - α_n|` over the same indices.
    pub alpha_residual: f64,
}

fn wrap(x: f64) -> f64 {
    let r = (x + PI).rem_euclid(TAU) - PI;
    r.abs()
}

/// Test the argument and modulus conditions for `α_{n+p} = α_n` directly on
/// `u_n = (b_n - i c_n) / (1 - i c_n)`, for every `n` the prefix supports.
pub fn is_periodic_pair(pair: &SequencePair, p: usize) -> Result<PeriodicityReport> {
    if p == 0 {
        return Err(Error::InvalidParameters("period must be at least 1".into()));
    }
    let n_total = pair.len();
    let horizon = n_total.saturating_sub(p);
    let c = pair.c();
    let b = pair.b();
    let u: Vec<Complex64> = (0..n_total)
        .map(|k| Complex64::new(b[k], -c[k]) / Complex64::new(1.0, -c[k]))
        .collect();

    let mut argument_residual: f64 = 0.0;
    let mut modulus_residual: f64 = 0.0;
    for n in 0..horizon {
        // 1-based u_{n+1} and u_{n+p+1} are u[n] and u[n + p].
        let (first, last) = (u[n], u[n + p]);
        modulus_residual = modulus_residual.max((first.norm_sqr() - last.norm_sqr()).abs());
        if first.norm() > TINY_MODULUS && last.norm() > TINY_MODULUS {
            let turn: f64 = c[n..n + p].iter().map(|cj| 2.0 * cj.atan()).sum();
            argument_residual = argument_residual.max(wrap(turn - first.arg() + last.arg()));
        }
    }

    let alpha = pair_to_verblunsky(pair)?.into_alpha();
    let alpha_residual = (0..horizon)
        .map(|n| (alpha[n + p] - alpha[n]).norm())
        .fold(0.0, f64::max);

    Ok(PeriodicityReport {
        periodic: horizon > 0 && argument_residual < PERIODICITY_TOL && modulus_residual < PERIODICITY_TOL,
        p,
        horizon,
        argument_residual,
        modulus_residual,
        alpha_residual,
    })
}

/// True when, for each `k < p/2`, the line through `α_{2k}` and `1` is
/// parallel to the line through `α_{2k+1}` and `-1` (relative cross product
/// below [`PARALLEL_TOL`]).
///
/// `alpha` must contain at least one full period, and any further entries
/// must repeat it.
pub fn parallel_lines_check(alpha: &[Complex64], p: usize) -> Result<bool> {
    if p == 0 || !p.is_multiple_of(2) {
        return Err(Error::InvalidParameters(format!("period {p} must be even and positive")));
    }
    if alpha.len() < p {
        return Err(Error::TooShort(format!("need {p} coefficients, got {}", alpha.len())));
    }
    for n in p..alpha.len() {
        if (alpha[n] - alpha[n - p]).norm() > PERIODICITY_TOL {
            return Err(Error::HypothesisViolated(format!(
                "coefficients are not {p}-periodic at index {n}"
            )));
        }
    }
    Ok((0..p / 2).all(|k| {
        let u = alpha[2 * k] - 1.0;
        let v = alpha[2 * k + 1] + 1.0;
        let cross = u.re * v.im - u.im * v.re;
        cross.abs() < PARALLEL_TOL * u.norm() * v.norm()
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parallel_examples() {
        let alpha = [Complex64::new(0.75, 0.25), Complex64::new(-0.5, -0.5)];
        assert!(parallel_lines_check(&alpha, 2).unwrap());
        let alpha = [Complex64::new(0.5, 0.0), Complex64::new(0.0, 0.5)];
        assert!(!parallel_lines_check(&alpha, 2).unwrap());
        assert!(parallel_lines_check(&alpha, 3).is_err());
    }

    #[test]
    fn alternating_pair_is_periodic() {
        let c = vec![-1.0, 1.0, -1.0, 1.0, -1.0, 1.0, -1.0, 1.0];
        let m = vec![0.0, 0.25, 0.5, 0.25, 0.5, 0.25, 0.5, 0.25, 0.5];
        let pair = SequencePair::from_c_m(c, m, None).unwrap();
        let r = is_periodic_pair(&pair, 2).unwrap();
        assert!(r.periodic);
        assert!(r.argument_residual < 1e-12 && r.modulus_residual < 1e-12);
        assert!(r.alpha_residual < 1e-12);
    }

    #[test]
    fn too_short_is_not_periodic() {
        let pair = SequencePair::from_c_m(vec![0.0, 0.0], vec![0.0, 0.5, 0.5], None).unwrap();
        let r = is_periodic_pair(&pair, 2).unwrap();
        assert!(!r.periodic);
        assert_eq!(r.horizon, 0);
    }
}
