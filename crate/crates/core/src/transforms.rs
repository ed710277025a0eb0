//! Conjugation, the alternating-to-paired unfolding of `c_n`, and rotation of
//! measures.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bijection::{check_disk, pair_to_verblunsky, renormalize, SequencePair, RENORMALIZE_EVERY};
use crate::error::{Error, Result};

const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Relative tolerance on `c_{2n} = -c_{2n-1}`.
const ALTERNATION_TOL: f64 = 1e-14;

/// `(c, d) -> (-c, d)`: the measure reflected through the real axis.
pub fn conjugate_pair(pair: &SequencePair) -> SequencePair {
    let c: Vec<f64> = pair.c().iter().map(|x| -x).collect();
    SequencePair::new(c, pair.chain().clone()).expect("same chain, same length")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnfoldingData {
    /// `β_n = -(1 + i c_{2n}) / (1 - i c_{2n})`, `n = 1, …, N/2`.
    pub beta: Vec<Complex64>,
    pub alpha_tilde: Vec<Complex64>,
    pub pair_tilde: SequencePair,
    /// `max |α(pair_tilde) - alpha_tilde|`.
    pub consistency: f64,
}

/// `β = -(1 + i c) / (1 - i c)`.
pub fn beta_of(c: f64) -> Complex64 {
    -(ONE + I * c) / (ONE - I * c)
}

/// Map a pair with `c_{2n} = -c_{2n-1}` to the pair with
/// `c̃_{2n-1} = c̃_{2n} = c_{2n}`, `m̃_{2n-1} = 1 - m_{2n-1}`, `m̃_{2n} = m_{2n}`,
/// together with its Verblunsky coefficients
/// `α̃_{2n+1} = (∏_{j ≤ n+1} β_j²) α_{2n+1}`, `α̃_{2n} = (∏_{j ≤ n} β_j²) β_{n+1} α_{2n}`.
///
/// The whole stored prefix must satisfy the hypothesis and have even length.
pub fn unfold_alternating(pair: &SequencePair) -> Result<UnfoldingData> {
    let n = pair.len();
    if !n.is_multiple_of(2) {
        return Err(Error::HypothesisViolated(format!(
            "unfolding pairs indices (2n-1, 2n); prefix length {n} is odd"
        )));
    }
    let c = pair.c();
    for k in 0..n / 2 {
        let (odd, even) = (c[2 * k], c[2 * k + 1]);
        if (odd + even).abs() > ALTERNATION_TOL * odd.abs().max(even.abs()).max(1.0) {
            return Err(Error::HypothesisViolated(format!(
                "c_{} = {even} is not -c_{} = {}",
                2 * k + 2,
                2 * k + 1,
                -odd
            )));
        }
    }

    let beta: Vec<Complex64> = (0..n / 2).map(|k| beta_of(c[2 * k + 1])).collect();
    let alpha = pair_to_verblunsky(pair)?.into_alpha();
    let mut alpha_tilde = vec![Complex64::new(0.0, 0.0); n];
    let mut prod = ONE; // ∏_{j ≤ k} β_j²
    for k in 0..n / 2 {
        alpha_tilde[2 * k] = prod * beta[k] * alpha[2 * k];
        prod *= beta[k] * beta[k];
        if (k + 1) % RENORMALIZE_EVERY == 0 {
            prod = renormalize(prod);
        }
        alpha_tilde[2 * k + 1] = prod * alpha[2 * k + 1];
    }

    let mut c_tilde = vec![0.0; n];
    let m = pair.m();
    let mut m_tilde = vec![0.0; n + 1];
    for k in 0..n / 2 {
        c_tilde[2 * k] = c[2 * k + 1];
        c_tilde[2 * k + 1] = c[2 * k + 1];
        m_tilde[2 * k + 1] = 1.0 - m[2 * k + 1];
        m_tilde[2 * k + 2] = m[2 * k + 2];
    }
    let pair_tilde = SequencePair::from_c_m(c_tilde, m_tilde, None)?;
    let check = pair_to_verblunsky(&pair_tilde)?;
    let consistency = check
        .alpha()
        .iter()
        .zip(&alpha_tilde)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    Ok(UnfoldingData {
        beta,
        alpha_tilde,
        pair_tilde,
        consistency,
    })
}

/// `α̃_n = β^{n+1} α_n`, the coefficients of `μ̃(z) = μ(βz)`.
pub fn rotate_alpha(alpha: &[Complex64], beta: Complex64) -> Result<Vec<Complex64>> {
    check_disk(alpha)?;
    if (beta.norm() - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidParameters(format!("|beta| = {} is not 1", beta.norm())));
    }
    let beta = renormalize(beta);
    let mut power = ONE;
    Ok(alpha
        .iter()
        .enumerate()
        .map(|(k, a)| {
            power *= beta;
            if (k + 1) % RENORMALIZE_EVERY == 0 {
                power = renormalize(power);
            }
            power * a
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bijection::verblunsky_to_pair;
    use approx::assert_abs_diff_eq;

    fn example_pair(c: f64, b1: f64, b2: f64, periods: usize) -> SequencePair {
        let n = 2 * periods;
        let cs: Vec<f64> = (1..=n).map(|k| if k % 2 == 0 { c } else { -c }).collect();
        let mut m = vec![0.0];
        for k in 1..=n {
            m.push(if k % 2 == 1 { 0.5 * (1.0 - b1) } else { 0.5 * (1.0 - b2) });
        }
        SequencePair::from_c_m(cs, m, None).unwrap()
    }

    #[test]
    fn conjugation_is_an_involution() {
        let pair = example_pair(0.7, 0.2, -0.4, 3);
        let twice = conjugate_pair(&conjugate_pair(&pair));
        assert_eq!(twice, pair);
        let zero = example_pair(0.0, 0.2, -0.4, 3);
        assert_eq!(conjugate_pair(&zero).c(), zero.c().iter().map(|x| -x).collect::<Vec<_>>());
    }

    #[test]
    fn unfolding_example_family() {
        let pair = example_pair(1.0, 0.5, 0.0, 4);
        let u = unfold_alternating(&pair).unwrap();
        assert!(u.consistency < 1e-12);
        for ck in u.pair_tilde.c() {
            assert_abs_diff_eq!(*ck, 1.0);
        }
        assert_abs_diff_eq!(u.pair_tilde.m()[1], 0.75);
        assert_abs_diff_eq!(u.pair_tilde.b()[0], -0.5);
    }

    #[test]
    fn unfolding_zero_c_is_rotation_by_minus_one() {
        let pair = example_pair(0.0, 0.3, -0.2, 3);
        let u = unfold_alternating(&pair).unwrap();
        let alpha = pair_to_verblunsky(&pair).unwrap().into_alpha();
        for (k, (a, t)) in alpha.iter().zip(&u.alpha_tilde).enumerate() {
            let expect = if k % 2 == 0 { -a } else { *a };
            assert!((t - expect).norm() < 1e-15);
        }
    }

    #[test]
    fn unfolding_rejects_bad_input() {
        let pair = SequencePair::from_c_m(vec![1.0, 1.0], vec![0.0, 0.5, 0.5], None).unwrap();
        assert!(matches!(unfold_alternating(&pair), Err(Error::HypothesisViolated(_))));
        let pair = example_pair(1.0, 0.5, 0.0, 2).truncate(3).unwrap();
        assert!(matches!(unfold_alternating(&pair), Err(Error::HypothesisViolated(_))));
    }

    #[test]
    fn rotation_examples() {
        let alpha = vec![Complex64::new(0.1, 0.2), Complex64::new(-0.3, 0.0), Complex64::new(0.0, 0.4)];
        assert_eq!(rotate_alpha(&alpha, ONE).unwrap(), alpha);
        let r = rotate_alpha(&alpha, -ONE).unwrap();
        assert_eq!(r, vec![-alpha[0], alpha[1], -alpha[2]]);
        assert!(rotate_alpha(&alpha, Complex64::new(0.5, 0.0)).is_err());
    }

    #[test]
    fn rotation_makes_c_constant() {
        let c = 0.8;
        let pair = example_pair(c, 0.3, 0.5, 10);
        let alpha = pair_to_verblunsky(&pair).unwrap().into_alpha();
        let rotated = rotate_alpha(&alpha, beta_of(c)).unwrap();
        let back = verblunsky_to_pair(&rotated).unwrap();
        for ck in back.c() {
            assert_abs_diff_eq!(*ck, c, epsilon = 1e-12);
        }
    }
}
