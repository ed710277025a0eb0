//! Szegő polynomials, the para-orthogonal family `R_n`, the second-kind
//! family `Q_n`, and the real functions `W_n(x) = 2^{-n} e^{-inθ/2} R_n(e^{iθ})`
//! with `x = cos(θ/2)`.
//!
//! `R_n` and `Q_n` share the three-term recurrence
//!
//! ```text
//! P_{n+1}(z) = [(1 + i c_{n+1}) z + (1 - i c_{n+1})] P_n(z) - 4 d_{n+1} z P_{n-1}(z)
//! ```
//!
//! with `R_0 = 1, R_1 = (1 + i c_1) z + (1 - i c_1)` and `Q_0 = 0, Q_1 = 2 d_1`.
//! Coefficient arrays are only built for small degrees; evaluation carries a
//! power-of-two exponent so that large degrees do not overflow.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bijection::{SequencePair, VerblunskySequence};
use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Largest degree for which [`r_poly`] and [`q_poly`] build coefficients.
pub const DEFAULT_MAX_COEFF_DEGREE: usize = 64;

const RESCALE_HIGH: f64 = 1.157_920_892_373_162e77; // 2^256
const RESCALE_LOW: f64 = 8.636_168_555_094_445e-78; // 2^-256

/// Monic Szegő polynomial, its reversal and the orthonormalizing factor at
/// one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SzegoState {
    pub n: usize,
    pub phi: Complex64,
    pub phi_star: Complex64,
    pub kappa: f64,
}

impl SzegoState {
    /// Orthonormal `κ_n φ_n(z)`.
    pub fn orthonormal(&self) -> Complex64 {
        self.phi * self.kappa
    }

    pub fn orthonormal_star(&self) -> Complex64 {
        self.phi_star * self.kappa
    }
}

/// Run the Szegő recurrences `φ_n = z φ_{n-1} - conj(α_{n-1}) φ*_{n-1}`,
/// `φ*_n = φ*_{n-1} - α_{n-1} z φ_{n-1}` up to degree `n`.
pub fn szego_eval(alpha: &[Complex64], z: Complex64, n: usize) -> Result<SzegoState> {
    if n > alpha.len() {
        return Err(Error::TooShort(format!(
            "degree {n} needs {n} coefficients, got {}",
            alpha.len()
        )));
    }
    let (mut phi, mut phi_star, mut kappa) = (ONE, ONE, 1.0);
    for (j, a) in alpha[..n].iter().enumerate() {
        let rho2 = 1.0 - a.norm_sqr();
        if !(rho2 > 0.0) {
            return Err(Error::OutsideDisk(j, a.norm()));
        }
        let next = z * phi - a.conj() * phi_star;
        phi_star -= a * z * phi;
        phi = next;
        kappa /= rho2.sqrt();
    }
    Ok(SzegoState {
        n,
        phi,
        phi_star,
        kappa,
    })
}

/// Which recurrence produced a coefficient array.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PolyFamily {
    R,
    Q,
}

/// Coefficients in ascending degree order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyCoeffs {
    pub coeffs: Vec<Complex64>,
    pub family: PolyFamily,
}

impl PolyCoeffs {
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Complex64 {
        self.coeffs.last().copied().unwrap_or(ZERO)
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, c| acc * z + c)
    }

    /// `max_k |a_k - conj(a_{n-k})|`, zero for self-inversive polynomials.
    pub fn self_inversive_residual(&self) -> f64 {
        let n = self.degree();
        (0..=n)
            .map(|k| (self.coeffs[k] - self.coeffs[n - k].conj()).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_imag(&self) -> f64 {
        self.coeffs.iter().map(|c| c.im.abs()).fold(0.0, f64::max)
    }

    /// Synthetic division by `a z + b`; returns quotient and remainder.
    pub fn divide_linear(&self, a: Complex64, b: Complex64) -> (PolyCoeffs, Complex64) {
        let root = -b / a;
        let n = self.degree();
        if n == 0 {
            return (
                PolyCoeffs {
                    coeffs: vec![],
                    family: self.family,
                },
                self.coeffs.first().copied().unwrap_or(ZERO),
            );
        }
        // Horner on the monic-normalized root, then divide by a.
        let mut quotient = vec![ZERO; n];
        let mut carry = ZERO;
        for k in (0..=n).rev() {
            let v = self.coeffs[k] + carry * root;
            if k == 0 {
                return (
                    PolyCoeffs {
                        coeffs: quotient.into_iter().map(|q| q / a).collect(),
                        family: self.family,
                    },
                    v,
                );
            }
            quotient[k - 1] = v;
            carry = v;
        }
        unreachable!()
    }
}

fn linear_factor(c: f64) -> (Complex64, Complex64) {
    (ONE + I * c, ONE - I * c)
}

fn build_coeffs(pair: &SequencePair, n: usize, family: PolyFamily, limit: usize) -> Result<PolyCoeffs> {
    pair.require(n)?;
    if n > limit {
        return Err(Error::InvalidParameters(format!(
            "coefficient arrays are limited to degree {limit}; use evaluation for degree {n}"
        )));
    }
    let (c, d) = (pair.c(), pair.d());
    // P_{k-1}, P_k as coefficient vectors.
    let (mut prev, mut cur, start) = match family {
        PolyFamily::R => (vec![], vec![ONE], 0),
        PolyFamily::Q => {
            if n == 0 {
                return Ok(PolyCoeffs {
                    coeffs: vec![ZERO],
                    family,
                });
            }
            (vec![ZERO], vec![Complex64::new(2.0 * d[0], 0.0)], 1)
        }
    };
    for k in start..n {
        let (lead, constant) = linear_factor(c[k]);
        let mut next = vec![ZERO; cur.len() + 1];
        for (j, a) in cur.iter().enumerate() {
            next[j] += constant * a;
            next[j + 1] += lead * a;
        }
        for (j, a) in prev.iter().enumerate() {
            next[j + 1] -= 4.0 * d[k] * a;
        }
        prev = std::mem::replace(&mut cur, next);
    }
    Ok(PolyCoeffs { coeffs: cur, family })
}

/// Coefficients of `R_n`, degree exactly `n`.
pub fn r_poly(pair: &SequencePair, n: usize) -> Result<PolyCoeffs> {
    build_coeffs(pair, n, PolyFamily::R, DEFAULT_MAX_COEFF_DEGREE)
}

/// As [`r_poly`] with a caller-chosen degree limit.
pub fn r_poly_limited(pair: &SequencePair, n: usize, max_degree: usize) -> Result<PolyCoeffs> {
    build_coeffs(pair, n, PolyFamily::R, max_degree)
}

/// Coefficients of `Q_n`, degree `n - 1` for `n >= 1`.
pub fn q_poly(pair: &SequencePair, n: usize) -> Result<PolyCoeffs> {
    build_coeffs(pair, n, PolyFamily::Q, DEFAULT_MAX_COEFF_DEGREE)
}

pub fn q_poly_limited(pair: &SequencePair, n: usize, max_degree: usize) -> Result<PolyCoeffs> {
    build_coeffs(pair, n, PolyFamily::Q, max_degree)
}

/// A complex value stored as `mantissa · 2^exp2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledValue {
    pub mantissa: Complex64,
    pub exp2: i32,
}

impl ScaledValue {
    /// The plain value; may overflow to infinity for large exponents.
    pub fn value(&self) -> Complex64 {
        self.mantissa * pow2(self.exp2)
    }
}

fn pow2(k: i32) -> f64 {
    // powi by repeated squaring is exact for powers of two in range.
    if k.abs() <= 1000 {
        2f64.powi(k)
    } else if k > 0 {
        f64::INFINITY
    } else {
        0.0
    }
}

/// `R_n`, `R_n'` and `Q_n` at one point, sharing the exponent `exp2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RqEvaluation {
    pub r: Complex64,
    pub dr: Complex64,
    pub q: Complex64,
    pub exp2: i32,
}

impl RqEvaluation {
    pub fn r_scaled(&self) -> ScaledValue {
        ScaledValue {
            mantissa: self.r,
            exp2: self.exp2,
        }
    }
}

/// Evaluate `R_n`, its derivative and `Q_n` by running the recurrence and
/// its derivative side by side, with common power-of-two rescaling.
pub fn eval_rq(pair: &SequencePair, n: usize, z: Complex64) -> Result<RqEvaluation> {
    pair.require(n)?;
    let (c, d) = (pair.c(), pair.d());
    let (mut r_prev, mut r) = (ZERO, ONE);
    let (mut dr_prev, mut dr) = (ZERO, ZERO);
    // Q_1 = 2 d_1 is seeded directly rather than through the recurrence.
    let (mut q_prev, mut q) = (ZERO, ZERO);
    let mut exp2 = 0i32;
    for k in 0..n {
        let (lead, constant) = linear_factor(c[k]);
        let l = lead * z + constant;
        let four_d = 4.0 * d[k];
        let r_next = l * r - four_d * z * r_prev;
        let dr_next = lead * r + l * dr - four_d * r_prev - four_d * z * dr_prev;
        let q_next = if k == 0 {
            Complex64::new(2.0 * d[0], 0.0)
        } else {
            l * q - four_d * z * q_prev
        };
        r_prev = r;
        r = r_next;
        dr_prev = dr;
        dr = dr_next;
        q_prev = q;
        q = q_next;

        let big = [r, r_prev, dr, dr_prev, q, q_prev]
            .iter()
            .map(|v| v.norm())
            .fold(0.0, f64::max);
        if big > RESCALE_HIGH || (big < RESCALE_LOW && big > 0.0) {
            let shift = big.log2().floor() as i32;
            let s = pow2(-shift);
            for v in [&mut r, &mut r_prev, &mut dr, &mut dr_prev, &mut q, &mut q_prev] {
                *v *= s;
            }
            exp2 += shift;
        }
    }
    Ok(RqEvaluation { r, dr, q, exp2 })
}

/// `R_n(z)` in scaled form.
pub fn eval_r(pair: &SequencePair, n: usize, z: Complex64) -> Result<ScaledValue> {
    eval_rq(pair, n, z).map(|e| e.r_scaled())
}

/// `√(1 - x²)` computed as `√((1 - x)(1 + x))`.
pub fn sqrt_one_minus_sq(x: f64) -> f64 {
    ((1.0 - x) * (1.0 + x)).max(0.0).sqrt()
}

/// `W_n` at `x` given `s = √(1 - x²)`, as `(mantissa, exp2)`.
pub(crate) fn w_scaled_xs(c: &[f64], d: &[f64], n: usize, x: f64, s: f64) -> (f64, i32) {
    let (mut prev, mut cur) = (0.0, 1.0);
    let mut exp2 = 0i32;
    for k in 0..n {
        let next = (x - c[k] * s) * cur - d[k] * prev;
        prev = cur;
        cur = next;
        let big = cur.abs().max(prev.abs());
        if big > RESCALE_HIGH || (big < RESCALE_LOW && big > 0.0) {
            let shift = big.log2().floor() as i32;
            let f = pow2(-shift);
            cur *= f;
            prev *= f;
            exp2 += shift;
        }
    }
    (cur, exp2)
}

/// `W_n(x)` from `W_{n+1} = (x - c_{n+1} √(1-x²)) W_n - d_{n+1} W_{n-1}`.
pub fn w_eval(pair: &SequencePair, n: usize, x: f64) -> Result<f64> {
    let (m, e) = w_eval_scaled(pair, n, x)?;
    Ok(m * pow2(e))
}

/// `W_n(x)` as `(mantissa, exp2)`.
pub fn w_eval_scaled(pair: &SequencePair, n: usize, x: f64) -> Result<(f64, i32)> {
    pair.require(n)?;
    if !(-1.0..=1.0).contains(&x) {
        return Err(Error::InvalidParameters(format!("x = {x} is outside [-1, 1]")));
    }
    Ok(w_scaled_xs(pair.c(), pair.d(), n, x, sqrt_one_minus_sq(x)))
}

/// `|2^{-n} e^{-inθ/2} R_n(e^{iθ}) - W_n(cos(θ/2))|`.
pub fn w_from_r_check(pair: &SequencePair, n: usize, theta: f64) -> Result<f64> {
    let r = eval_r(pair, n, Complex64::from_polar(1.0, theta))?;
    let half = 0.5 * theta;
    let lhs = r.mantissa * Complex64::from_polar(1.0, -(n as f64) * half) * pow2(r.exp2 - n as i32);
    let (w, e) = w_scaled_xs(pair.c(), pair.d(), n, half.cos(), half.sin());
    Ok((lhs - w * pow2(e)).norm())
}

/// `R_n(z)` rebuilt from the Szegő polynomials:
///
/// ```text
/// R_n(z) = ∏(1 - τ_{j-1} α_{j-1}) / ∏(1 - Re(τ_{j-1} α_{j-1})) · (z φ_n(z) - τ_n φ*_n(z)) / (z - 1)
/// ```
pub fn r_via_szego(v: &VerblunskySequence, n: usize, z: Complex64) -> Result<Complex64> {
    let st = szego_eval(v.alpha(), z, n)?;
    let (tau, alpha) = (v.tau(), v.alpha());
    let mut factor = ONE;
    for j in 1..=n {
        let u = tau[j - 1] * alpha[j - 1];
        factor *= (ONE - u) / (1.0 - u.re);
    }
    Ok(factor * (z * st.phi - tau[n] * st.phi_star) / (z - ONE))
}
