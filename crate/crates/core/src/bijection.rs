//! The correspondence between Verblunsky coefficients and pairs `(c_n, d_n)`
//! with `d_n` a positive chain sequence.
//!
//! With `τ_0 = 1`, the forward map reads
//!
//! ```text
//! α_{n-1} = conj(τ_{n-1}) (1 - 2 m_n - i c_n) / (1 - i c_n)
//! τ_n     = τ_{n-1} (1 - i c_n) / (1 + i c_n)
//! ```
//!
//! where `m_n` are the minimal parameters of `d_n`. The inverse recovers
//! `c_n` and `m_n` from `u = τ_{n-1} α_{n-1}`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::chain::ChainSequence;
use crate::error::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Unimodular products are renormalized after this many factors.
pub(crate) const RENORMALIZE_EVERY: usize = 64;

/// Smallest admissible `1 - Re(τ α)` in [`verblunsky_to_pair`].
pub const DEGENERACY_EPS: f64 = 1e-300;

/// Real pair `(c_n)`, `(d_n)` with `d_n` a positive chain sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SequencePair {
    c: Vec<f64>,
    chain: ChainSequence,
}

impl SequencePair {
    pub fn new(c: Vec<f64>, chain: ChainSequence) -> Result<Self> {
        if c.len() != chain.len() {
            return Err(Error::InvalidParameters(format!(
                "c has {} entries but d has {}",
                c.len(),
                chain.len()
            )));
        }
        if let Some(bad) = c.iter().position(|v| !v.is_finite()) {
            return Err(Error::InvalidParameters(format!(
                "c[{}] is not finite",
                bad + 1
            )));
        }
        Ok(Self { c, chain })
    }

    pub fn from_c_d(c: Vec<f64>, d: Vec<f64>, periodic_tail: Option<usize>) -> Result<Self> {
        Self::new(c, ChainSequence::new(d, periodic_tail)?)
    }

    /// `m` must include `m_0 = 0`.
    pub fn from_c_m(c: Vec<f64>, m: Vec<f64>, periodic_tail: Option<usize>) -> Result<Self> {
        Self::new(c, ChainSequence::from_minimal(m, periodic_tail)?)
    }

    /// `c_1..c_N`.
    pub fn c(&self) -> &[f64] {
        &self.c
    }

    /// `d_1..d_N`.
    pub fn d(&self) -> &[f64] {
        self.chain.d()
    }

    /// `m_0..m_N`.
    pub fn m(&self) -> &[f64] {
        self.chain.m()
    }

    /// `b_n = 1 - 2 m_n` for `n = 1..N`.
    pub fn b(&self) -> Vec<f64> {
        self.m()[1..].iter().map(|m| 1.0 - 2.0 * m).collect()
    }

    pub fn chain(&self) -> &ChainSequence {
        &self.chain
    }

    pub fn len(&self) -> usize {
        self.c.len()
    }

    pub fn is_empty(&self) -> bool {
        self.c.is_empty()
    }

    pub fn periodic_tail(&self) -> Option<usize> {
        self.chain.periodic_tail()
    }

    pub fn with_periodic_tail(self, periodic_tail: Option<usize>) -> Result<Self> {
        Ok(Self {
            c: self.c,
            chain: self.chain.with_periodic_tail(periodic_tail)?,
        })
    }

    /// The first `n` terms.
    pub fn truncate(&self, n: usize) -> Result<Self> {
        if n > self.len() {
            return Err(Error::TooShort(format!(
                "requested {n} terms of a pair of length {}",
                self.len()
            )));
        }
        Self::from_c_m(self.c[..n].to_vec(), self.m()[..=n].to_vec(), None)
    }

    /// Prefix long enough for degree `n`, or [`Error::TooShort`].
    pub(crate) fn require(&self, n: usize) -> Result<()> {
        if n > self.len() {
            Err(Error::TooShort(format!(
                "degree {n} needs {n} recurrence coefficients, pair has {}",
                self.len()
            )))
        } else {
            Ok(())
        }
    }
}

/// Verblunsky coefficients `α_0..α_{N-1}` with the companion sequence
/// `τ_0..τ_N`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerblunskySequence {
    alpha: Vec<Complex64>,
    tau: Vec<Complex64>,
    periodic_tail: Option<usize>,
}

impl VerblunskySequence {
    /// Validate `|α_n| < 1` and compute `τ` from the coefficients.
    pub fn new(alpha: Vec<Complex64>) -> Result<Self> {
        check_disk(&alpha)?;
        let tau = tau_from_alpha(&alpha)?;
        Ok(Self {
            alpha,
            tau,
            periodic_tail: None,
        })
    }

    pub fn alpha(&self) -> &[Complex64] {
        &self.alpha
    }

    pub fn tau(&self) -> &[Complex64] {
        &self.tau
    }

    pub fn len(&self) -> usize {
        self.alpha.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alpha.is_empty()
    }

    /// Period `p` when the coefficients are known to satisfy `α_{n+p} = α_n`.
    pub fn periodic_tail(&self) -> Option<usize> {
        self.periodic_tail
    }

    /// Declare `α_{n+p} = α_n`; the stored prefix must repeat with period `p`.
    pub fn with_periodic_tail(mut self, periodic_tail: Option<usize>) -> Result<Self> {
        if let Some(p) = periodic_tail {
            if p == 0 || p > self.alpha.len() {
                return Err(Error::InvalidParameters(format!(
                    "tail period {p} needs 1 <= p <= {}",
                    self.alpha.len()
                )));
            }
            if let Some(n) = (p..self.alpha.len()).find(|&n| self.alpha[n] != self.alpha[n - p]) {
                return Err(Error::InvalidParameters(format!("alpha is not {p}-periodic at index {n}")));
            }
        }
        self.periodic_tail = periodic_tail;
        Ok(self)
    }

    pub fn into_alpha(self) -> Vec<Complex64> {
        self.alpha
    }
}

pub(crate) fn check_disk(alpha: &[Complex64]) -> Result<()> {
    for (j, a) in alpha.iter().enumerate() {
        let r = a.norm();
        if !(r < 1.0) {
            return Err(Error::OutsideDisk(j, r));
        }
    }
    Ok(())
}

pub(crate) fn renormalize(z: Complex64) -> Complex64 {
    z / z.norm()
}

/// `τ_0 = 1`, `τ_n = ∏_{k ≤ n} (1 - i c_k) / (1 + i c_k)`.
pub fn tau_from_c(c: &[f64]) -> Vec<Complex64> {
    let mut tau = Vec::with_capacity(c.len() + 1);
    let mut t = ONE;
    tau.push(t);
    for (k, &ck) in c.iter().enumerate() {
        t *= (ONE - I * ck) / (ONE + I * ck);
        if (k + 1) % RENORMALIZE_EVERY == 0 {
            t = renormalize(t);
        }
        tau.push(t);
    }
    tau
}

fn tau_from_alpha(alpha: &[Complex64]) -> Result<Vec<Complex64>> {
    let mut tau = Vec::with_capacity(alpha.len() + 1);
    let mut t = ONE;
    tau.push(t);
    for (k, a) in alpha.iter().enumerate() {
        let u = t * a;
        t = t * (ONE - u.conj()) / (ONE - u);
        if (k + 1) % RENORMALIZE_EVERY == 0 {
            t = renormalize(t);
        }
        tau.push(t);
    }
    Ok(tau)
}

/// Forward map: pair to Verblunsky coefficients.
pub fn pair_to_verblunsky(pair: &SequencePair) -> Result<VerblunskySequence> {
    let tau = tau_from_c(pair.c());
    let m = pair.m();
    let mut alpha = Vec::with_capacity(pair.len());
    for (k, &ck) in pair.c().iter().enumerate() {
        let n = k + 1;
        let a = tau[k].conj() * (Complex64::new(1.0 - 2.0 * m[n], -ck) / Complex64::new(1.0, -ck));
        if !(a.norm() < 1.0) {
            return Err(Error::InternalInvariant(format!(
                "|alpha[{k}]| = {} from m[{n}] = {}",
                a.norm(),
                m[n]
            )));
        }
        alpha.push(a);
    }
    // Periodic c and m with c_{2n} = -c_{2n-1} and even period give
    // periodic coefficients.
    let periodic_tail = pair.periodic_tail().filter(|&p| {
        p % 2 == 0 && pair.len().is_multiple_of(2) && is_pairwise_alternating(pair.c())
    });
    Ok(VerblunskySequence {
        alpha,
        tau,
        periodic_tail,
    })
}

/// `c_{2n} = -c_{2n-1}` on every complete pair of the prefix.
pub(crate) fn is_pairwise_alternating(c: &[f64]) -> bool {
    c.chunks_exact(2).all(|w| w[1] == -w[0])
}

/// Inverse map: Verblunsky coefficients to the pair `(c, m)`.
pub fn verblunsky_to_pair(alpha: &[Complex64]) -> Result<SequencePair> {
    check_disk(alpha)?;
    let mut c = Vec::with_capacity(alpha.len());
    let mut m = Vec::with_capacity(alpha.len() + 1);
    m.push(0.0);
    let mut t = ONE;
    for (k, a) in alpha.iter().enumerate() {
        let u = t * a;
        let den = 1.0 - u.re;
        if den.abs() < DEGENERACY_EPS {
            return Err(Error::DegenerateDenominator(k, den));
        }
        c.push(-u.im / den);
        m.push(0.5 * (ONE - u).norm_sqr() / den);
        t = t * (ONE - u.conj()) / (ONE - u);
        if (k + 1) % RENORMALIZE_EVERY == 0 {
            t = renormalize(t);
        }
    }
    SequencePair::from_c_m(c, m, None)
}
