//! Positive chain sequences and their parameter sequences.
//!
//! A sequence `d_1, d_2, …` is a positive chain sequence when there are
//! parameters `g_0, g_1, …` in `[0, 1)` with `d_n = (1 - g_{n-1}) g_n`. The
//! smallest such parameters (`g_0 = 0`) are the *minimal* parameters; the
//! largest are the *maximal* parameters, whose first entry is the mass the
//! associated measure places at `z = 1`.
//!
//! Infinite sequences are stored as a finite prefix plus an optional period
//! `p`: the last `p` stored entries repeat forever.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A validated prefix of a positive chain sequence together with its
/// minimal parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainSequence {
    d: Vec<f64>,
    m: Vec<f64>,
    periodic_tail: Option<usize>,
}

impl ChainSequence {
    /// Validate `d` and compute its minimal parameters.
    pub fn new(d: Vec<f64>, periodic_tail: Option<usize>) -> Result<Self> {
        check_tail(d.len(), periodic_tail)?;
        let m = minimal_parameters(&d)?;
        Ok(Self {
            d,
            m,
            periodic_tail,
        })
    }

    /// Build from minimal parameters `(m_0 = 0, m_1, …, m_N)`.
    ///
    /// The given parameters are stored verbatim; `d` is derived from them.
    pub fn from_minimal(m: Vec<f64>, periodic_tail: Option<usize>) -> Result<Self> {
        let d = d_from_minimal(&m)?;
        check_tail(d.len(), periodic_tail)?;
        Ok(Self {
            d,
            m,
            periodic_tail,
        })
    }

    pub fn d(&self) -> &[f64] {
        &self.d
    }

    /// Minimal parameters, `m[0] = 0`, one longer than [`Self::d`].
    pub fn m(&self) -> &[f64] {
        &self.m
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    pub fn periodic_tail(&self) -> Option<usize> {
        self.periodic_tail
    }

    pub fn with_periodic_tail(mut self, periodic_tail: Option<usize>) -> Result<Self> {
        check_tail(self.d.len(), periodic_tail)?;
        self.periodic_tail = periodic_tail;
        Ok(self)
    }

    /// `d_n` for any `n >= 1`, following the periodic tail past the prefix.
    pub fn d_at(&self, n: usize) -> Option<f64> {
        assert!(n >= 1, "chain sequences are indexed from 1");
        let len = self.d.len();
        if n <= len {
            return Some(self.d[n - 1]);
        }
        let p = self.periodic_tail?;
        let k = len - p + (n - len - 1) % p;
        Some(self.d[k])
    }

    /// Largest `|d_n - (1 - m_{n-1}) m_n|` relative to `d_n`.
    pub fn reconstruction_error(&self) -> f64 {
        self.d
            .iter()
            .enumerate()
            .map(|(i, &d)| ((1.0 - self.m[i]) * self.m[i + 1] - d).abs() / d)
            .fold(0.0, f64::max)
    }

    pub fn maximal_parameters(&self, opts: &MaximalOptions) -> Result<MaximalParameters> {
        maximal_parameters(self, opts)
    }
}

fn check_tail(len: usize, periodic_tail: Option<usize>) -> Result<()> {
    match periodic_tail {
        Some(0) => Err(Error::InvalidParameters("tail period must be positive".into())),
        Some(p) if p > len => Err(Error::InvalidParameters(format!(
            "tail period {p} exceeds the stored prefix length {len}"
        ))),
        _ => Ok(()),
    }
}

/// Minimal parameters `m_0 = 0, m_n = d_n / (1 - m_{n-1})` of a chain-sequence
/// prefix.
pub fn minimal_parameters(d: &[f64]) -> Result<Vec<f64>> {
    let mut m = Vec::with_capacity(d.len() + 1);
    m.push(0.0);
    for (i, &dn) in d.iter().enumerate() {
        let n = i + 1;
        if !(dn.is_finite() && dn > 0.0) {
            return Err(Error::InvalidParameters(format!(
                "d[{n}] = {dn} is not a positive finite number"
            )));
        }
        let mn = dn / (1.0 - m[i]);
        if !(mn < 1.0) {
            return Err(Error::NotAChainSequence(n, mn));
        }
        m.push(mn);
    }
    Ok(m)
}

/// Inverse of [`minimal_parameters`]: `d_n = (1 - m_{n-1}) m_n`.
pub fn d_from_minimal(m: &[f64]) -> Result<Vec<f64>> {
    match m.first() {
        None => {
            return Err(Error::InvalidParameters(
                "parameter list must contain m_0".into(),
            ))
        }
        Some(&m0) if m0 != 0.0 => {
            return Err(Error::InvalidParameters(format!(
                "m_0 must be 0 for minimal parameters, got {m0}"
            )))
        }
        _ => {}
    }
    for (n, &mn) in m.iter().enumerate().skip(1) {
        if !(mn > 0.0 && mn < 1.0) {
            return Err(Error::InvalidParameters(format!(
                "m[{n}] = {mn} is outside (0, 1)"
            )));
        }
    }
    Ok(m.windows(2).map(|w| (1.0 - w[0]) * w[1]).collect())
}

/// Controls for [`maximal_parameters`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MaximalOptions {
    /// Number of tail periods used for the first backward sweep.
    pub initial_depth: u64,
    /// Stop once a doubling of the depth moves `M_0` by less than this.
    pub tol: f64,
    /// Give up after this many doublings.
    pub max_doublings: u32,
}

impl Default for MaximalOptions {
    fn default() -> Self {
        Self {
            initial_depth: 1,
            tol: 1e-12,
            max_doublings: 64,
        }
    }
}

/// Maximal parameters `M_0, …, M_N` of a chain sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaximalParameters {
    pub values: Vec<f64>,
    /// Number of tail periods behind the prefix in the accepted sweep
    /// (0 when the sequence has no periodic tail).
    pub tail_depth: u64,
    pub tol: f64,
    /// Set when no tail is known: the values are then the maximal parameters
    /// of the prefix alone, an upper bound for those of any extension.
    pub prefix_bound: bool,
}

impl MaximalParameters {
    /// `M_0`, the jump of the associated measure at `z = 1`.
    pub fn jump_at_one(&self) -> f64 {
        self.values[0]
    }

    /// True when minimal and maximal parameters agree within `tol`.
    pub fn is_determinate(&self, m: &[f64], tol: f64) -> bool {
        self.values
            .iter()
            .zip(m)
            .all(|(big, small)| (big - small).abs() < tol)
    }
}

type Mobius = [f64; 4];

fn mobius_mul(a: &Mobius, b: &Mobius) -> Mobius {
    let r = [
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    ];
    let scale = r.iter().fold(0.0_f64, |s, v| s.max(v.abs()));
    if scale > 0.0 && scale.is_finite() {
        r.map(|v| v / scale)
    } else {
        r
    }
}

fn mobius_pow(base: &Mobius, mut k: u64) -> Mobius {
    let mut acc = [1.0, 0.0, 0.0, 1.0];
    let mut sq = *base;
    while k > 0 {
        if k & 1 == 1 {
            acc = mobius_mul(&acc, &sq);
        }
        sq = mobius_mul(&sq, &sq);
        k >>= 1;
    }
    acc
}

/// `k`-fold iterate of a real Möbius map, evaluated through its fixed
/// points so that very large `k` cost nothing and lose no accuracy.
enum PeriodPower {
    /// Two real fixed points; `(x - x1) / (x - x2)` is multiplied by `ratio`.
    Hyperbolic { x1: f64, x2: f64, ratio: f64 },
    /// One fixed point; `1 / (x - x0)` is shifted by `shift`.
    Parabolic { x0: f64, shift: f64 },
    /// Complex fixed points: fall back to repeated squaring.
    Elliptic(Mobius),
    /// `c = 0`: affine map `x -> (a x + b) / e`.
    Affine(Mobius),
}

impl PeriodPower {
    fn new(m: &Mobius) -> Self {
        let [a, b, c, e] = *m;
        let scale = a.abs().max(b.abs()).max(c.abs()).max(e.abs());
        if c.abs() <= 1e-300 * scale.max(1e-300) {
            return PeriodPower::Affine(*m);
        }
        let trace = a + e;
        let disc = (e - a) * (e - a) + 4.0 * b * c;
        if disc.abs() <= 1e-13 * trace * trace {
            PeriodPower::Parabolic {
                x0: (a - e) / (2.0 * c),
                shift: 2.0 * c / trace,
            }
        } else if disc > 0.0 {
            let root = disc.sqrt();
            // Roots of c x^2 + (e - a) x - b, the larger-eigenvalue one first.
            let (x1, x2) = if trace >= 0.0 {
                ((a - e + root) / (2.0 * c), (a - e - root) / (2.0 * c))
            } else {
                ((a - e - root) / (2.0 * c), (a - e + root) / (2.0 * c))
            };
            let (l1, l2) = (c * x1 + e, c * x2 + e);
            PeriodPower::Hyperbolic { x1, x2, ratio: l2 / l1 }
        } else {
            PeriodPower::Elliptic(*m)
        }
    }

    fn apply(&self, k: u64, x: f64) -> f64 {
        match self {
            PeriodPower::Hyperbolic { x1, x2, ratio } => {
                if x == *x2 {
                    return x;
                }
                let w = (x - x1) / (x - x2) * ratio.abs().powf(k as f64)
                    * if *ratio < 0.0 && k % 2 == 1 { -1.0 } else { 1.0 };
                if w.is_infinite() {
                    *x2
                } else {
                    (x1 - w * x2) / (1.0 - w)
                }
            }
            PeriodPower::Parabolic { x0, shift } => {
                if x == *x0 {
                    return x;
                }
                x0 + 1.0 / (1.0 / (x - x0) + k as f64 * shift)
            }
            PeriodPower::Elliptic(m) | PeriodPower::Affine(m) => {
                let p = mobius_pow(m, k);
                (p[0] * x + p[1]) / (p[2] * x + p[3])
            }
        }
    }
}

/// Apply the backward sweep `M_{n-1} = 1 - d_n / M_n` from `M_N = seed` down
/// to `M_0`.
fn sweep_prefix(d: &[f64], seed: f64) -> Result<Vec<f64>> {
    let n = d.len();
    let mut big = vec![0.0; n + 1];
    big[n] = seed;
    for k in (1..=n).rev() {
        if !(big[k] > 0.0) {
            return Err(Error::DivisionByZero(k, big[k]));
        }
        big[k - 1] = 1.0 - d[k - 1] / big[k];
    }
    // M_0 is exactly 0 for measures without mass at 1; rounding may push it
    // a hair below.
    if big[0] < 0.0 {
        if big[0] > -1e-9 {
            big[0] = 0.0;
        } else {
            return Err(Error::DivisionByZero(0, big[0]));
        }
    }
    Ok(big)
}

/// Maximal parameters by truncated backward iteration seeded with `1`.
///
/// With a periodic tail, `depth` copies of the tail are placed behind the
/// prefix and the depth is doubled until `M_0` moves by less than `tol`.
/// One period of the backward map is a Möbius transformation, so a sweep
/// over `k` periods is the `k`-th power of a 2×2 matrix and each doubling is
/// one squaring. Without a tail only the prefix is swept (see
/// [`MaximalParameters::prefix_bound`]).
pub fn maximal_parameters(chain: &ChainSequence, opts: &MaximalOptions) -> Result<MaximalParameters> {
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidParameters("tolerance must be positive".into()));
    }
    if opts.initial_depth == 0 {
        return Err(Error::InvalidParameters("depth must be at least 1".into()));
    }
    let d = chain.d();
    let Some(p) = chain.periodic_tail() else {
        let values = sweep_prefix(d, 1.0)?;
        return Ok(MaximalParameters {
            values,
            tail_depth: 0,
            tol: opts.tol,
            prefix_bound: true,
        });
    };

    // Period map g_{N+1} ∘ … ∘ g_{N+p}, with g_n(M) = (M - d_n) / M.
    let n = d.len();
    let mut period: Mobius = [1.0, 0.0, 0.0, 1.0];
    for k in 1..=p {
        let dn = chain.d_at(n + k).expect("tail present");
        period = mobius_mul(&period, &[1.0, -dn, 1.0, 0.0]);
    }
    let tail = PeriodPower::new(&period);
    let at_depth = |k: u64| -> Result<f64> {
        let v = tail.apply(k, 1.0);
        if v.is_finite() && v > 0.0 && v <= 1.0 + 1e-12 {
            Ok(v.min(1.0))
        } else {
            Err(Error::DivisionByZero(n, v))
        }
    };

    let mut depth = opts.initial_depth;
    let mut values = sweep_prefix(d, at_depth(depth)?)?;
    let mut last_change = f64::INFINITY;
    for _ in 0..opts.max_doublings {
        depth = depth.saturating_mul(2);
        let next = sweep_prefix(d, at_depth(depth)?)?;
        last_change = (next[0] - values[0]).abs();
        values = next;
        if last_change < opts.tol {
            return Ok(MaximalParameters {
                values,
                tail_depth: depth,
                tol: opts.tol,
                prefix_bound: false,
            });
        }
    }
    Err(Error::NoConvergence {
        tol: opts.tol,
        last_change,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn minimal_parameters_of_half_then_quarter() {
        let m = minimal_parameters(&[0.5, 0.25, 0.25, 0.25]).unwrap();
        assert_eq!(m, vec![0.0, 0.5, 0.5, 0.5, 0.5]);
    }

    #[test]
    fn minimal_parameters_of_constant_quarter() {
        let m = minimal_parameters(&[0.25; 4]).unwrap();
        let expected = [0.0, 0.25, 1.0 / 3.0, 0.375, 0.4];
        for (a, b) in m.iter().zip(expected) {
            assert_abs_diff_eq!(*a, b, epsilon = 1e-15);
        }
    }

    #[test]
    fn constant_quarter_closed_form() {
        let m = minimal_parameters(&[0.25; 100]).unwrap();
        for (n, mn) in m.iter().enumerate() {
            let exact = n as f64 / (2.0 * (n as f64 + 1.0));
            assert_abs_diff_eq!(*mn, exact, epsilon = 1e-12);
        }
    }

    #[test]
    fn rejects_non_chain_prefix() {
        assert_eq!(
            minimal_parameters(&[0.5, 0.6]).unwrap_err(),
            Error::NotAChainSequence(2, 0.6 / 0.5)
        );
        assert!(matches!(
            minimal_parameters(&[0.5, -0.1]),
            Err(Error::InvalidParameters(_))
        ));
    }

    #[test]
    fn d_from_minimal_examples() {
        assert_eq!(d_from_minimal(&[0.0, 0.5, 0.5]).unwrap(), vec![0.5, 0.25]);
        let d = d_from_minimal(&[0.0, 0.25, 1.0 / 3.0]).unwrap();
        assert_abs_diff_eq!(d[0], 0.25);
        assert_abs_diff_eq!(d[1], 0.25, epsilon = 1e-16);
        assert!(d_from_minimal(&[0.1, 0.5]).is_err());
        assert!(d_from_minimal(&[0.0, 1.0]).is_err());
        assert!(d_from_minimal(&[]).is_err());
    }

    #[test]
    fn tail_indexing() {
        let chain = ChainSequence::new(vec![0.5, 0.2, 0.3], Some(2)).unwrap();
        let got: Vec<f64> = (1..=7).map(|n| chain.d_at(n).unwrap()).collect();
        assert_eq!(got, vec![0.5, 0.2, 0.3, 0.2, 0.3, 0.2, 0.3]);
        assert!(ChainSequence::new(vec![0.5], Some(2)).is_err());
        assert_eq!(ChainSequence::new(vec![0.5], None).unwrap().d_at(2), None);
    }

    #[test]
    fn maximal_constant_quarter_is_one_half() {
        let chain = ChainSequence::new(vec![0.25; 3], Some(1)).unwrap();
        let big = chain.maximal_parameters(&MaximalOptions::default()).unwrap();
        for v in &big.values {
            assert_abs_diff_eq!(*v, 0.5, epsilon = 1e-10);
        }
        // Minimal and maximal coincide in the limit: determinate.
        let limit = MaximalParameters {
            values: vec![0.5; 4],
            ..big.clone()
        };
        assert!(limit.is_determinate(&[0.5; 4], 1e-12));
        assert!(!big.is_determinate(chain.m(), 1e-3));
    }

    #[test]
    fn maximal_for_lebesgue_pair_has_no_jump() {
        let chain = ChainSequence::new(vec![0.5, 0.25], Some(1)).unwrap();
        let big = chain.maximal_parameters(&MaximalOptions::default()).unwrap();
        assert_abs_diff_eq!(big.jump_at_one(), 0.0, epsilon = 1e-10);
    }

    #[test]
    fn maximal_geometric_tail() {
        // d = 2/9 repeating has fixed points 1/3 and 2/3 of M -> 1 - d/M;
        // backward iteration from 1 lands on the larger one.
        let chain = ChainSequence::new(vec![2.0 / 9.0; 2], Some(1)).unwrap();
        let big = chain.maximal_parameters(&MaximalOptions::default()).unwrap();
        for v in &big.values {
            assert_abs_diff_eq!(*v, 2.0 / 3.0, epsilon = 1e-12);
        }
        for (mm, bb) in chain.m().iter().zip(&big.values) {
            assert!(mm <= bb);
        }
    }

    #[test]
    fn maximal_without_tail_is_prefix_bound() {
        let chain = ChainSequence::new(vec![0.25, 0.25], None).unwrap();
        let big = chain.maximal_parameters(&MaximalOptions::default()).unwrap();
        assert!(big.prefix_bound);
        assert_eq!(big.values[2], 1.0);
        assert_abs_diff_eq!(big.values[1], 0.75);
        assert_abs_diff_eq!(big.values[0], 1.0 - 0.25 / 0.75);
    }

    #[test]
    fn maximal_rejects_tail_that_is_not_a_chain() {
        let chain = ChainSequence::new(vec![0.3], Some(1)).unwrap();
        assert!(matches!(
            chain.maximal_parameters(&MaximalOptions::default()),
            Err(Error::DivisionByZero(..) | Error::NoConvergence { .. })
        ));
    }
}
