//! Zeros of `W_n` on `(-1, 1)` and of `R_n` on the unit circle.
//!
//! The zeros of `W_n` and `W_{n+1}` strictly interlace, so the zeros at level
//! `n + 1` are bracketed by those at level `n` together with `±1`. Levels are
//! built in order, each zero found by bisection on its bracket.

use serde::{Deserialize, Serialize};

use crate::bijection::SequencePair;
use crate::error::{Error, Result};
use crate::poly::{sqrt_one_minus_sq, w_scaled_xs};

/// Default absolute bisection tolerance in `x`.
pub const DEFAULT_TOL: f64 = 1e-13;

/// Zeros with `|x| > 1 - NEAR_EDGE` are refined in `θ` instead of `x`.
const NEAR_EDGE: f64 = 1e-6;

/// Two neighbouring zeros closer than `10 · tol`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClusterWarning {
    pub level: usize,
    pub j: usize,
    pub left: [f64; 2],
    pub right: [f64; 2],
}

/// All zeros of `W_n`: `x` strictly decreasing, `θ = 2 arccos x` strictly
/// increasing in `(0, 2π)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroSet {
    pub level: usize,
    pub x: Vec<f64>,
    pub theta: Vec<f64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<ClusterWarning>,
}

impl ZeroSet {
    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }
}

fn w_sign_x(pair: &SequencePair, n: usize, x: f64) -> f64 {
    let (v, _) = w_scaled_xs(pair.c(), pair.d(), n, x, sqrt_one_minus_sq(x));
    v
}

fn w_sign_theta(pair: &SequencePair, n: usize, theta: f64) -> f64 {
    let half = 0.5 * theta;
    let (v, _) = w_scaled_xs(pair.c(), pair.d(), n, half.cos(), half.sin());
    v
}

/// Bisection to width `tol`, then one secant step kept only if it stays in
/// the final bracket.
fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, mut f_lo: f64, tol: f64) -> f64 {
    let mut f_hi = f(hi);
    for _ in 0..200 {
        if hi - lo <= tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return mid;
        }
        if (f_mid > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
            f_hi = f_mid;
        }
    }
    let secant = hi - f_hi * (hi - lo) / (f_hi - f_lo);
    if secant.is_finite() && secant > lo && secant < hi {
        secant
    } else {
        0.5 * (lo + hi)
    }
}

/// A zero of `W_{n-1}` where `W_n` shows the wrong sign: the two levels share
/// a zero to within rounding (zeros converging onto an isolated mass point).
/// Step away from `x` in growing increments until `W_n` has the `expect`ed
/// sign, staying strictly between the neighbouring endpoints.
fn nudge(pair: &SequencePair, level: usize, above: f64, x: f64, below: f64, expect: f64) -> Option<(f64, f64)> {
    let mut delta = 4.0 * f64::EPSILON * x.abs().max(f64::MIN_POSITIVE);
    let limit = 1e-3 * (above - x).min(x - below);
    while delta <= limit {
        for t in [x - delta, x + delta] {
            let v = w_sign_x(pair, level, t);
            if v * expect > 0.0 {
                return Some((t, v));
            }
        }
        delta *= 2.0;
    }
    None
}

fn find_level(pair: &SequencePair, level: usize, prev: &[f64], tol: f64) -> Result<ZeroSet> {
    // Bracket endpoints in decreasing order: 1, x_{n-1,1}, …, x_{n-1,n-1}, -1.
    let mut ends = Vec::with_capacity(prev.len() + 2);
    ends.push(1.0);
    ends.extend_from_slice(prev);
    ends.push(-1.0);
    let mut values: Vec<f64> = ends.iter().map(|&x| w_sign_x(pair, level, x)).collect();
    for k in 1..ends.len() - 1 {
        let expect = if k % 2 == 0 { 1.0 } else { -1.0 };
        if values[k] * expect <= 0.0 {
            if let Some((x, v)) = nudge(pair, level, ends[k - 1], ends[k], ends[k + 1], expect) {
                ends[k] = x;
                values[k] = v;
            }
        }
    }

    let mut x = Vec::with_capacity(level);
    let mut theta = Vec::with_capacity(level);
    for j in 0..level {
        let (hi, lo) = (ends[j], ends[j + 1]);
        let (f_hi, f_lo) = (values[j], values[j + 1]);
        if f_lo == 0.0 || f_hi == 0.0 || (f_lo > 0.0) == (f_hi > 0.0) {
            return Err(Error::BracketFailure {
                level,
                j: j + 1,
                lo,
                hi,
                f_lo,
                f_hi,
            });
        }
        let root = bisect(|t| w_sign_x(pair, level, t), lo, hi, f_lo, tol);
        if root.abs() > 1.0 - NEAR_EDGE {
            // arccos is ill-conditioned here: refine the angle directly.
            let (t_lo, t_hi) = (2.0 * hi.acos(), 2.0 * lo.acos());
            let g_lo = w_sign_theta(pair, level, t_lo);
            let t = bisect(|t| w_sign_theta(pair, level, t), t_lo, t_hi, g_lo, tol);
            x.push((0.5 * t).cos());
            theta.push(t);
        } else {
            x.push(root);
            theta.push(2.0 * root.acos());
        }
    }

    let mut warnings = Vec::new();
    for j in 1..level {
        if x[j - 1] - x[j] < 10.0 * tol {
            warnings.push(ClusterWarning {
                level,
                j,
                left: [ends[j - 1], ends[j]],
                right: [ends[j], ends[j + 1]],
            });
        }
    }
    Ok(ZeroSet {
        level,
        x,
        theta,
        warnings,
    })
}

/// Zero sets of `W_1, …, W_n`.
pub fn w_zeros_all_levels(pair: &SequencePair, n: usize, tol: f64) -> Result<Vec<ZeroSet>> {
    if n == 0 {
        return Err(Error::InvalidParameters("level must be at least 1".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::InvalidParameters("tolerance must be positive".into()));
    }
    pair.require(n)?;
    let mut levels: Vec<ZeroSet> = Vec::with_capacity(n);
    for level in 1..=n {
        let prev = levels.last().map(|z| z.x.as_slice()).unwrap_or(&[]);
        let next = find_level(pair, level, prev, tol)?;
        levels.push(next);
    }
    Ok(levels)
}

/// The `n` zeros of `W_n`.
pub fn w_zeros(pair: &SequencePair, n: usize, tol: f64) -> Result<ZeroSet> {
    let mut levels = w_zeros_all_levels(pair, n, tol)?;
    Ok(levels.pop().expect("n >= 1"))
}

/// Smallest gap in the strict interlacing of two consecutive levels, or
/// `None` when the ordering is violated.
pub fn interlacing_margin(lower: &ZeroSet, upper: &ZeroSet) -> Option<f64> {
    if upper.len() != lower.len() + 1 {
        return None;
    }
    let mut margin = f64::INFINITY;
    // 1 > u_1 > l_1 > u_2 > … > l_n > u_{n+1} > -1
    let mut seq = Vec::with_capacity(2 * upper.len() + 1);
    seq.push(1.0);
    for j in 0..lower.len() {
        seq.push(upper.x[j]);
        seq.push(lower.x[j]);
    }
    seq.push(upper.x[lower.len()]);
    seq.push(-1.0);
    for w in seq.windows(2) {
        let gap = w[0] - w[1];
        if !(gap > 0.0) {
            return None;
        }
        margin = margin.min(gap);
    }
    Some(margin)
}

/// Outcome of the support-gap check for alternating `c_n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    /// Lower bound `c` on `|c_n|` used for the check.
    pub c: f64,
    /// `c / √(1 + c²)`: no zero may satisfy `|x| <` this.
    pub x_bound: f64,
    /// `arccos((c² - 1) / (c² + 1))`; the arcs `[0, θ_c]` and `[2π - θ_c, 2π]`
    /// contain every zero of `R_k`.
    pub theta_c: f64,
    /// `min (|x| - x_bound)` over all zeros checked.
    pub min_distance: f64,
    pub levels: usize,
}

/// `θ_c = arccos((c² - 1) / (c² + 1))`.
pub fn arc_bound(c: f64) -> f64 {
    let c2 = c * c;
    ((c2 - 1.0) / (c2 + 1.0)).clamp(-1.0, 1.0).acos()
}

/// Verify that no zero of `W_k`, `k ≤ n`, enters
/// `(-c/√(1+c²) + tol, c/√(1+c²) - tol)` when `c_k = (-1)^k c̃_k` with
/// `c̃_k ≥ c > 0` (or `c̃_k ≤ -c < 0`).
///
/// `c = None` uses the largest bound the stored prefix supports.
pub fn support_gap_check(pair: &SequencePair, c: Option<f64>, n: usize, tol: f64) -> Result<GapReport> {
    pair.require(n)?;
    let signed: Vec<f64> = pair.c()[..n]
        .iter()
        .enumerate()
        .map(|(k, &ck)| if k % 2 == 0 { -ck } else { ck })
        .collect();
    let positive = signed.iter().all(|&s| s >= 0.0);
    let negative = signed.iter().all(|&s| s <= 0.0);
    if !(positive || negative) {
        return Err(Error::HypothesisViolated(
            "c_n does not have the alternating sign pattern (-1)^n c~_n".into(),
        ));
    }
    let supported = signed.iter().map(|s| s.abs()).fold(f64::INFINITY, f64::min);
    let c = match c {
        Some(c) if c < 0.0 => {
            return Err(Error::InvalidParameters(format!("gap bound c = {c} must be >= 0")))
        }
        Some(c) if c > supported => {
            return Err(Error::HypothesisViolated(format!(
                "|c~_n| >= {c} fails: smallest |c~_n| on the prefix is {supported}"
            )))
        }
        Some(c) => c,
        None => supported,
    };
    let x_bound = c / (1.0 + c * c).sqrt();
    let mut min_distance = f64::INFINITY;
    for zs in w_zeros_all_levels(pair, n, DEFAULT_TOL)? {
        for (j, &x) in zs.x.iter().enumerate() {
            if c > 0.0 && x.abs() < x_bound - tol {
                return Err(Error::GapViolated {
                    k: zs.level,
                    j: j + 1,
                    x,
                });
            }
            min_distance = min_distance.min(x.abs() - x_bound);
        }
    }
    Ok(GapReport {
        c,
        x_bound,
        theta_c: arc_bound(c),
        min_distance,
        levels: n,
    })
}

/// Group sorted angles into arcs, splitting wherever consecutive angles are
/// more than `gap` apart (cyclically). Each arc is `[start, end]` with
/// `end < start` meaning it wraps through `θ = 0`.
///
/// This is a heuristic estimate of the closed arc carrying the zeros; it is
/// not a certified support bound.
pub fn zero_arcs(theta: &[f64], gap: f64) -> Vec<[f64; 2]> {
    use std::f64::consts::TAU;
    if theta.is_empty() {
        return vec![];
    }
    let mut sorted = theta.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let mut breaks: Vec<usize> = (0..n)
        .filter(|&i| {
            let next = if i + 1 < n { sorted[i + 1] } else { sorted[0] + TAU };
            next - sorted[i] > gap
        })
        .collect();
    if breaks.is_empty() {
        return vec![[0.0, TAU]];
    }
    breaks.sort_unstable();
    let mut arcs = Vec::with_capacity(breaks.len());
    for (k, &b) in breaks.iter().enumerate() {
        let start = sorted[(b + 1) % n];
        let end = sorted[breaks[(k + 1) % breaks.len()]];
        arcs.push([start, end]);
    }
    arcs.sort_by(|a, b| a[0].total_cmp(&b[0]));
    arcs
}
