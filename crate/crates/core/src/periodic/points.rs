//! Zeros of `φ_p* - φ_p` on the circle and the masses they may carry.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::bijection::{check_disk, renormalize, RENORMALIZE_EVERY};
use crate::error::{Error, Result};
use crate::poly::szego_eval;

/// `|1 - w τ_j α_j|` below which the `τ_j(w)` recursion is abandoned.
const DENOM_EPS: f64 = 1e-14;

/// `|τ_p(w) - 1|` accepted for a candidate.
pub const CANDIDATE_TOL: f64 = 1e-9;

/// `γ = 1 - ∏ q_j` at or below this counts as "no pure point".
pub const NO_MASS_TOL: f64 = 1e-12;

/// A zero of `φ_p* - φ_p` on the unit circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub theta: f64,
    pub point: Complex64,
    /// `|φ_p*(w) - φ_p(w)|` for the monic polynomials.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PurePoint {
    pub theta: f64,
    pub point: Complex64,
    pub mass: f64,
}

/// Full output of the mass formula at one candidate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MassReport {
    /// `∏_{j=1}^p q_j`.
    pub product: f64,
    pub gamma: f64,
    pub delta: f64,
    /// `γ / (γ + δ)` when `γ > NO_MASS_TOL`.
    pub mass: Option<f64>,
}

/// `τ_0(w) = 1`, `τ_{j+1}(w) = (w τ_j - conj(α_j)) / (1 - w τ_j α_j)` for
/// `j < n`, with `α` repeated periodically.
pub fn tau_w(alpha: &[Complex64], w: Complex64, n: usize) -> Result<Vec<Complex64>> {
    check_disk(alpha)?;
    if alpha.is_empty() && n > 0 {
        return Err(Error::InvalidParameters("no coefficients".into()));
    }
    let mut out = Vec::with_capacity(n + 1);
    let mut t = Complex64::new(1.0, 0.0);
    out.push(t);
    for j in 0..n {
        let a = alpha[j % alpha.len()];
        let den = 1.0 - w * t * a;
        if den.norm() < DENOM_EPS {
            return Err(Error::DenominatorVanished(j));
        }
        t = (w * t - a.conj()) / den;
        if (j + 1) % RENORMALIZE_EVERY == 0 {
            t = renormalize(t);
        }
        out.push(t);
    }
    Ok(out)
}

fn q_factors(alpha: &[Complex64], w: Complex64, tau: &[Complex64], n: usize) -> Vec<f64> {
    (1..=n)
        .map(|j| {
            let a = alpha[(j - 1) % alpha.len()];
            (1.0 - w * tau[j - 1] * a).norm_sqr() / (1.0 - a.norm_sqr())
        })
        .collect()
}

/// Closed-form mass at a candidate `w` (one with `τ_p(w) = 1`).
pub fn pure_point_mass(alpha: &[Complex64], w: Complex64) -> Result<MassReport> {
    let p = alpha.len();
    let tau = tau_w(alpha, w, p)?;
    let off = (tau[p] - 1.0).norm();
    if off > CANDIDATE_TOL {
        return Err(Error::NotACandidate(off));
    }
    let q = q_factors(alpha, w, &tau, p);
    let mut running = 1.0;
    let mut delta = 0.0;
    for qj in &q {
        running *= qj;
        delta += running;
    }
    let gamma = 1.0 - running;
    Ok(MassReport {
        product: running,
        gamma,
        delta,
        mass: (gamma > NO_MASS_TOL).then(|| gamma / (gamma + delta)),
    })
}

/// `1 / (1 + λ_N(w))` with `λ_N = Σ_{n=1}^N ∏_{j=1}^n q_j`, the truncated
/// series for the mass at `w`.
///
/// At a candidate (`τ_p(w) = 1`) the sequence `τ_j(w)` is `p`-periodic, but
/// forward iteration of its recursion is unstable there whenever `w` carries
/// mass, so one period is computed and repeated. Elsewhere the recursion is
/// iterated for all `N` terms.
pub fn truncated_series_mass(alpha: &[Complex64], w: Complex64, terms: usize) -> Result<f64> {
    let p = alpha.len();
    if p == 0 {
        return Err(Error::InvalidParameters("no coefficients".into()));
    }
    let period = tau_w(alpha, w, p)?;
    let tau = if (period[p] - 1.0).norm() <= CANDIDATE_TOL {
        (0..terms).map(|j| period[j % p]).collect()
    } else {
        tau_w(alpha, w, terms)?
    };
    let mut running = 1.0;
    let mut lambda = 0.0;
    for (j, t) in tau[..terms].iter().enumerate() {
        let a = alpha[j % p];
        running *= (1.0 - w * t * a).norm_sqr() / (1.0 - a.norm_sqr());
        lambda += running;
    }
    Ok(1.0 / (1.0 + lambda))
}

fn h_of(alpha: &[Complex64], theta: f64) -> f64 {
    let p = alpha.len();
    let z = Complex64::from_polar(1.0, theta);
    let s = szego_eval(alpha, z, p).expect("validated coefficients");
    (Complex64::from_polar(1.0, -0.5 * p as f64 * theta) * s.phi).im
}

/// The `p` zeros of `φ_p* - φ_p` on the circle, in increasing angle.
///
/// On `|z| = 1`, `e^{-ipθ/2} φ_p*` is the conjugate of `e^{-ipθ/2} φ_p`, so
/// the zeros are those of `h(θ) = Im(e^{-ipθ/2} φ_p(e^{iθ}))`, located by a
/// grid scan and bisection.
pub fn gap_candidates(alpha: &[Complex64], grid_per_period: usize) -> Result<Vec<Candidate>> {
    check_disk(alpha)?;
    let p = alpha.len();
    if p == 0 {
        return Err(Error::InvalidParameters("period must be at least 1".into()));
    }
    let grid = grid_per_period.max(4) * p;
    let h = TAU / grid as f64;
    let coarse = 64 * p;
    let start = (0..coarse)
        .map(|k| k as f64 * TAU / coarse as f64)
        .max_by(|a, b| h_of(alpha, *a).abs().total_cmp(&h_of(alpha, *b).abs()))
        .expect("non-empty");

    let ts: Vec<f64> = (0..=grid).map(|k| start + k as f64 * h).collect();
    let vs: Vec<f64> = ts.iter().map(|&t| h_of(alpha, t)).collect();
    let mut thetas = Vec::new();
    for k in 0..grid {
        if vs[k] == 0.0 {
            thetas.push(ts[k]);
        } else if vs[k + 1] != 0.0 && (vs[k] > 0.0) != (vs[k + 1] > 0.0) {
            let (mut lo, mut hi, mut f_lo) = (ts[k], ts[k + 1], vs[k]);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if mid <= lo || mid >= hi {
                    break;
                }
                let fm = h_of(alpha, mid);
                if fm == 0.0 {
                    lo = mid;
                    hi = mid;
                    break;
                }
                if (fm > 0.0) == (f_lo > 0.0) {
                    lo = mid;
                    f_lo = fm;
                } else {
                    hi = mid;
                }
            }
            thetas.push(0.5 * (lo + hi));
        }
    }

    let mut out: Vec<Candidate> = thetas
        .into_iter()
        .map(|t| {
            let mut theta = t.rem_euclid(TAU);
            if theta >= TAU - 1e-14 {
                theta = 0.0;
            }
            let point = Complex64::from_polar(1.0, theta);
            let s = szego_eval(alpha, point, p).expect("validated coefficients");
            Candidate {
                theta,
                point,
                residual: (s.phi_star - s.phi).norm(),
            }
        })
        .collect();
    out.sort_by(|a, b| a.theta.total_cmp(&b.theta));
    if out.len() != p {
        return Err(Error::CandidateCountMismatch {
            found: out.len(),
            expected: p,
        });
    }
    Ok(out)
}
