//! Solutions of `Δ = ±2` and the band/gap decomposition of the circle.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use super::transfer::discriminant_and_derivative;
use crate::error::{Error, Result};

/// Grid points per unit of period used when scanning.
pub const DEFAULT_GRID_PER_PERIOD: usize = 4096;

/// `|Δ ∓ 2|` at a critical point below which it counts as a double root.
pub const DOUBLE_ROOT_TOL: f64 = 1e-8;

/// A solution of `Δ(e^{iθ}) = 2·sign`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub theta: f64,
    /// `+1` for `Δ = 2`, `-1` for `Δ = -2`.
    pub sign: i8,
    /// `2` for a double root (a closed gap).
    pub multiplicity: u8,
}

/// Closed arc `[start, end]` with `end` possibly beyond `2π` when the arc
/// wraps through `θ = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Band {
    pub start: f64,
    pub end: f64,
    /// Sign of `Δ` at `start`.
    pub sigma: i8,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Gap {
    pub start: f64,
    pub end: f64,
    /// True when the gap is empty (both edges are the same double root).
    pub closed: bool,
}

/// Arc membership with cyclic angles and a tolerance on both ends.
pub(crate) fn arc_contains(start: f64, end: f64, theta: f64, tol: f64) -> bool {
    let t = (theta - start).rem_euclid(TAU);
    let len = end - start;
    t <= len + tol || t >= TAU - tol
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BandStructure {
    pub p: usize,
    pub edges: Vec<Edge>,
    pub bands: Vec<Band>,
    pub gaps: Vec<Gap>,
    pub grid: usize,
}

impl BandStructure {
    /// Angles solving `Δ = 2`, listed with multiplicity.
    pub fn plus_solutions(&self) -> Vec<f64> {
        self.solutions(1)
    }

    /// Angles solving `Δ = -2`, listed with multiplicity.
    pub fn minus_solutions(&self) -> Vec<f64> {
        self.solutions(-1)
    }

    fn solutions(&self, sign: i8) -> Vec<f64> {
        self.edges
            .iter()
            .filter(|e| e.sign == sign)
            .flat_map(|e| std::iter::repeat_n(e.theta, e.multiplicity as usize))
            .collect()
    }

    /// Index of the gap whose closure contains `theta`.
    pub fn gap_containing(&self, theta: f64, tol: f64) -> Option<usize> {
        self.gaps.iter().position(|g| arc_contains(g.start, g.end, theta, tol))
    }

    pub fn in_band(&self, theta: f64, tol: f64) -> bool {
        self.bands.iter().any(|b| arc_contains(b.start, b.end, theta, tol))
    }
}

fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    let mut f_lo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return mid;
        }
        if (fm > 0.0) == (f_lo > 0.0) {
            lo = mid;
            f_lo = fm;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Locate all solutions of `Δ = ±2` and assemble bands and gaps.
///
/// The scan runs over `[θ_s, θ_s + 2π]` with `θ_s` a point where `|Δ|` is
/// small, so no solution sits at the ends. Critical points of `Δ` (sign
/// changes of the analytic derivative) split it into monotone pieces;
/// simple solutions are sign changes of `Δ ∓ 2` on a piece, double solutions
/// are critical points with `|Δ ∓ 2| < DOUBLE_ROOT_TOL`.
pub fn band_structure(alpha: &[Complex64], grid_per_period: usize) -> Result<BandStructure> {
    crate::bijection::check_disk(alpha)?;
    let p = alpha.len();
    if p == 0 {
        return Err(Error::InvalidParameters("period must be at least 1".into()));
    }
    if grid_per_period < 4 {
        return Err(Error::InvalidParameters("grid must have at least 4 points per period".into()));
    }
    let grid = grid_per_period * p;
    let h = TAU / grid as f64;
    let delta = |t: f64| discriminant_and_derivative(alpha, t).0.re;
    let ddelta = |t: f64| discriminant_and_derivative(alpha, t).1.re;

    let coarse = 64 * p;
    let start = (0..coarse)
        .map(|k| k as f64 * TAU / coarse as f64)
        .min_by(|a, b| delta(*a).abs().total_cmp(&delta(*b).abs()))
        .expect("non-empty");

    let ts: Vec<f64> = (0..=grid).map(|k| start + k as f64 * h).collect();
    let dv: Vec<f64> = ts.iter().map(|&t| ddelta(t)).collect();

    // Piece boundaries: scan ends plus refined critical points.
    let mut cuts = vec![ts[0]];
    for k in 0..grid {
        if dv[k] == 0.0 {
            if k > 0 {
                cuts.push(ts[k]);
            }
        } else if dv[k + 1] != 0.0 && (dv[k] > 0.0) != (dv[k + 1] > 0.0) {
            cuts.push(bisect(ddelta, ts[k], ts[k + 1]));
        }
    }
    cuts.push(ts[grid]);

    let mut roots: Vec<(f64, i8, u8)> = Vec::new(); // (extended θ, extended sign, multiplicity)
    let values: Vec<f64> = cuts.iter().map(|&t| delta(t)).collect();
    let mut pinned = vec![0i8; cuts.len()];
    for (i, (&t, &v)) in cuts.iter().zip(&values).enumerate().skip(1).take(cuts.len() - 2) {
        for sign in [1i8, -1] {
            if (v - 2.0 * sign as f64).abs() < DOUBLE_ROOT_TOL {
                roots.push((t, sign, 2));
                pinned[i] = sign;
            }
        }
    }
    for sign in [1i8, -1] {
        let target = 2.0 * sign as f64;
        for i in 0..cuts.len() - 1 {
            if pinned[i] == sign || pinned[i + 1] == sign {
                continue;
            }
            let (a, b) = (values[i] - target, values[i + 1] - target);
            if a == 0.0 {
                if i > 0 {
                    roots.push((cuts[i], sign, 1));
                }
                continue;
            }
            if b != 0.0 && (a > 0.0) != (b > 0.0) {
                let r = bisect(|t| delta(t) - target, cuts[i], cuts[i + 1]);
                roots.push((r, sign, 1));
            }
        }
    }

    let odd = p % 2 == 1;
    let mut edges: Vec<Edge> = roots
        .into_iter()
        .map(|(t, sign, multiplicity)| {
            let turns = (t / TAU).floor();
            let mut theta = t - turns * TAU;
            if theta >= TAU - 1e-14 {
                theta = 0.0;
            }
            // Past 2π the continued branch has the opposite sign for odd p.
            let flip = odd && (turns as i64) % 2 != 0;
            Edge {
                theta,
                sign: if flip { -sign } else { sign },
                multiplicity,
            }
        })
        .collect();
    edges.sort_by(|a, b| a.theta.total_cmp(&b.theta));

    let total: usize = edges.iter().map(|e| e.multiplicity as usize).sum();
    if total != 2 * p {
        return Err(Error::RootCountMismatch {
            target: 2.0,
            found: total,
            expected: 2 * p,
        });
    }
    if !odd {
        // The fixed branch only splits the count evenly by sign for even p.
        for (sign, target) in [(1i8, 2.0), (-1, -2.0)] {
            let found: usize = edges
                .iter()
                .filter(|e| e.sign == sign)
                .map(|e| e.multiplicity as usize)
                .sum();
            if found != p {
                return Err(Error::RootCountMismatch {
                    target,
                    found,
                    expected: p,
                });
            }
        }
    }

    let (bands, gaps) = assemble(alpha, &edges);
    Ok(BandStructure {
        p,
        edges,
        bands,
        gaps,
        grid,
    })
}

fn assemble(alpha: &[Complex64], edges: &[Edge]) -> (Vec<Band>, Vec<Gap>) {
    // Edge multiset with double roots repeated; arc k runs from flat[k] to
    // flat[k + 1] (the last one wraps).
    let flat: Vec<(f64, i8)> = edges
        .iter()
        .flat_map(|e| std::iter::repeat_n((e.theta, e.sign), e.multiplicity as usize))
        .collect();
    let n = flat.len();
    let arc = |k: usize| -> (f64, f64) {
        let a = flat[k].0;
        let b = if k + 1 < n { flat[k + 1].0 } else { flat[0].0 + TAU };
        (a, b)
    };
    let (first, is_band) = (0..n)
        .find_map(|k| {
            let (a, b) = arc(k);
            (b - a > 0.0).then(|| {
                let mid = 0.5 * (a + b);
                let d = discriminant_and_derivative(alpha, mid.rem_euclid(TAU)).0.re;
                (k, d.abs() <= 2.0)
            })
        })
        .unwrap_or((0, true));
    let band_parity = if is_band { first % 2 } else { (first + 1) % 2 };

    let mut bands = Vec::new();
    let mut gaps = Vec::new();
    for (k, edge) in flat.iter().enumerate().take(n) {
        let (a, b) = arc(k);
        if k % 2 == band_parity {
            bands.push(Band {
                start: a,
                end: b,
                sigma: edge.1,
            });
        } else {
            gaps.push(Gap {
                start: a,
                end: b,
                closed: b - a <= 0.0,
            });
        }
    }
    (bands, gaps)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    const ZERO: Complex64 = Complex64::new(0.0, 0.0);

    #[test]
    fn zero_coefficients_period_two() {
        let s = band_structure(&[ZERO; 2], 1024).unwrap();
        assert_eq!(s.plus_solutions().len(), 2);
        assert_eq!(s.minus_solutions().len(), 2);
        assert_abs_diff_eq!(s.plus_solutions()[0], 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(s.minus_solutions()[0], PI, epsilon = 1e-10);
        assert!(s.gaps.iter().all(|g| g.closed));
        let covered: f64 = s.bands.iter().map(|b| b.end - b.start).sum();
        assert_abs_diff_eq!(covered, TAU, epsilon = 1e-9);
    }

    #[test]
    fn zero_coefficient_period_one() {
        let s = band_structure(&[ZERO], 1024).unwrap();
        assert_eq!(s.bands.len(), 1);
        assert_abs_diff_eq!(s.bands[0].end - s.bands[0].start, TAU, epsilon = 1e-9);
    }

    #[test]
    fn period_one_open_gap() {
        // Δ = 2 cos(θ/2) / sqrt(1 - a²) ... the gap sits around θ = 0.
        let a = 0.5;
        let s = band_structure(&[Complex64::new(a, 0.0)], 2048).unwrap();
        assert_eq!(s.bands.len(), 1);
        assert_eq!(s.gaps.len(), 1);
        let g = s.gaps[0];
        assert!(!g.closed);
        assert!(arc_contains(g.start, g.end, 0.0, 0.0));
        // Edges solve |Δ| = 2.
        for e in &s.edges {
            let d = discriminant_and_derivative(&[Complex64::new(a, 0.0)], e.theta).0.re;
            assert_abs_diff_eq!(d.abs(), 2.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn bands_and_gaps_tile_the_circle() {
        let alpha = [
            Complex64::new(0.3, 0.2),
            Complex64::new(-0.4, 0.1),
            Complex64::new(0.1, -0.5),
        ];
        let s = band_structure(&alpha, 4096).unwrap();
        assert_eq!(s.bands.len(), 3);
        let total: f64 = s.bands.iter().map(|b| b.end - b.start).sum::<f64>()
            + s.gaps.iter().map(|g| g.end - g.start).sum::<f64>();
        assert_abs_diff_eq!(total, TAU, epsilon = 1e-12);
        for b in &s.bands {
            let mid = 0.5 * (b.start + b.end);
            let d = discriminant_and_derivative(&alpha, mid).0;
            // Continued branch: only the modulus is branch independent.
            assert!(d.re.abs() <= 2.0);
        }
    }
}
