//! Spectral decomposition for `p`-periodic Verblunsky coefficients: bands and
//! gaps from the discriminant, candidate points, pure-point masses and the
//! absolutely continuous weight.

mod bands;
mod characterize;
mod points;
mod transfer;
mod weight;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use bands::{band_structure, Band, BandStructure, Edge, Gap, DEFAULT_GRID_PER_PERIOD, DOUBLE_ROOT_TOL};
pub use characterize::{is_periodic_pair, parallel_lines_check, PeriodicityReport, PARALLEL_TOL, PERIODICITY_TOL};
pub use points::{
    gap_candidates, pure_point_mass, tau_w, truncated_series_mass, Candidate, MassReport, PurePoint, CANDIDATE_TOL,
    NO_MASS_TOL,
};
pub use transfer::{discriminant, transfer_product, TransferMatrix, REAL_TOL};
pub use weight::{ac_weight, band_integrals, OFF_BAND_EPS};

use crate::error::{Error, Result};

/// Tolerance in `θ` for placing a candidate in a gap closure.
const CONTAINMENT_TOL: f64 = 1e-9;

/// Absolute tolerance for each band integral of `w / 2π`.
const BAND_INTEGRAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PeriodicSpectrum {
    pub p: usize,
    pub bands: Vec<Band>,
    pub gaps: Vec<Gap>,
    pub edges: Vec<Edge>,
    pub plus_solutions: Vec<f64>,
    pub minus_solutions: Vec<f64>,
    pub candidates: Vec<Candidate>,
    /// For each candidate, the index of the gap whose closure holds it.
    pub candidate_gaps: Vec<usize>,
    pub pure_points: Vec<PurePoint>,
    /// `∫ w dθ / 2π` over each band.
    pub band_mass: Vec<f64>,
    pub ac_mass: f64,
    /// `ac_mass` plus all pure-point masses; `1` for a probability measure.
    pub total_mass: f64,
    pub grid: usize,
}

/// Bands, gaps, candidates, pure points and the a.c. mass of the measure
/// whose Verblunsky coefficients repeat `alpha`.
pub fn analyze(alpha: &[Complex64], grid_per_period: usize) -> Result<PeriodicSpectrum> {
    let structure = band_structure(alpha, grid_per_period)?;
    let candidates = gap_candidates(alpha, grid_per_period)?;

    let mut candidate_gaps = Vec::with_capacity(candidates.len());
    let mut pure_points = Vec::new();
    for c in &candidates {
        let gap = structure.gap_containing(c.theta, CONTAINMENT_TOL).ok_or_else(|| {
            Error::InternalInvariant(format!("candidate at theta = {} lies in no gap closure", c.theta))
        })?;
        candidate_gaps.push(gap);
        if let Some(mass) = pure_point_mass(alpha, c.point)?.mass {
            pure_points.push(PurePoint {
                theta: c.theta,
                point: c.point,
                mass,
            });
        }
    }

    let band_mass: Vec<f64> = band_integrals(alpha, &structure.bands, BAND_INTEGRAL_TOL)
        .iter()
        .map(|i| i.value)
        .collect();
    let ac_mass: f64 = band_mass.iter().sum();
    let total_mass = ac_mass + pure_points.iter().map(|p| p.mass).sum::<f64>();

    Ok(PeriodicSpectrum {
        p: structure.p,
        plus_solutions: structure.plus_solutions(),
        minus_solutions: structure.minus_solutions(),
        bands: structure.bands,
        gaps: structure.gaps,
        edges: structure.edges,
        candidates,
        candidate_gaps,
        pure_points,
        band_mass,
        ac_mass,
        total_mass,
        grid: structure.grid,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn period_one_with_mass_at_one() {
        let s = analyze(&[Complex64::new(0.5, 0.0)], 1024).unwrap();
        assert_eq!(s.pure_points.len(), 1);
        assert_abs_diff_eq!(s.pure_points[0].mass, 2.0 / 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.total_mass, 1.0, epsilon = 1e-8);
    }

    #[test]
    fn lebesgue_has_no_points() {
        let s = analyze(&[Complex64::new(0.0, 0.0); 3], 512).unwrap();
        assert!(s.pure_points.is_empty());
        assert_abs_diff_eq!(s.ac_mass, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn mass_sums_to_one_for_generic_period_three() {
        let alpha = [
            Complex64::new(0.3, 0.2),
            Complex64::new(-0.4, 0.1),
            Complex64::new(0.1, -0.5),
        ];
        let s = analyze(&alpha, 2048).unwrap();
        assert_abs_diff_eq!(s.total_mass, 1.0, epsilon = 1e-7);
    }
}
