//! Absolutely continuous weight on the bands.

use num_complex::Complex64;
use std::f64::consts::TAU;

use super::bands::Band;
use super::transfer::{discriminant_and_derivative, real_part_checked};
use crate::bijection::check_disk;
use crate::error::{Error, Result};
use crate::poly::szego_eval;
use crate::quad::{integrate_sqrt_edges, Integral};

/// `|Δ|` must stay below `2 - OFF_BAND_EPS` for [`ac_weight`].
pub const OFF_BAND_EPS: f64 = 1e-12;

const DENOM_EPS: f64 = 1e-300;

/// `(4 - Δ², |Im(e^{-ipθ/2} κ_p φ_p)|)`.
fn parts(alpha: &[Complex64], theta: f64) -> Result<(f64, f64, f64)> {
    let p = alpha.len();
    let t = theta.rem_euclid(TAU);
    let delta = real_part_checked(discriminant_and_derivative(alpha, t).0, t)?;
    let z = Complex64::from_polar(1.0, t);
    let s = szego_eval(alpha, z, p)?;
    let im = (Complex64::from_polar(1.0, -0.5 * p as f64 * t) * s.orthonormal()).im.abs();
    Ok((delta, 4.0 - delta * delta, im))
}

/// `w(θ) = √(4 - Δ²) / (2 |Im(e^{-ipθ/2} φ_p(e^{iθ}))|)` with `φ_p`
/// orthonormal, for `e^{iθ}` strictly inside a band.
pub fn ac_weight(alpha: &[Complex64], theta: f64) -> Result<f64> {
    check_disk(alpha)?;
    if alpha.is_empty() {
        return Err(Error::InvalidParameters("period must be at least 1".into()));
    }
    let (delta, gap, im) = parts(alpha, theta)?;
    if delta.abs() >= 2.0 - OFF_BAND_EPS {
        return Err(Error::OffBand(theta));
    }
    if im < DENOM_EPS {
        return Err(Error::DenominatorVanished(alpha.len()));
    }
    Ok(gap.sqrt() / (2.0 * im))
}

/// As [`ac_weight`] but `0` off the bands, for integration right up to the
/// band edges.
pub(crate) fn ac_weight_or_zero(alpha: &[Complex64], theta: f64) -> f64 {
    match parts(alpha, theta) {
        Ok((_, gap, im)) if gap > 0.0 && im > DENOM_EPS => gap.sqrt() / (2.0 * im),
        _ => 0.0,
    }
}

/// `∫_B w(θ) dθ / 2π` over each band, with square-root substitution at both
/// edges of every band.
pub fn band_integrals(alpha: &[Complex64], bands: &[Band], abs_tol: f64) -> Vec<Integral> {
    bands
        .iter()
        .map(|b| {
            let mut r = integrate_sqrt_edges(|t| ac_weight_or_zero(alpha, t), b.start, b.end, abs_tol * TAU, 0.0, 2000);
            r.value /= TAU;
            r.error /= TAU;
            r
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn lebesgue_weight_is_one() {
        let alpha = [Complex64::new(0.0, 0.0)];
        for k in 1..20 {
            let t = k as f64 * 0.3;
            assert_abs_diff_eq!(ac_weight(&alpha, t).unwrap(), 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn off_band_rejected() {
        // α = 1/2, period one: the gap contains θ = 0.
        let alpha = [Complex64::new(0.5, 0.0)];
        assert!(matches!(ac_weight(&alpha, 0.01), Err(Error::OffBand(_))));
        assert!(ac_weight(&alpha, 3.0).unwrap() > 0.0);
    }
}
