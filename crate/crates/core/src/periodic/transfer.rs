//! Transfer matrices and the discriminant.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

type Mat = [[Complex64; 2]; 2];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Imaginary part of `Δ` tolerated before it is reported, relative to
/// `max(1, |Δ|)`.
pub const REAL_TOL: f64 = 1e-10;

/// `A(α_j, z) = (1 - |α_j|²)^{-1/2} [[z, -conj(α_j)], [-α_j z, 1]]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransferMatrix {
    pub entries: Mat,
    pub index: usize,
    pub z: Complex64,
}

impl TransferMatrix {
    pub fn new(alpha: Complex64, index: usize, z: Complex64) -> Self {
        let s = 1.0 / (1.0 - alpha.norm_sqr()).sqrt();
        TransferMatrix {
            entries: [[z * s, -alpha.conj() * s], [-alpha * z * s, Complex64::new(s, 0.0)]],
            index,
            z,
        }
    }

    pub fn det(&self) -> Complex64 {
        let m = &self.entries;
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
    }
}

fn mul(a: &Mat, b: &Mat) -> Mat {
    let mut r = [[ZERO; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            r[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    r
}

fn add(a: &Mat, b: &Mat) -> Mat {
    [[a[0][0] + b[0][0], a[0][1] + b[0][1]], [a[1][0] + b[1][0], a[1][1] + b[1][1]]]
}

/// `T_p(z) = A(α_{p-1}, z) ⋯ A(α_0, z)`.
pub fn transfer_product(alpha: &[Complex64], z: Complex64) -> Mat {
    let mut t = [[Complex64::new(1.0, 0.0), ZERO], [ZERO, Complex64::new(1.0, 0.0)]];
    for (j, a) in alpha.iter().enumerate() {
        t = mul(&TransferMatrix::new(*a, j, z).entries, &t);
    }
    t
}

/// `e^{-ipθ/2} Tr T_p(e^{iθ})` and its derivative in `θ`, both complex.
///
/// For `θ` outside `[0, 2π)` this is the analytic continuation in `θ`, which
/// for odd `p` differs in sign from the principal value at `θ mod 2π`.
pub(crate) fn discriminant_and_derivative(alpha: &[Complex64], theta: f64) -> (Complex64, Complex64) {
    let z = Complex64::from_polar(1.0, theta);
    let mut t = [[Complex64::new(1.0, 0.0), ZERO], [ZERO, Complex64::new(1.0, 0.0)]];
    let mut dt = [[ZERO; 2]; 2];
    for (j, a) in alpha.iter().enumerate() {
        let s = 1.0 / (1.0 - a.norm_sqr()).sqrt();
        let m = TransferMatrix::new(*a, j, z).entries;
        // d/dθ of the z entries: dz/dθ = i z.
        let dm = [[I * z * s, ZERO], [-a * I * z * s, ZERO]];
        dt = add(&mul(&dm, &t), &mul(&m, &dt));
        t = mul(&m, &t);
    }
    let p = alpha.len() as f64;
    let phase = Complex64::from_polar(1.0, -0.5 * p * theta);
    let tr = t[0][0] + t[1][1];
    let dtr = dt[0][0] + dt[1][1];
    (phase * tr, phase * (dtr - I * 0.5 * p * tr))
}

pub(crate) fn real_part_checked(value: Complex64, theta: f64) -> Result<f64> {
    if value.im.abs() > REAL_TOL * value.re.abs().max(1.0) {
        return Err(Error::NonRealDiscriminant {
            theta,
            residual: value.im.abs(),
        });
    }
    Ok(value.re)
}

/// `Δ(e^{iθ}) = e^{-ipθ/2} Tr T_p(e^{iθ})` with the branch fixed by
/// `θ ∈ [0, 2π)` (other `θ` are reduced first).
pub fn discriminant(alpha: &[Complex64], theta: f64) -> Result<f64> {
    crate::bijection::check_disk(alpha)?;
    if alpha.is_empty() {
        return Err(Error::InvalidParameters("period must be at least 1".into()));
    }
    let t = theta.rem_euclid(std::f64::consts::TAU);
    let (d, _) = discriminant_and_derivative(alpha, t);
    real_part_checked(d, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn zero_coefficients() {
        let alpha = [ZERO; 2];
        for k in 0..50 {
            let t = k as f64 * 0.13;
            assert_abs_diff_eq!(discriminant(&alpha, t).unwrap(), 2.0 * t.cos(), epsilon = 1e-14);
        }
    }

    #[test]
    fn determinant_is_z() {
        let z = Complex64::from_polar(1.0, 0.7);
        let m = TransferMatrix::new(Complex64::new(0.3, -0.5), 0, z);
        assert!((m.det() - z).norm() < 1e-15);
    }

    #[test]
    fn real_for_period_one() {
        let alpha = [Complex64::new(0.5, 0.0)];
        for k in 0..100 {
            let t = k as f64 * 0.0628;
            let (d, _) = discriminant_and_derivative(&alpha, t);
            assert!(d.im.abs() < 1e-12);
        }
    }

    #[test]
    fn derivative_matches_difference() {
        let alpha = [Complex64::new(0.2, 0.4), Complex64::new(-0.6, 0.1), Complex64::new(0.0, -0.3)];
        let (t, h) = (1.1, 1e-6);
        let (_, d) = discriminant_and_derivative(&alpha, t);
        let fd = (discriminant_and_derivative(&alpha, t + h).0 - discriminant_and_derivative(&alpha, t - h).0) / (2.0 * h);
        assert!((d - fd).norm() < 1e-7);
    }
}
