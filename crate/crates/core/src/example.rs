//! Closed forms for the period-two family `c_n = (-1)^n c`,
//! `m_{2n-1} = (1 - b₁)/2`, `m_{2n} = (1 - b₂)/2`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::{PI, TAU};

use crate::bijection::SequencePair;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExampleParams {
    pub c: f64,
    pub b1: f64,
    pub b2: f64,
}

/// Band edges `θ₁⁺ ≤ θ₁⁻ ≤ θ₂⁻ ≤ θ₂⁺`; the bands are `[θ₁⁺, θ₁⁻]` and
/// `[θ₂⁻, θ₂⁺]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExampleBands {
    pub theta1_plus: f64,
    pub theta1_minus: f64,
    pub theta2_plus: f64,
    pub theta2_minus: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExampleMass {
    pub point: Complex64,
    pub theta: f64,
    pub mass: f64,
}

impl ExampleParams {
    pub fn new(c: f64, b1: f64, b2: f64) -> Result<Self> {
        if !c.is_finite() || !(b1.abs() < 1.0) || !(b2.abs() < 1.0) {
            return Err(Error::InvalidParameters(format!(
                "need finite c and |b1|, |b2| < 1, got c = {c}, b1 = {b1}, b2 = {b2}"
            )));
        }
        Ok(ExampleParams { c, b1, b2 })
    }

    /// `√((1 - b₁²)(1 - b₂²))`.
    fn s(&self) -> f64 {
        ((1.0 - self.b1 * self.b1) * (1.0 - self.b2 * self.b2)).sqrt()
    }

    /// `(1 + c²) cos θ + b₁b₂ - c²`.
    fn numerator(&self, theta: f64) -> f64 {
        let c2 = self.c * self.c;
        (1.0 + c2) * theta.cos() + self.b1 * self.b2 - c2
    }

    /// The first `2 * periods` entries of the `(c, m)` pair.
    pub fn pair(&self, periods: usize) -> Result<SequencePair> {
        let n = 2 * periods;
        let c: Vec<f64> = (1..=n).map(|k| if k % 2 == 0 { self.c } else { -self.c }).collect();
        let mut m = Vec::with_capacity(n + 1);
        m.push(0.0);
        for k in 1..=n {
            let b = if k % 2 == 1 { self.b1 } else { self.b2 };
            m.push(0.5 * (1.0 - b));
        }
        SequencePair::from_c_m(c, m, Some(2))
    }

    /// `(α₀, α₁) = ((b₁ + ic)/(1 + ic), (b₂ - ic)/(1 + ic))`.
    pub fn alpha(&self) -> (Complex64, Complex64) {
        let den = Complex64::new(1.0, self.c);
        (Complex64::new(self.b1, self.c) / den, Complex64::new(self.b2, -self.c) / den)
    }

    /// `Δ(e^{iθ}) = 2[(1 + c²) cos θ + b₁b₂ - c²] / √((1 - b₁²)(1 - b₂²))`.
    pub fn discriminant(&self, theta: f64) -> f64 {
        2.0 * self.numerator(theta) / self.s()
    }

    /// Solutions of `Δ = ±2` as angles.
    ///
    /// `cos θ₁⁺ = (s + c² - b₁b₂)/(1 + c²)` and
    /// `cos θ₁⁻ = (c² - s - b₁b₂)/(1 + c²)`, evaluated through the equivalent
    /// forms `1 - cos θ₁⁺ = (b₁ + b₂)² / ((1 + c²)(1 + b₁b₂ + s))` and
    /// `1 + cos θ₁⁻ = (2c² + (b₁ - b₂)²/(1 - b₁b₂ + s)) / (1 + c²)` so that
    /// nearly closed gaps keep full accuracy.
    pub fn bands(&self) -> ExampleBands {
        let (c2, s) = (self.c * self.c, self.s());
        let (b1, b2) = (self.b1, self.b2);
        let one_minus_plus = (b1 + b2).powi(2) / ((1.0 + c2) * (1.0 + b1 * b2 + s));
        let one_plus_minus = (2.0 * c2 + (b1 - b2).powi(2) / (1.0 - b1 * b2 + s)) / (1.0 + c2);
        // 1 - cos θ = 2 sin²(θ/2), 1 + cos θ = 2 cos²(θ/2).
        let theta1_plus = 2.0 * (0.5 * one_minus_plus).sqrt().min(1.0).asin();
        let theta1_minus = PI - 2.0 * (0.5 * one_plus_minus).sqrt().min(1.0).asin();
        ExampleBands {
            theta1_plus,
            theta1_minus,
            theta2_plus: TAU - theta1_plus,
            theta2_minus: TAU - theta1_minus,
        }
    }

    /// The weight on the bands; `OffBand` outside their interiors.
    pub fn weight(&self, theta: f64) -> Result<f64> {
        let s = self.s();
        let num = s * s - self.numerator(theta).powi(2);
        if !(num > 0.0) {
            return Err(Error::OffBand(theta));
        }
        let den = ((1.0 + self.b2) * (theta.sin() + self.c * (1.0 - theta.cos()))).abs();
        if den == 0.0 {
            return Err(Error::DenominatorVanished(2));
        }
        Ok(num.sqrt() / den)
    }

    /// `w₁ = 1`.
    pub fn w1(&self) -> Complex64 {
        Complex64::new(1.0, 0.0)
    }

    /// `w₂ = -(1 + ic)/(1 - ic) = ((c² - 1) - 2ic)/(1 + c²)`.
    pub fn w2(&self) -> Complex64 {
        let c2 = self.c * self.c;
        Complex64::new((c2 - 1.0) / (1.0 + c2), -2.0 * self.c / (1.0 + c2))
    }

    /// Pure points: `(b₁ + b₂)/(1 + b₂)` at `w₁` when `b₁ + b₂ > 0`, and
    /// `(b₂ - b₁)/(1 + b₂)` at `w₂` when `b₂ - b₁ > 0`.
    pub fn masses(&self) -> [Option<ExampleMass>; 2] {
        let (b1, b2) = (self.b1, self.b2);
        let at = |point: Complex64, mass: f64| ExampleMass {
            point,
            theta: point.arg().rem_euclid(TAU),
            mass,
        };
        [
            (b1 + b2 > 0.0).then(|| at(self.w1(), (b1 + b2) / (1.0 + b2))),
            (b2 - b1 > 0.0).then(|| at(self.w2(), (b2 - b1) / (1.0 + b2))),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bijection::pair_to_verblunsky;
    use approx::assert_abs_diff_eq;

    #[test]
    fn alpha_values() {
        let (a0, a1) = ExampleParams::new(0.0, 0.3, -0.6).unwrap().alpha();
        assert_eq!((a0, a1), (Complex64::new(0.3, 0.0), Complex64::new(-0.6, 0.0)));
        let (a0, a1) = ExampleParams::new(1.0, 0.5, 0.0).unwrap().alpha();
        assert!((a0 - Complex64::new(0.75, 0.25)).norm() < 1e-15);
        assert!((a1 - Complex64::new(-0.5, -0.5)).norm() < 1e-15);
    }

    #[test]
    fn alpha_matches_pair() {
        let p = ExampleParams::new(-0.5, 0.7, -0.3).unwrap();
        let v = pair_to_verblunsky(&p.pair(3).unwrap()).unwrap();
        let (a0, a1) = p.alpha();
        for (k, a) in v.alpha().iter().enumerate() {
            let expect = if k % 2 == 0 { a0 } else { a1 };
            assert!((a - expect).norm() < 1e-13);
        }
    }

    #[test]
    fn bands_match_arccos() {
        let p = ExampleParams::new(1.0, 0.3, 0.5).unwrap();
        let b = p.bands();
        let s = (0.91f64 * 0.75).sqrt();
        assert_abs_diff_eq!(b.theta1_plus, ((s + 1.0 - 0.15) / 2.0).acos(), epsilon = 1e-12);
        assert_abs_diff_eq!(b.theta1_minus, ((1.0 - s - 0.15) / 2.0).acos(), epsilon = 1e-12);
        assert_abs_diff_eq!(p.discriminant(b.theta1_plus), 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(p.discriminant(b.theta1_minus), -2.0, epsilon = 1e-12);
    }

    #[test]
    fn masses_reference_case() {
        let p = ExampleParams::new(1.0, 0.3, 0.5).unwrap();
        let [m1, m2] = p.masses();
        assert_abs_diff_eq!(m1.unwrap().mass, 8.0 / 15.0, epsilon = 1e-15);
        let m2 = m2.unwrap();
        assert_abs_diff_eq!(m2.mass, 2.0 / 15.0, epsilon = 1e-15);
        assert!((m2.point - Complex64::new(0.0, -1.0)).norm() < 1e-15);
        assert_abs_diff_eq!(m2.theta, 1.5 * PI, epsilon = 1e-15);
    }

    #[test]
    fn strict_conditions() {
        let p = ExampleParams::new(1.0, 0.0, 0.0).unwrap();
        assert_eq!(p.masses(), [None, None]);
        let p = ExampleParams::new(1.0, 0.4, 0.4).unwrap();
        let [m1, m2] = p.masses();
        assert_abs_diff_eq!(m1.unwrap().mass, 0.8 / 1.4, epsilon = 1e-15);
        assert!(m2.is_none());
    }

    #[test]
    fn w2_is_rotation_point() {
        for c in [-1.0, 0.0, 0.5, 3.0] {
            let p = ExampleParams::new(c, 0.0, 0.0).unwrap();
            let expect = -Complex64::new(1.0, c) / Complex64::new(1.0, -c);
            assert!((p.w2() - expect).norm() < 1e-15);
        }
    }

    #[test]
    fn rejects_invalid() {
        assert!(ExampleParams::new(0.0, 1.0, 0.0).is_err());
        assert!(ExampleParams::new(f64::NAN, 0.0, 0.0).is_err());
    }
}
