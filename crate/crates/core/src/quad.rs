//! Adaptive Gauss–Kronrod (7/15) integration.

/// Kronrod abscissae on `[0, 1]`, largest first; odd positions are the
/// Gauss nodes.
const XGK: [f64; 8] = [
    0.9914553711208126,
    0.9491079123427585,
    0.8648644233597691,
    0.7415311855993944,
    0.5860872354676911,
    0.4058451513773972,
    0.2077849550078985,
    0.0,
];

const WGK: [f64; 8] = [
    0.022935322010529224,
    0.06309209262997856,
    0.10479001032225018,
    0.14065325971552592,
    0.1690047266392679,
    0.1903505780647854,
    0.20443294007529889,
    0.20948214108472782,
];

/// Gauss weights for `XGK[1], XGK[3], XGK[5], XGK[7]`.
const WG: [f64; 4] = [
    0.1294849661688697,
    0.27970539148927664,
    0.3818300505051189,
    0.4179591836734694,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub evaluations: usize,
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let half = 0.5 * (b - a);
    let center = 0.5 * (a + b);
    let fc = f(center);
    let mut kronrod = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let dx = half * XGK[i];
        let pair = f(center - dx) + f(center + dx);
        kronrod += WGK[i] * pair;
        if i % 2 == 1 {
            gauss += WG[i / 2] * pair;
        }
    }
    (kronrod * half, ((kronrod - gauss) * half).abs())
}

/// `∫_a^b f` by bisecting the interval with the largest error estimate until
/// the total estimate drops below `max(abs_tol, rel_tol · |value|)` or
/// `max_intervals` is reached.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64, max_intervals: usize) -> Integral {
    if a == b {
        return Integral {
            value: 0.0,
            error: 0.0,
            evaluations: 0,
        };
    }
    let (v, e) = gk15(&f, a, b);
    let mut pieces = vec![(a, b, v, e)];
    let mut evaluations = 15;
    loop {
        let value: f64 = pieces.iter().map(|p| p.2).sum();
        let error: f64 = pieces.iter().map(|p| p.3).sum();
        if error <= abs_tol.max(rel_tol * value.abs()) || pieces.len() >= max_intervals {
            return Integral {
                value,
                error,
                evaluations,
            };
        }
        let worst = pieces
            .iter()
            .enumerate()
            .max_by(|x, y| x.1 .3.total_cmp(&y.1 .3))
            .map(|(i, _)| i)
            .expect("non-empty");
        let (lo, hi, _, _) = pieces.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            // Cannot split further at this precision.
            return Integral {
                value,
                error,
                evaluations,
            };
        }
        let (v1, e1) = gk15(&f, lo, mid);
        let (v2, e2) = gk15(&f, mid, hi);
        evaluations += 30;
        pieces.push((lo, mid, v1, e1));
        pieces.push((mid, hi, v2, e2));
    }
}

/// `∫_a^b f` for integrands that behave like `(θ - a)^{±1/2}` and
/// `(b - θ)^{±1/2}` at the ends: the interval is split at its midpoint and
/// `θ = a + u²`, `θ = b - u²` substituted on the two halves.
pub fn integrate_sqrt_edges<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64, rel_tol: f64, max_intervals: usize) -> Integral {
    let mid = 0.5 * (a + b);
    let left = integrate(
        |u| 2.0 * u * f(a + u * u),
        0.0,
        (mid - a).sqrt(),
        0.5 * abs_tol,
        rel_tol,
        max_intervals,
    );
    let right = integrate(
        |u| 2.0 * u * f(b - u * u),
        0.0,
        (b - mid).sqrt(),
        0.5 * abs_tol,
        rel_tol,
        max_intervals,
    );
    Integral {
        value: left.value + right.value,
        error: left.error + right.error,
        evaluations: left.evaluations + right.evaluations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn polynomial_exact() {
        let r = integrate(|x| x.powi(5) - 3.0 * x * x, -1.0, 2.0, 1e-14, 0.0, 1);
        assert_abs_diff_eq!(r.value, 63.0 / 6.0 - 9.0, epsilon = 1e-13);
    }

    #[test]
    fn adaptive_oscillatory() {
        let r = integrate(|x| (20.0 * x).sin(), 0.0, 3.0, 1e-12, 0.0, 200);
        assert_abs_diff_eq!(r.value, (1.0 - 60f64.cos()) / 20.0, epsilon = 1e-11);
    }

    #[test]
    fn square_root_edges() {
        // ∫_0^1 sqrt(x(1-x)) = π/8 and ∫_0^1 1/sqrt(x(1-x)) = π.
        let r = integrate_sqrt_edges(|x| (x * (1.0 - x)).sqrt(), 0.0, 1.0, 1e-12, 0.0, 100);
        assert_abs_diff_eq!(r.value, std::f64::consts::PI / 8.0, epsilon = 1e-11);
        let r = integrate_sqrt_edges(|x| 1.0 / (x * (1.0 - x)).sqrt(), 0.0, 1.0, 1e-12, 0.0, 100);
        assert_abs_diff_eq!(r.value, std::f64::consts::PI, epsilon = 1e-10);
    }
}
