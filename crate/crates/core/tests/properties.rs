use num_complex::Complex64;
use opuc_core::example::ExampleParams;
use opuc_core::io::{pair_json, parse_sequence, SequenceInput};
use opuc_core::measure::quadrature;
use opuc_core::periodic::{discriminant, pure_point_mass, truncated_series_mass};
use opuc_core::poly::{r_poly, w_eval};
use opuc_core::transforms::{conjugate_pair, unfold_alternating};
use opuc_core::zeros::{interlacing_margin, w_zeros, w_zeros_all_levels, DEFAULT_TOL};
use opuc_core::{pair_to_verblunsky, verblunsky_to_pair, SequencePair};
use proptest::prelude::*;

fn pair_strategy(max_len: usize) -> impl Strategy<Value = SequencePair> {
    (1..=max_len)
        .prop_flat_map(|n| {
            (
                prop::collection::vec(-0.5f64..0.5, n),
                prop::collection::vec(0.25f64..0.75, n),
            )
        })
        .prop_map(|(c, m)| {
            let m = std::iter::once(0.0).chain(m).collect();
            SequencePair::from_c_m(c, m, None).unwrap()
        })
}

fn disk_strategy(max_len: usize) -> impl Strategy<Value = Vec<Complex64>> {
    prop::collection::vec((0.0f64..0.8, 0.0f64..std::f64::consts::TAU), 1..=max_len)
        .prop_map(|v| v.into_iter().map(|(r, t)| Complex64::from_polar(r, t)).collect())
}

fn alternating_pair(c: f64, b1: f64, b2: f64, periods: usize) -> SequencePair {
    ExampleParams::new(c, b1, b2).unwrap().pair(periods).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pair_round_trip(pair in pair_strategy(30)) {
        let v = pair_to_verblunsky(&pair).unwrap();
        for t in v.tau() {
            prop_assert!((t.norm() - 1.0).abs() < 1e-14);
        }
        for a in v.alpha() {
            prop_assert!(a.norm() < 1.0);
        }
        let back = verblunsky_to_pair(v.alpha()).unwrap();
        for (x, y) in back.c().iter().zip(pair.c()) {
            prop_assert!((x - y).abs() < 1e-10);
        }
        for (x, y) in back.m().iter().zip(pair.m()) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn alpha_round_trip(alpha in disk_strategy(20)) {
        let pair = verblunsky_to_pair(&alpha).unwrap();
        prop_assert!(pair.m()[1..].iter().all(|&m| m > 0.0 && m < 1.0));
        let back = pair_to_verblunsky(&pair).unwrap();
        for (a, b) in back.alpha().iter().zip(&alpha) {
            prop_assert!((a - b).norm() < 1e-9);
        }
    }

    #[test]
    fn r_is_self_inversive(pair in pair_strategy(12)) {
        for n in 1..=pair.len() {
            let r = r_poly(&pair, n).unwrap();
            prop_assert_eq!(r.degree(), n);
            prop_assert!(r.self_inversive_residual() < 1e-10 * r.leading().norm().max(1.0));
        }
    }

    #[test]
    fn conjugation_conjugates_r(pair in pair_strategy(10)) {
        let n = pair.len();
        let r = r_poly(&pair, n).unwrap();
        let rc = r_poly(&conjugate_pair(&pair), n).unwrap();
        for (a, b) in r.coeffs.iter().zip(&rc.coeffs) {
            prop_assert!((a.conj() - b).norm() < 1e-12);
        }
    }

    #[test]
    fn zeros_count_and_interlace(pair in pair_strategy(16)) {
        let levels = w_zeros_all_levels(&pair, pair.len(), DEFAULT_TOL).unwrap();
        for (k, z) in levels.iter().enumerate() {
            prop_assert_eq!(z.len(), k + 1);
            for &x in &z.x {
                prop_assert!(w_eval(&pair, k + 1, x).unwrap().abs() < 1e-8);
            }
        }
        for w in levels.windows(2) {
            prop_assert!(interlacing_margin(&w[0], &w[1]).is_some());
        }
    }

    #[test]
    fn conjugate_pair_reflects_zeros(pair in pair_strategy(12)) {
        let n = pair.len();
        let z = w_zeros(&pair, n, DEFAULT_TOL).unwrap();
        let zc = w_zeros(&conjugate_pair(&pair), n, DEFAULT_TOL).unwrap();
        for (a, b) in z.x.iter().zip(zc.x.iter().rev()) {
            prop_assert!((a + b).abs() < 1e-10);
        }
    }

    #[test]
    fn quadrature_is_a_probability(pair in pair_strategy(20)) {
        let q = quadrature(&pair, pair.len()).unwrap();
        prop_assert_eq!(q.len(), pair.len() + 1);
        prop_assert!(q.weights.iter().all(|&w| w > 0.0));
        prop_assert!((q.total() - 1.0).abs() < 1e-10);
        prop_assert!(q.christoffel_residual < 1e-8);
        prop_assert_eq!(q.step_eval(std::f64::consts::TAU).unwrap(), 1.0);
    }

    #[test]
    fn quadrature_matches_moments(pair in pair_strategy(10)) {
        // ψ_n reproduces the moments of μ up to order n - 1: compare two levels.
        let n = pair.len();
        let lo = quadrature(&pair, n).unwrap().moments(n - 1);
        let longer = SequencePair::from_c_m(
            pair.c().iter().chain(&[0.1]).copied().collect(),
            pair.m().iter().chain(&[0.5]).copied().collect(),
            None,
        ).unwrap();
        let hi = quadrature(&longer, n + 1).unwrap().moments(n - 1);
        for (a, b) in lo.iter().zip(&hi) {
            prop_assert!((a - b).norm() < 1e-9);
        }
    }

    #[test]
    fn discriminant_is_real_and_matches(c in -2.0f64..2.0, b1 in -0.9f64..0.9, b2 in -0.9f64..0.9, theta in 0.0f64..std::f64::consts::TAU) {
        let p = ExampleParams::new(c, b1, b2).unwrap();
        let (a0, a1) = p.alpha();
        let d = discriminant(&[a0, a1], theta).unwrap();
        prop_assert!((d - p.discriminant(theta)).abs() < 1e-10 * (1.0 + d.abs()));
    }

    #[test]
    fn masses_match_series(c in -2.0f64..2.0, b1 in -0.8f64..0.8, b2 in -0.8f64..0.8) {
        let p = ExampleParams::new(c, b1, b2).unwrap();
        let (a0, a1) = p.alpha();
        let alpha = [a0, a1];
        for (w, expect) in [(p.w1(), p.masses()[0]), (p.w2(), p.masses()[1])] {
            let report = pure_point_mass(&alpha, w).unwrap();
            match (report.mass, expect) {
                (Some(m), Some(e)) => {
                    prop_assert!((m - e.mass).abs() < 1e-12);
                    let s = truncated_series_mass(&alpha, w, 20_000).unwrap();
                    prop_assert!((s - m).abs() < 1e-8);
                }
                (None, None) => {}
                (got, want) => prop_assert!(
                    (b1 + b2).abs() < 1e-9 || (b2 - b1).abs() < 1e-9,
                    "got {:?}, want {:?}", got, want.map(|e| e.mass)
                ),
            }
        }
    }

    #[test]
    fn unfolding_is_consistent(c in -2.0f64..2.0, b1 in -0.9f64..0.9, b2 in -0.9f64..0.9, periods in 1usize..8) {
        let u = unfold_alternating(&alternating_pair(c, b1, b2, periods)).unwrap();
        prop_assert!(u.consistency < 1e-10);
        for &ck in u.pair_tilde.c() {
            prop_assert!((ck - c).abs() < 1e-14);
        }
    }

    #[test]
    fn json_round_trip(pair in pair_strategy(10)) {
        let text = opuc_core::io::to_json_string(&pair_json(&pair));
        let value: serde_json::Value = serde_json::from_str(&text).unwrap();
        let mut obj = value.as_object().unwrap().clone();
        obj.remove("d");
        let SequenceInput::Pair(back) = parse_sequence(&serde_json::Value::Object(obj)).unwrap() else {
            panic!("expected a pair");
        };
        prop_assert_eq!(back.c(), pair.c());
        prop_assert_eq!(back.m(), pair.m());
    }
}
