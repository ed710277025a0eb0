use opuc_core::example::ExampleParams;
use opuc_core::io::{alpha_json, pair_json, parse_sequence, to_json_string, SequenceInput};
use opuc_core::measure::{quadrature, DiscreteMeasure};
use opuc_core::periodic::{self, ac_weight, analyze, discriminant, is_periodic_pair, PeriodicSpectrum};
use opuc_core::poly::{q_poly_limited, r_poly_limited};
use opuc_core::transforms::{beta_of, conjugate_pair, rotate_alpha, unfold_alternating};
use opuc_core::zeros::{interlacing_margin, support_gap_check, w_zeros_all_levels, ZeroSet, DEFAULT_TOL};
use opuc_core::{pair_to_verblunsky, verblunsky_to_pair, Complex64, Error, SequencePair, VerblunskySequence};
use serde_json::{json, Value};
use std::f64::consts::TAU;
use std::io::Read;
use std::process::ExitCode;

use crate::output::{emit, envelope, in_dir, write_file, Csv, Failure, EXIT_NUMERICAL};
use crate::{Command, Family, InputArgs, TransformOp};

const STEP_CONVENTION: &str = "psi(0) = 0; psi is constant on (theta_k, theta_{k+1}] with value lambda_0 + ... + lambda_k, so the value at a node excludes that node's weight; psi = 1 on (theta_n, 2pi]";

/// Largest `|α_{n+p} - α_n|` accepted when a period is imposed with `--p`.
const PERIOD_TOL: f64 = 1e-9;

type CmdResult<T> = Result<T, Failure>;

fn read_input(args: &InputArgs) -> CmdResult<Value> {
    let text = match (&args.json, &args.file) {
        (Some(text), _) => text.clone(),
        (None, Some(path)) if path.as_os_str() == "-" => {
            let mut s = String::new();
            std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::io(path, e))?;
            s
        }
        (None, Some(path)) => std::fs::read_to_string(path).map_err(|e| Failure::io(path, e))?,
        (None, None) => return Err(Failure::usage("give --json or --file".into())),
    };
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| Failure::from(Error::InvalidParameters(format!("malformed JSON: {e}"))))?;
    Ok(unwrap_report(value))
}

/// Accept this tool's own reports as input, so that `pair2alpha` output
/// pipes into `alpha2pair` and back.
fn unwrap_report(value: Value) -> Value {
    let Some(result) = value.get("result").filter(|_| value.get("metadata").is_some()) else {
        return value;
    };
    let keep: &[&str] = if result.get("alpha").is_some() {
        &["alpha", "tail_period"]
    } else {
        &["c", "m", "tail_period"]
    };
    let obj = result
        .as_object()
        .map(|o| o.iter().filter(|(k, _)| keep.contains(&k.as_str())).map(|(k, v)| (k.clone(), v.clone())).collect())
        .unwrap_or_default();
    Value::Object(obj)
}

fn load(args: &InputArgs) -> CmdResult<SequenceInput> {
    Ok(parse_sequence(&read_input(args)?)?)
}

fn as_pair(input: SequenceInput) -> CmdResult<SequencePair> {
    match input {
        SequenceInput::Pair(p) => Ok(p),
        SequenceInput::Alpha(v) => Ok(verblunsky_to_pair(v.alpha())?),
        SequenceInput::Chain(_) => Err(Error::InvalidParameters("this command needs \"c\" as well as \"d\" or \"m\"".into()).into()),
    }
}

fn as_alpha(input: SequenceInput) -> CmdResult<VerblunskySequence> {
    match input {
        SequenceInput::Alpha(v) => Ok(v),
        other => Ok(pair_to_verblunsky(&as_pair(other)?)?),
    }
}

/// `n` defaults to the prefix length and must not exceed it.
fn level(n: Option<usize>, available: usize) -> CmdResult<usize> {
    let n = n.unwrap_or(available);
    if n == 0 {
        return Err(Error::InvalidParameters("n must be at least 1".into()).into());
    }
    if n > available {
        return Err(Error::TooShort(format!("n = {n} but only {available} coefficients given")).into());
    }
    Ok(n)
}

fn samples_at_least_two(samples: usize) -> CmdResult<()> {
    if samples < 2 {
        return Err(Error::InvalidParameters("samples must be at least 2".into()).into());
    }
    Ok(())
}

fn grid(samples: usize) -> impl Iterator<Item = f64> {
    (0..samples).map(move |i| if i + 1 == samples { TAU } else { TAU * i as f64 / (samples - 1) as f64 })
}

/// One period of the coefficients: `--p`, else the declared tail period, else
/// the whole list. Entries beyond the period must repeat it.
fn one_period(input: SequenceInput, p: Option<usize>) -> CmdResult<Vec<Complex64>> {
    let declared = match &input {
        SequenceInput::Pair(pair) => pair.periodic_tail(),
        SequenceInput::Alpha(v) => v.periodic_tail(),
        SequenceInput::Chain(_) => None,
    };
    let alpha = as_alpha(input)?.into_alpha();
    let p = p.or(declared).unwrap_or(alpha.len());
    let p = level(Some(p), alpha.len())?;
    if let Some(n) = (p..alpha.len()).find(|&n| (alpha[n] - alpha[n - p]).norm() > PERIOD_TOL) {
        return Err(Error::HypothesisViolated(format!("coefficients are not {p}-periodic at index {n}")).into());
    }
    Ok(alpha[..p].to_vec())
}

pub fn run(command: Command) -> CmdResult<ExitCode> {
    match command {
        Command::Pair2alpha { input, output } => {
            let pair = match load(&input)? {
                SequenceInput::Pair(p) => p,
                _ => return Err(Failure::usage("pair2alpha needs a (c, d) or (c, m) pair".into())),
            };
            let v = pair_to_verblunsky(&pair)?;
            let mut csv = Csv::new(&["n", "alpha_re", "alpha_im", "tau_re", "tau_im"]);
            for (n, (a, t)) in v.alpha().iter().zip(v.tau()).enumerate() {
                csv.row([n.into(), a.re.into(), a.im.into(), t.re.into(), t.im.into()]);
            }
            emit("pair2alpha", &output, alpha_json(&v), Some(csv))?;
        }
        Command::Alpha2pair { input, output } => {
            let v = match load(&input)? {
                SequenceInput::Alpha(v) => v,
                _ => return Err(Failure::usage("alpha2pair needs {\"alpha\": [...]}".into())),
            };
            let pair = verblunsky_to_pair(v.alpha())?;
            let mut csv = Csv::new(&["n", "c", "d", "m"]);
            for n in 0..pair.len() {
                csv.row([(n + 1).into(), pair.c()[n].into(), pair.d()[n].into(), pair.m()[n + 1].into()]);
            }
            emit("alpha2pair", &output, pair_json(&pair), Some(csv))?;
        }
        Command::Poly {
            input,
            output,
            n,
            family,
            max_degree,
        } => {
            let pair = as_pair(load(&input)?)?;
            let n = level(n, pair.len())?;
            let mut csv = Csv::new(&["n", "k", "re", "im"]);
            let mut levels = Vec::with_capacity(n);
            for k in 1..=n {
                let poly = match family {
                    Family::R => r_poly_limited(&pair, k, max_degree)?,
                    Family::Q => q_poly_limited(&pair, k, max_degree)?,
                };
                for (j, a) in poly.coeffs.iter().enumerate() {
                    csv.row([k.into(), j.into(), a.re.into(), a.im.into()]);
                }
                levels.push(json!({
                    "n": k,
                    "coefficients": poly.coeffs,
                    "self_inversive_residual": poly.self_inversive_residual(),
                }));
            }
            let family = match family {
                Family::R => "R",
                Family::Q => "Q",
            };
            emit("poly", &output, json!({"family": family, "levels": levels}), Some(csv))?;
        }
        Command::Zeros { input, output, n, tol } => {
            positive(tol, "tol")?;
            let pair = as_pair(load(&input)?)?;
            let n = level(n, pair.len())?;
            let levels = w_zeros_all_levels(&pair, n, tol)?;
            emit("zeros", &output, zeros_json(&levels, tol), Some(zeros_csv(&levels)))?;
        }
        Command::Quadrature { input, output, n } => {
            let pair = as_pair(load(&input)?)?;
            let q = quadrature(&pair, level(n, pair.len())?)?;
            emit("quadrature", &output, quadrature_json(&q), Some(quadrature_csv(&q)))?;
        }
        Command::Cdf {
            input,
            output,
            n,
            samples,
        } => {
            samples_at_least_two(samples)?;
            let pair = as_pair(load(&input)?)?;
            let q = quadrature(&pair, level(n, pair.len())?)?;
            let mut csv = Csv::new(&["theta", "psi"]);
            let (mut thetas, mut psis) = (Vec::new(), Vec::new());
            for t in grid(samples) {
                let psi = q.step_eval(t)?;
                csv.row([t.into(), psi.into()]);
                thetas.push(t);
                psis.push(psi);
            }
            let result = json!({
                "level": q.level,
                "theta": thetas,
                "psi": psis,
                "convention": STEP_CONVENTION,
            });
            emit("cdf", &output, result, Some(csv))?;
        }
        Command::Periodic { input, output, p, grid } => {
            let alpha = one_period(load(&input)?, p)?;
            let spectrum = analyze(&alpha, grid)?;
            emit("periodic", &output, periodic_json(&alpha, &spectrum), None)?;
        }
        Command::Weight {
            input,
            output,
            p,
            samples,
        } => {
            samples_at_least_two(samples)?;
            let alpha = one_period(load(&input)?, p)?;
            let (thetas, ws) = weight_samples(&alpha, samples)?;
            let mut csv = Csv::new(&["theta", "w"]);
            for (t, w) in thetas.iter().zip(&ws) {
                csv.row([(*t).into(), (*w).into()]);
            }
            let result = json!({"p": alpha.len(), "theta": thetas, "w": ws});
            emit("weight", &output, result, Some(csv))?;
        }
        Command::Transform {
            input,
            output,
            op,
            angle,
            beta_c,
        } => {
            let input = load(&input)?;
            let result = match op {
                TransformOp::Conjugate => pair_json(&conjugate_pair(&as_pair(input)?)),
                TransformOp::Unfold => {
                    let u = unfold_alternating(&as_pair(input)?)?;
                    json!({
                        "beta": u.beta,
                        "alpha_tilde": u.alpha_tilde,
                        "pair": pair_json(&u.pair_tilde),
                        "consistency": u.consistency,
                    })
                }
                TransformOp::Rotate => {
                    let beta = match (angle, beta_c) {
                        (Some(a), None) => Complex64::from_polar(1.0, a),
                        (None, Some(c)) => beta_of(c),
                        _ => return Err(Failure::usage("rotate needs --angle or --beta-c".into())),
                    };
                    let rotated = rotate_alpha(as_alpha(input)?.alpha(), beta)?;
                    let mut out = alpha_json(&VerblunskySequence::new(rotated)?);
                    out["beta"] = json!(beta);
                    out
                }
            };
            let name = match op {
                TransformOp::Conjugate => "conjugate",
                TransformOp::Unfold => "unfold",
                TransformOp::Rotate => "rotate",
            };
            emit("transform", &output, json!({"op": name, "output": result}), None)?;
        }
        Command::Demo {
            c,
            b1,
            b2,
            samples,
            periods,
            grid,
            out,
        } => {
            samples_at_least_two(samples)?;
            if periods == 0 {
                return Err(Error::InvalidParameters("periods must be at least 1".into()).into());
            }
            demo(ExampleParams::new(c, b1, b2)?, samples, periods, grid, out.as_deref())?;
        }
        Command::Check { input, n, out } => return check(&input, n, out.as_deref()),
    }
    Ok(ExitCode::SUCCESS)
}

fn positive(x: f64, name: &str) -> CmdResult<()> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::InvalidParameters(format!("{name} must be positive, got {x}")).into());
    }
    Ok(())
}

fn zeros_json(levels: &[ZeroSet], tol: f64) -> Value {
    let margin = levels
        .windows(2)
        .map(|w| interlacing_margin(&w[0], &w[1]))
        .try_fold(f64::INFINITY, |m, x| x.map(|x| m.min(x)));
    json!({
        "n": levels.len(),
        "tol": tol,
        "levels": levels,
        "interlaced": margin.is_some(),
        "min_interlacing_margin": margin.filter(|m| m.is_finite()),
    })
}

fn zeros_csv(levels: &[ZeroSet]) -> Csv {
    let mut csv = Csv::new(&["level", "j", "x", "theta"]);
    for z in levels {
        for (j, (x, t)) in z.x.iter().zip(&z.theta).enumerate() {
            csv.row([z.level.into(), (j + 1).into(), (*x).into(), (*t).into()]);
        }
    }
    csv
}

fn quadrature_json(q: &DiscreteMeasure) -> Value {
    json!({
        "level": q.level,
        "theta": q.theta,
        "weights": q.weights,
        "nodes": q.nodes,
        "total": q.total(),
        "imag_residual": q.imag_residual,
        "christoffel_residual": q.christoffel_residual,
        "convention": STEP_CONVENTION,
    })
}

fn quadrature_csv(q: &DiscreteMeasure) -> Csv {
    let mut csv = Csv::new(&["j", "theta", "weight"]);
    for (j, (t, w)) in q.theta.iter().zip(&q.weights).enumerate() {
        csv.row([j.into(), (*t).into(), (*w).into()]);
    }
    csv
}

fn periodic_json(alpha: &[Complex64], s: &PeriodicSpectrum) -> Value {
    let pure_mass: f64 = s.pure_points.iter().map(|p| p.mass).sum();
    json!({
        "p": s.p,
        "alpha": alpha,
        "bands": s.bands.iter().map(|b| [b.start, b.end]).collect::<Vec<_>>(),
        "gaps": s.gaps,
        "plus_solutions": s.plus_solutions,
        "minus_solutions": s.minus_solutions,
        "candidates": s.candidates.iter().zip(&s.candidate_gaps).map(|(c, g)| json!({
            "theta": c.theta,
            "point": c.point,
            "residual": c.residual,
            "gap": g,
        })).collect::<Vec<_>>(),
        "pure_points": s.pure_points.iter().map(|p| json!({
            "theta": p.theta,
            "point": p.point,
            "mass": p.mass,
        })).collect::<Vec<_>>(),
        "band_mass": s.band_mass,
        "checksums": {
            "ac_mass": s.ac_mass,
            "pure_point_mass": pure_mass,
            "total_mass": s.total_mass,
            "total_mass_error": (s.total_mass - 1.0).abs(),
        },
        "grid": s.grid,
    })
}

/// The weight on a uniform grid, `0` off the bands.
fn weight_samples(alpha: &[Complex64], samples: usize) -> CmdResult<(Vec<f64>, Vec<f64>)> {
    let mut thetas = Vec::with_capacity(samples);
    let mut ws = Vec::with_capacity(samples);
    for t in grid(samples) {
        let w = match ac_weight(alpha, t) {
            Ok(w) => w,
            Err(Error::OffBand(_)) => 0.0,
            Err(e) => return Err(e.into()),
        };
        thetas.push(t);
        ws.push(w);
    }
    Ok((thetas, ws))
}

fn demo(params: ExampleParams, samples: usize, periods: usize, grid_per_period: usize, out: Option<&std::path::Path>) -> CmdResult<()> {
    let (a0, a1) = params.alpha();
    let alpha = [a0, a1];
    let spectrum = analyze(&alpha, grid_per_period)?;
    let closed = params.bands();
    let masses = params.masses();

    let closed_edges = [closed.theta1_plus, closed.theta1_minus, closed.theta2_minus, closed.theta2_plus];
    let mut computed_edges: Vec<f64> = spectrum.plus_solutions.iter().chain(&spectrum.minus_solutions).copied().collect();
    computed_edges.sort_by(f64::total_cmp);
    let edge_error = computed_edges
        .iter()
        .zip(&closed_edges)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);

    let mut delta_csv = Csv::new(&["theta", "delta", "delta_closed_form"]);
    let mut delta_error: f64 = 0.0;
    for t in grid(samples) {
        let d = discriminant(&alpha, t)?;
        let e = params.discriminant(t);
        delta_error = delta_error.max((d - e).abs());
        delta_csv.row([t.into(), d.into(), e.into()]);
    }

    let (thetas, ws) = weight_samples(&alpha, samples)?;
    let mut weight_csv = Csv::new(&["theta", "w"]);
    let mut weight_error: f64 = 0.0;
    for (t, w) in thetas.iter().zip(&ws) {
        weight_csv.row([(*t).into(), (*w).into()]);
        if let Ok(e) = params.weight(*t) {
            if *w > 0.0 {
                weight_error = weight_error.max((w - e).abs() / e.max(1.0));
            }
        }
    }

    let mut mass_csv = Csv::new(&["theta", "mass"]);
    for p in &spectrum.pure_points {
        mass_csv.row([p.theta.into(), p.mass.into()]);
    }
    let mut band_csv = Csv::new(&["start", "end"]);
    for b in &spectrum.bands {
        band_csv.row([b.start.into(), b.end.into()]);
    }

    let pair = params.pair(periods)?;
    let n = pair.len();
    let levels = w_zeros_all_levels(&pair, n, DEFAULT_TOL)?;
    let q = quadrature(&pair, n)?;
    let gap = support_gap_check(&pair, (params.c != 0.0).then_some(params.c.abs()), n, 0.0).ok();

    let mut closed_masses = Vec::new();
    let mut mass_error: f64 = 0.0;
    for m in masses.iter().flatten() {
        closed_masses.push(json!({"theta": m.theta, "point": m.point, "mass": m.mass}));
        let nearest = spectrum
            .pure_points
            .iter()
            .map(|p| (p.mass - m.mass).abs() + (p.point - m.point).norm())
            .fold(f64::INFINITY, f64::min);
        mass_error = mass_error.max(nearest);
    }
    let mass_presence_matches = closed_masses.len() == spectrum.pure_points.len();

    let mut report = periodic_json(&alpha, &spectrum);
    report["parameters"] = json!(params);
    report["closed_form"] = json!({
        "alpha": [a0, a1],
        "bands": [[closed.theta1_plus, closed.theta1_minus], [closed.theta2_minus, closed.theta2_plus]],
        "w1": params.w1(),
        "w2": params.w2(),
        "pure_points": closed_masses,
    });
    report["agreement"] = json!({
        "band_edge_error": edge_error,
        "discriminant_error": delta_error,
        "weight_relative_error": weight_error,
        "mass_error": if closed_masses.is_empty() { 0.0 } else { mass_error },
        "mass_presence_matches": mass_presence_matches,
    });
    report["finite_section"] = json!({
        "n": n,
        "quadrature_total": q.total(),
        "min_weight": q.weights.iter().copied().fold(f64::INFINITY, f64::min),
        "support_gap": gap,
    });

    let text = to_json_string(&envelope("demo", report)) + "\n";
    if let Some(dir) = out {
        write_file(&in_dir(dir, "demo.json")?, &text)?;
        write_file(&in_dir(dir, "discriminant.csv")?, delta_csv.as_str())?;
        write_file(&in_dir(dir, "weight.csv")?, weight_csv.as_str())?;
        write_file(&in_dir(dir, "masses.csv")?, mass_csv.as_str())?;
        write_file(&in_dir(dir, "bands.csv")?, band_csv.as_str())?;
        write_file(&in_dir(dir, "zeros.csv")?, zeros_csv(&levels).as_str())?;
        write_file(&in_dir(dir, "quadrature.csv")?, quadrature_csv(&q).as_str())?;
    }
    print!("{text}");
    Ok(())
}

struct Checks {
    items: Vec<Value>,
    failed: usize,
}

impl Checks {
    fn new() -> Self {
        Checks {
            items: Vec::new(),
            failed: 0,
        }
    }

    fn record(&mut self, name: &str, value: f64, tol: f64, passed: bool) {
        if !passed {
            self.failed += 1;
        }
        self.items.push(json!({"name": name, "passed": passed, "value": value, "tol": tol}));
    }

    /// A below-threshold check; errors count as failures.
    fn below(&mut self, name: &str, value: std::result::Result<f64, Error>, tol: f64) {
        match value {
            Ok(v) => self.record(name, v, tol, v <= tol),
            Err(e) => self.error(name, e),
        }
    }

    fn error(&mut self, name: &str, e: Error) {
        self.failed += 1;
        self.items.push(json!({"name": name, "passed": false, "error": e.kind(), "message": e.to_string()}));
    }
}

/// Rounding amplification of the inverse map, `∏ max(1, (1 - m_k) / m_k)`.
fn inverse_amplification(pair: &SequencePair) -> f64 {
    pair.m()[1..].iter().map(|&m| ((1.0 - m) / m).max(1.0)).product()
}

fn check_pair(checks: &mut Checks, pair: &SequencePair, n: usize) {
    // Rounding in the inverse map grows like ε times this product.
    let tol = (f64::EPSILON * inverse_amplification(pair)).max(1e-10);
    checks.below(
        "bijection_round_trip",
        pair_to_verblunsky(pair).and_then(|v| verblunsky_to_pair(v.alpha())).map(|back| {
            let dc = back.c().iter().zip(pair.c()).map(|(a, b)| (a - b).abs());
            let dm = back.m().iter().zip(pair.m()).map(|(a, b)| (a - b).abs());
            dc.chain(dm).fold(0.0, f64::max)
        }),
        tol,
    );
    checks.below(
        "tau_unimodular",
        pair_to_verblunsky(pair).map(|v| v.tau().iter().map(|t| (t.norm() - 1.0).abs()).fold(0.0, f64::max)),
        1e-13,
    );
    let top = n.min(opuc_core::poly::DEFAULT_MAX_COEFF_DEGREE);
    checks.below(
        "self_inversive",
        r_poly_limited(pair, top, top).map(|r| {
            let scale = r.coeffs.iter().map(|c| c.norm()).fold(1.0, f64::max);
            r.self_inversive_residual() / scale
        }),
        1e-12,
    );
    match w_zeros_all_levels(pair, n, DEFAULT_TOL) {
        Ok(levels) => {
            let counts = levels.iter().enumerate().all(|(k, z)| z.len() == k + 1);
            checks.record("zero_counts", levels.len() as f64, n as f64, counts);
            let margin = levels
                .windows(2)
                .map(|w| interlacing_margin(&w[0], &w[1]))
                .try_fold(f64::INFINITY, |m, x| x.map(|x| m.min(x)));
            match margin {
                Some(m) => checks.record("interlacing_margin", m, 0.0, m > 0.0),
                None => checks.record("interlacing_margin", f64::NAN, 0.0, false),
            }
        }
        Err(e) => checks.error("zeros", e),
    }
    match quadrature(pair, n) {
        Ok(q) => {
            let min = q.weights.iter().copied().fold(f64::INFINITY, f64::min);
            checks.record("weights_positive", min, 0.0, min > 0.0);
            checks.below("weights_sum", Ok((q.total() - 1.0).abs()), 1e-10);
        }
        Err(e) => checks.error("quadrature", e),
    }
    let signed: Vec<f64> = pair.c()[..n].iter().enumerate().map(|(k, &c)| if k % 2 == 0 { -c } else { c }).collect();
    if signed.iter().all(|&s| s > 0.0) || signed.iter().all(|&s| s < 0.0) {
        match support_gap_check(pair, None, n, 0.0) {
            Ok(g) => checks.record("support_gap", g.min_distance, 0.0, g.min_distance >= 0.0),
            Err(e) => checks.error("support_gap", e),
        }
    }
    if let Some(p) = pair.periodic_tail() {
        if pair.len() > p {
            match is_periodic_pair(pair, p) {
                Ok(r) => checks.record("alpha_periodic", r.alpha_residual, 1e-9, r.periodic == (r.alpha_residual < 1e-9)),
                Err(e) => checks.error("alpha_periodic", e),
            }
        }
    }
}

fn check_periodic(checks: &mut Checks, alpha: &[Complex64]) {
    match analyze(alpha, periodic::DEFAULT_GRID_PER_PERIOD) {
        Ok(s) => checks.below("total_mass", Ok((s.total_mass - 1.0).abs()), 1e-7),
        Err(e) => checks.error("periodic_analysis", e),
    }
}

fn check(input: &InputArgs, n: Option<usize>, out: Option<&std::path::Path>) -> CmdResult<ExitCode> {
    let mut checks = Checks::new();
    let subject = if input.json.is_none() && input.file.is_none() {
        let params = ExampleParams::new(1.0, 0.3, 0.5)?;
        let pair = params.pair(20)?;
        let n = level(n, pair.len())?;
        check_pair(&mut checks, &pair, n);
        let (a0, a1) = params.alpha();
        check_periodic(&mut checks, &[a0, a1]);
        match analyze(&[a0, a1], periodic::DEFAULT_GRID_PER_PERIOD) {
            Ok(s) => {
                let closed = params.bands();
                let mut edges: Vec<f64> = s.plus_solutions.iter().chain(&s.minus_solutions).copied().collect();
                edges.sort_by(f64::total_cmp);
                let expect = [closed.theta1_plus, closed.theta1_minus, closed.theta2_minus, closed.theta2_plus];
                let err = edges.iter().zip(&expect).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
                checks.below("closed_form_bands", Ok(err), 1e-10);
                let [m1, m2] = params.masses();
                let want = [m1.map(|m| m.mass).unwrap_or(0.0), m2.map(|m| m.mass).unwrap_or(0.0)];
                let got: Vec<f64> = s.pure_points.iter().map(|p| p.mass).collect();
                let err = if got.len() == 2 {
                    (got[0] - want[0]).abs().max((got[1] - want[1]).abs())
                } else {
                    f64::INFINITY
                };
                checks.below("closed_form_masses", Ok(err), 1e-12);
            }
            Err(e) => checks.error("closed_form", e),
        }
        json!({"example": params})
    } else {
        let input = load(input)?;
        let declared = match &input {
            SequenceInput::Pair(p) => p.periodic_tail(),
            SequenceInput::Alpha(v) => v.periodic_tail(),
            SequenceInput::Chain(_) => None,
        };
        let pair = as_pair(input)?;
        let alpha = pair_to_verblunsky(&pair)?.into_alpha();
        let n = level(n, pair.len())?;
        check_pair(&mut checks, &pair, n);
        if let Some(p) = declared {
            check_periodic(&mut checks, &alpha[..p]);
        }
        json!({"length": pair.len(), "n": n})
    };

    let passed = checks.failed == 0;
    let report = json!({
        "subject": subject,
        "checks": checks.items,
        "failed": checks.failed,
        "passed": passed,
    });
    let text = to_json_string(&envelope("check", report)) + "\n";
    if let Some(dir) = out {
        write_file(&in_dir(dir, "check.json")?, &text)?;
    }
    print!("{text}");
    Ok(if passed { ExitCode::SUCCESS } else { ExitCode::from(EXIT_NUMERICAL) })
}
