//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.
//!
//! Closed-form targets are computed here independently of the library.

use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use gft_core::classes::{
    abs_range_on_circle, covering_constant, distortion_bounds, extremal_b_lower, growth_bounds,
    member_from_mixture, random_herglotz, ClassSpec,
};
use gft_core::kernels::{multiplier, pochhammer};
use gft_core::operators::{
    differential_operator, integral_operator, iterate_closed, iterate_quadrature_step, iterate_step,
    recurrence_residual,
};
use gft_core::verify::{default_lattice, run_suite, Suite, SuiteConfig};
use gft_core::{CircleGrid, Complex64, OperatorParams, QuadratureConfig, SchlichtSeries};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const N: usize = 64;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

/// Distinct `(σ, n)` pairs of the default lattice.
fn lattice_params() -> Vec<OperatorParams> {
    let mut out: Vec<OperatorParams> = Vec::new();
    for spec in default_lattice() {
        if !out.contains(&spec.params()) {
            out.push(spec.params());
        }
    }
    out
}

fn random_schlicht(rng: &mut ChaCha8Rng) -> SchlichtSeries {
    let higher: Vec<Complex64> = (2..=N)
        .map(|_| Complex64::from_polar(rng.gen::<f64>(), rng.gen_range(0.0..std::f64::consts::TAU)))
        .collect();
    SchlichtSeries::from_higher(&higher).unwrap()
}

fn within(limit: Duration, start: Instant) -> (bool, String) {
    let took = start.elapsed();
    (took < limit, format!("{:.2}s of {:.0}s", took.as_secs_f64(), limit.as_secs_f64()))
}

fn multiplier_dual_formula() -> Outcome {
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for &sigma in &[0.5, 1.0, 2.0, 3.5, 9.0] {
        for n in 0..=8i64 {
            let Ok(params) = OperatorParams::new(sigma, n) else { continue };
            for k in 1..=64usize {
                let product = multiplier(params, k).value();
                let ratio = pochhammer(sigma - n as f64 + 1.0, k as u32) / pochhammer(sigma + 1.0, k as u32);
                worst = worst.max(((product - ratio) / ratio).abs());
            }
        }
    }
    let (fast, time) = within(Duration::from_secs(1), start);
    outcome(worst <= 1e-12 && fast, format!("max relative error {worst:.2e}, {time}"))
}

fn round_trip() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let f = random_schlicht(&mut rng);
        for params in lattice_params() {
            let a = differential_operator(params, &integral_operator(params, &f));
            let b = integral_operator(params, &differential_operator(params, &f));
            for k in 0..=N {
                worst = worst
                    .max((a.coeff(k) - f.coeff(k)).norm())
                    .max((b.coeff(k) - f.coeff(k)).norm());
            }
        }
    }
    let (fast, time) = within(Duration::from_secs(5), start);
    outcome(worst <= 1e-12 && fast, format!("max coefficient error {worst:.2e}, {time}"))
}

fn quadrature_agreement() -> Outcome {
    let start = Instant::now();
    let cfg = QuadratureConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst: f64 = 0.0;
    let mut steps: Vec<(f64, u32)> = Vec::new();
    for params in lattice_params() {
        for m in 1..=params.n() {
            if !steps.contains(&(params.sigma(), m)) {
                steps.push((params.sigma(), m));
            }
        }
    }
    for &(sigma, m) in &steps {
        let prev = OperatorParams::new(sigma, m as i64 - 1).unwrap();
        for _ in 0..20 {
            let p_prev = iterate_closed(prev, &random_herglotz(&mut rng).expand(N));
            let closed = iterate_step(sigma, m, &p_prev).unwrap();
            for _ in 0..10 {
                let z = Complex64::from_polar(
                    0.8 * rng.gen::<f64>().sqrt().max(1e-3),
                    rng.gen_range(0.0..std::f64::consts::TAU),
                );
                let quad = iterate_quadrature_step(sigma, m, &p_prev, z, &cfg).unwrap();
                worst = worst.max((quad - closed.evaluate(z).unwrap()).norm());
            }
        }
    }
    let (fast, time) = within(Duration::from_secs(30), start);
    outcome(
        worst <= 1e-8 && fast,
        format!("{} (sigma, m) steps, max |quadrature - closed| {worst:.2e}, {time}", steps.len()),
    )
}

fn coefficient_bound() -> Outcome {
    let cfg = SuiteConfig {
        trials: 1000,
        seed: 4,
        ..SuiteConfig::default()
    };
    let report = run_suite(Suite::CoefficientBound, &cfg);
    let margin = report.worst_margin.unwrap_or(f64::NAN);
    // margins already include the 1e-12 slack
    outcome(
        report.passed() && margin >= 0.0,
        format!("1000 draws per entry on {} entries, worst margin {margin:.2e}", cfg.lattice.len()),
    )
}

fn recurrence_and_distortion() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst: f64 = 0.0;
    for params in lattice_params() {
        let sigma = params.sigma();
        let mut level = random_herglotz(&mut rng).expand(N);
        for m in 1..=params.n() {
            let next = iterate_step(sigma, m, &level).unwrap();
            let at = OperatorParams::new(sigma, m as i64).unwrap();
            worst = worst.max(recurrence_residual(at, &next, &level));
            level = next;
        }
    }
    let spec = ClassSpec::from_parts(1.0, 1, 0.0).unwrap();
    let (m, big_m) = distortion_bounds(spec, 0.5).unwrap();
    // 1 + 2 r/(1-r) and 1 - 2 r/(1+r) at r = 1/2
    let (m_exact, big_m_exact) = (1.0 - 2.0 * 0.5 / 1.5, 1.0 + 2.0 * 0.5 / 0.5);
    let sample_err = (m - m_exact).abs().max((big_m - big_m_exact).abs());
    outcome(
        worst <= 1e-12 && sample_err <= 1e-12,
        format!("max residual {worst:.2e}; M = {big_m}, m = {m}"),
    )
}

fn covering() -> Outcome {
    let spec = ClassSpec::from_parts(1.0, 1, 0.0).unwrap();
    let c = covering_constant(spec, 1e-10).unwrap();
    let exact = 2.0 * 2f64.ln() - 1.0;
    let lower = extremal_b_lower(spec, 4096);
    let (min_abs, _) = abs_range_on_circle(lower.as_series(), 0.999, 720).unwrap();
    outcome(
        (c - exact).abs() <= 1e-6 && (min_abs - c).abs() <= 5e-3,
        format!("c = {c:.9} (2 ln 2 - 1 = {exact:.9}), min |f| at 0.999 = {min_abs:.6}"),
    )
}

fn growth() -> Outcome {
    let spec = ClassSpec::from_parts(1.0, 1, 0.0).unwrap();
    let r: f64 = 0.5;
    let (lo, hi) = growth_bounds(spec, r).unwrap();
    let hi_exact = -2.0 * (1.0 - r).ln() - r;
    let lo_exact = r - 2.0 * (r - (1.0 + r).ln());
    let constants_ok = (hi - hi_exact).abs() <= 1e-6 && (lo - lo_exact).abs() <= 1e-6;
    let grid = CircleGrid::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut inside = true;
    for _ in 0..200 {
        let f = member_from_mixture(spec, &random_herglotz(&mut rng), N);
        let slack = grid.slack(f.as_series(), r);
        let (min_abs, max_abs) = abs_range_on_circle(f.as_series(), r, 720).unwrap();
        inside &= min_abs >= lo - slack && max_abs <= hi + slack;
    }
    outcome(
        constants_ok && inside,
        format!("upper {hi:.6}, lower {lo:.6}, 200 members inside: {inside}"),
    )
}

fn suite_outcome(suites: &[Suite], trials: usize, seed: u64) -> Outcome {
    let cfg = SuiteConfig {
        trials,
        seed,
        ..SuiteConfig::default()
    };
    let mut passed = true;
    let mut parts = Vec::new();
    for &suite in suites {
        let report = run_suite(suite, &cfg);
        passed &= report.passed();
        parts.push(format!(
            "suite {} {:?} worst margin {:.2e}",
            report.theorem,
            report.verdict,
            report.worst_margin.unwrap_or(f64::NAN)
        ));
    }
    outcome(passed, parts.join("; "))
}

fn determinism() -> Outcome {
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_gft"))
            .args(["verify", "--theorem", "7", "--seed", "42"])
            .output()
            .expect("gft runs")
    };
    let (a, b) = (run(), run());
    let same = a.stdout == b.stdout && !a.stdout.is_empty();
    outcome(
        same && a.status.success() && b.status.success(),
        format!("{} bytes, identical: {same}, exit {:?}", a.stdout.len(), a.status.code()),
    )
}

fn main() -> ExitCode {
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome>)> = vec![
        ("multiplier product equals Pochhammer ratio", Box::new(multiplier_dual_formula)),
        ("L and l are mutually inverse", Box::new(round_trip)),
        ("quadrature step equals coefficient action", Box::new(quadrature_agreement)),
        ("coefficient bound and its extremal", Box::new(coefficient_bound)),
        ("iteration recurrence and distortion samples", Box::new(recurrence_and_distortion)),
        ("covering constant", Box::new(covering)),
        ("growth bounds", Box::new(growth)),
        ("Bernardi closure", Box::new(|| suite_outcome(&[Suite::BernardiClosure], 200, 8))),
        (
            "inclusions and convexity",
            Box::new(|| {
                suite_outcome(
                    &[
                        Suite::IterateInclusion,
                        Suite::ClassInclusion,
                        Suite::IterateConvexity,
                        Suite::ClassConvexity,
                    ],
                    200,
                    9,
                )
            }),
        ),
        ("Salagean iteration matches closed form", Box::new(|| suite_outcome(&[Suite::Salagean], 100, 10))),
        ("verify reports are byte-identical", Box::new(determinism)),
    ];

    let mut failures = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let result = check();
        let tag = if result.passed { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {tag}: {name} ({})", i + 1, result.detail);
        if !result.passed {
            failures += 1;
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
