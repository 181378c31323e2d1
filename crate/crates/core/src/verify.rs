//! Seeded verification suites, one per result about `P_n^σ` and
//! `B_n^σ(β)`, producing JSON reports.
//!
//! Every suite walks a lattice of class specs. Each entry gets its own
//! ChaCha8 stream (`seed`, stream = entry index), so entries can run in
//! parallel and the report is still byte-identical across runs.
//!
//! A margin is how far a sampled check is from failing, with its tolerance
//! already included. A suite passes iff its worst margin is nonnegative.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::classes::{
    abs_range_on_circle, b_membership, coefficient_bound, covering_constant, distortion_bounds,
    distortion_expression, extremal_b_lower, extremal_b_upper, growth_bounds, iterate_bounds,
    member_from_mixture, pn_sigma_membership, random_herglotz, random_iterate, re_range_on_circle,
    real_part_above, CircleGrid, ClassSpec,
};
use crate::error::{Error, Result};
use crate::kernels::{extremal_iterate, OperatorParams};
use crate::operators::{bernardi, iterate_closed, iterate_step, recurrence_residual, salagean_iterate};
use crate::series::{combine_convex, SchlichtSeries, TruncatedSeries};

/// Slack on coefficientwise identities and the coefficient bound.
pub const COEFF_TOL: f64 = 1e-12;
/// Equality at the extremal function, checked on the real axis.
pub const SHARP_TOL: f64 = 1e-6;
/// Distance between the covering constant and `min |f|` of the lower
/// extremal at `r = 0.999`.
pub const COVER_SHARP_TOL: f64 = 5e-3;
/// Two sample points collide when their images are closer than this.
pub const COLLISION_TOL: f64 = 1e-10;

const SHARP_RADIUS: f64 = 0.5;
const COVER_RADIUS: f64 = 0.999;
const COVER_ORDER: usize = 4096;
const GAMMAS_BELOW: [f64; 3] = [0.0, 0.3, 0.7];
const GAMMAS_ABOVE: [f64; 2] = [1.2, 2.0];
const INJECTIVITY_RADIUS: f64 = 0.9;
const INJECTIVITY_PAIRS: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    /// `Re p_{n-1} > γ ⇒ Re p_n > γ` for `γ < 1`, and the reverse for `γ > 1`.
    StepKeepsHalfPlane,
    /// `P_{n+1}^σ ⊂ P_n^σ`.
    IterateInclusion,
    /// Modulus and real-part bounds on `P_n^σ`, sharp at `L_{σ,n}(±z)`.
    IterateBounds,
    /// `P_n^σ` is convex.
    IterateConvexity,
    /// `B_{n+1}^σ(β) ⊂ B_n^σ(β)`.
    ClassInclusion,
    /// Members with `n >= 1` are univalent (sampled collision search).
    Univalence,
    /// `|a_k| <= 2(1-β)[σ]_{n/(k-1)}`, equality at the extremal.
    CoefficientBound,
    /// Closure under the Bernardi integral with `c + 1 = σ - n`.
    BernardiClosure,
    /// Growth of `|f|`.
    Growth,
    /// Covering disk.
    Covering,
    /// Bounds on `|(σ-n) f/z + f'|`.
    Distortion,
    /// `B_n^σ(β)` is convex.
    ClassConvexity,
    /// The one-step Salagean iteration agrees with the closed form.
    Salagean,
}

impl Suite {
    pub const ALL: [Suite; 13] = [
        Suite::StepKeepsHalfPlane,
        Suite::IterateInclusion,
        Suite::IterateBounds,
        Suite::IterateConvexity,
        Suite::ClassInclusion,
        Suite::Univalence,
        Suite::CoefficientBound,
        Suite::BernardiClosure,
        Suite::Growth,
        Suite::Covering,
        Suite::Distortion,
        Suite::ClassConvexity,
        Suite::Salagean,
    ];

    /// The identifier used in reports and on the command line.
    pub fn id(self) -> &'static str {
        match self {
            Suite::StepKeepsHalfPlane => "1",
            Suite::IterateInclusion => "2",
            Suite::IterateBounds => "3",
            Suite::IterateConvexity => "4",
            Suite::ClassInclusion => "5",
            Suite::Univalence => "6",
            Suite::CoefficientBound => "7",
            Suite::BernardiClosure => "8",
            Suite::Growth => "9",
            Suite::Covering => "10",
            Suite::Distortion => "11",
            Suite::ClassConvexity => "12",
            Suite::Salagean => "salagean",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.id() == s)
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

/// σ ∈ {0.5, 1, 2, 3.5}, n ∈ {0, 1, 2, 3} with `σ - n + 1 > 0`,
/// β ∈ {0, 0.25, 0.5, 0.9}.
pub fn default_lattice() -> Vec<ClassSpec> {
    lattice(&[0.5, 1.0, 2.0, 3.5], &[0, 1, 2, 3], &[0.0, 0.25, 0.5, 0.9])
}

/// All valid `(σ, n, β)` from the three lists, in that nesting order.
pub fn lattice(sigmas: &[f64], ns: &[i64], betas: &[f64]) -> Vec<ClassSpec> {
    let mut out = Vec::new();
    for &sigma in sigmas {
        for &n in ns {
            for &beta in betas {
                if let Ok(spec) = ClassSpec::from_parts(sigma, n, beta) {
                    out.push(spec);
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug)]
pub struct SuiteConfig {
    pub lattice: Vec<ClassSpec>,
    /// Random draws per lattice entry.
    pub trials: usize,
    pub seed: u64,
    /// Truncation order `N` of every generated series.
    pub order: usize,
    pub grid: CircleGrid,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            lattice: default_lattice(),
            trials: 100,
            seed: 0,
            order: crate::DEFAULT_ORDER,
            grid: CircleGrid::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SuiteVerdict {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LatticeEntry {
    pub sigma: f64,
    pub n: u32,
    pub beta: f64,
}

impl From<&ClassSpec> for LatticeEntry {
    fn from(spec: &ClassSpec) -> Self {
        Self {
            sigma: spec.sigma(),
            n: spec.n(),
            beta: spec.beta(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub theorem: String,
    pub verdict: SuiteVerdict,
    /// `None` when every lattice entry was skipped.
    pub worst_margin: Option<f64>,
    pub trials: usize,
    pub seed: u64,
    pub lattice: Vec<LatticeEntry>,
    pub grid: CircleGrid,
    /// Skipped and failed entries, in lattice order.
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.verdict == SuiteVerdict::Pass
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialization cannot fail")
    }
}

enum EntryOutcome {
    Checked(f64),
    Skipped(String),
}

/// Smallest margin seen so far.
struct Worst(f64);

impl Worst {
    fn new() -> Self {
        Worst(f64::INFINITY)
    }

    fn see(&mut self, margin: f64) {
        // NaN is a failure
        self.0 = if margin.is_nan() { f64::MIN } else { self.0.min(margin) };
    }
}

fn describe(spec: &ClassSpec) -> String {
    format!("sigma={} n={} beta={}", spec.sigma(), spec.n(), spec.beta())
}

pub fn run_suite(suite: Suite, cfg: &SuiteConfig) -> VerificationReport {
    let outcomes: Vec<EntryOutcome> = cfg
        .lattice
        .par_iter()
        .enumerate()
        .map(|(i, spec)| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(i as u64);
            run_entry(suite, *spec, cfg, &mut rng)
        })
        .collect();

    let mut worst: Option<f64> = None;
    let mut notes = Vec::new();
    for (spec, outcome) in cfg.lattice.iter().zip(outcomes) {
        match outcome {
            EntryOutcome::Checked(m) => {
                if !(m >= 0.0) {
                    notes.push(format!("failed {}: margin {m:e}", describe(spec)));
                }
                worst = Some(worst.map_or(m, |w: f64| w.min(m)));
            }
            EntryOutcome::Skipped(why) => notes.push(format!("skipped {}: {why}", describe(spec))),
        }
    }
    let verdict = match worst {
        Some(w) if !(w >= 0.0) => SuiteVerdict::Fail,
        _ => SuiteVerdict::Pass,
    };
    VerificationReport {
        theorem: suite.id().to_string(),
        verdict,
        worst_margin: worst,
        trials: cfg.trials,
        seed: cfg.seed,
        lattice: cfg.lattice.iter().map(LatticeEntry::from).collect(),
        grid: cfg.grid.clone(),
        notes,
    }
}

/// Runs several suites; reports come back in the order given.
pub fn run_suites(suites: &[Suite], cfg: &SuiteConfig) -> Vec<VerificationReport> {
    suites.iter().map(|&s| run_suite(s, cfg)).collect()
}

fn run_entry(suite: Suite, spec: ClassSpec, cfg: &SuiteConfig, rng: &mut ChaCha8Rng) -> EntryOutcome {
    let params = spec.params();
    let order = cfg.order.max(2);
    let grid = &cfg.grid;
    let mut worst = Worst::new();
    let member = |rng: &mut ChaCha8Rng| member_from_mixture(spec, &random_herglotz(rng), order);

    match suite {
        Suite::StepKeepsHalfPlane => {
            let Some(prev) = params.prev() else {
                return EntryOutcome::Skipped("the step needs n >= 1".into());
            };
            for _ in 0..cfg.trials {
                for (gamma, side) in GAMMAS_BELOW
                    .iter()
                    .map(|&g| (g, 1.0))
                    .chain(GAMMAS_ABOVE.iter().map(|&g| (g, -1.0)))
                {
                    let h = random_iterate(prev, rng, order);
                    let eps = rng.gen_range(0.05..=1.0);
                    let constant = TruncatedSeries::constant(gamma.into(), order);
                    let before = constant.linear_combination(1.0.into(), &h, (side * eps).into());
                    let after = iterate_step(spec.sigma(), spec.n(), &before).expect("n >= 1 is valid");
                    // side * (p - γ) stays in the right half plane
                    let shifted = after.linear_combination(side.into(), &constant, (-side).into());
                    worst.see(real_part_above(&shifted, 0.0, grid).margin);
                }
            }
        }
        Suite::IterateInclusion => {
            let Some(next) = params.next() else {
                return EntryOutcome::Skipped("n + 1 is not a valid level".into());
            };
            for _ in 0..cfg.trials {
                let q = random_iterate(next, rng, order);
                worst.see(pn_sigma_membership(&q, params, grid).margin);
            }
        }
        Suite::IterateBounds => {
            let bounds: Vec<(f64, (f64, f64))> = grid
                .radii()
                .iter()
                .map(|&r| (r, iterate_bounds(params, r).expect("grid radius")))
                .collect();
            for _ in 0..cfg.trials {
                let p = random_iterate(params, rng, order);
                for &(r, (re_lower, abs_upper)) in &bounds {
                    let slack = grid.slack(&p, r);
                    let (_, max_abs) = abs_range_on_circle(&p, r, grid.angular_samples()).unwrap();
                    let (min_re, _) = re_range_on_circle(&p, r, grid.angular_samples()).unwrap();
                    worst.see(abs_upper + slack - max_abs);
                    worst.see(min_re - re_lower + slack);
                }
            }
            let r = Complex64::new(SHARP_RADIUS, 0.0);
            let (re_lower, abs_upper) = iterate_bounds(params, SHARP_RADIUS).unwrap();
            let n = order.max(crate::DEFAULT_ORDER);
            let upper = extremal_iterate(params, n, 1.0).evaluate(r).unwrap();
            let lower = extremal_iterate(params, n, -1.0).evaluate(r).unwrap();
            worst.see(SHARP_TOL - (upper.norm() - abs_upper).abs());
            worst.see(SHARP_TOL - (lower.re - re_lower).abs());
        }
        Suite::IterateConvexity => {
            for _ in 0..cfg.trials {
                let p = random_iterate(params, rng, order);
                let q = random_iterate(params, rng, order);
                let mu: f64 = rng.gen();
                let mix = combine_convex(mu, &p, 1.0 - mu, &q).expect("weights sum to 1");
                worst.see(pn_sigma_membership(&mix, params, grid).margin);
            }
        }
        Suite::ClassInclusion => {
            let Some(next) = params.next() else {
                return EntryOutcome::Skipped("n + 1 is not a valid level".into());
            };
            let upper = spec.with_params(next);
            for _ in 0..cfg.trials {
                let f = member_from_mixture(upper, &random_herglotz(rng), order);
                worst.see(b_membership(&f, spec, grid).margin);
            }
        }
        Suite::Univalence => {
            if spec.n() == 0 {
                return EntryOutcome::Skipped("univalence is only claimed for n >= 1".into());
            }
            let radius = grid.radii().iter().cloned().fold(0.0, f64::max).min(INJECTIVITY_RADIUS);
            for _ in 0..cfg.trials {
                let f = member(rng);
                let gap = injectivity_gap(&f, radius, INJECTIVITY_PAIRS, rng);
                worst.see(gap.min(1.0) - COLLISION_TOL);
            }
        }
        Suite::CoefficientBound => {
            for _ in 0..cfg.trials {
                let f = member(rng);
                for k in 2..=order {
                    worst.see(coefficient_bound(spec, k) + COEFF_TOL - f.coeff(k).norm());
                }
            }
            for extremal in [extremal_b_upper(spec, order), extremal_b_lower(spec, order)] {
                for k in 2..=order {
                    worst.see(COEFF_TOL - (extremal.coeff(k).norm() - coefficient_bound(spec, k)).abs());
                }
            }
        }
        Suite::BernardiClosure => {
            let nu = spec.sigma() - spec.n() as f64;
            if !(nu > 0.0) {
                return EntryOutcome::Skipped("needs sigma - n > 0".into());
            }
            for _ in 0..cfg.trials {
                let f = member(rng);
                let g = bernardi(nu - 1.0, &f).expect("c + 1 > 0");
                worst.see(b_membership(&g, spec, grid).margin);
            }
        }
        Suite::Growth => {
            let bounds: Vec<(f64, (f64, f64))> = grid
                .radii()
                .iter()
                .map(|&r| (r, growth_bounds(spec, r).expect("grid radius")))
                .collect();
            for _ in 0..cfg.trials {
                let f = member(rng);
                for &(r, (lo, hi)) in &bounds {
                    let slack = grid.slack(f.as_series(), r);
                    let (min_abs, max_abs) =
                        abs_range_on_circle(f.as_series(), r, grid.angular_samples()).unwrap();
                    worst.see(hi + slack - max_abs);
                    worst.see(min_abs - lo + slack);
                }
            }
            let (lo, hi) = growth_bounds(spec, SHARP_RADIUS).unwrap();
            worst.see(sharpness(&extremal_b_upper(spec, order), hi));
            worst.see(sharpness(&extremal_b_lower(spec, order), lo));
        }
        Suite::Covering => {
            if spec.n() == 0 {
                return EntryOutcome::Skipped("the covering series diverges for n = 0".into());
            }
            let c = covering_constant(spec, 1e-10).expect("n >= 1");
            let lower = extremal_b_lower(spec, COVER_ORDER);
            let (min_abs, _) =
                abs_range_on_circle(lower.as_series(), COVER_RADIUS, grid.angular_samples()).unwrap();
            worst.see(COVER_SHARP_TOL - (min_abs - c).abs());
            // f - w has a zero in |z| < r whenever |w| < min_{|z|=r} |f|, and
            // the growth lower bound at r tends to c as r -> 1
            let bounds: Vec<(f64, f64)> = grid
                .radii()
                .iter()
                .map(|&r| (r, growth_bounds(spec, r).expect("grid radius").0))
                .collect();
            for _ in 0..cfg.trials {
                let f = member(rng);
                for &(r, lo) in &bounds {
                    let (min_abs, _) =
                        abs_range_on_circle(f.as_series(), r, grid.angular_samples()).unwrap();
                    worst.see(min_abs + grid.slack(f.as_series(), r) - lo);
                }
            }
        }
        Suite::Distortion => {
            let bounds: Vec<(f64, (f64, f64))> = grid
                .radii()
                .iter()
                .map(|&r| (r, distortion_bounds(spec, r).expect("grid radius")))
                .collect();
            for _ in 0..cfg.trials {
                let mixture = random_herglotz(rng);
                let f = member_from_mixture(spec, &mixture, order);
                let d = distortion_expression(&f, spec);
                for &(r, (m, big_m)) in &bounds {
                    let slack = grid.slack(&d, r);
                    let (min_abs, max_abs) = abs_range_on_circle(&d, r, grid.angular_samples()).unwrap();
                    worst.see(big_m + slack - max_abs);
                    worst.see(min_abs - m + slack);
                }
                if let Some(prev) = params.prev() {
                    let h = mixture.expand(order);
                    let residual =
                        recurrence_residual(params, &iterate_closed(params, &h), &iterate_closed(prev, &h));
                    worst.see(COEFF_TOL - residual);
                }
            }
            let (m, big_m) = distortion_bounds(spec, SHARP_RADIUS).unwrap();
            let z = Complex64::new(SHARP_RADIUS, 0.0);
            let upper = distortion_expression(&extremal_b_upper(spec, order), spec);
            let lower = distortion_expression(&extremal_b_lower(spec, order), spec);
            worst.see(SHARP_TOL - (upper.evaluate(z).unwrap().norm() - big_m).abs());
            worst.see(SHARP_TOL - (lower.evaluate(z).unwrap().norm() - m).abs());
        }
        Suite::ClassConvexity => {
            for _ in 0..cfg.trials {
                let f = member(rng);
                let g = member(rng);
                let mu: f64 = rng.gen();
                let h = combine_convex(mu, f.as_series(), 1.0 - mu, g.as_series())
                    .expect("weights sum to 1");
                let h = SchlichtSeries::new(fix_normalization(h)).expect("normalized");
                worst.see(b_membership(&h, spec, grid).margin);
            }
        }
        Suite::Salagean => {
            let Ok(one_step) = OperatorParams::new(spec.sigma(), 1) else {
                return EntryOutcome::Skipped("needs sigma > 0".into());
            };
            for _ in 0..cfg.trials {
                let p = random_herglotz(rng).expand(order);
                let a = salagean_iterate(spec.sigma(), 1, &p).expect("sigma > 0");
                let b = iterate_closed(one_step, &p);
                let diff = a
                    .coeffs()
                    .iter()
                    .zip(b.coeffs())
                    .map(|(x, y)| (x - y).norm())
                    .fold(0.0, f64::max);
                worst.see(COEFF_TOL - diff);
            }
        }
    }
    EntryOutcome::Checked(worst.0)
}

/// `μ z + (1-μ) z` can round away from exactly `z`.
fn fix_normalization(h: TruncatedSeries) -> TruncatedSeries {
    let mut coeffs = h.into_coeffs();
    coeffs[0] = Complex64::new(0.0, 0.0);
    coeffs[1] = Complex64::new(1.0, 0.0);
    TruncatedSeries::new(coeffs).expect("finite")
}

/// `SHARP_TOL - | |f(r)| - bound |` at the sharpness radius.
fn sharpness(f: &SchlichtSeries, bound: f64) -> f64 {
    let value = f.evaluate(Complex64::new(SHARP_RADIUS, 0.0)).unwrap();
    SHARP_TOL - (value.norm() - bound).abs()
}

/// Coefficients `b` of `(f(w) - f(z)) / (w - z)` as a polynomial in `w`.
fn difference_quotient(f: &TruncatedSeries, z: Complex64) -> Vec<Complex64> {
    let a = f.coeffs();
    let n = a.len() - 1;
    let mut b = vec![Complex64::new(0.0, 0.0); n];
    if n == 0 {
        return b;
    }
    b[n - 1] = a[n];
    for j in (1..n).rev() {
        b[j - 1] = a[j] + z * b[j];
    }
    b
}

fn horner_with_derivative(b: &[Complex64], w: Complex64) -> (Complex64, Complex64) {
    let mut value = Complex64::new(0.0, 0.0);
    let mut deriv = Complex64::new(0.0, 0.0);
    for &c in b.iter().rev() {
        deriv = deriv * w + value;
        value = value * w + c;
    }
    (value, deriv)
}

fn random_point<R: Rng + ?Sized>(rng: &mut R, radius: f64) -> Complex64 {
    let r = radius * rng.gen::<f64>().sqrt();
    Complex64::from_polar(r, rng.gen_range(0.0..2.0 * std::f64::consts::PI))
}

/// Smallest `|f(z1) - f(z2)|` found over `pairs` collision searches in
/// `|z| <= radius`.
///
/// Each search fixes a random `z1` and runs Newton on `w ↦ (f(w) - f(z1))/(w - z1)`
/// from a random `w`. Only end points inside the disk and at least `1e-6`
/// from `z1` count. Infinite when no search ended at such a point.
pub fn injectivity_gap<R: Rng + ?Sized>(f: &SchlichtSeries, radius: f64, pairs: usize, rng: &mut R) -> f64 {
    let s = f.as_series();
    let mut gap = f64::INFINITY;
    for _ in 0..pairs {
        let z1 = random_point(rng, radius);
        let mut w = random_point(rng, radius);
        let b = difference_quotient(s, z1);
        for _ in 0..60 {
            let (q, dq) = horner_with_derivative(&b, w);
            if dq.norm() == 0.0 {
                break;
            }
            let step = q / dq;
            w -= step;
            if !(w.norm() < 2.0) || step.norm() < 1e-15 {
                break;
            }
        }
        if w.norm() <= radius && (w - z1).norm() > 1e-6 {
            gap = gap.min((s.eval_poly(w) - s.eval_poly(z1)).norm());
        }
    }
    gap
}

/// No collision `|f(z1) - f(z2)| < 1e-10`, `z1 ≠ z2`, is found among `pairs`
/// searches in `|z| <= min(0.9, largest grid radius)`. Seeded deterministically.
pub fn check_injectivity_sampled(f: &SchlichtSeries, grid: &CircleGrid, pairs: usize) -> bool {
    let radius = grid.radii().iter().cloned().fold(0.0, f64::max).min(INJECTIVITY_RADIUS);
    let mut rng = ChaCha8Rng::seed_from_u64(pairs as u64);
    !(injectivity_gap(f, radius, pairs, &mut rng) < COLLISION_TOL)
}
