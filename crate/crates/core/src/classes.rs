//! Membership checks, seeded generators, extremal functions and the
//! closed-form bound evaluators for `P(β)`, `P_n^σ` and `B_n^σ(β)`.
//!
//! Positivity of a real part on the open disk is checked on a finite set of
//! circles. Each circle carries a slack of `tail_bound(r) + tolerance`, so a
//! verdict accounts for the coefficients the truncation dropped.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::io::Write;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernels::{extremal_iterate, multiplier, multiplier_extended, OperatorParams};
use crate::operators::{deiterate, differential_operator, iterate_closed};
use crate::series::{check_beta, shift_to_beta, HerglotzMixture, SchlichtSeries, TruncatedSeries};

/// The class triple `(σ, n, β)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ClassSpec {
    params: OperatorParams,
    beta: f64,
}

impl ClassSpec {
    pub fn new(params: OperatorParams, beta: f64) -> Result<Self> {
        check_beta(beta)?;
        Ok(Self { params, beta })
    }

    pub fn from_parts(sigma: f64, n: i64, beta: f64) -> Result<Self> {
        Self::new(OperatorParams::new(sigma, n)?, beta)
    }

    pub fn params(&self) -> OperatorParams {
        self.params
    }

    pub fn sigma(&self) -> f64 {
        self.params.sigma()
    }

    pub fn n(&self) -> u32 {
        self.params.n()
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn with_params(&self, params: OperatorParams) -> Self {
        Self {
            params,
            beta: self.beta,
        }
    }
}

/// What is assumed about the coefficients a series did not store.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum TailModel {
    /// The series is a truncation; its tail is bounded by
    /// [`TruncatedSeries::tail_bound`].
    #[default]
    Envelope,
    /// The series is an exact polynomial.
    Exact,
}

/// Circles `|z| = r` sampled at equally spaced angles starting from `θ = 0`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CircleGrid {
    radii: Vec<f64>,
    angular_samples: usize,
    tolerance: f64,
    tail: TailModel,
}

impl CircleGrid {
    pub fn new(radii: Vec<f64>, angular_samples: usize, tolerance: f64) -> Result<Self> {
        if radii.is_empty() {
            return Err(Error::InvalidGrid("no radii".into()));
        }
        if let Some(r) = radii.iter().find(|r| !(**r > 0.0 && **r < 1.0)) {
            return Err(Error::InvalidGrid(format!("radius {r} outside (0, 1)")));
        }
        if angular_samples < 64 {
            return Err(Error::InvalidGrid(format!(
                "need at least 64 angular samples, got {angular_samples}"
            )));
        }
        if !(tolerance > 0.0) {
            return Err(Error::InvalidGrid(format!("tolerance {tolerance} must be positive")));
        }
        Ok(Self {
            radii,
            angular_samples,
            tolerance,
            tail: TailModel::Envelope,
        })
    }

    pub fn with_tail(mut self, tail: TailModel) -> Self {
        self.tail = tail;
        self
    }

    pub fn tail(&self) -> TailModel {
        self.tail
    }

    /// `tail bound + tolerance` for `s` at radius `r`.
    pub fn slack(&self, s: &TruncatedSeries, r: f64) -> f64 {
        let tail = match self.tail {
            TailModel::Envelope => s.tail_bound(r),
            TailModel::Exact => 0.0,
        };
        tail + self.tolerance
    }

    pub fn radii(&self) -> &[f64] {
        &self.radii
    }

    pub fn angular_samples(&self) -> usize {
        self.angular_samples
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    pub fn points(&self, r: f64) -> impl Iterator<Item = Complex64> + '_ {
        circle_points(r, self.angular_samples)
    }
}

impl Default for CircleGrid {
    fn default() -> Self {
        Self::new(vec![0.5, 0.9, 0.99], 720, 1e-9).expect("valid default grid")
    }
}

thread_local! {
    static PLANNER: RefCell<FftPlanner<f64>> = RefCell::new(FftPlanner::new());
}

/// `s(r e^{2πij/m})` for `j = 0..m`, by one inverse DFT of the coefficients
/// `c_k r^k` folded modulo `m`.
pub fn circle_values(s: &TruncatedSeries, r: f64, m: usize) -> Vec<Complex64> {
    let m = m.max(1);
    let mut buf = vec![Complex64::new(0.0, 0.0); m];
    let mut power = 1.0;
    for (k, c) in s.coeffs().iter().enumerate() {
        buf[k % m] += c * power;
        power *= r;
    }
    let fft = PLANNER.with(|p| p.borrow_mut().plan_fft_inverse(m));
    fft.process(&mut buf);
    buf
}

fn circle_points(r: f64, m: usize) -> impl Iterator<Item = Complex64> {
    (0..m).map(move |j| Complex64::from_polar(r, 2.0 * PI * j as f64 / m as f64))
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidRadius(r))
    }
}

/// Minimum of `Re s(r e^{iθ})` over `m` equally spaced angles.
pub fn min_re_on_circle(s: &TruncatedSeries, r: f64, m: usize) -> Result<f64> {
    Ok(re_range_on_circle(s, r, m)?.0)
}

/// `(min, max)` of `Re s` on the sampled circle.
pub fn re_range_on_circle(s: &TruncatedSeries, r: f64, m: usize) -> Result<(f64, f64)> {
    check_radius(r)?;
    Ok(circle_values(s, r, m)
        .into_iter()
        .map(|v| v.re)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        }))
}

/// `(min, max)` of `|s|` on the sampled circle.
pub fn abs_range_on_circle(s: &TruncatedSeries, r: f64, m: usize) -> Result<(f64, f64)> {
    check_radius(r)?;
    Ok(circle_values(s, r, m)
        .into_iter()
        .map(|v| v.norm())
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    /// Holds even after subtracting the slack.
    Pass,
    /// Violated by more than the slack.
    Fail,
    /// Within the slack of the boundary.
    Inconclusive,
}

/// Outcome of a sampled real-part check.
///
/// `margin` is the smallest `min Re - floor + slack` over the grid circles;
/// the check is violated exactly when it is not positive.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Membership {
    pub verdict: Verdict,
    pub margin: f64,
}

impl Membership {
    /// Members are everything not refuted: pass or inconclusive.
    pub fn is_member(&self) -> bool {
        self.verdict != Verdict::Fail
    }
}

/// `Re s > floor` on every grid circle, up to the circle's slack.
pub fn real_part_above(s: &TruncatedSeries, floor: f64, grid: &CircleGrid) -> Membership {
    let mut margin = f64::INFINITY;
    let mut certain = f64::INFINITY;
    for &r in grid.radii() {
        let (lo, _) = re_range_on_circle(s, r, grid.angular_samples()).expect("grid radii are valid");
        let slack = grid.slack(s, r);
        margin = margin.min(lo - floor + slack);
        certain = certain.min(lo - floor - slack);
    }
    let verdict = if !(margin > 0.0) {
        Verdict::Fail
    } else if certain > 0.0 {
        Verdict::Pass
    } else {
        Verdict::Inconclusive
    };
    Membership { verdict, margin }
}

pub fn p_beta_membership(p: &TruncatedSeries, beta: f64, grid: &CircleGrid) -> Membership {
    real_part_above(p, beta, grid)
}

pub fn is_in_p_beta(p: &TruncatedSeries, beta: f64, grid: &CircleGrid) -> bool {
    p_beta_membership(p, beta, grid).is_member()
}

/// `q` lies in `P_n^σ` iff undoing the iteration lands in `P`.
pub fn pn_sigma_membership(q: &TruncatedSeries, params: OperatorParams, grid: &CircleGrid) -> Membership {
    real_part_above(&deiterate(params, q), 0.0, grid)
}

pub fn is_in_pn_sigma(q: &TruncatedSeries, params: OperatorParams, grid: &CircleGrid) -> bool {
    pn_sigma_membership(q, params, grid).is_member()
}

/// `(f(z)/z - β)/(1 - β)`.
pub fn normalized_quotient(f: &SchlichtSeries, beta: f64) -> TruncatedSeries {
    f.divide_by_z()
        .scale_coeffs(|k| if k == 0 { 1.0 } else { 1.0 / (1.0 - beta) })
}

/// Membership in `B_n^σ(β)` through `(f/z - β)/(1 - β) ∈ P_n^σ`.
pub fn b_membership(f: &SchlichtSeries, spec: ClassSpec, grid: &CircleGrid) -> Membership {
    pn_sigma_membership(&normalized_quotient(f, spec.beta), spec.params, grid)
}

/// Membership in `B_n^σ(β)` through the defining condition `Re L_n^σ f / z > β`.
pub fn b_membership_direct(f: &SchlichtSeries, spec: ClassSpec, grid: &CircleGrid) -> Membership {
    let lf = differential_operator(spec.params, f);
    real_part_above(&lf.divide_by_z(), spec.beta, grid)
}

pub fn is_in_b(f: &SchlichtSeries, spec: ClassSpec, grid: &CircleGrid) -> bool {
    b_membership(f, spec, grid).is_member()
}

/// A random finite Herglotz mixture. One draw in eight is a single atom at
/// `±1`, which produces the extremal functions.
pub fn random_herglotz<R: Rng + ?Sized>(rng: &mut R) -> HerglotzMixture {
    if rng.gen_ratio(1, 8) {
        let theta = if rng.gen_bool(0.5) { 0.0 } else { PI };
        return HerglotzMixture::from_angles(&[(theta, 1.0)]).expect("single atom");
    }
    let count = rng.gen_range(1..=4);
    let raw: Vec<(f64, f64)> = (0..count)
        .map(|_| (rng.gen_range(0.0..2.0 * PI), rng.gen_range(0.05..1.0)))
        .collect();
    let total: f64 = raw.iter().map(|(_, w)| w).sum();
    let atoms: Vec<(f64, f64)> = raw.iter().map(|&(t, w)| (t, w / total)).collect();
    HerglotzMixture::from_angles(&atoms).expect("normalized weights")
}

/// `z [β + (1 - β) p_{σ,n}]` where `p_{σ,n}` iterates the mixture; order `N`.
pub fn member_from_mixture(spec: ClassSpec, mixture: &HerglotzMixture, order: usize) -> SchlichtSeries {
    let p = iterate_closed(spec.params, &mixture.expand(order.max(2) - 1));
    let shifted = shift_to_beta(&p, spec.beta).expect("spec holds a valid beta");
    SchlichtSeries::z_times(&shifted).expect("shifted series has constant term 1")
}

pub fn random_member_b(spec: ClassSpec, seed: u64, order: usize) -> SchlichtSeries {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    member_from_mixture(spec, &random_herglotz(&mut rng), order)
}

/// A random element of `P_n^σ` of order `N`.
pub fn random_iterate<R: Rng + ?Sized>(params: OperatorParams, rng: &mut R, order: usize) -> TruncatedSeries {
    iterate_closed(params, &random_herglotz(rng).expand(order))
}

/// Inflates `a_2` of a member along `direction` (doubling the step) until
/// the defining condition fails on `grid`.
pub fn inflate_to_non_member(
    f: &SchlichtSeries,
    spec: ClassSpec,
    grid: &CircleGrid,
    direction: Complex64,
) -> SchlichtSeries {
    let mut step = coefficient_bound(spec, 2).max(1e-3);
    loop {
        let mut coeffs = f.as_series().coeffs().to_vec();
        coeffs[2] += direction * step;
        let g = SchlichtSeries::new(TruncatedSeries::new(coeffs).expect("finite"))
            .expect("normalization untouched");
        if !b_membership_direct(&g, spec, grid).is_member() {
            return g;
        }
        step *= 2.0;
    }
}

/// Sharp bound `2 (1 - β) [σ]_{n/(k-1)}` on `|a_k|`, `k >= 2`.
pub fn coefficient_bound(spec: ClassSpec, k: usize) -> f64 {
    2.0 * (1.0 - spec.beta) * multiplier(spec.params, k - 1).value()
}

fn extremal_b(spec: ClassSpec, order: usize, alternating: bool) -> SchlichtSeries {
    let higher: Vec<Complex64> = (2..=order.max(1))
        .map(|k| {
            let sign = if alternating && k % 2 == 0 { -1.0 } else { 1.0 };
            Complex64::new(sign * coefficient_bound(spec, k), 0.0)
        })
        .collect();
    SchlichtSeries::from_higher(&higher).expect("finite coefficients")
}

/// `z + 2(1-β) sum_{k>=2} [σ]_{n/(k-1)} z^k`, attaining every upper bound.
pub fn extremal_b_upper(spec: ClassSpec, order: usize) -> SchlichtSeries {
    extremal_b(spec, order, false)
}

/// `z + 2(1-β) sum_{k>=2} (-1)^{k-1} [σ]_{n/(k-1)} z^k`, attaining the lower bounds.
pub fn extremal_b_lower(spec: ClassSpec, order: usize) -> SchlichtSeries {
    extremal_b(spec, order, true)
}

/// `L_{σ,n}(±z)` for the class parameters.
pub fn extremal_p(spec: ClassSpec, order: usize, sign: f64) -> TruncatedSeries {
    extremal_iterate(spec.params, order, sign)
}

const MAX_TERMS: usize = 50_000_000;

/// `sum_{k>=1} [σ]_{n/k} x^k` for `|x| < 1` (with `n = -1` allowed) and a
/// bound on what was left out.
fn multiplier_power_sum(sigma: f64, n: i64, x: f64) -> (f64, f64) {
    let r = x.abs();
    let mut sum = 0.0;
    let mut power = 1.0;
    for k in 1..=MAX_TERMS {
        power *= x;
        let m = multiplier_extended(sigma, n, k).expect("validated parameters");
        sum += m * power;
        let next = r * power.abs();
        let remainder = if n >= 0 {
            // multipliers decrease in k
            m * next / (1.0 - r)
        } else {
            // (σ+1+j)/(σ+1) summed over j > k
            next / (sigma + 1.0)
                * ((sigma + 2.0 + k as f64) / (1.0 - r) + r / ((1.0 - r) * (1.0 - r)))
        };
        if remainder <= 1e-17 * sum.abs().max(1.0) || next == 0.0 {
            return (sum, remainder);
        }
        if k == MAX_TERMS {
            return (sum, remainder);
        }
    }
    unreachable!()
}

/// Bounds for `p ∈ P_n^σ` at `|z| = r`: `Re p >= 1 + 2 sum [σ]_{n/k} (-r)^k`
/// and `|p| <= 1 + 2 sum [σ]_{n/k} r^k`, returned as `(re_lower, abs_upper)`
/// and widened by the summation remainder.
pub fn iterate_bounds(params: OperatorParams, r: f64) -> Result<(f64, f64)> {
    check_radius(r)?;
    let n = params.n() as i64;
    let (up, up_rem) = multiplier_power_sum(params.sigma(), n, r);
    let (down, down_rem) = multiplier_power_sum(params.sigma(), n, -r);
    Ok((1.0 + 2.0 * (down - down_rem), 1.0 + 2.0 * (up + up_rem)))
}

/// Bounds on `|f(z)|`, `|z| = r`, for `f ∈ B_n^σ(β)`:
/// `r + 2(1-β) sum (∓1)^{k-1} [σ]_{n/(k-1)} r^k`. The interval is widened by
/// the summation remainder so it contains the exact pair.
pub fn growth_bounds(spec: ClassSpec, r: f64) -> Result<(f64, f64)> {
    check_radius(r)?;
    let sigma = spec.sigma();
    let n = spec.n() as i64;
    let scale = 2.0 * (1.0 - spec.beta) * r;
    let (up, up_rem) = multiplier_power_sum(sigma, n, r);
    let (down, down_rem) = multiplier_power_sum(sigma, n, -r);
    Ok((r + scale * (down - down_rem), r + scale * (up + up_rem)))
}

/// Radius of the disk contained in `f(E)` for every `f ∈ B_n^σ(β)`:
/// `1 + 2(1-β) sum_{k>=2} (-1)^{k-1} [σ]_{n/(k-1)}`.
///
/// The terms are completely monotone in `k`, so the mean of two consecutive
/// partial sums is within half the next difference of the limit; summation
/// stops once that is below `tol`.
pub fn covering_constant(spec: ClassSpec, tol: f64) -> Result<f64> {
    if spec.n() == 0 {
        return Err(Error::DivergentCovering);
    }
    let scale = 2.0 * (1.0 - spec.beta);
    let b = |j: usize| multiplier(spec.params, j).value();
    let mut partial = 0.0;
    let mut j = 1;
    loop {
        let sign = if j % 2 == 1 { -1.0 } else { 1.0 };
        partial += sign * b(j);
        let next = b(j + 1);
        let bound = scale * 0.5 * (next - b(j + 2));
        if bound < tol || j >= MAX_TERMS {
            let averaged = partial - sign * 0.5 * next;
            return Ok(1.0 + scale * averaged);
        }
        j += 1;
    }
}

/// `(σ-n) f(z)/z + f'(z)`, which equals `(σ-n+1) [β + (1-β) p_{σ,n-1}]` on the class.
pub fn distortion_expression(f: &SchlichtSeries, spec: ClassSpec) -> TruncatedSeries {
    let shift = spec.sigma() - spec.n() as f64;
    f.divide_by_z()
        .linear_combination(shift.into(), &f.as_series().differentiate(), 1.0.into())
}

/// Bounds `(m, M)` on `|(σ-n) f/z + f'|` at `|z| = r`:
/// `(σ-n+1) [1 + 2(1-β) sum [σ]_{(n-1)/k} (±r)^k]`. For `n = 0` the lowered
/// multiplier `(σ+k+1)/(σ+1)` is used.
pub fn distortion_bounds(spec: ClassSpec, r: f64) -> Result<(f64, f64)> {
    check_radius(r)?;
    let a = spec.params.exponent();
    let lowered = spec.n() as i64 - 1;
    let scale = 2.0 * (1.0 - spec.beta);
    let (up, up_rem) = multiplier_power_sum(spec.sigma(), lowered, r);
    let (down, down_rem) = multiplier_power_sum(spec.sigma(), lowered, -r);
    Ok((
        a * (1.0 + scale * (down - down_rem)),
        a * (1.0 + scale * (up + up_rem)),
    ))
}

/// One row of the exported bound table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BoundRow {
    pub sigma: f64,
    pub n: u32,
    pub beta: f64,
    pub r: f64,
    pub m_lower: f64,
    #[serde(rename = "M_upper")]
    pub m_upper: f64,
    pub growth_lower: f64,
    pub growth_upper: f64,
    /// Empty for `n = 0`.
    pub covering_constant: Option<f64>,
}

pub fn bound_table(specs: &[ClassSpec], radii: &[f64]) -> Result<Vec<BoundRow>> {
    let mut rows = Vec::with_capacity(specs.len() * radii.len());
    for &spec in specs {
        let covering = match covering_constant(spec, 1e-12) {
            Ok(c) => Some(c),
            Err(Error::DivergentCovering) => None,
            Err(e) => return Err(e),
        };
        for &r in radii {
            let (m_lower, m_upper) = distortion_bounds(spec, r)?;
            let (growth_lower, growth_upper) = growth_bounds(spec, r)?;
            rows.push(BoundRow {
                sigma: spec.sigma(),
                n: spec.n(),
                beta: spec.beta(),
                r,
                m_lower,
                m_upper,
                growth_lower,
                growth_upper,
                covering_constant: covering,
            });
        }
    }
    Ok(rows)
}

/// CSV with header `sigma,n,beta,r,m_lower,M_upper,growth_lower,growth_upper,covering_constant`.
pub fn write_bound_table<W: Write>(rows: &[BoundRow], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    for row in rows {
        writer
            .serialize(row)
            .map_err(|e| Error::InvalidList(e.to_string()))?;
    }
    writer
        .flush()
        .map_err(|e| Error::InvalidList(e.to_string()))?;
    Ok(())
}
