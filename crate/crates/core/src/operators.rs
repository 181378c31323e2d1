//! Convolution operators on normalized series and the integral iteration of
//! Carathéodory functions.
//!
//! `L_n^σ` ([`differential_operator`]) and `l_n^σ` ([`integral_operator`]) are
//! the Hadamard products with `τ_σ * τ_{σ,n}^{-1}` and `τ_σ^{-1} * τ_{σ,n}`.
//! On `z^k` they act by `1/[σ]_{n/(k-1)}` and `[σ]_{n/(k-1)}`. The iteration
//!
//! ```text
//! p_{σ,m}(z) = (σ-m+1)/z^{σ-m+1} ∫_0^z t^{σ-m} p_{σ,m-1}(t) dt
//! ```
//!
//! multiplies `c_k` by `(σ-m+1)/(σ-m+1+k)` at each step; [`iterate_closed`]
//! applies the telescoped product and [`iterate_quadrature_step`] evaluates
//! one step by quadrature so the two can be checked against each other.

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64;
use std::num::NonZeroUsize;

use crate::error::{Error, Result};
use crate::kernels::{multiplier, tau_coeffs, tau_inv_coeffs, OperatorParams};
use crate::series::{convolve, SchlichtSeries, TruncatedSeries};

/// `L_n^σ f`: `a_k -> a_k / [σ]_{n/(k-1)}`.
pub fn differential_operator(params: OperatorParams, f: &SchlichtSeries) -> SchlichtSeries {
    f.scale_higher(|k| 1.0 / multiplier(params, k - 1).value())
}

/// `L_n^σ f` computed literally as `τ_σ * τ_{σ,n}^{-1} * f`.
pub fn differential_operator_by_convolution(
    params: OperatorParams,
    f: &SchlichtSeries,
) -> SchlichtSeries {
    let order = f.order();
    let base = OperatorParams::new(params.sigma(), 0).expect("σ > n - 1 >= -1");
    let kernel = convolve(&tau_coeffs(base, order), &tau_inv_coeffs(params, order));
    SchlichtSeries::new(convolve(&kernel, f.as_series())).expect("kernels keep z fixed")
}

/// `l_n^σ f`: `a_k -> [σ]_{n/(k-1)} a_k`.
pub fn integral_operator(params: OperatorParams, f: &SchlichtSeries) -> SchlichtSeries {
    f.scale_higher(|k| multiplier(params, k - 1).value())
}

/// `l_n^σ f` computed literally as `τ_σ^{-1} * τ_{σ,n} * f`.
pub fn integral_operator_by_convolution(
    params: OperatorParams,
    f: &SchlichtSeries,
) -> SchlichtSeries {
    let order = f.order();
    let base = OperatorParams::new(params.sigma(), 0).expect("σ > n - 1 >= -1");
    let kernel = convolve(&tau_inv_coeffs(base, order), &tau_coeffs(params, order));
    SchlichtSeries::new(convolve(&kernel, f.as_series())).expect("kernels keep z fixed")
}

fn ruscheweyh_base(sigma: f64) -> Result<OperatorParams> {
    if sigma > -1.0 {
        OperatorParams::new(sigma, 0)
    } else {
        Err(Error::InvalidParams { sigma, n: 0 })
    }
}

/// Ruscheweyh derivative `D^σ f = z/(1-z)^{σ+1} * f`, `σ > -1`.
pub fn ruscheweyh(sigma: f64, f: &SchlichtSeries) -> Result<SchlichtSeries> {
    let kernel = tau_coeffs(ruscheweyh_base(sigma)?, f.order());
    SchlichtSeries::new(convolve(&kernel, f.as_series()))
}

/// Noor integral `I_σ f`, the convolution inverse of [`ruscheweyh`].
pub fn noor(sigma: f64, f: &SchlichtSeries) -> Result<SchlichtSeries> {
    let kernel = tau_inv_coeffs(ruscheweyh_base(sigma)?, f.order());
    SchlichtSeries::new(convolve(&kernel, f.as_series()))
}

/// `c_k -> [σ]_{n/k} c_k`; the constant term is untouched.
pub fn iterate_closed(params: OperatorParams, p: &TruncatedSeries) -> TruncatedSeries {
    p.scale_coeffs(|k| if k == 0 { 1.0 } else { multiplier(params, k).value() })
}

/// Inverse of [`iterate_closed`]: `c_k -> c_k / [σ]_{n/k}`.
pub fn deiterate(params: OperatorParams, q: &TruncatedSeries) -> TruncatedSeries {
    q.scale_coeffs(|k| {
        if k == 0 {
            1.0
        } else {
            1.0 / multiplier(params, k).value()
        }
    })
}

/// Step `m` of the iteration alone: `c_k -> (σ-m+1)/(σ-m+1+k) c_k`.
pub fn iterate_step(sigma: f64, m: u32, p: &TruncatedSeries) -> Result<TruncatedSeries> {
    let a = step_exponent(sigma, m)?;
    Ok(p.scale_coeffs(|k| a / (a + k as f64)))
}

fn step_exponent(sigma: f64, m: u32) -> Result<f64> {
    let a = sigma - m as f64 + 1.0;
    if m >= 1 && a > 0.0 {
        Ok(a)
    } else {
        Err(Error::InvalidParams {
            sigma,
            n: m as i64,
        })
    }
}

/// One-parameter iteration `p_n = (α/z^α) ∫_0^z t^{α-1} p_{n-1}(t) dt`,
/// `c_k -> (α/(α+k))^n c_k`.
pub fn salagean_iterate(alpha: f64, n: u32, p: &TruncatedSeries) -> Result<TruncatedSeries> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidParams {
            sigma: alpha,
            n: n as i64,
        });
    }
    Ok(p.scale_coeffs(|k| (alpha / (alpha + k as f64)).powi(n as i32)))
}

/// Bernardi integral `F = ((c+1)/z^c) ∫_0^z t^{c-1} f(t) dt`: `a_k -> (c+1)/(c+k) a_k`.
pub fn bernardi(c: f64, f: &SchlichtSeries) -> Result<SchlichtSeries> {
    if !(c + 1.0 > 0.0) {
        return Err(Error::InvalidBernardi(c));
    }
    Ok(f.scale_higher(|k| (c + 1.0) / (c + k as f64)))
}

/// Largest coefficient of `(σ-n+1) p_n + z p_n' - (σ-n+1) p_{n-1}`.
pub fn recurrence_residual(
    params: OperatorParams,
    p_n: &TruncatedSeries,
    p_prev: &TruncatedSeries,
) -> f64 {
    let a = params.exponent();
    p_n.coeffs()
        .iter()
        .zip(p_prev.coeffs())
        .enumerate()
        .map(|(k, (cur, prev))| (cur * (a + k as f64) - prev * a).norm())
        .fold(0.0, f64::max)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuadratureRule {
    GaussLegendre { points: usize },
}

/// Composite rule on the radial segment `[0, z]`.
#[derive(Clone, Debug)]
pub struct QuadratureConfig {
    panels: usize,
    rule: QuadratureRule,
    nodes: Vec<(f64, f64)>,
}

impl QuadratureConfig {
    pub fn new(panels: usize, rule: QuadratureRule) -> Result<Self> {
        if panels < 16 {
            return Err(Error::InvalidQuadrature(format!(
                "need at least 16 panels, got {panels}"
            )));
        }
        let QuadratureRule::GaussLegendre { points } = rule;
        let degree = NonZeroUsize::new(points)
            .ok_or_else(|| Error::InvalidQuadrature("rule needs at least one point".into()))?;
        // nodes mapped from [-1, 1] to [0, 1]
        let nodes = GaussLegendre::new(degree)
            .as_node_weight_pairs()
            .iter()
            .map(|&(x, w)| (0.5 * (x + 1.0), 0.5 * w))
            .collect();
        Ok(Self {
            panels,
            rule,
            nodes,
        })
    }

    pub fn panels(&self) -> usize {
        self.panels
    }

    pub fn rule(&self) -> QuadratureRule {
        self.rule
    }

    fn integrate_unit(&self, f: impl Fn(f64) -> Complex64) -> Complex64 {
        let h = 1.0 / self.panels as f64;
        (0..self.panels)
            .map(|i| {
                let left = i as f64 * h;
                self.nodes
                    .iter()
                    .map(|&(x, w)| f(left + h * x) * (w * h))
                    .sum::<Complex64>()
            })
            .sum()
    }
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self::new(64, QuadratureRule::GaussLegendre { points: 10 }).expect("valid default")
    }
}

/// Step `m` of the iteration evaluated at `z` by quadrature on `[0, z]`.
///
/// With `t = s z` and `a = σ-m+1` the step is `a ∫_0^1 s^{a-1} p(sz) ds`.
/// The substitution `s = u^q` (integer `q` with `qa >= 8`) turns the weight
/// into `a q u^{qa-1}`, smooth enough at 0 for Gauss-Legendre panels.
pub fn iterate_quadrature_step_fn(
    sigma: f64,
    m: u32,
    p_prev: impl Fn(Complex64) -> Complex64,
    z: Complex64,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    let a = step_exponent(sigma, m)?;
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::ZeroPoint);
    }
    if !(z.norm() < 1.0) {
        return Err(Error::OutsideDisk(z.norm()));
    }
    Ok(quadrature_step(a, &p_prev, z, cfg))
}

fn quadrature_step(
    a: f64,
    p_prev: &dyn Fn(Complex64) -> Complex64,
    z: Complex64,
    cfg: &QuadratureConfig,
) -> Complex64 {
    let q = (8.0 / a).ceil().max(1.0);
    let weight_power = q * a - 1.0;
    let qi = q as i32;
    cfg.integrate_unit(|u| p_prev(z * u.powi(qi)) * (a * q * u.powf(weight_power)))
}

/// [`iterate_quadrature_step_fn`] for a stored series.
pub fn iterate_quadrature_step(
    sigma: f64,
    m: u32,
    p_prev: &TruncatedSeries,
    z: Complex64,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    iterate_quadrature_step_fn(sigma, m, |t| p_prev.eval_poly(t), z, cfg)
}

/// All `n` steps by nested quadrature. Cost grows like `(panels * points)^n`.
pub fn iterate_quadrature(
    params: OperatorParams,
    p: &TruncatedSeries,
    z: Complex64,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    if params.n() == 0 {
        return p.evaluate(z);
    }
    if z == Complex64::new(0.0, 0.0) {
        return Err(Error::ZeroPoint);
    }
    if !(z.norm() < 1.0) {
        return Err(Error::OutsideDisk(z.norm()));
    }
    fn nested(
        sigma: f64,
        m: u32,
        p: &TruncatedSeries,
        z: Complex64,
        cfg: &QuadratureConfig,
    ) -> Complex64 {
        if m == 0 {
            return p.eval_poly(z);
        }
        let a = sigma - m as f64 + 1.0;
        quadrature_step(a, &|t| nested(sigma, m - 1, p, t, cfg), z, cfg)
    }
    Ok(nested(params.sigma(), params.n(), p, z, cfg))
}
