//! Value-semantic truncated power series.
//!
//! A [`TruncatedSeries`] of order `N` stores `c_0, ..., c_N` and stands for
//! `c_0 + c_1 z + ... + c_N z^N + O(z^{N+1})`. All values are immutable after
//! construction; every operation returns a new series.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const WEIGHT_SUM_TOL: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries {
    coeffs: Vec<Complex64>,
}

/// On-disk layout: `{"order": N, "coeffs": [[re, im], ...]}` with `N + 1` pairs.
#[derive(Serialize, Deserialize)]
struct SeriesFile {
    order: usize,
    coeffs: Vec<[f64; 2]>,
}

impl TruncatedSeries {
    pub fn new(coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::LengthMismatch { order: 0, len: 0 });
        }
        if let Some(index) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        Ok(Self { coeffs })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn zeros(order: usize) -> Self {
        Self {
            coeffs: vec![Complex64::new(0.0, 0.0); order + 1],
        }
    }

    pub fn constant(value: Complex64, order: usize) -> Self {
        let mut s = Self::zeros(order);
        s.coeffs[0] = value;
        s
    }

    pub fn one(order: usize) -> Self {
        Self::constant(Complex64::new(1.0, 0.0), order)
    }

    /// `1/(1-z) = 1 + z + z^2 + ...`
    pub fn geometric(order: usize) -> Self {
        Self {
            coeffs: vec![Complex64::new(1.0, 0.0); order + 1],
        }
    }

    /// The Möbius function `(1+z)/(1-z) = 1 + 2z + 2z^2 + ...`.
    pub fn mobius(order: usize) -> Self {
        let mut s = Self {
            coeffs: vec![Complex64::new(2.0, 0.0); order + 1],
        };
        s.coeffs[0] = Complex64::new(1.0, 0.0);
        s
    }

    pub(crate) fn from_fn(order: usize, f: impl FnMut(usize) -> Complex64) -> Self {
        Self {
            coeffs: (0..=order).map(f).collect(),
        }
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<Complex64> {
        self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.coeffs[k]
    }

    pub fn truncate(&self, order: usize) -> Self {
        Self {
            coeffs: self.coeffs[..=order.min(self.order())].to_vec(),
        }
    }

    /// Multiplies coefficient `k` by `m(k)`.
    pub fn scale_coeffs(&self, mut m: impl FnMut(usize) -> f64) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .enumerate()
                .map(|(k, c)| c * m(k))
                .collect(),
        }
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c * factor).collect(),
        }
    }

    /// `alpha * self + beta * other`, truncated to the smaller order.
    pub fn linear_combination(&self, alpha: Complex64, other: &Self, beta: Complex64) -> Self {
        Self {
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| alpha * a + beta * b)
                .collect(),
        }
    }

    /// Horner evaluation of the stored polynomial. Rejects `|z| >= 1`.
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        if !(z.norm() < 1.0) {
            return Err(Error::OutsideDisk(z.norm()));
        }
        Ok(self.eval_poly(z))
    }

    pub(crate) fn eval_poly(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::new(0.0, 0.0), |acc, c| acc * z + c)
    }

    /// Coefficient `k` of the result is `(k+1) c_{k+1}`; a constant yields the zero constant.
    pub fn differentiate(&self) -> Self {
        if self.order() == 0 {
            return Self::zeros(0);
        }
        Self {
            coeffs: self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(k, c)| c * (k + 1) as f64)
                .collect(),
        }
    }

    /// Largest `|c_k|` over the upper half of the stored range, `N/2 < k <= N`.
    ///
    /// Used as the assumed bound on the unknown tail coefficients.
    pub fn tail_envelope(&self) -> f64 {
        let n = self.order();
        (n / 2 + 1..=n)
            .map(|k| self.coeffs[k].norm())
            .fold(0.0, f64::max)
    }

    /// Bound on `|sum_{k>N} c_k z^k|` at `|z| = r`, assuming `|c_k| <= tail_envelope()`.
    pub fn tail_bound(&self, r: f64) -> f64 {
        geometric_tail(self.tail_envelope(), r, self.order())
    }

    pub fn to_json(&self) -> String {
        let file = SeriesFile {
            order: self.order(),
            coeffs: self.coeffs.iter().map(|c| [c.re, c.im]).collect(),
        };
        serde_json::to_string(&file).expect("series serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SeriesFile = serde_json::from_str(text)?;
        if file.coeffs.len() != file.order.wrapping_add(1) {
            return Err(Error::LengthMismatch {
                order: file.order,
                len: file.coeffs.len(),
            });
        }
        Self::new(
            file.coeffs
                .into_iter()
                .map(|[re, im]| Complex64::new(re, im))
                .collect(),
        )
    }
}

/// `bound * r^{N+1} / (1 - r)`: the geometric tail of a series whose
/// coefficients beyond `N` are at most `bound` in modulus.
pub fn geometric_tail(bound: f64, r: f64, order: usize) -> f64 {
    if bound == 0.0 {
        return 0.0;
    }
    bound * r.powi(order as i32 + 1) / (1.0 - r)
}

/// Hadamard product: coefficient `k` is `f_k g_k`, truncated to the smaller order.
pub fn convolve(f: &TruncatedSeries, g: &TruncatedSeries) -> TruncatedSeries {
    TruncatedSeries {
        coeffs: f.coeffs.iter().zip(&g.coeffs).map(|(a, b)| a * b).collect(),
    }
}

/// `beta + (1 - beta) p`, moving `p` from `P` into `P(beta)`. Expects `p_0 = 1`.
pub fn shift_to_beta(p: &TruncatedSeries, beta: f64) -> Result<TruncatedSeries> {
    check_beta(beta)?;
    Ok(p.scale_coeffs(|k| if k == 0 { 1.0 } else { 1.0 - beta }))
}

pub fn combine_convex(
    mu1: f64,
    f: &TruncatedSeries,
    mu2: f64,
    g: &TruncatedSeries,
) -> Result<TruncatedSeries> {
    if !(mu1 >= 0.0 && mu2 >= 0.0 && (mu1 + mu2 - 1.0).abs() <= WEIGHT_SUM_TOL) {
        return Err(Error::InvalidWeights(mu1, mu2));
    }
    Ok(f.linear_combination(mu1.into(), g, mu2.into()))
}

pub(crate) fn check_beta(beta: f64) -> Result<()> {
    if (0.0..1.0).contains(&beta) {
        Ok(())
    } else {
        Err(Error::InvalidBeta(beta))
    }
}

/// A series normalized as `z + a_2 z^2 + ...` (`c_0 = 0`, `c_1 = 1` exactly).
#[derive(Clone, Debug, PartialEq)]
pub struct SchlichtSeries {
    inner: TruncatedSeries,
}

impl SchlichtSeries {
    pub fn new(inner: TruncatedSeries) -> Result<Self> {
        if inner.order() < 1 {
            return Err(Error::NotNormalized("order must be at least 1".into()));
        }
        if inner.coeffs[0] != Complex64::new(0.0, 0.0) {
            return Err(Error::NotNormalized(format!(
                "constant term is {}",
                inner.coeffs[0]
            )));
        }
        if inner.coeffs[1] != Complex64::new(1.0, 0.0) {
            return Err(Error::NotNormalized(format!(
                "linear coefficient is {}",
                inner.coeffs[1]
            )));
        }
        Ok(Self { inner })
    }

    /// The identity `f(z) = z`.
    pub fn identity(order: usize) -> Self {
        let mut inner = TruncatedSeries::zeros(order.max(1));
        inner.coeffs[1] = Complex64::new(1.0, 0.0);
        Self { inner }
    }

    /// `z + a_2 z^2 + ... + a_N z^N` from `higher = [a_2, ..., a_N]`.
    pub fn from_higher(higher: &[Complex64]) -> Result<Self> {
        let mut coeffs = Vec::with_capacity(higher.len() + 2);
        coeffs.push(Complex64::new(0.0, 0.0));
        coeffs.push(Complex64::new(1.0, 0.0));
        coeffs.extend_from_slice(higher);
        Self::new(TruncatedSeries::new(coeffs)?)
    }

    /// `z p(z)` for a series with `p_0 = 1`; the order grows by one.
    pub fn z_times(p: &TruncatedSeries) -> Result<Self> {
        let mut coeffs = Vec::with_capacity(p.coeffs.len() + 1);
        coeffs.push(Complex64::new(0.0, 0.0));
        coeffs.extend_from_slice(&p.coeffs);
        Self::new(TruncatedSeries { coeffs })
    }

    /// `f(z)/z`, one order lower; its constant term is 1.
    pub fn divide_by_z(&self) -> TruncatedSeries {
        TruncatedSeries {
            coeffs: self.inner.coeffs[1..].to_vec(),
        }
    }

    /// Multiplies `a_k` (`k >= 2`) by `m(k)`, keeping the normalization.
    pub(crate) fn scale_higher(&self, mut m: impl FnMut(usize) -> f64) -> Self {
        Self {
            inner: self
                .inner
                .scale_coeffs(|k| if k < 2 { 1.0 } else { m(k) }),
        }
    }

    pub fn as_series(&self) -> &TruncatedSeries {
        &self.inner
    }

    pub fn into_inner(self) -> TruncatedSeries {
        self.inner
    }

    pub fn order(&self) -> usize {
        self.inner.order()
    }

    pub fn coeff(&self, k: usize) -> Complex64 {
        self.inner.coeff(k)
    }

    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        self.inner.evaluate(z)
    }

    pub fn to_json(&self) -> String {
        self.inner.to_json()
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::new(TruncatedSeries::from_json(text)?)
    }
}

/// Convex combination of Möbius atoms `(1 + x z)/(1 - x z)`, `|x| = 1`.
///
/// Every member of the Carathéodory class is a limit of such mixtures.
#[derive(Clone, Debug, PartialEq)]
pub struct HerglotzMixture {
    atoms: Vec<(Complex64, f64)>,
}

impl HerglotzMixture {
    pub fn new(atoms: Vec<(Complex64, f64)>) -> Result<Self> {
        if atoms.is_empty() {
            return Err(Error::InvalidMixture("no atoms".into()));
        }
        let mut total = 0.0;
        for &(x, w) in &atoms {
            if !(w >= 0.0) {
                return Err(Error::InvalidMixture(format!("negative weight {w}")));
            }
            if !((x.norm() - 1.0).abs() <= WEIGHT_SUM_TOL) {
                return Err(Error::InvalidMixture(format!(
                    "atom {x} is off the unit circle"
                )));
            }
            total += w;
        }
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidMixture(format!("weights sum to {total}")));
        }
        Ok(Self { atoms })
    }

    /// Atoms given by angle, `x = e^{i theta}`.
    pub fn from_angles(atoms: &[(f64, f64)]) -> Result<Self> {
        Self::new(
            atoms
                .iter()
                .map(|&(theta, w)| (Complex64::from_polar(1.0, theta), w))
                .collect(),
        )
    }

    pub fn atoms(&self) -> &[(Complex64, f64)] {
        &self.atoms
    }

    /// Closed-form value `sum_j w_j (1 + x_j z)/(1 - x_j z)`.
    pub fn value(&self, z: Complex64) -> Complex64 {
        self.atoms
            .iter()
            .map(|&(x, w)| (1.0 + x * z) / (1.0 - x * z) * w)
            .sum()
    }

    /// Taylor coefficients: `c_0 = 1`, `c_k = 2 sum_j w_j x_j^k`.
    pub fn expand(&self, order: usize) -> TruncatedSeries {
        let mut coeffs = vec![Complex64::new(0.0, 0.0); order + 1];
        coeffs[0] = Complex64::new(1.0, 0.0);
        for &(x, w) in &self.atoms {
            let mut power = Complex64::new(1.0, 0.0);
            for c in coeffs.iter_mut().skip(1) {
                power *= x;
                *c += power * (2.0 * w);
            }
        }
        TruncatedSeries { coeffs }
    }
}

pub fn herglotz_expand(m: &HerglotzMixture, order: usize) -> TruncatedSeries {
    m.expand(order)
}
