//! Kernel functions `z/(1-z)^{σ-n+1}`, their convolution inverses, and the
//! Pochhammer multiplier `[σ]_{n/k}` that every operator in the crate is
//! built from.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::series::TruncatedSeries;

/// The pair `(σ, n)` with `σ - (n - 1) > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OperatorParams {
    sigma: f64,
    n: u32,
}

impl OperatorParams {
    pub fn new(sigma: f64, n: i64) -> Result<Self> {
        if n < 0 || !sigma.is_finite() || !(sigma - (n as f64 - 1.0) > 0.0) || n > u32::MAX as i64 {
            return Err(Error::InvalidParams { sigma, n });
        }
        Ok(Self { sigma, n: n as u32 })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// `σ - n + 1`, the exponent of the kernel `z/(1-z)^{σ-n+1}`.
    pub fn exponent(&self) -> f64 {
        self.sigma - self.n as f64 + 1.0
    }

    /// Same `σ`, one more iteration, if that is still a valid pair.
    pub fn next(&self) -> Option<Self> {
        Self::new(self.sigma, self.n as i64 + 1).ok()
    }

    /// Same `σ`, one fewer iteration.
    pub fn prev(&self) -> Option<Self> {
        (self.n > 0).then(|| Self {
            sigma: self.sigma,
            n: self.n - 1,
        })
    }

    pub fn multiplier(&self, k: usize) -> Multiplier {
        multiplier(*self, k)
    }
}

/// The coefficient multiplier `[σ]_{n/k} = (σ-n+1)_n / (σ+k-n+1)_n`.
///
/// For `n >= 0` and `k >= 1` it lies in `(0, 1]`.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct Multiplier(f64);

impl Multiplier {
    pub fn value(self) -> f64 {
        self.0
    }
}

/// Rising factorial `x (x+1) ... (x+n-1)`, with `(x)_0 = 1`.
pub fn pochhammer(x: f64, n: u32) -> f64 {
    (0..n).fold(1.0, |acc, i| acc * (x + i as f64))
}

/// `[σ]_{n/k}` as the finite product `prod_{m=1..n} (σ-m+1)/(σ+k-m+1)`.
pub fn multiplier(params: OperatorParams, k: usize) -> Multiplier {
    let k = k as f64;
    Multiplier((1..=params.n).fold(1.0, |acc, m| {
        let top = params.sigma - m as f64 + 1.0;
        acc * (top / (top + k))
    }))
}

/// `[σ]_{n/k}` allowing the single lowered index `n = -1`, where it is
/// `(σ+k+1)/(σ+1)` (and exceeds 1).
pub fn multiplier_extended(sigma: f64, n: i64, k: usize) -> Result<f64> {
    match n {
        -1 if sigma + 1.0 > 0.0 => Ok((sigma + k as f64 + 1.0) / (sigma + 1.0)),
        n if n >= 0 => Ok(multiplier(OperatorParams::new(sigma, n)?, k).value()),
        _ => Err(Error::InvalidParams { sigma, n }),
    }
}

/// Coefficients of `z/(1-z)^{σ-n+1}`: `(σ-n+1)_k / k!` at `z^{k+1}`.
pub fn tau_coeffs(params: OperatorParams, order: usize) -> TruncatedSeries {
    let a = params.exponent();
    let mut running = 1.0;
    TruncatedSeries::from_fn(order, |j| match j {
        0 => Complex64::new(0.0, 0.0),
        1 => Complex64::new(1.0, 0.0),
        _ => {
            let k = (j - 1) as f64;
            running *= (a + k - 1.0) / k;
            Complex64::new(running, 0.0)
        }
    })
}

/// Convolution inverse of [`tau_coeffs`]: `k! / (σ-n+1)_k` at `z^{k+1}`.
pub fn tau_inv_coeffs(params: OperatorParams, order: usize) -> TruncatedSeries {
    let tau = tau_coeffs(params, order);
    TruncatedSeries::from_fn(order, |j| {
        if j == 0 {
            Complex64::new(0.0, 0.0)
        } else {
            Complex64::new(1.0 / tau.coeff(j).re, 0.0)
        }
    })
}

/// The iterated Möbius function `L_{σ,n}(±z) = 1 + 2 sum [σ]_{n/k} (±z)^k`.
pub fn extremal_iterate(params: OperatorParams, order: usize, sign: f64) -> TruncatedSeries {
    let sign = sign.signum();
    TruncatedSeries::from_fn(order, |k| {
        if k == 0 {
            Complex64::new(1.0, 0.0)
        } else {
            let parity = if k % 2 == 1 { sign } else { 1.0 };
            Complex64::new(2.0 * parity * multiplier(params, k).value(), 0.0)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::convolve;

    fn params(sigma: f64, n: i64) -> OperatorParams {
        OperatorParams::new(sigma, n).unwrap()
    }

    #[test]
    fn params_reject_degenerate_kernels() {
        assert!(OperatorParams::new(0.5, 2).is_err());
        assert!(OperatorParams::new(1.0, 2).is_err());
        assert!(OperatorParams::new(1.0, -1).is_err());
        assert!(OperatorParams::new(f64::NAN, 0).is_err());
        assert!(OperatorParams::new(1.0, 1).is_ok());
        assert!(OperatorParams::new(-0.5, 0).is_ok());
        assert_eq!(params(2.0, 2).next(), None);
        assert_eq!(params(2.0, 1).next(), Some(params(2.0, 2)));
    }

    #[test]
    fn pochhammer_examples() {
        assert_eq!(pochhammer(3.7, 0), 1.0);
        assert_eq!(pochhammer(2.0, 3), 24.0);
        assert_eq!(pochhammer(0.5, 2), 0.75);
    }

    #[test]
    fn multiplier_examples() {
        for k in 1..10 {
            assert_eq!(multiplier(params(3.7, 0), k).value(), 1.0);
        }
        assert!((multiplier(params(2.0, 2), 1).value() - 1.0 / 3.0).abs() < 1e-16);
        assert_eq!(multiplier(params(1.0, 1), 3).value(), 0.25);
        assert_eq!(multiplier_extended(1.0, -1, 2).unwrap(), 2.0);
        assert!(multiplier_extended(1.0, -2, 2).is_err());
        assert!(multiplier_extended(-1.0, -1, 2).is_err());
    }

    #[test]
    fn multiplier_stays_in_unit_interval_and_decreases_with_n() {
        for &sigma in &[0.5, 1.0, 2.0, 3.5, 9.0] {
            for n in 0..8i64 {
                let Ok(p) = OperatorParams::new(sigma, n) else { continue };
                for k in 1..=64 {
                    let m = multiplier(p, k).value();
                    assert!(m > 0.0 && m <= 1.0);
                    if let Some(q) = p.next() {
                        assert!(multiplier(q, k).value() < m);
                    }
                }
            }
        }
    }

    #[test]
    fn tau_examples() {
        let geo = tau_coeffs(params(1.0, 1), 4);
        let re: Vec<f64> = geo.coeffs().iter().map(|c| c.re).collect();
        assert_eq!(re, vec![0.0, 1.0, 1.0, 1.0, 1.0]);

        let t = tau_coeffs(params(1.0, 0), 8);
        for k in 1..=8 {
            assert!((t.coeff(k).re - k as f64).abs() < 1e-12);
        }
        let t = tau_coeffs(params(2.0, 0), 8);
        for k in 1..=8 {
            assert!((t.coeff(k).re - (k * (k + 1) / 2) as f64).abs() < 1e-12);
        }

        let inv = tau_inv_coeffs(params(1.0, 1), 4);
        assert_eq!(inv, geo);
        let inv = tau_inv_coeffs(params(1.0, 0), 8);
        for k in 1..=8 {
            assert!((inv.coeff(k).re - 1.0 / k as f64).abs() < 1e-15);
        }
    }

    #[test]
    fn kernel_times_inverse_is_geometric() {
        for &(sigma, n) in &[(0.5, 0), (0.5, 1), (2.0, 2), (3.5, 3), (9.0, 5)] {
            let p = params(sigma, n);
            let prod = convolve(&tau_coeffs(p, 64), &tau_inv_coeffs(p, 64));
            assert_eq!(prod.coeff(0), Complex64::new(0.0, 0.0));
            for k in 1..=64 {
                assert!((prod.coeff(k).re - 1.0).abs() <= 2.0 * f64::EPSILON);
            }
        }
    }

    #[test]
    fn extremal_iterate_examples() {
        assert_eq!(extremal_iterate(params(2.5, 0), 10, 1.0), TruncatedSeries::mobius(10));
        let e = extremal_iterate(params(1.0, 1), 16, 1.0);
        for k in 1..=16 {
            assert!((e.coeff(k).re - 2.0 / (k as f64 + 1.0)).abs() < 1e-15);
        }
        let minus = extremal_iterate(params(1.0, 1), 16, -1.0);
        for k in 1..=16 {
            let parity = if k % 2 == 0 { 1.0 } else { -1.0 };
            assert_eq!(minus.coeff(k), e.coeff(k) * parity);
        }
    }
}
