//! The Bessel-type power series `I0s(z) = Σ zⁿ/(n!)²` and
//! `I1s(z) = Σ zⁿ/(n!(n+1)!)`.
//!
//! In terms of modified Bessel functions, `I0s(z) = I₀(2√z)` and
//! `I1s(z) = I₁(2√z)/√z`. Every density of the process multiplies these by an
//! exponentially small factor, so the log-scaled forms are the primary API.

use statrs::function::factorial::ln_factorial;

use crate::error::{Result, TelegraphError};

/// Above this argument the series is replaced by the large-argument expansion.
pub const ASYMPTOTIC_THRESHOLD: f64 = 2500.0;
const MAX_TERMS: usize = 500;
const REL_EPS: f64 = 1e-16;

/// `I0s(z) = Σ zⁿ/(n!)²`.
pub fn series_i0(z: f64) -> Result<f64> {
    check_argument(z)?;
    Ok(ln_i0(z).exp())
}

/// `I1s(z) = Σ zⁿ/(n!(n+1)!)`.
pub fn series_i1(z: f64) -> Result<f64> {
    check_argument(z)?;
    Ok(ln_i1(z).exp())
}

/// Natural logarithm of [`series_i0`].
pub fn ln_series_i0(z: f64) -> Result<f64> {
    check_argument(z)?;
    Ok(ln_i0(z))
}

/// Natural logarithm of [`series_i1`].
pub fn ln_series_i1(z: f64) -> Result<f64> {
    check_argument(z)?;
    Ok(ln_i1(z))
}

fn check_argument(z: f64) -> Result<()> {
    if z.is_finite() && z >= 0.0 {
        Ok(())
    } else {
        Err(TelegraphError::SeriesArgument(z))
    }
}

/// Both series at one argument, in log scale.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LnSeries {
    pub ln_i0: f64,
    pub ln_i1: f64,
}

impl LnSeries {
    /// Callers guarantee `z >= 0` up to rounding; tiny negatives are clamped.
    pub(crate) fn at(z: f64) -> Self {
        let z = z.max(0.0);
        LnSeries {
            ln_i0: ln_i0(z),
            ln_i1: ln_i1(z),
        }
    }
}

pub(crate) fn ln_i0(z: f64) -> f64 {
    if z > ASYMPTOTIC_THRESHOLD {
        let x = 2.0 * z.sqrt();
        x + scaled_bessel_asymptotic(0.0, x).ln()
    } else {
        power_series(z, 0).ln()
    }
}

pub(crate) fn ln_i1(z: f64) -> f64 {
    if z > ASYMPTOTIC_THRESHOLD {
        let x = 2.0 * z.sqrt();
        x + scaled_bessel_asymptotic(1.0, x).ln() - 0.5 * z.ln()
    } else {
        power_series(z, 1).ln()
    }
}

/// `Σ zⁿ/(n!(n+shift)!)` by term recursion.
fn power_series(z: f64, shift: u32) -> f64 {
    let shift = f64::from(shift);
    let mut term = 1.0;
    let mut sum = 1.0;
    for n in 0..MAX_TERMS {
        let k = n as f64 + 1.0;
        term *= z / (k * (k + shift));
        sum += term;
        if term < REL_EPS * sum {
            break;
        }
    }
    sum
}

/// `e^{-x} I_ν(x)` from the large-argument expansion, valid for `x >> ν²`.
fn scaled_bessel_asymptotic(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut term = 1.0_f64;
    let mut sum = 1.0;
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        let next = -term * (mu - odd * odd) / (k as f64 * 8.0 * x);
        if next.abs() >= term.abs() {
            break;
        }
        term = next;
        sum += term;
        if term.abs() < 1e-17 * sum.abs() {
            break;
        }
    }
    sum / (2.0 * std::f64::consts::PI * x).sqrt()
}

/// `ln(zᵏ / (k! (k+shift)!))`, with `0⁰ = 1`.
pub(crate) fn ln_power_term(z: f64, k: u32, shift: u32) -> f64 {
    let z = z.max(0.0);
    let pow = if k == 0 {
        0.0
    } else if z == 0.0 {
        return f64::NEG_INFINITY;
    } else {
        f64::from(k) * z.ln()
    };
    pow - ln_factorial(u64::from(k)) - ln_factorial(u64::from(k + shift))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn zero_argument() {
        assert_eq!(series_i0(0.0).unwrap(), 1.0);
        assert_eq!(series_i1(0.0).unwrap(), 1.0);
    }

    // Reference values from a 60-term partial sum in 30-digit arithmetic.
    #[test]
    fn frozen_reference_values() {
        assert!(rel(series_i0(1.0).unwrap(), 2.2795853023360673) < 1e-14);
        assert!(rel(series_i1(1.0).unwrap(), 1.590_636_854_637_329) < 1e-14);
        assert!(rel(series_i0(25.0).unwrap(), 2815.716628466254) < 1e-13);
        assert!(rel(series_i1(25.0).unwrap(), 534.197660740251) < 1e-13);
    }

    #[test]
    fn regime_switch_is_continuous() {
        let z = ASYMPTOTIC_THRESHOLD;
        let above = z * (1.0 + 4.0 * f64::EPSILON);
        assert!((power_series(z, 0).ln() - ln_i0(above)).abs() < 1e-12);
        assert!((power_series(z, 1).ln() - ln_i1(above)).abs() < 1e-12);
        // the expansion itself, evaluated below the switch, agrees with the series
        let z = 900.0;
        let x = 2.0 * f64::sqrt(z);
        let asym0 = x + scaled_bessel_asymptotic(0.0, x).ln();
        assert!((asym0 - power_series(z, 0).ln()).abs() < 1e-13);
        let asym1 = x + scaled_bessel_asymptotic(1.0, x).ln() - 0.5 * z.ln();
        assert!((asym1 - power_series(z, 1).ln()).abs() < 1e-13);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(series_i0(-1.0).is_err());
        assert!(series_i1(f64::NAN).is_err());
        assert!(ln_series_i0(f64::INFINITY).is_err());
    }

    #[test]
    fn large_arguments_stay_finite() {
        let v = ln_series_i0(1e8).unwrap();
        assert!(v.is_finite() && v > 19_000.0);
        assert!(ln_series_i1(1e8).unwrap() < v);
    }

    #[test]
    fn power_terms() {
        assert_eq!(ln_power_term(0.0, 0, 1), 0.0);
        assert_eq!(ln_power_term(0.0, 3, 0), f64::NEG_INFINITY);
        let v = ln_power_term(2.0, 3, 1).exp();
        assert!(rel(v, 8.0 / (6.0 * 24.0)) < 1e-14);
    }
}
