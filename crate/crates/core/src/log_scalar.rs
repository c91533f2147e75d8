//! Scalars stored as `(ln |value|, phase)`.
//!
//! Weight products such as `β^n` leave the floating point range long before
//! the index arithmetic becomes interesting, so products are accumulated as a
//! sum of log-magnitudes and a product of unit phases. Magnitude comparisons
//! never exponentiate.

use std::ops::{Div, Mul};

use num_traits::{Float, One, Zero};

use crate::scalar::{Real, Scalar};

/// A nonzero scalar in log-magnitude/phase form.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogScalar<S: Scalar> {
    log_magnitude: S::Real,
    phase: S,
}

impl<S: Scalar> LogScalar<S> {
    pub fn one() -> Self {
        Self {
            log_magnitude: S::Real::zero(),
            phase: S::one(),
        }
    }

    /// `None` for zero.
    pub fn from_scalar(value: S) -> Option<Self> {
        let m = value.modulus();
        if m == S::Real::zero() || !m.is_finite() {
            return None;
        }
        Some(Self {
            log_magnitude: m.ln(),
            phase: value.unit(),
        })
    }

    pub fn from_parts(log_magnitude: S::Real, phase: S) -> Self {
        Self {
            log_magnitude,
            phase: phase.unit(),
        }
    }

    pub fn log_magnitude(&self) -> S::Real {
        self.log_magnitude
    }

    pub fn phase(&self) -> S {
        self.phase
    }

    /// Back to a plain scalar. Overflows to infinity past the float range.
    pub fn to_scalar(&self) -> S {
        self.phase.scale(self.log_magnitude.exp())
    }

    pub fn magnitude(&self) -> S::Real {
        self.log_magnitude.exp()
    }

    pub fn recip(&self) -> Self {
        Self {
            log_magnitude: -self.log_magnitude,
            phase: renormalize(S::one() / self.phase),
        }
    }

    pub fn powi(&self, n: u64) -> Self {
        let mut phase = S::one();
        // Repeated squaring keeps complex phase drift at O(log n) roundings.
        let mut base = self.phase;
        let mut e = n;
        while e > 0 {
            if e & 1 == 1 {
                phase = renormalize(phase * base);
            }
            base = renormalize(base * base);
            e >>= 1;
        }
        Self {
            log_magnitude: self.log_magnitude * S::Real::from_f64_lossy(n as f64),
            phase,
        }
    }

    /// `| self − target |` computed in plain arithmetic, or `None` when
    /// `self` is too large to exponentiate (the gap is then at least
    /// `|self| − |target|`, reported through [`LogScalar::log_magnitude`]).
    pub fn distance_to(&self, target: S) -> Option<S::Real> {
        if self.log_magnitude > S::Real::from_f64_lossy(700.0) {
            return None;
        }
        Some((self.to_scalar() - target).modulus())
    }
}

fn renormalize<S: Scalar>(p: S) -> S {
    if S::IS_COMPLEX {
        p.unit()
    } else {
        p
    }
}

impl<S: Scalar> Mul for LogScalar<S> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        Self {
            log_magnitude: self.log_magnitude + rhs.log_magnitude,
            phase: renormalize(self.phase * rhs.phase),
        }
    }
}

impl<S: Scalar> Div for LogScalar<S> {
    type Output = Self;

    fn div(self, rhs: Self) -> Self {
        Self {
            log_magnitude: self.log_magnitude - rhs.log_magnitude,
            phase: renormalize(self.phase / rhs.phase),
        }
    }
}

impl<S: Scalar> Default for LogScalar<S> {
    fn default() -> Self {
        Self::one()
    }
}

impl<S: Scalar> std::iter::Product for LogScalar<S> {
    fn product<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::one(), |acc, x| acc * x)
    }
}

impl<S: Scalar> One for LogScalar<S> {
    fn one() -> Self {
        LogScalar::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn round_trip_is_ulp_accurate() {
        for v in [1e-300, -3.25, 7.0, 1e300, -0.5] {
            let l = LogScalar::<f64>::from_scalar(v).unwrap();
            let back = l.to_scalar();
            assert!(((back - v) / v).abs() < 1e-13, "{v} -> {back}");
        }
    }

    #[test]
    fn zero_has_no_log_form() {
        assert!(LogScalar::<f64>::from_scalar(0.0).is_none());
    }

    #[test]
    fn products_add_logs_and_multiply_phases() {
        let a = LogScalar::<f64>::from_scalar(-2.0).unwrap();
        let b = LogScalar::<f64>::from_scalar(-3.0).unwrap();
        let p = a * b;
        assert_eq!(p.phase(), 1.0);
        assert!((p.to_scalar() - 6.0).abs() < 1e-14);
        let q = a / b;
        assert!((q.to_scalar() - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn huge_products_do_not_overflow() {
        let two = LogScalar::<f64>::from_scalar(2.0).unwrap();
        let big = two.powi(5000);
        assert!((big.log_magnitude() - 5000.0 * 2f64.ln()).abs() < 1e-9);
        assert!(big.to_scalar().is_infinite());
        assert!(big.distance_to(1.0).is_none());
        let ratio = big / two.powi(4999);
        assert!((ratio.to_scalar() - 2.0).abs() < 1e-9);
    }

    #[test]
    fn complex_phase_stays_on_unit_circle() {
        let w = LogScalar::from_scalar(Complex64::new(0.6, 0.8)).unwrap();
        let p = w.powi(1001);
        assert!((p.phase().norm() - 1.0).abs() < 1e-14);
        assert!(p.log_magnitude().abs() < 1e-12);
    }
}
