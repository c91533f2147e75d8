//! Scalar fields the operators act over.
//!
//! Everything numeric in the crate is generic over [`Scalar`], which covers the
//! real fields `f32`/`f64` and their complex counterparts. Magnitudes, norms and
//! log-magnitudes live in the associated [`Real`] type.

use std::fmt::{Debug, Display};

use num_complex::Complex;
use num_traits::{Float, FromPrimitive, Num, ToPrimitive, Zero};

/// Floating point type used for magnitudes, norms and logarithms.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Default + Send + Sync + 'static
{
    /// Absolute tolerance used by scalar comparisons unless overridden.
    fn default_tolerance() -> Self;

    fn from_f64_lossy(v: f64) -> Self {
        Self::from_f64(v).unwrap_or_else(Self::nan)
    }

    fn to_f64_lossy(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {
    fn default_tolerance() -> Self {
        1e-5
    }
}

impl Real for f64 {
    fn default_tolerance() -> Self {
        1e-12
    }
}

/// A field element: real or complex.
pub trait Scalar:
    Num + Copy + Debug + PartialEq + std::ops::Neg<Output = Self> + Send + Sync + 'static
{
    type Real: Real;

    /// `true` for complex fields.
    const IS_COMPLEX: bool;

    fn modulus(self) -> Self::Real;

    fn from_real(r: Self::Real) -> Self;

    /// `(re, im)` view used by serialization. Real scalars report `im = 0`.
    fn to_parts(self) -> (f64, f64);

    /// Builds a scalar from `(re, im)`; `None` when `im != 0` on a real field.
    fn from_parts(re: f64, im: f64) -> Option<Self>;

    /// Unit-modulus factor `self / |self|` (the sign on real fields).
    fn unit(self) -> Self {
        let m = self.modulus();
        if m == Self::Real::zero() {
            Self::one()
        } else {
            self.scale(m.recip())
        }
    }

    fn scale(self, r: Self::Real) -> Self {
        self * Self::from_real(r)
    }

    fn is_zero_scalar(self) -> bool {
        self.modulus() == Self::Real::zero()
    }

    fn is_finite_scalar(self) -> bool {
        self.modulus().is_finite()
    }
}

macro_rules! real_scalar {
    ($t:ty) => {
        impl Scalar for $t {
            type Real = $t;
            const IS_COMPLEX: bool = false;

            fn modulus(self) -> $t {
                self.abs()
            }

            fn from_real(r: $t) -> Self {
                r
            }

            fn to_parts(self) -> (f64, f64) {
                (self as f64, 0.0)
            }

            fn from_parts(re: f64, im: f64) -> Option<Self> {
                (im == 0.0).then_some(re as $t)
            }

            fn unit(self) -> Self {
                if self < 0.0 {
                    -1.0
                } else {
                    1.0
                }
            }
        }
    };
}

real_scalar!(f32);
real_scalar!(f64);

macro_rules! complex_scalar {
    ($t:ty) => {
        impl Scalar for Complex<$t> {
            type Real = $t;
            const IS_COMPLEX: bool = true;

            fn modulus(self) -> $t {
                self.norm()
            }

            fn from_real(r: $t) -> Self {
                Complex::new(r, 0.0)
            }

            fn to_parts(self) -> (f64, f64) {
                (self.re as f64, self.im as f64)
            }

            fn from_parts(re: f64, im: f64) -> Option<Self> {
                Some(Complex::new(re as $t, im as $t))
            }
        }
    };
}

complex_scalar!(f32);
complex_scalar!(f64);
