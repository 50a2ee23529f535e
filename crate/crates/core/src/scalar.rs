//! Scalar abstractions shared by the dense containers.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{Float, FromPrimitive, One, Signed, ToPrimitive, Zero};

/// Commutative ring with the by-reference assignment operators used in hot loops.
pub trait Ring:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
    + for<'a> MulAssign<&'a Self>
{
}

impl<T> Ring for T where
    T: Clone
        + Debug
        + PartialEq
        + Zero
        + One
        + Add<Output = T>
        + Sub<Output = T>
        + Mul<Output = T>
        + Neg<Output = T>
        + for<'a> AddAssign<&'a T>
        + for<'a> SubAssign<&'a T>
        + for<'a> MulAssign<&'a T>
{
}

/// Field with a pivot magnitude used by elimination routines.
pub trait Field: Ring + std::ops::Div<Output = Self> {
    /// Magnitude used for pivot selection; exact fields only need `0` vs nonzero.
    fn magnitude(&self) -> f64;
    /// True when pivoting should pick the largest entry rather than any nonzero one.
    const INEXACT: bool;
}

impl Field for f64 {
    fn magnitude(&self) -> f64 {
        self.abs()
    }
    const INEXACT: bool = true;
}

impl Field for f32 {
    fn magnitude(&self) -> f64 {
        self.abs() as f64
    }
    const INEXACT: bool = true;
}

impl<F: Float + Debug + for<'a> AddAssign<&'a F> + for<'a> SubAssign<&'a F> + for<'a> MulAssign<&'a F>>
    Field for Complex<F>
where
    Complex<F>: Ring,
{
    fn magnitude(&self) -> f64 {
        self.norm().to_f64().unwrap_or(f64::INFINITY)
    }
    const INEXACT: bool = true;
}

impl Field for BigRational {
    fn magnitude(&self) -> f64 {
        if self.is_zero() {
            0.0
        } else {
            1.0
        }
    }
    const INEXACT: bool = false;
}

/// Real floating-point scalar (`f32` or `f64`).
pub trait RealFloat: Float + FromPrimitive + Field + Send + Sync + 'static {
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("representable literal")
    }
}

impl RealFloat for f32 {}
impl RealFloat for f64 {}

/// Exact conversion of an integer to `f64`, saturating on overflow.
pub fn bigint_to_f64(x: &BigInt) -> f64 {
    x.to_f64().unwrap_or(if x.is_negative() {
        f64::NEG_INFINITY
    } else {
        f64::INFINITY
    })
}

/// Rational to `f64` that stays accurate when numerator and denominator overflow `f64`.
pub fn ratio_to_f64(x: &BigRational) -> f64 {
    if let Some(v) = x.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    let n = x.numer();
    let d = x.denom();
    let shift = (n.bits() as i64).max(d.bits() as i64) - 1000;
    if shift <= 0 {
        return bigint_to_f64(n) / bigint_to_f64(d);
    }
    let n2 = n >> shift as usize;
    let d2 = d >> shift as usize;
    bigint_to_f64(&n2) / bigint_to_f64(&d2)
}

/// Natural logarithm of a positive big integer.
pub fn ln_bigint(x: &BigInt) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        return bigint_to_f64(x).ln();
    }
    let shift = bits - 900;
    bigint_to_f64(&(x >> shift as usize)).ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn rational_from_f64(x: f64) -> Option<BigRational> {
    BigRational::from_float(x)
}
