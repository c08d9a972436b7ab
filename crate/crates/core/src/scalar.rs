//! Floating-point endpoint types usable inside [`Interval`](crate::Interval).
//!
//! Outward rounding is realized by stepping to the neighbouring
//! representable value whenever an error-free transformation shows that a
//! round-to-nearest result is inexact. Nothing here touches the FPU control
//! word, so results do not depend on thread-local rounding state.

use std::fmt::{Debug, Display};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Float;
use serde::de::DeserializeOwned;
use serde::Serialize;

/// Binary floating-point type that can serve as an interval endpoint.
pub trait Scalar:
    Float + FromStr + Debug + Display + Default + Send + Sync + Serialize + DeserializeOwned + 'static
{
    /// Name used in reports (`"f32"`, `"f64"`).
    const NAME: &'static str;

    /// Smallest representable value strictly greater than `self`.
    fn step_up(self) -> Self;

    /// Largest representable value strictly less than `self`.
    fn step_down(self) -> Self;

    /// Below this magnitude the error-free transformations may lose the
    /// rounding error to underflow, so results are widened unconditionally.
    fn exactness_floor() -> Self;

    /// Exact rational value of a finite float.
    fn to_rational(self) -> Option<BigRational> {
        if !Float::is_finite(self) {
            return None;
        }
        let (mantissa, exponent, sign) = Float::integer_decode(self);
        let mut value = BigRational::from_integer(BigInt::from(mantissa));
        let two = BigRational::from_integer(BigInt::from(2u8));
        value *= num_traits::pow::Pow::pow(two, i32::from(exponent));
        Some(if sign < 0 { -value } else { value })
    }

    fn from_f64_lossy(v: f64) -> Self;

    fn to_f64_lossless(self) -> f64;
}

impl Scalar for f64 {
    const NAME: &'static str = "f64";

    #[inline]
    fn step_up(self) -> Self {
        self.next_up()
    }

    #[inline]
    fn step_down(self) -> Self {
        self.next_down()
    }

    #[inline]
    fn exactness_floor() -> Self {
        // 2^-1022 / 2^-52
        f64::MIN_POSITIVE / f64::EPSILON
    }

    fn from_f64_lossy(v: f64) -> Self {
        v
    }

    fn to_f64_lossless(self) -> f64 {
        self
    }
}

impl Scalar for f32 {
    const NAME: &'static str = "f32";

    #[inline]
    fn step_up(self) -> Self {
        self.next_up()
    }

    #[inline]
    fn step_down(self) -> Self {
        self.next_down()
    }

    #[inline]
    fn exactness_floor() -> Self {
        f32::MIN_POSITIVE / f32::EPSILON
    }

    fn from_f64_lossy(v: f64) -> Self {
        v as f32
    }

    fn to_f64_lossless(self) -> f64 {
        self as f64
    }
}

/// Enclosure `[lo, hi]` of the exact sum `a + b`.
#[inline]
pub(crate) fn add_bounds<T: Scalar>(a: T, b: T) -> (T, T) {
    let s = a + b;
    if !Float::is_finite(s) {
        if Float::is_finite(a) && Float::is_finite(b) {
            // overflow of a finite sum
            return if s > T::zero() {
                (T::max_value(), s)
            } else {
                (s, T::min_value())
            };
        }
        return (s, s);
    }
    // TwoSum (Knuth): err = (a + b) - s exactly, barring overflow.
    let bb = s - a;
    let err = (a - (s - bb)) + (b - bb);
    split_by_error(s, err)
}

/// Enclosure `[lo, hi]` of the exact product `a * b`.
#[inline]
pub(crate) fn mul_bounds<T: Scalar>(a: T, b: T) -> (T, T) {
    let p = a * b;
    if p == T::infinity() {
        return (T::max_value(), p);
    }
    if p == T::neg_infinity() {
        return (p, T::min_value());
    }
    if Float::abs(p) < T::exactness_floor() {
        if p == T::zero() && (a == T::zero() || b == T::zero()) {
            return (p, p);
        }
        return (p.step_down(), p.step_up());
    }
    let err = Float::mul_add(a, b, -p);
    split_by_error(p, err)
}

#[inline]
fn split_by_error<T: Scalar>(v: T, err: T) -> (T, T) {
    if err > T::zero() {
        (v, v.step_up())
    } else if err < T::zero() {
        (v.step_down(), v)
    } else if err == T::zero() {
        (v, v)
    } else {
        (v.step_down(), v.step_up())
    }
}

/// Lower bound for `a + b`.
#[inline]
pub(crate) fn add_down<T: Scalar>(a: T, b: T) -> T {
    add_bounds(a, b).0
}

/// Upper bound for `a + b`.
#[inline]
pub(crate) fn add_up<T: Scalar>(a: T, b: T) -> T {
    add_bounds(a, b).1
}
