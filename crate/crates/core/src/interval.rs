//! Closed intervals with outward-rounded endpoints.
//!
//! The arithmetic operators never fail: if an endpoint overflows it becomes
//! infinite, which is still a valid (if useless) enclosure. Callers that
//! need the finite-endpoint invariant use the `checked_*` methods or
//! [`Interval::ensure_finite`], which turn overflow into
//! [`Error::EnclosureFailure`].

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{add_down, add_up, mul_bounds, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interval<T> {
    lo: T,
    hi: T,
}

impl<T: Scalar> Interval<T> {
    pub fn new(lo: T, hi: T) -> Result<Self> {
        if !(Float::is_finite(lo) && Float::is_finite(hi)) || lo > hi {
            return Err(Error::InvalidInterval {
                lo: lo.to_string(),
                hi: hi.to_string(),
            });
        }
        Ok(Self { lo, hi })
    }

    /// Builds `[lo, hi]` without validation. Used internally where the
    /// ordering is known; finiteness is checked later by `ensure_finite`.
    #[inline]
    pub(crate) fn raw(lo: T, hi: T) -> Self {
        debug_assert!(
            lo.partial_cmp(&hi) != Some(std::cmp::Ordering::Greater),
            "raw interval with lo > hi"
        );
        Self { lo, hi }
    }

    /// Degenerate interval `[v, v]`.
    ///
    /// # Panics
    /// If `v` is not finite.
    #[inline]
    pub fn point(v: T) -> Self {
        assert!(Float::is_finite(v), "point interval from non-finite value");
        Self { lo: v, hi: v }
    }

    #[inline]
    pub fn zero() -> Self {
        Self::point(T::zero())
    }

    #[inline]
    pub fn one() -> Self {
        Self::point(T::one())
    }

    /// Tightest enclosure of a decimal literal such as `"1.76"` or `"-2.5e-3"`.
    ///
    /// The width is zero when the value is representable and one ulp
    /// otherwise.
    pub fn from_decimal(literal: &str) -> Result<Self> {
        let exact = parse_decimal_rational(literal)?;
        let nearest: T = literal.trim().parse().map_err(|_| Error::Parse(literal.to_string()))?;
        if !Float::is_finite(nearest) {
            return Err(Error::Parse(literal.to_string()));
        }
        let approx = nearest.to_rational().ok_or_else(|| Error::Parse(literal.to_string()))?;
        let (lo, hi) = match approx.cmp(&exact) {
            Ordering::Equal => (nearest, nearest),
            Ordering::Less => (nearest, nearest.step_up()),
            Ordering::Greater => (nearest.step_down(), nearest),
        };
        Self::new(lo, hi)
    }

    #[inline]
    pub fn lo(&self) -> T {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> T {
        self.hi
    }

    pub fn is_finite(&self) -> bool {
        Float::is_finite(self.lo) && Float::is_finite(self.hi) && self.lo <= self.hi
    }

    pub fn ensure_finite(self) -> Result<Self> {
        if self.is_finite() {
            Ok(self)
        } else {
            Err(Error::EnclosureFailure(format!(
                "non-finite endpoint in [{}, {}]",
                self.lo, self.hi
            )))
        }
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    /// Midpoint rounded to nearest; lies in the interval.
    pub fn mid(&self) -> T {
        let two = T::one() + T::one();
        let m = self.lo / two + self.hi / two;
        m.max(self.lo).min(self.hi)
    }

    /// Upper bound on `hi - lo`.
    pub fn width(&self) -> T {
        add_up(self.hi, -self.lo)
    }

    /// Smallest absolute value over the interval, rounded down (exact here).
    pub fn mig(&self) -> T {
        if self.lo > T::zero() {
            self.lo
        } else if self.hi < T::zero() {
            -self.hi
        } else {
            T::zero()
        }
    }

    /// Largest absolute value over the interval, rounded up (exact here).
    pub fn mag(&self) -> T {
        Float::abs(self.lo).max(Float::abs(self.hi))
    }

    pub fn contains(&self, t: T) -> bool {
        self.lo <= t && t <= self.hi
    }

    pub fn contains_zero(&self) -> bool {
        self.contains(T::zero())
    }

    /// `self ⊆ other`.
    pub fn subset_of(&self, other: &Self) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.hi < other.lo || other.hi < self.lo
    }

    pub fn hull(&self, other: &Self) -> Self {
        Self::raw(self.lo.min(other.lo), self.hi.max(other.hi))
    }

    /// `None` is the empty set.
    pub fn intersect(&self, other: &Self) -> Option<Self> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then(|| Self::raw(lo, hi))
    }

    /// Square with dependency awareness: `sqr([-2, 1]) = [0, 4]`.
    pub fn sqr(self) -> Self {
        let (llo, lhi) = mul_bounds(self.lo, self.lo);
        let (hlo, hhi) = mul_bounds(self.hi, self.hi);
        // A square that underflows is widened to a tiny negative value;
        // clip it back.
        if self.lo >= T::zero() {
            Self::raw(llo.max(T::zero()), hhi)
        } else if self.hi <= T::zero() {
            Self::raw(hlo.max(T::zero()), lhi)
        } else {
            Self::raw(T::zero(), lhi.max(hhi))
        }
    }

    pub fn scale(self, c: T) -> Self {
        self * Self::point(c)
    }

    pub fn checked_add(self, rhs: Self) -> Result<Self> {
        (self + rhs).ensure_finite()
    }

    pub fn checked_sub(self, rhs: Self) -> Result<Self> {
        (self - rhs).ensure_finite()
    }

    pub fn checked_mul(self, rhs: Self) -> Result<Self> {
        (self * rhs).ensure_finite()
    }

    pub fn checked_sqr(self) -> Result<Self> {
        self.sqr().ensure_finite()
    }

    pub fn checked_scale(self, c: T) -> Result<Self> {
        self.scale(c).ensure_finite()
    }

    /// Splits into `k` consecutive pieces sharing endpoints; the first piece
    /// starts at `lo` and the last ends at `hi`.
    pub fn split(&self, k: usize) -> Result<Vec<Self>> {
        if k == 0 {
            return Err(Error::InvalidArgument("split count must be positive".into()));
        }
        let kt = T::from(k).ok_or_else(|| Error::InvalidArgument("split count too large".into()))?;
        let mut cuts = Vec::with_capacity(k + 1);
        cuts.push(self.lo);
        for i in 1..k {
            let t = T::from(i).unwrap() / kt;
            let c = self.lo + (self.hi - self.lo) * t;
            let prev = *cuts.last().unwrap();
            cuts.push(c.max(prev).min(self.hi));
        }
        cuts.push(self.hi);
        Ok(cuts.windows(2).map(|w| Self::raw(w[0], w[1])).collect())
    }
}

impl<T: Scalar> Add for Interval<T> {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Self::raw(add_down(self.lo, rhs.lo), add_up(self.hi, rhs.hi))
    }
}

impl<T: Scalar> Sub for Interval<T> {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Self::raw(add_down(self.lo, -rhs.hi), add_up(self.hi, -rhs.lo))
    }
}

impl<T: Scalar> Neg for Interval<T> {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::raw(-self.hi, -self.lo)
    }
}

impl<T: Scalar> Mul for Interval<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        let cands = [
            mul_bounds(self.lo, rhs.lo),
            mul_bounds(self.lo, rhs.hi),
            mul_bounds(self.hi, rhs.lo),
            mul_bounds(self.hi, rhs.hi),
        ];
        let mut lo = cands[0].0;
        let mut hi = cands[0].1;
        for &(l, h) in &cands[1..] {
            lo = lo.min(l);
            hi = hi.max(h);
        }
        if Float::is_nan(lo) || Float::is_nan(hi) {
            return Self::raw(T::neg_infinity(), T::infinity());
        }
        Self::raw(lo, hi)
    }
}

impl<T: Scalar> Zero for Interval<T> {
    fn zero() -> Self {
        Interval::point(T::zero())
    }

    fn is_zero(&self) -> bool {
        self.lo == T::zero() && self.hi == T::zero()
    }
}

impl<T: Scalar> fmt::Display for Interval<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:?}, {:?}]", self.lo, self.hi)
    }
}

/// Exact value of a decimal literal (`[+-]digits[.digits][e[+-]digits]`).
pub fn parse_decimal_rational(literal: &str) -> Result<BigRational> {
    let err = || Error::Parse(literal.to_string());
    let s = literal.trim();
    let (negative, body) = match s.as_bytes().first() {
        Some(b'-') => (true, &s[1..]),
        Some(b'+') => (false, &s[1..]),
        _ => (false, s),
    };
    let (mantissa, exponent) = match body.find(['e', 'E']) {
        Some(pos) => {
            let e: i64 = body[pos + 1..].parse().map_err(|_| err())?;
            (&body[..pos], e)
        }
        None => (body, 0),
    };
    let (int_part, frac_part) = match mantissa.find('.') {
        Some(pos) => (&mantissa[..pos], &mantissa[pos + 1..]),
        None => (mantissa, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return Err(err());
    }
    if !int_part.bytes().chain(frac_part.bytes()).all(|b| b.is_ascii_digit()) {
        return Err(err());
    }
    if exponent.unsigned_abs() > 10_000 {
        return Err(err());
    }
    let digits = format!("{int_part}{frac_part}");
    let numer: BigInt = digits.parse().map_err(|_| err())?;
    let scale = exponent - frac_part.len() as i64;
    let ten = BigInt::from(10u32);
    let pow = num_traits::pow(ten, scale.unsigned_abs() as usize);
    let mut value = if scale >= 0 {
        BigRational::from_integer(numer * pow)
    } else {
        BigRational::new(numer, pow)
    };
    if negative {
        value = -value;
    }
    Ok(value)
}

/// Inclusive test `t ∈ x` on exact rationals, for oracles. Infinite
/// endpoints bound nothing.
pub fn contains_rational<T: Scalar>(x: &Interval<T>, t: &BigRational) -> bool {
    let above_lo = x.lo == T::neg_infinity() || x.lo.to_rational().is_some_and(|lo| &lo <= t);
    let below_hi = x.hi == T::infinity() || x.hi.to_rational().is_some_and(|hi| t <= &hi);
    above_lo && below_hi
}

impl<T: Scalar> One for Interval<T> {
    fn one() -> Self {
        Interval::point(T::one())
    }
}
