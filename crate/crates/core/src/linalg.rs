//! Interval matrices: products, determinants, the 3×3 adjugate inverse and
//! a Sylvester positive-definiteness test.

use std::fmt;
use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ibox::IBox;
use crate::interval::Interval;
use crate::scalar::Scalar;

/// Dense row-major interval matrix.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Interval<T>>,
}

impl<T: Scalar> IMatrix<T> {
    pub fn from_rows(rows: Vec<Vec<Interval<T>>>) -> Result<Self> {
        let n = rows.len();
        let m = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != m) {
            return Err(Error::DimensionMismatch {
                expected: m,
                got: bad.len(),
            });
        }
        Ok(Self {
            rows: n,
            cols: m,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Zero-width matrix from point entries.
    pub fn from_points<R: AsRef<[T]>>(rows: &[R]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.as_ref().iter().map(|&v| Interval::point(v)).collect())
                .collect(),
        )
    }

    pub fn from_decimals<S: AsRef<str>, R: AsRef<[S]>>(rows: &[R]) -> Result<Self> {
        let rows = rows
            .iter()
            .map(|r| {
                r.as_ref()
                    .iter()
                    .map(|s| Interval::from_decimal(s.as_ref()))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows)
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![Interval::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        Self::diag(&vec![T::one(); n])
    }

    pub fn diag(d: &[T]) -> Self {
        let n = d.len();
        let mut m = Self::zeros(n, n);
        for (i, &v) in d.iter().enumerate() {
            m.set(i, i, Interval::point(v));
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Interval<T> {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Interval<T>) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Interval<T>] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<Interval<T>>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn entries(&self) -> &[Interval<T>] {
        &self.data
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// Upper-left `k × l` block.
    pub fn block(&self, k: usize, l: usize) -> Result<Self> {
        if k > self.rows || l > self.cols {
            return Err(Error::InvalidArgument(format!(
                "block {k}x{l} exceeds {}x{}",
                self.rows, self.cols
            )));
        }
        let mut b = Self::zeros(k, l);
        for i in 0..k {
            for j in 0..l {
                b.set(i, j, self.get(i, j));
            }
        }
        Ok(b)
    }

    /// Entrywise midpoint; a point matrix contained in `self`.
    pub fn mid(&self) -> Vec<Vec<T>> {
        (0..self.rows)
            .map(|i| self.row(i).iter().map(Interval::mid).collect())
            .collect()
    }

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: rhs.rows,
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = Interval::zero();
                for k in 0..self.cols {
                    acc = acc + self.get(i, k) * rhs.get(k, j);
                }
                out.set(i, j, acc);
            }
        }
        out.ensure_finite()
    }

    pub fn mul_vec(&self, v: &IBox<T>) -> Result<IBox<T>> {
        if self.cols != v.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.dim(),
            });
        }
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v.iter())
                    .fold(Interval::zero(), |acc, (&a, &x)| acc + a * x)
            })
            .collect::<IBox<T>>()
            .ensure_finite()
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(Interval<T>, Interval<T>) -> Interval<T>) -> Result<Self> {
        if self.rows != rhs.rows || self.cols != rhs.cols {
            return Err(Error::DimensionMismatch {
                expected: self.rows * self.cols,
                got: rhs.rows * rhs.cols,
            });
        }
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| f(a, b)).collect(),
        }
        .ensure_finite()
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a + b)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.zip_with(rhs, |a, b| a - b)
    }

    pub fn ensure_finite(self) -> Result<Self> {
        for e in &self.data {
            e.ensure_finite()?;
        }
        Ok(self)
    }

    /// Entrywise containment of a point matrix.
    pub fn contains_points<R: AsRef<[T]>>(&self, m: &[R]) -> bool {
        m.len() == self.rows
            && m.iter().enumerate().all(|(i, r)| {
                let r = r.as_ref();
                r.len() == self.cols && r.iter().enumerate().all(|(j, &v)| self.get(i, j).contains(v))
            })
    }

    pub fn contains_identity(&self) -> bool {
        self.is_square()
            && (0..self.rows)
                .all(|i| (0..self.cols).all(|j| self.get(i, j).contains(if i == j { T::one() } else { T::zero() })))
    }

    /// Determinant enclosure for 1×1, 2×2 and 3×3 matrices (cofactor
    /// expansion along the first row).
    pub fn det(&self) -> Result<Interval<T>> {
        if !self.is_square() {
            return Err(Error::InvalidArgument("determinant of a non-square matrix".into()));
        }
        let a = |i, j| self.get(i, j);
        let d = match self.rows {
            1 => a(0, 0),
            2 => a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0),
            3 => {
                a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
                    + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0))
            }
            n => {
                return Err(Error::InvalidArgument(format!(
                    "determinant supported for n <= 3, got {n}"
                )))
            }
        };
        d.ensure_finite()
    }

    /// Enclosure of the inverse of every member of a 3×3 interval matrix,
    /// as adjugate / determinant.
    pub fn inverse3(&self) -> Result<Self> {
        if self.rows != 3 || self.cols != 3 {
            return Err(Error::InvalidArgument(format!(
                "inverse3 needs a 3x3 matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        let det = self.det()?;
        if det.contains_zero() {
            return Err(Error::Singular(det.to_string()));
        }
        let recip = reciprocal(det);
        let a = |i: usize, j: usize| self.get(i, j);
        // cofactor C_ij uses the rows/columns other than i/j in cyclic order
        let cof = |i: usize, j: usize| {
            let (i1, i2) = ((i + 1) % 3, (i + 2) % 3);
            let (j1, j2) = ((j + 1) % 3, (j + 2) % 3);
            a(i1, j1) * a(i2, j2) - a(i1, j2) * a(i2, j1)
        };
        let mut inv = Self::zeros(3, 3);
        for i in 0..3 {
            for j in 0..3 {
                inv.set(i, j, cof(j, i) * recip);
            }
        }
        inv.ensure_finite()
    }

    /// Sufficient test for positive definiteness of every symmetric member:
    /// all leading principal minors must have a strictly positive lower bound.
    /// `false` means "not certified", never "certainly indefinite".
    pub fn is_positive_definite(&self) -> bool {
        self.leading_minors()
            .map(|minors| minors.iter().all(|m| m.lo() > T::zero()))
            .unwrap_or(false)
    }

    /// Enclosures of the leading principal minors, smallest first.
    pub fn leading_minors(&self) -> Result<Vec<Interval<T>>> {
        if !self.is_square() {
            return Err(Error::InvalidArgument("minors of a non-square matrix".into()));
        }
        (1..=self.rows).map(|k| self.block(k, k)?.det()).collect()
    }
}

/// Enclosure of `1 / x` for an interval not containing zero.
fn reciprocal<T: Scalar>(x: Interval<T>) -> Interval<T> {
    debug_assert!(!x.contains_zero());
    let one = T::one();
    // 1/hi ≤ 1/t ≤ 1/lo for t ∈ [lo, hi] of one sign
    let (a, b) = (one / x.hi(), one / x.lo());
    let lo = div_down(one, x.hi(), a);
    let hi = div_up(one, x.lo(), b);
    Interval::raw(lo, hi)
}

/// Lower bound for `n / d` given the rounded quotient `q`.
fn div_down<T: Scalar>(n: T, d: T, q: T) -> T {
    // residual r = n - q·d, computed exactly by fma
    let r = q.mul_add(-d, n);
    if q.abs() < T::exactness_floor() {
        return q.step_down();
    }
    if (r < T::zero()) == (d > T::zero()) && r != T::zero() {
        q.step_down()
    } else {
        q
    }
}

fn div_up<T: Scalar>(n: T, d: T, q: T) -> T {
    let r = q.mul_add(-d, n);
    if q.abs() < T::exactness_floor() {
        return q.step_up();
    }
    if (r > T::zero()) == (d > T::zero()) && r != T::zero() {
        q.step_up()
    } else {
        q
    }
}

impl<T: Scalar> Index<(usize, usize)> for IMatrix<T> {
    type Output = Interval<T>;
    fn index(&self, (i, j): (usize, usize)) -> &Interval<T> {
        &self.data[i * self.cols + j]
    }
}

impl<T: Scalar> fmt::Display for IMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = self.row(i).iter().map(ToString::to_string).collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}
