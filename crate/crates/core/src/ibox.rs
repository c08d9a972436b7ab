//! Interval vectors (axis-aligned boxes) and their subdivision.

use std::fmt;
use std::ops::{Add, Index, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::Interval;
use crate::scalar::Scalar;

/// An interval vector; dimension is fixed at construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IBox<T> {
    coords: Vec<Interval<T>>,
}

impl<T: Scalar> IBox<T> {
    pub fn new(coords: Vec<Interval<T>>) -> Self {
        Self { coords }
    }

    /// Degenerate box at a point.
    pub fn point(p: &[T]) -> Self {
        Self::new(p.iter().map(|&v| Interval::point(v)).collect())
    }

    /// `[lo, hi]^n`.
    pub fn cube(n: usize, lo: T, hi: T) -> Result<Self> {
        let side = Interval::new(lo, hi)?;
        Ok(Self::new(vec![side; n]))
    }

    /// `[-1, 1]^n`, the model box of every h-set chart.
    pub fn unit_cube(n: usize) -> Self {
        Self::new(vec![Interval::raw(-T::one(), T::one()); n])
    }

    pub fn from_decimals<S: AsRef<str>>(literals: &[S]) -> Result<Self> {
        literals
            .iter()
            .map(|s| Interval::from_decimal(s.as_ref()))
            .collect::<Result<Vec<_>>>()
            .map(Self::new)
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[Interval<T>] {
        &self.coords
    }

    pub fn coords_mut(&mut self) -> &mut [Interval<T>] {
        &mut self.coords
    }

    pub fn into_coords(self) -> Vec<Interval<T>> {
        self.coords
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Interval<T>> {
        self.coords.iter()
    }

    fn check_dim(&self, other: &Self) -> Result<()> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(())
    }

    pub fn ensure_finite(self) -> Result<Self> {
        for c in &self.coords {
            c.ensure_finite()?;
        }
        Ok(self)
    }

    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(Interval::is_finite)
    }

    pub fn mid(&self) -> Vec<T> {
        self.coords.iter().map(Interval::mid).collect()
    }

    pub fn hull(&self, other: &Self) -> Result<Self> {
        self.check_dim(other)?;
        Ok(Self::new(
            self.coords.iter().zip(&other.coords).map(|(a, b)| a.hull(b)).collect(),
        ))
    }

    /// `None` when the boxes are disjoint in at least one coordinate.
    pub fn intersect(&self, other: &Self) -> Result<Option<Self>> {
        self.check_dim(other)?;
        let mut out = Vec::with_capacity(self.dim());
        for (a, b) in self.coords.iter().zip(&other.coords) {
            match a.intersect(b) {
                Some(c) => out.push(c),
                None => return Ok(None),
            }
        }
        Ok(Some(Self::new(out)))
    }

    /// True when some coordinate pair is disjoint, i.e. the boxes do not meet.
    pub fn is_disjoint(&self, other: &Self) -> Result<bool> {
        self.check_dim(other)?;
        Ok(self.coords.iter().zip(&other.coords).any(|(a, b)| a.is_disjoint(b)))
    }

    pub fn subset_of(&self, other: &Self) -> Result<bool> {
        self.check_dim(other)?;
        Ok(self.coords.iter().zip(&other.coords).all(|(a, b)| a.subset_of(b)))
    }

    pub fn contains_point(&self, p: &[T]) -> bool {
        p.len() == self.dim() && self.coords.iter().zip(p).all(|(c, &t)| c.contains(t))
    }

    /// Split into `grid[0] × … × grid[n-1]` sub-boxes, row-major (the last
    /// coordinate varies fastest).
    pub fn subdivide(&self, grid: &[usize]) -> Result<Subdivision<T>> {
        subdivide_box(self, grid)
    }
}

impl<T: Scalar> Index<usize> for IBox<T> {
    type Output = Interval<T>;
    fn index(&self, i: usize) -> &Interval<T> {
        &self.coords[i]
    }
}

impl<T: Scalar> Add for &IBox<T> {
    type Output = IBox<T>;

    /// # Panics
    /// On dimension mismatch.
    fn add(self, rhs: Self) -> IBox<T> {
        assert_eq!(self.dim(), rhs.dim(), "box dimension mismatch");
        IBox::new(self.coords.iter().zip(&rhs.coords).map(|(&a, &b)| a + b).collect())
    }
}

impl<T: Scalar> Sub for &IBox<T> {
    type Output = IBox<T>;

    /// # Panics
    /// On dimension mismatch.
    fn sub(self, rhs: Self) -> IBox<T> {
        assert_eq!(self.dim(), rhs.dim(), "box dimension mismatch");
        IBox::new(self.coords.iter().zip(&rhs.coords).map(|(&a, &b)| a - b).collect())
    }
}

impl<T: Scalar> fmt::Display for IBox<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                f.write_str(" × ")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl<T: Scalar> FromIterator<Interval<T>> for IBox<T> {
    fn from_iter<I: IntoIterator<Item = Interval<T>>>(iter: I) -> Self {
        Self::new(iter.into_iter().collect())
    }
}

/// Deterministic row-major iterator over the sub-boxes of a grid.
#[derive(Clone, Debug)]
pub struct Subdivision<T> {
    pieces: Vec<Vec<Interval<T>>>,
    grid: Vec<usize>,
    next: usize,
    total: usize,
}

impl<T: Scalar> Subdivision<T> {
    pub fn len(&self) -> usize {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    /// Sub-box with the given row-major index.
    pub fn get(&self, mut index: usize) -> Option<IBox<T>> {
        if index >= self.total {
            return None;
        }
        let n = self.grid.len();
        let mut coords = vec![Interval::zero(); n];
        for d in (0..n).rev() {
            coords[d] = self.pieces[d][index % self.grid[d]];
            index /= self.grid[d];
        }
        Some(IBox::new(coords))
    }
}

impl<T: Scalar> Iterator for Subdivision<T> {
    type Item = IBox<T>;

    fn next(&mut self) -> Option<IBox<T>> {
        let b = self.get(self.next)?;
        self.next += 1;
        Some(b)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let rest = self.total - self.next;
        (rest, Some(rest))
    }
}

impl<T: Scalar> ExactSizeIterator for Subdivision<T> {}

pub fn subdivide_box<T: Scalar>(x: &IBox<T>, grid: &[usize]) -> Result<Subdivision<T>> {
    if grid.len() != x.dim() {
        return Err(Error::DimensionMismatch {
            expected: x.dim(),
            got: grid.len(),
        });
    }
    if grid.contains(&0) {
        return Err(Error::InvalidArgument("grid counts must be positive".into()));
    }
    let pieces = x
        .coords
        .iter()
        .zip(grid)
        .map(|(c, &k)| c.split(k))
        .collect::<Result<Vec<_>>>()?;
    let total = grid.iter().product();
    Ok(Subdivision {
        pieces,
        grid: grid.to_vec(),
        next: 0,
        total,
    })
}
