//! H-sets: parallelepipeds given by an affine chart onto `[-1, 1]ⁿ`, with
//! the first `u` local coordinates designated as exit (unstable) directions
//! and the remaining `s` as entry (stable) directions.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::henon::AffineChart;
use crate::ibox::IBox;
use crate::interval::Interval;
use crate::linalg::IMatrix;
use crate::scalar::Scalar;

/// Decimal-string description of an h-set, as stored in config files and
/// echoed into reports.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HSetConfig {
    pub center: Vec<String>,
    /// Rows of the basis matrix; its columns are the edge half-vectors.
    pub basis: Vec<Vec<String>>,
    pub u: usize,
    pub s: usize,
}

/// The pair of h-sets certified by this crate, keyed `a` and `b`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HSetPairConfig {
    pub a: HSetConfig,
    pub b: HSetConfig,
}

impl HSetPairConfig {
    /// The sets `a` (center y = 1.0225) and `b` (center y = 1.4875) on the
    /// folded-towel attractor.
    pub fn standard() -> Self {
        let s = |v: &[&str]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>();
        let basis = |mid: &str| {
            vec![
                s(&["0", "0.19", "-0.03"]),
                s(&[mid, "0", "0"]),
                s(&["0", "-0.095", "-0.06"]),
            ]
        };
        Self {
            a: HSetConfig {
                center: s(&["0.81", "1.0225", "0.975"]),
                basis: basis("0.1825"),
                u: 2,
                s: 1,
            },
            b: HSetConfig {
                center: s(&["0.81", "1.4875", "0.975"]),
                basis: basis("0.1225"),
                u: 2,
                s: 1,
            },
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HSet<T> {
    name: String,
    chart: AffineChart<T>,
    u: usize,
    s: usize,
    definition: Option<HSetConfig>,
}

impl<T: Scalar> HSet<T> {
    pub fn new(name: impl Into<String>, chart: AffineChart<T>, u: usize, s: usize) -> Result<Self> {
        if u + s != chart.dim() {
            return Err(Error::InvalidArgument(format!(
                "u + s = {} does not match dimension {}",
                u + s,
                chart.dim()
            )));
        }
        Ok(Self {
            name: name.into(),
            chart,
            u,
            s,
            definition: None,
        })
    }

    /// Builds the chart from decimal strings and verifies its inverse.
    pub fn from_config(name: impl Into<String>, cfg: &HSetConfig) -> Result<Self> {
        let center = IBox::from_decimals(&cfg.center)?;
        let basis = IMatrix::from_decimals(&cfg.basis)?;
        let chart = AffineChart::new(center, basis)?;
        let mut h = Self::new(name, chart, cfg.u, cfg.s)?;
        h.definition = Some(cfg.clone());
        Ok(h)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn chart(&self) -> &AffineChart<T> {
        &self.chart
    }

    pub fn dim(&self) -> usize {
        self.chart.dim()
    }

    /// Exit dimension.
    pub fn u(&self) -> usize {
        self.u
    }

    /// Entry dimension.
    pub fn s(&self) -> usize {
        self.s
    }

    pub fn definition(&self) -> Option<&HSetConfig> {
        self.definition.as_ref()
    }

    pub fn world_from_local(&self, x: &IBox<T>) -> Result<IBox<T>> {
        self.chart.world_from_local(x)
    }

    pub fn local_from_world(&self, y: &IBox<T>) -> Result<IBox<T>> {
        self.chart.local_from_world(y)
    }

    /// Interval hull of the support in world coordinates.
    pub fn support_hull(&self) -> Result<IBox<T>> {
        self.world_from_local(&IBox::unit_cube(self.dim()))
    }

    /// The `2u` faces making up the exit set, ordered by dimension then sign.
    pub fn exit_faces(&self) -> Vec<LocalFace<T>> {
        (0..self.u)
            .flat_map(|d| [-1i8, 1].map(|sign| LocalFace::new(self.dim(), d, sign)))
            .collect()
    }

    /// Same h-set with the world center shifted by `offset`.
    pub fn translated(&self, name: impl Into<String>, offset: &[T]) -> Result<Self> {
        Ok(Self {
            name: name.into(),
            chart: self.chart.translated(offset)?,
            u: self.u,
            s: self.s,
            definition: None,
        })
    }
}

/// N_a and N_b with u = 2, s = 1.
pub fn make_standard_hsets<T: Scalar>() -> Result<(HSet<T>, HSet<T>)> {
    let cfg = HSetPairConfig::standard();
    Ok((HSet::from_config("a", &cfg.a)?, HSet::from_config("b", &cfg.b)?))
}

/// One face `{x_d = ±1}` of the exit set in local coordinates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LocalFace<T> {
    /// Zero-based index of the pinned exit coordinate.
    pub fixed_dim: usize,
    pub sign: i8,
    /// `[-1, 1]ⁿ` with coordinate `fixed_dim` pinned to `[sign, sign]`.
    pub extent: IBox<T>,
}

impl<T: Scalar> LocalFace<T> {
    fn new(n: usize, fixed_dim: usize, sign: i8) -> Self {
        let mut extent = IBox::unit_cube(n);
        let v = if sign < 0 { -T::one() } else { T::one() };
        extent.coords_mut()[fixed_dim] = Interval::point(v);
        Self {
            fixed_dim,
            sign,
            extent,
        }
    }

    /// Splits the free coordinates (all but `fixed_dim`, in order) by
    /// `grid`; the pinned coordinate stays degenerate.
    pub fn parts(&self, grid: &[usize]) -> Result<Vec<IBox<T>>> {
        let n = self.extent.dim();
        if grid.len() + 1 != n {
            return Err(Error::DimensionMismatch {
                expected: n - 1,
                got: grid.len(),
            });
        }
        let mut full = Vec::with_capacity(n);
        let mut g = grid.iter();
        for d in 0..n {
            full.push(if d == self.fixed_dim { 1 } else { *g.next().unwrap() });
        }
        Ok(self.extent.subdivide(&full)?.collect())
    }
}

impl<T> fmt::Display for LocalFace<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = if self.sign < 0 { '-' } else { '+' };
        write!(f, "x{} = {s}1", self.fixed_dim + 1)
    }
}
