//! The generalized 3D Hénon map `H(x, y, z) = (a - y² - b·z, x, y)`, its
//! interval extension and Jacobian, and chart-conjugated iterates.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::{Error, Result};
use crate::ibox::IBox;
use crate::interval::Interval;
use crate::linalg::IMatrix;
use crate::scalar::Scalar;

/// A map ℝⁿ → ℝⁿ with an interval extension and an interval Jacobian.
pub trait BaseMap<T: Scalar>: Send + Sync {
    fn dim(&self) -> usize;

    /// Box enclosing the image of every point of `x`.
    fn eval(&self, x: &IBox<T>) -> Result<IBox<T>>;

    /// Interval matrix enclosing the derivative at every point of `x`.
    fn jacobian(&self, x: &IBox<T>) -> Result<IMatrix<T>>;
}

impl<T: Scalar, M: BaseMap<T> + ?Sized> BaseMap<T> for &M {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn eval(&self, x: &IBox<T>) -> Result<IBox<T>> {
        (**self).eval(x)
    }

    fn jacobian(&self, x: &IBox<T>) -> Result<IMatrix<T>> {
        (**self).jacobian(x)
    }
}

/// Map coefficients, kept alongside the decimal literals they came from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HenonParams<T> {
    pub a_decimal: String,
    pub b_decimal: String,
    pub a: Interval<T>,
    pub b: Interval<T>,
}

impl<T: Scalar> HenonParams<T> {
    pub fn from_decimals(a: &str, b: &str) -> Result<Self> {
        Ok(Self {
            a_decimal: a.to_string(),
            b_decimal: b.to_string(),
            a: Interval::from_decimal(a)?,
            b: Interval::from_decimal(b)?,
        })
    }
}

impl<T: Scalar> Default for HenonParams<T> {
    /// `a = 1.76`, `b = 0.1`.
    fn default() -> Self {
        Self::from_decimals("1.76", "0.1").expect("default Hénon constants parse")
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Henon<T> {
    pub params: HenonParams<T>,
    // round-to-nearest coefficients for the non-rigorous sampler
    a_nearest: T,
    b_nearest: T,
}

impl<T: Scalar> Henon<T> {
    pub fn new(params: HenonParams<T>) -> Self {
        let nearest = |lit: &str, fallback: Interval<T>| lit.trim().parse().unwrap_or(fallback.mid());
        Self {
            a_nearest: nearest(&params.a_decimal, params.a),
            b_nearest: nearest(&params.b_decimal, params.b),
            params,
        }
    }

    /// Plain floating-point iteration, `k` steps. NOT RIGOROUS: no rounding
    /// control, intended for plotting and sampling only.
    pub fn eval_point_fast(&self, p: [T; 3], k: usize) -> std::result::Result<[T; 3], Divergence> {
        let (a, b) = (self.a_nearest, self.b_nearest);
        let mut q = p;
        for step in 0..k {
            let [x, y, z] = q;
            q = [a - y * y - b * z, x, y];
            if q.iter().any(|v| !v.is_finite()) {
                return Err(Divergence { step: step + 1 });
            }
        }
        Ok(q)
    }
}

impl<T: Scalar> Default for Henon<T> {
    fn default() -> Self {
        Self::new(HenonParams::default())
    }
}

/// The non-rigorous orbit left the finite floating-point range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
#[error("orbit diverged at step {step}")]
pub struct Divergence {
    pub step: usize,
}

fn expect_dim<T: Scalar>(x: &IBox<T>, n: usize) -> Result<()> {
    if x.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: x.dim(),
        });
    }
    Ok(())
}

impl<T: Scalar> BaseMap<T> for Henon<T> {
    fn dim(&self) -> usize {
        3
    }

    fn eval(&self, v: &IBox<T>) -> Result<IBox<T>> {
        expect_dim(v, 3)?;
        let (x, y, z) = (v[0], v[1], v[2]);
        let first = self.params.a - y.sqr() - self.params.b * z;
        IBox::new(vec![first, x, y]).ensure_finite()
    }

    fn jacobian(&self, v: &IBox<T>) -> Result<IMatrix<T>> {
        expect_dim(v, 3)?;
        let two = T::one() + T::one();
        let zero = Interval::zero();
        let one = Interval::one();
        IMatrix::from_rows(vec![
            vec![zero, v[1].scale(-two), -self.params.b],
            vec![one, zero, zero],
            vec![zero, one, zero],
        ])?
        .ensure_finite()
    }
}

/// `x ↦ L·x` for a fixed interval matrix `L`.
#[derive(Clone, Debug, PartialEq)]
pub struct LinearMap<T> {
    pub matrix: IMatrix<T>,
}

impl<T: Scalar> LinearMap<T> {
    pub fn new(matrix: IMatrix<T>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidArgument("linear map needs a square matrix".into()));
        }
        Ok(Self { matrix })
    }

    pub fn diag(d: &[T]) -> Self {
        Self {
            matrix: IMatrix::diag(d),
        }
    }

    pub fn identity(n: usize) -> Self {
        Self {
            matrix: IMatrix::identity(n),
        }
    }
}

impl<T: Scalar> BaseMap<T> for LinearMap<T> {
    fn dim(&self) -> usize {
        self.matrix.rows()
    }

    fn eval(&self, x: &IBox<T>) -> Result<IBox<T>> {
        self.matrix.mul_vec(x)
    }

    fn jacobian(&self, x: &IBox<T>) -> Result<IMatrix<T>> {
        expect_dim(x, self.dim())?;
        Ok(self.matrix.clone())
    }
}

/// Affine coordinate change: world `p = c + M·q` for local `q`, with a
/// verified enclosure of `M⁻¹` stored for the reverse direction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AffineChart<T> {
    center: IBox<T>,
    basis: IMatrix<T>,
    basis_inv: IMatrix<T>,
}

impl<T: Scalar> AffineChart<T> {
    /// Fails with [`Error::Singular`] if `basis` cannot be inverted
    /// rigorously.
    pub fn new(center: IBox<T>, basis: IMatrix<T>) -> Result<Self> {
        if basis.rows() != center.dim() || basis.cols() != center.dim() {
            return Err(Error::DimensionMismatch {
                expected: center.dim(),
                got: basis.rows(),
            });
        }
        let basis_inv = basis.inverse3()?;
        if !basis.mul(&basis_inv)?.contains_identity() {
            return Err(Error::Singular("M·M⁻¹ does not contain the identity".into()));
        }
        Ok(Self {
            center,
            basis,
            basis_inv,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            center: IBox::point(&vec![T::zero(); n]),
            basis: IMatrix::identity(n),
            basis_inv: IMatrix::identity(n),
        }
    }

    pub fn dim(&self) -> usize {
        self.center.dim()
    }

    pub fn center(&self) -> &IBox<T> {
        &self.center
    }

    pub fn basis(&self) -> &IMatrix<T> {
        &self.basis
    }

    pub fn basis_inv(&self) -> &IMatrix<T> {
        &self.basis_inv
    }

    /// `c + M·x`.
    pub fn world_from_local(&self, x: &IBox<T>) -> Result<IBox<T>> {
        let m = self.basis.mul_vec(x)?;
        (&m + &self.center).ensure_finite()
    }

    /// `M⁻¹·(y − c)`.
    pub fn local_from_world(&self, y: &IBox<T>) -> Result<IBox<T>> {
        expect_dim(y, self.dim())?;
        let shifted = (y - &self.center).ensure_finite()?;
        self.basis_inv.mul_vec(&shifted)
    }

    /// The same chart with its center moved by `offset` (world coordinates).
    pub fn translated(&self, offset: &[T]) -> Result<Self> {
        let shift = IBox::point(offset);
        expect_dim(&shift, self.dim())?;
        Ok(Self {
            center: (&self.center + &shift).ensure_finite()?,
            basis: self.basis.clone(),
            basis_inv: self.basis_inv.clone(),
        })
    }
}

/// `C_post ∘ fᵏ ∘ C_pre⁻¹`, where the charts are optional.
///
/// `chart_pre` maps local model coordinates into the world before the
/// first application of `base`; `chart_post` maps the result back into the
/// target's local coordinates.
#[derive(Clone, Debug)]
pub struct IteratedMap<T, M> {
    base: M,
    k: usize,
    chart_pre: Option<AffineChart<T>>,
    chart_post: Option<AffineChart<T>>,
}

impl<T: Scalar, M: BaseMap<T>> IteratedMap<T, M> {
    pub fn new(base: M, k: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("iterate count must be at least 1".into()));
        }
        Ok(Self {
            base,
            k,
            chart_pre: None,
            chart_post: None,
        })
    }

    pub fn with_charts(mut self, pre: Option<AffineChart<T>>, post: Option<AffineChart<T>>) -> Result<Self> {
        for c in pre.iter().chain(post.iter()) {
            if c.dim() != self.base.dim() {
                return Err(Error::DimensionMismatch {
                    expected: self.base.dim(),
                    got: c.dim(),
                });
            }
        }
        self.chart_pre = pre;
        self.chart_post = post;
        Ok(self)
    }

    /// `C_post ∘ fᵏ ∘ C_pre⁻¹` borrowing this map's base. Fails if `self`
    /// already carries charts.
    pub fn conjugate<'a>(&'a self, pre: &AffineChart<T>, post: &AffineChart<T>) -> Result<IteratedMap<T, &'a M>> {
        if self.chart_pre.is_some() || self.chart_post.is_some() {
            return Err(Error::InvalidArgument("map is already chart-conjugated".into()));
        }
        IteratedMap::new(&self.base, self.k)?.with_charts(Some(pre.clone()), Some(post.clone()))
    }

    pub fn base(&self) -> &M {
        &self.base
    }

    pub fn iterates(&self) -> usize {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.base.dim()
    }

    fn enter(&self, x: &IBox<T>) -> Result<IBox<T>> {
        expect_dim(x, self.dim())?;
        match &self.chart_pre {
            Some(c) => c.world_from_local(x),
            None => Ok(x.clone()),
        }
    }

    fn leave(&self, y: &IBox<T>) -> Result<IBox<T>> {
        match &self.chart_post {
            Some(c) => c.local_from_world(y),
            None => Ok(y.clone()),
        }
    }

    pub fn eval(&self, x: &IBox<T>) -> Result<IBox<T>> {
        let mut w = self.enter(x)?;
        for _ in 0..self.k {
            w = self.base.eval(&w)?;
        }
        self.leave(&w)
    }

    pub fn jacobian(&self, x: &IBox<T>) -> Result<IMatrix<T>> {
        self.eval_with_jacobian(x).map(|(_, j)| j)
    }

    /// Image and derivative together; the derivative is the chain-rule
    /// product of base Jacobians over the successive interval images.
    pub fn eval_with_jacobian(&self, x: &IBox<T>) -> Result<(IBox<T>, IMatrix<T>)> {
        let mut w = self.enter(x)?;
        let mut d = match &self.chart_pre {
            Some(c) => c.basis().clone(),
            None => IMatrix::identity(self.dim()),
        };
        for _ in 0..self.k {
            d = self.base.jacobian(&w)?.mul(&d)?;
            w = self.base.eval(&w)?;
        }
        if let Some(c) = &self.chart_post {
            d = c.basis_inv().mul(&d)?;
        }
        Ok((self.leave(&w)?, d))
    }
}
