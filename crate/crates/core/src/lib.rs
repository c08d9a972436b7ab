//! Validated interval numerics for computer-assisted proofs about the
//! generalized 3D Hénon map: outward-rounded interval arithmetic, rigorous
//! 3×3 linear algebra, h-sets with affine charts, covering-relation checks
//! and cone-condition (strong hyperbolicity) checks.
//!
//! Everything is generic over the endpoint type ([`Scalar`], implemented for
//! `f32` and `f64`); the `*64` aliases below fix it to `f64`, which is what
//! the certificates use.

pub mod covering;
pub mod error;
pub mod henon;
pub mod hset;
pub mod hyperbolicity;
pub mod ibox;
pub mod interval;
pub mod linalg;
pub mod scalar;

pub use error::{Error, Result};
pub use ibox::{subdivide_box, IBox, Subdivision};
pub use interval::Interval;
pub use linalg::IMatrix;
pub use scalar::Scalar;

pub type Interval64 = Interval<f64>;
pub type IBox64 = IBox<f64>;
pub type IMatrix64 = IMatrix<f64>;
pub type HSet64 = hset::HSet<f64>;
pub type Henon64 = henon::Henon<f64>;
pub type AffineChart64 = henon::AffineChart<f64>;
pub type CoveringCertificate64 = covering::CoveringCertificate<f64>;
pub type HyperbolicityCertificate64 = hyperbolicity::HyperbolicityCertificate<f64>;

pub type Interval32 = Interval<f32>;
pub type IBox32 = IBox<f32>;
pub type IMatrix32 = IMatrix<f32>;
