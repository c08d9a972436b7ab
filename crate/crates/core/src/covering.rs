//! Verification of covering relations `N₀ ⟹ N₁` between h-sets.
//!
//! Two sufficient conditions are checked on the local map
//! `f_c = C_{N₁} ∘ f ∘ C_{N₀}⁻¹` over the model box `B = [-1, 1]ⁿ`:
//!
//! * **(I)** every sub-box `P` of `B` either lands outside `N₁` in some exit
//!   coordinate (`mig [f_c(P)]_i > 1`) or strictly inside the stable slab
//!   (`mag [f_c(P)]_j < 1` for all entry coordinates);
//! * **(II)** every part `F` of every exit face satisfies
//!   `mig (hull([f_c(F)], [(A·F_u, 0)]))_i > 1` for some exit coordinate `i`,
//!   where `A` is a point matrix near `D f_c(0)` restricted to the exit block.
//!
//! The box hull in (II) contains the whole segment between `f_c(x)` and
//! `(A x_u, 0)` for every `x ∈ F`, so the linear homotopy joining them never
//! meets `N₁` from the exit set, and `A` maps `∂B_u` outside `B_u`.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::henon::{BaseMap, IteratedMap};
use crate::hset::HSet;
use crate::ibox::IBox;
use crate::interval::Interval;
use crate::linalg::IMatrix;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveringConfig {
    pub body_grid: Vec<usize>,
    pub face_grid: Vec<usize>,
    pub max_failures_reported: usize,
}

impl Default for CoveringConfig {
    /// 20×20×20 body boxes, 10×10 parts per face.
    fn default() -> Self {
        Self {
            body_grid: vec![20, 20, 20],
            face_grid: vec![10, 10],
            max_failures_reported: 16,
        }
    }
}

impl CoveringConfig {
    fn validate(&self, n: usize) -> Result<()> {
        if self.body_grid.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: self.body_grid.len(),
            });
        }
        if self.face_grid.len() + 1 != n {
            return Err(Error::DimensionMismatch {
                expected: n - 1,
                got: self.face_grid.len(),
            });
        }
        if self.body_grid.iter().chain(&self.face_grid).any(|&k| k == 0) {
            return Err(Error::InvalidArgument("grid counts must be positive".into()));
        }
        Ok(())
    }
}

/// Point `u × u` matrix used as the end of the homotopy.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LinearizationA<T> {
    pub entries: Vec<Vec<T>>,
}

impl<T: Scalar> LinearizationA<T> {
    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    fn as_interval(&self) -> IMatrix<T> {
        IMatrix::from_points(&self.entries).expect("square point matrix")
    }

    /// `(A·x_u, 0)` over a local box.
    pub fn image(&self, x: &IBox<T>) -> Result<IBox<T>> {
        let u = self.dim();
        let head: IBox<T> = x.iter().take(u).copied().collect();
        let mut out = self.as_interval().mul_vec(&head)?.into_coords();
        out.resize(x.dim(), Interval::zero());
        Ok(IBox::new(out))
    }
}

/// Midpoint of the exit block of `D(C_{N₁} ∘ f ∘ C_{N₀}⁻¹)(0)`.
pub fn linearization_at_center<T: Scalar, M: BaseMap<T>>(
    f: &IteratedMap<T, M>,
    n0: &HSet<T>,
    n1: &HSet<T>,
) -> Result<LinearizationA<T>> {
    let local = f.conjugate(n0.chart(), n1.chart())?;
    let origin = IBox::point(&vec![T::zero(); n0.dim()]);
    let d = local.jacobian(&origin)?;
    Ok(LinearizationA {
        entries: d.block(n0.u(), n0.u())?.mid(),
    })
}

/// Which disjunct of condition (I) a sub-box satisfied.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BodyOutcome {
    OutsideUnstable,
    InsideStable,
    Failed,
}

/// A sub-box or face part that failed its check.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness<T> {
    /// Row-major index in the grid.
    pub index: usize,
    pub local_box: IBox<T>,
    /// Image of the box under the local map; for a face part, its hull with
    /// the image under `A`. `None` when the enclosure could not be computed.
    pub image: Option<IBox<T>>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionIReport<T> {
    pub grid: Vec<usize>,
    pub boxes: usize,
    pub outside_unstable: usize,
    pub inside_stable: usize,
    pub failed: usize,
    pub witnesses: Vec<Witness<T>>,
}

impl<T> ConditionIReport<T> {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FaceReport<T> {
    /// Human-readable face, e.g. `x1 = -1`.
    pub face: String,
    pub fixed_dim: usize,
    pub sign: i8,
    pub parts: usize,
    pub failed: usize,
    pub witnesses: Vec<Witness<T>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionIIReport<T> {
    pub grid: Vec<usize>,
    pub faces: Vec<FaceReport<T>>,
}

impl<T> ConditionIIReport<T> {
    pub fn failed(&self) -> usize {
        self.faces.iter().map(|f| f.failed).sum()
    }

    pub fn passed(&self) -> bool {
        self.failed() == 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoveringCertificate<T> {
    pub source: String,
    pub target: String,
    pub map_iterate: usize,
    pub passed: bool,
    pub a: LinearizationA<T>,
    pub condition_i: ConditionIReport<T>,
    pub condition_ii: ConditionIIReport<T>,
    pub wall_time_ms: u64,
}

fn check_dims<T: Scalar>(n0: &HSet<T>, n1: &HSet<T>) -> Result<()> {
    if n0.u() != n1.u() || n0.s() != n1.s() {
        return Err(Error::InvalidArgument(format!(
            "h-sets {} (u={}, s={}) and {} (u={}, s={}) are not compatible",
            n0.name(),
            n0.u(),
            n0.s(),
            n1.name(),
            n1.u(),
            n1.s()
        )));
    }
    if n0.u() == 0 {
        return Err(Error::InvalidArgument("exit dimension must be positive".into()));
    }
    Ok(())
}

/// Classifies a local image box against condition (I).
pub fn classify_body<T: Scalar>(image: &IBox<T>, u: usize) -> BodyOutcome {
    let one = T::one();
    if image.iter().take(u).any(|c| c.mig() > one) {
        BodyOutcome::OutsideUnstable
    } else if image.iter().skip(u).all(|c| c.mag() < one) {
        BodyOutcome::InsideStable
    } else {
        BodyOutcome::Failed
    }
}

/// Condition (II) acceptance for a face part: some exit coordinate of the
/// hull of the two images stays strictly outside `[-1, 1]`.
pub fn face_part_accepted<T: Scalar>(image_f: &IBox<T>, image_a: &IBox<T>, u: usize) -> bool {
    image_f
        .iter()
        .zip(image_a.iter())
        .take(u)
        .any(|(a, b)| a.hull(b).mig() > T::one())
}

pub fn check_condition_i<T: Scalar, M: BaseMap<T>>(
    f: &IteratedMap<T, M>,
    n0: &HSet<T>,
    n1: &HSet<T>,
    cfg: &CoveringConfig,
) -> Result<ConditionIReport<T>> {
    check_dims(n0, n1)?;
    cfg.validate(n0.dim())?;
    let local = f.conjugate(n0.chart(), n1.chart())?;
    let u = n0.u();
    let grid = IBox::unit_cube(n0.dim()).subdivide(&cfg.body_grid)?;
    let outcomes: Vec<(BodyOutcome, Option<Witness<T>>)> = (0..grid.len())
        .into_par_iter()
        .map(|index| {
            let piece = grid.get(index).expect("index in range");
            match local.eval(&piece) {
                Ok(image) => {
                    let outcome = classify_body(&image, u);
                    let witness = (outcome == BodyOutcome::Failed).then_some(Witness {
                        index,
                        local_box: piece,
                        image: Some(image),
                        error: None,
                    });
                    (outcome, witness)
                }
                Err(e) => (
                    BodyOutcome::Failed,
                    Some(Witness {
                        index,
                        local_box: piece,
                        image: None,
                        error: Some(e.to_string()),
                    }),
                ),
            }
        })
        .collect();

    let count = |o: BodyOutcome| outcomes.iter().filter(|(x, _)| *x == o).count();
    Ok(ConditionIReport {
        grid: cfg.body_grid.clone(),
        boxes: outcomes.len(),
        outside_unstable: count(BodyOutcome::OutsideUnstable),
        inside_stable: count(BodyOutcome::InsideStable),
        failed: count(BodyOutcome::Failed),
        witnesses: outcomes
            .into_iter()
            .filter_map(|(_, w)| w)
            .take(cfg.max_failures_reported)
            .collect(),
    })
}

pub fn check_condition_ii<T: Scalar, M: BaseMap<T>>(
    f: &IteratedMap<T, M>,
    n0: &HSet<T>,
    n1: &HSet<T>,
    a: &LinearizationA<T>,
    cfg: &CoveringConfig,
) -> Result<ConditionIIReport<T>> {
    check_dims(n0, n1)?;
    cfg.validate(n0.dim())?;
    if a.dim() != n0.u() || a.entries.iter().any(|r| r.len() != n0.u()) {
        return Err(Error::DimensionMismatch {
            expected: n0.u(),
            got: a.dim(),
        });
    }
    let local = f.conjugate(n0.chart(), n1.chart())?;
    let u = n0.u();
    let mut faces = Vec::new();
    for face in n0.exit_faces() {
        let parts = face.parts(&cfg.face_grid)?;
        let failures: Vec<Witness<T>> = parts
            .par_iter()
            .enumerate()
            .filter_map(|(index, part)| {
                let result = local.eval(part).and_then(|yf| a.image(part).map(|ya| (yf, ya)));
                match result {
                    Ok((yf, ya)) if face_part_accepted(&yf, &ya, u) => None,
                    Ok((yf, ya)) => Some(Witness {
                        index,
                        local_box: part.clone(),
                        image: Some(yf.hull(&ya).expect("same dimension")),
                        error: None,
                    }),
                    Err(e) => Some(Witness {
                        index,
                        local_box: part.clone(),
                        image: None,
                        error: Some(e.to_string()),
                    }),
                }
            })
            .collect();
        faces.push(FaceReport {
            face: face.to_string(),
            fixed_dim: face.fixed_dim,
            sign: face.sign,
            parts: parts.len(),
            failed: failures.len(),
            witnesses: failures.into_iter().take(cfg.max_failures_reported).collect(),
        });
    }
    Ok(ConditionIIReport {
        grid: cfg.face_grid.clone(),
        faces,
    })
}

/// Checks conditions (I) and (II) for `n0 ⟹ n1` under `f`.
pub fn verify_covering<T: Scalar, M: BaseMap<T>>(
    f: &IteratedMap<T, M>,
    n0: &HSet<T>,
    n1: &HSet<T>,
    cfg: &CoveringConfig,
) -> Result<CoveringCertificate<T>> {
    let start = Instant::now();
    check_dims(n0, n1)?;
    cfg.validate(n0.dim())?;
    let a = linearization_at_center(f, n0, n1)?;
    let condition_i = check_condition_i(f, n0, n1, cfg)?;
    let condition_ii = check_condition_ii(f, n0, n1, &a, cfg)?;
    Ok(CoveringCertificate {
        source: n0.name().to_string(),
        target: n1.name().to_string(),
        map_iterate: f.iterates(),
        passed: condition_i.passed() && condition_ii.passed(),
        a,
        condition_i,
        condition_ii,
        wall_time_ms: start.elapsed().as_millis() as u64,
    })
}
