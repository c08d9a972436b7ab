//! Cone-condition check: `Dfᵀ·Q·Df − Q` positive definite on every part of
//! the model box whose image can meet the target set, with
//! `Q = diag(Id_u, −Id_s)`.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::henon::{BaseMap, IteratedMap};
use crate::ibox::IBox;
use crate::interval::Interval;
use crate::linalg::IMatrix;
use crate::scalar::Scalar;

/// `Q = diag(1, …, 1, −1, …, −1)` with `u` ones and `s` minus ones.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeQuadraticForm<T> {
    pub u: usize,
    pub s: usize,
    q: IMatrix<T>,
}

impl<T: Scalar> ConeQuadraticForm<T> {
    pub fn new(u: usize, s: usize) -> Self {
        let d: Vec<T> = (0..u + s).map(|i| if i < u { T::one() } else { -T::one() }).collect();
        Self {
            u,
            s,
            q: IMatrix::diag(&d),
        }
    }

    pub fn matrix(&self) -> &IMatrix<T> {
        &self.q
    }
}

/// Enclosure of `Dfᵀ·Q·Df − Q`.
pub fn cone_matrix<T: Scalar>(df: &IMatrix<T>, q: &ConeQuadraticForm<T>) -> Result<IMatrix<T>> {
    if df.rows() != q.matrix().rows() || !df.is_square() {
        return Err(Error::DimensionMismatch {
            expected: q.matrix().rows(),
            got: df.rows(),
        });
    }
    // Q is diagonal ±1, so (Q·Df)_kj is just ±Df_kj; entry (i, j) of the
    // product is Σ_k q_k Df_ki Df_kj.
    let n = df.rows();
    let mut out = IMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut acc = Interval::zero();
            for k in 0..n {
                let term = if i == j {
                    df.get(k, i).sqr()
                } else {
                    df.get(k, i) * df.get(k, j)
                };
                acc = if k < q.u { acc + term } else { acc - term };
            }
            let qi = if i == j {
                if i < q.u {
                    Interval::one()
                } else {
                    -Interval::one()
                }
            } else {
                Interval::zero()
            };
            out.set(i, j, acc - qi);
        }
    }
    out.ensure_finite()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConeOutcome {
    /// The image misses the target box, so the part cannot meet the
    /// invariant set.
    SkippedDisjoint,
    PositiveDefinite,
    Failed,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeWitness<T> {
    pub index: usize,
    pub local_box: IBox<T>,
    /// Leading principal minors of the cone matrix, when computed.
    pub minors: Vec<Interval<T>>,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapPairReport<T> {
    /// `aa`, `ab`, `ba` or `bb`.
    pub pair: String,
    pub boxes: usize,
    pub skipped_disjoint: usize,
    pub positive_definite: usize,
    pub failed: usize,
    pub witnesses: Vec<ConeWitness<T>>,
}

impl<T> MapPairReport<T> {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicityCertificate<T> {
    pub grid: Vec<usize>,
    pub passed: bool,
    pub maps: Vec<MapPairReport<T>>,
    pub wall_time_ms: u64,
}

/// Decides one part of the model box for one chart-conjugated map.
pub fn classify_part<T: Scalar, M: BaseMap<T>>(
    f: &IteratedMap<T, M>,
    part: &IBox<T>,
    q: &ConeQuadraticForm<T>,
) -> Result<(ConeOutcome, Vec<Interval<T>>)> {
    let model = IBox::unit_cube(part.dim());
    let (image, df) = f.eval_with_jacobian(part)?;
    if image.is_disjoint(&model)? {
        return Ok((ConeOutcome::SkippedDisjoint, Vec::new()));
    }
    let cone = cone_matrix(&df, q)?;
    let minors = cone.leading_minors()?;
    let outcome = if minors.iter().all(|m| m.lo() > T::zero()) {
        ConeOutcome::PositiveDefinite
    } else {
        ConeOutcome::Failed
    };
    Ok((outcome, minors))
}

/// Runs the cone check for each labelled map over `[-1, 1]ⁿ` split by
/// `grid`. Every map must already be conjugated to local coordinates.
pub fn check_strong_hyperbolicity<T: Scalar, M: BaseMap<T>>(
    maps: &[(String, IteratedMap<T, M>)],
    grid: &[usize],
    q: &ConeQuadraticForm<T>,
    max_failures_reported: usize,
) -> Result<HyperbolicityCertificate<T>> {
    let start = Instant::now();
    let n = q.u + q.s;
    let parts = IBox::unit_cube(n).subdivide(grid)?;
    let mut reports = Vec::with_capacity(maps.len());
    for (label, f) in maps {
        if f.dim() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: f.dim(),
            });
        }
        let outcomes: Vec<(ConeOutcome, Option<ConeWitness<T>>)> = (0..parts.len())
            .into_par_iter()
            .map(|index| {
                let part = parts.get(index).expect("index in range");
                match classify_part(f, &part, q) {
                    Ok((ConeOutcome::Failed, minors)) => (
                        ConeOutcome::Failed,
                        Some(ConeWitness {
                            index,
                            local_box: part,
                            minors,
                            error: None,
                        }),
                    ),
                    Ok((o, _)) => (o, None),
                    Err(e) => (
                        ConeOutcome::Failed,
                        Some(ConeWitness {
                            index,
                            local_box: part,
                            minors: Vec::new(),
                            error: Some(e.to_string()),
                        }),
                    ),
                }
            })
            .collect();
        let count = |o: ConeOutcome| outcomes.iter().filter(|(x, _)| *x == o).count();
        reports.push(MapPairReport {
            pair: label.clone(),
            boxes: outcomes.len(),
            skipped_disjoint: count(ConeOutcome::SkippedDisjoint),
            positive_definite: count(ConeOutcome::PositiveDefinite),
            failed: count(ConeOutcome::Failed),
            witnesses: outcomes
                .into_iter()
                .filter_map(|(_, w)| w)
                .take(max_failures_reported)
                .collect(),
        });
    }
    Ok(HyperbolicityCertificate {
        grid: grid.to_vec(),
        passed: reports.iter().all(MapPairReport::passed),
        maps: reports,
        wall_time_ms: start.elapsed().as_millis() as u64,
    })
}
