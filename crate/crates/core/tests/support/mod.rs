//! Independent oracles and randomized suites shared by the integration tests
//! and the acceptance target. Everything here evaluates in exact rational
//! arithmetic or in plain f64 via nalgebra, never through the interval kernel.

#![allow(dead_code)]

use hyperchaos::henon::{AffineChart, Henon, IteratedMap};
use hyperchaos::hset::{HSetConfig, HSetPairConfig};
use hyperchaos::interval::{contains_rational, parse_decimal_rational};
use hyperchaos::{IBox, IMatrix, Interval, Scalar};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Q = BigRational;
pub type QMat = [[Q; 3]; 3];

pub fn q(v: f64) -> Q {
    v.to_rational().expect("finite")
}

pub fn qi(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

pub fn dec(s: &str) -> Q {
    parse_decimal_rational(s).expect("decimal literal")
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------- sampling

/// A scalar drawn from a mix of magnitudes, including exact small integers
/// and values near the subnormal range.
pub fn scalar(r: &mut impl Rng) -> f64 {
    match r.gen_range(0..6) {
        0 => r.gen_range(-10.0..10.0),
        1 => r.gen_range(-1e-3..1e-3),
        2 => r.gen_range(-8i32..=8) as f64,
        3 => r.gen_range(-1.0..1.0) * 1e-305,
        4 => r.gen_range(-1.0..1.0) * 1e100,
        _ => r.gen_range(-1.0..1.0),
    }
}

pub fn interval(r: &mut impl Rng) -> Interval<f64> {
    let a = scalar(r);
    let b = if r.gen_bool(0.2) {
        a
    } else if r.gen_bool(0.5) {
        a + r.gen_range(0.0..1.0) * a.abs().max(1e-3)
    } else {
        scalar(r)
    };
    Interval::new(a.min(b), a.max(b)).unwrap()
}

/// A point of `x`, with the endpoints themselves drawn often.
pub fn member(r: &mut impl Rng, x: Interval<f64>) -> f64 {
    match r.gen_range(0..5) {
        0 => x.lo(),
        1 => x.hi(),
        _ => {
            let t: f64 = r.gen();
            (x.lo() + t * (x.hi() - x.lo())).clamp(x.lo(), x.hi())
        }
    }
}

/// A sub-interval of `x`.
pub fn nested(r: &mut impl Rng, x: Interval<f64>) -> Interval<f64> {
    let a = member(r, x);
    let b = member(r, x);
    Interval::new(a.min(b), a.max(b)).unwrap()
}

pub fn box_around(r: &mut impl Rng, lo: f64, hi: f64, max_width: f64) -> IBox<f64> {
    (0..3)
        .map(|_| {
            let c = r.gen_range(lo..hi);
            let w = r.gen_range(0.0..max_width);
            Interval::new(c - w / 2.0, c + w / 2.0).unwrap()
        })
        .collect()
}

pub fn box_member(r: &mut impl Rng, x: &IBox<f64>) -> [f64; 3] {
    [member(r, x[0]), member(r, x[1]), member(r, x[2])]
}

pub fn nested_box(r: &mut impl Rng, x: &IBox<f64>) -> IBox<f64> {
    x.iter().map(|c| nested(r, *c)).collect()
}

pub fn matrix(r: &mut impl Rng, scale: f64, width: f64) -> IMatrix<f64> {
    let rows = (0..3)
        .map(|_| {
            (0..3)
                .map(|_| {
                    let c = r.gen_range(-scale..scale);
                    let w = r.gen_range(0.0..width);
                    Interval::new(c - w, c + w).unwrap()
                })
                .collect()
        })
        .collect();
    IMatrix::from_rows(rows).unwrap()
}

pub fn matrix_member(r: &mut impl Rng, m: &IMatrix<f64>) -> [[f64; 3]; 3] {
    let mut out = [[0.0; 3]; 3];
    for (i, row) in out.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = member(r, m.get(i, j));
        }
    }
    out
}

pub fn nested_matrix(r: &mut impl Rng, m: &IMatrix<f64>) -> IMatrix<f64> {
    IMatrix::from_rows(
        (0..3)
            .map(|i| (0..3).map(|j| nested(r, m.get(i, j))).collect())
            .collect(),
    )
    .unwrap()
}

// ------------------------------------------------------- exact arithmetic

pub fn qmat(m: &[[f64; 3]; 3]) -> QMat {
    std::array::from_fn(|i| std::array::from_fn(|j| q(m[i][j])))
}

pub fn qmat_mul(a: &QMat, b: &QMat) -> QMat {
    std::array::from_fn(|i| std::array::from_fn(|j| (0..3).fold(Q::zero(), |acc, k| acc + &a[i][k] * &b[k][j])))
}

pub fn qmat_vec(a: &QMat, v: &[Q; 3]) -> [Q; 3] {
    std::array::from_fn(|i| (0..3).fold(Q::zero(), |acc, k| acc + &a[i][k] * &v[k]))
}

pub fn qdet2(a: &Q, b: &Q, c: &Q, d: &Q) -> Q {
    a * d - b * c
}

pub fn qdet(m: &QMat) -> Q {
    &m[0][0] * qdet2(&m[1][1], &m[1][2], &m[2][1], &m[2][2]) - &m[0][1] * qdet2(&m[1][0], &m[1][2], &m[2][0], &m[2][2])
        + &m[0][2] * qdet2(&m[1][0], &m[1][1], &m[2][0], &m[2][1])
}

pub fn qminors(m: &QMat) -> [Q; 3] {
    [m[0][0].clone(), qdet2(&m[0][0], &m[0][1], &m[1][0], &m[1][1]), qdet(m)]
}

/// Exact inverse by Gauss-Jordan elimination; `None` if singular.
pub fn qinverse(m: &QMat) -> Option<QMat> {
    let mut a: Vec<Vec<Q>> = (0..3)
        .map(|i| {
            let mut row = m[i].to_vec();
            row.extend((0..3).map(|j| if i == j { Q::one() } else { Q::zero() }));
            row
        })
        .collect();
    for col in 0..3 {
        let pivot = (col..3).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        let p = a[col][col].clone();
        for v in a[col].iter_mut() {
            *v = &*v / &p;
        }
        for r in 0..3 {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (v, pv) in a[r].iter_mut().zip(pivot_row) {
                    *v = &*v - &factor * pv;
                }
            }
        }
    }
    Some(std::array::from_fn(|i| std::array::from_fn(|j| a[i][3 + j].clone())))
}

pub struct ExactHenon {
    pub a: Q,
    pub b: Q,
}

impl ExactHenon {
    pub fn new(a: &str, b: &str) -> Self {
        Self { a: dec(a), b: dec(b) }
    }

    pub fn standard() -> Self {
        Self::new("1.76", "0.1")
    }

    pub fn step(&self, p: &[Q; 3]) -> [Q; 3] {
        [&self.a - &p[1] * &p[1] - &self.b * &p[2], p[0].clone(), p[1].clone()]
    }

    pub fn jacobian(&self, p: &[Q; 3]) -> QMat {
        let (z, o) = (Q::zero(), Q::one());
        [
            [z.clone(), -(qi(2) * &p[1]), -self.b.clone()],
            [o.clone(), z.clone(), z.clone()],
            [z.clone(), o, z],
        ]
    }

    /// `H^k(p)` and `DH^k(p)` by the chain rule.
    pub fn iterate(&self, p: &[Q; 3], k: usize) -> ([Q; 3], QMat) {
        let mut x = p.clone();
        let mut d = qmat(&[[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]]);
        for _ in 0..k {
            d = qmat_mul(&self.jacobian(&x), &d);
            x = self.step(&x);
        }
        (x, d)
    }
}

/// Exact affine chart built from decimal strings, independent of the
/// interval inverse stored in [`AffineChart`].
pub struct ExactChart {
    pub center: [Q; 3],
    pub basis: QMat,
    pub basis_inv: QMat,
}

impl ExactChart {
    pub fn new(cfg: &HSetConfig) -> Self {
        let center = std::array::from_fn(|i| dec(&cfg.center[i]));
        let basis: QMat = std::array::from_fn(|i| std::array::from_fn(|j| dec(&cfg.basis[i][j])));
        let basis_inv = qinverse(&basis).expect("nonsingular basis");
        Self {
            center,
            basis,
            basis_inv,
        }
    }

    pub fn world_from_local(&self, x: &[Q; 3]) -> [Q; 3] {
        let v = qmat_vec(&self.basis, x);
        std::array::from_fn(|i| &self.center[i] + &v[i])
    }

    pub fn local_from_world(&self, y: &[Q; 3]) -> [Q; 3] {
        let d: [Q; 3] = std::array::from_fn(|i| &y[i] - &self.center[i]);
        qmat_vec(&self.basis_inv, &d)
    }
}

pub fn qpoint(p: [f64; 3]) -> [Q; 3] {
    p.map(q)
}

pub fn box_contains(x: &IBox<f64>, p: &[Q; 3]) -> bool {
    x.iter().zip(p).all(|(c, v)| contains_rational(c, v))
}

pub fn matrix_contains(m: &IMatrix<f64>, e: &QMat) -> bool {
    (0..3).all(|i| (0..3).all(|j| contains_rational(&m.get(i, j), &e[i][j])))
}

// ------------------------------------------------------------- suites

#[derive(Debug, Default)]
pub struct SuiteResult {
    pub cases: usize,
    pub by_area: Vec<(&'static str, usize)>,
    pub violations: Vec<String>,
}

impl SuiteResult {
    fn record(&mut self, area: &'static str, ok: bool, detail: impl FnOnce() -> String) {
        self.cases += 1;
        match self.by_area.iter_mut().find(|(a, _)| *a == area) {
            Some((_, n)) => *n += 1,
            None => self.by_area.push((area, 1)),
        }
        if !ok && self.violations.len() < 20 {
            self.violations.push(format!("{area}: {}", detail()));
        } else if !ok {
            self.violations.push(String::new());
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

fn interval_case(r: &mut impl Rng, res: &mut SuiteResult) {
    let (x, y) = (interval(r), interval(r));
    let (a, b) = (member(r, x), member(r, y));
    let (qa, qb) = (q(a), q(b));
    let op = r.gen_range(0..7);
    let (image, exact, name) = match op {
        0 => (x + y, &qa + &qb, "add"),
        1 => (x - y, &qa - &qb, "sub"),
        2 => (x * y, &qa * &qb, "mul"),
        3 => (x.sqr(), &qa * &qa, "sqr"),
        4 => (-x, -qa.clone(), "neg"),
        5 => {
            let c = scalar(r);
            (x.scale(c), &qa * q(c), "scale")
        }
        _ => {
            let digits: u64 = r.gen();
            let exp = r.gen_range(-30..30);
            let lit = format!("{}{}e{}", if r.gen() { "-" } else { "" }, digits, exp);
            (Interval::from_decimal(&lit).unwrap(), dec(&lit), "from_decimal")
        }
    };
    let ok = contains_rational(&image, &exact);
    res.record("interval", ok, || {
        format!("{name} x={x} y={y} a={a:e} b={b:e} -> {image}")
    });
}

fn linalg_case(r: &mut impl Rng, res: &mut SuiteResult) {
    let m = matrix(r, 4.0, 0.05);
    let n = matrix(r, 4.0, 0.05);
    let (pm, pn) = (matrix_member(r, &m), matrix_member(r, &n));
    let (em, en) = (qmat(&pm), qmat(&pn));
    match r.gen_range(0..5) {
        0 => {
            let ok = matrix_contains(&m.mul(&n).unwrap(), &qmat_mul(&em, &en));
            res.record("linalg", ok, || format!("mul {m} * {n}"));
        }
        1 => {
            let v = box_around(r, -3.0, 3.0, 0.1);
            let pv = box_member(r, &v);
            let ok = box_contains(&m.mul_vec(&v).unwrap(), &qmat_vec(&em, &qpoint(pv)));
            res.record("linalg", ok, || format!("mul_vec {m} * {v}"));
        }
        2 => {
            let ok = contains_rational(&m.det().unwrap(), &qdet(&em));
            res.record("linalg", ok, || format!("det {m}"));
        }
        3 => {
            let sym = m.add(&m.transpose()).unwrap();
            let exact: QMat = std::array::from_fn(|i| std::array::from_fn(|j| &em[i][j] + &em[j][i]));
            let minors = sym.leading_minors().unwrap();
            let ok = minors
                .iter()
                .zip(qminors(&exact))
                .all(|(i, e)| contains_rational(i, &e));
            res.record("linalg", ok, || format!("minors {sym}"));
        }
        _ => match (m.inverse3(), qinverse(&em)) {
            (Ok(inv), Some(exact)) => {
                let ok = matrix_contains(&inv, &exact);
                res.record("linalg", ok, || format!("inverse3 {m}"));
            }
            // A singular member forces the interval inverse to refuse.
            (Ok(_), None) => res.record("linalg", false, || format!("inverse3 of singular member {m}")),
            (Err(_), _) => res.record("linalg", true, String::new),
        },
    }
}

fn henon_case(
    r: &mut impl Rng,
    res: &mut SuiteResult,
    h: &Henon<f64>,
    exact: &ExactHenon,
    charts: &[(AffineChart<f64>, ExactChart)],
) {
    let k = r.gen_range(1..=4);
    let f = IteratedMap::new(h, k).unwrap();
    if r.gen_bool(0.5) {
        let x = box_around(r, -1.5, 1.5, 0.05);
        let p = box_member(r, &x);
        let (y, d) = exact.iterate(&qpoint(p), k);
        let (img, jac) = f.eval_with_jacobian(&x).unwrap();
        res.record("henon", box_contains(&img, &y), || format!("H^{k} on {x} at {p:?}"));
        res.record("henon", matrix_contains(&jac, &d), || format!("DH^{k} on {x} at {p:?}"));
    } else {
        let i = r.gen_range(0..charts.len());
        let j = r.gen_range(0..charts.len());
        let g = f.conjugate(&charts[i].0, &charts[j].0).unwrap();
        let x = box_around(r, -1.0, 1.0, 0.1);
        let p = box_member(r, &x);
        let world = charts[i].1.world_from_local(&qpoint(p));
        let (y, d) = exact.iterate(&world, k);
        let local = charts[j].1.local_from_world(&y);
        let dlocal = qmat_mul(&charts[j].1.basis_inv, &qmat_mul(&d, &charts[i].1.basis));
        let (img, jac) = g.eval_with_jacobian(&x).unwrap();
        res.record("henon", box_contains(&img, &local), || {
            format!("f_{i}{j} (k={k}) on {x}")
        });
        res.record("henon", matrix_contains(&jac, &dlocal), || {
            format!("Df_{i}{j} (k={k}) on {x}")
        });
    }
}

fn standard_charts() -> Vec<(AffineChart<f64>, ExactChart)> {
    let cfg = HSetPairConfig::standard();
    [cfg.a, cfg.b]
        .iter()
        .map(|c| {
            let center = IBox::from_decimals(&c.center).unwrap();
            let basis = IMatrix::from_decimals(&c.basis).unwrap();
            (AffineChart::new(center, basis).unwrap(), ExactChart::new(c))
        })
        .collect()
}

/// Point-in-image checks: an exact rational evaluation at a member of the
/// operands must lie in the interval result. Cases rotate between the
/// scalar, matrix and map kernels.
pub fn enclosure_suite(cases: usize, seed: u64) -> SuiteResult {
    let mut r = rng(seed);
    let mut res = SuiteResult::default();
    let h = Henon::<f64>::default();
    let exact = ExactHenon::standard();
    let charts = standard_charts();
    for turn in 0.. {
        if res.cases >= cases {
            break;
        }
        match turn % 3 {
            0 => interval_case(&mut r, &mut res),
            1 => linalg_case(&mut r, &mut res),
            _ => henon_case(&mut r, &mut res, &h, &exact, &charts),
        }
    }
    res
}

/// Inclusion monotonicity: shrinking the operands never enlarges the result.
pub fn monotonicity_suite(cases: usize, seed: u64) -> SuiteResult {
    let mut r = rng(seed);
    let mut res = SuiteResult::default();
    let h = Henon::<f64>::default();
    let f4 = IteratedMap::new(&h, 4).unwrap();
    while res.cases < cases {
        match res.cases % 3 {
            0 => {
                let (x, y) = (interval(&mut r), interval(&mut r));
                let (xs, ys) = (nested(&mut r, x), nested(&mut r, y));
                let pairs = [
                    (xs + ys, x + y),
                    (xs - ys, x - y),
                    (xs * ys, x * y),
                    (xs.sqr(), x.sqr()),
                ];
                let ok = pairs.iter().all(|(s, l)| s.subset_of(l)) && xs.mig() >= x.mig() && xs.mag() <= x.mag();
                res.record("interval", ok, || format!("x={x} y={y} xs={xs} ys={ys}"));
            }
            1 => {
                let m = matrix(&mut r, 3.0, 0.2);
                let n = matrix(&mut r, 3.0, 0.2);
                let (ms, ns) = (nested_matrix(&mut r, &m), nested_matrix(&mut r, &n));
                let sub = |a: &IMatrix<f64>, b: &IMatrix<f64>| {
                    a.entries().iter().zip(b.entries()).all(|(s, l)| s.subset_of(l))
                };
                let ok = sub(&ms.mul(&ns).unwrap(), &m.mul(&n).unwrap())
                    && ms.det().unwrap().subset_of(&m.det().unwrap())
                    && ms
                        .leading_minors()
                        .unwrap()
                        .iter()
                        .zip(m.leading_minors().unwrap())
                        .all(|(s, l)| s.subset_of(&l));
                res.record("linalg", ok, || format!("m={m} ms={ms}"));
            }
            _ => {
                let x = box_around(&mut r, -1.5, 1.5, 0.1);
                let xs = nested_box(&mut r, &x);
                let (img, jac) = f4.eval_with_jacobian(&x).unwrap();
                let (img_s, jac_s) = f4.eval_with_jacobian(&xs).unwrap();
                let ok = img_s.subset_of(&img).unwrap()
                    && jac_s.entries().iter().zip(jac.entries()).all(|(s, l)| s.subset_of(l));
                res.record("henon", ok, || format!("x={x} xs={xs}"));
            }
        }
    }
    res
}

// ------------------------------------------------------ Sylvester oracle

#[derive(Debug, Default)]
pub struct SylvesterResult {
    pub cases: usize,
    pub oracle_pd: usize,
    pub certified_pd: usize,
    pub false_positives: Vec<String>,
    /// False negatives on matrices with a leading minor within 1e-10 of 0.
    pub near_singular_false_negatives: usize,
    pub unexplained_false_negatives: Vec<String>,
}

impl SylvesterResult {
    pub fn passed(&self) -> bool {
        self.false_positives.is_empty() && self.unexplained_false_negatives.is_empty()
    }
}

pub fn min_eigenvalue(m: &[[f64; 3]; 3]) -> f64 {
    let mat = nalgebra::Matrix3::from_fn(|i, j| m[i][j]);
    nalgebra::SymmetricEigen::new(mat).eigenvalues.min()
}

fn random_rotation(r: &mut impl Rng) -> nalgebra::Matrix3<f64> {
    let a = nalgebra::Matrix3::from_fn(|_, _| r.gen_range(-1.0..1.0));
    a.qr().q()
}

/// Symmetric 3×3 matrices from three families: unstructured, with
/// prescribed spectrum, and with one eigenvalue within about 1e-12 of zero.
pub fn symmetric_matrix(r: &mut impl Rng) -> [[f64; 3]; 3] {
    let m = match r.gen_range(0..3) {
        0 => {
            let a = nalgebra::Matrix3::from_fn(|_, _| r.gen_range(-2.0..2.0));
            a + a.transpose()
        }
        kind => {
            let rot = random_rotation(r);
            let mut ev = [r.gen_range(-1.0..3.0), r.gen_range(0.01..3.0), r.gen_range(-0.5..3.0)];
            if kind == 2 {
                ev[r.gen_range(0..3)] = r.gen_range(-1e-12..1e-12);
            }
            rot * nalgebra::Matrix3::from_diagonal(&nalgebra::Vector3::from(ev)) * rot.transpose()
        }
    };
    // Symmetrize exactly after rounding.
    std::array::from_fn(|i| std::array::from_fn(|j| if i <= j { m[(i, j)] } else { m[(j, i)] }))
}

pub fn sylvester_suite(cases: usize, seed: u64) -> SylvesterResult {
    let mut r = rng(seed);
    let mut res = SylvesterResult::default();
    let tol = q(1e-10);
    for _ in 0..cases {
        let m = symmetric_matrix(&mut r);
        let im = IMatrix::from_points(&m).unwrap();
        let certified = im.is_positive_definite();
        let oracle = min_eigenvalue(&m) > 0.0;
        res.cases += 1;
        res.oracle_pd += oracle as usize;
        res.certified_pd += certified as usize;
        if certified && !oracle {
            res.false_positives.push(format!("{m:?}"));
        } else if oracle && !certified {
            if qminors(&qmat(&m)).iter().any(|v| v.abs() <= tol) {
                res.near_singular_false_negatives += 1;
            } else {
                res.unexplained_false_negatives.push(format!("{m:?}"));
            }
        }
    }
    res
}

// ---------------------------------------------------- determinant oracle

fn int_det(m: &[[i64; 3]; 3], n: usize) -> i128 {
    let e = |i: usize, j: usize| m[i][j] as i128;
    match n {
        1 => e(0, 0),
        2 => e(0, 0) * e(1, 1) - e(0, 1) * e(1, 0),
        _ => {
            e(0, 0) * (e(1, 1) * e(2, 2) - e(1, 2) * e(2, 1)) - e(0, 1) * (e(1, 0) * e(2, 2) - e(1, 2) * e(2, 0))
                + e(0, 2) * (e(1, 0) * e(2, 1) - e(1, 1) * e(2, 0))
        }
    }
}

/// Interval determinants of integer matrices (sizes 1 to 3, entries up to
/// 2·10⁶ in magnitude, so products exceed 2⁵³) must contain the exact
/// cofactor expansion computed in `i128`.
pub fn determinant_suite(cases: usize, seed: u64) -> SuiteResult {
    let mut r = rng(seed);
    let mut res = SuiteResult::default();
    for c in 0..cases {
        let n = [3, 3, 2, 1][c % 4];
        let bound = if r.gen_bool(0.5) { 2_000_000 } else { 9 };
        let m: [[i64; 3]; 3] = std::array::from_fn(|_| std::array::from_fn(|_| r.gen_range(-bound..=bound)));
        let exact = int_det(&m, n);
        let rows: Vec<Vec<f64>> = (0..n).map(|i| (0..n).map(|j| m[i][j] as f64).collect()).collect();
        let det = IMatrix::from_points(&rows).unwrap().det().unwrap();
        let ok = contains_rational(&det, &Q::from_integer(BigInt::from(exact)));
        res.record("det", ok, || format!("{m:?} (n={n}): {det} vs {exact}"));
    }
    res
}

// ------------------------------------------------------ fixed-point root

/// Bracket `[lo, hi]` of the positive root of `x² + (1 + b)·x − a` of
/// width at most 2⁻ᵇⁱᵗˢ, by bisection in exact arithmetic.
pub fn fixed_point_bracket(a: &str, b: &str, bits: u32) -> (Q, Q) {
    let (a, b) = (dec(a), dec(b));
    let p = |x: &Q| x * x + (Q::one() + &b) * x - &a;
    let (mut lo, mut hi) = (Q::zero(), &a + Q::one());
    assert!(p(&lo).is_negative() && p(&hi).is_positive());
    let eps = Q::new(BigInt::one(), BigInt::one() << bits);
    while &hi - &lo > eps {
        let mid = (&lo + &hi) / qi(2);
        if p(&mid).is_positive() {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}

pub fn to_f64(x: &Q) -> f64 {
    x.to_f64().expect("representable")
}
