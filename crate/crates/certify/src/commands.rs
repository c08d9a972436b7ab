//! Drivers behind the CLI subcommands.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use anyhow::Context;
use hyperchaos::covering::{verify_covering, CoveringConfig};
use hyperchaos::henon::{BaseMap, Henon, HenonParams, IteratedMap, LinearMap};
use hyperchaos::hset::{HSet, HSetPairConfig};
use hyperchaos::hyperbolicity::{check_strong_hyperbolicity, ConeQuadraticForm};

use crate::report::{
    hyperbolicity_conclusion, symbolic_conclusion, CoveringGraph, GridSettings, HyperbolicitySection, MapDescription,
    ProofReport, SymbolicSection, REPORT_FORMAT,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapKind {
    Henon,
    /// Negative control: the identity map cannot cover anything.
    Identity,
}

impl MapKind {
    fn name(self) -> &'static str {
        match self {
            MapKind::Henon => "henon",
            MapKind::Identity => "identity",
        }
    }
}

#[derive(Clone, Debug)]
pub struct RunOptions {
    pub body_grid: Vec<usize>,
    pub face_grid: Vec<usize>,
    pub hyp_grid: Vec<usize>,
    pub map_iterate: usize,
    pub map_kind: MapKind,
    pub param_a: String,
    pub param_b: String,
    pub workers: usize,
    pub hsets: HSetPairConfig,
    pub max_failures_reported: usize,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self {
            body_grid: vec![60, 60, 60],
            face_grid: vec![10, 10],
            hyp_grid: vec![25, 25, 25],
            map_iterate: 4,
            map_kind: MapKind::Henon,
            param_a: "1.76".into(),
            param_b: "0.1".into(),
            workers: default_workers(),
            hsets: HSetPairConfig::standard(),
            max_failures_reported: 16,
        }
    }
}

pub fn default_workers() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

fn ordered_pairs<'a>(a: &'a HSet<f64>, b: &'a HSet<f64>) -> [(&'a HSet<f64>, &'a HSet<f64>); 4] {
    [(a, a), (a, b), (b, a), (b, b)]
}

fn symbolic_with<M: BaseMap<f64>>(f: &IteratedMap<f64, M>, opts: &RunOptions) -> anyhow::Result<SymbolicSection> {
    let a = HSet::from_config("a", &opts.hsets.a).context("h-set a")?;
    let b = HSet::from_config("b", &opts.hsets.b).context("h-set b")?;
    let cfg = CoveringConfig {
        body_grid: opts.body_grid.clone(),
        face_grid: opts.face_grid.clone(),
        max_failures_reported: opts.max_failures_reported,
    };
    let certificates = ordered_pairs(&a, &b)
        .iter()
        .map(|(n0, n1)| verify_covering(f, n0, n1, &cfg))
        .collect::<hyperchaos::Result<Vec<_>>>()?;
    let covering_graph = CoveringGraph::from_certificates(&["a", "b"], &certificates);
    let horseshoe = covering_graph.is_complete();
    Ok(SymbolicSection {
        verdict: certificates.iter().all(|c| c.passed) && horseshoe,
        conclusion: symbolic_conclusion(&covering_graph, f.iterates()),
        certificates,
        covering_graph,
        horseshoe,
    })
}

fn hyperbolicity_with<M: BaseMap<f64>>(
    f: &IteratedMap<f64, M>,
    opts: &RunOptions,
) -> anyhow::Result<HyperbolicitySection> {
    let a = HSet::from_config("a", &opts.hsets.a).context("h-set a")?;
    let b = HSet::from_config("b", &opts.hsets.b).context("h-set b")?;
    anyhow::ensure!(
        a.u() == b.u() && a.s() == b.s(),
        "h-sets a and b have different exit/entry dimensions"
    );
    let maps = ordered_pairs(&a, &b)
        .iter()
        .map(|(n0, n1)| {
            Ok((
                format!("{}{}", n0.name(), n1.name()),
                f.conjugate(n0.chart(), n1.chart())?,
            ))
        })
        .collect::<hyperchaos::Result<Vec<_>>>()?;
    let q = ConeQuadraticForm::new(a.u(), a.s());
    let certificate = check_strong_hyperbolicity(&maps, &opts.hyp_grid, &q, opts.max_failures_reported)?;
    Ok(HyperbolicitySection {
        verdict: certificate.passed,
        conclusion: hyperbolicity_conclusion(certificate.passed, f.iterates()),
        certificate,
    })
}

fn in_pool<R: Send>(workers: usize, job: impl FnOnce() -> R + Send) -> anyhow::Result<R> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .context("building worker pool")?;
    Ok(pool.install(job))
}

/// Runs the requested sections and assembles a report.
pub fn build_report(opts: &RunOptions, symbolic: bool, hyperbolicity: bool) -> anyhow::Result<ProofReport> {
    let start = Instant::now();
    let params = HenonParams::<f64>::from_decimals(&opts.param_a, &opts.param_b).context("map parameters")?;
    let (sym, hyp) = in_pool(opts.workers, || -> anyhow::Result<_> {
        match opts.map_kind {
            MapKind::Henon => {
                let f = IteratedMap::new(Henon::new(params), opts.map_iterate)?;
                Ok((
                    symbolic.then(|| symbolic_with(&f, opts)).transpose()?,
                    hyperbolicity.then(|| hyperbolicity_with(&f, opts)).transpose()?,
                ))
            }
            MapKind::Identity => {
                let f = IteratedMap::new(LinearMap::identity(3), opts.map_iterate)?;
                Ok((
                    symbolic.then(|| symbolic_with(&f, opts)).transpose()?,
                    hyperbolicity.then(|| hyperbolicity_with(&f, opts)).transpose()?,
                ))
            }
        }
    })??;
    let mut report = ProofReport {
        format: REPORT_FORMAT.to_string(),
        artifact_version: env!("CARGO_PKG_VERSION").to_string(),
        scalar: "f64".into(),
        map: MapDescription {
            kind: opts.map_kind.name().into(),
            a: opts.param_a.clone(),
            b: opts.param_b.clone(),
            iterate: opts.map_iterate,
        },
        hsets: opts.hsets.clone(),
        grids: GridSettings {
            body_grid: opts.body_grid.clone(),
            face_grid: opts.face_grid.clone(),
            hyp_grid: opts.hyp_grid.clone(),
        },
        workers: opts.workers,
        symbolic: sym,
        hyperbolicity: hyp,
        verdict: false,
        total_runtime_ms: 0,
    };
    report.verdict = report.compute_verdict();
    report.total_runtime_ms = start.elapsed().as_millis() as u64;
    Ok(report)
}

pub const ATTRACTOR_HEADER: &str = "# NON-RIGOROUS SAMPLE\nx,y,z\n";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleSummary {
    pub rows: usize,
    /// Set when the orbit overflowed; the file holds the rows written so far.
    pub diverged_at: Option<usize>,
}

/// Iterates the map in plain floating point and writes `count` points after
/// discarding `transient` steps. Numbers use the shortest decimal that
/// round-trips to the same `f64` (at most 17 significant digits).
pub fn attractor_sample(
    params: HenonParams<f64>,
    seed: [f64; 3],
    transient: usize,
    count: usize,
    out: &Path,
) -> anyhow::Result<SampleSummary> {
    anyhow::ensure!(seed.iter().all(|v| v.is_finite()), "seed must be finite");
    let h = Henon::new(params);
    let file = File::create(out).with_context(|| format!("creating {}", out.display()))?;
    let mut w = BufWriter::new(file);
    w.write_all(ATTRACTOR_HEADER.as_bytes())?;
    let mut p = seed;
    let mut rows = 0;
    let mut diverged_at = None;
    for step in 1..=transient + count {
        match h.eval_point_fast(p, 1) {
            Ok(q) => p = q,
            Err(_) => {
                diverged_at = Some(step);
                break;
            }
        }
        if step > transient {
            writeln!(w, "{},{},{}", p[0], p[1], p[2])?;
            rows += 1;
        }
    }
    w.flush()?;
    Ok(SampleSummary { rows, diverged_at })
}
