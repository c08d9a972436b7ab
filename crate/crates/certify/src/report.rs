//! The proof report: every certificate produced by a run, the inputs that
//! produced it, and the conclusions they license.

use std::collections::BTreeSet;
use std::fs;
use std::path::Path;

use anyhow::Context;
use hyperchaos::hset::{HSet, HSetPairConfig};
use hyperchaos::{CoveringCertificate64, HyperbolicityCertificate64};
use serde::{Deserialize, Serialize};

pub const REPORT_FORMAT: &str = "hyperchaos-proof-report/1";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapDescription {
    /// `henon` or `identity`.
    pub kind: String,
    pub a: String,
    pub b: String,
    pub iterate: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GridSettings {
    pub body_grid: Vec<usize>,
    pub face_grid: Vec<usize>,
    pub hyp_grid: Vec<usize>,
}

/// Directed graph on h-set names whose edges are the passed coverings.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoveringGraph {
    pub nodes: Vec<String>,
    pub edges: Vec<(String, String)>,
}

impl CoveringGraph {
    pub fn from_certificates(nodes: &[&str], certs: &[CoveringCertificate64]) -> Self {
        Self {
            nodes: nodes.iter().map(|s| s.to_string()).collect(),
            edges: certs
                .iter()
                .filter(|c| c.passed)
                .map(|c| (c.source.clone(), c.target.clone()))
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect(),
        }
    }

    pub fn has_edge(&self, from: &str, to: &str) -> bool {
        self.edges.iter().any(|(a, b)| a == from && b == to)
    }

    /// Every node covers every node, i.e. a topological horseshoe.
    pub fn is_complete(&self) -> bool {
        !self.nodes.is_empty()
            && self
                .nodes
                .iter()
                .all(|a| self.nodes.iter().all(|b| self.has_edge(a, b)))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymbolicSection {
    pub certificates: Vec<CoveringCertificate64>,
    pub covering_graph: CoveringGraph,
    pub horseshoe: bool,
    pub verdict: bool,
    pub conclusion: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicitySection {
    pub certificate: HyperbolicityCertificate64,
    pub verdict: bool,
    pub conclusion: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProofReport {
    pub format: String,
    pub artifact_version: String,
    pub scalar: String,
    pub map: MapDescription,
    pub hsets: HSetPairConfig,
    pub grids: GridSettings,
    pub workers: usize,
    pub symbolic: Option<SymbolicSection>,
    pub hyperbolicity: Option<HyperbolicitySection>,
    pub verdict: bool,
    pub total_runtime_ms: u64,
}

impl ProofReport {
    /// True iff at least one section ran and every section that ran passed.
    pub fn compute_verdict(&self) -> bool {
        let sections = [
            self.symbolic.as_ref().map(|s| s.verdict),
            self.hyperbolicity.as_ref().map(|h| h.verdict),
        ];
        sections.iter().any(Option::is_some) && sections.iter().flatten().all(|&v| v)
    }

    pub fn to_json(&self) -> anyhow::Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> anyhow::Result<Self> {
        let report: Self = serde_json::from_str(text).context("malformed proof report")?;
        anyhow::ensure!(
            report.format == REPORT_FORMAT,
            "unsupported report format {:?}",
            report.format
        );
        Ok(report)
    }

    pub fn write(&self, path: &Path) -> anyhow::Result<()> {
        fs::write(path, self.to_json()?).with_context(|| format!("writing {}", path.display()))
    }

    pub fn read(path: &Path) -> anyhow::Result<Self> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_json(&text)
    }

    /// Copy with every wall-clock field zeroed, for reproducibility checks.
    pub fn without_timing(&self) -> Self {
        let mut r = self.clone();
        r.total_runtime_ms = 0;
        if let Some(s) = r.symbolic.as_mut() {
            for c in &mut s.certificates {
                c.wall_time_ms = 0;
            }
        }
        if let Some(h) = r.hyperbolicity.as_mut() {
            h.certificate.wall_time_ms = 0;
        }
        r
    }
}

pub fn symbolic_conclusion(graph: &CoveringGraph, iterate: usize) -> String {
    if graph.is_complete() {
        format!(
            "All four coverings N_a => N_a, N_a => N_b, N_b => N_a, N_b => N_b hold for H^{iterate}, \
             so H^{iterate} is a topological horseshoe for N_a, N_b. Hence H^{iterate} restricted to \
             Inv(|N_a| ∪ |N_b|) is semi-conjugate to the shift map on two symbols (symbolic dynamics), \
             and every periodic symbol sequence is realized by a periodic orbit."
        )
    } else {
        "Not every covering relation was verified; no symbolic-dynamics conclusion is drawn.".to_string()
    }
}

pub fn hyperbolicity_conclusion(passed: bool, iterate: usize) -> String {
    if passed {
        format!(
            "D f_ij^T Q D f_ij - Q is positive definite on every part of B whose image meets B, for all \
             four chart-conjugated maps f_ij = C_j ∘ H^{iterate} ∘ C_i^-1. H^{iterate} is therefore strongly \
             hyperbolic on |N_a| ∪ |N_b| and uniformly hyperbolic on its invariant part."
        )
    } else {
        "The cone condition was not certified on every part; no hyperbolicity conclusion is drawn.".to_string()
    }
}

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ConsequenceError {
    #[error("word must be non-empty and use only the symbols 'a' and 'b', got {0:?}")]
    BadWord(String),
    #[error("the report contains no symbolic-dynamics section")]
    NoSymbolicSection,
    #[error("the report's symbolic-dynamics verdict is negative; refusing to draw consequences")]
    FailedReport,
    #[error("covering {0} => {1} is not certified in the report")]
    MissingCovering(String, String),
}

/// Periodic orbit forced by the cyclic covering chain spelled by `word`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PeriodicOrbitStatement {
    pub word: String,
    pub period: usize,
    pub sets: Vec<String>,
    pub statement: String,
    pub supports: Vec<(String, String)>,
}

/// Derives the orbit statement from a report. Purely logical: it requires a
/// passed symbolic section and re-derives the covering graph from the
/// certificates themselves rather than trusting the stored graph.
pub fn periodic_orbit(report: &ProofReport, word: &str) -> Result<PeriodicOrbitStatement, ConsequenceError> {
    if word.is_empty() || !word.chars().all(|c| c == 'a' || c == 'b') {
        return Err(ConsequenceError::BadWord(word.to_string()));
    }
    let symbolic = report.symbolic.as_ref().ok_or(ConsequenceError::NoSymbolicSection)?;
    if !symbolic.verdict {
        return Err(ConsequenceError::FailedReport);
    }
    let graph = CoveringGraph::from_certificates(&["a", "b"], &symbolic.certificates);
    let sets: Vec<String> = word.chars().map(|c| c.to_string()).collect();
    let n = sets.len();
    for k in 0..n {
        let (from, to) = (&sets[k], &sets[(k + 1) % n]);
        if !graph.has_edge(from, to) {
            return Err(ConsequenceError::MissingCovering(from.clone(), to.clone()));
        }
    }
    let iterate = report.map.iterate;
    let chain = sets
        .iter()
        .chain(std::iter::once(&sets[0]))
        .map(|s| format!("N_{s}"))
        .collect::<Vec<_>>()
        .join(" => ");
    let visits = (0..n)
        .map(|k| format!("H^{}(x) ∈ int N_{}", iterate * k, sets[k]))
        .collect::<Vec<_>>()
        .join(", ");
    let statement = format!(
        "From the covering chain {chain}: there exists x ∈ int N_{first} with {visits} and H^{total}(x) = x \
         (a periodic orbit of H^{iterate} with period {n} following the word {word:?}).",
        first = sets[0],
        total = iterate * n,
    );
    let supports = ["a", "b"]
        .iter()
        .filter(|name| sets.iter().any(|s| s == *name))
        .map(|name| {
            let cfg = if *name == "a" { &report.hsets.a } else { &report.hsets.b };
            let hull = HSet::<f64>::from_config(*name, cfg)
                .and_then(|h| h.support_hull())
                .map(|b| b.to_string())
                .unwrap_or_else(|e| format!("unavailable: {e}"));
            (name.to_string(), hull)
        })
        .collect();
    Ok(PeriodicOrbitStatement {
        word: word.to_string(),
        period: n,
        sets,
        statement,
        supports,
    })
}
