//! JSON formats for graphs, mode unitaries and outcome reports.
//!
//! Graph file:
//!
//! ```json
//! { "vertices": ["x", "a"],
//!   "edges": [{ "a": "x", "b": "a", "chi": 1.2 }],
//!   "logical_pairs": [{ "partner": "ap", "anchor": "a" }] }
//! ```
//!
//! Angles are radians. Weights outside `(-π, π]` are wrapped into it and a
//! warning is returned alongside the graph.
//!
//! Unitary file: `{ "n": 4, "re": [[..], ..], "im": [[..], ..] }`, row-major,
//! rows `a_H, a_V, b_H, b_V` then vacuum, columns are detectors. `im` may be
//! omitted for real matrices.

use std::f64::consts::PI;
use std::fs;
use std::io::Write;
use std::path::Path;

use num_complex::Complex64 as C64;
use serde::{de::DeserializeOwned, Deserialize, Serialize};
use wgs_core::analysis::EntanglementReport;
use wgs_core::math::wrap_angle;
use wgs_core::optics::{FusionOutcome, ModeUnitary, OutcomeKind};
use wgs_core::protocols::{ChainState, LogicalPair, ProtocolOutcome};
use wgs_core::{PureState, WeightedGraph};

use crate::error::{WgsError, WgsResult};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: Vec<String>,
    #[serde(default)]
    pub edges: Vec<EdgeEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub logical_pairs: Vec<PairEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeEntry {
    pub a: String,
    pub b: String,
    pub chi: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairEntry {
    pub partner: String,
    pub anchor: String,
}

/// A graph file turned into a register, with any normalization warnings.
#[derive(Clone, Debug)]
pub struct LoadedGraph {
    pub chain: ChainState,
    pub warnings: Vec<String>,
}

impl GraphFile {
    pub fn to_chain(&self) -> WgsResult<LoadedGraph> {
        let mut warnings = Vec::new();
        let mut g = WeightedGraph::with_vertices(&self.vertices)?;
        for e in &self.edges {
            if !e.chi.is_finite() {
                return Err(WgsError::Invalid(format!("edge ({}, {}): chi is not finite", e.a, e.b)));
            }
            let mut chi = e.chi;
            if !(chi > -PI && chi <= PI) {
                chi = wrap_angle(chi);
                warnings.push(format!("edge ({}, {}): chi = {} outside (-pi, pi], normalized to {}", e.a, e.b, e.chi, chi));
            }
            g.add_edge_by_label(&e.a, &e.b, chi)?;
        }
        let pairs = self.logical_pairs.iter().map(|p| LogicalPair::new(&p.partner, &p.anchor)).collect();
        Ok(LoadedGraph { chain: ChainState::with_logical_pairs(g, pairs)?, warnings })
    }

    pub fn from_chain(chain: &ChainState) -> Self {
        let mut f = Self::from_graph(chain.graph());
        f.logical_pairs = chain
            .logical_pairs()
            .iter()
            .map(|p| PairEntry { partner: p.partner.clone(), anchor: p.anchor.clone() })
            .collect();
        f
    }

    pub fn from_graph(g: &WeightedGraph) -> Self {
        let edges = g
            .edges()
            .iter()
            .map(|e| EdgeEntry { a: g.label(e.a).to_string(), b: g.label(e.b).to_string(), chi: e.weight })
            .collect();
        Self { vertices: g.vertices().to_vec(), edges, logical_pairs: Vec::new() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct UnitaryFile {
    pub n: usize,
    pub re: Vec<Vec<f64>>,
    #[serde(default)]
    pub im: Option<Vec<Vec<f64>>>,
}

impl UnitaryFile {
    pub fn to_unitary(&self) -> WgsResult<ModeUnitary> {
        let n = self.n;
        let shape_ok = |m: &Vec<Vec<f64>>| m.len() == n && m.iter().all(|r| r.len() == n);
        if !shape_ok(&self.re) || !self.im.as_ref().map_or(true, shape_ok) {
            return Err(WgsError::Invalid(format!("unitary entries must be {n}×{n}")));
        }
        let mut entries = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                let im = self.im.as_ref().map_or(0.0, |m| m[i][j]);
                entries.push(C64::new(self.re[i][j], im));
            }
        }
        Ok(ModeUnitary::new(n, entries)?)
    }

    pub fn from_unitary(u: &ModeUnitary) -> Self {
        let n = u.size();
        let re = (0..n).map(|i| (0..n).map(|j| u.entry(i, j).re).collect()).collect();
        let im = (0..n).map(|i| (0..n).map(|j| u.entry(i, j).im).collect()).collect();
        Self { n, re, im: Some(im) }
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> WgsResult<T> {
    let text = fs::read_to_string(path).map_err(|source| WgsError::Io { path: path.to_path_buf(), source })?;
    serde_json::from_str(&text).map_err(|source| WgsError::Json { path: path.to_path_buf(), source })
}

pub fn read_graph(path: &Path) -> WgsResult<LoadedGraph> {
    read_json::<GraphFile>(path)?.to_chain()
}

pub fn read_unitary(path: &Path) -> WgsResult<ModeUnitary> {
    read_json::<UnitaryFile>(path)?.to_unitary()
}

/// Write `text` to `path`, or to stdout when no path is given.
pub fn emit(path: Option<&Path>, text: &str) -> WgsResult<()> {
    match path {
        Some(p) => fs::write(p, text).map_err(|source| WgsError::Io { path: p.to_path_buf(), source }),
        None => match writeln!(std::io::stdout().lock(), "{text}") {
            // A closed pipe (`wgs ... | head`) is not an error.
            Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
                Err(WgsError::Io { path: "<stdout>".into(), source: e })
            }
            _ => Ok(()),
        },
    }
}

pub fn to_json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("report types serialize")
}

fn amplitudes(s: &PureState) -> Vec<[f64; 2]> {
    s.amplitudes().iter().map(|a| [a.re, a.im]).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct StateSummary {
    pub num_qubits: usize,
    pub register: Vec<String>,
    pub norm: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<Vec<[f64; 2]>>,
    pub warnings: Vec<String>,
}

impl StateSummary {
    pub fn new(g: &LoadedGraph, dump: bool) -> Self {
        let s = g.chain.state();
        Self {
            num_qubits: s.num_qubits(),
            register: g.chain.register().to_vec(),
            norm: s.norm_sqr().sqrt(),
            amplitudes: dump.then(|| amplitudes(s)),
            warnings: g.warnings.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct OutcomeRecord {
    pub label: String,
    pub probability: f64,
    pub register: Vec<String>,
    pub corrections: Vec<String>,
    pub fidelity: Option<f64>,
    pub good_failure: bool,
    /// The verified post-measurement graph, if the outcome was recognised.
    pub post_graph: Option<GraphFile>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub amplitudes: Option<Vec<[f64; 2]>>,
}

impl OutcomeRecord {
    pub fn new(o: &ProtocolOutcome, dump: bool) -> Self {
        Self {
            label: o.label.to_string(),
            probability: o.probability,
            register: o.register.clone(),
            corrections: o.corrections.iter().map(|c| c.to_string()).collect(),
            fidelity: o.fidelity,
            good_failure: o.is_good_failure,
            post_graph: o.post_state.as_ref().map(GraphFile::from_chain),
            amplitudes: dump.then(|| amplitudes(&o.state)),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct FusionRecord {
    pub pattern: [usize; 2],
    pub kind: &'static str,
    pub probability: f64,
    pub det_rho: Option<f64>,
    pub entropy_bits: Option<f64>,
}

impl FusionRecord {
    pub fn new(o: &FusionOutcome, report: Option<&EntanglementReport>) -> Self {
        Self {
            pattern: [o.pattern.0, o.pattern.1],
            kind: match o.kind {
                OutcomeKind::Relevant => "relevant",
                OutcomeKind::NonRelevant => "non-relevant",
            },
            probability: o.probability,
            det_rho: report.map(|r| r.det_rho),
            entropy_bits: report.map(|r| r.entropy_bits),
        }
    }
}

/// Counts of sampled outcome labels, in outcome order.
#[derive(Clone, Debug, Serialize)]
pub struct SampleCounts {
    pub seed: u64,
    pub shots: usize,
    pub counts: Vec<(String, usize)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProtocolReport {
    pub protocol: &'static str,
    pub total_probability: f64,
    pub outcomes: Vec<OutcomeRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<SampleCounts>,
    pub warnings: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct FusionReport {
    pub protocol: &'static str,
    pub z: [f64; 2],
    pub register: Vec<String>,
    pub relevant_probability: f64,
    pub outcomes: Vec<FusionRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<SampleCounts>,
    pub warnings: Vec<String>,
}
