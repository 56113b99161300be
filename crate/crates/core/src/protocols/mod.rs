//! Fusion protocols on weighted chains, each returning its full outcome
//! distribution. Every outcome is checked by simulation against the chain it
//! is supposed to produce; `post_state` is only filled in when that check
//! passes.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::state::{
    build_state, duplicate_qubit, fidelity_up_to_global_phase, LocalGate, PureState, EQUALITY_SLACK,
};

mod generalized;
mod ghz;
mod logical;
mod type_i;
mod type_ii;

pub use generalized::{fuse_generalized, GeneralizedFusion};
pub use ghz::{ghz_pair_for_target, ghz_pair_max_weight, ghz_pair_projection, GhzPair};
pub use logical::{create_logical_qubit, LogicalCase};
pub use type_i::fuse_type_i;
pub use type_ii::fuse_type_ii;

/// Angular tolerance for the weight conditions of the logical-qubit cases.
pub const WEIGHT_TOLERANCE: f64 = 1e-9;

/// Two register qubits carrying the same computational value. The anchor is
/// the graph vertex; the partner is an extra register qubit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LogicalPair {
    pub partner: String,
    pub anchor: String,
}

impl LogicalPair {
    pub fn new(partner: &str, anchor: &str) -> Self {
        Self { partner: partner.to_string(), anchor: anchor.to_string() }
    }

    pub fn contains(&self, label: &str) -> bool {
        self.partner == label || self.anchor == label
    }

    /// The member that is not `label`.
    pub fn other(&self, label: &str) -> Option<&str> {
        if self.partner == label {
            Some(&self.anchor)
        } else if self.anchor == label {
            Some(&self.partner)
        } else {
            None
        }
    }
}

/// A weighted graph state whose logical vertices may be doubled into pairs.
/// The register holds the graph vertices in order, then the partners in pair
/// order.
#[derive(Clone, Debug, PartialEq)]
pub struct ChainState {
    graph: WeightedGraph,
    pairs: Vec<LogicalPair>,
    register: Vec<String>,
    state: PureState,
}

fn register_for(graph: &WeightedGraph, pairs: &[LogicalPair]) -> Result<Vec<String>> {
    let mut register: Vec<String> = graph.vertices().to_vec();
    let mut anchors: Vec<&str> = Vec::new();
    for p in pairs {
        graph.require(&p.anchor)?;
        if anchors.contains(&p.anchor.as_str()) {
            return Err(Error::LogicalPairConflict(p.anchor.clone()));
        }
        anchors.push(&p.anchor);
        if register.contains(&p.partner) {
            return Err(Error::DuplicateVertex(p.partner.clone()));
        }
        register.push(p.partner.clone());
    }
    Ok(register)
}

impl ChainState {
    pub fn new(graph: WeightedGraph) -> Result<Self> {
        Self::with_logical_pairs(graph, Vec::new())
    }

    /// Graph state of `graph` with each listed anchor copied onto its partner.
    pub fn with_logical_pairs(graph: WeightedGraph, pairs: Vec<LogicalPair>) -> Result<Self> {
        let register = register_for(&graph, &pairs)?;
        let mut state = build_state(&graph)?;
        for (k, p) in pairs.iter().enumerate() {
            let anchor = graph.require(&p.anchor)?;
            state = duplicate_qubit(&state, anchor, graph.num_vertices() + k)?;
        }
        Ok(Self { graph, pairs, register, state })
    }

    /// Wrap an externally produced state; it must be normalized, live on the
    /// right register and respect the pair support.
    pub fn from_parts(graph: WeightedGraph, pairs: Vec<LogicalPair>, state: PureState) -> Result<Self> {
        let register = register_for(&graph, &pairs)?;
        if state.num_qubits() != register.len() {
            return Err(Error::ShapeMismatch { left: state.num_qubits(), right: register.len() });
        }
        if (state.norm_sqr() - 1.0).abs() > crate::state::NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm_sqr: state.norm_sqr() });
        }
        let c = Self { graph, pairs, register, state };
        if c.pair_support_violation() > 1e-12 {
            return Err(Error::InvalidContext("logical pair has amplitude on mixed bit values"));
        }
        Ok(c)
    }

    pub fn graph(&self) -> &WeightedGraph {
        &self.graph
    }

    pub fn logical_pairs(&self) -> &[LogicalPair] {
        &self.pairs
    }

    pub fn register(&self) -> &[String] {
        &self.register
    }

    pub fn state(&self) -> &PureState {
        &self.state
    }

    /// Register position of `label`.
    pub fn qubit(&self, label: &str) -> Result<usize> {
        self.register.iter().position(|l| l == label).ok_or_else(|| Error::UnknownVertex(label.to_string()))
    }

    pub fn pair_containing(&self, label: &str) -> Option<&LogicalPair> {
        self.pairs.iter().find(|p| p.contains(label))
    }

    /// True when every component of the graph is a path.
    pub fn is_path_forest(&self) -> bool {
        self.graph.is_linear_forest()
    }

    /// Largest amplitude on a basis state where some pair disagrees.
    pub fn pair_support_violation(&self) -> f64 {
        let idx: Vec<(usize, usize)> = self
            .pairs
            .iter()
            .map(|p| (self.qubit(&p.anchor).unwrap_or(0), self.qubit(&p.partner).unwrap_or(0)))
            .collect();
        let mut worst = 0.0f64;
        for (i, a) in self.state.amplitudes().iter().enumerate() {
            if idx.iter().any(|&(x, y)| self.state.bit(i, x) != self.state.bit(i, y)) {
                worst = worst.max(a.norm());
            }
        }
        worst
    }
}

/// A correction named by vertex label.
#[derive(Clone, Debug, PartialEq)]
pub struct Correction {
    pub target: String,
    pub kind: CorrectionKind,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum CorrectionKind {
    PauliX,
    PauliZ,
    /// `e^{iθZ}`.
    ZRotation(f64),
    /// `e^{iφ|1⟩⟨1|}`.
    PhaseOne(f64),
}

impl Correction {
    pub fn new(target: &str, kind: CorrectionKind) -> Self {
        Self { target: target.to_string(), kind }
    }

    pub fn gate(&self, target: usize) -> LocalGate {
        match self.kind {
            CorrectionKind::PauliX => LocalGate::x(target),
            CorrectionKind::PauliZ => LocalGate::z(target),
            CorrectionKind::ZRotation(t) => LocalGate::z_rotation(target, t),
            CorrectionKind::PhaseOne(p) => LocalGate::phase_one(target, p),
        }
    }
}

impl fmt::Display for Correction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            CorrectionKind::PauliX => write!(f, "X[{}]", self.target),
            CorrectionKind::PauliZ => write!(f, "Z[{}]", self.target),
            CorrectionKind::ZRotation(t) => write!(f, "exp(i*{t}*Z)[{}]", self.target),
            CorrectionKind::PhaseOne(p) => write!(f, "exp(i*{p}*|1><1|)[{}]", self.target),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutcomeLabel {
    SuccessPlus,
    SuccessMinus,
    /// Single success branch (logical-qubit creation away from `χ = π`).
    Success,
    /// Type-I: both photons left in the unmeasured `c` modes.
    FailureNoPhoton,
    /// Type-I: both photons reached the measured `d` modes.
    FailureTwoPhotons,
    /// Type-II: `a` projected on `|+⟩`, `b` on `|−⟩`.
    FailurePlusMinus,
    /// Type-II: `a` projected on `|−⟩`, `b` on `|+⟩`.
    FailureMinusPlus,
    /// Logical-qubit creation: Z outcomes on the two neighbours.
    FailureZ(u8, u8),
}

impl OutcomeLabel {
    pub fn is_success(&self) -> bool {
        matches!(self, Self::SuccessPlus | Self::SuccessMinus | Self::Success)
    }
}

impl fmt::Display for OutcomeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::SuccessPlus => f.write_str("success+"),
            Self::SuccessMinus => f.write_str("success-"),
            Self::Success => f.write_str("success"),
            Self::FailureNoPhoton => f.write_str("failure:no-photon"),
            Self::FailureTwoPhotons => f.write_str("failure:two-photon"),
            Self::FailurePlusMinus => f.write_str("failure:+-"),
            Self::FailureMinusPlus => f.write_str("failure:-+"),
            Self::FailureZ(x, y) => write!(f, "failure:z{x}{y}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProtocolOutcome {
    pub label: OutcomeLabel,
    pub probability: f64,
    /// Labels of the residual register, in the order of `state`.
    pub register: Vec<String>,
    /// Residual register after the corrections, normalized.
    pub state: PureState,
    pub corrections: Vec<Correction>,
    /// The chain the residual was verified to be, if any.
    pub post_state: Option<ChainState>,
    /// Overlap with the expected chain, when one was expected.
    pub fidelity: Option<f64>,
    pub is_good_failure: bool,
}

/// Anything with an outcome probability.
pub trait Weighted {
    fn probability(&self) -> f64;
}

impl Weighted for ProtocolOutcome {
    fn probability(&self) -> f64 {
        self.probability
    }
}

impl Weighted for crate::optics::FusionOutcome {
    fn probability(&self) -> f64 {
        self.probability
    }
}

/// Draw one outcome according to its probability. Returns `None` only for an
/// empty list.
pub fn sample_outcome<'a, T: Weighted, R: Rng + ?Sized>(outcomes: &'a [T], rng: &mut R) -> Option<&'a T> {
    let total: f64 = outcomes.iter().map(|o| o.probability()).sum();
    let mut u = rng.random::<f64>() * total;
    for o in outcomes {
        u -= o.probability();
        if u < 0.0 {
            return Some(o);
        }
    }
    outcomes.iter().rev().find(|o| o.probability() > 0.0).or(outcomes.last())
}

/// Register positions of `labels` inside `register`.
fn positions(register: &[String], labels: &[String]) -> Option<Vec<usize>> {
    labels.iter().map(|l| register.iter().position(|r| r == l)).collect()
}

/// Apply label-addressed corrections to a state on `register`.
fn apply_corrections(state: &PureState, register: &[String], corrections: &[Correction]) -> Result<PureState> {
    let mut s = state.clone();
    for c in corrections {
        let q = register
            .iter()
            .position(|r| *r == c.target)
            .ok_or_else(|| Error::UnknownVertex(c.target.clone()))?;
        s.apply_matrix_mut(q, c.gate(q).matrix())?;
    }
    Ok(s)
}

/// Compare a simulated residual with the chain it should equal.
fn verify(expected: Option<ChainState>, register: &[String], state: &PureState) -> (Option<ChainState>, Option<f64>) {
    let Some(mut expected) = expected else {
        return (None, None);
    };
    let Some(order) = positions(register, &expected.register) else {
        return (None, Some(0.0));
    };
    if order.len() != register.len() {
        return (None, Some(0.0));
    }
    let Ok(aligned) = state.permuted(&order) else {
        return (None, Some(0.0));
    };
    let f = fidelity_up_to_global_phase(&aligned, &expected.state).unwrap_or(0.0);
    if f >= 1.0 - EQUALITY_SLACK {
        expected.state = aligned;
        (Some(expected), Some(f))
    } else {
        (None, Some(f))
    }
}

/// Assemble an outcome from a simulated residual and its expectation.
#[allow(clippy::too_many_arguments)]
fn finish(
    label: OutcomeLabel,
    probability: f64,
    register: Vec<String>,
    raw: &PureState,
    corrections: Vec<Correction>,
    expected: Option<ChainState>,
) -> Result<ProtocolOutcome> {
    let state = apply_corrections(raw, &register, &corrections)?.normalized()?;
    let (post_state, fidelity) = verify(expected, &register, &state);
    let is_good_failure = !label.is_success() && post_state.is_some();
    Ok(ProtocolOutcome { label, probability, register, state, corrections, post_state, fidelity, is_good_failure })
}

/// Vertex-disjoint union of two chains (graphs and pairs concatenated).
fn union_chain(
    left: (&WeightedGraph, &[LogicalPair]),
    right: (&WeightedGraph, &[LogicalPair]),
) -> Result<ChainState> {
    let graph = left.0.disjoint_union(right.0)?;
    let mut pairs = left.1.to_vec();
    pairs.extend_from_slice(right.1);
    ChainState::with_logical_pairs(graph, pairs)
}

fn without_label(register: &[String], label: &str) -> Vec<String> {
    register.iter().filter(|l| *l != label).cloned().collect()
}

fn ensure_disjoint(left: &ChainState, right: &ChainState) -> Result<()> {
    for l in &left.register {
        if right.register.contains(l) {
            return Err(Error::LabelClash(l.clone()));
        }
    }
    Ok(())
}

fn ensure_unpaired(chain: &ChainState, label: &str) -> Result<()> {
    if chain.pair_containing(label).is_some() {
        return Err(Error::LogicalPairConflict(label.to_string()));
    }
    Ok(())
}

/// Label for the qubit created by merging `a` and `b`.
pub fn merged_label(a: &str, b: &str) -> String {
    format!("{a}+{b}")
}
