
use alloc::vec::Vec;
use core::f64::consts::PI;

use super::*;
use crate::math::{angle_distance, expi, C64, ONE};
use crate::state::{project_qubit, QubitProjection};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LogicalCase {
    /// `χ1 = χ2`.
    Equal,
    /// `χ1 = -χ2`.
    Opposite,
}

/// How to turn a projection of an interior vertex into a logical pair.
pub(crate) struct LogicalPlan {
    /// Bra coefficients `(A, B)` of the projection.
    pub bra: (C64, C64),
    pub corrections: Vec<Correction>,
    pub graph: WeightedGraph,
    pub pair: LogicalPair,
}

pub(crate) struct Interior {
    pub a: usize,
    pub b1: usize,
    pub b2: usize,
    pub chi1: f64,
    pub chi2: f64,
}

pub(crate) fn interior(graph: &WeightedGraph, label: &str) -> Result<Interior> {
    let a = graph.require(label)?;
    let nb = graph.neighbors(a);
    if nb.len() != 2 {
        return Err(Error::NotInterior(label.to_string()));
    }
    let (b1, chi1) = nb[0];
    let (b2, chi2) = nb[1];
    if graph.weight(b1, b2).is_some() {
        return Err(Error::NotInterior(label.to_string()));
    }
    Ok(Interior { a, b1, b2, chi1, chi2 })
}

pub(crate) fn eligible_cases(chi1: f64, chi2: f64) -> (bool, bool) {
    (angle_distance(chi1, chi2) < WEIGHT_TOLERANCE, angle_distance(chi1, -chi2) < WEIGHT_TOLERANCE)
}

/// Graph after the projection: `a` and `b1` leave, `b2` takes over `b1`'s other
/// edges (negated in the opposite-weight case).
fn transferred_graph(graph: &WeightedGraph, it: &Interior, case: LogicalCase) -> Result<WeightedGraph> {
    let sign = if case == LogicalCase::Equal { 1.0 } else { -1.0 };
    let moved: Vec<(String, f64)> = graph
        .neighbors(it.b1)
        .into_iter()
        .filter(|&(n, _)| n != it.a)
        .map(|(n, w)| (graph.label(n).to_string(), sign * w))
        .collect();
    let b1_label = graph.label(it.b1).to_string();
    let a_label = graph.label(it.a).to_string();
    let mut g = graph.without_vertex(graph.require(&b1_label)?);
    g = g.without_vertex(g.require(&a_label)?);
    let anchor = g.require(graph.label(it.b2))?;
    for (lbl, w) in moved {
        let c = g.require(&lbl)?;
        match g.weight(anchor, c) {
            None => g.add_edge(anchor, c, w)?,
            Some(old) => {
                // Merge parallel weights by rebuilding the edge list.
                let mut h = WeightedGraph::with_vertices(g.vertices())?;
                for e in g.edges() {
                    let same = (e.a == anchor && e.b == c) || (e.a == c && e.b == anchor);
                    if !same {
                        h.add_edge(e.a, e.b, e.weight)?;
                    } else if crate::math::wrap_angle(old + w).abs() >= crate::graph::ZERO_WEIGHT_TOLERANCE {
                        h.add_edge(e.a, e.b, old + w)?;
                    }
                }
                g = h;
            }
        }
    }
    Ok(g)
}

pub(crate) fn plan(graph: &WeightedGraph, it: &Interior, case: LogicalCase) -> Result<LogicalPlan> {
    let b1 = graph.label(it.b1);
    let b2 = graph.label(it.b2);
    let mut corrections = Vec::new();
    let (bra, chi) = match case {
        LogicalCase::Equal => ((ONE, -expi(it.chi1)), it.chi1),
        LogicalCase::Opposite => {
            corrections.push(Correction::new(b1, CorrectionKind::PauliX));
            for (c, w) in graph.neighbors(it.b1) {
                if c != it.a {
                    corrections.push(Correction::new(graph.label(c), CorrectionKind::PhaseOne(w)));
                }
            }
            ((ONE, -ONE), it.chi2)
        }
    };
    let theta = (PI - chi) / 2.0;
    if theta.abs() > 1e-15 {
        corrections.push(Correction::new(b1, CorrectionKind::ZRotation(theta)));
    }
    Ok(LogicalPlan {
        bra,
        corrections,
        graph: transferred_graph(graph, it, case)?,
        pair: LogicalPair::new(b1, b2),
    })
}

/// Measure interior vertex `a` so that its two neighbours fuse into one
/// logical qubit (neighbour `b1` becomes the partner of anchor `b2`).
///
/// Requires `χ1 = χ2` or `χ1 = -χ2` (within 1e-9 rad); at `χ = π` both cases
/// apply and both outcomes succeed.
pub fn create_logical_qubit(chain: &ChainState, a: &str) -> Result<Vec<ProtocolOutcome>> {
    let it = interior(&chain.graph, a)?;
    for v in [it.a, it.b1, it.b2] {
        ensure_unpaired(chain, chain.graph.label(v))?;
    }
    let (equal, opposite) = eligible_cases(it.chi1, it.chi2);
    if !equal && !opposite {
        return Err(Error::WeightsNotEligible { chi1: it.chi1, chi2: it.chi2 });
    }
    let qa = chain.qubit(a)?;
    let register = without_label(&chain.register, a);
    let expected_for = |p: &LogicalPlan| -> Result<ChainState> {
        let mut pairs = chain.pairs.clone();
        pairs.push(p.pair.clone());
        ChainState::with_logical_pairs(p.graph.clone(), pairs)
    };

    let mut outcomes = Vec::new();
    if equal && opposite {
        for (label, case) in [(OutcomeLabel::SuccessPlus, LogicalCase::Equal), (OutcomeLabel::SuccessMinus, LogicalCase::Opposite)] {
            let p = plan(&chain.graph, &it, case)?;
            let proj = QubitProjection::from_bra(qa, p.bra.0, p.bra.1)?;
            let r = project_qubit(&chain.state, &proj)?;
            outcomes.push(finish(label, r.probability, register.clone(), &r.state, p.corrections.clone(), Some(expected_for(&p)?))?);
        }
        return Ok(outcomes);
    }

    let case = if equal { LogicalCase::Equal } else { LogicalCase::Opposite };
    let p = plan(&chain.graph, &it, case)?;
    let proj = QubitProjection::from_bra(qa, p.bra.0, p.bra.1)?;
    let r = project_qubit(&chain.state, &proj)?;
    let expected = expected_for(&p)?;
    outcomes.push(finish(OutcomeLabel::Success, r.probability, register.clone(), &r.state, p.corrections, Some(expected))?);

    // Failure: the orthogonal projection, then Z on both neighbours splits the chain.
    let fail = match project_qubit(&chain.state, &proj.complement()) {
        Ok(f) => f,
        Err(Error::ZeroOutcome { .. }) => return Ok(outcomes),
        Err(e) => return Err(e),
    };
    let b1 = chain.graph.label(it.b1).to_string();
    let b2 = chain.graph.label(it.b2).to_string();
    let mut g = chain.graph.without_vertex(it.a);
    g = g.without_vertex(g.require(&b1)?);
    g = g.without_vertex(g.require(&b2)?);
    let expected = ChainState::with_logical_pairs(g, chain.pairs.clone())?;
    let reduced = without_label(&without_label(&register, &b1), &b2);
    for x in 0..2u8 {
        for y in 0..2u8 {
            let q1 = register.iter().position(|l| *l == b1).expect("b1 present");
            let p1 = if x == 0 { QubitProjection::zero(q1) } else { QubitProjection::one(q1) };
            let s1 = match project_qubit(&fail.state, &p1) {
                Ok(s) => s,
                Err(Error::ZeroOutcome { .. }) => continue,
                Err(e) => return Err(e),
            };
            let reg1 = without_label(&register, &b1);
            let q2 = reg1.iter().position(|l| *l == b2).expect("b2 present");
            let p2 = if y == 0 { QubitProjection::zero(q2) } else { QubitProjection::one(q2) };
            let s2 = match project_qubit(&s1.state, &p2) {
                Ok(s) => s,
                Err(Error::ZeroOutcome { .. }) => continue,
                Err(e) => return Err(e),
            };
            let mut corrections = Vec::new();
            for (bit, v) in [(x, it.b1), (y, it.b2)] {
                if bit == 1 {
                    for (c, w) in chain.graph.neighbors(v) {
                        if c != it.a {
                            corrections.push(Correction::new(chain.graph.label(c), CorrectionKind::PhaseOne(w)));
                        }
                    }
                }
            }
            outcomes.push(finish(
                OutcomeLabel::FailureZ(x, y),
                fail.probability * s1.probability * s2.probability,
                reduced.clone(),
                &s2.state,
                corrections,
                Some(expected.clone()),
            )?);
        }
    }
    Ok(outcomes)
}
