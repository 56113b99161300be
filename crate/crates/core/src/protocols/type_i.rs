use alloc::vec;
use alloc::vec::Vec;

use super::*;
use crate::math::ZERO;
use crate::optics::{enumerate_partial, type_i_matrix, TwoPhotonInput};
use crate::state::split_on_qubit;

fn check_endpoint(chain: &ChainState, label: &str) -> Result<usize> {
    let v = chain.graph.require(label)?;
    ensure_unpaired(chain, label)?;
    if chain.graph.degree(v) > 1 {
        return Err(Error::NotEndpoint(label.to_string()));
    }
    Ok(v)
}

/// Corrections undoing the phases a `|1⟩` outcome on `v` leaves on its neighbours.
fn z_rule_corrections(graph: &WeightedGraph, v: usize) -> Vec<Correction> {
    graph
        .neighbors(v)
        .into_iter()
        .map(|(n, w)| Correction::new(graph.label(n), CorrectionKind::PhaseOne(w)))
        .collect()
}

/// Type-I fusion of the endpoint `end_a` of `left` with the endpoint `end_b`
/// of `right`. On success the two photons' qubits merge into a single qubit
/// labelled `end_a+end_b` that keeps both neighbours and their weights.
pub fn fuse_type_i(left: &ChainState, end_a: &str, right: &ChainState, end_b: &str) -> Result<Vec<ProtocolOutcome>> {
    ensure_disjoint(left, right)?;
    let va = check_endpoint(left, end_a)?;
    let vb = check_endpoint(right, end_b)?;
    let (g0, g1) = split_on_qubit(&left.state, left.qubit(end_a)?)?;
    let (g2, g3) = split_on_qubit(&right.state, right.qubit(end_b)?)?;
    let input = TwoPhotonInput::new(g0, g1, g2, g3)?;
    // Detect only the d modes (columns 2, 3); c stays as the new qubit.
    let groups = enumerate_partial(&input, &type_i_matrix(), &[2, 3])?;

    let c_label = merged_label(end_a, end_b);
    let mut rest = without_label(&left.register, end_a);
    rest.extend(without_label(&right.register, end_b));
    let mut with_c = vec![c_label.clone()];
    with_c.extend(rest.iter().cloned());

    let merged = {
        let mut lg = left.graph.clone();
        lg.relabel(va, &c_label)?;
        let rg = right.graph.without_vertex(vb);
        let mut g = lg.disjoint_union(&rg)?;
        for (f, w) in right.graph.neighbors(vb) {
            let fi = g.require(right.graph.label(f))?;
            g.add_edge(va, fi, w)?;
        }
        let mut pairs = left.pairs.clone();
        pairs.extend(right.pairs.iter().cloned());
        ChainState::with_logical_pairs(g, pairs)?
    };
    let split = || {
        union_chain(
            (&left.graph.without_vertex(va), &left.pairs),
            (&right.graph.without_vertex(vb), &right.pairs),
        )
    };

    let mut outcomes = Vec::new();
    let mut two_photon: Option<(f64, PureState)> = None;
    for g in groups {
        match g.counts.as_slice() {
            [1, 0] | [0, 1] => {
                // One photon left in c: c_H ↔ |0⟩, c_V ↔ |1⟩.
                let dim = g.branches[0].register.dim();
                let mut amps = vec![ZERO; 2 * dim];
                for br in &g.branches {
                    let off = match br.occupied.as_slice() {
                        [0] => 0,
                        [1] => dim,
                        _ => return Err(Error::InvalidContext("unexpected Type-I branch")),
                    };
                    for (k, a) in br.register.amplitudes().iter().enumerate() {
                        amps[off + k] += *a;
                    }
                }
                let raw = PureState::unnormalized(amps)?;
                let (label, corrections) = if g.counts[0] == 1 {
                    (OutcomeLabel::SuccessPlus, Vec::new())
                } else {
                    (OutcomeLabel::SuccessMinus, vec![Correction::new(&c_label, CorrectionKind::PauliZ)])
                };
                outcomes.push(finish(label, g.probability, with_c.clone(), &raw, corrections, Some(merged.clone()))?);
            }
            [0, 0] => {
                // a_H b_V: register f1 ⊗ f4, so b was found in |1⟩. Only the
                // (c_H, c_V) branch carries amplitude.
                let raw = g
                    .branches
                    .iter()
                    .find(|br| br.occupied.as_slice() == [0, 1])
                    .map(|br| br.register.clone())
                    .ok_or(Error::InvalidContext("missing Type-I c_H c_V branch"))?;
                let corrections = z_rule_corrections(&right.graph, vb);
                outcomes.push(finish(
                    OutcomeLabel::FailureNoPhoton,
                    g.probability,
                    rest.clone(),
                    &raw,
                    corrections,
                    Some(split()?),
                )?);
            }
            _ => {
                // a_V b_H: register f2 ⊗ f3 for every two-photon d pattern.
                for br in &g.branches {
                    if br.register.norm_sqr() < crate::state::ZERO_OUTCOME_CUTOFF {
                        continue;
                    }
                    match &mut two_photon {
                        None => two_photon = Some((br.register.norm_sqr(), br.register.clone())),
                        Some((p, s)) => {
                            if fidelity_up_to_global_phase(s, &br.register)? < 1.0 - EQUALITY_SLACK {
                                return Err(Error::InvalidContext("two-photon failure branches disagree"));
                            }
                            *p += br.register.norm_sqr();
                        }
                    }
                }
            }
        }
    }
    if let Some((p, raw)) = two_photon {
        let corrections = z_rule_corrections(&left.graph, va);
        outcomes.push(finish(OutcomeLabel::FailureTwoPhotons, p, rest, &raw, corrections, Some(split()?))?);
    }
    Ok(outcomes)
}
