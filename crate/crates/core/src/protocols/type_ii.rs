use alloc::vec;
use alloc::vec::Vec;

use super::logical::{eligible_cases, interior, plan, LogicalCase};
use super::*;
use crate::math::{c, C64};
use crate::state::project_two_qubits;

/// Left chain with the consumed pair member removed and the survivor `e`
/// standing in for the logical vertex.
fn left_remainder(left: &ChainState, a: &str, pair: &LogicalPair) -> Result<(WeightedGraph, Vec<LogicalPair>, String)> {
    let e = pair.other(a).expect("a is in the pair").to_string();
    let mut g = left.graph.clone();
    let anchor = g.require(&pair.anchor)?;
    g.relabel(anchor, &e)?;
    let pairs = left.pairs.iter().filter(|p| *p != pair).cloned().collect();
    Ok((g, pairs, e))
}

/// Right chain after `b` is projected on `(⟨0| + sign⟨1|)/√2`, when the result
/// is again a weighted chain: either `b` was isolated or the projection turns
/// its two neighbours into a logical pair.
fn right_after_x(right: &ChainState, b: &str, sign: f64) -> Result<Option<(WeightedGraph, Vec<LogicalPair>, Vec<Correction>)>> {
    let vb = right.graph.require(b)?;
    match right.graph.degree(vb) {
        0 => Ok(Some((right.graph.without_vertex(vb), right.pairs.clone(), Vec::new()))),
        2 => {
            let it = interior(&right.graph, b)?;
            for v in [it.b1, it.b2] {
                if right.pair_containing(right.graph.label(v)).is_some() {
                    return Ok(None);
                }
            }
            let (equal, opposite) = eligible_cases(it.chi1, it.chi2);
            // ⟨0|-⟨1| is the opposite-weight projection; ⟨0|+⟨1| matches the
            // equal-weight one only at χ = π.
            let case = if sign < 0.0 && opposite {
                LogicalCase::Opposite
            } else if sign > 0.0 && equal && angle_is_pi(it.chi1) {
                LogicalCase::Equal
            } else {
                return Ok(None);
            };
            let p = plan(&right.graph, &it, case)?;
            let mut pairs = right.pairs.clone();
            pairs.push(p.pair);
            Ok(Some((p.graph, pairs, p.corrections)))
        }
        _ => Ok(None),
    }
}

fn angle_is_pi(chi: f64) -> bool {
    crate::math::angle_distance(chi, core::f64::consts::PI) < WEIGHT_TOLERANCE
}

/// Type-II fusion of the logical qubit containing `a` (pair `(a, e)`) with
/// vertex `b` of `right`, using the Bell-type operators `⟨00| ± ⟨11|` on
/// success and `⟨±|⟨∓|` on failure. On success `e` inherits `b`'s edges.
pub fn fuse_type_ii(left: &ChainState, a: &str, right: &ChainState, b: &str) -> Result<Vec<ProtocolOutcome>> {
    ensure_disjoint(left, right)?;
    let pair = left.pair_containing(a).ok_or_else(|| Error::NoLogicalPair(a.to_string()))?.clone();
    let vb = right.graph.require(b)?;
    ensure_unpaired(right, b)?;

    let joint = left.state.tensor(&right.state);
    let mut register = left.register.clone();
    register.extend(right.register.iter().cloned());
    let qa = left.qubit(a)?;
    let qb = left.register.len() + right.qubit(b)?;
    let residual = without_label(&without_label(&register, a), b);

    let (lg, lpairs, e) = left_remainder(left, a, &pair)?;
    let fused = {
        let rg = right.graph.without_vertex(vb);
        let mut g = lg.disjoint_union(&rg)?;
        let ei = g.require(&e)?;
        for (f, w) in right.graph.neighbors(vb) {
            let fi = g.require(right.graph.label(f))?;
            g.add_edge(ei, fi, w)?;
        }
        let mut pairs = lpairs.clone();
        pairs.extend(right.pairs.iter().cloned());
        ChainState::with_logical_pairs(g, pairs)?
    };

    let h = c(0.5, 0.0);
    let one = c(1.0, 0.0);
    let zero = c(0.0, 0.0);
    let z_e = || vec![Correction::new(&e, CorrectionKind::PauliZ)];
    let branches: [(OutcomeLabel, [C64; 4], Vec<Correction>, Option<f64>); 4] = [
        (OutcomeLabel::SuccessPlus, [one, zero, zero, one], Vec::new(), None),
        (OutcomeLabel::SuccessMinus, [one, zero, zero, -one], z_e(), None),
        (OutcomeLabel::FailurePlusMinus, [h, -h, h, -h], Vec::new(), Some(-1.0)),
        (OutcomeLabel::FailureMinusPlus, [h, h, -h, -h], z_e(), Some(1.0)),
    ];
    let mut outcomes = Vec::new();
    for (label, bra, mut corrections, b_sign) in branches {
        let r = match project_two_qubits(&joint, qa, qb, bra) {
            Ok(r) => r,
            Err(Error::ZeroOutcome { .. }) => continue,
            Err(err) => return Err(err),
        };
        let expected = match b_sign {
            None => Some(fused.clone()),
            Some(sign) => match right_after_x(right, b, sign)? {
                Some((rg, rpairs, rc)) => {
                    corrections.extend(rc);
                    Some(union_chain((&lg, &lpairs), (&rg, &rpairs))?)
                }
                None => None,
            },
        };
        outcomes.push(finish(label, r.probability, residual.clone(), &r.state, corrections, expected)?);
    }
    Ok(outcomes)
}
