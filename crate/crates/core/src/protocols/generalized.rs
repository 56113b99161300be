use alloc::vec::Vec;

use super::*;
use crate::analysis::inner_z_neighbors;
use crate::optics::{enumerate_outcomes, FusionContext, FusionOutcome, ModeUnitary};
use crate::state::split_on_qubit;

/// Outcome list of a generalized fusion together with its context.
#[derive(Clone, Debug, PartialEq)]
pub struct GeneralizedFusion {
    pub context: FusionContext,
    /// Labels of the register that `register_state`s live on.
    pub register: Vec<String>,
    pub outcomes: Vec<FusionOutcome>,
}

/// Fuse logical-pair member `a` of `left` with vertex `b` of `right` through
/// an arbitrary linear-optical network `u` and photon counting on all modes.
///
/// The overlap `⟨f4|f3⟩` read off the simulated register must equal
/// `∏_f (1 + e^{iχ_bf})/2` over the neighbours of `b`.
pub fn fuse_generalized(left: &ChainState, a: &str, right: &ChainState, b: &str, u: &ModeUnitary) -> Result<GeneralizedFusion> {
    ensure_disjoint(left, right)?;
    left.pair_containing(a).ok_or_else(|| Error::NoLogicalPair(a.to_string()))?;
    let vb = right.graph.require(b)?;
    ensure_unpaired(right, b)?;
    let (f1, f2) = split_on_qubit(&left.state, left.qubit(a)?)?;
    let (f3, f4) = split_on_qubit(&right.state, right.qubit(b)?)?;
    let weights: Vec<f64> = right.graph.neighbors(vb).into_iter().map(|(_, w)| w).collect();
    let context = FusionContext::with_expected_z(f1, f2, f3, f4, inner_z_neighbors(&weights))?;
    let mut register = without_label(&left.register, a);
    register.extend(without_label(&right.register, b));
    let outcomes = enumerate_outcomes(&context, u);
    Ok(GeneralizedFusion { context, register, outcomes })
}
