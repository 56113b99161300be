//! Parameter sweeps comparing closed forms with simulation. Each sweep
//! returns rows in grid order; [`to_csv`] writes them with fixed headers.
//!
//! | quantity        | columns |
//! |-----------------|---------|
//! | `logical-prob`  | `chi, analytic, simulated, residual` |
//! | `failure-split` | `chi_bf, chi_bf2, re_z, analytic_plus_minus, simulated_plus_minus, analytic_minus_plus, simulated_minus_plus, residual` |
//! | `det-entropy`   | `chi_bf, chi_bf2, pattern_i, pattern_j, probability, det_analytic, det_oracle, entropy_bits, residual` |
//! | `ghz-range`     | `chi1, chi2, max_analytic, max_simulated, residual` |
//! | `xi-solve`      | `chi_bf, chi_target, xi, achieved, residual, fidelity, status` |

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use rayon::prelude::*;
use serde::Serialize;
use wgs_core::analysis::{
    entanglement_report, hyperbola_weight, inner_z, pair_weight_of_state, solve_xi_for_weight, xi_projection,
};
use wgs_core::math::angle_distance;
use wgs_core::optics::{oracle_enumerate, ModeUnitary, OutcomeKind};
use wgs_core::protocols::{
    create_logical_qubit, fuse_generalized, fuse_type_ii, ghz_pair_projection, ChainState, LogicalPair, OutcomeLabel,
};
use wgs_core::state::{build_state, project_qubit, ZERO_OUTCOME_CUTOFF};
use wgs_core::WeightedGraph;

use crate::error::{WgsError, WgsResult};
use crate::oracle::{fused_pair_fidelity, reduced_det};

/// `χ_k = −π + 2πk/n` for `k = 1..=n`, without `χ = 0`.
pub fn weight_grid(n: usize) -> Vec<f64> {
    (1..=n).map(|k| -PI + 2.0 * PI * k as f64 / n as f64).filter(|w| w.abs() > 1e-12).collect()
}

/// `χ_k = πk/n` for `k = 1..=n`.
pub fn half_grid(n: usize) -> Vec<f64> {
    (1..=n).map(|k| PI * k as f64 / n as f64).collect()
}

/// Evaluate `f` on every element of `outer` in parallel, keeping input order.
fn sweep<T: Sync, R: Send>(outer: &[T], f: impl Fn(&T) -> WgsResult<Vec<R>> + Sync + Send) -> WgsResult<Vec<R>> {
    let pool = crate::thread_pool()?;
    let parts: Vec<WgsResult<Vec<R>>> = pool.install(|| outer.par_iter().map(f).collect());
    let mut rows = Vec::new();
    for p in parts {
        rows.extend(p?);
    }
    Ok(rows)
}

pub fn to_csv<T: Serialize>(rows: &[T]) -> WgsResult<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r)?;
    }
    let bytes = w.into_inner().map_err(|e| WgsError::Numerical(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn re_z(c1: f64, c2: f64) -> f64 {
    (1.0 + c1.cos() + c2.cos() + (c1 + c2).cos()) / 4.0
}

fn chain3(prefix: &str, w: [f64; 2]) -> WgsResult<ChainState> {
    let l = crate::random::labels(prefix, 3);
    Ok(ChainState::new(WeightedGraph::path(&l, &w)?)?)
}

fn logical_left(w: f64) -> WgsResult<ChainState> {
    let g = WeightedGraph::path(&["l0", "lL"], &[w])?;
    Ok(ChainState::with_logical_pairs(g, vec![LogicalPair::new("lp", "lL")])?)
}

#[derive(Clone, Debug, Serialize)]
pub struct LogicalProbRow {
    pub chi: f64,
    pub analytic: f64,
    pub simulated: f64,
    pub residual: f64,
}

/// Success probability of logical-qubit creation on `b1 –χ– a –χ– b2`.
pub fn logical_prob(chis: &[f64]) -> WgsResult<Vec<LogicalProbRow>> {
    sweep(chis, |&chi| {
        let chain = ChainState::new(WeightedGraph::path(&["b1", "a", "b2"], &[chi, chi])?)?;
        let out = create_logical_qubit(&chain, "a")?;
        let simulated = out
            .iter()
            .find(|o| o.label.is_success())
            .map(|o| o.probability)
            .ok_or_else(|| WgsError::Numerical("logical qubit creation produced no success outcome".into()))?;
        let analytic = (1.0 - chi.cos()) / 4.0;
        Ok(vec![LogicalProbRow { chi, analytic, simulated, residual: (simulated - analytic).abs() }])
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct FailureSplitRow {
    pub chi_bf: f64,
    pub chi_bf2: f64,
    pub re_z: f64,
    pub analytic_plus_minus: f64,
    pub simulated_plus_minus: f64,
    pub analytic_minus_plus: f64,
    pub simulated_minus_plus: f64,
    pub residual: f64,
}

/// Type-II failure probabilities for `b` with neighbour weights
/// `(χ_bf, χ_bf')` over `weights × weights`.
pub fn failure_split(weights: &[f64]) -> WgsResult<Vec<FailureSplitRow>> {
    let left = logical_left(0.8)?;
    sweep(weights, |&c1| {
        weights
            .iter()
            .map(|&c2| {
                let out = fuse_type_ii(&left, "lp", &chain3("r", [c1, c2])?, "r1")?;
                let p = |l: OutcomeLabel| out.iter().find(|o| o.label == l).map_or(0.0, |o| o.probability);
                let rz = re_z(c1, c2);
                let (apm, amp) = ((1.0 - rz) / 4.0, (1.0 + rz) / 4.0);
                let (spm, smp) = (p(OutcomeLabel::FailurePlusMinus), p(OutcomeLabel::FailureMinusPlus));
                Ok(FailureSplitRow {
                    chi_bf: c1,
                    chi_bf2: c2,
                    re_z: rz,
                    analytic_plus_minus: apm,
                    simulated_plus_minus: spm,
                    analytic_minus_plus: amp,
                    simulated_minus_plus: smp,
                    residual: (apm - spm).abs().max((amp - smp).abs()),
                })
            })
            .collect()
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct DetEntropyRow {
    pub chi_bf: f64,
    pub chi_bf2: f64,
    pub pattern_i: usize,
    pub pattern_j: usize,
    pub probability: f64,
    pub det_analytic: f64,
    pub det_oracle: f64,
    pub entropy_bits: f64,
    pub residual: f64,
}

/// Generalized fusion through `u` of a logical end with the middle of a
/// 3-chain, one row per possible relevant outcome. The oracle determinant
/// comes from the Fock-expanded register and a dense eigendecomposition.
pub fn det_entropy(u: &ModeUnitary, weights: &[f64]) -> WgsResult<Vec<DetEntropyRow>> {
    let left = logical_left(0.8)?;
    sweep(weights, |&c1| {
        let mut rows = Vec::new();
        for &c2 in weights {
            let gen = fuse_generalized(&left, "lp", &chain3("r", [c1, c2])?, "r1", u)?;
            let z = inner_z(c1, c2);
            let oracle = oracle_enumerate(&gen.context, u);
            let lq = gen.context.left_qubits();
            for (o, d) in gen.outcomes.iter().zip(&oracle) {
                if o.kind != OutcomeKind::Relevant || o.probability < ZERO_OUTCOME_CUTOFF {
                    continue;
                }
                let Some(reg) = &d.register_state else { continue };
                let rep = entanglement_report(&o.m_matrix, z)?;
                let det_oracle = reduced_det(reg.amplitudes(), lq);
                rows.push(DetEntropyRow {
                    chi_bf: c1,
                    chi_bf2: c2,
                    pattern_i: o.pattern.0,
                    pattern_j: o.pattern.1,
                    probability: o.probability,
                    det_analytic: rep.det_rho,
                    det_oracle,
                    entropy_bits: rep.entropy_bits,
                    residual: (rep.det_rho - det_oracle).abs().max((o.probability - d.probability).abs()),
                });
            }
        }
        Ok(rows)
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct GhzRangeRow {
    pub chi1: f64,
    pub chi2: f64,
    pub max_analytic: f64,
    pub max_simulated: f64,
    pub residual: f64,
}

/// Largest pair weight from projecting the middle of `b1 –χ1– a –χ2– b2`:
/// the arccos closed form against the simulated `|A| = |B|` projection.
pub fn ghz_range(points: &[(f64, f64)]) -> WgsResult<Vec<GhzRangeRow>> {
    sweep(points, |&(chi1, chi2)| {
        let max_analytic = (1.0 - 0.5 * (1.0 - chi1.cos()) * (1.0 - chi2.cos())).clamp(-1.0, 1.0).acos();
        let pair = ghz_pair_projection(chi1, chi2, FRAC_1_SQRT_2)?;
        let state = build_state(&WeightedGraph::path(&["b1", "a", "b2"], &[chi1, chi2])?)?;
        let mut max_simulated = 0.0f64;
        let mut residual = 0.0f64;
        for p in &pair.projections {
            let phi = pair_weight_of_state(&project_qubit(&state, p)?.state)?;
            max_simulated = max_simulated.max(phi);
            residual = residual.max((phi - max_analytic).abs());
        }
        Ok(vec![GhzRangeRow { chi1, chi2, max_analytic, max_simulated, residual }])
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct XiSolveRow {
    pub chi_bf: f64,
    pub chi_target: f64,
    pub xi: f64,
    pub achieved: f64,
    pub residual: f64,
    pub fidelity: f64,
    pub status: String,
}

fn xi_row(chi_bf: f64, chi_target: f64) -> XiSolveRow {
    let run = || -> wgs_core::Result<(f64, f64, f64)> {
        let sol = solve_xi_for_weight(chi_bf, chi_target)?;
        let p = xi_projection(chi_bf, sol.xi)?;
        Ok((sol.xi, sol.residual, fused_pair_fidelity(&p, chi_bf, chi_target)?))
    };
    match run() {
        Ok((xi, residual, fidelity)) => XiSolveRow {
            chi_bf,
            chi_target,
            xi,
            achieved: hyperbola_weight(chi_bf, xi),
            residual: residual.max(angle_distance(hyperbola_weight(chi_bf, xi), chi_target)),
            fidelity,
            status: "ok".into(),
        },
        Err(e) => XiSolveRow {
            chi_bf,
            chi_target,
            xi: f64::NAN,
            achieved: f64::NAN,
            residual: f64::NAN,
            fidelity: f64::NAN,
            status: e.to_string(),
        },
    }
}

/// Solve the hyperbola construction for every `(χ_bf, χ_target)` pair and
/// check the projected state end to end.
pub fn xi_solve(pairs: &[(f64, f64)]) -> WgsResult<Vec<XiSolveRow>> {
    sweep(pairs, |&(c, t)| Ok(vec![xi_row(c, t)]))
}

/// All ordered pairs of a grid.
pub fn grid_pairs(a: &[f64], b: &[f64]) -> Vec<(f64, f64)> {
    a.iter().flat_map(|&x| b.iter().map(move |&y| (x, y))).collect()
}
