use super::*;
use crate::analysis::{local_equivalence, LocalEquivalence};
use crate::math::{atan2, cos, expi, sin, sqrt, wrap_angle, C64};
use crate::state::{project_qubit, QubitProjection};

/// Measurement basis on the middle qubit of a weighted 3-chain that leaves
/// the outer pair with the same weight for both outcomes.
#[derive(Clone, Debug, PartialEq)]
pub struct GhzPair {
    /// `A|0⟩ + B|1⟩` as a bra, then its orthogonal complement.
    pub projections: [QubitProjection; 2],
    /// `|φ|` of the resulting pair.
    pub phi: f64,
    pub probabilities: [f64; 2],
    /// Local unitaries on `(b1, b2)` taking each outcome to the weighted pair.
    pub corrections: [LocalEquivalence; 2],
}

/// Largest `|φ|` reachable from weights `χ1, χ2`:
/// `arccos(1 − ½(1−cos χ1)(1−cos χ2))`.
pub fn ghz_pair_max_weight(chi1: f64, chi2: f64) -> f64 {
    let s = (sin(chi1 / 2.0) * sin(chi2 / 2.0)).abs().min(1.0);
    2.0 * libm::asin(s)
}

/// `φ = arccos(1 − 2|A|²|B|²(1−cos χ1)(1−cos χ2))`, evaluated through an
/// equivalent `atan2` form that keeps full precision near 0 and π.
fn phi_formula(mag_a: f64, mag_b: f64, chi1: f64, chi2: f64) -> f64 {
    let (x, y) = (chi1 / 2.0, chi2 / 2.0);
    let (a2, b2) = (mag_a * mag_a, mag_b * mag_b);
    let num = 2.0 * mag_a * mag_b * (sin(x) * sin(y)).abs();
    let den = sqrt((a2 - b2) * (a2 - b2) + 4.0 * a2 * b2 * (cos(x) * cos(x) + sin(x) * sin(x) * cos(y) * cos(y)));
    2.0 * atan2(num, den)
}

/// Basis for `|A| = mag_a` with `arg B = arg A + (χ1 + χ2 + π)/2`, checked by
/// simulating the chain `b1 – a – b2` and projecting its middle qubit.
pub fn ghz_pair_projection(chi1: f64, chi2: f64, mag_a: f64) -> Result<GhzPair> {
    if !chi1.is_finite() || !chi2.is_finite() || !mag_a.is_finite() {
        return Err(Error::NonFinite);
    }
    if !(0.0..=1.0).contains(&mag_a) {
        return Err(Error::InvalidProjection);
    }
    let mag_b = sqrt((1.0 - mag_a * mag_a).max(0.0));
    let a = C64::from(mag_a);
    let b = expi((chi1 + chi2 + core::f64::consts::PI) / 2.0) * mag_b;
    let phi = phi_formula(mag_a, mag_b, chi1, chi2);
    let max = ghz_pair_max_weight(chi1, chi2);

    let chain = WeightedGraph::path(&["b1", "a", "b2"], &[chi1, chi2])?;
    let state = build_state(&chain)?;
    let target = if phi > 1e-12 {
        build_state(&WeightedGraph::path(&["b1", "b2"], &[phi])?)?
    } else {
        PureState::plus(2)
    };
    let p0 = QubitProjection::from_bra(1, a, b)?;
    let p1 = p0.complement();
    let mut probabilities = [0.0; 2];
    let mut corrections = [None, None];
    for (k, p) in [p0, p1].iter().enumerate() {
        let r = project_qubit(&state, p)?;
        probabilities[k] = r.probability;
        corrections[k] = local_equivalence(&r.state, &target)?;
    }
    match corrections {
        [Some(c0), Some(c1)] => Ok(GhzPair { projections: [p0, p1], phi, probabilities, corrections: [c0, c1] }),
        _ => Err(Error::NotAchievable { target: phi, max }),
    }
}

/// Invert the weight formula for `|A|` and build the basis giving pair
/// weight `|φ_target|` with certainty.
pub fn ghz_pair_for_target(chi1: f64, chi2: f64, phi_target: f64) -> Result<GhzPair> {
    if !phi_target.is_finite() {
        return Err(Error::NonFinite);
    }
    let phi = wrap_angle(phi_target).abs();
    let max = ghz_pair_max_weight(chi1, chi2);
    if phi > max + 1e-12 {
        return Err(Error::NotAchievable { target: phi_target, max });
    }
    let s12 = sin(chi1 / 2.0) * sin(chi2 / 2.0);
    let ss = s12 * s12;
    let mag_a = if phi == 0.0 || ss == 0.0 {
        0.0
    } else {
        let sp = sin(phi / 2.0);
        let q = (sp * sp / (4.0 * ss)).min(0.25);
        // |A|² (1 − |A|²) = q, smaller root; written to avoid cancellation.
        let x = 2.0 * q / (1.0 + sqrt(f64::max(1.0 - 4.0 * q, 0.0)));
        sqrt(x)
    };
    let pair = ghz_pair_projection(chi1, chi2, mag_a)?;
    if (pair.phi - phi).abs() > 1e-9 {
        return Err(Error::NotAchievable { target: phi_target, max });
    }
    Ok(pair)
}
