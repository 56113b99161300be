use super::entropy::{entanglement_report, inner_z, EntanglementReport};
use crate::error::{Error, Result};
use crate::math::{expi, sqrt, wrap_angle, Mat2, C64};

/// Relative tolerance of the coefficient conditions.
pub const CONDITION_TOLERANCE: f64 = 1e-9;

/// The bra `A⟨00| + B⟨01| + C⟨10| + D⟨11|` on the fused pair `(a, b)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoQubitProjection {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
}

impl TwoQubitProjection {
    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Result<Self> {
        let p = Self { a, b, c, d };
        if !(p.norm_sqr() > 0.0) || !p.norm_sqr().is_finite() {
            return Err(Error::InvalidProjection);
        }
        Ok(p)
    }

    pub fn norm_sqr(&self) -> f64 {
        self.a.norm_sqr() + self.b.norm_sqr() + self.c.norm_sqr() + self.d.norm_sqr()
    }

    pub fn normalized(&self) -> Self {
        let k = 1.0 / sqrt(self.norm_sqr());
        Self { a: self.a * k, b: self.b * k, c: self.c * k, d: self.d * k }
    }

    /// Coefficients of the register over `f_{1,2} ⊗ f_{3,4}` left by the projection.
    pub fn matrix(&self) -> Mat2 {
        Mat2::new(self.a, self.b, self.c, self.d)
    }

    pub fn bra(&self) -> [C64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// Amplitudes `p_ef` of the residual on `(e, f)` when `b` has the single
    /// neighbour `f`: `[A+B, A+Be^{-iχ}, C+D, C+De^{-iχ}]`.
    pub fn residual_amplitudes(&self, chi_bf: f64) -> [C64; 4] {
        let w = expi(-chi_bf);
        [self.a + self.b, self.a + self.b * w, self.c + self.d, self.c + self.d * w]
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OutcomeTag {
    /// Bell-type projection: the fused weighted chain, possibly after `Z_e`.
    FusedWeightedGraph,
    /// A weighted chain whose `e–f` edge carries the given weight.
    NewWeight(f64),
    MaximallyEntangled,
    Product,
    Other,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OutcomeClass {
    pub tag: OutcomeTag,
    /// Which condition set decided the tag.
    pub evidence: &'static str,
    pub report: Option<EntanglementReport>,
}

/// Physical weight of the `e–f` edge after the projection (single neighbour
/// `f` of `b`): `arg(p01 p10 / (p00 p11))` with `p_ef` from
/// [`TwoQubitProjection::residual_amplitudes`]. This is the negative of
/// `arg(A+B) + arg(C+De^{-iχ}) − arg(A+Be^{-iχ}) − arg(C+D)`.
pub fn resulting_weight(p: &TwoQubitProjection, chi_bf: f64) -> Result<f64> {
    let q = p.normalized().residual_amplitudes(chi_bf);
    if q.iter().any(|x| x.norm() < 1e-12) {
        return Err(Error::DegenerateArgument);
    }
    Ok(wrap_angle(q[1].arg() + q[2].arg() - q[0].arg() - q[3].arg()))
}

/// Phase gates turning the residual into a weighted chain, and the weight
/// that chain carries.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TefCorrection {
    /// Apply `e^{iφ|1⟩⟨1|}` with this angle on `e`.
    pub phase_e: f64,
    /// Apply `e^{iφ|1⟩⟨1|}` with this angle on `f`.
    pub phase_f: f64,
    pub weight: f64,
}

pub fn tef_corrections(p: &TwoQubitProjection, chi_bf: f64) -> Result<TefCorrection> {
    let q = p.normalized().residual_amplitudes(chi_bf);
    if q.iter().any(|x| x.norm() < 1e-12) {
        return Err(Error::DegenerateArgument);
    }
    Ok(TefCorrection {
        phase_e: -(q[2] / q[0]).arg(),
        phase_f: -(q[1] / q[0]).arg(),
        weight: resulting_weight(p, chi_bf)?,
    })
}

/// The diagonal representation of `T_{e,f}` has entries of one common
/// magnitude.
pub fn tef_unitarity(p: &TwoQubitProjection, chi_bf: f64) -> bool {
    let q = p.normalized().residual_amplitudes(chi_bf);
    let mags = q.map(|x| x.norm());
    let hi = mags.iter().cloned().fold(0.0, f64::max);
    let lo = mags.iter().cloned().fold(f64::INFINITY, f64::min);
    hi > 1e-12 && hi - lo <= 1e-10 * hi.max(1.0)
}

/// The same condition phrased through arguments and magnitudes: each of
/// `(A, B)` and `(C, D)` is degenerate or has `arg B − arg A ≡ χ/2 (mod π)`,
/// and `|A+B| = |C+D|`.
pub fn tef_conditions_by_argument(p: &TwoQubitProjection, chi_bf: f64) -> bool {
    let p = p.normalized();
    let half = expi(-chi_bf / 2.0);
    let arg_ok = |x: C64, y: C64| {
        let r = y * x.conj() * half;
        r.im.abs() <= 1e-10 * (x.norm() * y.norm()).max(1e-300) || x.norm() * y.norm() < 1e-24
    };
    let q = p.residual_amplitudes(chi_bf);
    let nonzero = q.iter().any(|x| x.norm() > 1e-12);
    nonzero && arg_ok(p.a, p.b) && arg_ok(p.c, p.d) && (q[0].norm() - q[2].norm()).abs() <= 1e-10
}

/// Classify the residual of projection `p` on `(a, b)`.
///
/// `chi_bf2` is the weight to a second neighbour of `b`, if any; new-weight
/// synthesis is only assessed for a single neighbour. Tags are tried in the
/// order fused, new weight, maximally entangled, product, other.
pub fn classify_projection(p: &TwoQubitProjection, chi_bf: f64, chi_bf2: Option<f64>) -> OutcomeClass {
    let n = p.normalized();
    let z = inner_z(chi_bf, chi_bf2.unwrap_or(0.0));
    let report = entanglement_report(&n.matrix(), z).ok();
    let tol = CONDITION_TOLERANCE;
    if n.b.norm() <= tol && n.c.norm() <= tol && (n.a.norm() - n.d.norm()).abs() <= tol {
        return OutcomeClass { tag: OutcomeTag::FusedWeightedGraph, evidence: "B = C = 0, |A| = |D|", report };
    }
    if chi_bf2.is_none() && tef_unitarity(&n, chi_bf) {
        if let Ok(w) = resulting_weight(&n, chi_bf) {
            return OutcomeClass { tag: OutcomeTag::NewWeight(w), evidence: "T_ef diagonal entries of equal modulus", report };
        }
    }
    match report {
        Some(r) if (r.det_rho - 0.25).abs() <= tol => {
            OutcomeClass { tag: OutcomeTag::MaximallyEntangled, evidence: "M' proportional to a unitary", report }
        }
        Some(r) if r.det_rho <= 1e-12 => OutcomeClass { tag: OutcomeTag::Product, evidence: "det M' = 0", report },
        _ => OutcomeClass { tag: OutcomeTag::Other, evidence: "no condition set holds", report },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{c, ONE, ZERO};
    use core::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn bell_projection_is_fused() {
        let h = C64::from(FRAC_1_SQRT_2);
        let p = TwoQubitProjection::new(h, ZERO, ZERO, h).unwrap();
        for chi in [0.4, 1.7, -2.9] {
            assert_eq!(classify_projection(&p, chi, None).tag, OutcomeTag::FusedWeightedGraph);
            assert!((resulting_weight(&p, chi).unwrap() - chi).abs() < 1e-14);
        }
    }

    #[test]
    fn rank_one_is_product() {
        let p = TwoQubitProjection::new(ONE, ZERO, ZERO, ZERO).unwrap();
        assert_eq!(classify_projection(&p, 1.0, Some(0.5)).tag, OutcomeTag::Product);
    }

    #[test]
    fn equal_modulus_family_gives_new_weight() {
        let chi = 1.1;
        let ph = expi(chi / 2.0);
        let p = TwoQubitProjection::new(ONE, ph * 0.6, C64::from(0.6), ph).unwrap();
        assert!(tef_unitarity(&p, chi));
        assert!(tef_conditions_by_argument(&p, chi));
        assert!(matches!(classify_projection(&p, chi, None).tag, OutcomeTag::NewWeight(_)));
    }

    #[test]
    fn degenerate_argument() {
        // A + B = 0 leaves an undefined argument.
        let p = TwoQubitProjection::new(ONE, -ONE, c(0.3, 0.0), c(0.2, 0.1)).unwrap();
        assert_eq!(resulting_weight(&p, 0.7), Err(Error::DegenerateArgument));
        assert!(TwoQubitProjection::new(ZERO, ZERO, ZERO, ZERO).is_err());
    }
}
