use crate::error::{Error, Result};
use crate::math::{binary_entropy, expi, sqrt, Mat2, C64, ONE, ZERO};

/// Agreement required between closed forms and their numerical cross-checks.
pub const ORACLE_TOLERANCE: f64 = 1e-10;
/// `|z|` at or above `1 - GRAM_MARGIN` is treated as degenerate.
pub const GRAM_MARGIN: f64 = 1e-12;

/// `z = ⟨f4|f3⟩ = (1 + e^{iχ_bf})(1 + e^{iχ_bf'})/4`. Pass `χ_bf' = 0` when
/// `b` has a single neighbour.
pub fn inner_z(chi_bf: f64, chi_bf2: f64) -> C64 {
    inner_z_neighbors(&[chi_bf, chi_bf2])
}

/// The same overlap for an arbitrary neighbourhood of `b`.
pub fn inner_z_neighbors(weights: &[f64]) -> C64 {
    weights.iter().fold(ONE, |acc, &w| acc * (ONE + expi(w)) * 0.5)
}

/// `M' = M [[1, 0], [z*, √(1-|z|²)]]`, the coefficients of the register in an
/// orthonormal basis `f3, f4⊥`.
pub fn m_prime(m: &Mat2, z: C64) -> Mat2 {
    let s = sqrt((1.0 - z.norm_sqr()).max(0.0));
    *m * Mat2::new(ONE, ZERO, z.conj(), C64::from(s))
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EntanglementReport {
    pub z: C64,
    /// `N² = |a|²+|b|²+2Re(z a b*)+|c|²+|d|²+2Re(z c d*)`.
    pub norm_sqr: f64,
    /// Determinant of the normalized reduced density matrix, in `[0, 1/4]`.
    pub det_rho: f64,
    /// Smaller eigenvalue of the reduced density matrix.
    pub lambda: f64,
    pub entropy_bits: f64,
    /// `N²/4`: the pattern probability when `m` holds the raw coefficients of
    /// a two-detector outcome.
    pub probability: f64,
}

/// Entanglement across the fusion cut for register `Σ m_st f_s ⊗ f_{t+2}`.
/// The closed form is checked against an explicit `ρ = M'M'†` and a mismatch
/// beyond [`ORACLE_TOLERANCE`] is an error.
pub fn entanglement_report(m: &Mat2, z: C64) -> Result<EntanglementReport> {
    if !(z.norm() < 1.0 - GRAM_MARGIN) {
        return Err(Error::DegenerateGram { z_abs: z.norm() });
    }
    let (a, b, c, d) = (m.at(0, 0), m.at(0, 1), m.at(1, 0), m.at(1, 1));
    let norm_sqr = a.norm_sqr() + b.norm_sqr() + 2.0 * (z * a * b.conj()).re + c.norm_sqr() + d.norm_sqr()
        + 2.0 * (z * c * d.conj()).re;
    if !(norm_sqr > 1e-28) {
        return Err(Error::ZeroOutcome { probability: norm_sqr / 4.0 });
    }
    let det_rho = ((1.0 - z.norm_sqr()) * m.det().norm_sqr() / (norm_sqr * norm_sqr)).clamp(0.0, 0.25);
    let lambda = 0.5 * (1.0 - sqrt((1.0 - 4.0 * det_rho).max(0.0)));

    // Cross-check: eigenvalues of the explicitly built reduced density matrix.
    let mp = m_prime(m, z);
    let rho = (mp * mp.adjoint()).scale(C64::from(1.0 / norm_sqr));
    let trace = rho.at(0, 0).re + rho.at(1, 1).re;
    let (eig, _) = rho.hermitian_eigen();
    let oracle_det = eig[0] * eig[1];
    if (trace - 1.0).abs() > ORACLE_TOLERANCE {
        return Err(Error::OracleMismatch { quantity: "N²", analytic: norm_sqr, oracle: trace * norm_sqr });
    }
    if (oracle_det - det_rho).abs() > ORACLE_TOLERANCE {
        return Err(Error::OracleMismatch { quantity: "det ρ", analytic: det_rho, oracle: oracle_det });
    }
    Ok(EntanglementReport {
        z,
        norm_sqr,
        det_rho,
        lambda,
        entropy_bits: binary_entropy(lambda),
        probability: norm_sqr / 4.0,
    })
}
