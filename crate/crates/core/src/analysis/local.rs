use crate::error::{Error, Result};
use crate::math::{atan2, sqrt, Mat2};
use crate::state::{apply_all, fidelity_up_to_global_phase, LocalGate, PureState, EQUALITY_SLACK};

/// Amplitudes of a two-qubit state as a matrix, qubit 0 indexing rows.
pub fn state_matrix(s: &PureState) -> Result<Mat2> {
    if s.num_qubits() != 2 {
        return Err(Error::ShapeMismatch { left: s.num_qubits(), right: 2 });
    }
    let a = s.amplitudes();
    Ok(Mat2::new(a[0], a[1], a[2], a[3]))
}

/// `|φ|` of the two-qubit weighted graph state locally equivalent to `s`.
///
/// For weight `φ` the normalized amplitude matrix has `|det| = sin(|φ|/2)/2`
/// and Schmidt gap `cos(|φ|/2)`; the two are combined through `atan2`, which
/// stays accurate near both ends of `[0, π]`.
pub fn pair_weight_of_state(s: &PureState) -> Result<f64> {
    let m = state_matrix(&s.normalized()?)?;
    let rho = m * m.adjoint();
    let (p, r, q) = (rho.at(0, 0).re, rho.at(1, 1).re, rho.at(0, 1));
    let gap = sqrt((p - r) * (p - r) + 4.0 * q.norm_sqr());
    Ok(2.0 * atan2(2.0 * m.det().norm(), gap))
}

/// Local unitaries `L ⊗ R` taking one two-qubit state onto another.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalEquivalence {
    pub left: Mat2,
    pub right: Mat2,
    pub fidelity: f64,
}

impl LocalEquivalence {
    pub fn gates(&self) -> [LocalGate; 2] {
        [
            LocalGate::new(0, self.left).expect("unitary from SVD"),
            LocalGate::new(1, self.right).expect("unitary from SVD"),
        ]
    }
}

/// Search for `L ⊗ R` with `(L ⊗ R)|from⟩ = |to⟩` up to phase through the
/// singular value decompositions of both amplitude matrices. Returns `None`
/// when the Schmidt coefficients differ or the constructed map misses.
pub fn local_equivalence(from: &PureState, to: &PureState) -> Result<Option<LocalEquivalence>> {
    let m1 = state_matrix(&from.normalized()?)?;
    let m2 = state_matrix(&to.normalized()?)?;
    let (u1, s1, v1) = m1.svd();
    let (u2, s2, v2) = m2.svd();
    if (s1[0] - s2[0]).abs() > 1e-9 || (s1[1] - s2[1]).abs() > 1e-9 {
        return Ok(None);
    }
    // L M1 Rᵀ = U2 S V2†  with  L = U2 U1†,  Rᵀ = V1 V2†.
    let left = u2 * u1.adjoint();
    let right = (v1 * v2.adjoint()).transpose();
    let (Ok(gl), Ok(gr)) = (LocalGate::new(0, left), LocalGate::new(1, right)) else {
        return Ok(None);
    };
    let mapped = apply_all(from, &[gl, gr])?;
    let fidelity = fidelity_up_to_global_phase(&mapped, to)?;
    if fidelity >= 1.0 - EQUALITY_SLACK {
        Ok(Some(LocalEquivalence { left, right, fidelity }))
    } else {
        Ok(None)
    }
}
