//! Dense numerical references used by the scans and the verification suite.

use nalgebra::{Complex, DMatrix};
use num_complex::Complex64 as C64;
use wgs_core::analysis::{tef_corrections, TwoQubitProjection};
use wgs_core::state::{apply_all, project_two_qubits};
use wgs_core::{LocalGate, PureState};

/// Eigenvalues of the reduced density matrix of the first `left_qubits`
/// qubits of `amps` (normalized internally), largest first.
pub fn reduced_spectrum(amps: &[C64], left_qubits: usize) -> Vec<f64> {
    let left = 1usize << left_qubits;
    let right = amps.len() / left;
    let norm: f64 = amps.iter().map(|x| x.norm_sqr()).sum();
    let rho = DMatrix::<Complex<f64>>::from_fn(left, left, |i, j| {
        let mut acc = Complex::new(0.0, 0.0);
        for r in 0..right {
            let (x, y) = (amps[i * right + r], amps[j * right + r]);
            acc += Complex::new(x.re, x.im) * Complex::new(y.re, -y.im);
        }
        acc / norm
    });
    let mut ev: Vec<f64> = rho.symmetric_eigen().eigenvalues.iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    ev
}

/// Product of the two largest reduced-density eigenvalues: the determinant
/// on the (rank ≤ 2) support of a fusion residual.
pub fn reduced_det(amps: &[C64], left_qubits: usize) -> f64 {
    let ev = reduced_spectrum(amps, left_qubits);
    ev[0] * ev.get(1).copied().unwrap_or(0.0).max(0.0)
}

/// Project `(a, b)` of `(e ≡ a) ⊗ (b –χ– f)` on `p` and return the
/// normalized residual on `(e, f)`.
pub fn project_logical_onto_edge(p: &TwoQubitProjection, chi_bf: f64) -> wgs_core::Result<PureState> {
    // Register a, e, b, f with (a, e) the logical pair.
    let h = 0.5 * std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = vec![C64::new(0.0, 0.0); 16];
    for x in 0..2 {
        for b in 0..2 {
            for f in 0..2 {
                amps[(x << 3) | (x << 2) | (b << 1) | f] = C64::from_polar(h, -chi_bf * (b * f) as f64);
            }
        }
    }
    let s = PureState::from_amplitudes(amps)?;
    Ok(project_two_qubits(&s, 0, 2, p.bra())?.state)
}

/// Fidelity between the corrected residual of `p` and the pair of weight
/// `target`.
pub fn fused_pair_fidelity(p: &TwoQubitProjection, chi_bf: f64, target: f64) -> wgs_core::Result<f64> {
    let t = tef_corrections(p, chi_bf)?;
    let s = project_logical_onto_edge(p, chi_bf)?;
    let fixed = apply_all(&s, &[LocalGate::phase_one(0, t.phase_e), LocalGate::phase_one(1, t.phase_f)])?;
    let pair: Vec<C64> = (0..4).map(|i| C64::from_polar(0.5, if i == 3 { -target } else { 0.0 })).collect();
    let ip: C64 = fixed.amplitudes().iter().zip(&pair).map(|(x, y)| x.conj() * y).sum();
    Ok(ip.norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bell_state_spectrum() {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let v = [C64::new(h, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(h, 0.0)];
        let ev = reduced_spectrum(&v, 1);
        assert!((ev[0] - 0.5).abs() < 1e-15 && (ev[1] - 0.5).abs() < 1e-15);
        assert!((reduced_det(&v, 1) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn product_state_has_zero_det() {
        let v: Vec<C64> = (0..8).map(|i| C64::new(1.0 + i as f64, 0.0)).collect();
        // (1..8) is not a product over 1|2 in general; use an explicit product.
        let a = [C64::new(0.6, 0.0), C64::new(0.0, 0.8)];
        let b = [C64::new(0.5, 0.5), C64::new(0.5, -0.5)];
        let p: Vec<C64> = a.iter().flat_map(|x| b.iter().map(move |y| x * y)).collect();
        assert!(reduced_det(&p, 1).abs() < 1e-15);
        assert!(reduced_det(&v, 1) > 0.0);
    }
}
