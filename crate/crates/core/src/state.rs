//! Dense pure states on qubit registers and the primitive operations on them.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;
use crate::math::{c, expi, sqrt, Mat2, C64, ONE, ZERO};

pub const DEFAULT_QUBIT_CAP: usize = 20;
/// Branches with probability below this are reported as impossible.
pub const ZERO_OUTCOME_CUTOFF: f64 = 1e-14;
pub const NORM_TOLERANCE: f64 = 1e-12;
pub const GATE_UNITARITY_TOLERANCE: f64 = 1e-12;
/// Two states are considered equal when their overlap reaches `1 - EQUALITY_SLACK`.
pub const EQUALITY_SLACK: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NormTag {
    Normalized,
    Unnormalized,
}

/// State vector of `num_qubits` qubits, qubit 0 being the most significant bit.
#[derive(Clone, Debug, PartialEq)]
pub struct PureState {
    num_qubits: usize,
    amplitudes: Vec<C64>,
    norm_tag: NormTag,
}

#[inline]
fn shift_of(n: usize, q: usize) -> usize {
    n - 1 - q
}

/// Insert `bit` into `j` so that it lands at qubit `q` of an `n`-qubit index.
#[inline]
fn insert_bit(j: usize, n: usize, q: usize, bit: usize) -> usize {
    let s = shift_of(n, q);
    let low = j & ((1 << s) - 1);
    let high = j >> s;
    (high << (s + 1)) | (bit << s) | low
}

impl PureState {
    /// The zero-qubit state (the scalar 1).
    pub fn empty() -> Self {
        Self { num_qubits: 0, amplitudes: vec![ONE], norm_tag: NormTag::Normalized }
    }

    pub fn basis(num_qubits: usize, index: usize) -> Result<Self> {
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, len: dim });
        }
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[index] = ONE;
        Ok(Self { num_qubits, amplitudes, norm_tag: NormTag::Normalized })
    }

    /// `|+⟩^⊗n`.
    pub fn plus(num_qubits: usize) -> Self {
        let dim = 1usize << num_qubits;
        let a = 1.0 / sqrt(dim as f64);
        Self { num_qubits, amplitudes: vec![c(a, 0.0); dim], norm_tag: NormTag::Normalized }
    }

    /// Normalized state; fails unless `Σ|a|² = 1` within tolerance.
    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Result<Self> {
        let s = Self::unnormalized(amplitudes)?;
        let n2 = s.norm_sqr();
        if (n2 - 1.0).abs() > NORM_TOLERANCE {
            return Err(Error::NotNormalized { norm_sqr: n2 });
        }
        Ok(Self { norm_tag: NormTag::Normalized, ..s })
    }

    /// Amplitude table carrying an arbitrary weight.
    pub fn unnormalized(amplitudes: Vec<C64>) -> Result<Self> {
        let len = amplitudes.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::BadLength(len));
        }
        Ok(Self { num_qubits: len.trailing_zeros() as usize, amplitudes, norm_tag: NormTag::Unnormalized })
    }

    /// Tag the state according to its actual norm.
    fn retag(mut self) -> Self {
        self.norm_tag = if (self.norm_sqr() - 1.0).abs() <= NORM_TOLERANCE {
            NormTag::Normalized
        } else {
            NormTag::Unnormalized
        };
        self
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, index: usize) -> C64 {
        self.amplitudes[index]
    }

    pub fn norm_tag(&self) -> NormTag {
        self.norm_tag
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Value of qubit `q` in basis index `index`.
    #[inline]
    pub fn bit(&self, index: usize, q: usize) -> usize {
        (index >> shift_of(self.num_qubits, q)) & 1
    }

    pub fn normalized(&self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if n2 < ZERO_OUTCOME_CUTOFF {
            return Err(Error::ZeroOutcome { probability: n2 });
        }
        let k = 1.0 / sqrt(n2);
        Ok(Self {
            num_qubits: self.num_qubits,
            amplitudes: self.amplitudes.iter().map(|a| a * k).collect(),
            norm_tag: NormTag::Normalized,
        })
    }

    pub fn scaled(&self, factor: C64) -> Self {
        Self {
            num_qubits: self.num_qubits,
            amplitudes: self.amplitudes.iter().map(|a| a * factor).collect(),
            norm_tag: NormTag::Unnormalized,
        }
        .retag()
    }

    /// `self + other`, both on the same register.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_shape(other)?;
        Ok(Self {
            num_qubits: self.num_qubits,
            amplitudes: self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a + b).collect(),
            norm_tag: NormTag::Unnormalized,
        }
        .retag())
    }

    /// Linear combination `Σ c_k s_k` of states on a common register.
    pub fn combination(terms: &[(C64, &PureState)]) -> Result<Self> {
        let first = terms.first().ok_or(Error::BadLength(0))?.1;
        let mut amps = vec![ZERO; first.dim()];
        for (k, s) in terms {
            first.check_shape(s)?;
            for (acc, a) in amps.iter_mut().zip(&s.amplitudes) {
                *acc += k * a;
            }
        }
        Ok(Self::unnormalized(amps)?.retag())
    }

    fn check_shape(&self, other: &Self) -> Result<()> {
        if self.num_qubits != other.num_qubits {
            return Err(Error::ShapeMismatch { left: self.num_qubits, right: other.num_qubits });
        }
        Ok(())
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        self.check_shape(other)?;
        Ok(self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum())
    }

    /// `self ⊗ other`; `self` occupies the leading qubits.
    pub fn tensor(&self, other: &Self) -> Self {
        let mut amplitudes = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.amplitudes {
            for b in &other.amplitudes {
                amplitudes.push(a * b);
            }
        }
        let norm_tag = if self.norm_tag == NormTag::Normalized && other.norm_tag == NormTag::Normalized {
            NormTag::Normalized
        } else {
            NormTag::Unnormalized
        };
        Self { num_qubits: self.num_qubits + other.num_qubits, amplitudes, norm_tag }
    }

    /// Reorder qubits: new qubit `k` is old qubit `order[k]`.
    pub fn permuted(&self, order: &[usize]) -> Result<Self> {
        let n = self.num_qubits;
        if order.len() != n {
            return Err(Error::ShapeMismatch { left: n, right: order.len() });
        }
        let mut seen = vec![false; n];
        for &o in order {
            if o >= n {
                return Err(Error::IndexOutOfRange { index: o, len: n });
            }
            if seen[o] {
                return Err(Error::IndexClash(o));
            }
            seen[o] = true;
        }
        let mut amplitudes = vec![ZERO; self.dim()];
        for (old, a) in self.amplitudes.iter().enumerate() {
            let mut new = 0usize;
            for (k, &o) in order.iter().enumerate() {
                new |= self.bit(old, o) << shift_of(n, k);
            }
            amplitudes[new] = *a;
        }
        Ok(Self { num_qubits: n, amplitudes, norm_tag: self.norm_tag })
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.num_qubits {
            return Err(Error::IndexOutOfRange { index: q, len: self.num_qubits });
        }
        Ok(())
    }

    pub fn apply_phase_edge_mut(&mut self, a: usize, b: usize, chi: f64) -> Result<()> {
        self.check_qubit(a)?;
        self.check_qubit(b)?;
        if a == b {
            return Err(Error::IndexClash(a));
        }
        let ph = expi(-chi);
        let mask = (1usize << shift_of(self.num_qubits, a)) | (1usize << shift_of(self.num_qubits, b));
        for (i, amp) in self.amplitudes.iter_mut().enumerate() {
            if i & mask == mask {
                *amp *= ph;
            }
        }
        Ok(())
    }

    /// Apply a 2×2 matrix to qubit `q` without any unitarity check.
    pub fn apply_matrix_mut(&mut self, q: usize, m: &Mat2) -> Result<()> {
        self.check_qubit(q)?;
        let s = 1usize << shift_of(self.num_qubits, q);
        for i in 0..self.dim() {
            if i & s == 0 {
                let (x0, x1) = (self.amplitudes[i], self.amplitudes[i | s]);
                let [y0, y1] = m.apply([x0, x1]);
                self.amplitudes[i] = y0;
                self.amplitudes[i | s] = y1;
            }
        }
        Ok(())
    }
}

/// Single-qubit unitary acting on one register position.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalGate {
    target: usize,
    matrix: Mat2,
}

impl LocalGate {
    pub fn new(target: usize, matrix: Mat2) -> Result<Self> {
        let deviation = matrix.unitarity_deviation();
        if !(deviation <= GATE_UNITARITY_TOLERANCE) {
            return Err(Error::NonUnitaryGate { deviation });
        }
        Ok(Self { target, matrix })
    }

    pub fn identity(target: usize) -> Self {
        Self { target, matrix: Mat2::identity() }
    }

    pub fn x(target: usize) -> Self {
        Self { target, matrix: Mat2::new(ZERO, ONE, ONE, ZERO) }
    }

    pub fn z(target: usize) -> Self {
        Self { target, matrix: Mat2::diag(ONE, -ONE) }
    }

    /// `e^{iθZ} = diag(e^{iθ}, e^{-iθ})`.
    pub fn z_rotation(target: usize, theta: f64) -> Self {
        Self { target, matrix: Mat2::diag(expi(theta), expi(-theta)) }
    }

    /// `e^{iφ|1⟩⟨1|} = diag(1, e^{iφ})`.
    pub fn phase_one(target: usize, phi: f64) -> Self {
        Self { target, matrix: Mat2::diag(ONE, expi(phi)) }
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn matrix(&self) -> &Mat2 {
        &self.matrix
    }

    pub fn retarget(self, target: usize) -> Self {
        Self { target, ..self }
    }
}

/// Projection onto the ket `α|0⟩ + β|1⟩` of one qubit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitProjection {
    target: usize,
    alpha: C64,
    beta: C64,
}

impl QubitProjection {
    pub fn from_ket(target: usize, alpha: C64, beta: C64) -> Result<Self> {
        let n2 = alpha.norm_sqr() + beta.norm_sqr();
        if !((n2 - 1.0).abs() <= NORM_TOLERANCE) {
            return Err(Error::NotNormalized { norm_sqr: n2 });
        }
        Ok(Self { target, alpha, beta })
    }

    /// From bra coefficients `A⟨0| + B⟨1|`, rescaled to unit norm.
    pub fn from_bra(target: usize, a: C64, b: C64) -> Result<Self> {
        let n = sqrt(a.norm_sqr() + b.norm_sqr());
        if !(n > 1e-300) || !n.is_finite() {
            return Err(Error::InvalidProjection);
        }
        Ok(Self { target, alpha: a.conj() / n, beta: b.conj() / n })
    }

    pub fn zero(target: usize) -> Self {
        Self { target, alpha: ONE, beta: ZERO }
    }

    pub fn one(target: usize) -> Self {
        Self { target, alpha: ZERO, beta: ONE }
    }

    pub fn target(&self) -> usize {
        self.target
    }

    pub fn ket(&self) -> (C64, C64) {
        (self.alpha, self.beta)
    }

    pub fn bra(&self) -> (C64, C64) {
        (self.alpha.conj(), self.beta.conj())
    }

    pub fn retarget(self, target: usize) -> Self {
        Self { target, ..self }
    }

    /// The orthogonal projection on the same qubit.
    pub fn complement(&self) -> Self {
        Self { target: self.target, alpha: -self.beta.conj(), beta: self.alpha.conj() }
    }
}

pub fn build_state(graph: &WeightedGraph) -> Result<PureState> {
    build_state_with_cap(graph, DEFAULT_QUBIT_CAP)
}

pub fn build_state_with_cap(graph: &WeightedGraph, cap: usize) -> Result<PureState> {
    let n = graph.num_vertices();
    if n > cap {
        return Err(Error::CapExceeded { requested: n, cap });
    }
    let mut s = PureState::plus(n);
    for e in graph.edges() {
        s.apply_phase_edge_mut(e.a, e.b, e.weight)?;
    }
    Ok(s)
}

/// Insert a fresh vertex at register position `new_qubit`, entangled with the
/// listed neighbours (indices refer to the enlarged register).
pub fn attach_vertex(state: &PureState, new_qubit: usize, neighbor_weights: &[(usize, f64)]) -> Result<PureState> {
    let n = state.num_qubits + 1;
    if new_qubit >= n {
        return Err(Error::IndexOutOfRange { index: new_qubit, len: n });
    }
    for &(q, _) in neighbor_weights {
        if q == new_qubit {
            return Err(Error::IndexClash(q));
        }
        if q >= n {
            return Err(Error::IndexOutOfRange { index: q, len: n });
        }
    }
    let h = 1.0 / core::f64::consts::SQRT_2;
    let mut amplitudes = vec![ZERO; 1 << n];
    for (j, a) in state.amplitudes.iter().enumerate() {
        let i0 = insert_bit(j, n, new_qubit, 0);
        let i1 = insert_bit(j, n, new_qubit, 1);
        let phase: f64 = neighbor_weights
            .iter()
            .filter(|(q, _)| (i1 >> shift_of(n, *q)) & 1 == 1)
            .map(|(_, chi)| chi)
            .sum();
        amplitudes[i0] = a * h;
        amplitudes[i1] = a * expi(-phase) * h;
    }
    Ok(PureState { num_qubits: n, amplitudes, norm_tag: state.norm_tag })
}

pub fn apply_phase_edge(state: &PureState, a: usize, b: usize, chi: f64) -> Result<PureState> {
    let mut s = state.clone();
    s.apply_phase_edge_mut(a, b, chi)?;
    Ok(s)
}

pub fn apply_local(state: &PureState, gate: &LocalGate) -> Result<PureState> {
    let deviation = gate.matrix.unitarity_deviation();
    if !(deviation <= GATE_UNITARITY_TOLERANCE) {
        return Err(Error::NonUnitaryGate { deviation });
    }
    let mut s = state.clone();
    s.apply_matrix_mut(gate.target, &gate.matrix)?;
    Ok(s)
}

pub fn apply_all(state: &PureState, gates: &[LocalGate]) -> Result<PureState> {
    let mut s = state.clone();
    for g in gates {
        s.apply_matrix_mut(g.target, &g.matrix)?;
    }
    Ok(s)
}

/// Contract qubit `q` with the bra `b0⟨0| + b1⟨1|`, leaving an unnormalized
/// state on the remaining qubits.
pub fn contract_qubit(state: &PureState, q: usize, b0: C64, b1: C64) -> Result<PureState> {
    state.check_qubit(q)?;
    let n = state.num_qubits;
    let m = n - 1;
    let amplitudes = (0..1usize << m)
        .map(|j| b0 * state.amplitudes[insert_bit(j, n, q, 0)] + b1 * state.amplitudes[insert_bit(j, n, q, 1)])
        .collect();
    Ok(PureState { num_qubits: m, amplitudes, norm_tag: NormTag::Unnormalized })
}

/// Projected, renormalized state and its probability.
#[derive(Clone, Debug, PartialEq)]
pub struct Projected {
    pub state: PureState,
    pub probability: f64,
}

pub fn project_qubit(state: &PureState, proj: &QubitProjection) -> Result<Projected> {
    let (b0, b1) = proj.bra();
    let raw = contract_qubit(state, proj.target, b0, b1)?;
    finish_projection(state, raw)
}

fn finish_projection(before: &PureState, raw: PureState) -> Result<Projected> {
    let probability = raw.norm_sqr() / before.norm_sqr();
    if !(probability >= ZERO_OUTCOME_CUTOFF) {
        return Err(Error::ZeroOutcome { probability });
    }
    Ok(Projected { state: raw.normalized()?, probability })
}

/// Project qubits `q1, q2` with the bra `Σ bra[2x+y] ⟨x|_{q1}⟨y|_{q2}`;
/// the bra is normalized first.
pub fn project_two_qubits(state: &PureState, q1: usize, q2: usize, bra: [C64; 4]) -> Result<Projected> {
    state.check_qubit(q1)?;
    state.check_qubit(q2)?;
    if q1 == q2 {
        return Err(Error::IndexClash(q1));
    }
    let nb = sqrt(bra.iter().map(|x| x.norm_sqr()).sum::<f64>());
    if !(nb > 1e-300) {
        return Err(Error::InvalidProjection);
    }
    let n = state.num_qubits;
    let (lo, hi) = if q1 < q2 { (q1, q2) } else { (q2, q1) };
    let amplitudes = (0..1usize << (n - 2))
        .map(|j| {
            let mut acc = ZERO;
            for x in 0..2 {
                for y in 0..2 {
                    let (blo, bhi) = if q1 < q2 { (x, y) } else { (y, x) };
                    let idx = insert_bit(insert_bit(j, n - 1, lo, blo), n, hi, bhi);
                    acc += bra[2 * x + y] * state.amplitudes[idx];
                }
            }
            acc / nb
        })
        .collect();
    let raw = PureState { num_qubits: n - 2, amplitudes, norm_tag: NormTag::Unnormalized };
    finish_projection(state, raw)
}

/// Unnormalized components `(⟨0|_q ψ, ⟨1|_q ψ)`.
pub fn split_on_qubit(state: &PureState, q: usize) -> Result<(PureState, PureState)> {
    Ok((contract_qubit(state, q, ONE, ZERO)?, contract_qubit(state, q, ZERO, ONE)?))
}

/// `|⟨s1|s2⟩| / (‖s1‖‖s2‖)`.
pub fn fidelity_up_to_global_phase(s1: &PureState, s2: &PureState) -> Result<f64> {
    let ov = s1.inner(s2)?.norm();
    let d = sqrt(s1.norm_sqr() * s2.norm_sqr());
    if d == 0.0 {
        return Ok(0.0);
    }
    Ok((ov / d).min(1.0))
}

pub fn equal_up_to_prescribed_corrections(candidate: &PureState, target: &PureState, corrections: &[LocalGate]) -> bool {
    match apply_all(candidate, corrections).and_then(|s| fidelity_up_to_global_phase(&s, target)) {
        Ok(f) => f >= 1.0 - EQUALITY_SLACK,
        Err(_) => false,
    }
}

/// Copy the computational value of `source` onto a fresh qubit inserted at
/// `position` (a CNOT onto `|0⟩`). `source` indexes the enlarged register.
pub fn duplicate_qubit(state: &PureState, source: usize, position: usize) -> Result<PureState> {
    let n = state.num_qubits + 1;
    if position >= n {
        return Err(Error::IndexOutOfRange { index: position, len: n });
    }
    if source >= n {
        return Err(Error::IndexOutOfRange { index: source, len: n });
    }
    if source == position {
        return Err(Error::IndexClash(source));
    }
    let mut amplitudes = vec![ZERO; 1 << n];
    for (j, a) in state.amplitudes.iter().enumerate() {
        let i0 = insert_bit(j, n, position, 0);
        let src = (i0 >> shift_of(n, source)) & 1;
        amplitudes[insert_bit(j, n, position, src)] = *a;
    }
    Ok(PureState { num_qubits: n, amplitudes, norm_tag: state.norm_tag })
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::{FRAC_1_SQRT_2, PI};

    fn close(a: C64, b: C64) -> bool {
        (a - b).norm() < 1e-14
    }

    #[test]
    fn insert_bit_positions() {
        // n = 3, insert at qubit 1 (middle)
        assert_eq!(insert_bit(0b11, 3, 1, 0), 0b101);
        assert_eq!(insert_bit(0b11, 3, 1, 1), 0b111);
        assert_eq!(insert_bit(0b01, 3, 0, 1), 0b101);
        assert_eq!(insert_bit(0b01, 3, 2, 0), 0b010);
    }

    #[test]
    fn single_vertex_is_plus() {
        let g = WeightedGraph::with_vertices(&["v"]).unwrap();
        let s = build_state(&g).unwrap();
        assert!(close(s.amplitude(0), c(FRAC_1_SQRT_2, 0.0)));
        assert!(close(s.amplitude(1), c(FRAC_1_SQRT_2, 0.0)));
        assert_eq!(s.norm_tag(), NormTag::Normalized);
    }

    #[test]
    fn cz_edge_amplitudes() {
        let g = WeightedGraph::path(&["a", "b"], &[PI]).unwrap();
        let s = build_state(&g).unwrap();
        let want = [0.5, 0.5, 0.5, -0.5];
        for (i, w) in want.iter().enumerate() {
            assert!(close(s.amplitude(i), c(*w, 0.0)));
        }
    }

    #[test]
    fn cap_is_enforced() {
        let labels: Vec<alloc::string::String> = (0..5).map(|i| alloc::format!("v{i}")).collect();
        let g = WeightedGraph::with_vertices(&labels).unwrap();
        assert_eq!(build_state_with_cap(&g, 4), Err(Error::CapExceeded { requested: 5, cap: 4 }));
    }

    #[test]
    fn attach_to_empty_gives_plus() {
        let s = attach_vertex(&PureState::empty(), 0, &[]).unwrap();
        assert_eq!(s, PureState::plus(1));
    }

    #[test]
    fn attach_rejects_clash() {
        let s = PureState::plus(2);
        assert_eq!(attach_vertex(&s, 1, &[(1, 0.3)]), Err(Error::IndexClash(1)));
    }

    #[test]
    fn phase_edge_inverse_pair() {
        let s = PureState::plus(3);
        let t = apply_phase_edge(&apply_phase_edge(&s, 0, 2, 0.77).unwrap(), 0, 2, -0.77).unwrap();
        for (a, b) in s.amplitudes().iter().zip(t.amplitudes()) {
            assert!((a - b).norm() < 1e-15);
        }
        let zero = apply_phase_edge(&s, 1, 2, 0.0).unwrap();
        assert_eq!(zero, s);
    }

    #[test]
    fn x_and_rotations() {
        let s = PureState::basis(1, 0).unwrap();
        let t = apply_local(&s, &LocalGate::x(0)).unwrap();
        assert_eq!(t, PureState::basis(1, 1).unwrap());
        let p = PureState::plus(2);
        let r = apply_all(&p, &[LocalGate::z_rotation(1, 0.4), LocalGate::z_rotation(1, -0.4)]).unwrap();
        assert!(fidelity_up_to_global_phase(&p, &r).unwrap() > 1.0 - 1e-15);
        let bad = Mat2::new(ONE, ONE, ZERO, ONE);
        assert!(matches!(LocalGate::new(0, bad), Err(Error::NonUnitaryGate { .. })));
    }

    #[test]
    fn project_plus_onto_zero() {
        let p = project_qubit(&PureState::plus(1), &QubitProjection::zero(0)).unwrap();
        assert!((p.probability - 0.5).abs() < 1e-15);
        assert_eq!(p.state.num_qubits(), 0);
        let z = project_qubit(&PureState::basis(1, 0).unwrap(), &QubitProjection::one(0));
        assert!(matches!(z, Err(Error::ZeroOutcome { .. })));
    }

    #[test]
    fn bra_convention_conjugates() {
        let p = QubitProjection::from_bra(0, c(0.0, 1.0), c(1.0, 0.0)).unwrap();
        let (a, b) = p.ket();
        assert!(close(a, c(0.0, -FRAC_1_SQRT_2)));
        assert!(close(b, c(FRAC_1_SQRT_2, 0.0)));
        assert!(close(p.complement().bra().0 * a + p.complement().bra().1 * b, ZERO));
    }

    #[test]
    fn two_qubit_projection_matches_sequential() {
        let g = WeightedGraph::path(&["a", "b", "c", "d"], &[0.4, 1.3, -2.0]).unwrap();
        let s = build_state(&g).unwrap();
        // ⟨1|_3 ⟨0|_1 as a product bra; q1 = 3, q2 = 1
        let p = project_two_qubits(&s, 3, 1, [ZERO, ZERO, ONE, ZERO]).unwrap();
        let a = project_qubit(&s, &QubitProjection::one(3)).unwrap();
        let b = project_qubit(&a.state, &QubitProjection::zero(1)).unwrap();
        assert!((p.probability - a.probability * b.probability).abs() < 1e-14);
        assert!(fidelity_up_to_global_phase(&p.state, &b.state).unwrap() > 1.0 - 1e-14);
    }

    #[test]
    fn permutation_roundtrip() {
        let g = WeightedGraph::path(&["a", "b", "c"], &[0.4, 1.3]).unwrap();
        let s = build_state(&g).unwrap();
        let p = s.permuted(&[2, 0, 1]).unwrap();
        assert_eq!(p.amplitude(0b100), s.amplitude(0b001));
        let back = p.permuted(&[1, 2, 0]).unwrap();
        assert_eq!(back, s);
        assert_eq!(s.permuted(&[0, 0, 1]), Err(Error::IndexClash(0)));
    }

    #[test]
    fn duplicate_qubit_copies_value() {
        let s = PureState::plus(1);
        let d = duplicate_qubit(&s, 0, 1).unwrap();
        assert!(close(d.amplitude(0b00), c(FRAC_1_SQRT_2, 0.0)));
        assert!(close(d.amplitude(0b11), c(FRAC_1_SQRT_2, 0.0)));
        assert!(close(d.amplitude(0b01), ZERO));
    }

    #[test]
    fn fidelity_basics() {
        let z0 = PureState::basis(1, 0).unwrap();
        let z1 = PureState::basis(1, 1).unwrap();
        assert_eq!(fidelity_up_to_global_phase(&z0, &z1).unwrap(), 0.0);
        let s = PureState::plus(2);
        let t = s.scaled(expi(1.1));
        assert!((fidelity_up_to_global_phase(&s, &t).unwrap() - 1.0).abs() < 1e-15);
        assert!(matches!(fidelity_up_to_global_phase(&s, &z0), Err(Error::ShapeMismatch { .. })));
    }
}
