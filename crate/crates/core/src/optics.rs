//! Two photons in dual-rail encoding pushed through a linear-optical network.
//!
//! Input modes are `a_H, a_V, b_H, b_V` (rows 0..4) followed by vacuum
//! ancillas. A `ModeUnitary` maps creation operators as
//! `in_r† → Σ_k U[r][k] out_k†`, so rows are inputs and columns detectors.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::FRAC_1_SQRT_2;

use crate::error::{Error, Result};
use crate::math::{c, sqrt, Mat2, C64, ONE, ZERO};
use crate::state::{fidelity_up_to_global_phase, PureState, ZERO_OUTCOME_CUTOFF};

pub const UNITARY_TOLERANCE: f64 = 1e-10;
pub const CONTEXT_TOLERANCE: f64 = 1e-10;
/// Non-relevant outcomes must have `|det M|` below this.
pub const RANK_ONE_TOLERANCE: f64 = 1e-12;

#[derive(Clone, Debug, PartialEq)]
pub struct ModeUnitary {
    n: usize,
    m: Vec<C64>,
}

impl ModeUnitary {
    /// Row-major `n × n` entries; `n ≥ 4` and unitary within tolerance.
    pub fn new(n: usize, entries: Vec<C64>) -> Result<Self> {
        if n < 4 {
            return Err(Error::TooFewModes { min: 4, got: n });
        }
        if entries.len() != n * n {
            return Err(Error::BadLength(entries.len()));
        }
        if entries.iter().any(|x| !x.re.is_finite() || !x.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let u = Self { n, m: entries };
        let deviation = u.unitarity_deviation();
        if !(deviation <= UNITARY_TOLERANCE) {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(u)
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::BadLength(rows.iter().map(|r| r.len()).sum()));
        }
        Self::new(n, rows.iter().flatten().copied().collect())
    }

    pub fn identity(n: usize) -> Result<Self> {
        let mut m = vec![ZERO; n * n];
        for i in 0..n {
            m[i * n + i] = ONE;
        }
        Self::new(n, m)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.m[row * self.n + col]
    }

    pub fn entries(&self) -> &[C64] {
        &self.m
    }

    /// Largest entry of `|U U† - 1|`.
    pub fn unitarity_deviation(&self) -> f64 {
        let n = self.n;
        let mut dev = 0.0f64;
        for r in 0..n {
            for s in 0..n {
                let mut acc = ZERO;
                for k in 0..n {
                    acc += self.m[r * n + k] * self.m[s * n + k].conj();
                }
                let target = if r == s { ONE } else { ZERO };
                dev = dev.max((acc - target).norm());
            }
        }
        dev
    }

    /// Same network padded with idle vacuum modes up to size `n`.
    pub fn padded(&self, n: usize) -> Result<Self> {
        if n < self.n {
            return Err(Error::TooFewModes { min: self.n, got: n });
        }
        let mut m = vec![ZERO; n * n];
        for r in 0..n {
            for k in 0..n {
                m[r * n + k] = if r < self.n && k < self.n {
                    self.entry(r, k)
                } else if r == k {
                    ONE
                } else {
                    ZERO
                };
            }
        }
        Self::new(n, m)
    }
}

/// Type-I fusion: a PBS sends `a_H` and `b_V` to `c`, the rest through a 45°
/// rotation into `d`. Columns are `c_H, c_V, d_H, d_V`.
pub fn type_i_matrix() -> ModeUnitary {
    let h = c(FRAC_1_SQRT_2, 0.0);
    let rows = [
        [ONE, ZERO, ZERO, ZERO],
        [ZERO, ZERO, h, -h],
        [ZERO, ZERO, h, h],
        [ZERO, ONE, ZERO, ZERO],
    ];
    ModeUnitary::new(4, rows.iter().flatten().copied().collect()).expect("static matrix")
}

/// Type-II fusion through a diagonal PBS with detection in the H/V basis of
/// both outputs. Columns are `1H, 1V, 2H, 2V`.
pub fn type_ii_matrix() -> ModeUnitary {
    let p = c(0.5, 0.0);
    let rows = [[p, p, p, -p], [p, p, -p, p], [p, -p, p, p], [-p, p, p, p]];
    ModeUnitary::new(4, rows.iter().flatten().copied().collect()).expect("static matrix")
}

/// Register components riding on the four input rails, without any
/// orthogonality assumption. The photonic input is
/// `(g0 a_H† + g1 a_V†)(g2 b_H† + g3 b_V†)|0⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct TwoPhotonInput {
    rails: [PureState; 4],
}

impl TwoPhotonInput {
    pub fn new(g0: PureState, g1: PureState, g2: PureState, g3: PureState) -> Result<Self> {
        if g0.num_qubits() != g1.num_qubits() {
            return Err(Error::ShapeMismatch { left: g0.num_qubits(), right: g1.num_qubits() });
        }
        if g2.num_qubits() != g3.num_qubits() {
            return Err(Error::ShapeMismatch { left: g2.num_qubits(), right: g3.num_qubits() });
        }
        let t = Self { rails: [g0, g1, g2, g3] };
        if !(t.norm_sqr() > ZERO_OUTCOME_CUTOFF) {
            return Err(Error::InvalidContext("input carries no amplitude"));
        }
        Ok(t)
    }

    pub fn rails(&self) -> &[PureState; 4] {
        &self.rails
    }

    fn norm_sqr(&self) -> f64 {
        (self.rails[0].norm_sqr() + self.rails[1].norm_sqr()) * (self.rails[2].norm_sqr() + self.rails[3].norm_sqr())
    }

    fn products(&self) -> [[PureState; 2]; 2] {
        let r = &self.rails;
        [[r[0].tensor(&r[2]), r[0].tensor(&r[3])], [r[1].tensor(&r[2]), r[1].tensor(&r[3])]]
    }
}

/// Fock amplitude of detector pattern `(k, l)`, `k ≤ l`, for photons entering
/// on rows `s` and `t`; doubly occupied modes carry the bosonic `√2`.
#[inline]
fn pair_amplitude(u: &ModeUnitary, s: usize, t: usize, k: usize, l: usize) -> C64 {
    if k == l {
        u.entry(s, k) * u.entry(t, k) * core::f64::consts::SQRT_2
    } else {
        u.entry(s, k) * u.entry(t, l) + u.entry(s, l) * u.entry(t, k)
    }
}

/// Unnormalized register attached to each two-photon detector pattern.
fn dense_patterns(input: &TwoPhotonInput, u: &ModeUnitary) -> Vec<((usize, usize), [[C64; 2]; 2], PureState)> {
    let prods = input.products();
    let n = u.size();
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    for k in 0..n {
        for l in k..n {
            let mut amp = [[ZERO; 2]; 2];
            for s in 0..2 {
                for t in 0..2 {
                    amp[s][t] = pair_amplitude(u, s, 2 + t, k, l);
                }
            }
            let terms = [
                (amp[0][0], &prods[0][0]),
                (amp[0][1], &prods[0][1]),
                (amp[1][0], &prods[1][0]),
                (amp[1][1], &prods[1][1]),
            ];
            let reg = PureState::combination(&terms).expect("common register");
            out.push(((k, l), amp, reg));
        }
    }
    out
}

/// Inner products of the four register states entering a fusion. The left
/// pair is orthogonal with equal norms, the right pair has equal norms and
/// overlap `z = ⟨f4|f3⟩`. All four are stored normalized.
#[derive(Clone, Debug, PartialEq)]
pub struct FusionContext {
    f: [PureState; 4],
    z: C64,
}

impl FusionContext {
    pub fn new(f1: PureState, f2: PureState, f3: PureState, f4: PureState) -> Result<Self> {
        if f1.num_qubits() != f2.num_qubits() || f3.num_qubits() != f4.num_qubits() {
            return Err(Error::InvalidContext("register sizes differ within a side"));
        }
        let (n1, n2, n3, n4) = (f1.norm_sqr(), f2.norm_sqr(), f3.norm_sqr(), f4.norm_sqr());
        if n1.min(n2).min(n3).min(n4) < ZERO_OUTCOME_CUTOFF {
            return Err(Error::InvalidContext("vanishing f-state"));
        }
        if (sqrt(n1) - sqrt(n2)).abs() > CONTEXT_TOLERANCE * sqrt(n1) {
            return Err(Error::InvalidContext("‖f1‖ ≠ ‖f2‖"));
        }
        if (sqrt(n3) - sqrt(n4)).abs() > CONTEXT_TOLERANCE * sqrt(n3) {
            return Err(Error::InvalidContext("‖f3‖ ≠ ‖f4‖"));
        }
        let f = [f1.normalized()?, f2.normalized()?, f3.normalized()?, f4.normalized()?];
        if f[0].inner(&f[1])?.norm() > CONTEXT_TOLERANCE {
            return Err(Error::InvalidContext("⟨f1|f2⟩ ≠ 0"));
        }
        let z = f[3].inner(&f[2])?;
        Ok(Self { f, z })
    }

    /// As [`FusionContext::new`], additionally checking the overlap against an
    /// independently computed value.
    pub fn with_expected_z(f1: PureState, f2: PureState, f3: PureState, f4: PureState, z: C64) -> Result<Self> {
        let ctx = Self::new(f1, f2, f3, f4)?;
        if (ctx.z - z).norm() > CONTEXT_TOLERANCE {
            return Err(Error::InvalidContext("⟨f4|f3⟩ disagrees with the expected overlap"));
        }
        Ok(ctx)
    }

    /// Minimal one-qubit-per-side context with the prescribed overlap `z`,
    /// `|z| ≤ 1`.
    pub fn synthetic(z: C64) -> Result<Self> {
        let r = z.norm();
        if !(r <= 1.0 + 1e-15) {
            return Err(Error::InvalidContext("|z| > 1"));
        }
        let f1 = PureState::basis(1, 0)?;
        let f2 = PureState::basis(1, 1)?;
        let f3 = PureState::basis(1, 0)?;
        let f4 = PureState::from_amplitudes(vec![z.conj(), c(sqrt((1.0 - r * r).max(0.0)), 0.0)])?;
        Self::new(f1, f2, f3, f4)
    }

    pub fn z(&self) -> C64 {
        self.z
    }

    /// `f_k` for `k = 1..=4`.
    pub fn f(&self, k: usize) -> &PureState {
        &self.f[k - 1]
    }

    pub fn left_qubits(&self) -> usize {
        self.f[0].num_qubits()
    }

    pub fn right_qubits(&self) -> usize {
        self.f[2].num_qubits()
    }

    /// Photonic input `½(f1 a_H† + f2 a_V†)(f3 b_H† + f4 b_V†)`.
    pub fn photonic_input(&self) -> TwoPhotonInput {
        let h = c(FRAC_1_SQRT_2, 0.0);
        TwoPhotonInput {
            rails: [self.f[0].scaled(h), self.f[1].scaled(h), self.f[2].scaled(h), self.f[3].scaled(h)],
        }
    }

    fn expand(&self, m: &Mat2) -> PureState {
        let l = [&self.f[0], &self.f[1]];
        let r = [&self.f[2], &self.f[3]];
        let mut amps = vec![ZERO; l[0].dim() * r[0].dim()];
        for s in 0..2 {
            for t in 0..2 {
                let coef = m.at(s, t);
                if coef == ZERO {
                    continue;
                }
                let mut idx = 0;
                for x in l[s].amplitudes() {
                    for y in r[t].amplitudes() {
                        amps[idx] += coef * x * y;
                        idx += 1;
                    }
                }
            }
        }
        PureState::unnormalized(amps).expect("power of two")
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OutcomeKind {
    /// Photons in two different detectors; the register may stay entangled.
    Relevant,
    /// Both photons in one detector; the register is left in a product state.
    NonRelevant,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FusionOutcome {
    pub pattern: (usize, usize),
    pub probability: f64,
    /// `None` when the pattern is impossible (probability below cutoff).
    pub register_state: Option<PureState>,
    pub kind: OutcomeKind,
    /// Coefficients of the register over `f_{1,2} ⊗ f_{3,4}`, normalized so
    /// that the expanded state has unit norm.
    pub m_matrix: Mat2,
}

impl FusionOutcome {
    /// Raw coefficient matrix `[[a, b], [c, d]]` of the pattern.
    pub fn coefficients(u: &ModeUnitary, i: usize, j: usize) -> Mat2 {
        if i == j {
            let (x0, x1, y0, y1) = (u.entry(0, i), u.entry(1, i), u.entry(2, i), u.entry(3, i));
            Mat2::new(x0 * y0, x0 * y1, x1 * y0, x1 * y1)
        } else {
            let f = |s: usize, t: usize| u.entry(s, i) * u.entry(t, j) + u.entry(s, j) * u.entry(t, i);
            Mat2::new(f(0, 2), f(0, 3), f(1, 2), f(1, 3))
        }
    }
}

/// Squared norm `N²` of the register left by pattern `(i, j)` given overlap `z`.
pub fn pattern_norm_sqr(u: &ModeUnitary, i: usize, j: usize, z: C64) -> f64 {
    if i == j {
        let (x0, x1, y0, y1) = (u.entry(0, i), u.entry(1, i), u.entry(2, i), u.entry(3, i));
        (x0.norm_sqr() + x1.norm_sqr()) * (y0.norm_sqr() + y1.norm_sqr() + 2.0 * (z * y0 * y1.conj()).re)
    } else {
        let m = FusionOutcome::coefficients(u, i, j);
        let (a, b, cc, d) = (m.at(0, 0), m.at(0, 1), m.at(1, 0), m.at(1, 1));
        a.norm_sqr() + b.norm_sqr() + 2.0 * (z * a * b.conj()).re + cc.norm_sqr() + d.norm_sqr()
            + 2.0 * (z * cc * d.conj()).re
    }
}

/// Probability of pattern `(i, j)`: `N²/4` for distinct detectors, `N²/2`
/// for a doubly occupied one.
pub fn pattern_probability(u: &ModeUnitary, i: usize, j: usize, z: C64) -> f64 {
    let n2 = pattern_norm_sqr(u, i, j, z);
    if i == j {
        n2 / 2.0
    } else {
        n2 / 4.0
    }
}

/// All `N(N+1)/2` detector patterns from the closed-form coefficients.
pub fn enumerate_outcomes(ctx: &FusionContext, u: &ModeUnitary) -> Vec<FusionOutcome> {
    let n = u.size();
    let mut out = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i..n {
            let raw = FusionOutcome::coefficients(u, i, j);
            let n2 = pattern_norm_sqr(u, i, j, ctx.z);
            let probability = pattern_probability(u, i, j, ctx.z).max(0.0);
            let kind = if i == j { OutcomeKind::NonRelevant } else { OutcomeKind::Relevant };
            let (register_state, m_matrix) = if probability >= ZERO_OUTCOME_CUTOFF {
                let m = raw.scale(C64::from(1.0 / sqrt(n2)));
                (Some(ctx.expand(&m)), m)
            } else {
                (None, raw)
            };
            out.push(FusionOutcome { pattern: (i, j), probability, register_state, kind, m_matrix });
        }
    }
    out
}

/// Brute-force counterpart of [`enumerate_outcomes`]: expands the two-photon
/// Fock state against the register and reads probabilities off the norms.
pub fn oracle_enumerate(ctx: &FusionContext, u: &ModeUnitary) -> Vec<FusionOutcome> {
    let input = ctx.photonic_input();
    let total = input.norm_sqr();
    dense_patterns(&input, u)
        .into_iter()
        .map(|((k, l), amp, reg)| {
            let probability = reg.norm_sqr() / total;
            let kind = if k == l { OutcomeKind::NonRelevant } else { OutcomeKind::Relevant };
            // Rails carry f/√2, so each term enters with a factor ½.
            let raw = Mat2::new(amp[0][0], amp[0][1], amp[1][0], amp[1][1]).scale(C64::from(0.5));
            let (register_state, m_matrix) = if probability >= ZERO_OUTCOME_CUTOFF {
                let m = raw.scale(C64::from(1.0 / sqrt(reg.norm_sqr())));
                (reg.normalized().ok(), m)
            } else {
                (None, raw)
            };
            FusionOutcome { pattern: (k, l), probability, register_state, kind, m_matrix }
        })
        .collect()
}

/// Largest probability or state discrepancy between two outcome lists for the
/// same patterns. States are compared up to global phase.
pub fn outcome_discrepancy(a: &[FusionOutcome], b: &[FusionOutcome]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    let mut worst = 0.0f64;
    for (x, y) in a.iter().zip(b) {
        if x.pattern != y.pattern || x.kind != y.kind {
            return f64::INFINITY;
        }
        worst = worst.max((x.probability - y.probability).abs());
        match (&x.register_state, &y.register_state) {
            (Some(s), Some(t)) => {
                let f = fidelity_up_to_global_phase(s, t).unwrap_or(0.0);
                worst = worst.max(1.0 - f);
            }
            (None, None) => {}
            _ => worst = worst.max(x.probability.max(y.probability)),
        }
    }
    worst
}

/// Photons left in the unmeasured modes and the register they come with.
#[derive(Clone, Debug, PartialEq)]
pub struct ResidualBranch {
    /// Unmeasured modes holding a photon, with repetition for double occupancy.
    pub occupied: Vec<usize>,
    /// Register amplitude of this branch, unnormalized; branch weights sum to
    /// the outcome probability.
    pub register: PureState,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PartialOutcome {
    /// Photon count on each measured mode, in the order given.
    pub counts: Vec<u8>,
    pub probability: f64,
    pub branches: Vec<ResidualBranch>,
}

/// Photon counting on a subset of the output modes. Patterns are grouped by
/// the counts on `measured`; the remaining modes stay coherent.
pub fn enumerate_partial(input: &TwoPhotonInput, u: &ModeUnitary, measured: &[usize]) -> Result<Vec<PartialOutcome>> {
    for &m in measured {
        if m >= u.size() {
            return Err(Error::IndexOutOfRange { index: m, len: u.size() });
        }
    }
    let scale = 1.0 / sqrt(input.norm_sqr());
    let mut groups: BTreeMap<Vec<u8>, Vec<ResidualBranch>> = BTreeMap::new();
    for ((k, l), _, reg) in dense_patterns(input, u) {
        let mut counts = vec![0u8; measured.len()];
        let mut occupied = Vec::new();
        for mode in [k, l] {
            match measured.iter().position(|&m| m == mode) {
                Some(p) => counts[p] += 1,
                None => occupied.push(mode),
            }
        }
        groups
            .entry(counts)
            .or_default()
            .push(ResidualBranch { occupied, register: reg.scaled(C64::from(scale)) });
    }
    Ok(groups
        .into_iter()
        .map(|(counts, branches)| {
            let probability = branches.iter().map(|b| b.register.norm_sqr()).sum();
            PartialOutcome { counts, probability, branches }
        })
        .collect())
}
