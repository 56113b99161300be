//! Seeded random ensembles: weights, chains, Haar networks and the network
//! families used by the verification suite.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use num_complex::Complex64 as C64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;
use wgs_core::optics::ModeUnitary;
use wgs_core::protocols::{ChainState, LogicalPair};
use wgs_core::WeightedGraph;

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Uniform weight in `(-π, π)` at least `0.05` away from zero.
pub fn weight(rng: &mut impl Rng) -> f64 {
    loop {
        let w = rng.random_range(-PI..PI);
        if w.abs() > 0.05 {
            return w;
        }
    }
}

pub fn labels(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|i| format!("{prefix}{i}")).collect()
}

/// Path `prefix0 – … – prefix{n-1}` with random weights.
pub fn chain(rng: &mut impl Rng, prefix: &str, n: usize) -> WeightedGraph {
    let w: Vec<f64> = (1..n).map(|_| weight(rng)).collect();
    WeightedGraph::path(&labels(prefix, n), &w).expect("distinct labels, nonzero weights")
}

/// Path `prefix0 – prefixL` whose end `prefixL` is doubled onto `prefixp`.
pub fn logical_end(rng: &mut impl Rng, prefix: &str) -> ChainState {
    let names = [format!("{prefix}0"), format!("{prefix}L")];
    let g = WeightedGraph::path(&names, &[weight(rng)]).expect("two labels");
    ChainState::with_logical_pairs(g, vec![LogicalPair::new(&format!("{prefix}p"), &names[1])]).expect("valid pair")
}

pub fn gaussian(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Extend orthonormal `rows` to `n` orthonormal rows by Gram–Schmidt on
/// Gaussian vectors.
pub fn complete_rows(rng: &mut impl Rng, mut rows: Vec<Vec<C64>>, n: usize) -> Vec<Vec<C64>> {
    while rows.len() < n {
        let mut v: Vec<C64> = (0..n).map(|_| gaussian(rng)).collect();
        // Two passes keep the rows orthogonal to machine precision.
        for _ in 0..2 {
            for r in &rows {
                let ov: C64 = r.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
                for (x, y) in v.iter_mut().zip(r) {
                    *x -= ov * y;
                }
            }
        }
        let nv = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if nv > 1e-6 {
            rows.push(v.into_iter().map(|x| x / nv).collect());
        }
    }
    rows
}

pub fn haar_rows(rng: &mut impl Rng, n: usize) -> Vec<Vec<C64>> {
    complete_rows(rng, Vec::new(), n)
}

/// Haar-random network on `n ≥ 4` modes.
pub fn haar(rng: &mut impl Rng, n: usize) -> ModeUnitary {
    ModeUnitary::from_rows(&haar_rows(rng, n)).expect("orthonormal rows")
}

type M2 = [[C64; 2]; 2];

fn haar2(rng: &mut impl Rng) -> M2 {
    let r = haar_rows(rng, 2);
    [[r[0][0], r[0][1]], [r[1][0], r[1][1]]]
}

fn mul2(a: &M2, b: &M2) -> M2 {
    let mut m = [[C64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    m
}

/// Shuffle columns and multiply each by a random phase.
fn scramble_columns(rng: &mut impl Rng, rows: Vec<Vec<C64>>) -> Vec<Vec<C64>> {
    let n = rows[0].len();
    let mut perm: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        perm.swap(i, rng.random_range(0..=i));
    }
    let phases: Vec<C64> = (0..n).map(|_| C64::from_polar(1.0, rng.random_range(-PI..PI))).collect();
    rows.iter().map(|r| (0..n).map(|k| r[perm[k]] * phases[k]).collect()).collect()
}

/// 4×4 network with `|U_{aH,i}|² + |U_{aV,i}|² = 1/2` in every column, built
/// as `(1/√2)[[X, XY], [Z, −ZY]]` from Haar 2×2 blocks.
pub fn balanced(rng: &mut impl Rng) -> ModeUnitary {
    let (x, y, z) = (haar2(rng), haar2(rng), haar2(rng));
    let (xy, zy) = (mul2(&x, &y), mul2(&z, &y));
    let h = FRAC_1_SQRT_2;
    let mut rows = vec![vec![C64::new(0.0, 0.0); 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            rows[i][j] = x[i][j] * h;
            rows[i][2 + j] = xy[i][j] * h;
            rows[2 + i][j] = z[i][j] * h;
            rows[2 + i][2 + j] = -zy[i][j] * h;
        }
    }
    ModeUnitary::from_rows(&scramble_columns(rng, rows)).expect("unitary by construction")
}

/// A balanced network embedded among `n ≥ 4` modes, with the vacuum columns
/// mixed into random positions.
pub fn balanced_padded(rng: &mut impl Rng, n: usize) -> ModeUnitary {
    let u = balanced(rng).padded(n).expect("n ≥ 4");
    let rows: Vec<Vec<C64>> = (0..n).map(|i| (0..n).map(|j| u.entry(i, j)).collect()).collect();
    ModeUnitary::from_rows(&scramble_columns(rng, rows)).expect("unitary by construction")
}

/// Network meeting the no-good-failure premise: on the `s` columns that both
/// photons reach, the `b` rows equal `c·v_i` for a fixed phase profile `v`,
/// while the `a` rows there are orthogonal to `v`. Two further columns see
/// only `a`, two only `b`, and `ancillas` extra modes complete the unitary.
pub fn constrained(rng: &mut impl Rng, s: usize, ancillas: usize) -> ModeUnitary {
    let n = s + 4 + ancillas;
    let v: Vec<C64> = (0..s).map(|_| C64::from_polar(1.0 / (s as f64).sqrt(), rng.random_range(-PI..PI))).collect();
    let mut w: Vec<C64> = (0..s).map(|_| gaussian(rng)).collect();
    let ov: C64 = v.iter().zip(&w).map(|(x, y)| x.conj() * y).sum();
    for (x, y) in w.iter_mut().zip(&v) {
        *x -= ov * y;
    }
    let nw = w.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    w.iter_mut().for_each(|x| *x /= nw);
    let ga = haar_rows(rng, 3);
    let gb = haar_rows(rng, 3);
    let mut rows = vec![vec![C64::new(0.0, 0.0); n]; 4];
    for r in 0..2 {
        for i in 0..s {
            rows[r][i] = ga[r][0] * w[i];
            rows[2 + r][i] = gb[r][0] * v[i];
        }
        rows[r][s] = ga[r][1];
        rows[r][s + 1] = ga[r][2];
        rows[2 + r][s + 2] = gb[r][1];
        rows[2 + r][s + 3] = gb[r][2];
    }
    ModeUnitary::from_rows(&complete_rows(rng, rows, n)).expect("unitary by construction")
}
