#![allow(dead_code)]

use num_complex::Complex64 as C64;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rand_distr::StandardNormal;
use std::f64::consts::PI;
use wgs_core::optics::ModeUnitary;
use wgs_core::protocols::{ChainState, LogicalPair};
use wgs_core::{PureState, WeightedGraph};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

/// Uniform nonzero weight in (−π, π], kept away from 0.
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

pub fn random_chain(rng: &mut impl Rng, prefix: &str, n: usize) -> WeightedGraph {
    let w: Vec<f64> = (1..n).map(|_| weight(rng)).collect();
    WeightedGraph::path(&labels(prefix, n), &w).unwrap()
}

pub fn random_graph(rng: &mut impl Rng, n: usize, density: f64) -> WeightedGraph {
    let mut g = WeightedGraph::with_vertices(&labels("v", n)).unwrap();
    for a in 0..n {
        for b in a + 1..n {
            if rng.random::<f64>() < density {
                g.add_edge(a, b, weight(rng)).unwrap();
            }
        }
    }
    g
}

/// Chain `g – L` (plus optional extra neighbours) where `L` is a logical pair
/// `(prefix"p", prefix"L")`.
pub fn logical_end(rng: &mut impl Rng, prefix: &str, len: usize) -> ChainState {
    let mut names = labels(prefix, len - 1);
    names.push(format!("{prefix}L"));
    let w: Vec<f64> = (1..len).map(|_| weight(rng)).collect();
    let g = WeightedGraph::path(&names, &w).unwrap();
    ChainState::with_logical_pairs(g, vec![LogicalPair::new(&format!("{prefix}p"), &format!("{prefix}L"))]).unwrap()
}

pub fn gaussian(rng: &mut impl Rng) -> C64 {
    C64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Haar-random unitary from Gram–Schmidt on a complex Gaussian matrix.
pub fn haar_rows(rng: &mut impl Rng, n: usize) -> Vec<Vec<C64>> {
    let mut rows: Vec<Vec<C64>> = Vec::new();
    while rows.len() < n {
        let mut v: Vec<C64> = (0..n).map(|_| gaussian(rng)).collect();
        for r in &rows {
            let ov: C64 = r.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
            for (x, y) in v.iter_mut().zip(r) {
                *x -= ov * y;
            }
        }
        let nv = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if nv > 1e-6 {
            rows.push(v.into_iter().map(|x| x / nv).collect());
        }
    }
    rows
}

pub fn haar(rng: &mut impl Rng, n: usize) -> ModeUnitary {
    ModeUnitary::from_rows(&haar_rows(rng, n)).unwrap()
}

pub fn random_state(rng: &mut impl Rng, qubits: usize) -> PureState {
    let v: Vec<C64> = (0..1usize << qubits).map(|_| gaussian(rng)).collect();
    PureState::unnormalized(v).unwrap().normalized().unwrap()
}

/// Amplitude of the textbook graph state, computed per basis index from the
/// edge list (independent of the gate-by-gate construction).
pub fn graph_amplitudes(g: &WeightedGraph) -> Vec<C64> {
    let n = g.num_vertices();
    let norm = 1.0 / ((1usize << n) as f64).sqrt();
    (0..1usize << n)
        .map(|i| {
            let bit = |q: usize| (i >> (n - 1 - q)) & 1;
            let phase: f64 = g.edges().iter().filter(|e| bit(e.a) == 1 && bit(e.b) == 1).map(|e| e.weight).sum();
            C64::from_polar(norm, -phase)
        })
        .collect()
}

pub fn overlap(a: &[C64], b: &[C64]) -> f64 {
    let ip: C64 = a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
    let na: f64 = a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    ip.norm() / (na * nb)
}

/// Two-photon Fock oracle: the photonic state `Σ_{s,t} g_s ⊗ g_t c_s† c_t†`
/// with `c_r† = Σ_k U[r][k] d_k†`, read off pattern by pattern. Returns the
/// unnormalized register attached to each `(k ≤ l)`.
pub fn fock_patterns(rails: [&[C64]; 4], u: &ModeUnitary) -> Vec<((usize, usize), Vec<C64>)> {
    let n = u.size();
    let dim = rails[0].len() * rails[2].len();
    // Ordered two-mode tensor T[k][l] (register-valued).
    let mut t = vec![vec![vec![C64::new(0.0, 0.0); dim]; n]; n];
    for s in 0..2 {
        for q in 0..2 {
            let prod: Vec<C64> =
                rails[s].iter().flat_map(|x| rails[2 + q].iter().map(move |y| x * y)).collect();
            for k in 0..n {
                for l in 0..n {
                    let c = u.entry(s, k) * u.entry(2 + q, l);
                    for (acc, p) in t[k][l].iter_mut().zip(&prod) {
                        *acc += c * p;
                    }
                }
            }
        }
    }
    let mut out = Vec::new();
    for k in 0..n {
        for l in k..n {
            let v: Vec<C64> = if k == l {
                t[k][k].iter().map(|x| x * std::f64::consts::SQRT_2).collect()
            } else {
                t[k][l].iter().zip(&t[l][k]).map(|(x, y)| x + y).collect()
            };
            out.push(((k, l), v));
        }
    }
    out
}

/// Smallest eigenvalue-product of the reduced density matrix of a bipartite
/// vector: `det` on the (at most) rank-2 support, from `(1 − tr ρ²)/2`.
pub fn reduced_det(v: &[C64], left_dim: usize) -> f64 {
    let right_dim = v.len() / left_dim;
    let norm: f64 = v.iter().map(|x| x.norm_sqr()).sum();
    let mut purity = 0.0;
    for i in 0..left_dim {
        for j in 0..left_dim {
            let mut rho = C64::new(0.0, 0.0);
            for r in 0..right_dim {
                rho += v[i * right_dim + r] * v[j * right_dim + r].conj();
            }
            purity += (rho / norm).norm_sqr();
        }
    }
    (1.0 - purity) / 2.0
}

/// Random context: orthogonal `f1, f2` and arbitrary `f3, f4`.
pub fn random_context(rng: &mut impl Rng, lq: usize, rq: usize) -> wgs_core::optics::FusionContext {
    let f1 = random_state(rng, lq);
    let g = random_state(rng, lq);
    let ov = f1.inner(&g).unwrap();
    let f2 = g.add(&f1.scaled(-ov)).unwrap().normalized().unwrap();
    let f3 = random_state(rng, rq);
    let f4 = random_state(rng, rq);
    wgs_core::optics::FusionContext::new(f1, f2, f3, f4).unwrap()
}

pub fn haar2(rng: &mut impl Rng) -> [[C64; 2]; 2] {
    let r = haar_rows(rng, 2);
    [[r[0][0], r[0][1]], [r[1][0], r[1][1]]]
}

fn mul2(a: &[[C64; 2]; 2], b: &[[C64; 2]; 2]) -> [[C64; 2]; 2] {
    let mut m = [[C64::new(0.0, 0.0); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            m[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    m
}

/// 4×4 unitary with `|U_{1i}|² + |U_{2i}|² = 1/2` in every column:
/// `(1/√2)[[X, XY], [Z, −ZY]]` with random column phases and order.
pub fn balanced(rng: &mut impl Rng) -> ModeUnitary {
    let (x, y, z) = (haar2(rng), haar2(rng), haar2(rng));
    let (xy, zy) = (mul2(&x, &y), mul2(&z, &y));
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut rows = vec![vec![C64::new(0.0, 0.0); 4]; 4];
    for i in 0..2 {
        for j in 0..2 {
            rows[i][j] = x[i][j] * h;
            rows[i][2 + j] = xy[i][j] * h;
            rows[2 + i][j] = z[i][j] * h;
            rows[2 + i][2 + j] = -zy[i][j] * h;
        }
    }
    let mut perm: Vec<usize> = (0..4).collect();
    for i in (1..4).rev() {
        perm.swap(i, rng.random_range(0..=i));
    }
    let phases: Vec<C64> = (0..4).map(|_| C64::from_polar(1.0, rng.random_range(-PI..PI))).collect();
    let cols: Vec<Vec<C64>> = rows
        .iter()
        .map(|r| (0..4).map(|k| r[perm[k]] * phases[k]).collect())
        .collect();
    ModeUnitary::from_rows(&cols).unwrap()
}

/// Graph state with logical partners, evaluated amplitude by amplitude on an
/// arbitrary register order. `pairs` are `(partner, anchor)`.
pub fn chain_oracle(register: &[String], g: &WeightedGraph, pairs: &[(&str, &str)]) -> Vec<C64> {
    let n = register.len();
    let pos = |l: &str| register.iter().position(|r| r == l).unwrap_or_else(|| panic!("{l} not in register"));
    let vpos: Vec<usize> = g.vertices().iter().map(|l| pos(l)).collect();
    let ppos: Vec<(usize, usize)> = pairs.iter().map(|(p, a)| (pos(p), pos(a))).collect();
    assert_eq!(g.num_vertices() + pairs.len(), n);
    let norm = 1.0 / ((1usize << g.num_vertices()) as f64).sqrt();
    (0..1usize << n)
        .map(|i| {
            let bit = |q: usize| (i >> (n - 1 - q)) & 1;
            if ppos.iter().any(|&(p, a)| bit(p) != bit(a)) {
                return C64::new(0.0, 0.0);
            }
            let phase: f64 =
                g.edges().iter().filter(|e| bit(vpos[e.a]) == 1 && bit(vpos[e.b]) == 1).map(|e| e.weight).sum();
            C64::from_polar(norm, -phase)
        })
        .collect()
}

pub fn graph_from(labels: &[&str], edges: &[(&str, &str, f64)]) -> WeightedGraph {
    let mut g = WeightedGraph::with_vertices(labels).unwrap();
    for &(a, b, w) in edges {
        g.add_edge_by_label(a, b, w).unwrap();
    }
    g
}

/// Complete orthonormal rows to an `n × n` unitary.
pub fn complete_rows(rng: &mut impl Rng, mut rows: Vec<Vec<C64>>, n: usize) -> ModeUnitary {
    while rows.len() < n {
        let mut v: Vec<C64> = (0..n).map(|_| gaussian(rng)).collect();
        for r in &rows {
            let ov: C64 = r.iter().zip(&v).map(|(x, y)| x.conj() * y).sum();
            for (x, y) in v.iter_mut().zip(r) {
                *x -= ov * y;
            }
        }
        let nv = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        if nv > 1e-6 {
            rows.push(v.into_iter().map(|x| x / nv).collect());
        }
    }
    ModeUnitary::from_rows(&rows).unwrap()
}

/// Network meeting the no-good-failure premise. Columns `0..s` see both
/// photons with the `b` rows equal to `c·e^{iθ_i}/√s`; the `a` rows there are
/// orthogonal to that profile. Then two `a`-only and two `b`-only columns.
pub fn constrained_unitary(rng: &mut impl Rng, s: usize, ancillas: usize) -> ModeUnitary {
    let n = s + 4 + ancillas;
    // Phase profile v and a unit vector w ⟂ v on the shared columns.
    let v: Vec<C64> = (0..s).map(|_| C64::from_polar(1.0 / (s as f64).sqrt(), rng.random_range(-PI..PI))).collect();
    let mut w: Vec<C64> = (0..s).map(|_| gaussian(rng)).collect();
    let ov: C64 = v.iter().zip(&w).map(|(x, y)| x.conj() * y).sum();
    for (x, y) in w.iter_mut().zip(&v) {
        *x -= ov * y;
    }
    let nw = w.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    w.iter_mut().for_each(|x| *x /= nw);
    // [α | P] and [c | Q]: 2×3 isometries.
    let ga = haar_rows(rng, 3);
    let gb = haar_rows(rng, 3);
    let zero = C64::new(0.0, 0.0);
    let mut rows = vec![vec![zero; n]; 4];
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
    complete_rows(rng, rows, n)
}
