mod common;

use common::*;
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rand::Rng;
use std::f64::consts::PI;
use wgs_core::analysis::*;
use wgs_core::math::wrap_angle;
use wgs_core::optics::{enumerate_outcomes, OutcomeKind};
use wgs_core::protocols::*;
use wgs_core::state::*;
use wgs_core::{QubitProjection, WeightedGraph};

fn chi() -> impl Strategy<Value = f64> {
    (-PI..PI).prop_filter("nonzero weight", |w: &f64| w.abs() > 0.05)
}

/// Random graph on `n` vertices: an edge list drawn from all pairs.
fn graph(max_n: usize) -> impl Strategy<Value = WeightedGraph> {
    (2..=max_n).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
        let m = pairs.len();
        (Just(n), Just(pairs), prop::collection::vec(prop::option::weighted(0.6, chi()), m)).prop_map(|(n, pairs, ws)| {
            let mut g = WeightedGraph::with_vertices(&labels("v", n)).unwrap();
            for ((a, b), w) in pairs.into_iter().zip(ws) {
                if let Some(w) = w {
                    g.add_edge(a, b, w).unwrap();
                }
            }
            g
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn edge_order_does_not_matter(g in graph(6), seed in any::<u64>()) {
        let mut edges: Vec<_> = g.edges().to_vec();
        let mut r = rng(seed);
        use rand::seq::SliceRandom;
        edges.shuffle(&mut r);
        let mut s = wgs_core::PureState::plus(g.num_vertices());
        for e in &edges {
            s = apply_phase_edge(&s, e.b, e.a, e.weight).unwrap();
        }
        let built = build_state(&g).unwrap();
        for (x, y) in s.amplitudes().iter().zip(built.amplitudes()) {
            prop_assert!((x - y).norm() < 1e-12);
        }
        prop_assert!(overlap(built.amplitudes(), &graph_amplitudes(&g)) > 1.0 - 1e-12);
    }

    #[test]
    fn attach_in_any_order_builds_the_graph(g in graph(7), seed in any::<u64>()) {
        let n = g.num_vertices();
        let mut order: Vec<usize> = (0..n).collect();
        use rand::seq::SliceRandom;
        order.shuffle(&mut rng(seed));
        let mut s = wgs_core::PureState::empty();
        for (k, &v) in order.iter().enumerate() {
            let nb: Vec<(usize, f64)> = (0..k).filter_map(|j| g.weight(v, order[j]).map(|w| (j, w))).collect();
            s = attach_vertex(&s, k, &nb).unwrap();
        }
        let mut inverse = vec![0; n];
        for (k, &v) in order.iter().enumerate() {
            inverse[v] = k;
        }
        let aligned = s.permuted(&inverse).unwrap();
        let built = build_state(&g).unwrap();
        for (x, y) in aligned.amplitudes().iter().zip(built.amplitudes()) {
            prop_assert!((x - y).norm() < 1e-12);
        }
    }

    #[test]
    fn z_measurement_rule(g in graph(6), pick in any::<prop::sample::Index>()) {
        let n = g.num_vertices();
        let a = pick.index(n);
        let s = build_state(&g).unwrap();
        let rest = build_state(&g.without_vertex(a)).unwrap();
        let r0 = project_qubit(&s, &QubitProjection::zero(a)).unwrap();
        let r1 = project_qubit(&s, &QubitProjection::one(a)).unwrap();
        prop_assert!((r0.probability + r1.probability - 1.0).abs() < 1e-12);
        prop_assert!(fidelity_up_to_global_phase(&r0.state, &rest).unwrap() > 1.0 - 1e-12);
        // After deleting `a`, neighbour v > a sits at position v − 1.
        let fixes: Vec<LocalGate> = g
            .neighbors(a)
            .into_iter()
            .map(|(v, w)| LocalGate::phase_one(if v > a { v - 1 } else { v }, w))
            .collect();
        prop_assert!(equal_up_to_prescribed_corrections(&r1.state, &rest, &fixes));
    }

    #[test]
    fn pi_attachment_is_cz(g in graph(5)) {
        let n = g.num_vertices();
        let s = build_state(&g).unwrap();
        let nb: Vec<(usize, f64)> = (0..n).step_by(2).map(|v| (v, PI)).collect();
        let attached = attach_vertex(&s, n, &nb).unwrap();
        let mut cz = s.tensor(&wgs_core::PureState::plus(1));
        for &(v, _) in &nb {
            // CZ is diagonal with −1 on |11⟩.
            let d = cz.dim();
            let amps: Vec<C64> = (0..d)
                .map(|i| {
                    let a = cz.amplitude(i);
                    if (i >> (n - v)) & 1 == 1 && i & 1 == 1 { -a } else { a }
                })
                .collect();
            cz = wgs_core::PureState::from_amplitudes(amps).unwrap();
        }
        for (x, y) in cz.amplitudes().iter().zip(attached.amplitudes()) {
            prop_assert!((x - y).norm() < 1e-14);
        }
    }

    #[test]
    fn fusion_outcomes_are_complete(seed in any::<u64>(), n in 4usize..=8) {
        let mut r = rng(seed);
        let ctx = random_context(&mut r, 1, 2);
        let u = haar(&mut r, n);
        let out = enumerate_outcomes(&ctx, &u);
        prop_assert_eq!(out.len(), n * (n + 1) / 2);
        let total: f64 = out.iter().map(|o| o.probability).sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
        for o in &out {
            prop_assert_eq!(o.kind == OutcomeKind::NonRelevant, o.pattern.0 == o.pattern.1);
            if o.kind == OutcomeKind::NonRelevant {
                prop_assert!(o.m_matrix.det().norm() < 1e-12);
            }
        }
    }

    #[test]
    fn type_i_success_reproduces_merged_chain(w in prop::collection::vec(chi(), 4)) {
        let left = ChainState::new(WeightedGraph::path(&["x0", "x1", "a"], &w[..2]).unwrap()).unwrap();
        let right = ChainState::new(WeightedGraph::path(&["b", "y1", "y2"], &w[2..]).unwrap()).unwrap();
        let out = fuse_type_i(&left, "a", &right, "b").unwrap();
        let total: f64 = out.iter().map(|o| o.probability).sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
        let merged = graph_from(
            &["x0", "x1", "a+b", "y1", "y2"],
            &[("x0", "x1", w[0]), ("x1", "a+b", w[1]), ("a+b", "y1", w[2]), ("y1", "y2", w[3])],
        );
        for o in out.iter().filter(|o| o.label.is_success()) {
            prop_assert!(overlap(o.state.amplitudes(), &chain_oracle(&o.register, &merged, &[])) > 1.0 - 1e-10);
        }
    }

    #[test]
    fn type_ii_success_is_half(wl in chi(), c1 in chi(), c2 in chi()) {
        let g = WeightedGraph::path(&["l0", "lL"], &[wl]).unwrap();
        let left = ChainState::with_logical_pairs(g, vec![LogicalPair::new("lp", "lL")]).unwrap();
        let right = ChainState::new(WeightedGraph::path(&["r0", "r1", "r2"], &[c1, c2]).unwrap()).unwrap();
        let out = fuse_type_ii(&left, "lp", &right, "r1").unwrap();
        let success: f64 = out.iter().filter(|o| o.label.is_success()).map(|o| o.probability).sum();
        let total: f64 = out.iter().map(|o| o.probability).sum();
        prop_assert!((success - 0.5).abs() < 1e-10);
        prop_assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn logical_success_keeps_pair_support(c in chi(), opposite in any::<bool>(), outer in chi()) {
        let c2 = if opposite { -c } else { c };
        let g = WeightedGraph::path(&["c1", "b1", "a", "b2"], &[outer, c, c2]).unwrap();
        let out = create_logical_qubit(&ChainState::new(g).unwrap(), "a").unwrap();
        let total: f64 = out.iter().map(|o| o.probability).sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
        for o in out.iter().filter(|o| o.label.is_success()) {
            let post = o.post_state.as_ref().unwrap();
            prop_assert!(post.pair_support_violation() < 1e-12);
        }
    }

    #[test]
    fn entropy_report_is_consistent(seed in any::<u64>(), rz in 0.0f64..0.98, az in -PI..PI) {
        let mut r = rng(seed);
        let m = wgs_core::Mat2::new(gaussian(&mut r), gaussian(&mut r), gaussian(&mut r), gaussian(&mut r));
        let rep = entanglement_report(&m, C64::from_polar(rz, az)).unwrap();
        prop_assert!((rep.det_rho - rep.lambda * (1.0 - rep.lambda)).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&rep.entropy_bits));
        prop_assert!((0.0..=0.25 + 1e-15).contains(&rep.det_rho));
        if (rep.det_rho - 0.25).abs() < 1e-13 {
            prop_assert!(rep.entropy_bits > 1.0 - 1e-9);
        }
        if rep.entropy_bits > 1.0 - 1e-12 {
            prop_assert!((rep.det_rho - 0.25).abs() < 1e-9);
        }
        // S = 1 exactly on the maximally entangled family.
        let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        let seed = wgs_core::Mat2::new(h, C64::new(0.0, 0.0), C64::new(0.0, 0.0), h);
        let fam = max_entangled_family(&seed, C64::from_polar(rz, az)).unwrap();
        let top = entanglement_report(&fam.matrix(), C64::from_polar(rz, az)).unwrap();
        prop_assert!((top.det_rho - 0.25).abs() < 1e-9 && (top.entropy_bits - 1.0).abs() < 1e-9);
    }

    #[test]
    fn condition_sets_agree(seed in any::<u64>(), c in chi()) {
        let mut r = rng(seed);
        let p = TwoQubitProjection::new(gaussian(&mut r), gaussian(&mut r), gaussian(&mut r), gaussian(&mut r)).unwrap();
        prop_assert_eq!(tef_unitarity(&p, c), tef_conditions_by_argument(&p, c));
        let xi = r.random_range(0.2..3.0) * if r.random::<bool>() { 1.0 } else { -1.0 };
        let q = xi_projection(c, xi).unwrap();
        prop_assert!(tef_unitarity(&q, c) && tef_conditions_by_argument(&q, c));
    }

    #[test]
    fn wrapped_angles_are_half_open(x in -100.0f64..100.0) {
        let w = wrap_angle(x);
        prop_assert!(w > -PI && w <= PI);
        prop_assert!(((x - w) / (2.0 * PI)).fract().abs() < 1e-9 || (1.0 - ((x - w) / (2.0 * PI)).fract().abs()) < 1e-9);
    }

    #[test]
    fn ghz_pair_outcomes_agree(c1 in chi(), c2 in chi(), frac in 0.0f64..1.0) {
        let max = ghz_pair_max_weight(c1, c2);
        let pair = ghz_pair_for_target(c1, c2, frac * max).unwrap();
        prop_assert!((pair.phi - frac * max).abs() < 1e-9);
        let (a, b) = pair.projections[0].bra();
        let pw = pair_weight_from_projection(a, b, c1, c2);
        prop_assert!(pw.both_outcomes_equal);
        prop_assert!((pw.phi - pair.phi).abs() < 1e-9);
        prop_assert!((pw.phi_complement - pair.phi).abs() < 1e-9);
    }
}
