use std::f64::consts::PI;

use proptest::prelude::*;
use serde_json::json;
use wgs::io::{GraphFile, UnitaryFile};
use wgs::WgsError;
use wgs_core::optics::type_ii_matrix;
use wgs_core::state::fidelity_up_to_global_phase;

fn parse(v: serde_json::Value) -> GraphFile {
    serde_json::from_value(v).unwrap()
}

#[test]
fn graph_with_logical_pair_loads() {
    let g = parse(json!({
        "vertices": ["x", "a"],
        "edges": [{ "a": "x", "b": "a", "chi": 1.0 }],
        "logical_pairs": [{ "partner": "ap", "anchor": "a" }]
    }));
    let loaded = g.to_chain().unwrap();
    assert!(loaded.warnings.is_empty());
    assert_eq!(loaded.chain.register(), ["x", "a", "ap"]);
    assert!(loaded.chain.pair_support_violation() < 1e-15);
    assert_eq!(GraphFile::from_chain(&loaded.chain), g);
}

#[test]
fn unknown_fields_and_bad_edges_are_rejected() {
    assert!(serde_json::from_value::<GraphFile>(json!({ "vertices": [], "nodes": [] })).is_err());
    let unknown = parse(json!({ "vertices": ["x"], "edges": [{ "a": "x", "b": "q", "chi": 1.0 }] }));
    assert!(matches!(unknown.to_chain(), Err(WgsError::Core(wgs_core::Error::UnknownVertex(_)))));
    let zero = parse(json!({ "vertices": ["x", "y"], "edges": [{ "a": "x", "b": "y", "chi": 2.0 * PI }] }));
    assert!(zero.to_chain().is_err());
}

#[test]
fn weights_wrap_into_half_open_interval() {
    let g = parse(json!({ "vertices": ["x", "y"], "edges": [{ "a": "x", "b": "y", "chi": -PI }] }));
    let loaded = g.to_chain().unwrap();
    assert_eq!(loaded.warnings.len(), 1);
    assert!((loaded.chain.graph().edges()[0].weight - PI).abs() < 1e-12);
    let inside = parse(json!({ "vertices": ["x", "y"], "edges": [{ "a": "x", "b": "y", "chi": PI }] }));
    assert!(inside.to_chain().unwrap().warnings.is_empty());
}

#[test]
fn unitary_round_trip_and_shape_checks() {
    let u = type_ii_matrix();
    let f = UnitaryFile::from_unitary(&u);
    assert_eq!(f.to_unitary().unwrap(), u);
    let text = serde_json::to_string(&f).unwrap();
    let back: UnitaryFile = serde_json::from_str(&text).unwrap();
    assert_eq!(back.to_unitary().unwrap(), u);
    let ragged = UnitaryFile { n: 2, re: vec![vec![1.0, 0.0], vec![0.0]], im: None };
    assert!(matches!(ragged.to_unitary(), Err(WgsError::Invalid(_))));
    let re = (0..4).map(|i| (0..4).map(|j| if i == j { 2.0 } else { 0.0 }).collect()).collect();
    let scaled = UnitaryFile { n: 4, re, im: None };
    assert!(matches!(scaled.to_unitary(), Err(WgsError::Core(wgs_core::Error::NotUnitary { .. }))));
}

#[test]
fn exit_codes_follow_error_kind() {
    assert_eq!(WgsError::Invalid("x".into()).exit_code(), 2);
    assert_eq!(WgsError::Core(wgs_core::Error::UnknownVertex("v".into())).exit_code(), 2);
    assert_eq!(WgsError::Numerical("x".into()).exit_code(), 3);
    assert_eq!(WgsError::Core(wgs_core::Error::ConvergenceFailure { lo: 0.0, hi: 1.0 }).exit_code(), 3);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// Writing a loaded graph back out and reloading gives the same state.
    #[test]
    fn graph_file_round_trip(n in 2usize..6, raw in prop::collection::vec((0usize..6, 0usize..6, -10.0f64..10.0), 0..8)) {
        let vertices: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
        let mut edges = Vec::new();
        let mut seen = Vec::new();
        for (a, b, chi) in raw {
            let (a, b) = (a % n, b % n);
            let key = (a.min(b), a.max(b));
            let wrapped = wgs_core::math::wrap_angle(chi);
            if a == b || seen.contains(&key) || wrapped.abs() < 1e-6 {
                continue;
            }
            seen.push(key);
            edges.push(json!({ "a": vertices[a], "b": vertices[b], "chi": chi }));
        }
        let file = parse(json!({ "vertices": vertices, "edges": edges }));
        let loaded = file.to_chain().unwrap();
        let again = GraphFile::from_chain(&loaded.chain).to_chain().unwrap();
        prop_assert!(again.warnings.is_empty());
        let f = fidelity_up_to_global_phase(loaded.chain.state(), again.chain.state()).unwrap();
        prop_assert!(f > 1.0 - 1e-12);
        for e in loaded.chain.graph().edges() {
            prop_assert!(e.weight > -PI && e.weight <= PI);
        }
    }
}
