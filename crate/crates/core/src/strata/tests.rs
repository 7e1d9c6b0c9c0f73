use std::collections::BTreeSet;

use super::*;
use crate::covers::realizable;
use crate::modular::{a_coeff, tau, ACoeffTable};

fn isogeny_degrees(list: &[StratumContribution]) -> BTreeSet<(u32, u32)> {
    candidates(list)
        .iter()
        .map(|c| {
            let (x, y) = (c.shape.survivors(0), c.shape.survivors(1));
            assert_eq!(x.len(), 1);
            assert_eq!(y.len(), 1);
            assert_eq!((x[0].0, x[0].2, y[0].0, y[0].2), (1, 1, 1, 1));
            (x[0].1, y[0].1)
        })
        .collect()
}

fn check_invariants(list: &[StratumContribution]) {
    for c in list {
        c.cover.validate_connected().unwrap();
        assert!(realizable(&c.cover).unwrap().is_realizable());
        assert!(genericity_check(&c.cover, &c.a_structure));
        assert!(separating_image_check(&c.cover));
        let below = c.image_dim.iter().zip(&c.required_dim).any(|(a, b)| a < b);
        assert_eq!(below, c.tag == Tag::ZeroByDimension);
    }
}

#[test]
fn pairing_small_values() {
    assert_eq!(pairing_coefficient(2).unwrap(), BigInt::from(1));
    assert_eq!(pairing_coefficient(3).unwrap(), BigInt::from(-48));
    assert!(pairing_coefficient(1).is_err());
}

#[test]
fn pairing_matches_eta48() {
    let direct = ACoeffTable::from_eta48(300).unwrap();
    for d in 2..=300u64 {
        assert_eq!(&pairing_coefficient(d).unwrap(), direct.get(d as usize).unwrap(), "d = {d}");
    }
}

#[test]
fn equal12_isogeny_pairs() {
    for d in 2..=4u32 {
        let list = classify_equal12(2, 10, d).unwrap();
        check_invariants(&list);
        let expected: BTreeSet<(u32, u32)> = (1..d).map(|k| (k, d - k)).collect();
        assert_eq!(isogeny_degrees(&list), expected, "d = {d}");
        for c in candidates(&list) {
            assert_eq!(c.multiplicity, BigUint::from(1u32));
            assert_eq!(c.image_dim, vec![11]);
        }
        // weighting each shape by tau(d1) tau(d2) recovers the coefficient
        let total: BigInt = isogeny_degrees(&list)
            .iter()
            .map(|&(a, b)| tau(a as u64).unwrap() * tau(b as u64).unwrap())
            .sum();
        assert_eq!(total, a_coeff(d as u64).unwrap());
    }
}

#[test]
fn equal12_higher_genus() {
    for (g, d) in [(3, 2), (3, 3), (4, 2)] {
        let list = classify_equal12(g, 12 - g, d).unwrap();
        check_invariants(&list);
        let expected: BTreeSet<(u32, u32)> = (1..d).map(|k| (k, d - k)).collect();
        assert_eq!(isogeny_degrees(&list), expected, "g = {g}, d = {d}");
    }
}

#[test]
fn equal12_refusals() {
    assert!(matches!(classify_equal12(2, 9, 2), Err(Error::HypothesisFailed(_))));
    assert!(matches!(classify_equal12(1, 11, 2), Err(Error::HypothesisFailed(_))));
    assert!(matches!(classify_equal12(2, 10, 1), Err(Error::HypothesisFailed(_))));
    let e = classify_equal12(5, 7, 2).unwrap_err();
    assert!(e.is_refusal(), "{e}");
    let e = classify_equal12(2, 10, 5).unwrap_err();
    assert!(e.is_refusal(), "{e}");
}

#[test]
fn rational_tail_single_survivor() {
    for (g, d) in [(2, 2), (2, 3), (3, 2), (3, 3), (4, 2), (4, 3)] {
        let p = HurwitzParams::new(g, 1, d, 1, 0, 0).unwrap();
        let list = classify_divisor_pullback(&p, DivisorShape::RationalTail).unwrap();
        check_invariants(&list);
        let c = candidates(&list);
        assert_eq!(c.len(), 1, "g = {g}, d = {d}");
        assert_eq!(c[0].shape.survivors(0), vec![(g, d, 1)]);
        assert_eq!(c[0].shape.survivors(1), vec![(0, 2, 0)]);
        assert_eq!(c[0].image_dim, vec![p.dimension() as u64 - 1]);
    }
}

#[test]
fn rational_tail_with_full_fiber() {
    let p = HurwitzParams::new(3, 1, 2, 1, 1, 0).unwrap();
    let list = classify_divisor_pullback(&p, DivisorShape::RationalTail).unwrap();
    check_invariants(&list);
    let c = candidates(&list);
    assert_eq!(c.len(), 1);
    assert_eq!(c[0].shape.survivors(0), vec![(3, 2, 1)]);
}

#[test]
fn elliptic_tail_single_survivor() {
    for (g, d) in [(3, 2), (3, 3), (4, 2), (4, 3)] {
        let p = HurwitzParams::new(g, 1, d, 1, 0, 0).unwrap();
        let list = classify_divisor_pullback(&p, DivisorShape::EllipticTail).unwrap();
        check_invariants(&list);
        let c = candidates(&list);
        assert_eq!(c.len(), 1, "g = {g}, d = {d}");
        assert_eq!(c[0].shape.survivors(0), vec![(g - 1, d, 1)]);
        assert_eq!(c[0].shape.survivors(1), vec![(1, 2, 0)]);
        assert!(list.iter().any(|c| c.tag == Tag::FixedTarget));
    }
}

#[test]
fn elliptic_tail_in_genus_two_has_no_survivor() {
    let p = HurwitzParams::new(2, 1, 2, 1, 0, 0).unwrap();
    let list = classify_divisor_pullback(&p, DivisorShape::EllipticTail).unwrap();
    assert!(candidates(&list).is_empty());
}

#[test]
fn divisor_refusals() {
    let p = HurwitzParams::new(3, 1, 2, 0, 0, 0).unwrap();
    assert!(matches!(
        classify_divisor_pullback(&p, DivisorShape::RationalTail),
        Err(Error::HypothesisFailed(_))
    ));
    let p = HurwitzParams::new(4, 2, 2, 1, 0, 0).unwrap();
    assert!(matches!(
        classify_divisor_pullback(&p, DivisorShape::EllipticTail),
        Err(Error::HypothesisFailed(_))
    ));
    let p = HurwitzParams::new(6, 1, 2, 1, 0, 0).unwrap();
    assert!(classify_divisor_pullback(&p, DivisorShape::RationalTail)
        .unwrap_err()
        .is_refusal());
}

#[test]
fn comb_single_survivor() {
    let p = HurwitzParams::new(4, 2, 2, 0, 1, 0).unwrap();
    let list = classify_comb_pullback(&p, 2).unwrap();
    check_invariants(&list);
    let c = candidates(&list);
    assert_eq!(c.len(), 1);
    let c = c[0];
    assert_eq!(c.shape.survivors(0), vec![(2, 2, 1)]);
    assert_eq!(c.shape.survivors(1), vec![(1, 1, 1)]);
    assert_eq!(c.shape.survivors(2), vec![(1, 1, 1)]);
    assert_eq!(c.psi_excess_degree, 1);
    assert_eq!(c.required_dim, vec![3, 1]);
    assert_eq!(c.image_dim, vec![3, 2]);
}

#[test]
fn comb_refusals() {
    let p = HurwitzParams::new(4, 2, 2, 0, 0, 0).unwrap();
    assert!(matches!(classify_comb_pullback(&p, 2), Err(Error::HypothesisFailed(_))));
    let p = HurwitzParams::new(4, 2, 2, 0, 1, 0).unwrap();
    assert!(matches!(classify_comb_pullback(&p, 1), Err(Error::HypothesisFailed(_))));
    let p = HurwitzParams::new(4, 1, 2, 0, 1, 0).unwrap();
    assert!(matches!(classify_comb_pullback(&p, 2), Err(Error::HypothesisFailed(_))));
}

#[test]
fn params() {
    let p = HurwitzParams::new(4, 1, 3, 2, 1, 0).unwrap();
    assert_eq!(p.branch_count(), 6);
    assert_eq!(p.ramification_count(), 12);
    assert_eq!(p.dimension(), 9);
    assert!(HurwitzParams::new(1, 2, 2, 0, 0, 0).is_err());
    assert!(HurwitzParams::new(1, 1, 0, 0, 0, 0).is_err());
}

#[test]
fn json_round_trip() {
    let list = classify_equal12(2, 10, 3).unwrap();
    let s = contributions_to_json(&list);
    let back: Vec<StratumContribution> = serde_json::from_str(&s).unwrap();
    assert_eq!(back, list);
    assert!(s.contains("\"candidate-nontaut\""));
}

#[test]
fn output_is_deterministic() {
    let a = classify_equal12(2, 10, 4).unwrap();
    let b = classify_equal12(2, 10, 4).unwrap();
    assert_eq!(a, b);
}

#[test]
fn separating_edge_over_loop_is_rejected() {
    // two rational components joined by one edge, over a rational target
    // with a self-node
    let source = StableGraph::from_vertex_pairs(
        vec![
            Vertex { genus: 0, legs: vec![1, 2] },
            Vertex { genus: 0, legs: vec![3, 4] },
        ],
        &[(0, 1)],
    );
    let target = StableGraph::from_vertex_pairs(vec![Vertex { genus: 0, legs: vec![1] }], &[(0, 0)]);
    let cover = GraphCover {
        half_edge_map: vec![target.edges[0]],
        source,
        target,
        vertex_map: vec![0, 0],
        leg_map: [(1, 1), (2, 1), (3, 1), (4, 1)].into_iter().collect(),
        degrees: vec![1, 1],
        ramification: Ramification::default(),
    };
    assert!(!separating_image_check(&cover));
    let ok = GraphCover::identity(&equal12_graph(2, 10));
    assert!(separating_image_check(&ok));
}
