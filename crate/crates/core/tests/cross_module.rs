use std::collections::HashSet;

use mumford_core::autgrp::{full_group, stabilizer_census, DEFAULT_GROUP_BUDGET};
use mumford_core::bounds::{admissible, genus_formula};
use mumford_core::curve::zeta::{lpoly_from_counts, predict_count};
use mumford_core::curve::{count_points, rational_points, DEFAULT_COUNT_BUDGET};
use mumford_core::moebius::MobiusClass;
use mumford_core::schottky::SchottkyData;
use mumford_core::CurveParams;
use num_bigint::BigInt;
use proptest::prelude::*;

#[test]
fn automorphisms_permute_rational_points() {
    for (p, t, m) in [(2u64, 1usize, 3usize), (3, 1, 2), (2, 2, 1)] {
        let params = CurveParams::from_literal(p, t, "1").unwrap();
        let g = full_group(p, t, DEFAULT_GROUP_BUDGET).unwrap();
        let pts = rational_points(&params, m, DEFAULT_COUNT_BUDGET).unwrap();
        let set: HashSet<_> = pts.iter().cloned().collect();
        assert_eq!(pts.len() as u64, count_points(&params, m, DEFAULT_COUNT_BUDGET).unwrap());
        for phi in g.elements() {
            let image: HashSet<_> = pts.iter().map(|pt| phi.act(pt).unwrap()).collect();
            assert_eq!(image, set, "({p},{t}) m={m}: {phi}");
        }
    }
}

#[test]
fn census_orbits_partition_points() {
    let params = CurveParams::from_literal(3, 1, "2").unwrap();
    let g = full_group(3, 1, DEFAULT_GROUP_BUDGET).unwrap();
    for m in 1..=4 {
        let c = stabilizer_census(&params, &g, m, 1 << 20).unwrap();
        assert!(c.orbit_stabilizer_ok);
        assert_eq!(c.points as u64, count_points(&params, m, DEFAULT_COUNT_BUDGET).unwrap());
        let special: usize = c.special.iter().map(|o| o.orbit_size).sum();
        assert!(special <= c.points);
        for o in &c.special {
            assert_eq!(o.orbit_size * o.stabilizer.order, g.order());
        }
    }
}

#[test]
fn lpolynomial_extrapolates() {
    let params = CurveParams::from_literal(3, 1, "1").unwrap();
    let g = params.genus();
    let counts: Vec<u64> = (1..=g + 3)
        .map(|m| count_points(&params, m, DEFAULT_COUNT_BUDGET).unwrap())
        .collect();
    let l = lpoly_from_counts(&counts[..g], params.q(), g).unwrap();
    assert!(l.satisfies_functional_equation());
    for m in 1..=g + 3 {
        assert_eq!(predict_count(&l, m), BigInt::from(counts[m - 1]), "m = {m}");
    }
}

#[test]
fn genus_agrees_everywhere() {
    for (p, t) in [(2u64, 1usize), (2, 2), (3, 1), (5, 1), (2, 3), (3, 2)] {
        let params = CurveParams::from_literal(p, t, "1").unwrap();
        let g = params.genus();
        assert_eq!(g as u128, genus_formula(p, t as u32).unwrap());
        assert_eq!(admissible(g as u64, p).unwrap(), Some(t as u32));
        let data = SchottkyData::build_from_literal(p, t, "T^-1").unwrap();
        assert_eq!(data.rank(), g);
    }
}

#[test]
fn commutator_generators_are_hyperbolic() {
    for (p, t) in [(2u64, 1usize), (3, 1), (2, 2)] {
        let data = SchottkyData::build_from_literal(p, t, "T^-1").unwrap();
        for gen in &data.comm_gens {
            assert_eq!(gen.classify(), MobiusClass::Hyperbolic);
        }
        for i in 1..=data.rank() as i32 {
            assert!(data.eval_word(&[i, -i]).unwrap().is_scalar());
        }
    }
}

fn reduced_word(rank: i32) -> impl Strategy<Value = Vec<i32>> {
    prop::collection::vec((1..=rank, any::<bool>()), 1..8).prop_map(|raw| {
        let mut w: Vec<i32> = Vec::new();
        for (i, neg) in raw {
            let l = if neg { -i } else { i };
            if w.last() == Some(&-l) {
                w.pop();
            } else {
                w.push(l);
            }
        }
        w
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_reduced_words_are_hyperbolic(word in reduced_word(4)) {
        let data = SchottkyData::build_from_literal(3, 1, "T^-1").unwrap();
        let m = data.eval_word(&word).unwrap();
        if word.is_empty() {
            prop_assert!(m.is_scalar());
        } else {
            prop_assert_eq!(m.classify(), MobiusClass::Hyperbolic);
        }
    }
}
