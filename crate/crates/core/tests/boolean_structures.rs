//! Exact Boolean, orthomodular and piecewise Boolean structures.

use actlat::boolean::{
    boolean_algebra, colimit_report, mo_lattice, non_transitive_example, oml_commeas, pcba_to_oml,
    proj_of_f, stone_report, FiniteOml, FinitePcba,
};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn boolean_algebra_laws(n in 0usize..7, a in any::<u64>(), b in any::<u64>(), c in any::<u64>()) {
        let ba = boolean_algebra(n);
        let mask = ba.top();
        let (a, b, c) = (a & mask, b & mask, c & mask);
        prop_assert_eq!(ba.meet(a, ba.join(b, c)), ba.join(ba.meet(a, b), ba.meet(a, c)));
        prop_assert_eq!(ba.complement(ba.complement(a)), a);
        prop_assert_eq!(ba.join(a, ba.complement(a)), ba.top());
        prop_assert!(ba.leq(ba.meet(a, b), a));
    }
}

#[test]
fn stone_duality_counts() {
    for n in 0..=5 {
        let report = stone_report(&boolean_algebra(n));
        assert_eq!(report.atoms, n);
        assert_eq!(report.elements, 1u64 << n);
        assert_eq!(report.characters, n);
        assert_eq!(report.function_algebra_dimension, n);
        assert!(report.isomorphic);
    }
}

#[test]
fn finite_equivalence_on_boolean_and_mo_families() {
    let mut family: Vec<FiniteOml> = (1..=5)
        .map(|n| boolean_algebra(n).to_oml().unwrap())
        .collect();
    family.extend((1..=4).map(mo_lattice));
    for p in family {
        let b = oml_commeas(&p).unwrap();
        assert!(proj_of_f(&b).unwrap().isomorphic, "{}", p.to_json());
        assert_eq!(pcba_to_oml(&b).unwrap(), p);
    }
}

#[test]
fn mo2_sizes_and_colimit() {
    let p = mo_lattice(2);
    assert_eq!(p.size(), 6);
    assert!(!p.is_distributive());
    let b = oml_commeas(&p).unwrap();
    assert_eq!(b.blocks().len(), 2);
    let report = colimit_report(&b).unwrap();
    assert!(!report.commutative);
    assert_eq!(report.pieces.len(), 2);
    assert!(report.pieces.iter().all(|piece| piece.dimension == 2));
}

#[test]
fn non_transitive_input_has_no_oml() {
    let b = non_transitive_example();
    assert_eq!(b.size(), 12);
    assert!(pcba_to_oml(&b).is_err());
    assert!(proj_of_f(&b).unwrap().isomorphic);
}

#[test]
fn json_round_trips() {
    let p = mo_lattice(3);
    assert_eq!(FiniteOml::from_json(&p.to_json()).unwrap(), p);
    let b = oml_commeas(&p).unwrap();
    assert_eq!(FinitePcba::from_json(&b.to_json()).unwrap(), b);
    assert!(FiniteOml::from_json("{\"elements\":[\"0\"]}").is_err());
}
