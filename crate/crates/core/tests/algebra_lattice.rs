//! Algebra and projection-lattice invariants over seeded random inputs.

use actlat::algebra::CMat;
use actlat::lattice::{
    commeasurable, commutator, decompose_into_vector_projections, is_ij_swapper, join, leq, meet,
    ortho, orthomodular_residual, vector_projection,
};
use actlat::{AlgebraShape, Element, SeededSampler, ToleranceConfig, C64};
use proptest::prelude::*;

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn shapes() -> impl Strategy<Value = AlgebraShape> {
    prop::collection::vec(1usize..4, 1..4).prop_map(|d| AlgebraShape::new(d).unwrap())
}

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn json_round_trip_is_exact(seed in any::<u64>(), shape in shapes()) {
        let x = SeededSampler::new(seed).random_element(&shape);
        prop_assert_eq!(Element::from_json(&x.to_json()).unwrap(), x);
    }

    #[test]
    fn four_unitaries_rebuild_the_input(seed in any::<u64>(), shape in shapes()) {
        let t = tol();
        let x = SeededSampler::new(seed).random_element(&shape);
        let parts = x.four_unitaries(&t).unwrap();
        prop_assert!(parts.reconstruct().dist(&x) <= 1e-10);
        for u in &parts.unitaries {
            prop_assert!(u.is_unitary(&t));
        }
    }

    #[test]
    fn positive_square_root_squares_back(seed in any::<u64>(), shape in shapes()) {
        let t = tol();
        let a = SeededSampler::new(seed).random_element(&shape);
        let pos = &a * &a.adjoint();
        let r = pos.positive_sqrt(&t).unwrap();
        prop_assert!(r.is_selfadjoint(&t));
        prop_assert!((&r * &r).dist(&pos) <= 1e-9 * (1.0 + pos.norm()));
    }

    #[test]
    fn right_projection_is_least(seed in any::<u64>(), shape in shapes()) {
        let t = tol();
        let mut smp = SeededSampler::new(seed);
        let cut = smp.random_projection_any_rank(&shape);
        let a = &smp.random_element(&shape) * &cut;
        let rp = a.rp(&t);
        prop_assert!(rp.is_projection(&t));
        prop_assert!((&a * &rp).dist(&a) <= 1e-10 * (1.0 + a.norm()));
        let bigger = join(&rp, &smp.random_projection_any_rank(&shape), &t).unwrap();
        prop_assert!(leq(&rp, &bigger, &t).unwrap());
        prop_assert!((&a * &bigger).dist(&a) <= 1e-9 * (1.0 + a.norm()));
    }

    #[test]
    fn lattice_laws(seed in any::<u64>(), shape in shapes()) {
        let t = tol();
        let mut smp = SeededSampler::new(seed);
        let p = smp.random_projection_any_rank(&shape);
        let q = smp.random_projection_any_rank(&shape);
        let pp = ortho(&ortho(&p, &t).unwrap(), &t).unwrap();
        prop_assert!(pp.dist(&p) <= 1e-12);
        let j = join(&p, &q, &t).unwrap();
        let m = meet(&p, &q, &t).unwrap();
        prop_assert!(j.dist(&join(&q, &p, &t).unwrap()) <= 1e-8);
        prop_assert!(leq(&p, &j, &t).unwrap() && leq(&m, &q, &t).unwrap());
        prop_assert!(join(&p, &m, &t).unwrap().dist(&p) <= 1e-8);
        prop_assert!(meet(&p, &j, &t).unwrap().dist(&p) <= 1e-8);
        let de_morgan = ortho(&j, &t).unwrap();
        let other = meet(&ortho(&p, &t).unwrap(), &ortho(&q, &t).unwrap(), &t).unwrap();
        prop_assert!(de_morgan.dist(&other) <= 1e-8);
    }

    #[test]
    fn orthomodular_law_on_nested_pairs(seed in any::<u64>(), shape in shapes()) {
        let t = tol();
        let mut smp = SeededSampler::new(seed);
        let q = smp.random_projection_any_rank(&shape);
        let p = meet(&q, &smp.random_projection_any_rank(&shape), &t).unwrap();
        prop_assert!(orthomodular_residual(&p, &q, &t).unwrap() <= 1e-8);
    }

    #[test]
    fn commeasurability_criteria_agree(seed in any::<u64>(), shape in shapes(), nested in any::<bool>()) {
        let t = tol();
        let mut smp = SeededSampler::new(seed);
        let p = smp.random_projection_any_rank(&shape);
        let q = if nested { join(&p, &smp.random_projection_any_rank(&shape), &t).unwrap() } else { smp.random_projection_any_rank(&shape) };
        let report = commeasurable(&p, &q, &t).unwrap();
        prop_assert!(report.criteria_agree);
        if nested {
            prop_assert!(report.verdict);
        }
    }

    #[test]
    fn vector_projection_decomposition_sums_back(seed in any::<u64>(), n in 1usize..5) {
        let t = tol();
        let shape = AlgebraShape::new(vec![n]).unwrap();
        let p = SeededSampler::new(seed).random_projection_any_rank(&shape);
        let parts = decompose_into_vector_projections(&p, &t).unwrap();
        let sum = parts.iter().fold(Element::zero(&shape), |acc, x| &acc + x);
        prop_assert!(sum.dist(&p) <= 1e-8);
    }

    #[test]
    fn unimodular_vector_projections_swap(seed in any::<u64>()) {
        let t = tol();
        let z = SeededSampler::new(seed).random_unimodular();
        let shape = AlgebraShape::new(vec![2]).unwrap();
        prop_assert!(is_ij_swapper(&vector_projection(&shape, 0, 1, &[z]).unwrap(), 0, 1, &t).unwrap());
    }
}

#[test]
fn frozen_lattice_values() {
    let t = tol();
    let s = AlgebraShape::new(vec![2]).unwrap();
    let e11 = Element::matrix_unit(&s, 0, 0).unwrap();
    let e22 = Element::matrix_unit(&s, 1, 1).unwrap();
    let p = vector_projection(&s, 0, 1, &[c(1.0, 0.0)]).unwrap();
    let half = CMat::from_element(2, 2, c(0.5, 0.0));
    assert!((p.block(0) - half).norm() < 1e-15);
    assert_eq!(join(&e11, &e22, &t).unwrap(), Element::identity(&s));
    assert!(meet(&e11, &p, &t).unwrap().norm() < 1e-12);
    assert!(join(&e11, &p, &t).unwrap().dist(&Element::identity(&s)) < 1e-12);
    assert!(
        commutator(&e11, &p, &t)
            .unwrap()
            .dist(&Element::identity(&s))
            < 1e-12
    );
    assert!(!commeasurable(&e11, &p, &t).unwrap().verdict);
    assert!(commeasurable(&e11, &e22, &t).unwrap().verdict);
    for alpha in [0.5, 2.0] {
        let q = vector_projection(&s, 0, 1, &[c(alpha, 0.0)]).unwrap();
        assert!(!is_ij_swapper(&q, 0, 1, &t).unwrap());
    }
}
