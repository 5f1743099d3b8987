//! Symmetry-group membership and factorization invariants.

use actlat::algebra::CMat;
use actlat::symmetry::{factor_det1, factor_det_pm1, sym_member, symmetry_of};
use actlat::{AlgebraShape, Element, SeededSampler, ToleranceConfig, C64};
use proptest::prelude::*;

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn shapes() -> impl Strategy<Value = AlgebraShape> {
    prop::collection::vec(1usize..6, 1..3).prop_map(|d| AlgebraShape::new(d).unwrap())
}

fn reflect_first(shape: &AlgebraShape) -> Element {
    Element::from_fn(shape, |_, n| {
        let mut m = CMat::identity(n, n);
        m[(0, 0)] = C64::new(-1.0, 0.0);
        m
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn det1_factorization(seed in any::<u64>(), shape in shapes()) {
        let t = tol();
        let u = SeededSampler::new(seed).random_det1_unitary(&shape);
        let fact = factor_det1(&u, &t).unwrap();
        let bound = shape.dims().iter().map(|n| 2 * (n - 1)).max().unwrap();
        prop_assert!(fact.factors.len() <= bound);
        prop_assert!(fact.residual <= 1e-8);
        for p in &fact.factors {
            prop_assert!(p.is_projection(&t));
        }
    }

    #[test]
    fn det_minus_one_needs_one_more(seed in any::<u64>(), shape in shapes()) {
        let t = tol();
        let u = &SeededSampler::new(seed).random_det1_unitary(&shape) * &reflect_first(&shape);
        let fact = factor_det_pm1(&u, &t).unwrap();
        let bound = shape.dims().iter().map(|n| 2 * (n - 1)).max().unwrap() + 1;
        prop_assert!(fact.factors.len() <= bound);
        prop_assert!(fact.product().dist(&u) <= 1e-8);
    }

    #[test]
    fn symmetry_words_stay_in_the_group(seed in any::<u64>(), shape in shapes(), len in 0usize..7) {
        let t = tol();
        let mut smp = SeededSampler::new(seed);
        let mut word = Element::identity(&shape);
        for _ in 0..len {
            word = &word * &symmetry_of(&smp.random_projection_any_rank(&shape), &t).unwrap();
        }
        prop_assert!(sym_member(&word, &t).unwrap());
    }

    #[test]
    fn generic_phase_is_rejected(theta in 0.05f64..1.5) {
        let t = tol();
        let shape = AlgebraShape::new(vec![3]).unwrap();
        let mut m = CMat::identity(3, 3);
        m[(0, 0)] = C64::from_polar(1.0, theta);
        let u = Element::new(shape, vec![m]).unwrap();
        prop_assert!(!sym_member(&u, &t).unwrap());
    }
}

#[test]
fn swap_takes_three_factors() {
    let t = tol();
    let s = AlgebraShape::new(vec![2]).unwrap();
    let one = C64::new(1.0, 0.0);
    let zero = C64::new(0.0, 0.0);
    let swap = Element::new(
        s.clone(),
        vec![CMat::from_row_slice(2, 2, &[zero, one, one, zero])],
    )
    .unwrap();
    let fact = factor_det_pm1(&swap, &t).unwrap();
    assert_eq!(fact.factors.len(), 3);
    assert!(fact.residual < 1e-12);
    assert!(factor_det1(&Element::identity(&s), &t)
        .unwrap()
        .factors
        .is_empty());
    let mut m = CMat::identity(2, 2);
    m[(0, 0)] = C64::from_polar(1.0, std::f64::consts::FRAC_PI_4);
    assert!(!sym_member(&Element::new(s, vec![m]).unwrap(), &t).unwrap());
}
