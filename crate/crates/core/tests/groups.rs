mod common;

use std::cmp::Ordering;

use proptest::prelude::*;
use rand::Rng;

use common::{braid_eq, braid_words, lex_lt};
use skewfrac::group::{
    b3_from_semidirect, b3_to_semidirect, check_cone_axioms, conradian_witness, dd_positive, handle_reduce,
    sigma1_class, Sigma1Class,
};
use skewfrac::{Group, GroupElement};

#[test]
fn burau_satisfies_braid_relation() {
    assert!(braid_eq(&[1, 2, 1], &[2, 1, 2]));
    assert!(!braid_eq(&[1, 2], &[2, 1]));
    assert!(braid_eq(&[1, -1], &[]));
}

#[test]
fn canonical_form_decides_equality_like_burau() {
    let g = Group::braid_b3();
    let mut r = common::rng(11);
    for _ in 0..400 {
        let len = r.gen_range(0..8);
        let a: Vec<i32> = (0..len).map(|_| [1, -1, 2, -2][r.gen_range(0..4)]).collect();
        let b = if r.gen_bool(0.5) {
            let mut b = a.clone();
            let i = r.gen_range(0..=b.len());
            b.splice(i..i, [1, 2, 1, -2, -1, -2]);
            b
        } else {
            (0..len).map(|_| [1, -1, 2, -2][r.gen_range(0..4)]).collect()
        };
        let same = g.compare(&GroupElement::Word(a.clone()), &GroupElement::Word(b.clone())).unwrap() == Ordering::Equal;
        assert_eq!(same, braid_eq(&a, &b), "{a:?} vs {b:?}");
    }
}

#[test]
fn semidirect_round_trip_is_the_same_braid() {
    for len in 0..=6 {
        for w in braid_words(len, true) {
            let back = b3_from_semidirect(&b3_to_semidirect(&w));
            assert!(braid_eq(&w, &back), "{w:?} -> {back:?}");
        }
    }
}

#[test]
fn handle_reduction_is_sound_on_short_words() {
    for len in 0..=7 {
        for w in braid_words(len, false) {
            let red = handle_reduce(&w);
            assert!(braid_eq(&w, &red), "{w:?} -> {red:?}");
            assert!(!(red.contains(&1) && red.contains(&-1)), "{w:?} -> {red:?} still has a handle");
        }
    }
}

#[test]
fn dd_cone_generators_and_identity() {
    assert!(dd_positive(&[1, 2]));
    assert!(dd_positive(&[-2]));
    assert!(!dd_positive(&[]));
    assert_eq!(sigma1_class(&[2, -2]), Sigma1Class::Free(0));
    assert!(dd_positive(&[1, 2, 1, 2, -2, -2]));
}

#[test]
fn cone_axioms_z3_and_semidirect() {
    for rank in 1..=3 {
        let g = Group::free_abelian(rank);
        let r = check_cone_axioms(&g, &g.ball(3), &g.ball(2)).unwrap();
        assert!(r.passed(), "rank {rank}: {r:?}");
    }
    let b3 = skewfrac::group::b3_structure();
    let r = check_cone_axioms(b3, &b3.ball(3), &b3.ball(2)).unwrap();
    assert!(r.passed(), "{r:?}");
}

#[test]
fn dd_order_is_not_conradian_at_small_bound() {
    let g = Group::braid_b3();
    let (u, w) = (GroupElement::Word(vec![1, 2]), GroupElement::Word(vec![-2]));
    assert_eq!(conradian_witness(&g, &u, &w, 16).unwrap(), None);
}

proptest! {
    #[test]
    fn lex_matches_independent_rule(a in prop::collection::vec(-5i64..5, 3), b in prop::collection::vec(-5i64..5, 3)) {
        let g = Group::free_abelian(3);
        let ord = g.compare(&GroupElement::Int(a.clone()), &GroupElement::Int(b.clone())).unwrap();
        prop_assert_eq!(ord == Ordering::Less, lex_lt(&a, &b));
    }

    #[test]
    fn lex_is_left_invariant(a in prop::collection::vec(-5i64..5, 2), b in prop::collection::vec(-5i64..5, 2), c in prop::collection::vec(-5i64..5, 2)) {
        let g = Group::free_abelian(2);
        let (a, b, c) = (GroupElement::Int(a), GroupElement::Int(b), GroupElement::Int(c));
        let before = g.compare(&a, &b).unwrap();
        let after = g.compare(&g.mul(&c, &a).unwrap(), &g.mul(&c, &b).unwrap()).unwrap();
        prop_assert_eq!(before, after);
    }

    #[test]
    fn abelian_positive_pairs_have_witnesses(a in prop::collection::vec(-4i64..4, 2), b in prop::collection::vec(-4i64..4, 2)) {
        let g = Group::free_abelian(2);
        let pos = |v: GroupElement| if g.is_positive(&v).unwrap() { v } else { g.inv(&v) };
        let (a, b) = (GroupElement::Int(a), GroupElement::Int(b));
        prop_assume!(!g.is_identity(&a) && !g.is_identity(&b));
        let (a, b) = (pos(a), pos(b));
        prop_assert!(conradian_witness(&g, &a, &b, 64).unwrap().is_some());
    }

    #[test]
    fn b3_order_is_left_invariant(a in prop::collection::vec(prop::sample::select(vec![1, -1, 2, -2]), 0..6),
                                  b in prop::collection::vec(prop::sample::select(vec![1, -1, 2, -2]), 0..6),
                                  c in prop::collection::vec(prop::sample::select(vec![1, -1, 2, -2]), 0..6)) {
        let g = Group::braid_b3();
        let (a, b, c) = (GroupElement::Word(a), GroupElement::Word(b), GroupElement::Word(c));
        let before = g.compare(&a, &b).unwrap();
        let after = g.compare(&g.mul(&c, &a).unwrap(), &g.mul(&c, &b).unwrap()).unwrap();
        prop_assert_eq!(before, after);
    }
}
