mod common;

use rand::Rng;

use common::{compare_models, random_sized};
use skewfrac::crossed::CrossedProduct;
use skewfrac::endo::{EndoRep, EndoSpace};
use skewfrac::expr::{eval_certified, parse_expr};
use skewfrac::group::Subgroup;
use skewfrac::hahn::Frontier;
use skewfrac::scalar;
use skewfrac::tower::{exp, Tower};
use skewfrac::{Error, GroupElement};

fn space(cp: CrossedProduct, target: &[i64]) -> EndoSpace {
    EndoSpace::new(cp, Frontier::Below(GroupElement::Int(target.to_vec())))
}

#[test]
fn embedding_is_a_ring_homomorphism() {
    let mut r = common::rng(31);
    let cp = common::quantum(scalar::int(2));
    let sp = space(cp.clone(), &[0, 6]);
    for _ in 0..30 {
        let x = random_sized(&mut r, 2, 1..4, 2);
        let y = random_sized(&mut r, 2, 1..4, 2);
        let g = GroupElement::Int(common::random_vec(&mut r, 2, 2));
        let (fx, fy) = (EndoRep::embed(x.clone()), EndoRep::embed(y.clone()));
        let prod = sp.column(&EndoRep::embed(cp.mul(&x, &y).unwrap()), &g).unwrap();
        let comp = sp.column(&EndoRep::compose(&fx, &fy), &g).unwrap();
        assert!(cp.agree_on_common(&prod, &comp).unwrap(), "{prod:?} vs {comp:?}");
        assert!(!comp.terms().is_empty());
        let sum = sp.column(&EndoRep::embed(cp.add(&x, &y).unwrap()), &g).unwrap();
        assert_eq!(sum.terms(), sp.column(&EndoRep::sum(&fx, &fy), &g).unwrap().terms());
    }
}

#[test]
fn nonzero_elements_are_v_compatible_and_surjective() {
    let mut r = common::rng(32);
    let cp = common::group_ring(1);
    let sp = space(cp.clone(), &[40]);
    let window: Vec<GroupElement> = (-10..=10).map(|i| GroupElement::Int(vec![i])).collect();
    for _ in 0..10 {
        let x = random_sized(&mut r, 1, 1..4, 3);
        let f = EndoRep::embed(x);
        assert!(sp.check_v_compatible(&f, &window).unwrap().passed());
        assert!(!sp.check_surjective_on_g(&f, &window).unwrap().is_empty());
    }
}

#[test]
fn inverse_is_two_sided_on_certified_terms() {
    let cp = common::quantum(scalar::int(3));
    let sp = space(cp.clone(), &[0, 4]);
    let w = cp.group.ball(2);
    let f = EndoRep::embed(cp.parse("[x] + [y] + 2*[x^-1.y]").unwrap());
    let inv = sp.invert_endo(&f, &w).unwrap();
    let one = cp.monomial_series(cp.group.identity(), scalar::one()).unwrap();
    for g in [cp.group.identity(), GroupElement::Int(vec![1, 0]), GroupElement::Int(vec![-1, 1])] {
        let xg = cp.monomial_series(g, scalar::one()).unwrap();
        let right = sp.apply(&f, &sp.apply(&inv, &xg).unwrap()).unwrap();
        let left = sp.apply(&inv, &sp.apply(&f, &xg).unwrap()).unwrap();
        assert!(cp.agree_on_common(&right, &xg).unwrap());
        assert!(cp.agree_on_common(&left, &xg).unwrap());
    }
    assert!(cp.agree_on_common(&sp.apply(&f, &sp.series_of(&inv).unwrap()).unwrap(), &one).unwrap());
}

#[test]
fn supports_stay_in_the_subgroup_translate() {
    let cp = common::group_ring(2);
    let sp = space(cp.clone(), &[0, 4]);
    let w = cp.group.ball(2);
    let d = sp.from_expr(&parse_expr(&cp, "inv(1 - [x]) * (2 + [x^-1])").unwrap(), &w).unwrap();
    let m = cp.series_from_cp(&cp.parse("[(0,1)] + 3*[(2,2)]").unwrap()).unwrap();
    assert!(sp.support_containment_check(&d, &m, &Subgroup::LexPrefix(1)).unwrap());
    let outside = EndoRep::embed(cp.parse("[y]").unwrap());
    assert!(matches!(sp.support_containment_check(&outside, &m, &Subgroup::LexPrefix(1)), Err(Error::Precondition(_))));
}

#[test]
fn models_agree_on_a_small_corpus() {
    let cases = [
        (common::group_ring(1), "inv(1 - [x])", vec![12], vec![12]),
        (common::group_ring(1), "inv(2 + [x] - [x^3]) * [x^-1]", vec![10], vec![14]),
        (common::group_ring(2), "inv(1 - [x] - [y])", vec![5, 3], vec![0, 3]),
        (common::quantum(scalar::int(2)), "inv([x] + [y])", vec![3, 12], vec![0, 6]),
        (common::quantum(scalar::int(2)), "[y] * inv(1 - [x]) + inv([y] + [x^2.y])", vec![4, 4], vec![0, 4]),
    ];
    for (cp, src, bx, target) in cases {
        let e = parse_expr(&cp, src).unwrap();
        let t = Tower::new(cp.clone(), bx.iter().map(|x| exp(*x)).collect()).unwrap();
        let v = eval_certified(&e, &t, t.working()).unwrap();
        let sp = space(cp.clone(), &target);
        let w = if bx.len() == 1 { cp.group.ball(10) } else { cp.group.ball(2) };
        let f = sp.from_expr(&e, &w).unwrap();
        let s = sp.series_of(&f).unwrap();
        let n = compare_models(&s, &t.flat_terms(&v).unwrap(), &bx).unwrap_or_else(|d| panic!("{src}: {d}"));
        assert!(n > 0, "{src}: empty comparison region");
    }
}

#[test]
fn hughes_and_transcendence() {
    let cp = common::group_ring(2);
    let sp = space(cp.clone(), &[0, 8]);
    let w = cp.group.ball(2);
    let n = Subgroup::LexPrefix(1);
    let mut r = common::rng(33);
    let ds: Vec<EndoRep> = (0..3)
        .map(|_| {
            let x = random_sized(&mut r, 1, 2..4, 2);
            let lifted = skewfrac::crossed::CpElement::from_terms(x.terms().map(|(g, c)| {
                let GroupElement::Int(v) = g else { unreachable!() };
                (GroupElement::Int(vec![v[0], 0]), c.clone())
            }));
            let f = EndoRep::embed(lifted);
            if r.gen_bool(0.5) {
                sp.invert_endo(&f, &w).unwrap()
            } else {
                f
            }
        })
        .collect();
    let hs: Vec<GroupElement> = (0..3).map(|i| GroupElement::Int(vec![i, i])).collect();
    assert!(sp.hughes_independence(&n, &hs, &ds).unwrap());
    assert!(sp.transcendence_check(&n, &GroupElement::Int(vec![0, 1]), 6, &ds).unwrap());
    assert!(matches!(
        sp.transcendence_check(&n, &GroupElement::Int(vec![2, 0]), 2, &ds),
        Err(Error::Precondition(_))
    ));
}
