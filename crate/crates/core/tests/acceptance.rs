//! Acceptance suite. Runs every criterion in order, prints one PASS/FAIL line per criterion
//! and exits nonzero if any failed or overran its time limit.

mod common;

use std::collections::HashMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use common::{
    braid_eq, braid_words, check_inverse_naive, compare_models, convolve, eta_oracle, int_coords, lex_lt,
    random_element, random_expr, random_sized, terms_from, terms_of, Terms,
};
use skewfrac::crossed::{CpElement, CrossedProduct, Twist};
use skewfrac::demo::{b3_demo, DemoOptions};
use skewfrac::endo::{EndoRep, EndoSpace};
use skewfrac::expr::{eval_certified, parse_expr, RationalExpr};
use skewfrac::group::{b3_structure, check_cone_axioms, conradian_witness, handle_reduce, Subgroup, DD_U, DD_W};
use skewfrac::hahn::Frontier;
use skewfrac::repr::{coefficients_agree, direct_coefficients, left_repr, transversal_change, LeftRepr};
use skewfrac::scalar::{self, Scalar};
use skewfrac::tower::{exp, Exp, Tower, TowerElem};
use skewfrac::{Error, Group, GroupElement, GroupSpec};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn ok<T, E: std::fmt::Display>(r: Result<T, E>, what: &str) -> Result<T, String> {
    r.map_err(|e| format!("{what}: {e}"))
}

fn tower(cp: CrossedProduct, w: &[i64]) -> Tower {
    Tower::new(cp, w.iter().map(|x| exp(*x)).collect()).unwrap()
}

fn exps(v: &[i64]) -> Vec<Exp> {
    v.iter().map(|x| exp(*x)).collect()
}

/// Integer box `{g : g_i < b_i}` on which a tower element is certified.
fn box_of(t: &Tower, v: &TowerElem) -> Vec<i64> {
    t.certified_box(t.rank(), v)
        .iter()
        .map(|f| f.map(|e| e.floor().to_integer()).unwrap_or(i64::MAX / 4))
        .collect()
}

fn frontier(v: &[i64]) -> Frontier {
    Frontier::Below(GroupElement::Int(v.to_vec()))
}

fn window_2d() -> Vec<GroupElement> {
    let mut w = Vec::new();
    for y in -2..=1 {
        for x in -2..=2 {
            w.push(GroupElement::Int(vec![x, y]));
        }
    }
    w
}

fn window_1d() -> Vec<GroupElement> {
    (-10..10).map(|i| GroupElement::Int(vec![i])).collect()
}

// ---------------------------------------------------------------------------

fn cocycle_suite() -> Outcome {
    let mut r = common::rng(101);
    let g = Group::free_abelian(2);
    let samples = g.ball(3);
    let n = samples.len();
    let triples: Vec<(usize, usize, usize)> =
        (0..200).map(|_| (r.gen_range(0..n), r.gen_range(0..n), r.gen_range(0..n))).collect();
    let mut cases: Vec<(Option<Scalar>, CrossedProduct)> = vec![(None, CrossedProduct::group_ring(g.clone()))];
    for q in [scalar::int(2), scalar::int(3), scalar::ratio(-1, 2)] {
        cases.push((Some(q.clone()), common::quantum(q)));
    }
    for (q, cp) in &cases {
        let rep = cp.validate_cocycle_on(&samples, &triples);
        ensure(rep.passed() && rep.triples == 200, || format!("q = {q:?}: {rep}"))?;
        for &(i, j, k) in &triples {
            let (a, b, c) = (int_coords(&samples[i]), int_coords(&samples[j]), int_coords(&samples[k]));
            let add = |x: &[i64], y: &[i64]| -> Vec<i64> { x.iter().zip(y).map(|(s, t)| s + t).collect() };
            let e = |x: &[i64], y: &[i64]| eta_oracle(q.as_ref(), x, y);
            ensure(cp.eta(&samples[i], &samples[j]) == e(&a, &b), || format!("η differs from the oracle at {a:?}, {b:?}"))?;
            ensure(e(&b, &c) * e(&a, &add(&b, &c)) == e(&a, &b) * e(&add(&a, &b), &c), || "oracle cocycle".into())?;
        }
    }
    let (x, y) = (GroupElement::Int(vec![1, 0]), GroupElement::Int(vec![0, 1]));
    let mut entries = HashMap::new();
    entries.insert((x, y), scalar::int(5));
    let bad = ok(
        CrossedProduct::new(g.clone(), Twist::Table { base: Box::new(Twist::quantum(scalar::int(2))), entries }),
        "table twist",
    )?;
    let rep = bad.validate_cocycle(&g.ball(1));
    ensure(!rep.passed(), || "corrupted entry not detected".into())?;
    Ok(format!("4 twists x 200 triples clean; corrupted entry flagged in {} triples", rep.cocycle.len()))
}

fn lex_extreme(t: &Terms, want_min: bool) -> Vec<i64> {
    t.keys()
        .cloned()
        .reduce(|a, b| if lex_lt(&b, &a) == want_min { b } else { a })
        .unwrap()
}

fn unit_law() -> Outcome {
    let mut r = common::rng(102);
    let mut products = 0;
    for rank in [1, 2] {
        let cp = common::group_ring(rank);
        for _ in 0..250 {
            let x = random_sized(&mut r, rank, 2..6, 4);
            ensure(!cp.is_unit(&x), || format!("{} reported a unit", cp.format(&x)))?;
            let m = random_element(&mut r, rank, 1, 6);
            ensure(cp.is_unit(&m), || format!("monomial {} not a unit", cp.format(&m)))?;
            ensure(ok(cp.mul(&m, &ok(cp.unit_inverse(&m), "unit inverse")?), "mul")? == cp.one(), || "m·m⁻¹ ≠ 1".into())?;

            let y = random_sized(&mut r, rank, 1..6, 4);
            let p = terms_of(&ok(cp.mul(&x, &y), "mul")?);
            let (tx, ty) = (terms_of(&x), terms_of(&y));
            for want_min in [true, false] {
                let (gx, gy) = (lex_extreme(&tx, want_min), lex_extreme(&ty, want_min));
                let gp: Vec<i64> = gx.iter().zip(&gy).map(|(a, b)| a + b).collect();
                ensure(!p.is_empty() && lex_extreme(&p, want_min) == gp, || format!("extreme term of {p:?} is not {gp:?}"))?;
                ensure(p[&gp] == &tx[&gx] * &ty[&gy], || "extreme coefficient".into())?;
            }
            products += 1;
        }
    }
    Ok(format!("500 non-units, 500 monomial units, {products} products with extremal terms"))
}

fn inversion_round_trip() -> Outcome {
    let mut r = common::rng(103);
    let mut positions = 0;
    let mut times = Vec::new();
    for (rank, count, w, span) in [(1, 100, vec![32], 4), (2, 50, vec![4, 16], 2)] {
        let start = Instant::now();
        let cp = common::group_ring(rank);
        let t = tower(cp, &w);
        for _ in 0..count {
            let x = random_sized(&mut r, rank, 1..5, span);
            let xv = ok(t.from_cp(&x), "embed")?;
            let direct = ok(t.invert(rank, &xv), "invert")?;
            ensure(t.is_one_certified(rank, &t.mul(rank, &xv, &direct)), || "m·m⁻¹ ≠ 1".into())?;
            ensure(t.is_one_certified(rank, &t.mul(rank, &direct, &xv)), || "m⁻¹·m ≠ 1".into())?;
            let inv = ok(eval_certified(&RationalExpr::inv(RationalExpr::constant(x.clone())), &t, &exps(&w)), "eval")?;
            let bx = box_of(&t, &inv);
            ensure(bx.iter().zip(&w).all(|(b, w)| b >= w), || format!("box {bx:?} short of {w:?}"))?;
            positions += check_inverse_naive(None, &terms_of(&x), &terms_from(&ok(t.flat_terms(&inv), "flatten")?), &bx)?;
        }
        times.push(format!("{:.2} s", start.elapsed().as_secs_f64()));
    }
    Ok(format!("150 inverses, {positions} product coefficients checked by naive convolution ({})", times.join(" + ")))
}

fn prefix(t: &Terms, n: i64) -> Terms {
    t.iter().filter(|(k, _)| k[0] < n).map(|(k, v)| (k.clone(), v.clone())).collect()
}

fn geometric_oracle() -> Outcome {
    let cp = common::group_ring(1);
    let t = tower(cp.clone(), &[32]);
    let eval = |s: &str| -> Result<Terms, String> {
        let e = ok(parse_expr(&cp, s), "parse")?;
        let v = ok(eval_certified(&e, &t, &exps(&[32])), "eval")?;
        ensure(box_of(&t, &v)[0] >= 32, || "not certified to 32".into())?;
        Ok(prefix(&terms_from(&ok(t.flat_terms(&v), "flatten")?), 32))
    };
    let want: Terms = (0..32).map(|k| (vec![k], scalar::one())).collect();
    ensure(eval("inv(1 - [x])")? == want, || "inv(1 - x) differs from the geometric series".into())?;
    let one_minus_x: Terms = [(vec![0], scalar::one()), (vec![1], -scalar::one())].into_iter().collect();
    let cubes: Terms = (0..=11).map(|k| (vec![3 * k], scalar::one())).collect();
    let want = prefix(&convolve(None, &one_minus_x, &cubes), 32);
    ensure(eval("inv(1 + [x] + [x^2])")? == want, || "inv(1 + x + x^2) differs from (1 - x)·Σ x^{3k}".into())?;
    Ok("both prefixes exact below x^32".into())
}

fn quantum_torus_division() -> Outcome {
    let q = scalar::int(2);
    let cp = common::quantum(q.clone());
    let t = tower(cp.clone(), &[3, 12]);
    let mut checked = 0;
    for s in ["[x] + [y]", "1 - [x] - [y]"] {
        let x = ok(cp.parse(s), "parse")?;
        let xv = ok(t.from_cp(&x), "embed")?;
        let inv = ok(t.invert(2, &xv), "invert")?;
        ensure(t.is_one_certified(2, &t.mul(2, &xv, &inv)), || format!("({s})·inv ≠ 1"))?;
        ensure(t.is_one_certified(2, &t.mul(2, &inv, &xv)), || format!("inv·({s}) ≠ 1"))?;
        checked += check_inverse_naive(Some(&q), &terms_of(&x), &terms_from(&ok(t.flat_terms(&inv), "flatten")?), &box_of(&t, &inv))?;
    }
    Ok(format!("both inverses two-sided; {checked} coefficients checked by naive twisted convolution"))
}

// ---------------------------------------------------------------------------

fn sample_repr(r: &mut ChaCha8Rng, t: &Tower, req: &[Exp]) -> Result<(RationalExpr, TowerElem, LeftRepr), String> {
    loop {
        let e = random_expr(r, 2, 3, 2);
        match left_repr(&e, t, req) {
            Ok((v, rep)) => return Ok((e, v, rep)),
            Err(Error::SingleTermOnly | Error::ZeroUpToFrontier { .. } | Error::FrontierBudgetExceeded { .. }) => {}
            Err(other) => return Err(format!("left_repr: {other}")),
        }
    }
}

fn left_representations() -> Outcome {
    let t = tower(common::group_ring(2), &[6, 6]);
    let req = exps(&[4, 4]);
    let mut r = common::rng(106);
    for _ in 0..100 {
        let (_, v, rep) = sample_repr(&mut r, &t, &req)?;
        let back = t.mul(2, &t.monomial(2, &rep.h, scalar::one()), &rep.assemble(&t));
        ensure(t.agree(2, &back, &v), || "x_h · Σ c_t x_t differs from the value".into())?;
    }
    for _ in 0..20 {
        let (_, v, rep) = sample_repr(&mut r, &t, &req)?;
        let mut c = vec![exp(0); 2];
        for ci in c.iter_mut().take(rep.level) {
            *ci = exp(r.gen_range(-2..=2));
        }
        let predicted = ok(transversal_change(&t, &rep, &c), "transversal change")?;
        let hbar: Vec<Exp> = rep.h.iter().zip(&c).map(|(a, b)| a - b).collect();
        let direct = ok(direct_coefficients(&t, &v, &hbar, rep.level), "direct coefficients")?;
        ensure(coefficients_agree(&t, rep.level, &predicted, &direct), || "shift formula mismatch".into())?;
    }
    let mut rearranged = 0;
    for _ in 0..10 {
        let (e, _, rep) = sample_repr(&mut r, &t, &req)?;
        for _ in 0..10 {
            let e2 = common::rearrange(&mut r, &e, &t.cp);
            let (_, rep2) = ok(left_repr(&e2, &t, &req), "left_repr of rearrangement")?;
            ensure(
                rep2.level == rep.level && rep2.jump == rep.jump && rep2.h[rep.level..] == rep.h[rep.level..],
                || format!("rearrangement moved the jump or coset: {:?} vs {:?}", rep.h, rep2.h),
            )?;
            rearranged += 1;
        }
    }
    Ok(format!("100 round trips, 20 transversal shifts, {rearranged} rearrangements"))
}

fn cross_model_agreement() -> Outcome {
    let mut r = common::rng(107);
    let families: [(CrossedProduct, usize, usize, Vec<i64>, Vec<i64>, Vec<GroupElement>); 3] = [
        (common::group_ring(1), 20, 1, vec![16], vec![16], window_1d()),
        (common::group_ring(2), 15, 2, vec![4, 3], vec![0, 3], window_2d()),
        (common::quantum(scalar::int(2)), 15, 2, vec![4, 3], vec![0, 3], window_2d()),
    ];
    let (mut exprs, mut terms) = (0, 0);
    for (cp, count, rank, w, target, window) in families {
        let t = tower(cp.clone(), &w);
        let sp = EndoSpace::new(cp.clone(), frontier(&target));
        let mut done = 0;
        while done < count {
            let e = random_expr(&mut r, rank, 2, 1);
            let v = match eval_certified(&e, &t, &exps(&w)) {
                Ok(v) => v,
                Err(Error::ZeroUpToFrontier { .. } | Error::FrontierBudgetExceeded { .. }) => continue,
                Err(other) => return Err(format!("eval: {other}")),
            };
            let shown = e.display(&cp).to_string();
            let f = ok(sp.from_expr(&e, &window), &shown)?;
            let s = ok(sp.series_of(&f), &shown)?;
            let n = compare_models(&s, &ok(t.flat_terms(&v), "flatten")?, &box_of(&t, &v))
                .map_err(|d| format!("{shown}: {d}"))?;
            ensure(n > 0 || t.is_zero_certified(&v), || format!("{shown}: empty comparison"))?;
            terms += n;
            done += 1;
        }
        exprs += done;
    }
    Ok(format!("{exprs} expressions, {terms} nonzero terms agree"))
}

fn endo_laws() -> Outcome {
    let mut r = common::rng(108);
    let q = scalar::int(2);
    let (mut pairs, mut elements, mut applications) = (0, 0, 0);
    for (cp, qq) in [(common::quantum(q.clone()), Some(&q)), (common::group_ring(2), None)] {
        let sp = EndoSpace::new(cp.clone(), frontier(&[0, 6]));
        for _ in 0..100 {
            let x = random_sized(&mut r, 2, 1..4, 2);
            let y = random_sized(&mut r, 2, 1..4, 2);
            let g = GroupElement::Int(common::random_vec(&mut r, 2, 2));
            let (fx, fy) = (EndoRep::embed(x.clone()), EndoRep::embed(y.clone()));
            let xg: Terms = [(int_coords(&g), scalar::one())].into_iter().collect();
            let col = ok(sp.column(&fx, &g), "column")?;
            let want = convolve(qq, &terms_of(&x), &xg);
            ensure(terms_from(col.terms()) == want, || "ι(x)(x_g) ≠ x·x_g".into())?;
            let prod = ok(sp.column(&EndoRep::embed(ok(cp.mul(&x, &y), "mul")?), &g), "column")?;
            let comp = ok(sp.column(&EndoRep::compose(&fx, &fy), &g), "column")?;
            ensure(ok(cp.agree_on_common(&prod, &comp), "agree")? && !comp.is_zero(), || "ι(xy) ≠ ι(x)ι(y)".into())?;
            let sum = ok(sp.column(&EndoRep::embed(ok(cp.add(&x, &y), "add")?), &g), "column")?;
            let fsum = ok(sp.column(&EndoRep::sum(&fx, &fy), &g), "column")?;
            ensure(sum.terms() == fsum.terms(), || "ι(x + y) ≠ ι(x) + ι(y)".into())?;
            pairs += 1;
        }
    }

    let cases = [
        (common::group_ring(1), 1, frontier(&[40]), window_1d()),
        (common::group_ring(2), 2, frontier(&[0, 6]), window_2d()),
        (common::quantum(q.clone()), 2, frontier(&[0, 6]), window_2d()),
    ];
    for (cp, rank, target, window) in cases {
        let sp = EndoSpace::new(cp.clone(), target);
        for i in 0..20 {
            let x = random_sized(&mut r, rank, 1..4, 2);
            let f = EndoRep::embed(x.clone());
            let rep = ok(sp.check_v_compatible(&f, &window), "v-compatibility")?;
            ensure(rep.passed(), || format!("{} not v-compatible: {rep}", cp.format(&x)))?;
            ok(sp.check_surjective_on_g(&f, &window), "surjectivity")?;
            elements += 1;
            if i % 4 != 0 {
                continue;
            }
            let inv = ok(sp.invert_endo(&f, &window), "invert_endo")?;
            for g in window.iter().step_by(3) {
                let xg = ok(cp.monomial_series(g.clone(), scalar::one()), "monomial")?;
                for composite in [ok(sp.apply(&f, &ok(sp.apply(&inv, &xg), "apply")?), "apply")?, ok(sp.apply(&inv, &ok(sp.apply(&f, &xg), "apply")?), "apply")?] {
                    ensure(ok(cp.agree_on_common(&composite, &xg), "agree")?, || "f∘f⁻¹ ≠ id".into())?;
                    ensure(ok(cp.below(g, composite.frontier()), "below")?, || "identity term not certified".into())?;
                }
            }
        }
    }

    let cp = common::group_ring(2);
    let sp = EndoSpace::new(cp.clone(), frontier(&[0, 6]));
    let n = Subgroup::LexPrefix(1);
    for _ in 0..20 {
        let d = ok(sp.invert_endo(&EndoRep::embed(on_first_axis(&random_sized(&mut r, 1, 2..4, 2))), &window_2d()), "invert")?;
        let d = EndoRep::compose(&d, &EndoRep::embed(on_first_axis(&random_sized(&mut r, 1, 1..3, 2))));
        for _ in 0..5 {
            let m = random_sized(&mut r, 2, 1..3, 2);
            let m = ok(cp.series_from_cp(&m), "series")?;
            ensure(ok(sp.support_containment_check(&d, &m, &n), "containment")?, || "support escaped U·supp m".into())?;
            applications += 1;
        }
    }
    Ok(format!("{pairs} homomorphism pairs, {elements} elements compatible and surjective, {applications} containment checks"))
}

fn on_first_axis(x: &CpElement) -> CpElement {
    CpElement::from_terms(x.terms().map(|(g, c)| (GroupElement::Int(vec![int_coords(g)[0], 0]), c.clone())))
}

fn hughes_checks() -> Outcome {
    let cp = common::group_ring(2);
    let sp = EndoSpace::new(cp.clone(), frontier(&[0, 8]));
    let n = Subgroup::LexPrefix(1);
    let w = window_2d();
    let parse = |s: &str| cp.parse(s).map(EndoRep::embed);
    let a = ok(parse("1 - [x]"), "parse")?;
    let b = ok(parse("2*[x^-1] + 3 + [x^2]"), "parse")?;
    let c = ok(parse("[x] - 5*[x^3]"), "parse")?;
    let ia = ok(sp.invert_endo(&a, &w), "invert")?;
    let ib = ok(sp.invert_endo(&b, &w), "invert")?;
    let ds = vec![ia.clone(), EndoRep::compose(&ib, &c), EndoRep::sum(&ia, &b), c.clone()];
    let hs: Vec<GroupElement> = [(0, 0), (1, 1), (-2, 2), (3, -1)].iter().map(|(x, y)| GroupElement::Int(vec![*x, *y])).collect();
    ensure(ok(sp.hughes_independence(&n, &hs, &ds), "hughes")?, || "independence not certified".into())?;
    let same = [GroupElement::Int(vec![0, 1]), GroupElement::Int(vec![4, 1])];
    ensure(
        matches!(sp.hughes_independence(&n, &same, &ds[..2]), Err(Error::Precondition(_))),
        || "same-coset input accepted".into(),
    )?;
    let h = GroupElement::Int(vec![1, 1]);
    ensure(ok(sp.transcendence_check(&n, &h, 6, &ds), "transcendence")?, || "transcendence to degree 6 failed".into())?;
    Ok("independent over 4 cosets with inverse-bearing coefficients; transcendental to degree 6".into())
}

fn heisenberg() -> Result<Group, String> {
    let spec: GroupSpec = ok(
        serde_json::from_value(serde_json::json!({
            "family": "semidirect",
            "order": "semidirect_lex",
            "normal": {"family": "free_abelian", "rank": 2, "order": "lex"},
            "quotient": {"family": "free_abelian", "rank": 1, "order": "lex"},
            "action": [{"images": ["(1,0)", "(1,1)"], "inverse_images": ["(1,0)", "(-1,1)"]}]
        })),
        "semidirect spec",
    )?;
    ok(Group::new(spec), "semidirect group")
}

fn positives(g: &Group, elems: &[GroupElement]) -> Vec<GroupElement> {
    elems.iter().filter(|x| g.is_positive(x).unwrap()).cloned().collect()
}

fn order_suite() -> Outcome {
    let mut groups = Vec::new();
    for rank in 1..=3 {
        groups.push((format!("Z^{rank}"), Group::free_abelian(rank), 3, 2));
    }
    groups.push(("Z^2 x| Z".into(), heisenberg()?, 2, 2));
    groups.push(("F2 x| Z".into(), b3_structure().clone(), 3, 2));
    groups.push(("B3".into(), Group::braid_b3(), 10, 5));
    let mut elems = 0;
    for (name, g, ball, pair_ball) in &groups {
        let rep = ok(check_cone_axioms(g, &g.ball(*ball), &g.ball(*pair_ball)), name)?;
        ensure(rep.passed(), || format!("{name}: {rep:?}"))?;
        elems += rep.elements_checked;
    }

    let mut witnessed = 0;
    for g in [Group::free_abelian(2), Group::free_abelian(3), heisenberg()?] {
        let pos = positives(&g, &g.ball(1));
        for a in &pos {
            for b in &pos {
                ensure(ok(conradian_witness(&g, a, b, 64), "witness")?.is_some(), || {
                    format!("no witness for ({}, {})", g.format_element(a), g.format_element(b))
                })?;
                witnessed += 1;
            }
        }
    }
    let b3 = Group::braid_b3();
    let (u, w) = (GroupElement::Word(DD_U.to_vec()), GroupElement::Word(DD_W.to_vec()));
    ensure(ok(conradian_witness(&b3, &u, &w, 64), "witness")?.is_none(), || "(u, w) has a witness".into())?;

    let mut words = 0;
    for len in 0..=10 {
        for wd in braid_words(len, len > 7) {
            let red = handle_reduce(&wd);
            ensure(braid_eq(&wd, &red), || format!("{wd:?} -> {red:?} is a different braid"))?;
            ensure(!(red.contains(&1) && red.contains(&-1)), || format!("{wd:?} -> {red:?} keeps a handle"))?;
            words += 1;
        }
    }
    Ok(format!("{elems} cone elements, {witnessed} Conradian pairs, (u, w) none ≤ 64, {words} words reduced"))
}

fn demo() -> Outcome {
    let rep = ok(b3_demo(&DemoOptions::default()), "b3 demo")?;
    ensure(rep.passed(), || rep.to_string())?;
    Ok(format!("{} steps ok", rep.steps.len()))
}

fn main() {
    let criteria: [(&str, Option<f64>, fn() -> Outcome); 11] = [
        ("cocycle suite", Some(1.0), cocycle_suite),
        ("unit law", Some(2.0), unit_law),
        ("inversion round trip", Some(10.0), inversion_round_trip),
        ("geometric oracle", None, geometric_oracle),
        ("quantum torus division", None, quantum_torus_division),
        ("left representations", None, left_representations),
        ("cross-model agreement", None, cross_model_agreement),
        ("endomorphism laws", None, endo_laws),
        ("hughes checks", Some(5.0), hughes_checks),
        ("order suite", Some(60.0), order_suite),
        ("b3 demo", Some(30.0), demo),
    ];
    let mut failed = 0;
    for (i, (name, limit, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            Err(p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_else(|| "panic".into()))
        });
        let secs = start.elapsed().as_secs_f64();
        let res = match (res, limit) {
            (Ok(d), Some(l)) if secs > *l => Err(format!("{d}; took {secs:.2} s, limit {l} s")),
            (r, _) => r,
        };
        match res {
            Ok(d) => println!("PASS {:>2} {name} ({secs:.2} s): {d}", i + 1),
            Err(e) => {
                failed += 1;
                println!("FAIL {:>2} {name} ({secs:.2} s): {e}", i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
