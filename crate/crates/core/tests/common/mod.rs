//! Independent oracles and generators shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use skewfrac::crossed::{CpElement, CrossedProduct, Twist};
use skewfrac::expr::RationalExpr;
use skewfrac::scalar::{self, Scalar};
use skewfrac::{Group, GroupElement};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

// ---------------------------------------------------------------------------
// Burau representation of B3 over Z[t, 1/t]; faithful, so it decides braid equality.

pub type Laurent = BTreeMap<i32, i64>;

fn lnorm(mut p: Laurent) -> Laurent {
    p.retain(|_, c| *c != 0);
    p
}

fn ladd(a: &Laurent, b: &Laurent) -> Laurent {
    let mut out = a.clone();
    for (k, c) in b {
        *out.entry(*k).or_insert(0) += c;
    }
    lnorm(out)
}

fn lmul(a: &Laurent, b: &Laurent) -> Laurent {
    let mut out = Laurent::new();
    for (i, x) in a {
        for (j, y) in b {
            *out.entry(i + j).or_insert(0) += x * y;
        }
    }
    lnorm(out)
}

fn mono(k: i32, c: i64) -> Laurent {
    lnorm(BTreeMap::from([(k, c)]))
}

pub type Mat = [[Laurent; 2]; 2];

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let e = |i: usize, j: usize| ladd(&lmul(&a[i][0], &b[0][j]), &lmul(&a[i][1], &b[1][j]));
    [[e(0, 0), e(0, 1)], [e(1, 0), e(1, 1)]]
}

fn burau_letter(l: i32) -> Mat {
    match l {
        1 => [[mono(1, -1), mono(0, 1)], [Laurent::new(), mono(0, 1)]],
        -1 => [[mono(-1, -1), mono(-1, 1)], [Laurent::new(), mono(0, 1)]],
        2 => [[mono(0, 1), Laurent::new()], [mono(1, 1), mono(1, -1)]],
        -2 => [[mono(0, 1), Laurent::new()], [mono(0, 1), mono(-1, -1)]],
        _ => panic!("not a B3 letter: {l}"),
    }
}

pub fn burau(word: &[i32]) -> Mat {
    let mut m = [[mono(0, 1), Laurent::new()], [Laurent::new(), mono(0, 1)]];
    for &l in word {
        m = mat_mul(&m, &burau_letter(l));
    }
    m
}

pub fn braid_eq(a: &[i32], b: &[i32]) -> bool {
    burau(a) == burau(b)
}

/// Every word of length exactly `len` over `s1, S1, s2, S2`; free-reduced only if asked.
pub fn braid_words(len: usize, reduced: bool) -> Vec<Vec<i32>> {
    let letters = [1, -1, 2, -2];
    let mut out: Vec<Vec<i32>> = vec![Vec::new()];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * 4);
        for w in &out {
            for &l in &letters {
                if reduced && w.last() == Some(&-l) {
                    continue;
                }
                let mut v = w.clone();
                v.push(l);
                next.push(v);
            }
        }
        out = next;
    }
    out
}

// ---------------------------------------------------------------------------
// Naive twisted convolution of finitely many terms with an independently coded twist.

pub type Terms = BTreeMap<Vec<i64>, Scalar>;

/// `η(g, h) = q^{g_y h_x}` for the rank-2 quantum torus; 1 when `q` is `None`.
pub fn eta_oracle(q: Option<&Scalar>, g: &[i64], h: &[i64]) -> Scalar {
    match q {
        None => scalar::one(),
        Some(q) if g.len() == 2 => scalar::pow(q, g[1] * h[0]),
        Some(_) => scalar::one(),
    }
}

pub fn convolve(q: Option<&Scalar>, a: &Terms, b: &Terms) -> Terms {
    let mut out = Terms::new();
    for (g, x) in a {
        for (h, y) in b {
            let k: Vec<i64> = g.iter().zip(h).map(|(s, t)| s + t).collect();
            let c = x * y * eta_oracle(q, g, h);
            let e = out.entry(k).or_insert_with(scalar::zero);
            *e += c;
        }
    }
    out.retain(|_, c| !num::Zero::is_zero(c));
    out
}

pub fn int_coords(g: &GroupElement) -> Vec<i64> {
    match g {
        GroupElement::Int(v) => v.clone(),
        other => panic!("expected an integer vector, got {other:?}"),
    }
}

pub fn terms_of(x: &CpElement) -> Terms {
    x.terms().map(|(g, c)| (int_coords(g), c.clone())).collect()
}

pub fn terms_from(list: &[(GroupElement, Scalar)]) -> Terms {
    list.iter().map(|(g, c)| (int_coords(g), c.clone())).collect()
}

/// Lex comparison with the last coordinate dominant, coded independently of the library.
pub fn lex_lt(a: &[i64], b: &[i64]) -> bool {
    for i in (0..a.len()).rev() {
        if a[i] != b[i] {
            return a[i] < b[i];
        }
    }
    false
}

// ---------------------------------------------------------------------------
// Random elements and expressions.

pub fn small_scalar(r: &mut ChaCha8Rng) -> Scalar {
    let mut n = r.gen_range(-3i64..=3);
    if n == 0 {
        n = 1;
    }
    let d = *[1i64, 1, 2, 3].choose(r).unwrap();
    scalar::ratio(n, d)
}

pub fn random_vec(r: &mut ChaCha8Rng, rank: usize, span: i64) -> Vec<i64> {
    (0..rank).map(|_| r.gen_range(-span..=span)).collect()
}

/// A finite element with exactly `size` distinct support points.
pub fn random_element(r: &mut ChaCha8Rng, rank: usize, size: usize, span: i64) -> CpElement {
    let mut terms: BTreeMap<Vec<i64>, Scalar> = BTreeMap::new();
    while terms.len() < size {
        terms.insert(random_vec(r, rank, span), small_scalar(r));
    }
    CpElement::from_terms(terms.into_iter().map(|(g, c)| (GroupElement::Int(g), c)))
}

pub fn quantum(q: Scalar) -> CrossedProduct {
    CrossedProduct::new(Group::free_abelian(2), Twist::quantum(q)).unwrap()
}

pub fn group_ring(rank: usize) -> CrossedProduct {
    CrossedProduct::group_ring(Group::free_abelian(rank))
}

/// Expressions of bounded depth whose constants have support in `[-span, span]^rank`.
pub fn random_expr(r: &mut ChaCha8Rng, rank: usize, depth: usize, span: i64) -> RationalExpr {
    if depth == 0 || r.gen_bool(0.3) {
        let size = r.gen_range(1..=3);
        return RationalExpr::constant(random_element(r, rank, size, span));
    }
    match r.gen_range(0..4) {
        0 => RationalExpr::add(random_expr(r, rank, depth - 1, span), random_expr(r, rank, depth - 1, span)),
        1 => RationalExpr::mul(random_expr(r, rank, depth - 1, span), random_expr(r, rank, depth - 1, span)),
        2 => RationalExpr::sub(random_expr(r, rank, depth - 1, span), random_expr(r, rank, depth - 1, span)),
        _ => {
            let size = r.gen_range(2..=3);
            RationalExpr::inv(RationalExpr::constant(random_element(r, rank, size, span)))
        }
    }
}

/// An algebraically equal rewrite of `e`: commuted sums, reassociation, distribution, and
/// neutral insertions.
pub fn rearrange(r: &mut ChaCha8Rng, e: &RationalExpr, cp: &CrossedProduct) -> RationalExpr {
    use RationalExpr::*;
    let rec = |r: &mut ChaCha8Rng, x: &RationalExpr| rearrange(r, x, cp);
    match e {
        Const(x) => match r.gen_range(0..3) {
            0 => e.clone(),
            1 => RationalExpr::mul(RationalExpr::constant(cp.one()), e.clone()),
            _ => {
                let z = RationalExpr::constant(x.clone());
                RationalExpr::add(RationalExpr::sub(e.clone(), z.clone()), z)
            }
        },
        Add(a, b) => {
            let (a, b) = (rec(r, a), rec(r, b));
            if r.gen_bool(0.5) {
                RationalExpr::add(b, a)
            } else {
                RationalExpr::add(a, b)
            }
        }
        Neg(a) => RationalExpr::neg(rec(r, a)),
        Mul(a, b) => match (&**a, &**b, r.gen_range(0..2)) {
            (x, Add(p, q), 0) => RationalExpr::add(
                RationalExpr::mul(rec(r, x), rec(r, p)),
                RationalExpr::mul(rec(r, x), rec(r, q)),
            ),
            _ => RationalExpr::mul(rec(r, a), rec(r, b)),
        },
        Inv(a) => RationalExpr::inv(rec(r, a)),
    }
}

/// Checks `m · inv = 1` by naive convolution at every position whose coefficient depends only
/// on terms of `inv` inside the box `{g : g_i < bx_i}`. Returns the number of positions checked.
pub fn check_inverse_naive(q: Option<&Scalar>, m: &Terms, inv: &Terms, bx: &[i64]) -> Result<usize, String> {
    let rank = bx.len();
    let min_m: Vec<i64> = (0..rank).map(|i| m.keys().map(|k| k[i]).min().unwrap()).collect();
    let min_i: Vec<i64> = (0..rank).map(|i| inv.keys().map(|k| k[i]).min().unwrap_or(0)).collect();
    let lo: Vec<i64> = (0..rank).map(|i| min_m[i] + min_i[i]).collect();
    let hi: Vec<i64> = (0..rank).map(|i| bx[i] + min_m[i]).collect();
    let mut n = lo.clone();
    let mut checked = 0;
    loop {
        let mut c = scalar::zero();
        for (k, a) in m {
            let rest: Vec<i64> = n.iter().zip(k).map(|(x, y)| x - y).collect();
            if let Some(b) = inv.get(&rest) {
                c += a * eta_oracle(q, k, &rest) * b;
            }
        }
        let want = if n.iter().all(|x| *x == 0) { scalar::one() } else { scalar::zero() };
        if c != want {
            return Err(format!("coefficient at {n:?} is {c}, expected {want}"));
        }
        checked += 1;
        let mut i = 0;
        loop {
            if i == rank {
                return Ok(checked);
            }
            n[i] += 1;
            if n[i] < hi[i] {
                break;
            }
            n[i] = lo[i];
            i += 1;
        }
    }
}

/// [`random_element`] with a support size drawn from `sizes`.
pub fn random_sized(r: &mut ChaCha8Rng, rank: usize, sizes: std::ops::Range<usize>, span: i64) -> CpElement {
    let n = r.gen_range(sizes);
    random_element(r, rank, n, span)
}

/// Compares an endomorphism-model series with a tower result on the common certified region
/// `{g : g_i < bx_i} ∩ {g < endo frontier}`. Returns the number of nonzero terms compared.
pub fn compare_models(
    endo: &skewfrac::hahn::Series,
    tower_terms: &[(GroupElement, Scalar)],
    bx: &[i64],
) -> Result<usize, String> {
    use skewfrac::hahn::Frontier;
    let inside = |g: &[i64]| {
        g.iter().zip(bx).all(|(x, b)| x < b)
            && match endo.frontier() {
                Frontier::Infinite => true,
                Frontier::Below(f) => lex_lt(g, &int_coords(f)),
            }
    };
    let a: Terms = endo.terms().iter().map(|(g, c)| (int_coords(g), c.clone())).filter(|(g, _)| inside(g)).collect();
    let b: Terms = terms_from(tower_terms).into_iter().filter(|(g, _)| inside(g)).collect();
    if a != b {
        let diff: Vec<_> = a
            .keys()
            .chain(b.keys())
            .filter(|g| a.get(*g) != b.get(*g))
            .take(3)
            .map(|g| format!("{g:?}: endo {:?} vs tower {:?}", a.get(g).map(|c| c.to_string()), b.get(g).map(|c| c.to_string())))
            .collect();
        return Err(diff.join("; "));
    }
    Ok(a.len())
}
