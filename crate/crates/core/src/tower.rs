//! Nested rank-1 series towers for lex-ordered `ℤⁿ` and `ℚⁿ`.
//!
//! A level-`k` element is `Σ_j D_j x_{t_j}` where `t_j` has coordinate `k-1` equal to `j`
//! and all others zero, and each `D_j` is a level-`(k-1)` element. Level 0 is a scalar.
//! Every level series carries its own frontier; coefficients carry theirs.

use std::collections::BTreeMap;
use std::fmt;

use num::rational::Ratio;
use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use crate::crossed::{CpElement, CrossedProduct, Twist};
use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::hahn::{Frontier, Series};
use crate::scalar::{self, Scalar};

/// Exponent along one tower axis.
pub type Exp = Ratio<i64>;

pub fn exp(n: i64) -> Exp {
    Exp::from_integer(n)
}

fn min_opt(a: Option<Exp>, b: Option<Exp>) -> Option<Exp> {
    match (a, b) {
        (None, x) | (x, None) => x,
        (Some(x), Some(y)) => Some(x.min(y)),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TowerElem {
    Scalar(Scalar),
    Series(LevelSeries),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelSeries {
    /// Strictly ascending exponents; exactly-zero coefficients are not stored, coefficients
    /// that are only zero up to their own frontier are.
    pub terms: Vec<(Exp, TowerElem)>,
    /// `None` means the series is exact at this level.
    pub frontier: Option<Exp>,
}

impl LevelSeries {
    pub fn zero() -> Self {
        LevelSeries { terms: Vec::new(), frontier: None }
    }

    pub fn is_exact_zero(&self) -> bool {
        self.terms.is_empty() && self.frontier.is_none()
    }

    /// A lower bound for the valuation; `None` only for the exact zero.
    pub fn vlb(&self) -> Option<Exp> {
        self.terms.first().map(|(j, _)| *j).or(self.frontier)
    }
}

impl TowerElem {
    pub fn is_exact_zero(&self) -> bool {
        match self {
            TowerElem::Scalar(s) => s.is_zero(),
            TowerElem::Series(s) => s.is_exact_zero(),
        }
    }

    pub fn series(&self) -> Option<&LevelSeries> {
        match self {
            TowerElem::Series(s) => Some(s),
            TowerElem::Scalar(_) => None,
        }
    }
}

/// Tower arithmetic context: the crossed product plus per-level working frontiers that cap
/// every product.
#[derive(Clone, Debug)]
pub struct Tower {
    pub cp: CrossedProduct,
    rank: usize,
    working: Vec<Exp>,
}

impl Tower {
    /// `working[i]` caps the axis of coordinate `i` (level `i+1`).
    pub fn new(cp: CrossedProduct, working: Vec<Exp>) -> Result<Self> {
        let rank = cp
            .group
            .vector_rank()
            .ok_or_else(|| Error::UnsupportedFamily("series towers need a lex vector group".into()))?;
        if matches!(cp.twist, Twist::Table { .. }) {
            return Err(Error::UnsupportedFamily("series towers need a closed-form twist".into()));
        }
        if working.len() != rank {
            return Err(Error::Config(format!("expected {rank} frontiers, got {}", working.len())));
        }
        if working.iter().any(|w| !w.is_positive()) {
            return Err(Error::Config("frontiers must be strictly positive".into()));
        }
        Ok(Tower { cp, rank, working })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn working(&self) -> &[Exp] {
        &self.working
    }

    pub fn with_working(&self, working: Vec<Exp>) -> Result<Self> {
        Tower::new(self.cp.clone(), working)
    }

    fn trivial(&self) -> bool {
        self.cp.twist.is_trivial()
    }

    /// Unit vector multiple along the axis of `level`.
    pub fn axis(&self, level: usize, j: Exp) -> Vec<Exp> {
        let mut v = vec![exp(0); self.rank];
        v[level - 1] = j;
        v
    }

    fn as_int(v: &[Exp]) -> GroupElement {
        GroupElement::Int(
            v.iter()
                .map(|x| {
                    assert!(x.is_integer(), "twisted towers need integer exponents");
                    x.to_integer()
                })
                .collect(),
        )
    }

    pub fn eta_v(&self, a: &[Exp], b: &[Exp]) -> Scalar {
        if self.trivial() {
            return scalar::one();
        }
        self.cp.eta(&Self::as_int(a), &Self::as_int(b))
    }

    /// `x_g x_h x_g⁻¹ = λ(g,h) x_h`.
    pub fn lambda(&self, g: &[Exp], h: &[Exp]) -> Scalar {
        if self.trivial() {
            return scalar::one();
        }
        self.eta_v(g, h) / self.eta_v(h, g)
    }

    pub fn zero(&self, level: usize) -> TowerElem {
        if level == 0 {
            TowerElem::Scalar(scalar::zero())
        } else {
            TowerElem::Series(LevelSeries::zero())
        }
    }

    pub fn from_scalar(&self, level: usize, s: Scalar) -> TowerElem {
        if level == 0 {
            TowerElem::Scalar(s)
        } else if s.is_zero() {
            self.zero(level)
        } else {
            self.lift(self.from_scalar(level - 1, s))
        }
    }

    pub fn one(&self, level: usize) -> TowerElem {
        self.from_scalar(level, scalar::one())
    }

    /// A level-`(level-1)` element viewed at `level` (exponent 0).
    pub fn lift(&self, c: TowerElem) -> TowerElem {
        let terms = if c.is_exact_zero() { Vec::new() } else { vec![(exp(0), c)] };
        TowerElem::Series(LevelSeries { terms, frontier: None })
    }

    /// `s·x_c` at `level`; coordinates at or above `level` must vanish.
    pub fn monomial(&self, level: usize, c: &[Exp], s: Scalar) -> TowerElem {
        if level == 0 || s.is_zero() {
            return self.from_scalar(level, s);
        }
        let j = c[level - 1];
        let t = self.axis(level, j);
        let mut low = c.to_vec();
        low[level - 1] = exp(0);
        let coef = s / self.eta_v(&low, &t);
        TowerElem::Series(LevelSeries {
            terms: vec![(j, self.monomial(level - 1, &low, coef))],
            frontier: None,
        })
    }

    pub fn from_cp(&self, x: &CpElement) -> Result<TowerElem> {
        let mut acc = self.zero(self.rank);
        for (g, s) in x.terms() {
            let c = self.cp.group.coordinates(g).ok_or(Error::GroupMismatch)?;
            let c = c.iter().map(rat_to_exp).collect::<Result<Vec<_>>>()?;
            acc = self.add(self.rank, &acc, &self.monomial(self.rank, &c, s.clone()));
        }
        Ok(acc)
    }

    pub fn scale(&self, e: &TowerElem, s: &Scalar) -> TowerElem {
        if s.is_one() {
            return e.clone();
        }
        match e {
            TowerElem::Scalar(x) => TowerElem::Scalar(x * s),
            TowerElem::Series(ls) => {
                if s.is_zero() {
                    return TowerElem::Series(LevelSeries::zero());
                }
                TowerElem::Series(LevelSeries {
                    terms: ls.terms.iter().map(|(j, d)| (*j, self.scale(d, s))).collect(),
                    frontier: ls.frontier,
                })
            }
        }
    }

    pub fn neg(&self, e: &TowerElem) -> TowerElem {
        self.scale(e, &-scalar::one())
    }

    pub fn add(&self, level: usize, a: &TowerElem, b: &TowerElem) -> TowerElem {
        match (a, b) {
            (TowerElem::Scalar(x), TowerElem::Scalar(y)) => TowerElem::Scalar(x + y),
            (TowerElem::Series(x), TowerElem::Series(y)) => {
                let frontier = min_opt(x.frontier, y.frontier);
                let mut terms = Vec::with_capacity(x.terms.len() + y.terms.len());
                let (mut i, mut k) = (0, 0);
                loop {
                    let (j, c) = match (x.terms.get(i), y.terms.get(k)) {
                        (None, None) => break,
                        (Some((j, c)), None) => {
                            i += 1;
                            (*j, c.clone())
                        }
                        (None, Some((j, c))) => {
                            k += 1;
                            (*j, c.clone())
                        }
                        (Some((j1, c1)), Some((j2, c2))) => {
                            if j1 < j2 {
                                i += 1;
                                (*j1, c1.clone())
                            } else if j2 < j1 {
                                k += 1;
                                (*j2, c2.clone())
                            } else {
                                i += 1;
                                k += 1;
                                (*j1, self.add(level - 1, c1, c2))
                            }
                        }
                    };
                    if frontier.is_some_and(|f| j >= f) {
                        break;
                    }
                    if !c.is_exact_zero() {
                        terms.push((j, c));
                    }
                }
                TowerElem::Series(LevelSeries { terms, frontier })
            }
            _ => panic!("tower level mismatch in add"),
        }
    }

    pub fn sub(&self, level: usize, a: &TowerElem, b: &TowerElem) -> TowerElem {
        self.add(level, a, &self.neg(b))
    }

    /// `x_g e x_g⁻¹` for a level-`level` element `e`.
    pub fn conj(&self, level: usize, g: &[Exp], e: &TowerElem) -> TowerElem {
        if self.trivial() || level == 0 {
            return e.clone();
        }
        match e {
            TowerElem::Scalar(_) => e.clone(),
            TowerElem::Series(ls) => TowerElem::Series(LevelSeries {
                terms: ls
                    .terms
                    .iter()
                    .map(|(m, d)| {
                        let inner = self.conj(level - 1, g, d);
                        (*m, self.scale(&inner, &self.lambda(g, &self.axis(level, *m))))
                    })
                    .collect(),
                frontier: ls.frontier,
            }),
        }
    }

    /// Twisted product; the frontier is `min(F_a + v(b), F_b + v(a), W)`.
    pub fn mul(&self, level: usize, a: &TowerElem, b: &TowerElem) -> TowerElem {
        match (a, b) {
            (TowerElem::Scalar(x), TowerElem::Scalar(y)) => TowerElem::Scalar(x * y),
            (TowerElem::Series(x), TowerElem::Series(y)) => TowerElem::Series(self.mul_series(level, x, y)),
            _ => panic!("tower level mismatch in mul"),
        }
    }

    fn mul_series(&self, level: usize, a: &LevelSeries, b: &LevelSeries) -> LevelSeries {
        if a.is_exact_zero() || b.is_exact_zero() {
            return LevelSeries::zero();
        }
        let va = a.vlb().expect("nonzero");
        let vb = b.vlb().expect("nonzero");
        let frontier = min_opt(
            min_opt(a.frontier.map(|f| f + vb), b.frontier.map(|f| f + va)),
            Some(self.working[level - 1]),
        );
        let fr = frontier.expect("working frontier is finite");
        let mut acc: BTreeMap<Exp, TowerElem> = BTreeMap::new();
        for (j, d) in &a.terms {
            if *j + vb >= fr {
                break;
            }
            let tj = self.axis(level, *j);
            for (l, e) in &b.terms {
                let s = j + l;
                if s >= fr {
                    break;
                }
                let ce = self.conj(level - 1, &tj, e);
                let mut p = self.mul(level - 1, d, &ce);
                if !self.trivial() {
                    p = self.scale(&p, &self.eta_v(&tj, &self.axis(level, *l)));
                }
                match acc.remove(&s) {
                    Some(prev) => {
                        acc.insert(s, self.add(level - 1, &prev, &p));
                    }
                    None => {
                        acc.insert(s, p);
                    }
                }
            }
        }
        LevelSeries { terms: acc.into_iter().filter(|(_, c)| !c.is_exact_zero()).collect(), frontier }
    }

    /// Cuts every level to the box `bx` (indexed by coordinate).
    pub fn truncate(&self, level: usize, e: &TowerElem, bx: &[Exp]) -> TowerElem {
        match e {
            TowerElem::Scalar(_) => e.clone(),
            TowerElem::Series(ls) => {
                let frontier = min_opt(ls.frontier, Some(bx[level - 1]));
                let f = frontier.expect("finite");
                TowerElem::Series(LevelSeries {
                    terms: ls
                        .terms
                        .iter()
                        .take_while(|(j, _)| *j < f)
                        .map(|(j, d)| (*j, self.truncate(level - 1, d, bx)))
                        .collect(),
                    frontier,
                })
            }
        }
    }

    /// Whether the certified region contains the box `bx`.
    pub fn covers(&self, level: usize, e: &TowerElem, bx: &[Exp]) -> bool {
        match e {
            TowerElem::Scalar(_) => true,
            TowerElem::Series(ls) => {
                ls.frontier.map_or(true, |f| f >= bx[level - 1])
                    && ls
                        .terms
                        .iter()
                        .filter(|(j, _)| *j < bx[level - 1])
                        .all(|(_, d)| self.covers(level - 1, d, bx))
            }
        }
    }

    /// Smallest frontier seen at each level (by coordinate); the box below it is certified.
    pub fn certified_box(&self, level: usize, e: &TowerElem) -> Vec<Option<Exp>> {
        let mut out = vec![None; self.rank];
        self.collect_box(level, e, &mut out);
        out
    }

    fn collect_box(&self, level: usize, e: &TowerElem, out: &mut Vec<Option<Exp>>) {
        if let TowerElem::Series(ls) = e {
            out[level - 1] = min_opt(out[level - 1], ls.frontier);
            for (_, d) in &ls.terms {
                self.collect_box(level - 1, d, out);
            }
        }
    }

    /// Zero on every certified term.
    pub fn is_zero_certified(&self, e: &TowerElem) -> bool {
        match e {
            TowerElem::Scalar(s) => s.is_zero(),
            TowerElem::Series(ls) => ls.terms.iter().all(|(_, d)| self.is_zero_certified(d)),
        }
    }

    /// `a = b` on every term certified in both.
    pub fn agree(&self, level: usize, a: &TowerElem, b: &TowerElem) -> bool {
        self.is_zero_certified(&self.sub(level, a, b))
    }

    pub fn is_one_certified(&self, level: usize, e: &TowerElem) -> bool {
        self.agree(level, e, &self.one(level))
    }

    /// Inverse via `m = d(1+ε)X` with `X` the leading top monomial.
    pub fn invert(&self, level: usize, e: &TowerElem) -> Result<TowerElem> {
        let a = match e {
            TowerElem::Scalar(s) => {
                if s.is_zero() {
                    return Err(Error::zero_up_to("exact zero"));
                }
                return Ok(TowerElem::Scalar(s.recip()));
            }
            TowerElem::Series(a) => a,
        };
        let Some((j0, d)) = a.terms.first() else {
            return Err(Error::zero_up_to(self.format_frontier(level, a.frontier)));
        };
        let dinv = self.invert(level - 1, d).map_err(|err| match err {
            Error::ZeroUpToFrontier { frontier, .. } => Error::LevelExhausted { level: level - 1, frontier },
            other => other,
        })?;
        let rest = TowerElem::Series(LevelSeries { terms: a.terms[1..].to_vec(), frontier: a.frontier });
        let t = self.axis(level, *j0);
        let tinv = self.axis(level, -*j0);
        let xinv = self.monomial(level, &tinv, self.eta_v(&t, &tinv).recip());
        let dinv_l = self.lift(dinv);
        let eps = self.mul(level, &self.mul(level, &dinv_l, &rest), &xinv);
        let s = self.invert_one_plus_eps(level, &eps)?;
        Ok(self.mul(level, &self.mul(level, &xinv, &s), &dinv_l))
    }

    /// `Σ_{k≥0} (-ε)^k`, cut at `min(F_ε, W)`.
    pub fn invert_one_plus_eps(&self, level: usize, eps: &TowerElem) -> Result<TowerElem> {
        let e = match eps {
            TowerElem::Series(e) => e,
            TowerElem::Scalar(_) => return Err(Error::Precondition("epsilon must be a series".into())),
        };
        let one = self.one(level);
        if e.is_exact_zero() {
            return Ok(one);
        }
        let v = e.vlb().expect("nonzero");
        if !v.is_positive() {
            return Err(Error::NonPositiveValuation(format!("v(eps) = {v}")));
        }
        let t = min_opt(e.frontier, Some(self.working[level - 1])).expect("finite");
        let k = ((t / v).ceil().to_integer() - 1).max(0);
        let mut s = one.clone();
        for _ in 0..k {
            s = self.sub(level, &one, &self.mul(level, eps, &s));
        }
        Ok(self.truncate_top(&s, t))
    }

    fn truncate_top(&self, e: &TowerElem, t: Exp) -> TowerElem {
        match e {
            TowerElem::Series(ls) => {
                let frontier = min_opt(ls.frontier, Some(t));
                let f = frontier.expect("finite");
                TowerElem::Series(LevelSeries {
                    terms: ls.terms.iter().filter(|(j, _)| *j < f).cloned().collect(),
                    frontier,
                })
            }
            _ => e.clone(),
        }
    }

    /// Flat terms `(coordinates, coefficient)` in ascending lex order.
    pub fn flatten(&self, level: usize, e: &TowerElem) -> Vec<(Vec<Exp>, Scalar)> {
        let mut out = self.flatten_raw(level, e);
        out.sort_by(|(a, _), (b, _)| a.iter().rev().cmp(b.iter().rev()));
        out
    }

    fn flatten_raw(&self, level: usize, e: &TowerElem) -> Vec<(Vec<Exp>, Scalar)> {
        match e {
            TowerElem::Scalar(s) => {
                if s.is_zero() {
                    Vec::new()
                } else {
                    vec![(vec![exp(0); self.rank], s.clone())]
                }
            }
            TowerElem::Series(ls) => {
                let mut out = Vec::new();
                for (j, d) in &ls.terms {
                    let t = self.axis(level, *j);
                    for (mut c, s) in self.flatten_raw(level - 1, d) {
                        let f = self.eta_v(&c, &t);
                        c[level - 1] = *j;
                        out.push((c, s * f));
                    }
                }
                out
            }
        }
    }

    pub fn element_of(&self, c: &[Exp]) -> Result<GroupElement> {
        let r: Vec<BigRational> = c.iter().map(exp_to_rat).collect();
        self.cp.group.from_coordinates(&r)
    }

    /// Flat terms as group elements.
    pub fn flat_terms(&self, e: &TowerElem) -> Result<Vec<(GroupElement, Scalar)>> {
        self.flatten(self.rank, e).into_iter().map(|(c, s)| Ok((self.element_of(&c)?, s))).collect()
    }

    /// A rank-1 flat series as a level-1 element.
    pub fn from_flat(&self, m: &Series) -> Result<TowerElem> {
        if self.rank != 1 {
            return Err(Error::UnsupportedFamily("flat conversion needs rank 1".into()));
        }
        let mut terms = Vec::new();
        for (g, s) in m.terms() {
            let c = self.cp.group.coordinates(g).ok_or(Error::GroupMismatch)?;
            terms.push((rat_to_exp(&c[0])?, TowerElem::Scalar(s.clone())));
        }
        let frontier = match m.frontier() {
            Frontier::Infinite => None,
            Frontier::Below(g) => {
                Some(rat_to_exp(&self.cp.group.coordinates(g).ok_or(Error::GroupMismatch)?[0])?)
            }
        };
        Ok(TowerElem::Series(LevelSeries { terms, frontier }))
    }

    /// A level-1 element as a flat series.
    pub fn to_flat(&self, e: &TowerElem) -> Result<Series> {
        if self.rank != 1 {
            return Err(Error::UnsupportedFamily("flat conversion needs rank 1".into()));
        }
        let ls = e.series().ok_or(Error::GroupMismatch)?;
        let frontier = match ls.frontier {
            None => Frontier::Infinite,
            Some(f) => Frontier::Below(self.element_of(&[f])?),
        };
        self.cp.series_from_terms(self.flat_terms(e)?, frontier)
    }

    pub fn format_frontier(&self, level: usize, f: Option<Exp>) -> String {
        match f {
            None => format!("inf at level {level}"),
            Some(f) => format!("{f} at level {level}"),
        }
    }

    pub fn format_box(bx: &[Option<Exp>]) -> String {
        let parts: Vec<String> = bx.iter().map(|f| f.map_or("inf".into(), |f| f.to_string())).collect();
        format!("({})", parts.join(","))
    }

    /// `coef*[exp] + … (frontier: per-level (…))`.
    pub fn format(&self, e: &TowerElem) -> String {
        let flat = self.flatten(self.rank, e);
        let body = if flat.is_empty() {
            "0".to_string()
        } else {
            flat.iter()
                .map(|(c, s)| {
                    let cs: Vec<String> = c.iter().map(|x| x.to_string()).collect();
                    format!("{}*[({})]", scalar::format(s), cs.join(","))
                })
                .collect::<Vec<_>>()
                .join(" + ")
        };
        format!("{body} (frontier: per-level {})", Self::format_box(&self.certified_box(self.rank, e)))
    }
}

pub fn rat_to_exp(r: &BigRational) -> Result<Exp> {
    let n = r.numer().to_i64();
    let d = r.denom().to_i64();
    match (n, d) {
        (Some(n), Some(d)) => Ok(Exp::new(n, d)),
        _ => Err(Error::Config(format!("exponent {r} out of range"))),
    }
}

pub fn exp_to_rat(e: &Exp) -> BigRational {
    BigRational::new(BigInt::from(*e.numer()), BigInt::from(*e.denom()))
}

pub fn parse_exp(s: &str) -> Result<Exp> {
    rat_to_exp(&scalar::parse(s)?)
}

impl fmt::Display for LevelSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, (j, d)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            match d {
                TowerElem::Scalar(s) => write!(f, "{j}: {}", scalar::format(s))?,
                TowerElem::Series(ls) => write!(f, "{j}: {ls}")?,
            }
        }
        match self.frontier {
            Some(fr) => write!(f, "; <{fr}]"),
            None => write!(f, "]"),
        }
    }
}
