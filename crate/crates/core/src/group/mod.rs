//! Concrete left-ordered group families: free abelian and rational vector groups with the
//! lexicographic order, free groups with the Magnus order, the braid group B₃ with the
//! Dubrovina–Dubrovin order, and semidirect products `N ⋊ ℤ^k` ordered by quotient first.

mod braid;
mod jumps;
mod order;

use std::cmp::Ordering;
use std::fmt;

use num::{BigRational, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::magnus::MagnusSeries;
use crate::scalar;

pub use braid::{
    b3_from_semidirect, b3_structure, b3_to_semidirect, dd_positive, handle_reduce, sigma1_class,
    Sigma1Class, DD_U, DD_W,
};
pub use jumps::{convex_jumps, ConvexJump, Subgroup};
pub use order::{check_cone_axioms, conradian_witness, semidirect_cone_member, ConeReport};

pub const DEFAULT_MAGNUS_DEGREE: usize = 8;

fn default_magnus_degree() -> usize {
    DEFAULT_MAGNUS_DEGREE
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrderKind {
    Lex,
    DubrovinaDubrovin,
    Magnus,
    SemidirectLex,
}

/// Automorphism of the normal factor given on generators. Strings use the normal group's
/// element syntax.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionSpec {
    pub images: Vec<String>,
    pub inverse_images: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    FreeAbelian {
        rank: usize,
    },
    RationalVector {
        rank: usize,
    },
    FreeGroup {
        rank: usize,
        #[serde(default = "default_magnus_degree")]
        magnus_degree: usize,
    },
    #[serde(rename = "braid_b3")]
    BraidB3,
    Semidirect {
        normal: Box<GroupSpec>,
        quotient: Box<GroupSpec>,
        action: Vec<ActionSpec>,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupSpec {
    #[serde(flatten)]
    pub family: Family,
    pub order: OrderKind,
}

impl GroupSpec {
    pub fn free_abelian(rank: usize) -> Self {
        GroupSpec { family: Family::FreeAbelian { rank }, order: OrderKind::Lex }
    }

    pub fn rational_vector(rank: usize) -> Self {
        GroupSpec { family: Family::RationalVector { rank }, order: OrderKind::Lex }
    }

    pub fn free_group(rank: usize, magnus_degree: usize) -> Self {
        GroupSpec { family: Family::FreeGroup { rank, magnus_degree }, order: OrderKind::Magnus }
    }

    pub fn braid_b3() -> Self {
        GroupSpec { family: Family::BraidB3, order: OrderKind::DubrovinaDubrovin }
    }
}

/// Normal-form payload of a group element.
///
/// Words use signed letters: `k > 0` is generator `k`, `-k` its inverse. B₃ words use
/// `1 = σ₁`, `2 = σ₂` and are stored in a canonical form, so structural equality is group
/// equality in every family.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GroupElement {
    Int(Vec<i64>),
    Rat(Vec<BigRational>),
    Word(Vec<i32>),
    Pair(Box<GroupElement>, Box<GroupElement>),
}

impl GroupElement {
    pub fn int(v: &[i64]) -> Self {
        GroupElement::Int(v.to_vec())
    }

    pub fn word(w: &[i32]) -> Self {
        GroupElement::Word(free_reduce(w))
    }

    pub fn pair(n: GroupElement, q: GroupElement) -> Self {
        GroupElement::Pair(Box::new(n), Box::new(q))
    }

    pub fn as_int(&self) -> Option<&[i64]> {
        match self {
            GroupElement::Int(v) => Some(v),
            _ => None,
        }
    }

    pub fn as_word(&self) -> Option<&[i32]> {
        match self {
            GroupElement::Word(w) => Some(w),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automorphism {
    pub images: Vec<GroupElement>,
    pub inverse_images: Vec<GroupElement>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct SemidirectData {
    normal: Group,
    quotient: Group,
    action: Vec<Automorphism>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Kind {
    FreeAbelian(usize),
    RationalVector(usize),
    Free { rank: usize, degree: usize },
    B3,
    Semidirect(Box<SemidirectData>),
}

/// A group family together with its left-order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Group {
    spec: GroupSpec,
    kind: Kind,
}

impl Group {
    pub fn new(spec: GroupSpec) -> Result<Self> {
        let bad = |m: &str| Err(Error::Config(m.to_string()));
        let kind = match &spec.family {
            Family::FreeAbelian { rank } | Family::RationalVector { rank } => {
                if *rank == 0 {
                    return bad("rank must be at least 1");
                }
                if spec.order != OrderKind::Lex {
                    return bad("vector groups carry the lex order");
                }
                if matches!(spec.family, Family::FreeAbelian { .. }) {
                    Kind::FreeAbelian(*rank)
                } else {
                    Kind::RationalVector(*rank)
                }
            }
            Family::FreeGroup { rank, magnus_degree } => {
                if *rank == 0 || *rank > 4 || *magnus_degree == 0 {
                    return bad("free group rank must be 1..=4 and magnus degree at least 1");
                }
                if spec.order != OrderKind::Magnus {
                    return bad("free groups carry the magnus order");
                }
                Kind::Free { rank: *rank, degree: *magnus_degree }
            }
            Family::BraidB3 => {
                if spec.order != OrderKind::DubrovinaDubrovin {
                    return bad("B3 carries the dubrovina_dubrovin order");
                }
                Kind::B3
            }
            Family::Semidirect { normal, quotient, action } => {
                if spec.order != OrderKind::SemidirectLex {
                    return bad("semidirect products carry the semidirect_lex order");
                }
                let normal = Group::new((**normal).clone())?;
                let quotient = Group::new((**quotient).clone())?;
                let qrank = match quotient.kind {
                    Kind::FreeAbelian(r) => r,
                    _ => return bad("semidirect quotient must be free abelian"),
                };
                if action.len() != qrank {
                    return bad("one action entry per quotient generator is required");
                }
                let ngens = match normal.kind {
                    Kind::FreeAbelian(r) => r,
                    Kind::Free { rank, .. } => rank,
                    _ => return bad("semidirect normal part must be free abelian or free"),
                };
                let mut autos = Vec::new();
                for a in action {
                    if a.images.len() != ngens || a.inverse_images.len() != ngens {
                        return bad("action must give an image for every normal generator");
                    }
                    let images =
                        a.images.iter().map(|s| normal.parse_element(s)).collect::<Result<Vec<_>>>()?;
                    let inverse_images = a
                        .inverse_images
                        .iter()
                        .map(|s| normal.parse_element(s))
                        .collect::<Result<Vec<_>>>()?;
                    autos.push(Automorphism { images, inverse_images });
                }
                let data = SemidirectData { normal, quotient, action: autos };
                for (i, auto) in data.action.iter().enumerate() {
                    for gen in 0..ngens {
                        let g = data.normal.generator(gen);
                        let there = data.apply_auto(auto, &g, 1)?;
                        let back = data.apply_auto(auto, &there, -1)?;
                        if back != g {
                            return Err(Error::Config(format!(
                                "action {i}: inverse_images do not invert images"
                            )));
                        }
                    }
                }
                Kind::Semidirect(Box::new(data))
            }
        };
        Ok(Group { spec, kind })
    }

    pub fn free_abelian(rank: usize) -> Self {
        Group::new(GroupSpec::free_abelian(rank)).expect("valid rank")
    }

    pub fn rational_vector(rank: usize) -> Self {
        Group::new(GroupSpec::rational_vector(rank)).expect("valid rank")
    }

    pub fn free_group(rank: usize, magnus_degree: usize) -> Self {
        Group::new(GroupSpec::free_group(rank, magnus_degree)).expect("valid rank")
    }

    pub fn braid_b3() -> Self {
        Group::new(GroupSpec::braid_b3()).expect("valid spec")
    }

    pub fn spec(&self) -> &GroupSpec {
        &self.spec
    }

    pub fn is_abelian(&self) -> bool {
        matches!(self.kind, Kind::FreeAbelian(_) | Kind::RationalVector(_))
            || matches!(self.kind, Kind::Free { rank: 1, .. })
    }

    /// Rank of a vector family, `None` otherwise.
    pub fn vector_rank(&self) -> Option<usize> {
        match self.kind {
            Kind::FreeAbelian(r) | Kind::RationalVector(r) => Some(r),
            _ => None,
        }
    }

    pub fn is_free_abelian(&self) -> bool {
        matches!(self.kind, Kind::FreeAbelian(_))
    }

    pub fn magnus_degree(&self) -> Option<usize> {
        match &self.kind {
            Kind::Free { degree, .. } => Some(*degree),
            Kind::Semidirect(d) => d.normal.magnus_degree(),
            _ => None,
        }
    }

    pub fn semidirect_parts(&self) -> Option<(&Group, &Group)> {
        match &self.kind {
            Kind::Semidirect(d) => Some((&d.normal, &d.quotient)),
            _ => None,
        }
    }

    pub fn identity(&self) -> GroupElement {
        match &self.kind {
            Kind::FreeAbelian(r) => GroupElement::Int(vec![0; *r]),
            Kind::RationalVector(r) => GroupElement::Rat(vec![BigRational::zero(); *r]),
            Kind::Free { .. } | Kind::B3 => GroupElement::Word(Vec::new()),
            Kind::Semidirect(d) => GroupElement::pair(d.normal.identity(), d.quotient.identity()),
        }
    }

    pub fn is_identity(&self, g: &GroupElement) -> bool {
        *g == self.identity()
    }

    /// The `i`-th generator (0-based).
    pub fn generator(&self, i: usize) -> GroupElement {
        match &self.kind {
            Kind::FreeAbelian(r) => {
                let mut v = vec![0; *r];
                v[i] = 1;
                GroupElement::Int(v)
            }
            Kind::RationalVector(r) => {
                let mut v = vec![BigRational::zero(); *r];
                v[i] = scalar::one();
                GroupElement::Rat(v)
            }
            Kind::Free { .. } => GroupElement::Word(vec![i as i32 + 1]),
            Kind::B3 => GroupElement::Word(braid::canonical_b3(&[i as i32 + 1])),
            Kind::Semidirect(d) => {
                let nn = d.normal.generator_count();
                if i < nn {
                    GroupElement::pair(d.normal.generator(i), d.quotient.identity())
                } else {
                    GroupElement::pair(d.normal.identity(), d.quotient.generator(i - nn))
                }
            }
        }
    }

    pub fn generator_count(&self) -> usize {
        match &self.kind {
            Kind::FreeAbelian(r) | Kind::RationalVector(r) => *r,
            Kind::Free { rank, .. } => *rank,
            Kind::B3 => 2,
            Kind::Semidirect(d) => d.normal.generator_count() + d.quotient.generator_count(),
        }
    }

    pub fn check(&self, g: &GroupElement) -> Result<()> {
        let ok = match (&self.kind, g) {
            (Kind::FreeAbelian(r), GroupElement::Int(v)) => v.len() == *r,
            (Kind::RationalVector(r), GroupElement::Rat(v)) => v.len() == *r,
            (Kind::Free { rank, .. }, GroupElement::Word(w)) => {
                w.iter().all(|l| l.unsigned_abs() as usize <= *rank && *l != 0)
            }
            (Kind::B3, GroupElement::Word(w)) => w.iter().all(|l| matches!(l.abs(), 1 | 2)),
            (Kind::Semidirect(d), GroupElement::Pair(n, q)) => {
                d.normal.check(n).is_ok() && d.quotient.check(q).is_ok()
            }
            _ => false,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::GroupMismatch)
        }
    }

    pub fn mul(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        self.check(g)?;
        self.check(h)?;
        Ok(match (&self.kind, g, h) {
            (Kind::FreeAbelian(_), GroupElement::Int(a), GroupElement::Int(b)) => {
                GroupElement::Int(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (Kind::RationalVector(_), GroupElement::Rat(a), GroupElement::Rat(b)) => {
                GroupElement::Rat(a.iter().zip(b).map(|(x, y)| x + y).collect())
            }
            (Kind::Free { .. }, GroupElement::Word(a), GroupElement::Word(b)) => {
                GroupElement::Word(concat_reduce(a, b))
            }
            (Kind::B3, GroupElement::Word(a), GroupElement::Word(b)) => {
                GroupElement::Word(braid::canonical_b3(&concat_reduce(a, b)))
            }
            (Kind::Semidirect(d), GroupElement::Pair(n1, q1), GroupElement::Pair(n2, q2)) => {
                let moved = d.act(q1, n2)?;
                GroupElement::pair(d.normal.mul(n1, &moved)?, d.quotient.mul(q1, q2)?)
            }
            _ => return Err(Error::GroupMismatch),
        })
    }

    pub fn inv(&self, g: &GroupElement) -> GroupElement {
        match (&self.kind, g) {
            (_, GroupElement::Int(a)) => GroupElement::Int(a.iter().map(|x| -x).collect()),
            (_, GroupElement::Rat(a)) => GroupElement::Rat(a.iter().map(|x| -x).collect()),
            (Kind::B3, GroupElement::Word(w)) => GroupElement::Word(braid::canonical_b3(&invert_word(w))),
            (_, GroupElement::Word(w)) => GroupElement::Word(invert_word(w)),
            (Kind::Semidirect(d), GroupElement::Pair(n, q)) => {
                let qi = d.quotient.inv(q);
                let ni = d.normal.inv(n);
                let moved = d.act(&qi, &ni).expect("checked element");
                GroupElement::pair(moved, qi)
            }
            (_, GroupElement::Pair(..)) => g.clone(),
        }
    }

    pub fn pow(&self, g: &GroupElement, n: i64) -> Result<GroupElement> {
        let base = if n < 0 { self.inv(g) } else { g.clone() };
        let mut acc = self.identity();
        for _ in 0..n.unsigned_abs() {
            acc = self.mul(&acc, &base)?;
        }
        Ok(acc)
    }

    /// `g⁻¹ h`.
    pub fn left_quotient(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        self.mul(&self.inv(g), h)
    }

    /// Membership in the strict positive cone `P`.
    pub fn is_positive(&self, g: &GroupElement) -> Result<bool> {
        self.check(g)?;
        match (&self.kind, g) {
            (Kind::FreeAbelian(_), GroupElement::Int(v)) => {
                Ok(v.iter().rev().find(|x| **x != 0).is_some_and(|x| *x > 0))
            }
            (Kind::RationalVector(_), GroupElement::Rat(v)) => {
                Ok(v.iter().rev().find(|x| !x.is_zero()).is_some_and(|x| x.is_positive()))
            }
            (Kind::Free { rank, degree }, GroupElement::Word(w)) => {
                if w.is_empty() {
                    return Ok(false);
                }
                let m = MagnusSeries::from_word(*rank, *degree, w);
                match m.leading_sign_minus_one() {
                    Some(o) => Ok(o == Ordering::Greater),
                    None => Err(Error::UndecidedAtTruncation { degree: *degree }),
                }
            }
            (Kind::B3, GroupElement::Word(w)) => Ok(dd_positive(w)),
            (Kind::Semidirect(_), GroupElement::Pair(..)) => semidirect_cone_member(self, g),
            _ => Err(Error::GroupMismatch),
        }
    }

    /// Left-invariant strict total order: `g < h ⟺ g⁻¹h ∈ P`.
    pub fn compare(&self, g: &GroupElement, h: &GroupElement) -> Result<Ordering> {
        let q = self.left_quotient(g, h)?;
        if self.is_identity(&q) {
            Ok(Ordering::Equal)
        } else if self.is_positive(&q)? {
            Ok(Ordering::Less)
        } else {
            Ok(Ordering::Greater)
        }
    }

    pub fn parse_element(&self, s: &str) -> Result<GroupElement> {
        let s = s.trim();
        let g = match &self.kind {
            Kind::FreeAbelian(r) => GroupElement::Int(parse_int_vector(s, *r)?),
            Kind::RationalVector(r) => GroupElement::Rat(parse_rat_vector(s, *r)?),
            Kind::Free { rank, .. } => GroupElement::Word(parse_free_word(s, *rank)?),
            Kind::B3 => GroupElement::Word(braid::canonical_b3(&braid::parse_braid(s)?)),
            Kind::Semidirect(d) => {
                if s == "e" || s == "1" {
                    self.identity()
                } else {
                    let (n, q) = s
                        .split_once('|')
                        .ok_or_else(|| Error::Parse(format!("expected `n|q`, got `{s}`")))?;
                    GroupElement::pair(d.normal.parse_element(n)?, d.quotient.parse_element(q)?)
                }
            }
        };
        self.check(&g)?;
        Ok(g)
    }

    pub fn format_element(&self, g: &GroupElement) -> String {
        match (&self.kind, g) {
            (_, GroupElement::Int(v)) => {
                format!("({})", v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(","))
            }
            (_, GroupElement::Rat(v)) => {
                format!("({})", v.iter().map(scalar::format).collect::<Vec<_>>().join(","))
            }
            (Kind::B3, GroupElement::Word(w)) => braid::format_braid(w),
            (_, GroupElement::Word(w)) => format_free_word(w),
            (Kind::Semidirect(d), GroupElement::Pair(n, q)) => {
                format!("{}|{}", d.normal.format_element(n), d.quotient.format_element(q))
            }
            (_, GroupElement::Pair(n, q)) => format!("{n:?}|{q:?}"),
        }
    }

    /// Coordinates of a vector-family element as rationals.
    pub fn coordinates(&self, g: &GroupElement) -> Option<Vec<BigRational>> {
        match g {
            GroupElement::Int(v) => Some(v.iter().map(|x| scalar::int(*x)).collect()),
            GroupElement::Rat(v) => Some(v.clone()),
            _ => None,
        }
    }

    /// Builds a vector-family element from rational coordinates.
    pub fn from_coordinates(&self, c: &[BigRational]) -> Result<GroupElement> {
        match self.kind {
            Kind::FreeAbelian(r) if c.len() == r => c
                .iter()
                .map(|x| {
                    if x.is_integer() {
                        x.to_integer().try_into().map_err(|_| Error::GroupMismatch)
                    } else {
                        Err(Error::GroupMismatch)
                    }
                })
                .collect::<Result<Vec<i64>>>()
                .map(GroupElement::Int),
            Kind::RationalVector(r) if c.len() == r => Ok(GroupElement::Rat(c.to_vec())),
            _ => Err(Error::GroupMismatch),
        }
    }

    /// Every element whose free-reduced word over the generators has length at most `len`
    /// (for vector groups: the box `[-len, len]^rank`). Deduplicated, deterministic order.
    pub fn ball(&self, len: usize) -> Vec<GroupElement> {
        let mut out: Vec<GroupElement> = Vec::new();
        match &self.kind {
            Kind::FreeAbelian(r) | Kind::RationalVector(r) => {
                let l = len as i64;
                let mut cur = vec![-l; *r];
                loop {
                    let g = GroupElement::Int(cur.clone());
                    out.push(match self.kind {
                        Kind::RationalVector(_) => {
                            GroupElement::Rat(cur.iter().map(|x| scalar::int(*x)).collect())
                        }
                        _ => g,
                    });
                    let mut i = 0;
                    loop {
                        if i == *r {
                            return out;
                        }
                        cur[i] += 1;
                        if cur[i] > l {
                            cur[i] = -l;
                            i += 1;
                        } else {
                            break;
                        }
                    }
                }
            }
            _ => {
                let n = self.generator_count() as i32;
                let letters: Vec<i32> = (1..=n).flat_map(|k| [k, -k]).collect();
                let mut frontier: Vec<Vec<i32>> = vec![Vec::new()];
                let mut words: Vec<Vec<i32>> = vec![Vec::new()];
                for _ in 0..len {
                    let mut next = Vec::new();
                    for w in &frontier {
                        for &l in &letters {
                            if w.last() == Some(&-l) {
                                continue;
                            }
                            let mut w2 = w.clone();
                            w2.push(l);
                            next.push(w2);
                        }
                    }
                    words.extend(next.iter().cloned());
                    frontier = next;
                }
                let mut seen = std::collections::HashSet::new();
                for w in words {
                    let mut g = self.identity();
                    for l in w {
                        let gen = self.generator((l.unsigned_abs() - 1) as usize);
                        let gen = if l < 0 { self.inv(&gen) } else { gen };
                        g = self.mul(&g, &gen).expect("same group");
                    }
                    if seen.insert(g.clone()) {
                        out.push(g);
                    }
                }
                out
            }
        }
    }
}

impl SemidirectData {
    /// `φ_q(n)`, the action of quotient element `q` on the normal part.
    fn act(&self, q: &GroupElement, n: &GroupElement) -> Result<GroupElement> {
        let exps = q.as_int().ok_or(Error::GroupMismatch)?;
        let mut cur = n.clone();
        for (auto, &k) in self.action.iter().zip(exps).rev() {
            cur = self.apply_auto(auto, &cur, k)?;
        }
        Ok(cur)
    }

    fn apply_auto(&self, auto: &Automorphism, n: &GroupElement, power: i64) -> Result<GroupElement> {
        let imgs = if power >= 0 { &auto.images } else { &auto.inverse_images };
        let mut cur = n.clone();
        for _ in 0..power.unsigned_abs() {
            cur = match &cur {
                GroupElement::Int(v) => {
                    let mut acc = self.normal.identity();
                    for (i, &c) in v.iter().enumerate() {
                        let term = self.normal.pow(&imgs[i], c)?;
                        acc = self.normal.mul(&acc, &term)?;
                    }
                    acc
                }
                GroupElement::Word(w) => {
                    let mut acc = self.normal.identity();
                    for &l in w {
                        let img = &imgs[(l.unsigned_abs() - 1) as usize];
                        let img = if l < 0 { self.normal.inv(img) } else { img.clone() };
                        acc = self.normal.mul(&acc, &img)?;
                    }
                    acc
                }
                _ => return Err(Error::GroupMismatch),
            };
        }
        Ok(cur)
    }
}

impl fmt::Display for OrderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            OrderKind::Lex => "lex",
            OrderKind::DubrovinaDubrovin => "dubrovina_dubrovin",
            OrderKind::Magnus => "magnus",
            OrderKind::SemidirectLex => "semidirect_lex",
        };
        f.write_str(s)
    }
}

pub(crate) fn free_reduce(w: &[i32]) -> Vec<i32> {
    let mut out: Vec<i32> = Vec::with_capacity(w.len());
    for &l in w {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

pub(crate) fn concat_reduce(a: &[i32], b: &[i32]) -> Vec<i32> {
    let mut out = a.to_vec();
    for &l in b {
        if out.last() == Some(&-l) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

pub(crate) fn invert_word(w: &[i32]) -> Vec<i32> {
    w.iter().rev().map(|l| -l).collect()
}

const VARS: [char; 4] = ['x', 'y', 'z', 'w'];

fn parse_int_vector(s: &str, rank: usize) -> Result<Vec<i64>> {
    parse_rat_vector(s, rank)?
        .into_iter()
        .map(|x| {
            if x.is_integer() {
                x.to_integer().try_into().map_err(|_| Error::Parse(format!("coordinate too large in `{s}`")))
            } else {
                Err(Error::Parse(format!("non-integer coordinate in `{s}`")))
            }
        })
        .collect()
}

/// Accepts `(a,b,...)`, `e`/`1`, or a monomial like `x^2.y^-1` (variables `x,y,z,w`).
fn parse_rat_vector(s: &str, rank: usize) -> Result<Vec<BigRational>> {
    let bad = || Error::Parse(format!("invalid vector element `{s}` for rank {rank}"));
    if s == "e" || s == "1" {
        return Ok(vec![BigRational::zero(); rank]);
    }
    if let Some(inner) = s.strip_prefix('(').and_then(|t| t.strip_suffix(')')) {
        let parts: Vec<&str> = inner.split(',').collect();
        if parts.len() != rank {
            return Err(bad());
        }
        return parts.iter().map(|p| scalar::parse(p)).collect();
    }
    let mut v = vec![BigRational::zero(); rank];
    for factor in s.split(['.', '*']) {
        let factor = factor.trim();
        let (var, exp) = match factor.split_once('^') {
            Some((var, e)) => (var, scalar::parse(e)?),
            None => (factor, scalar::one()),
        };
        let mut chars = var.chars();
        let c = chars.next().ok_or_else(bad)?;
        if chars.next().is_some() {
            return Err(bad());
        }
        let idx = VARS.iter().position(|&x| x == c).ok_or_else(bad)?;
        if idx >= rank {
            return Err(bad());
        }
        v[idx] += exp;
    }
    Ok(v)
}

fn parse_free_word(s: &str, rank: usize) -> Result<Vec<i32>> {
    if s == "e" || s == "1" || s.is_empty() {
        return Ok(Vec::new());
    }
    let mut w = Vec::new();
    for c in s.chars() {
        if c == '.' {
            continue;
        }
        let lower = c.to_ascii_lowercase();
        let idx = ['a', 'b', 'c', 'd']
            .iter()
            .position(|&x| x == lower)
            .filter(|&i| i < rank)
            .ok_or_else(|| Error::Parse(format!("invalid letter `{c}` in `{s}`")))?;
        let l = idx as i32 + 1;
        w.push(if c.is_ascii_uppercase() { -l } else { l });
    }
    Ok(free_reduce(&w))
}

fn format_free_word(w: &[i32]) -> String {
    if w.is_empty() {
        return "e".into();
    }
    w.iter()
        .map(|&l| {
            let c = (b'a' + (l.unsigned_abs() - 1) as u8) as char;
            if l < 0 {
                c.to_ascii_uppercase().to_string()
            } else {
                c.to_string()
            }
        })
        .collect::<Vec<_>>()
        .join(".")
}
