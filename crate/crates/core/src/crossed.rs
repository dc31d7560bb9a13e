//! The crossed product `F[G, η, α]` over `F = ℚ` with `α` the identity.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num::{One, Zero};

use crate::error::{Error, Result};
use crate::group::{ConvexJump, Group, GroupElement};
use crate::scalar::{self, Scalar};

/// The 2-cocycle `η`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Twist {
    Trivial,
    /// `η(g, h) = q^{gᵀ B h}` on a free abelian group.
    BilinearQ { q: Scalar, matrix: Vec<Vec<i64>> },
    /// Explicit overrides on top of a base rule.
    Table { base: Box<Twist>, entries: HashMap<(GroupElement, GroupElement), Scalar> },
}

impl Twist {
    pub fn quantum(q: Scalar) -> Self {
        Twist::BilinearQ { q, matrix: vec![vec![0, 0], vec![1, 0]] }
    }

    pub fn is_trivial(&self) -> bool {
        matches!(self, Twist::Trivial)
    }

    pub fn eta(&self, g: &GroupElement, h: &GroupElement) -> Scalar {
        match self {
            Twist::Trivial => scalar::one(),
            Twist::BilinearQ { q, matrix } => match (g, h) {
                (GroupElement::Int(a), GroupElement::Int(b)) => {
                    let mut e = 0i64;
                    for (i, row) in matrix.iter().enumerate() {
                        for (j, m) in row.iter().enumerate() {
                            if *m != 0 {
                                e += a.get(i).copied().unwrap_or(0) * m * b.get(j).copied().unwrap_or(0);
                            }
                        }
                    }
                    scalar::pow(q, e)
                }
                _ => scalar::one(),
            },
            Twist::Table { base, entries } => match entries.get(&(g.clone(), h.clone())) {
                Some(v) => v.clone(),
                None => base.eta(g, h),
            },
        }
    }

    /// Checks the twist is usable on `group` (bilinear forms need a free abelian group of
    /// matching rank, and `q ≠ 0`).
    pub fn check_for(&self, group: &Group) -> Result<()> {
        match self {
            Twist::Trivial => Ok(()),
            Twist::BilinearQ { q, matrix } => {
                let r = match group.vector_rank() {
                    Some(r) if group.is_free_abelian() => r,
                    _ => return Err(Error::Config("bilinear_q needs a free abelian group".into())),
                };
                if q.is_zero() {
                    return Err(Error::Config("q must be nonzero".into()));
                }
                if matrix.len() != r || matrix.iter().any(|row| row.len() != r) {
                    return Err(Error::Config(format!("bilinear matrix must be {r}x{r}")));
                }
                Ok(())
            }
            Twist::Table { base, entries } => {
                if entries.values().any(|v| v.is_zero()) {
                    return Err(Error::Config("eta table values must be nonzero".into()));
                }
                base.check_for(group)
            }
        }
    }
}

/// Finite-support element `Σ a_g x_g`; no zero coefficients are stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct CpElement {
    terms: BTreeMap<GroupElement, Scalar>,
}

impl CpElement {
    pub fn zero() -> Self {
        CpElement::default()
    }

    pub fn monomial(g: GroupElement, c: Scalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(g, c);
        }
        CpElement { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = (GroupElement, Scalar)>) -> Self {
        let mut x = CpElement::zero();
        for (g, c) in it {
            x.add_term(g, c);
        }
        x
    }

    pub fn add_term(&mut self, g: GroupElement, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(g);
        match entry {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, g: &GroupElement) -> Scalar {
        self.terms.get(g).cloned().unwrap_or_else(scalar::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&GroupElement, &Scalar)> {
        self.terms.iter()
    }

    pub fn support(&self) -> impl Iterator<Item = &GroupElement> {
        self.terms.keys()
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        CpElement::from_terms(self.terms.iter().map(|(g, c)| (g.clone(), c * s)))
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CocycleReport {
    pub samples: usize,
    pub triples: usize,
    /// `η(g,e) = η(e,g) = 1`.
    pub normalization: Vec<String>,
    /// `α_g α_h = α_{gh}` up to conjugation by `η(g,h)`.
    pub action: Vec<String>,
    /// `α_g(η(h,l)) η(g,hl) = η(g,h) η(gh,l)`.
    pub cocycle: Vec<String>,
}

impl CocycleReport {
    pub fn passed(&self) -> bool {
        self.normalization.is_empty() && self.action.is_empty() && self.cocycle.is_empty()
    }
}

/// A group together with its twist.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CrossedProduct {
    pub group: Group,
    pub twist: Twist,
}

impl CrossedProduct {
    pub fn new(group: Group, twist: Twist) -> Result<Self> {
        twist.check_for(&group)?;
        Ok(CrossedProduct { group, twist })
    }

    pub fn group_ring(group: Group) -> Self {
        CrossedProduct { group, twist: Twist::Trivial }
    }

    pub fn eta(&self, g: &GroupElement, h: &GroupElement) -> Scalar {
        self.twist.eta(g, h)
    }

    /// `α_g` on scalars. `Aut(ℚ)` is trivial.
    pub fn alpha(&self, _g: &GroupElement, a: &Scalar) -> Scalar {
        a.clone()
    }

    pub fn one(&self) -> CpElement {
        CpElement::monomial(self.group.identity(), scalar::one())
    }

    pub fn check(&self, x: &CpElement) -> Result<()> {
        x.support().try_for_each(|g| self.group.check(g)).map_err(|_| Error::Mismatch)
    }

    pub fn add(&self, x: &CpElement, y: &CpElement) -> Result<CpElement> {
        self.check(x)?;
        self.check(y)?;
        let mut out = x.clone();
        for (g, c) in y.terms() {
            out.add_term(g.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self, x: &CpElement) -> CpElement {
        x.scale(&-scalar::one())
    }

    pub fn sub(&self, x: &CpElement, y: &CpElement) -> Result<CpElement> {
        self.add(x, &self.neg(y))
    }

    /// `a_g x_g · b_h x_h = a_g α_g(b_h) η(g,h) x_{gh}`.
    pub fn mul(&self, x: &CpElement, y: &CpElement) -> Result<CpElement> {
        self.check(x)?;
        self.check(y)?;
        let mut out = CpElement::zero();
        for (g, a) in x.terms() {
            for (h, b) in y.terms() {
                let c = a * self.alpha(g, b) * self.eta(g, h);
                out.add_term(self.group.mul(g, h)?, c);
            }
        }
        Ok(out)
    }

    /// `(x_g)⁻¹ = η(g, g⁻¹)⁻¹ x_{g⁻¹}`.
    pub fn monomial_inverse(&self, g: &GroupElement) -> CpElement {
        let gi = self.group.inv(g);
        let c = self.eta(g, &gi).recip();
        CpElement::monomial(gi, c)
    }

    /// Inverse of a unit `a x_g`.
    pub fn unit_inverse(&self, x: &CpElement) -> Result<CpElement> {
        if !self.is_unit(x) {
            return Err(Error::Precondition("element is not a unit".into()));
        }
        let (g, a) = x.terms().next().expect("one term");
        Ok(self.monomial_inverse(g).scale(&a.recip()))
    }

    /// Units are exactly the nonzero monomials.
    pub fn is_unit(&self, x: &CpElement) -> bool {
        x.len() == 1
    }

    /// `x_g x x_g⁻¹`.
    pub fn conj_alpha(&self, g: &GroupElement, x: &CpElement) -> Result<CpElement> {
        let xg = CpElement::monomial(g.clone(), scalar::one());
        self.mul(&self.mul(&xg, x)?, &self.monomial_inverse(g))
    }

    /// Checks the cocycle identities on all samples (singletons) and all sample triples.
    pub fn validate_cocycle(&self, samples: &[GroupElement]) -> CocycleReport {
        let triples: Vec<(usize, usize, usize)> = (0..samples.len())
            .flat_map(|i| (0..samples.len()).flat_map(move |j| (0..samples.len()).map(move |k| (i, j, k))))
            .collect();
        self.validate_cocycle_on(samples, &triples)
    }

    /// As [`Self::validate_cocycle`] but on an explicit list of index triples.
    pub fn validate_cocycle_on(&self, samples: &[GroupElement], triples: &[(usize, usize, usize)]) -> CocycleReport {
        let e = self.group.identity();
        let mut rep = CocycleReport { samples: samples.len(), triples: triples.len(), ..Default::default() };
        let fmt = |g: &GroupElement| self.group.format_element(g);
        for g in samples {
            if !self.eta(g, &e).is_one() || !self.eta(&e, g).is_one() {
                rep.normalization.push(fmt(g));
            }
        }
        let probe = [scalar::ratio(2, 3), scalar::int(-5)];
        for &(i, j, k) in triples {
            let (g, h, l) = (&samples[i], &samples[j], &samples[k]);
            let (Ok(gh), Ok(hl)) = (self.group.mul(g, h), self.group.mul(h, l)) else {
                rep.cocycle.push(format!("group mismatch at ({}, {}, {})", fmt(g), fmt(h), fmt(l)));
                continue;
            };
            for a in &probe {
                let lhs = self.alpha(g, &self.alpha(h, a));
                let n = self.eta(g, h);
                let rhs = &n * self.alpha(&gh, a) * n.recip();
                if lhs != rhs {
                    rep.action.push(format!("({}, {})", fmt(g), fmt(h)));
                    break;
                }
            }
            let lhs = self.alpha(g, &self.eta(h, l)) * self.eta(g, &hl);
            let rhs = self.eta(g, h) * self.eta(&gh, l);
            if lhs != rhs {
                rep.cocycle.push(format!("({}, {}, {})", fmt(g), fmt(h), fmt(l)));
            }
        }
        rep.action.dedup();
        rep
    }

    /// Writes `x = Σ_t c_t x_t` with `t` in the jump's transversal and `c_t` supported in the
    /// lower subgroup.
    pub fn decompose_by_cosets(
        &self,
        x: &CpElement,
        jump: &ConvexJump,
    ) -> Result<BTreeMap<GroupElement, CpElement>> {
        self.check(x)?;
        let mut out: BTreeMap<GroupElement, CpElement> = BTreeMap::new();
        for (g, a) in x.terms() {
            if !jump.upper.contains(&self.group, g) {
                return Err(Error::Precondition(format!(
                    "{} lies outside {}",
                    self.group.format_element(g),
                    jump.upper
                )));
            }
            let t = jump.transversal(&self.group, g);
            let n = self.group.mul(g, &self.group.inv(&t))?;
            if !jump.lower.contains(&self.group, &n) {
                return Err(Error::NotNormal(format!(
                    "{} is not in the coset of its representative",
                    self.group.format_element(g)
                )));
            }
            let conj = self.group.mul(&self.group.mul(&t, &n)?, &self.group.inv(&t))?;
            if !jump.lower.contains(&self.group, &conj) {
                return Err(Error::NotNormal(format!(
                    "conjugate of {} by {} leaves {}",
                    self.group.format_element(&n),
                    self.group.format_element(&t),
                    jump.lower
                )));
            }
            let c = a * self.eta(&n, &t).recip();
            out.entry(t).or_default().add_term(n, c);
        }
        out.retain(|_, c| !c.is_zero());
        Ok(out)
    }

    /// Reassembles `Σ_t c_t x_t`.
    pub fn assemble_cosets(&self, parts: &BTreeMap<GroupElement, CpElement>) -> Result<CpElement> {
        let mut out = CpElement::zero();
        for (t, c) in parts {
            let xt = CpElement::monomial(t.clone(), scalar::one());
            out = self.add(&out, &self.mul(c, &xt)?)?;
        }
        Ok(out)
    }

    /// Terms in ascending left-order (structural order breaks undecided comparisons).
    pub fn sorted_terms<'a>(&self, x: &'a CpElement) -> Vec<(&'a GroupElement, &'a Scalar)> {
        let mut v: Vec<_> = x.terms().collect();
        v.sort_by(|(g, _), (h, _)| self.group.compare(g, h).unwrap_or_else(|_| g.cmp(h)));
        v
    }

    /// Least support element in the left-order.
    pub fn min_support(&self, x: &CpElement) -> Option<GroupElement> {
        self.sorted_terms(x).first().map(|(g, _)| (*g).clone())
    }

    pub fn format(&self, x: &CpElement) -> String {
        if x.is_zero() {
            return "0".into();
        }
        self.sorted_terms(x)
            .iter()
            .map(|(g, c)| format!("{}*[{}]", scalar::format(c), self.group.format_element(g)))
            .collect::<Vec<_>>()
            .join(" + ")
    }

    /// Parses `scalar*[word] + scalar*[word] + …`; `0` is the zero element.
    pub fn parse(&self, s: &str) -> Result<CpElement> {
        let s = s.trim();
        if s == "0" {
            return Ok(CpElement::zero());
        }
        let mut out = CpElement::zero();
        for term in signed_terms(s) {
            let term = term.as_str();
            let (c, w) = match term.find('[') {
                Some(i) => {
                    let close = term
                        .rfind(']')
                        .filter(|&j| j == term.len() - 1)
                        .ok_or_else(|| Error::Parse(format!("unterminated `[` in `{term}`")))?;
                    let head = term[..i].trim();
                    let c = match head.strip_suffix('*') {
                        Some(h) => scalar::parse(h.trim())?,
                        None if head.is_empty() => scalar::one(),
                        None if head == "-" => -scalar::one(),
                        None => return Err(Error::Parse(format!("expected `scalar*[word]`, got `{term}`"))),
                    };
                    (c, self.group.parse_element(&term[i + 1..close])?)
                }
                None => (scalar::parse(term)?, self.group.identity()),
            };
            out.add_term(w, c);
        }
        Ok(out)
    }
}

impl fmt::Display for CocycleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let line = |f: &mut fmt::Formatter<'_>, name: &str, v: &Vec<String>| {
            if v.is_empty() {
                writeln!(f, "{name}: PASS")
            } else {
                writeln!(f, "{name}: FAIL ({} violations, first {})", v.len(), v[0])
            }
        };
        line(f, "normalization eta(g,e) = eta(e,g) = 1", &self.normalization)?;
        line(f, "action alpha_g alpha_h = eta alpha_gh eta^-1", &self.action)?;
        line(f, "cocycle alpha_g(eta(h,l)) eta(g,hl) = eta(g,h) eta(gh,l)", &self.cocycle)
    }
}

/// Splits at top-level `+` and binary `-`, keeping the sign with the following term.
fn signed_terms(s: &str) -> Vec<String> {
    let mut out = Vec::new();
    for part in split_top_level(s, '+') {
        let mut depth = 0i32;
        let mut cur = String::new();
        for ch in part.chars() {
            match ch {
                '[' | '(' => depth += 1,
                ']' | ')' => depth -= 1,
                '-' if depth == 0 && !cur.trim().is_empty() && !cur.trim_end().ends_with('*') => {
                    out.push(cur.trim().to_string());
                    cur = String::from("-");
                    continue;
                }
                _ => {}
            }
            if ch.is_whitespace() && cur == "-" {
                continue;
            }
            cur.push(ch);
        }
        out.push(cur.trim().to_string());
    }
    out
}

/// Splits at `sep` outside brackets and parentheses.
pub(crate) fn split_top_level(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '[' | '(' => depth += 1,
            ']' | ')' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + ch.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}
