//! Truncated series in `F((G))`: a certified prefix of terms below a frontier.

use std::cmp::Ordering;
use std::fmt;

use num::Zero;

use crate::crossed::{split_top_level, CpElement, CrossedProduct};
use crate::error::{Error, Result};
use crate::group::GroupElement;
use crate::scalar::{self, Scalar};

/// Every true term strictly below the frontier is present and exact.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Frontier {
    Below(GroupElement),
    Infinite,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Valuation {
    Element(GroupElement),
    Infinity,
    /// No term below a finite frontier: the valuation is at least the frontier.
    AtLeast(GroupElement),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Series {
    terms: Vec<(GroupElement, Scalar)>,
    frontier: Frontier,
}

impl Series {
    pub fn zero() -> Self {
        Series { terms: Vec::new(), frontier: Frontier::Infinite }
    }

    pub fn terms(&self) -> &[(GroupElement, Scalar)] {
        &self.terms
    }

    pub fn frontier(&self) -> &Frontier {
        &self.frontier
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, g: &GroupElement) -> Scalar {
        self.terms.iter().find(|(h, _)| h == g).map(|(_, c)| c.clone()).unwrap_or_else(scalar::zero)
    }
}

/// Series operations relative to a crossed product (group, order and twist).
impl CrossedProduct {
    fn lt(&self, a: &GroupElement, b: &GroupElement) -> Result<bool> {
        Ok(self.group.compare(a, b)? == Ordering::Less)
    }

    pub fn below(&self, g: &GroupElement, f: &Frontier) -> Result<bool> {
        match f {
            Frontier::Infinite => Ok(true),
            Frontier::Below(h) => self.lt(g, h),
        }
    }

    pub fn frontier_min(&self, a: &Frontier, b: &Frontier) -> Result<Frontier> {
        Ok(match (a, b) {
            (Frontier::Infinite, f) | (f, Frontier::Infinite) => f.clone(),
            (Frontier::Below(x), Frontier::Below(y)) => {
                if self.lt(y, x)? {
                    b.clone()
                } else {
                    a.clone()
                }
            }
        })
    }

    /// Builds a series from arbitrary terms: sorts, merges, drops zeros and terms at or above
    /// the frontier.
    pub fn series_from_terms(
        &self,
        terms: impl IntoIterator<Item = (GroupElement, Scalar)>,
        frontier: Frontier,
    ) -> Result<Series> {
        let mut acc = CpElement::zero();
        for (g, c) in terms {
            self.group.check(&g)?;
            acc.add_term(g, c);
        }
        let mut kept = Vec::new();
        for (g, c) in acc.terms() {
            if self.below(g, &frontier)? {
                kept.push((g.clone(), c.clone()));
            }
        }
        let mut err = None;
        kept.sort_by(|(g, _), (h, _)| {
            self.group.compare(g, h).unwrap_or_else(|e| {
                err.get_or_insert(e);
                Ordering::Equal
            })
        });
        if let Some(e) = err {
            return Err(e);
        }
        Ok(Series { terms: kept, frontier })
    }

    /// The exact series of a crossed-product element.
    pub fn series_from_cp(&self, x: &CpElement) -> Result<Series> {
        self.series_from_terms(x.terms().map(|(g, c)| (g.clone(), c.clone())), Frontier::Infinite)
    }

    pub fn monomial_series(&self, g: GroupElement, c: Scalar) -> Result<Series> {
        self.series_from_terms([(g, c)], Frontier::Infinite)
    }

    pub fn truncate(&self, m: &Series, f: &Frontier) -> Result<Series> {
        let frontier = self.frontier_min(&m.frontier, f)?;
        self.series_from_terms(m.terms.iter().cloned(), frontier)
    }

    pub fn v(&self, m: &Series) -> Valuation {
        match (m.terms.first(), &m.frontier) {
            (Some((g, _)), _) => Valuation::Element(g.clone()),
            (None, Frontier::Infinite) => Valuation::Infinity,
            (None, Frontier::Below(f)) => Valuation::AtLeast(f.clone()),
        }
    }

    pub fn series_add(&self, m: &Series, n: &Series) -> Result<Series> {
        let frontier = self.frontier_min(&m.frontier, &n.frontier)?;
        self.series_from_terms(m.terms.iter().chain(n.terms.iter()).cloned(), frontier)
    }

    pub fn series_neg(&self, m: &Series) -> Series {
        self.scalar_right(m, &-scalar::one())
    }

    pub fn series_sub(&self, m: &Series, n: &Series) -> Result<Series> {
        self.series_add(m, &self.series_neg(n))
    }

    /// `m·a`.
    pub fn scalar_right(&self, m: &Series, a: &Scalar) -> Series {
        if a.is_zero() {
            return Series { terms: Vec::new(), frontier: m.frontier.clone() };
        }
        Series {
            terms: m.terms.iter().map(|(g, c)| (g.clone(), c * a)).collect(),
            frontier: m.frontier.clone(),
        }
    }

    /// `ι_{a x_h}(m) = Σ x_{hg} α⁻¹_{hg}(a η(h,g)) m_g`; the frontier moves to `h·F`.
    pub fn monomial_act(&self, a: &Scalar, h: &GroupElement, m: &Series) -> Result<Series> {
        let frontier = match &m.frontier {
            Frontier::Infinite => Frontier::Infinite,
            Frontier::Below(f) => Frontier::Below(self.group.mul(h, f)?),
        };
        if a.is_zero() {
            return Ok(Series { terms: Vec::new(), frontier });
        }
        let terms = m
            .terms
            .iter()
            .map(|(g, c)| Ok((self.group.mul(h, g)?, a * self.eta(h, g) * c)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Series { terms, frontier })
    }

    /// `ι_x(m)` for a finite element `x`.
    pub fn finite_act(&self, x: &CpElement, m: &Series) -> Result<Series> {
        let parts = x
            .terms()
            .map(|(h, a)| self.monomial_act(a, h, m))
            .collect::<Result<Vec<_>>>()?;
        if parts.is_empty() {
            return Ok(Series { terms: Vec::new(), frontier: Frontier::Infinite });
        }
        self.sum_family(&parts)
    }

    /// Pointwise sum of a finite family; the frontier is the minimum.
    pub fn sum_family(&self, fam: &[Series]) -> Result<Series> {
        let mut frontier = Frontier::Infinite;
        for m in fam {
            frontier = self.frontier_min(&frontier, &m.frontier)?;
        }
        self.series_from_terms(fam.iter().flat_map(|m| m.terms.iter().cloned()), frontier)
    }

    /// Twisted product for abelian exponent groups, with frontier
    /// `min(F₁ + v₂, F₂ + v₁)`.
    pub fn series_mul(&self, m: &Series, n: &Series) -> Result<Series> {
        if !self.group.is_abelian() {
            return Err(Error::NonAbelianExponent);
        }
        let lower = |s: &Series| -> Option<GroupElement> {
            match self.v(s) {
                Valuation::Element(g) | Valuation::AtLeast(g) => Some(g),
                Valuation::Infinity => None,
            }
        };
        let shift = |f: &Frontier, v: Option<GroupElement>| -> Result<Frontier> {
            Ok(match (f, v) {
                (_, None) | (Frontier::Infinite, _) => Frontier::Infinite,
                (Frontier::Below(f), Some(v)) => Frontier::Below(self.group.mul(f, &v)?),
            })
        };
        let (vm, vn) = (lower(m), lower(n));
        if vm.is_none() || vn.is_none() {
            return Ok(Series::zero());
        }
        let frontier = self.frontier_min(&shift(&m.frontier, vn.clone())?, &shift(&n.frontier, vm.clone())?)?;
        let mut terms = Vec::new();
        for (g, a) in &m.terms {
            for (h, b) in &n.terms {
                let gh = self.group.mul(g, h)?;
                if !self.below(&gh, &frontier)? {
                    continue;
                }
                terms.push((gh, a * self.alpha(g, b) * self.eta(g, h)));
            }
        }
        self.series_from_terms(terms, frontier)
    }

    /// Whether `m` and `n` agree on every term below the smaller frontier.
    pub fn agree_on_common(&self, m: &Series, n: &Series) -> Result<bool> {
        let f = self.frontier_min(&m.frontier, &n.frontier)?;
        Ok(self.truncate(m, &f)?.terms == self.truncate(n, &f)?.terms)
    }

    pub fn format_series(&self, m: &Series) -> String {
        let body = if m.terms.is_empty() {
            "0".to_string()
        } else {
            m.terms
                .iter()
                .map(|(g, c)| format!("{}*[{}]", scalar::format(c), self.group.format_element(g)))
                .collect::<Vec<_>>()
                .join(" + ")
        };
        format!("{body} (frontier: {})", self.format_frontier(&m.frontier))
    }

    pub fn format_frontier(&self, f: &Frontier) -> String {
        match f {
            Frontier::Infinite => "inf".into(),
            Frontier::Below(g) => self.group.format_element(g),
        }
    }

    /// Inverse of [`Self::format_series`].
    pub fn parse_series(&self, s: &str) -> Result<Series> {
        let s = s.trim();
        let (body, frontier) = match s.rfind("(frontier:") {
            Some(i) => {
                let tail = s[i + "(frontier:".len()..]
                    .trim()
                    .strip_suffix(')')
                    .ok_or_else(|| Error::Parse("unterminated frontier".into()))?
                    .trim();
                let f = if tail == "inf" {
                    Frontier::Infinite
                } else {
                    Frontier::Below(self.group.parse_element(tail)?)
                };
                (&s[..i], f)
            }
            None => (s, Frontier::Infinite),
        };
        let body = body.trim();
        let x = if body == "0" {
            CpElement::zero()
        } else {
            let parts = split_top_level(body, '+');
            let mut acc = CpElement::zero();
            for p in parts {
                acc = self.add(&acc, &self.parse(p)?)?;
            }
            acc
        };
        self.series_from_terms(x.terms().map(|(g, c)| (g.clone(), c.clone())), frontier)
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Element(g) => write!(f, "{g:?}"),
            Valuation::Infinity => write!(f, "+inf"),
            Valuation::AtLeast(g) => write!(f, ">= {g:?}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::crossed::Twist;
    use crate::group::Group;

    fn z1() -> CrossedProduct {
        CrossedProduct::group_ring(Group::free_abelian(1))
    }

    fn x(k: i64) -> GroupElement {
        GroupElement::int(&[k])
    }

    #[test]
    fn valuation_examples() {
        let r = z1();
        let m = r.parse_series("1*[x^-1] + 1 + 1*[x]").unwrap();
        assert_eq!(r.v(&m), Valuation::Element(x(-1)));
        assert_eq!(r.v(&Series::zero()), Valuation::Infinity);
        let q = CrossedProduct::group_ring(Group::free_abelian(2));
        let m = q.parse_series("1*[(0,1)] + 1*[(1,0)]").unwrap();
        assert_eq!(q.v(&m), Valuation::Element(GroupElement::int(&[1, 0])));
    }

    #[test]
    fn telescoping_under_truncation() {
        let r = z1();
        let geo = r.series_from_terms((0..10).map(|k| (x(k), scalar::one())), Frontier::Below(x(10))).unwrap();
        let f = r.parse("1 + -1*[x]").unwrap();
        let out = r.finite_act(&f, &geo).unwrap();
        assert_eq!(r.format_series(&out), "1*[(0)] (frontier: (10))");
        let prod = r.series_mul(&r.series_from_cp(&f).unwrap(), &geo).unwrap();
        assert_eq!(prod, out);
    }

    #[test]
    fn add_min_rule() {
        let r = z1();
        let a = r.series_from_terms([(x(0), scalar::one())], Frontier::Below(x(5))).unwrap();
        let b = r.series_from_terms([(x(1), scalar::one())], Frontier::Below(x(3))).unwrap();
        assert_eq!(r.series_add(&a, &b).unwrap().frontier(), &Frontier::Below(x(3)));
    }

    #[test]
    fn quantum_monomial_action() {
        let q = CrossedProduct::new(Group::free_abelian(2), Twist::quantum(scalar::int(2))).unwrap();
        let m = q.monomial_series(GroupElement::int(&[1, 0]), scalar::one()).unwrap();
        let out = q.monomial_act(&scalar::one(), &GroupElement::int(&[0, 1]), &m).unwrap();
        assert_eq!(out.terms(), &[(GroupElement::int(&[1, 1]), scalar::int(2))]);
    }

    #[test]
    fn render_parse_roundtrip() {
        let r = z1();
        let m = r.series_from_terms([(x(-2), scalar::ratio(-3, 2)), (x(4), scalar::int(7))], Frontier::Below(x(6))).unwrap();
        let s = r.format_series(&m);
        assert_eq!(r.parse_series(&s).unwrap(), m);
    }
}
