//! Convex subgroups and convex jumps for the lex and semidirect-lex families.

use std::fmt;

use num::Zero;

use super::{Group, GroupElement, Kind};
use crate::error::{Error, Result};

/// Subgroup descriptor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Subgroup {
    Trivial,
    Whole,
    /// Vector elements whose coordinates with index `≥ k` vanish.
    LexPrefix(usize),
    /// `{(n, e) : n ∈ S}` inside a semidirect product.
    InNormal(Box<Subgroup>),
    /// `{(n, q) : q ∈ S}` inside a semidirect product.
    OverNormal(Box<Subgroup>),
}

impl Subgroup {
    pub fn contains(&self, group: &Group, g: &GroupElement) -> bool {
        match self {
            Subgroup::Trivial => group.is_identity(g),
            Subgroup::Whole => true,
            Subgroup::LexPrefix(k) => match group.coordinates(g) {
                Some(c) => c.iter().skip(*k).all(|x| x.is_zero()),
                None => false,
            },
            Subgroup::InNormal(s) => match (group.semidirect_parts(), g) {
                (Some((n, q)), GroupElement::Pair(a, b)) => q.is_identity(b) && s.contains(n, a),
                _ => false,
            },
            Subgroup::OverNormal(s) => match (group.semidirect_parts(), g) {
                (Some((_, q)), GroupElement::Pair(_, b)) => s.contains(q, b),
                _ => false,
            },
        }
    }
}

impl fmt::Display for Subgroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Subgroup::Trivial => write!(f, "{{e}}"),
            Subgroup::Whole => write!(f, "G"),
            Subgroup::LexPrefix(k) => write!(f, "C{k}"),
            Subgroup::InNormal(s) => write!(f, "N({s})"),
            Subgroup::OverNormal(s) => write!(f, "N.Q({s})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Rule {
    /// Zero all vector coordinates below the index.
    KeepFrom(usize),
    Identity,
    Normal(Box<Rule>),
    Quotient(Box<Rule>),
}

/// A pair `C′ ⊂ C` of convex subgroups with no convex subgroup strictly between.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvexJump {
    pub lower: Subgroup,
    pub upper: Subgroup,
    pub factor_rank: usize,
    rule: Rule,
}

impl ConvexJump {
    /// Representative of `gC′` in the fixed transversal; `e ↦ e`.
    pub fn transversal(&self, group: &Group, g: &GroupElement) -> GroupElement {
        apply_rule(&self.rule, group, g)
    }
}

fn apply_rule(rule: &Rule, group: &Group, g: &GroupElement) -> GroupElement {
    match (rule, g) {
        (Rule::Identity, _) => g.clone(),
        (Rule::KeepFrom(k), GroupElement::Int(v)) => {
            GroupElement::Int(v.iter().enumerate().map(|(i, x)| if i < *k { 0 } else { *x }).collect())
        }
        (Rule::KeepFrom(k), GroupElement::Rat(v)) => GroupElement::Rat(
            v.iter().enumerate().map(|(i, x)| if i < *k { num::zero() } else { x.clone() }).collect(),
        ),
        (Rule::Normal(r), GroupElement::Pair(n, q)) => {
            let (ng, _) = group.semidirect_parts().expect("semidirect");
            GroupElement::pair(apply_rule(r, ng, n), (**q).clone())
        }
        (Rule::Quotient(r), GroupElement::Pair(_, q)) => {
            let (ng, qg) = group.semidirect_parts().expect("semidirect");
            GroupElement::pair(ng.identity(), apply_rule(r, qg, q))
        }
        _ => g.clone(),
    }
}

/// The chain of convex jumps, innermost first. A free normal factor is collapsed into a
/// single block.
pub fn convex_jumps(group: &Group) -> Result<Vec<ConvexJump>> {
    match &group.kind {
        Kind::FreeAbelian(r) | Kind::RationalVector(r) => Ok((0..*r)
            .map(|i| ConvexJump {
                lower: if i == 0 { Subgroup::Trivial } else { Subgroup::LexPrefix(i) },
                upper: if i + 1 == *r { Subgroup::Whole } else { Subgroup::LexPrefix(i + 1) },
                factor_rank: 1,
                rule: Rule::KeepFrom(i),
            })
            .collect()),
        Kind::Free { rank, .. } => Ok(vec![ConvexJump {
            lower: Subgroup::Trivial,
            upper: Subgroup::Whole,
            factor_rank: *rank,
            rule: Rule::Identity,
        }]),
        Kind::Semidirect(d) => {
            let mut out: Vec<ConvexJump> = convex_jumps(&d.normal)?
                .into_iter()
                .map(|j| ConvexJump {
                    lower: Subgroup::InNormal(Box::new(j.lower)),
                    upper: Subgroup::InNormal(Box::new(j.upper)),
                    factor_rank: j.factor_rank,
                    rule: Rule::Normal(Box::new(j.rule)),
                })
                .collect();
            for j in convex_jumps(&d.quotient)? {
                out.push(ConvexJump {
                    lower: Subgroup::OverNormal(Box::new(j.lower)),
                    upper: if j.upper == Subgroup::Whole {
                        Subgroup::Whole
                    } else {
                        Subgroup::OverNormal(Box::new(j.upper))
                    },
                    factor_rank: j.factor_rank,
                    rule: Rule::Quotient(Box::new(j.rule)),
                });
            }
            if let Some(first) = out.first_mut() {
                first.lower = Subgroup::Trivial;
            }
            Ok(out)
        }
        Kind::B3 => Err(Error::UnsupportedFamily("convex jumps are not computed for B3".into())),
    }
}
