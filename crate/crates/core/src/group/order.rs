//! Cone membership for semidirect products, Conradian witness search and cone-axiom checks.

use std::cmp::Ordering;

use super::{Group, GroupElement};
use crate::error::{Error, Result};

/// `P = {(n, q) : q >₂ e} ∪ {(n, e) : n >₁ e}`.
pub fn semidirect_cone_member(group: &Group, g: &GroupElement) -> Result<bool> {
    let (ng, qg) = group
        .semidirect_parts()
        .ok_or_else(|| Error::UnsupportedFamily("not a semidirect product".into()))?;
    match g {
        GroupElement::Pair(n, q) => {
            if qg.is_identity(q) {
                ng.is_positive(n)
            } else {
                qg.is_positive(q)
            }
        }
        _ => Err(Error::GroupMismatch),
    }
}

/// Smallest `n ≤ n_max` with `ab < (ba)ⁿ`.
pub fn conradian_witness(
    group: &Group,
    a: &GroupElement,
    b: &GroupElement,
    n_max: u64,
) -> Result<Option<u64>> {
    for (name, x) in [("a", a), ("b", b)] {
        if !group.is_positive(x)? {
            return Err(Error::NotPositive(format!("{name} = {}", group.format_element(x))));
        }
    }
    let ab = group.mul(a, b)?;
    let ba = group.mul(b, a)?;
    let mut pow = group.identity();
    for n in 1..=n_max {
        pow = group.mul(&pow, &ba)?;
        if group.compare(&ab, &pow)? == Ordering::Less {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConeReport {
    pub elements_checked: usize,
    pub pairs_checked: usize,
    /// `g ≠ e` with neither `g` nor `g⁻¹` in `P`.
    pub totality_violations: Vec<String>,
    /// `g` and `g⁻¹` both in `P`, or `e ∈ P`.
    pub antisymmetry_violations: Vec<String>,
    /// `g, h ∈ P` with `gh ∉ P`.
    pub closure_violations: Vec<String>,
}

impl ConeReport {
    pub fn passed(&self) -> bool {
        self.totality_violations.is_empty()
            && self.antisymmetry_violations.is_empty()
            && self.closure_violations.is_empty()
    }
}

/// Checks `P ∪ P⁻¹ = G`, `P ∩ P⁻¹ = ∅` (strict cone) on `elements` and `PP ⊆ P` on all
/// ordered pairs of positive members of `pair_elements`.
pub fn check_cone_axioms(
    group: &Group,
    elements: &[GroupElement],
    pair_elements: &[GroupElement],
) -> Result<ConeReport> {
    let mut rep = ConeReport::default();
    for g in elements {
        let p = group.is_positive(g)?;
        let q = group.is_positive(&group.inv(g))?;
        rep.elements_checked += 1;
        if group.is_identity(g) {
            if p {
                rep.antisymmetry_violations.push("e".into());
            }
        } else if p && q {
            rep.antisymmetry_violations.push(group.format_element(g));
        } else if !p && !q {
            rep.totality_violations.push(group.format_element(g));
        }
    }
    let positives: Vec<&GroupElement> = pair_elements
        .iter()
        .filter_map(|g| match group.is_positive(g) {
            Ok(true) => Some(Ok(g)),
            Ok(false) => None,
            Err(e) => Some(Err(e)),
        })
        .collect::<Result<_>>()?;
    for g in &positives {
        for h in &positives {
            rep.pairs_checked += 1;
            let gh = group.mul(g, h)?;
            if !group.is_positive(&gh)? {
                rep.closure_violations
                    .push(format!("{} * {}", group.format_element(g), group.format_element(h)));
            }
        }
    }
    Ok(rep)
}
