//! B₃ words, canonical storage via `B₃ ≅ F₂ ⋊ ℤ`, handle reduction and the
//! Dubrovina–Dubrovin cone.

use std::sync::OnceLock;

use super::{free_reduce, ActionSpec, Family, Group, GroupElement, GroupSpec, OrderKind};
use crate::error::{Error, Result};

/// `u = σ₁σ₂`.
pub const DD_U: [i32; 2] = [1, 2];
/// `w = σ₂⁻¹`.
pub const DD_W: [i32; 1] = [-2];

/// `F₂ ⋊ ℤ` with `x = σ₁`, `a = σ₂σ₁⁻¹`, `b = σ₁σ₂σ₁⁻²`; conjugation by `x` sends
/// `a ↦ b`, `b ↦ a⁻¹b`.
pub fn b3_structure() -> &'static Group {
    static CELL: OnceLock<Group> = OnceLock::new();
    CELL.get_or_init(|| {
        let spec = GroupSpec {
            family: Family::Semidirect {
                normal: Box::new(GroupSpec::free_group(2, super::DEFAULT_MAGNUS_DEGREE)),
                quotient: Box::new(GroupSpec::free_abelian(1)),
                action: vec![ActionSpec {
                    images: vec!["b".into(), "A.b".into()],
                    inverse_images: vec!["a.B".into(), "a".into()],
                }],
            },
            order: OrderKind::SemidirectLex,
        };
        Group::new(spec).expect("static B3 structure")
    })
}

/// Image of a σ-word in `F₂ ⋊ ℤ`.
pub fn b3_to_semidirect(w: &[i32]) -> GroupElement {
    let g = b3_structure();
    let s1 = GroupElement::pair(GroupElement::Word(vec![]), GroupElement::Int(vec![1]));
    let s2 = GroupElement::pair(GroupElement::Word(vec![1]), GroupElement::Int(vec![1]));
    let s1i = g.inv(&s1);
    let s2i = g.inv(&s2);
    let mut acc = g.identity();
    for &l in w {
        let gen = match l {
            1 => &s1,
            -1 => &s1i,
            2 => &s2,
            -2 => &s2i,
            _ => panic!("braid letter out of range: {l}"),
        };
        acc = g.mul(&acc, gen).expect("semidirect element");
    }
    acc
}

/// Inverse of [`b3_to_semidirect`]: a freely reduced σ-word.
pub fn b3_from_semidirect(p: &GroupElement) -> Vec<i32> {
    let (n, q) = match p {
        GroupElement::Pair(n, q) => (n.as_word().unwrap_or(&[]), q.as_int().map_or(0, |v| v[0])),
        _ => panic!("expected a semidirect pair"),
    };
    let a: [i32; 2] = [2, -1];
    let b: [i32; 4] = [1, 2, -1, -1];
    let mut out = Vec::new();
    for &l in n {
        let img: Vec<i32> = if l.abs() == 1 { a.to_vec() } else { b.to_vec() };
        if l > 0 {
            out.extend(img);
        } else {
            out.extend(super::invert_word(&img));
        }
    }
    let x = if q >= 0 { 1 } else { -1 };
    out.extend(std::iter::repeat(x).take(q.unsigned_abs() as usize));
    free_reduce(&out)
}

pub(crate) fn canonical_b3(w: &[i32]) -> Vec<i32> {
    b3_from_semidirect(&b3_to_semidirect(w))
}

/// Repeatedly replaces the leftmost σ₁-handle `σ₁^e σ₂^{d₁}…σ₂^{d_k} σ₁^{-e}` by
/// `∏ σ₂^{-e} σ₁^{d_i} σ₂^{e}` until none remains.
pub fn handle_reduce(w: &[i32]) -> Vec<i32> {
    let mut cur = free_reduce(w);
    loop {
        let mut prev: Option<usize> = None;
        let mut handle = None;
        for (i, &l) in cur.iter().enumerate() {
            if l.abs() == 1 {
                if let Some(p) = prev {
                    if cur[p] == -l {
                        handle = Some((p, i));
                        break;
                    }
                }
                prev = Some(i);
            }
        }
        let Some((start, end)) = handle else { return cur };
        let e = cur[start];
        let mut next = cur[..start].to_vec();
        for &l in &cur[start + 1..end] {
            let d = l.signum();
            next.extend([-2 * e, d, 2 * e]);
        }
        next.extend_from_slice(&cur[end + 1..]);
        cur = free_reduce(&next);
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sigma1Class {
    Positive,
    Negative,
    /// σ₁-free; carries the σ₂ exponent sum.
    Free(i64),
}

/// Shape of a handle-free word.
pub fn sigma1_class(w: &[i32]) -> Sigma1Class {
    let r = handle_reduce(w);
    if r.contains(&1) {
        Sigma1Class::Positive
    } else if r.contains(&-1) {
        Sigma1Class::Negative
    } else {
        Sigma1Class::Free(r.iter().map(|&l| l.signum() as i64).sum())
    }
}

/// Membership in the semigroup generated by `u = σ₁σ₂` and `w = σ₂⁻¹`.
pub fn dd_positive(w: &[i32]) -> bool {
    match sigma1_class(w) {
        Sigma1Class::Positive => true,
        Sigma1Class::Negative => false,
        Sigma1Class::Free(k) => k < 0,
    }
}

pub(crate) fn parse_braid(s: &str) -> Result<Vec<i32>> {
    if s.is_empty() || s == "e" || s == "1" {
        return Ok(Vec::new());
    }
    s.split('.')
        .map(|t| match t.trim() {
            "s1" => Ok(1),
            "S1" => Ok(-1),
            "s2" => Ok(2),
            "S2" => Ok(-2),
            other => Err(Error::Parse(format!("invalid braid letter `{other}` (use s1, S1, s2, S2)"))),
        })
        .collect()
}

pub(crate) fn format_braid(w: &[i32]) -> String {
    if w.is_empty() {
        return "e".into();
    }
    w.iter()
        .map(|l| match l {
            1 => "s1",
            -1 => "S1",
            2 => "s2",
            _ => "S2",
        })
        .collect::<Vec<_>>()
        .join(".")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn handle_examples() {
        assert!(handle_reduce(&[1, -1]).is_empty());
        assert_eq!(handle_reduce(&[1, 2, 1]), vec![1, 2, 1]);
        assert_eq!(handle_reduce(&[1, 2, -1]), vec![-2, 1, 2]);
    }

    #[test]
    fn cone_generators() {
        assert!(dd_positive(&DD_U));
        assert!(dd_positive(&DD_W));
        assert!(!dd_positive(&[]));
        assert!(!dd_positive(&[2]));
    }

    #[test]
    fn semidirect_roundtrip_on_generators() {
        for w in [vec![1], vec![2], vec![-1], vec![-2], vec![1, 2, 1]] {
            let back = b3_from_semidirect(&b3_to_semidirect(&w));
            assert_eq!(b3_to_semidirect(&back), b3_to_semidirect(&w));
        }
        assert_eq!(b3_from_semidirect(&b3_to_semidirect(&[2])), vec![2]);
    }
}
