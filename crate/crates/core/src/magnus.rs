//! Truncated free associative power series over ℚ and the Magnus map of a free group.
//!
//! Generator `i` maps to `1 + X_i` and its inverse to the alternating geometric series
//! `1 - X_i + X_i^2 - ...`. Everything of total degree above the bound is discarded, so
//! every coefficient that is stored is exact.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num::{Signed, Zero};

use crate::error::{Error, Result};
use crate::scalar::{self, Scalar};

/// Noncommutative monomial `X_{w[0]} X_{w[1]} ...`, variables numbered from 0.
/// Ordered by degree first, then lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(pub Vec<u8>);

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MagnusSeries {
    pub vars: usize,
    pub degree: usize,
    pub terms: BTreeMap<Monomial, Scalar>,
}

impl MagnusSeries {
    pub fn zero(vars: usize, degree: usize) -> Self {
        MagnusSeries { vars, degree, terms: BTreeMap::new() }
    }

    pub fn constant(vars: usize, degree: usize, c: Scalar) -> Self {
        let mut s = Self::zero(vars, degree);
        if !c.is_zero() {
            s.terms.insert(Monomial(Vec::new()), c);
        }
        s
    }

    pub fn one(vars: usize, degree: usize) -> Self {
        Self::constant(vars, degree, scalar::one())
    }

    /// The series `X_var`.
    pub fn variable(vars: usize, degree: usize, var: u8) -> Self {
        let mut s = Self::zero(vars, degree);
        if degree >= 1 {
            s.terms.insert(Monomial(vec![var]), scalar::one());
        }
        s
    }

    /// Magnus image of a free group word (letters `±(i+1)` for generator `i`).
    pub fn from_word(vars: usize, degree: usize, word: &[i32]) -> Self {
        let mut acc = Self::one(vars, degree);
        for &letter in word {
            acc = acc.mul_letter(letter);
        }
        acc
    }

    /// Right multiplication by the image of a single letter.
    fn mul_letter(&self, letter: i32) -> Self {
        let var = (letter.unsigned_abs() - 1) as u8;
        let mut out = self.clone();
        let mut power = self.clone();
        for k in 1..=self.degree {
            let mut next = BTreeMap::new();
            for (m, c) in &power.terms {
                if m.0.len() < self.degree {
                    let mut w = m.0.clone();
                    w.push(var);
                    next.insert(Monomial(w), c.clone());
                }
            }
            power.terms = next;
            if power.terms.is_empty() {
                break;
            }
            let sign = if letter < 0 && k % 2 == 1 { -scalar::one() } else { scalar::one() };
            for (m, c) in &power.terms {
                add_into(&mut out.terms, m.clone(), c * &sign);
            }
            if letter > 0 {
                break;
            }
        }
        out
    }

    pub fn constant_term(&self) -> Scalar {
        self.terms.get(&Monomial(Vec::new())).cloned().unwrap_or_else(scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (m, c) in &other.terms {
            add_into(&mut out.terms, m.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c = -c.clone();
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        if s.is_zero() {
            return Self::zero(self.vars, self.degree);
        }
        let mut out = self.clone();
        for c in out.terms.values_mut() {
            *c *= s;
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = BTreeMap::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                if m1.0.len() + m2.0.len() > self.degree {
                    continue;
                }
                let mut w = m1.0.clone();
                w.extend_from_slice(&m2.0);
                add_into(&mut out, Monomial(w), c1 * c2);
            }
        }
        MagnusSeries { vars: self.vars, degree: self.degree, terms: out }
    }

    /// Inverse of a series with nonzero constant term via `c^{-1} Σ (-ε)^k`.
    pub fn inv(&self) -> Result<Self> {
        let c = self.constant_term();
        if c.is_zero() {
            return Err(Error::MagnusNotReducible);
        }
        let cinv = c.recip();
        let eps = self.scale(&cinv).sub(&Self::one(self.vars, self.degree));
        let mut acc = Self::one(self.vars, self.degree);
        // Horner: 1 - ε(1 - ε(1 - ...)); ε has no constant term so degree+1 rounds suffice.
        for _ in 0..self.degree {
            acc = Self::one(self.vars, self.degree).sub(&eps.mul(&acc));
        }
        Ok(acc.scale(&cinv))
    }

    /// Ring endomorphism sending `X_i` to `images[i]`; images must have zero constant term.
    pub fn substitute(&self, images: &[MagnusSeries]) -> Self {
        let mut out = Self::zero(self.vars, self.degree);
        for (m, c) in &self.terms {
            let mut prod = Self::constant(self.vars, self.degree, c.clone());
            for &v in &m.0 {
                prod = prod.mul(&images[v as usize]);
            }
            out = out.add(&prod);
        }
        out
    }

    /// Sign of the leading (graded-lex least) nonzero coefficient of `self - 1`.
    pub fn leading_sign_minus_one(&self) -> Option<Ordering> {
        let shifted = self.sub(&Self::one(self.vars, self.degree));
        shifted.terms.iter().next().map(|(_, c)| {
            if c.is_positive() {
                Ordering::Greater
            } else {
                Ordering::Less
            }
        })
    }
}

fn add_into(map: &mut BTreeMap<Monomial, Scalar>, m: Monomial, c: Scalar) {
    let entry = map.entry(m.clone()).or_insert_with(scalar::zero);
    *entry += c;
    if entry.is_zero() {
        map.remove(&m);
    }
}

impl fmt::Display for MagnusSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0 (deg<={})", self.degree);
        }
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(m, c)| {
                if m.0.is_empty() {
                    scalar::format(c)
                } else {
                    let w: Vec<String> = m.0.iter().map(|v| format!("X{}", v + 1)).collect();
                    format!("{}*{}", scalar::format(c), w.join(""))
                }
            })
            .collect();
        write!(f, "{} (deg<={})", parts.join(" + "), self.degree)
    }
}
