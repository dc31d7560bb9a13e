//! Skew polynomials `Σ c_i t^i` with `t·c = φ(c)·t`, right division and Ore witnesses.

use std::fmt::Debug;

use crate::error::{Error, Result};
use crate::magnus::MagnusSeries;
use crate::scalar::{self, Scalar};
use crate::tower::{Tower, TowerElem};

/// Coefficient ring with a twisting endomorphism `φ`.
pub trait SkewContext {
    type Elem: Clone + Debug;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    /// Zero on everything the representation certifies.
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn inv(&self, a: &Self::Elem) -> Result<Self::Elem>;
    /// `φ^k(a)`.
    fn phi(&self, a: &Self::Elem, k: i64) -> Self::Elem;
    fn format(&self, a: &Self::Elem) -> String;
}

/// Coefficients in `ℚ`; `doubling` uses the toy map `c ↦ 2c`.
#[derive(Clone, Copy, Debug)]
pub struct RationalSkew {
    pub doubling: bool,
}

impl SkewContext for RationalSkew {
    type Elem = Scalar;
    fn zero(&self) -> Scalar {
        scalar::zero()
    }
    fn one(&self) -> Scalar {
        scalar::one()
    }
    fn add(&self, a: &Scalar, b: &Scalar) -> Scalar {
        a + b
    }
    fn neg(&self, a: &Scalar) -> Scalar {
        -a
    }
    fn mul(&self, a: &Scalar, b: &Scalar) -> Scalar {
        a * b
    }
    fn is_zero(&self, a: &Scalar) -> bool {
        num::Zero::is_zero(a)
    }
    fn inv(&self, a: &Scalar) -> Result<Scalar> {
        if self.is_zero(a) {
            Err(Error::zero_up_to("exact zero"))
        } else {
            Ok(a.recip())
        }
    }
    fn phi(&self, a: &Scalar, k: i64) -> Scalar {
        if self.doubling {
            a * scalar::pow(&scalar::int(2), k)
        } else {
            a.clone()
        }
    }
    fn format(&self, a: &Scalar) -> String {
        scalar::format(a)
    }
}

/// Coefficients one level below the top of a tower; `t` is the top axis generator and `φ`
/// is conjugation by it.
#[derive(Clone, Debug)]
pub struct TowerSkew {
    pub tower: Tower,
}

impl TowerSkew {
    pub fn new(tower: Tower) -> Result<Self> {
        if tower.rank() < 2 {
            return Err(Error::UnsupportedFamily("tower skew polynomials need rank at least 2".into()));
        }
        Ok(TowerSkew { tower })
    }

    fn level(&self) -> usize {
        self.tower.rank() - 1
    }
}

impl SkewContext for TowerSkew {
    type Elem = TowerElem;
    fn zero(&self) -> TowerElem {
        self.tower.zero(self.level())
    }
    fn one(&self) -> TowerElem {
        self.tower.one(self.level())
    }
    fn add(&self, a: &TowerElem, b: &TowerElem) -> TowerElem {
        self.tower.add(self.level(), a, b)
    }
    fn neg(&self, a: &TowerElem) -> TowerElem {
        self.tower.neg(a)
    }
    fn mul(&self, a: &TowerElem, b: &TowerElem) -> TowerElem {
        self.tower.mul(self.level(), a, b)
    }
    fn is_zero(&self, a: &TowerElem) -> bool {
        self.tower.is_zero_certified(a)
    }
    fn inv(&self, a: &TowerElem) -> Result<TowerElem> {
        self.tower.invert(self.level(), a)
    }
    fn phi(&self, a: &TowerElem, k: i64) -> TowerElem {
        let g = self.tower.axis(self.tower.rank(), crate::tower::exp(k));
        self.tower.conj(self.level(), &g, a)
    }
    fn format(&self, a: &TowerElem) -> String {
        let mut e = a.clone();
        e = self.tower.lift(e);
        let s = self.tower.format(&e);
        s.split(" (frontier").next().unwrap_or_default().to_string()
    }
}

/// Truncated Magnus model of the free-group series ring with `φ` given by substitution.
#[derive(Clone, Debug)]
pub struct MagnusSkew {
    pub vars: usize,
    pub degree: usize,
    forward: Vec<MagnusSeries>,
    backward: Vec<MagnusSeries>,
}

impl MagnusSkew {
    /// `images[i]` and `inverse_images[i]` are the words of `φ(gᵢ)` and `φ⁻¹(gᵢ)`.
    pub fn new(vars: usize, degree: usize, images: &[Vec<i32>], inverse_images: &[Vec<i32>]) -> Self {
        let one = MagnusSeries::one(vars, degree);
        let subst = |ws: &[Vec<i32>]| -> Vec<MagnusSeries> {
            ws.iter().map(|w| MagnusSeries::from_word(vars, degree, w).sub(&one)).collect()
        };
        MagnusSkew { vars, degree, forward: subst(images), backward: subst(inverse_images) }
    }

    /// The automorphism of `F₂` from the decomposition of `B₃`: `a ↦ b`, `b ↦ a⁻¹b`.
    pub fn b3_default(degree: usize) -> Self {
        MagnusSkew::new(2, degree, &[vec![2], vec![-1, 2]], &[vec![1, -2], vec![1]])
    }

    pub fn word(&self, w: &[i32]) -> MagnusSeries {
        MagnusSeries::from_word(self.vars, self.degree, w)
    }
}

impl SkewContext for MagnusSkew {
    type Elem = MagnusSeries;
    fn zero(&self) -> MagnusSeries {
        MagnusSeries::zero(self.vars, self.degree)
    }
    fn one(&self) -> MagnusSeries {
        MagnusSeries::one(self.vars, self.degree)
    }
    fn add(&self, a: &MagnusSeries, b: &MagnusSeries) -> MagnusSeries {
        a.add(b)
    }
    fn neg(&self, a: &MagnusSeries) -> MagnusSeries {
        a.neg()
    }
    fn mul(&self, a: &MagnusSeries, b: &MagnusSeries) -> MagnusSeries {
        a.mul(b)
    }
    fn is_zero(&self, a: &MagnusSeries) -> bool {
        a.is_zero()
    }
    fn inv(&self, a: &MagnusSeries) -> Result<MagnusSeries> {
        a.inv()
    }
    fn phi(&self, a: &MagnusSeries, k: i64) -> MagnusSeries {
        let imgs = if k >= 0 { &self.forward } else { &self.backward };
        let mut cur = a.clone();
        for _ in 0..k.unsigned_abs() {
            cur = cur.substitute(imgs);
        }
        cur
    }
    fn format(&self, a: &MagnusSeries) -> String {
        a.to_string()
    }
}

/// `Σ c_i t^i`, coefficients on the left; no trailing zero coefficients.
#[derive(Clone, Debug)]
pub struct SkewPoly<E> {
    pub coeffs: Vec<E>,
}

pub struct SkewPolyRing<C: SkewContext> {
    pub ctx: C,
}

impl<C: SkewContext> SkewPolyRing<C> {
    pub fn new(ctx: C) -> Self {
        SkewPolyRing { ctx }
    }

    pub fn poly(&self, coeffs: Vec<C::Elem>) -> SkewPoly<C::Elem> {
        self.normalize(SkewPoly { coeffs })
    }

    pub fn zero(&self) -> SkewPoly<C::Elem> {
        SkewPoly { coeffs: Vec::new() }
    }

    pub fn one(&self) -> SkewPoly<C::Elem> {
        self.poly(vec![self.ctx.one()])
    }

    /// `c t^k`.
    pub fn monomial(&self, c: C::Elem, k: usize) -> SkewPoly<C::Elem> {
        let mut coeffs = vec![self.ctx.zero(); k];
        coeffs.push(c);
        self.poly(coeffs)
    }

    fn normalize(&self, mut p: SkewPoly<C::Elem>) -> SkewPoly<C::Elem> {
        while p.coeffs.last().is_some_and(|c| self.ctx.is_zero(c)) {
            p.coeffs.pop();
        }
        p
    }

    /// Degree; `None` for the zero polynomial.
    pub fn deg(&self, p: &SkewPoly<C::Elem>) -> Option<usize> {
        p.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self, p: &SkewPoly<C::Elem>) -> bool {
        p.coeffs.iter().all(|c| self.ctx.is_zero(c))
    }

    pub fn add(&self, a: &SkewPoly<C::Elem>, b: &SkewPoly<C::Elem>) -> SkewPoly<C::Elem> {
        let n = a.coeffs.len().max(b.coeffs.len());
        let z = self.ctx.zero();
        let coeffs = (0..n)
            .map(|i| self.ctx.add(a.coeffs.get(i).unwrap_or(&z), b.coeffs.get(i).unwrap_or(&z)))
            .collect();
        self.poly(coeffs)
    }

    pub fn neg(&self, a: &SkewPoly<C::Elem>) -> SkewPoly<C::Elem> {
        SkewPoly { coeffs: a.coeffs.iter().map(|c| self.ctx.neg(c)).collect() }
    }

    pub fn sub(&self, a: &SkewPoly<C::Elem>, b: &SkewPoly<C::Elem>) -> SkewPoly<C::Elem> {
        self.add(a, &self.neg(b))
    }

    /// `(a t^i)(b t^j) = a φ^i(b) t^{i+j}`.
    pub fn mul(&self, a: &SkewPoly<C::Elem>, b: &SkewPoly<C::Elem>) -> SkewPoly<C::Elem> {
        if a.coeffs.is_empty() || b.coeffs.is_empty() {
            return self.zero();
        }
        let mut out = vec![self.ctx.zero(); a.coeffs.len() + b.coeffs.len() - 1];
        for (i, ai) in a.coeffs.iter().enumerate() {
            if self.ctx.is_zero(ai) {
                continue;
            }
            for (j, bj) in b.coeffs.iter().enumerate() {
                let p = self.ctx.mul(ai, &self.ctx.phi(bj, i as i64));
                out[i + j] = self.ctx.add(&out[i + j], &p);
            }
        }
        self.poly(out)
    }

    /// `a = q·b + r` with `deg r < deg b`.
    pub fn divmod(
        &self,
        a: &SkewPoly<C::Elem>,
        b: &SkewPoly<C::Elem>,
    ) -> Result<(SkewPoly<C::Elem>, SkewPoly<C::Elem>)> {
        let m = self.deg(b).ok_or_else(|| Error::Precondition("division by the zero polynomial".into()))?;
        let lead_b = &b.coeffs[m];
        let mut r = self.normalize(a.clone());
        let mut q = self.zero();
        while let Some(n) = self.deg(&r) {
            if n < m {
                break;
            }
            let k = n - m;
            let c = self.ctx.mul(&r.coeffs[n], &self.ctx.inv(&self.ctx.phi(lead_b, k as i64))?);
            let term = self.monomial(c, k);
            q = self.add(&q, &term);
            let mut next = self.sub(&r, &self.mul(&term, b));
            // the leading coefficient cancels by construction
            if next.coeffs.len() == n + 1 {
                next.coeffs.pop();
                next = self.normalize(next);
            }
            r = next;
        }
        Ok((q, r))
    }

    /// `(u, v)` with `u·a = v·b`, `u ≠ 0`, from the extended Euclidean algorithm.
    pub fn ore_witness(
        &self,
        a: &SkewPoly<C::Elem>,
        b: &SkewPoly<C::Elem>,
    ) -> Result<(SkewPoly<C::Elem>, SkewPoly<C::Elem>)> {
        if self.is_zero(a) || self.is_zero(b) {
            return Err(Error::Precondition("Ore witnesses need nonzero polynomials".into()));
        }
        let (mut r0, mut r1) = (a.clone(), b.clone());
        let (mut s0, mut s1) = (self.one(), self.zero());
        let (mut w0, mut w1) = (self.zero(), self.one());
        loop {
            let (q, r2) = self.divmod(&r0, &r1)?;
            let s2 = self.sub(&s0, &self.mul(&q, &s1));
            let w2 = self.sub(&w0, &self.mul(&q, &w1));
            if self.is_zero(&r2) {
                let u = s2;
                let v = self.neg(&w2);
                if !self.is_zero(&self.sub(&self.mul(&u, a), &self.mul(&v, b))) {
                    return Err(Error::CertificationFailed("u·a ≠ v·b on certified terms".into()));
                }
                return Ok((u, v));
            }
            r0 = std::mem::replace(&mut r1, r2);
            s0 = std::mem::replace(&mut s1, s2);
            w0 = std::mem::replace(&mut w1, w2);
        }
    }

    pub fn format(&self, p: &SkewPoly<C::Elem>) -> String {
        if p.coeffs.is_empty() {
            return "0".into();
        }
        let parts: Vec<String> = p
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !self.ctx.is_zero(c))
            .map(|(i, c)| match i {
                0 => format!("({})", self.ctx.format(c)),
                1 => format!("({})*t", self.ctx.format(c)),
                _ => format!("({})*t^{i}", self.ctx.format(c)),
            })
            .collect();
        parts.join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Scalar {
        scalar::int(n)
    }

    #[test]
    fn t_squared_by_t() {
        let r = SkewPolyRing::new(RationalSkew { doubling: false });
        let a = r.poly(vec![q(0), q(0), q(1)]);
        let b = r.poly(vec![q(0), q(1)]);
        let (quo, rem) = r.divmod(&a, &b).unwrap();
        assert_eq!(quo.coeffs, vec![q(0), q(1)]);
        assert!(rem.coeffs.is_empty());
    }

    #[test]
    fn doubling_twist() {
        let r = SkewPolyRing::new(RationalSkew { doubling: true });
        let c0 = scalar::ratio(3, 5);
        let t = r.monomial(q(1), 1);
        let tc = r.mul(&t, &r.poly(vec![c0.clone()]));
        assert_eq!(tc.coeffs, vec![q(0), &c0 * q(2)]);
        let (quo, rem) = r.divmod(&tc, &t).unwrap();
        assert_eq!(quo.coeffs, vec![&c0 * q(2)]);
        assert!(rem.coeffs.is_empty());
    }

    #[test]
    fn classical_lcm() {
        let r = SkewPolyRing::new(RationalSkew { doubling: false });
        let a = r.poly(vec![q(0), q(1)]);
        let b = r.poly(vec![q(1), q(1)]);
        let (u, v) = r.ore_witness(&a, &b).unwrap();
        let ua = r.mul(&u, &a);
        assert_eq!(ua.coeffs, r.mul(&v, &b).coeffs);
        assert_eq!(ua.coeffs, vec![q(0), q(1), q(1)]);
        let (u, v) = r.ore_witness(&a, &a).unwrap();
        assert_eq!((u.coeffs, v.coeffs), (vec![q(1)], vec![q(1)]));
    }

    #[test]
    fn magnus_witness() {
        let ctx = MagnusSkew::b3_default(4);
        let m = ctx.word(&[1]);
        let r = SkewPolyRing::new(ctx);
        let a = r.monomial(r.ctx.one(), 1);
        let b = r.add(&a, &r.poly(vec![m]));
        let (u, v) = r.ore_witness(&a, &b).unwrap();
        assert!(r.is_zero(&r.sub(&r.mul(&u, &a), &r.mul(&v, &b))));
    }
}
