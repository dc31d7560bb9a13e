//! Left and right representations `x_h⁻¹ x = Σ_g d_g x_g` read off series towers, the
//! transversal-change formula, and the case rules for sums and products.

use crate::error::{Error, Result};
use crate::expr::{eval_certified, RationalExpr};
use crate::group::{convex_jumps, ConvexJump, GroupElement};
use crate::scalar::{self, Scalar};
use crate::tower::{exp, Exp, LevelSeries, Tower, TowerElem};

#[derive(Clone, Debug)]
pub struct LeftRepr {
    /// Coordinates of `h`; those below the jump axis vanish.
    pub h: Vec<Exp>,
    /// Tower level of the jump (`1..=rank`).
    pub level: usize,
    pub jump: ConvexJump,
    /// `(j, d_j)`: transversal element `t_j` on the jump axis and its coefficient one level
    /// down.
    pub terms: Vec<(Exp, TowerElem)>,
    pub frontier: Option<Exp>,
}

impl LeftRepr {
    pub fn h_element(&self, tower: &Tower) -> Result<GroupElement> {
        tower.element_of(&self.h)
    }

    pub fn transversal_elements(&self, tower: &Tower) -> Result<Vec<GroupElement>> {
        self.terms.iter().map(|(j, _)| tower.element_of(&tower.axis(self.level, *j))).collect()
    }

    /// `Σ d_j x_{t_j}` as a top-level element.
    pub fn assemble(&self, tower: &Tower) -> TowerElem {
        let mut e = TowerElem::Series(LevelSeries { terms: self.terms.clone(), frontier: self.frontier });
        for _ in self.level..tower.rank() {
            e = tower.lift(e);
        }
        e
    }
}

fn nonzero_count(tower: &Tower, ls: &LevelSeries) -> (usize, usize) {
    let certified = ls.terms.iter().filter(|(_, d)| !tower.is_zero_certified(d)).count();
    (certified, ls.terms.len() - certified)
}

fn series_of(e: &TowerElem) -> Result<&LevelSeries> {
    e.series().ok_or(Error::SingleTermOnly)
}

fn vec_add(a: &[Exp], b: &[Exp]) -> Vec<Exp> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn vec_neg(a: &[Exp]) -> Vec<Exp> {
    a.iter().map(|x| -x).collect()
}

/// Descends through levels with a single term; stops at the first level with at least two
/// certified-nonzero terms.
pub fn left_repr_of(tower: &Tower, x: &TowerElem) -> Result<LeftRepr> {
    let jumps = convex_jumps(&tower.cp.group)?;
    let mut level = tower.rank();
    let mut cur = x.clone();
    let mut h = vec![exp(0); tower.rank()];
    let mut kappa = scalar::one();
    loop {
        if level == 0 {
            return Err(Error::SingleTermOnly);
        }
        let ls = series_of(&cur)?.clone();
        let (nonzero, uncertain) = nonzero_count(tower, &ls);
        if nonzero >= 2 {
            let terms = ls.terms.iter().map(|(j, d)| (*j, tower.scale(d, &kappa))).collect();
            return Ok(LeftRepr { h, level, jump: jumps[level - 1].clone(), terms, frontier: ls.frontier });
        }
        if nonzero == 0 || uncertain > 0 {
            return Err(Error::zero_up_to(tower.format_frontier(level, ls.frontier))
                .with_context("no certified leading coefficient"));
        }
        let (j, d) = &ls.terms[0];
        let t = tower.axis(level, *j);
        kappa *= tower.eta_v(&h, &t);
        h = vec_add(&h, &t);
        cur = tower.conj(level - 1, &vec_neg(&t), d);
        level -= 1;
    }
}

/// Evaluates `expr` on the box `requested` and reads its left representation.
pub fn left_repr(expr: &RationalExpr, tower: &Tower, requested: &[Exp]) -> Result<(TowerElem, LeftRepr)> {
    let v = eval_certified(expr, tower, requested)?;
    let r = left_repr_of(tower, &v)?;
    Ok((v, r))
}

/// `x = x_h · x′` with `x′` reduced.
pub fn reduce(tower: &Tower, x: &TowerElem) -> Result<(GroupElement, TowerElem)> {
    let r = left_repr_of(tower, x)?;
    Ok((r.h_element(tower)?, r.assemble(tower)))
}

/// `x x_h⁻¹ = Σ_g x_g d_g`; returned as `(h, level, [(j, d_j)])`.
pub fn right_repr_of(tower: &Tower, x: &TowerElem) -> Result<(Vec<Exp>, usize, Vec<(Exp, TowerElem)>)> {
    let mut level = tower.rank();
    let mut cur = x.clone();
    let mut h = vec![exp(0); tower.rank()];
    let mut kappa = scalar::one();
    loop {
        if level == 0 {
            return Err(Error::SingleTermOnly);
        }
        let ls = series_of(&cur)?.clone();
        let (nonzero, uncertain) = nonzero_count(tower, &ls);
        if nonzero >= 2 {
            let terms = ls
                .terms
                .iter()
                .map(|(j, d)| {
                    let t = tower.axis(level, *j);
                    (*j, tower.scale(&tower.conj(level - 1, &vec_neg(&t), d), &kappa))
                })
                .collect();
            return Ok((h, level, terms));
        }
        if nonzero == 0 || uncertain > 0 {
            return Err(Error::zero_up_to(tower.format_frontier(level, ls.frontier)));
        }
        let (j, d) = &ls.terms[0];
        let t = tower.axis(level, *j);
        kappa *= tower.eta_v(&t, &h);
        h = vec_add(&t, &h);
        cur = d.clone();
        level -= 1;
    }
}

/// The inverse monomial `x_g⁻¹ = η(g, g⁻¹)⁻¹ x_{g⁻¹}` as a top-level element.
pub fn monomial_inverse(tower: &Tower, g: &[Exp]) -> TowerElem {
    let gi = vec_neg(g);
    tower.monomial(tower.rank(), &gi, tower.eta_v(g, &gi).recip())
}

/// Coefficients of `x_{h̄}⁻¹ x` for `h̄ = h c⁻¹` predicted from a left representation:
/// `d̄_{g′} = η(h̄,c)⁻¹ (x_c d_g x_c⁻¹) u_g` where `x_c x_g = u_g x_{g′}`.
pub fn transversal_change(tower: &Tower, r: &LeftRepr, c: &[Exp]) -> Result<Vec<(Exp, TowerElem)>> {
    if c.iter().skip(r.level).any(|x| *x != exp(0)) {
        return Err(Error::Precondition("shift must lie in the jump subgroup".into()));
    }
    let k = r.level;
    let hbar = vec_add(&r.h, &vec_neg(c));
    let factor = tower.eta_v(&hbar, c).recip();
    let mut n = c.to_vec();
    n[k - 1] = exp(0);
    let mut out = Vec::new();
    for (j, d) in &r.terms {
        let tg = tower.axis(k, *j);
        let jp = *j + c[k - 1];
        let tgp = tower.axis(k, jp);
        let u_coef = tower.eta_v(c, &tg) / tower.eta_v(&n, &tgp);
        let u = tower.monomial(k - 1, &n, u_coef);
        let conj = tower.conj(k - 1, c, d);
        let coeff = tower.scale(&tower.mul(k - 1, &conj, &u), &factor);
        out.push((jp, coeff));
    }
    Ok(out)
}

/// Directly computed coefficients of `x_{h̄}⁻¹ x` at the jump level.
pub fn direct_coefficients(tower: &Tower, x: &TowerElem, hbar: &[Exp], level: usize) -> Result<Vec<(Exp, TowerElem)>> {
    let n = tower.rank();
    let y = tower.mul(n, &monomial_inverse(tower, hbar), x);
    let mut cur = y;
    for lv in ((level + 1)..=n).rev() {
        let ls = series_of(&cur)?;
        match ls.terms.as_slice() {
            [(j, d)] if *j == exp(0) => cur = d.clone(),
            _ => {
                return Err(Error::Precondition(format!("x_hbar^-1 x is not inside the jump at level {lv}")))
            }
        }
    }
    Ok(series_of(&cur)?.terms.clone())
}

/// Whether two coefficient lists at jump level `level` agree exponent by exponent on
/// certified terms; the coefficients themselves live one level down.
pub fn coefficients_agree(tower: &Tower, level: usize, a: &[(Exp, TowerElem)], b: &[(Exp, TowerElem)]) -> bool {
    let sa = TowerElem::Series(LevelSeries { terms: a.to_vec(), frontier: None });
    let sb = TowerElem::Series(LevelSeries { terms: b.to_vec(), frontier: None });
    tower.agree(level, &sa, &sb)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SumCase {
    A1,
    A21,
    A22,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ProductCase {
    M1,
    M2,
    M3,
}

/// Representation of a sum or product predicted by a case rule. `proper` is false when the
/// rule yields fewer than two nonzero summands.
#[derive(Clone, Debug)]
pub struct Prediction<C> {
    pub case: C,
    pub level: usize,
    pub h: Vec<Exp>,
    pub terms: Vec<(Exp, TowerElem)>,
    pub proper: bool,
}

/// Classifies `x + y` and predicts its left representation.
pub fn classify_sum(tower: &Tower, x: &TowerElem, y: &TowerElem) -> Result<Prediction<SumCase>> {
    let mut level = tower.rank();
    let (mut cx, mut cy) = (x.clone(), y.clone());
    let (mut kx, mut ky): (Scalar, Scalar) = (scalar::one(), scalar::one());
    let mut h = vec![exp(0); tower.rank()];
    loop {
        if level == 0 {
            return Err(Error::SingleTermOnly);
        }
        let (sx, sy) = (series_of(&cx)?.clone(), series_of(&cy)?.clone());
        let (nx, ux) = nonzero_count(tower, &sx);
        let (ny, uy) = nonzero_count(tower, &sy);
        if nx == 0 || ny == 0 || ux > 0 || uy > 0 {
            return Err(Error::zero_up_to(format!("level {level}")).with_context("summand not certified"));
        }
        if nx == 1 && ny == 1 {
            let ((jx, dx), (jy, dy)) = (&sx.terms[0], &sy.terms[0]);
            if jx == jy {
                let t = tower.axis(level, *jx);
                let e = tower.eta_v(&h, &t);
                kx *= &e;
                ky *= &e;
                h = vec_add(&h, &t);
                cx = tower.conj(level - 1, &vec_neg(&t), dx);
                cy = tower.conj(level - 1, &vec_neg(&t), dy);
                level -= 1;
                continue;
            }
            let mut terms = vec![(*jx, tower.scale(dx, &kx)), (*jy, tower.scale(dy, &ky))];
            terms.sort_by(|a, b| a.0.cmp(&b.0));
            return Ok(Prediction { case: SumCase::A1, level, h, terms, proper: true });
        }
        let a = tower.scale(&cx, &kx);
        let b = tower.scale(&cy, &ky);
        let s = tower.add(level, &a, &b);
        let ls = series_of(&s)?;
        let (n, _) = nonzero_count(tower, ls);
        let case = if n >= 2 { SumCase::A21 } else { SumCase::A22 };
        return Ok(Prediction { case, level, h, terms: ls.terms.clone(), proper: n >= 2 });
    }
}

/// Projects a reduced element onto `level` by following exponent-0 single terms.
fn project(tower: &Tower, x: &TowerElem, level: usize) -> Result<TowerElem> {
    let mut cur = x.clone();
    for lv in ((level + 1)..=tower.rank()).rev() {
        let ls = series_of(&cur)?;
        match ls.terms.as_slice() {
            [(j, d)] if *j == exp(0) => cur = d.clone(),
            _ => return Err(Error::Precondition(format!("element is not inside level {lv}"))),
        }
    }
    Ok(cur)
}

/// Classifies `xy` for reduced `x`, `y` and predicts its left representation.
pub fn classify_product(tower: &Tower, x: &TowerElem, y: &TowerElem) -> Result<Prediction<ProductCase>> {
    let rx = left_repr_of(tower, x)?;
    let ry = left_repr_of(tower, y)?;
    let zero = vec![exp(0); tower.rank()];
    if rx.h != zero || ry.h != zero {
        return Err(Error::Precondition("product case rules need reduced factors".into()));
    }
    let (case, level, terms) = if rx.level < ry.level {
        let k = ry.level;
        let xl = project(tower, x, k - 1)?;
        let terms = ry.terms.iter().map(|(j, d)| (*j, tower.mul(k - 1, &xl, d))).collect();
        (ProductCase::M1, k, terms)
    } else if rx.level > ry.level {
        let k = rx.level;
        let yl = project(tower, y, k - 1)?;
        let terms = rx
            .terms
            .iter()
            .map(|(j, d)| (*j, tower.mul(k - 1, d, &tower.conj(k - 1, &tower.axis(k, *j), &yl))))
            .collect();
        (ProductCase::M2, k, terms)
    } else {
        let k = rx.level;
        let a = TowerElem::Series(LevelSeries { terms: rx.terms.clone(), frontier: rx.frontier });
        let b = TowerElem::Series(LevelSeries { terms: ry.terms.clone(), frontier: ry.frontier });
        let p = tower.mul(k, &a, &b);
        (ProductCase::M3, k, series_of(&p)?.terms.clone())
    };
    let terms: Vec<(Exp, TowerElem)> = terms.into_iter().filter(|(_, d)| !d.is_exact_zero()).collect();
    let n = terms.iter().filter(|(_, d)| !tower.is_zero_certified(d)).count();
    Ok(Prediction { case, level, h: zero, terms, proper: n >= 2 })
}
