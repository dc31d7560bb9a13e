//! Right-linear endomorphisms of the Hahn series module, realised lazily by their columns
//! `f(x_g)`.
//!
//! An [`EndoRep`] is an expression tree over left multiplications by finite elements, with
//! sums, compositions and certified inverses. Columns are memoised per node. Every column is
//! a truncated [`Series`] whose frontier is a lower bound on the unknown remainder, so
//! applying a map to a series is continuous: the frontier of `f(m)` comes from a lower bound
//! on `v(f(t))` over all tails `t` of `m`.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use num::{Signed, ToPrimitive, Zero};

use crate::crossed::{CpElement, CrossedProduct};
use crate::error::{Error, Result};
use crate::expr::RationalExpr;
use crate::group::{GroupElement, Subgroup};
use crate::hahn::{Frontier, Series, Valuation};
use crate::scalar::{self, Scalar};

/// Precision and search limits shared by every node evaluated in it.
#[derive(Clone, Debug)]
pub struct EndoSpace {
    pub cp: CrossedProduct,
    /// Columns are never computed past this point.
    pub target: Frontier,
    /// Maximum number of correction steps per inverse column.
    pub step_budget: usize,
    /// Radius of the ball searched around a predicted preimage.
    pub search_radius: usize,
}

#[derive(Clone)]
pub struct EndoRep(Arc<Node>);

struct Node {
    kind: Kind,
    memo: Mutex<HashMap<(GroupElement, Frontier), Series>>,
}

enum Kind {
    Monomial(Scalar, GroupElement),
    FiniteSum(CpElement),
    Compose(EndoRep, EndoRep),
    Sum(EndoRep, EndoRep),
    Inverse(EndoRep),
}

impl fmt::Debug for EndoRep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0.kind {
            Kind::Monomial(a, h) => write!(f, "Monomial({a}, {h:?})"),
            Kind::FiniteSum(x) => write!(f, "FiniteSum({} terms)", x.len()),
            Kind::Compose(a, b) => write!(f, "Compose({a:?}, {b:?})"),
            Kind::Sum(a, b) => write!(f, "Sum({a:?}, {b:?})"),
            Kind::Inverse(a) => write!(f, "Inverse({a:?})"),
        }
    }
}

impl EndoRep {
    fn node(kind: Kind) -> Self {
        EndoRep(Arc::new(Node { kind, memo: Mutex::new(HashMap::new()) }))
    }

    pub fn monomial(a: Scalar, h: GroupElement) -> Self {
        Self::node(Kind::Monomial(a, h))
    }

    /// Left multiplication `ι_x`.
    pub fn embed(x: CpElement) -> Self {
        Self::node(Kind::FiniteSum(x))
    }

    pub fn compose(f: &EndoRep, g: &EndoRep) -> Self {
        Self::node(Kind::Compose(f.clone(), g.clone()))
    }

    pub fn sum(f: &EndoRep, g: &EndoRep) -> Self {
        Self::node(Kind::Sum(f.clone(), g.clone()))
    }

    pub fn neg(f: &EndoRep, cp: &CrossedProduct) -> Self {
        Self::compose(&Self::monomial(-scalar::one(), cp.group.identity()), f)
    }

    pub fn is_inverse(&self) -> bool {
        matches!(self.0.kind, Kind::Inverse(_))
    }

    /// Every finite element occurring as a constant of the tree.
    pub fn constants(&self) -> Vec<CpElement> {
        let mut out = Vec::new();
        self.collect_constants(&mut out);
        out
    }

    fn collect_constants(&self, out: &mut Vec<CpElement>) {
        match &self.0.kind {
            Kind::Monomial(a, h) => out.push(CpElement::monomial(h.clone(), a.clone())),
            Kind::FiniteSum(x) => out.push(x.clone()),
            Kind::Compose(a, b) | Kind::Sum(a, b) => {
                a.collect_constants(out);
                b.collect_constants(out);
            }
            Kind::Inverse(a) => a.collect_constants(out),
        }
    }
}

fn valuation_le(cp: &CrossedProduct, a: &Valuation, b: &Valuation) -> Result<Option<bool>> {
    Ok(match (a, b) {
        (_, Valuation::Infinity) => Some(true),
        (Valuation::Infinity, _) => Some(false),
        (Valuation::Element(x), Valuation::Element(y)) => Some(cp.group.compare(x, y)? != Ordering::Greater),
        (Valuation::Element(x), Valuation::AtLeast(y)) => {
            if cp.group.compare(x, y)? == Ordering::Less {
                Some(true)
            } else {
                None
            }
        }
        (Valuation::AtLeast(x), Valuation::Element(y)) => {
            if cp.group.compare(y, x)? == Ordering::Less {
                Some(false)
            } else {
                None
            }
        }
        (Valuation::AtLeast(_), Valuation::AtLeast(_)) => None,
    })
}

/// Size of `g` used to rank search candidates.
fn element_size(g: &GroupElement) -> u64 {
    match g {
        GroupElement::Int(v) => v.iter().map(|x| x.unsigned_abs()).sum(),
        GroupElement::Rat(v) => v.iter().map(|x| x.abs().ceil().to_integer().to_u64().unwrap_or(u64::MAX)).sum(),
        GroupElement::Word(w) => w.len() as u64,
        GroupElement::Pair(a, b) => element_size(a) + element_size(b),
    }
}

impl EndoSpace {
    pub fn new(cp: CrossedProduct, target: Frontier) -> Self {
        EndoSpace { cp, target, step_budget: 64, search_radius: 2 }
    }

    fn lt(&self, a: &GroupElement, b: &GroupElement) -> Result<bool> {
        Ok(self.cp.group.compare(a, b)? == Ordering::Less)
    }

    /// The column `f(x_g)`, truncated at the target.
    pub fn column(&self, f: &EndoRep, g: &GroupElement) -> Result<Series> {
        self.cp.group.check(g)?;
        let key = (g.clone(), self.target.clone());
        if let Some(s) = f.0.memo.lock().expect("memo poisoned").get(&key) {
            return Ok(s.clone());
        }
        let xg = self.cp.monomial_series(g.clone(), scalar::one())?;
        let col = match &f.0.kind {
            Kind::Monomial(a, h) => self.cp.monomial_act(a, h, &xg)?,
            Kind::FiniteSum(x) => self.cp.finite_act(x, &xg)?,
            Kind::Sum(a, b) => self.cp.series_add(&self.column(a, g)?, &self.column(b, g)?)?,
            Kind::Compose(a, b) => self.apply(a, &self.column(b, g)?)?,
            Kind::Inverse(a) => self.solve(a, g)?,
        };
        let col = self.cp.truncate(&col, &self.target)?;
        f.0.memo.lock().expect("memo poisoned").insert(key, col.clone());
        Ok(col)
    }

    /// `f(m) = Σ f(x_g) m_g`, certified below the minimum of the column frontiers and the
    /// image bound of the tail of `m`.
    pub fn apply(&self, f: &EndoRep, m: &Series) -> Result<Series> {
        let mut parts = Vec::with_capacity(m.terms().len());
        let mut frontier = self.frontier_bound(f, m.frontier())?;
        frontier = self.cp.frontier_min(&frontier, &self.target)?;
        for (g, c) in m.terms() {
            let col = self.column(f, g)?;
            frontier = self.cp.frontier_min(&frontier, col.frontier())?;
            parts.push(self.cp.scalar_right(&col, c));
        }
        let sum = self.cp.sum_family(&parts)?;
        self.cp.truncate(&sum, &frontier)
    }

    /// A lower bound on `v(f(t))` over every `t` with `v(t) ≥ F`.
    pub fn frontier_bound(&self, f: &EndoRep, fr: &Frontier) -> Result<Frontier> {
        let Frontier::Below(b) = fr else {
            return Ok(Frontier::Infinite);
        };
        let g = &self.cp.group;
        Ok(match &f.0.kind {
            Kind::Monomial(a, _) if a.is_zero() => Frontier::Infinite,
            Kind::Monomial(_, h) => Frontier::Below(g.mul(h, b)?),
            Kind::FiniteSum(x) => {
                let mut out = Frontier::Infinite;
                for h in x.support() {
                    out = self.cp.frontier_min(&out, &Frontier::Below(g.mul(h, b)?))?;
                }
                out
            }
            Kind::Sum(p, q) => {
                let a = self.frontier_bound(p, fr)?;
                self.cp.frontier_min(&a, &self.frontier_bound(q, fr)?)?
            }
            Kind::Compose(p, q) => {
                let inner = self.frontier_bound(q, fr)?;
                self.frontier_bound(p, &inner)?
            }
            Kind::Inverse(p) => Frontier::Below(self.sigma_inverse_lower(p, b)?),
        })
    }

    /// `σ_f(g) = v(f(x_g))`, which must be certified.
    pub fn sigma(&self, f: &EndoRep, g: &GroupElement) -> Result<Valuation> {
        let v = self.cp.v(&self.column(f, g)?);
        if let Valuation::AtLeast(b) = &v {
            return Err(Error::CertificationFailed(format!(
                "v(f(x_{})) is undecided below {}",
                self.cp.group.format_element(g),
                self.cp.group.format_element(b)
            )));
        }
        Ok(v)
    }

    fn sigma_element(&self, f: &EndoRep, g: &GroupElement) -> Result<GroupElement> {
        match self.sigma(f, g)? {
            Valuation::Element(u) => Ok(u),
            _ => Err(Error::CertificationFailed(format!(
                "f(x_{}) vanishes, so f is not injective",
                self.cp.group.format_element(g)
            ))),
        }
    }

    /// Where `σ_f` would send the preimage of `u` if `σ_f` were a translation.
    fn predicted_preimage(&self, f: &EndoRep, u: &GroupElement) -> Result<GroupElement> {
        let e = self.cp.group.identity();
        let s = self.sigma_element(f, &e)?;
        self.cp.group.left_quotient(&s, u)
    }

    fn candidates(&self, center: &GroupElement) -> Result<Vec<GroupElement>> {
        let mut out = self
            .cp
            .group
            .ball(self.search_radius)
            .into_iter()
            .map(|b| self.cp.group.mul(center, &b))
            .collect::<Result<Vec<_>>>()?;
        out.sort_by_key(|c| element_size(&self.cp.group.left_quotient(center, c).unwrap_or_else(|_| c.clone())));
        Ok(out)
    }

    /// The exact preimage of `u` under `σ_f`, searched near the predicted location.
    fn find_preimage(&self, f: &EndoRep, u: &GroupElement) -> Result<GroupElement> {
        let p = self.predicted_preimage(f, u)?;
        for c in self.candidates(&p)? {
            if self.sigma(f, &c)? == Valuation::Element(u.clone()) {
                return Ok(c);
            }
        }
        Err(Error::CertificationFailed(format!(
            "no preimage of {} under the valuation map near {}",
            self.cp.group.format_element(u),
            self.cp.group.format_element(&p)
        )))
    }

    /// The largest searched `g″` with `σ_f(g″) ≤ b`; by monotonicity `g″ ≤ σ_f⁻¹(b)`.
    fn sigma_inverse_lower(&self, f: &EndoRep, b: &GroupElement) -> Result<GroupElement> {
        let p = self.predicted_preimage(f, b)?;
        let mut best: Option<GroupElement> = None;
        for c in self.candidates(&p)? {
            let s = match self.cp.v(&self.column(f, &c)?) {
                Valuation::Element(s) => s,
                Valuation::AtLeast(_) => continue,
                Valuation::Infinity => return Err(Error::CertificationFailed("map is not injective".into())),
            };
            if !self.lt(b, &s)? && best.as_ref().map_or(Ok(true), |x| self.lt(x, &c))? {
                best = Some(c);
            }
        }
        best.ok_or_else(|| {
            Error::CertificationFailed(format!(
                "no element below the preimage of {}",
                self.cp.group.format_element(b)
            ))
        })
    }

    /// Solves `f(y) = x_g` by successive approximation, removing the leading residual term
    /// at each step. Stops at the target or after the step budget; either way the frontier
    /// of `y` is the preimage bound of the first unresolved residual position.
    fn solve(&self, f: &EndoRep, g: &GroupElement) -> Result<Series> {
        let cp = &self.cp;
        let mut r = cp.truncate(&cp.monomial_series(g.clone(), scalar::one())?, &self.target)?;
        let mut y: Vec<(GroupElement, Scalar)> = Vec::new();
        let mut steps = 0;
        while let Some((u, ru)) = r.terms().first().cloned() {
            if steps == self.step_budget {
                break;
            }
            steps += 1;
            let pre = self.find_preimage(f, &u)?;
            let col = self.column(f, &pre)?;
            let lead = col.coefficient(&u);
            if lead.is_zero() {
                return Err(Error::CertificationFailed("leading coefficient vanished".into()));
            }
            let c = ru / lead;
            r = cp.series_sub(&r, &cp.scalar_right(&col, &c))?;
            r = cp.truncate(&r, &self.target)?;
            if let Some((w, _)) = r.terms().first() {
                if !self.lt(&u, w)? {
                    return Err(Error::CertificationFailed(format!(
                        "residual did not increase past {}",
                        cp.group.format_element(&u)
                    )));
                }
            }
            y.push((pre, c));
        }
        let mut bound = r.frontier().clone();
        if let Some((u, _)) = r.terms().first() {
            bound = cp.frontier_min(&bound, &Frontier::Below(u.clone()))?;
        }
        let frontier = match &bound {
            Frontier::Infinite => Frontier::Infinite,
            Frontier::Below(b) => Frontier::Below(self.sigma_inverse_lower(f, b)?),
        };
        cp.series_from_terms(y, frontier)
    }

    /// Checks `v(m) ≤ v(m′) ⟺ v(f m) ≤ v(f m′)` on monomials and two-term perturbations
    /// built from the window.
    pub fn check_v_compatible(&self, f: &EndoRep, window: &[GroupElement]) -> Result<VCompatReport> {
        let cp = &self.cp;
        let mut samples = Vec::new();
        for g in window {
            samples.push(cp.monomial_series(g.clone(), scalar::one())?);
        }
        let n = window.len();
        for (i, g) in window.iter().enumerate() {
            let h = &window[(i * 7 + 3) % n.max(1)];
            if self.lt(g, h)? {
                let c = scalar::ratio(-(i as i64) - 2, 3);
                samples.push(cp.series_from_terms([(g.clone(), scalar::one()), (h.clone(), c)], Frontier::Infinite)?);
            }
        }
        let mut vals = Vec::with_capacity(samples.len());
        for m in &samples {
            vals.push((cp.v(m), cp.v(&self.apply(f, m)?)));
        }
        let mut report = VCompatReport { pairs: 0, violations: Vec::new(), undecided: Vec::new() };
        for (i, (vm, vfm)) in vals.iter().enumerate() {
            for (j, (vn, vfn)) in vals.iter().enumerate() {
                report.pairs += 1;
                let lhs = valuation_le(cp, vm, vn)?;
                let rhs = valuation_le(cp, vfm, vfn)?;
                match (lhs, rhs) {
                    (Some(a), Some(b)) if a == b => {}
                    (Some(_), Some(_)) => report.violations.push(format!(
                        "v(m{i})={vm}, v(m{j})={vn} but v(f m{i})={vfm}, v(f m{j})={vfn}"
                    )),
                    _ => report.undecided.push(format!("pair ({i}, {j})")),
                }
            }
        }
        Ok(report)
    }

    /// For every window element whose predicted preimage lies in the window, finds
    /// `g′` in the window with `v(f(x_{g′})) = g`.
    pub fn check_surjective_on_g(&self, f: &EndoRep, window: &[GroupElement]) -> Result<Vec<(GroupElement, GroupElement)>> {
        let mut out = Vec::new();
        for g in window {
            if !self.cp.below(g, &self.target)? {
                continue;
            }
            let p = self.predicted_preimage(f, g)?;
            if !window.contains(&p) {
                continue;
            }
            let mut ranked: Vec<&GroupElement> = window.iter().collect();
            ranked.sort_by_key(|c| element_size(&self.cp.group.left_quotient(&p, c).unwrap_or_else(|_| (*c).clone())));
            let mut found = None;
            for c in ranked {
                if self.cp.v(&self.column(f, c)?) == Valuation::Element(g.clone()) {
                    found = Some(c.clone());
                    break;
                }
            }
            match found {
                Some(c) => out.push((g.clone(), c)),
                None => {
                    return Err(Error::NotFoundInWindow(format!(
                        "no preimage of {} in the window",
                        self.cp.group.format_element(g)
                    )))
                }
            }
        }
        if out.is_empty() {
            return Err(Error::NotFoundInWindow(
                "no window element has its predicted preimage inside the window".into(),
            ));
        }
        Ok(out)
    }

    /// Certifies `f` on the window and returns `f⁻¹`.
    pub fn invert_endo(&self, f: &EndoRep, window: &[GroupElement]) -> Result<EndoRep> {
        let report = self.check_v_compatible(f, window)?;
        if !report.passed() {
            return Err(Error::Precondition(format!("map is not v-compatible on the window: {report}")));
        }
        self.check_surjective_on_g(f, window)?;
        Ok(EndoRep::node(Kind::Inverse(f.clone())))
    }

    /// Checks `supp f(m) ⊆ U·supp m` on the certified terms, after checking that every
    /// constant of `f` is supported in `U`.
    pub fn support_containment_check(&self, f: &EndoRep, m: &Series, u: &Subgroup) -> Result<bool> {
        let group = &self.cp.group;
        for x in f.constants() {
            for h in x.support() {
                if !u.contains(group, h) {
                    return Err(Error::Precondition(format!(
                        "constant supported at {} outside {u}",
                        group.format_element(h)
                    )));
                }
            }
        }
        let image = self.apply(f, m)?;
        for (k, _) in image.terms() {
            let mut ok = false;
            for (h, _) in m.terms() {
                if u.contains(group, &group.mul(k, &group.inv(h))?) {
                    ok = true;
                    break;
                }
            }
            if !ok {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Given `d_i` supported in `N` and `h_i` in distinct right cosets `N h_i`, decides whether
    /// `Σ d_i(x_{h_i}) = 0` forces every `d_i = 0`: true when the images lie in their cosets
    /// and have pairwise disjoint certified supports.
    pub fn hughes_independence(&self, n: &Subgroup, hs: &[GroupElement], ds: &[EndoRep]) -> Result<bool> {
        if hs.len() != ds.len() {
            return Err(Error::Mismatch);
        }
        let group = &self.cp.group;
        for (i, a) in hs.iter().enumerate() {
            for b in &hs[i + 1..] {
                if n.contains(group, &group.mul(a, &group.inv(b))?) {
                    return Err(Error::Precondition(format!(
                        "{} and {} lie in the same coset of {n}",
                        group.format_element(a),
                        group.format_element(b)
                    )));
                }
            }
        }
        let mut images = Vec::new();
        for (h, d) in hs.iter().zip(ds) {
            let xh = self.cp.monomial_series(h.clone(), scalar::one())?;
            if !self.support_containment_check(d, &xh, n)? {
                return Ok(false);
            }
            images.push(self.apply(d, &xh)?);
        }
        Ok(disjoint_supports(&images))
    }

    /// Checks that `t = x_h` is independent over the maps in `ds` up to degree `bound`:
    /// every `d(x_{h^k})` is nonzero and images for different `k` have disjoint supports.
    pub fn transcendence_check(&self, n: &Subgroup, h: &GroupElement, bound: usize, ds: &[EndoRep]) -> Result<bool> {
        let group = &self.cp.group;
        if n.contains(group, h) {
            return Err(Error::Precondition(format!("{} lies in {n}", group.format_element(h))));
        }
        let mut per_degree = Vec::new();
        for k in 0..=bound {
            let hk = group.pow(h, k as i64)?;
            let xhk = self.cp.monomial_series(hk, scalar::one())?;
            let mut fam = Vec::new();
            for d in ds {
                let img = self.apply(d, &xhk)?;
                if img.is_zero() {
                    if let Valuation::AtLeast(b) = self.cp.v(&img) {
                        return Err(Error::CertificationFailed(format!(
                            "image in degree {k} is not certified below {}",
                            group.format_element(&b)
                        )));
                    }
                    return Ok(false);
                }
                if !self.support_containment_check(d, &xhk, n)? {
                    return Ok(false);
                }
                fam.extend(img.terms().iter().cloned());
            }
            per_degree.push(self.cp.series_from_terms(fam, Frontier::Infinite)?);
        }
        Ok(disjoint_supports(&per_degree))
    }
}

impl EndoSpace {
    /// Realises an expression as an endomorphism, certifying each inverse on the window.
    pub fn from_expr(&self, expr: &RationalExpr, window: &[GroupElement]) -> Result<EndoRep> {
        Ok(match expr {
            RationalExpr::Const(x) => EndoRep::embed(x.clone()),
            RationalExpr::Add(a, b) => EndoRep::sum(&self.from_expr(a, window)?, &self.from_expr(b, window)?),
            RationalExpr::Neg(a) => EndoRep::neg(&self.from_expr(a, window)?, &self.cp),
            RationalExpr::Mul(a, b) => EndoRep::compose(&self.from_expr(a, window)?, &self.from_expr(b, window)?),
            RationalExpr::Inv(a) => self.invert_endo(&self.from_expr(a, window)?, window)?,
        })
    }

    /// The series `d(x_e)` of the element an endomorphism represents.
    pub fn series_of(&self, f: &EndoRep) -> Result<Series> {
        self.column(f, &self.cp.group.identity())
    }
}

fn disjoint_supports(images: &[Series]) -> bool {
    for (i, a) in images.iter().enumerate() {
        for b in &images[i + 1..] {
            if a.terms().iter().any(|(g, _)| b.terms().iter().any(|(h, _)| g == h)) {
                return false;
            }
        }
    }
    true
}

#[derive(Clone, Debug)]
pub struct VCompatReport {
    pub pairs: usize,
    pub violations: Vec<String>,
    pub undecided: Vec<String>,
}

impl VCompatReport {
    /// No violation, and at least one pair decided. Pairs whose images run past the target
    /// are undecided and carry no evidence either way.
    pub fn passed(&self) -> bool {
        self.violations.is_empty() && self.undecided.len() < self.pairs
    }
}

impl fmt::Display for VCompatReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} pairs, {} violations, {} undecided",
            self.pairs,
            self.violations.len(),
            self.undecided.len()
        )?;
        if let Some(v) = self.violations.first() {
            write!(f, "; first violation: {v}")?;
        }
        Ok(())
    }
}
