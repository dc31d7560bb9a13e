//! End-to-end run on the braid group `B₃`: the Dubrovina–Dubrovin order, its failure to be
//! Conradian, and an Ore witness over the Magnus model of `F₂ ⋊ ℤ`.

use std::fmt;

use crate::error::Result;
use crate::group::{check_cone_axioms, conradian_witness, Group, GroupElement, DD_U, DD_W};
use crate::skew_poly::{MagnusSkew, SkewContext, SkewPolyRing};

#[derive(Clone, Debug)]
pub struct DemoStep {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct DemoReport {
    pub steps: Vec<DemoStep>,
}

impl DemoReport {
    pub fn passed(&self) -> bool {
        self.steps.iter().all(|s| s.passed)
    }
}

impl fmt::Display for DemoReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.steps.iter().enumerate() {
            let mark = if s.passed { "ok" } else { "FAILED" };
            writeln!(f, "step {}: {} [{mark}]", i + 1, s.name)?;
            writeln!(f, "  {}", s.detail)?;
        }
        Ok(())
    }
}

pub struct DemoOptions {
    pub ball_radius: usize,
    pub pair_radius: usize,
    pub conrad_bound: u64,
    pub magnus_degree: usize,
}

impl Default for DemoOptions {
    fn default() -> Self {
        DemoOptions { ball_radius: 10, pair_radius: 5, conrad_bound: 64, magnus_degree: 8 }
    }
}

pub fn b3_demo(opts: &DemoOptions) -> Result<DemoReport> {
    let g = Group::braid_b3();
    let u = GroupElement::Word(DD_U.to_vec());
    let w = GroupElement::Word(DD_W.to_vec());
    let mut steps = Vec::new();

    let lhs = g.mul(&g.mul(&w, &g.pow(&u, 2)?)?, &w)?;
    steps.push(DemoStep {
        name: "relation w u^2 w = u".into(),
        passed: g.compare(&lhs, &u)? == std::cmp::Ordering::Equal,
        detail: format!("u = {}, w = {}, w u^2 w = {}", g.format_element(&u), g.format_element(&w), g.format_element(&lhs)),
    });

    let ball = g.ball(opts.ball_radius);
    let pairs = g.ball(opts.pair_radius);
    let cone = check_cone_axioms(&g, &ball, &pairs)?;
    steps.push(DemoStep {
        name: format!("cone axioms on the ball of radius {}", opts.ball_radius),
        passed: cone.passed(),
        detail: format!("{cone:?}"),
    });

    let witness = conradian_witness(&g, &u, &w, opts.conrad_bound)?;
    steps.push(DemoStep {
        name: format!("no Conradian witness up to n = {}", opts.conrad_bound),
        passed: witness.is_none(),
        detail: match witness {
            None => format!("u^n w > u fails for every n ≤ {}", opts.conrad_bound),
            Some(n) => format!("witness n = {n}"),
        },
    });

    let ctx = MagnusSkew::b3_default(opts.magnus_degree);
    let m = ctx.word(&[1]);
    let ring = SkewPolyRing::new(ctx);
    let a = ring.monomial(ring.ctx.one(), 1);
    let b = ring.add(&a, &ring.poly(vec![m]));
    let (p, q) = ring.ore_witness(&a, &b)?;
    let ok = ring.is_zero(&ring.sub(&ring.mul(&p, &a), &ring.mul(&q, &b)));
    steps.push(DemoStep {
        name: format!("Ore witness for a = t, b = t + a over Magnus degree {}", opts.magnus_degree),
        passed: ok,
        detail: format!("u = {}\n  v = {}", ring.format(&p), ring.format(&q)),
    });

    Ok(DemoReport { steps })
}
