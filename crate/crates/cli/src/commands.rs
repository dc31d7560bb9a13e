use std::path::Path;

use skewfrac::config::Config;
use skewfrac::crossed::{CpElement, CrossedProduct};
use skewfrac::demo::{b3_demo, DemoOptions};
use skewfrac::endo::{EndoRep, EndoSpace};
use skewfrac::expr::{eval_certified, parse_expr, RationalExpr};
use skewfrac::group::{conradian_witness, Subgroup};
use skewfrac::hahn::{Frontier, Series};
use skewfrac::magnus::MagnusSeries;
use skewfrac::repr::left_repr;
use skewfrac::scalar::{self, Scalar};
use skewfrac::skew_poly::{MagnusSkew, RationalSkew, SkewContext, SkewPoly, SkewPolyRing};
use skewfrac::tower::{parse_exp, Exp, Tower, TowerElem};
use skewfrac::{Error, GroupElement, Result};

use crate::report::Report;

pub struct Loaded {
    pub cp: CrossedProduct,
    pub config: Config,
}

pub fn load(path: &Path) -> Result<Loaded> {
    let config = Config::load(path)?;
    let cp = config.crossed_product()?;
    Ok(Loaded { cp, config })
}

fn frontiers(l: &Loaded, flag: &[String]) -> Result<Vec<Exp>> {
    if !flag.is_empty() {
        return flag.iter().map(|s| parse_exp(s)).collect();
    }
    match l.config.frontier()? {
        Some(f) => Ok(f),
        None => Err(Error::Config("no --frontier given and none in the group config".into())),
    }
}

fn tower(l: &Loaded, requested: &[Exp]) -> Result<Tower> {
    Tower::new(l.cp.clone(), requested.to_vec())
}

fn format_exps(v: &[Exp]) -> String {
    let parts: Vec<String> = v.iter().map(|e| e.to_string()).collect();
    parts.join(",")
}

fn split_list(s: &str) -> Vec<&str> {
    s.split(';').map(str::trim).filter(|x| !x.is_empty()).collect()
}

pub fn verify_cocycle(l: &Loaded, group_path: &str, radius: usize) -> Result<Report> {
    let mut r = Report::new("verify-cocycle");
    r.input("group", group_path);
    r.input("sample radius", radius.to_string());
    let samples = l.cp.group.ball(radius);
    let rep = l.cp.validate_cocycle(&samples);
    r.line(format!("{} samples, {} triples", rep.samples, rep.triples));
    for line in rep.to_string().lines() {
        r.line(line);
    }
    r.frontier = "not applicable (finite identities)".into();
    r.check("normalization", rep.normalization.is_empty());
    r.check("action", rep.action.is_empty());
    r.check("cocycle", rep.cocycle.is_empty());
    Ok(r)
}

pub fn order_compare(l: &Loaded, group_path: &str, a: &str, b: &str) -> Result<Report> {
    let g = &l.cp.group;
    let (x, y) = (g.parse_element(a)?, g.parse_element(b)?);
    let mut r = Report::new("order-compare");
    r.input("group", group_path);
    r.input("a", g.format_element(&x));
    r.input("b", g.format_element(&y));
    let sym = match g.compare(&x, &y)? {
        std::cmp::Ordering::Less => "<",
        std::cmp::Ordering::Equal => "=",
        std::cmp::Ordering::Greater => ">",
    };
    r.line(format!("{} {sym} {}", g.format_element(&x), g.format_element(&y)));
    r.frontier = "not applicable (exact comparison)".into();
    Ok(r)
}

pub fn conrad_test(l: &Loaded, group_path: &str, a: &str, b: &str, nmax: u64) -> Result<Report> {
    let g = &l.cp.group;
    let (x, y) = (g.parse_element(a)?, g.parse_element(b)?);
    let mut r = Report::new("conrad-test");
    r.input("group", group_path);
    r.input("a", g.format_element(&x));
    r.input("b", g.format_element(&y));
    r.input("nmax", nmax.to_string());
    match conradian_witness(g, &x, &y, nmax)? {
        Some(n) => r.line(format!("witness n = {n}: a b < (b a)^{n}")),
        None => r.line(format!("no witness <= {nmax}")),
    }
    r.frontier = format!("bounded search up to n = {nmax}");
    Ok(r)
}

pub fn eval_cmd(l: &Loaded, group_path: &str, name: &str, expr: &str, flag: &[String], invert: bool) -> Result<Report> {
    let mut e = parse_expr(&l.cp, expr)?;
    if invert {
        e = RationalExpr::inv(e);
    }
    let req = frontiers(l, flag)?;
    let t = tower(l, &req)?;
    let v = eval_certified(&e, &t, &req)?;
    let mut r = Report::new(name);
    r.input("group", group_path);
    r.input("expr", e.display(&l.cp).to_string());
    r.input("frontier", format_exps(&req));
    r.line(t.format(&v));
    r.frontier = format!("every exponent box coordinate below ({})", format_exps(&req));
    Ok(r)
}

fn format_coeff(t: &Tower, level: usize, d: &TowerElem) -> String {
    let mut e = d.clone();
    for _ in level..t.rank() {
        e = t.lift(e);
    }
    let s = t.format(&e);
    match s.find(" (frontier") {
        Some(i) => s[..i].to_string(),
        None => s,
    }
}

pub fn left_repr_cmd(l: &Loaded, group_path: &str, expr: &str, flag: &[String]) -> Result<Report> {
    let e = parse_expr(&l.cp, expr)?;
    let req = frontiers(l, flag)?;
    let t = tower(l, &req)?;
    let (_, rep) = left_repr(&e, &t, &req)?;
    let mut r = Report::new("left-repr");
    r.input("group", group_path);
    r.input("expr", e.display(&l.cp).to_string());
    r.input("frontier", format_exps(&req));
    r.line(format!("jump: ({}, {})", rep.jump.lower, rep.jump.upper));
    r.line(format!("h: {}", l.cp.group.format_element(&rep.h_element(&t)?)));
    for ((_, d), te) in rep.terms.iter().zip(rep.transversal_elements(&t)?) {
        r.line(format!("  [{}] <- {}", l.cp.group.format_element(&te), format_coeff(&t, rep.level - 1, d)));
    }
    r.frontier = format!(
        "transversal index below {}; coefficients below ({})",
        rep.frontier.map_or("inf".to_string(), |f| f.to_string()),
        format_exps(&req)
    );
    r.check("at least two certified nonzero coefficients", rep.terms.len() >= 2);
    Ok(r)
}

enum Ring {
    Rational(RationalSkew),
    Magnus(MagnusSkew),
}

fn parse_rational_poly(s: &str) -> Result<Vec<Scalar>> {
    split_list(s).into_iter().map(scalar::parse).collect()
}

fn parse_magnus_poly(ctx: &MagnusSkew, s: &str) -> Result<Vec<MagnusSeries>> {
    let f2 = CrossedProduct::group_ring(skewfrac::Group::free_group(2, ctx.degree));
    split_list(s)
        .into_iter()
        .map(|c| {
            let x: CpElement = f2.parse(c)?;
            let mut acc = ctx.zero();
            for (g, a) in x.terms() {
                let GroupElement::Word(w) = g else { return Err(Error::GroupMismatch) };
                let term = ctx.word(w);
                acc = acc.add(&term.scale(a));
            }
            Ok(acc)
        })
        .collect()
}

fn ore_report<C: SkewContext>(ring: &SkewPolyRing<C>, a: SkewPoly<C::Elem>, b: SkewPoly<C::Elem>, r: &mut Report) -> Result<()> {
    r.input("a", ring.format(&a));
    r.input("b", ring.format(&b));
    let (u, v) = ring.ore_witness(&a, &b)?;
    r.line(format!("u = {}", ring.format(&u)));
    r.line(format!("v = {}", ring.format(&v)));
    let ok = ring.is_zero(&ring.sub(&ring.mul(&u, &a), &ring.mul(&v, &b)));
    r.check("u*a = v*b", ok);
    Ok(())
}

pub fn ore_witness(ring: &str, degree: usize, a: &str, b: &str) -> Result<Report> {
    let mut r = Report::new("ore-witness");
    r.input("ring", ring);
    let ctx = match ring {
        "rational" => Ring::Rational(RationalSkew { doubling: false }),
        "doubling" => Ring::Rational(RationalSkew { doubling: true }),
        "magnus" => Ring::Magnus(MagnusSkew::b3_default(degree)),
        other => return Err(Error::Config(format!("unknown ring `{other}` (rational, doubling, magnus)"))),
    };
    match ctx {
        Ring::Rational(c) => {
            let ring = SkewPolyRing::new(c);
            let (pa, pb) = (ring.poly(parse_rational_poly(a)?), ring.poly(parse_rational_poly(b)?));
            ore_report(&ring, pa, pb, &mut r)?;
            r.frontier = "exact (finite coefficients)".into();
        }
        Ring::Magnus(c) => {
            r.input("magnus degree", degree.to_string());
            let (ca, cb) = (parse_magnus_poly(&c, a)?, parse_magnus_poly(&c, b)?);
            let ring = SkewPolyRing::new(c);
            let (pa, pb) = (ring.poly(ca), ring.poly(cb));
            ore_report(&ring, pa, pb, &mut r)?;
            r.frontier = format!("Magnus coefficients exact in total degree <= {degree}");
        }
    }
    Ok(r)
}

pub struct EndoArgs<'a> {
    pub group_path: &'a str,
    pub target: Option<&'a str>,
    pub window: Option<usize>,
}

fn default_target(l: &Loaded) -> Result<GroupElement> {
    let g = &l.cp.group;
    match g.vector_rank() {
        Some(1) => g.parse_element("(16)"),
        Some(2) => g.parse_element("(6,2)"),
        Some(3) => g.parse_element("(4,1,1)"),
        _ => Err(Error::Config("pass --target for this group".into())),
    }
}

pub fn window(l: &Loaded, radius: Option<usize>) -> Vec<GroupElement> {
    let default = match l.cp.group.vector_rank() {
        Some(1) => 10,
        Some(2) => 2,
        _ => 1,
    };
    l.cp.group.ball(radius.unwrap_or(default))
}

fn endo_space(l: &Loaded, args: &EndoArgs, r: &mut Report) -> Result<(EndoSpace, Vec<GroupElement>)> {
    let target = match args.target {
        Some(t) => l.cp.group.parse_element(t)?,
        None => default_target(l)?,
    };
    let w = window(l, args.window);
    r.input("group", args.group_path);
    r.input("target", l.cp.group.format_element(&target));
    r.input("window size", w.len().to_string());
    Ok((EndoSpace::new(l.cp.clone(), Frontier::Below(target)), w))
}

fn series_frontier(cp: &CrossedProduct, m: &Series) -> String {
    cp.format_frontier(m.frontier())
}

pub fn endo_apply(l: &Loaded, args: &EndoArgs, expr: &str, at: &str) -> Result<Report> {
    let mut r = Report::new("endo-apply");
    let (sp, w) = endo_space(l, args, &mut r)?;
    let e = parse_expr(&l.cp, expr)?;
    let g = l.cp.group.parse_element(at)?;
    r.input("expr", e.display(&l.cp).to_string());
    r.input("at", l.cp.group.format_element(&g));
    let f = sp.from_expr(&e, &w)?;
    let xg = l.cp.monomial_series(g, scalar::one())?;
    let img = sp.apply(&f, &xg)?;
    r.line(l.cp.format_series(&img));
    r.frontier = format!("terms below {}", series_frontier(&l.cp, &img));
    Ok(r)
}

pub fn endo_invert(l: &Loaded, args: &EndoArgs, expr: &str) -> Result<Report> {
    let mut r = Report::new("endo-invert");
    let (sp, w) = endo_space(l, args, &mut r)?;
    let e = parse_expr(&l.cp, expr)?;
    r.input("expr", e.display(&l.cp).to_string());
    let f = sp.from_expr(&e, &w)?;
    let inv = sp.invert_endo(&f, &w)?;
    let col = sp.series_of(&inv)?;
    r.line(format!("inverse applied to x_e: {}", l.cp.format_series(&col)));
    let one = l.cp.monomial_series(l.cp.group.identity(), scalar::one())?;
    let right = sp.apply(&f, &col)?;
    let left = sp.apply(&inv, &sp.series_of(&f)?)?;
    r.check("f(f^-1(x_e)) = x_e on certified terms", l.cp.agree_on_common(&right, &one)?);
    r.check("f^-1(f(x_e)) = x_e on certified terms", l.cp.agree_on_common(&left, &one)?);
    r.frontier = format!("terms below {}", series_frontier(&l.cp, &col));
    Ok(r)
}

pub fn vcompat_check(l: &Loaded, args: &EndoArgs, expr: &str) -> Result<Report> {
    let mut r = Report::new("vcompat-check");
    let (sp, w) = endo_space(l, args, &mut r)?;
    let e = parse_expr(&l.cp, expr)?;
    r.input("expr", e.display(&l.cp).to_string());
    let f = sp.from_expr(&e, &w)?;
    let rep = sp.check_v_compatible(&f, &w)?;
    r.line(rep.to_string());
    r.check("v-compatible on the window", rep.passed());
    match sp.check_surjective_on_g(&f, &w) {
        Ok(pre) => {
            r.line(format!("{} preimages found in the window", pre.len()));
            r.check("surjective on G over the window interior", true);
        }
        Err(Error::NotFoundInWindow(m)) => {
            r.line(format!("surjectivity: {m}"));
            r.check("surjective on G over the window interior", false);
        }
        Err(e) => return Err(e),
    }
    r.frontier = "window samples; valuations certified below the target".into();
    Ok(r)
}

fn endo_list(l: &Loaded, sp: &EndoSpace, w: &[GroupElement], exprs: &str) -> Result<Vec<EndoRep>> {
    split_list(exprs)
        .into_iter()
        .map(|s| sp.from_expr(&parse_expr(&l.cp, s)?, w))
        .collect()
}

pub fn hughes_check(l: &Loaded, args: &EndoArgs, n: usize, hs: &str, exprs: &str) -> Result<Report> {
    let mut r = Report::new("hughes-check");
    let (sp, w) = endo_space(l, args, &mut r)?;
    let sub = Subgroup::LexPrefix(n);
    r.input("N", sub.to_string());
    r.input("h", hs);
    r.input("d", exprs);
    let h = split_list(hs).into_iter().map(|s| l.cp.group.parse_element(s)).collect::<Result<Vec<_>>>()?;
    let ds = endo_list(l, &sp, &w, exprs)?;
    let ok = sp.hughes_independence(&sub, &h, &ds)?;
    r.line(format!("independent: {ok}"));
    r.check("sum d_i(x_h_i) = 0 only for the trivial combination", ok);
    r.frontier = "certified supports below the target".into();
    Ok(r)
}

pub fn transcendence_check(l: &Loaded, args: &EndoArgs, n: usize, h: &str, degree: usize, exprs: &str) -> Result<Report> {
    let mut r = Report::new("transcendence-check");
    let (sp, w) = endo_space(l, args, &mut r)?;
    let sub = Subgroup::LexPrefix(n);
    let t = l.cp.group.parse_element(h)?;
    r.input("N", sub.to_string());
    r.input("t", l.cp.group.format_element(&t));
    r.input("degree", degree.to_string());
    r.input("d", exprs);
    let ds = endo_list(l, &sp, &w, exprs)?;
    let ok = sp.transcendence_check(&sub, &t, degree, &ds)?;
    r.line(format!("independent up to degree {degree}: {ok}"));
    r.check("no nontrivial relation of bounded degree", ok);
    r.frontier = "certified supports below the target".into();
    Ok(r)
}

pub fn b3_demo_cmd(opts: DemoOptions) -> Result<Report> {
    let mut r = Report::new("b3-demo");
    r.input("ball radius", opts.ball_radius.to_string());
    r.input("pair radius", opts.pair_radius.to_string());
    r.input("conrad bound", opts.conrad_bound.to_string());
    r.input("magnus degree", opts.magnus_degree.to_string());
    let rep = b3_demo(&opts)?;
    for line in rep.to_string().lines() {
        r.line(line);
    }
    for s in &rep.steps {
        r.check(s.name.clone(), s.passed);
    }
    r.frontier = format!("word length <= {}; Magnus degree <= {}", opts.ball_radius, opts.magnus_degree);
    Ok(r)
}
