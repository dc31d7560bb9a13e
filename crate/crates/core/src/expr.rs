//! Rational expressions over `F[G, η, α]` and their evaluation into series towers.

use std::fmt;

use crate::crossed::{CpElement, CrossedProduct};
use crate::error::{Error, Result};
use crate::scalar;
use crate::tower::{Exp, Tower, TowerElem};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RationalExpr {
    Const(CpElement),
    Add(Box<RationalExpr>, Box<RationalExpr>),
    Neg(Box<RationalExpr>),
    Mul(Box<RationalExpr>, Box<RationalExpr>),
    Inv(Box<RationalExpr>),
}

use RationalExpr::*;

impl RationalExpr {
    pub fn constant(x: CpElement) -> Self {
        Const(x)
    }

    pub fn add(a: RationalExpr, b: RationalExpr) -> Self {
        Add(Box::new(a), Box::new(b))
    }

    pub fn sub(a: RationalExpr, b: RationalExpr) -> Self {
        Add(Box::new(a), Box::new(Neg(Box::new(b))))
    }

    pub fn neg(a: RationalExpr) -> Self {
        Neg(Box::new(a))
    }

    pub fn mul(a: RationalExpr, b: RationalExpr) -> Self {
        Mul(Box::new(a), Box::new(b))
    }

    pub fn inv(a: RationalExpr) -> Self {
        Inv(Box::new(a))
    }

    /// Tree depth; a diagnostic stand-in for the complexity of an element.
    pub fn depth(&self) -> usize {
        match self {
            Const(_) => 1,
            Neg(a) | Inv(a) => 1 + a.depth(),
            Add(a, b) | Mul(a, b) => 1 + a.depth().max(b.depth()),
        }
    }

    /// Maximum number of nested inversions.
    pub fn inv_depth(&self) -> usize {
        match self {
            Const(_) => 0,
            Neg(a) => a.inv_depth(),
            Inv(a) => 1 + a.inv_depth(),
            Add(a, b) | Mul(a, b) => a.inv_depth().max(b.inv_depth()),
        }
    }

    pub fn display<'a>(&'a self, cp: &'a CrossedProduct) -> ExprDisplay<'a> {
        ExprDisplay { expr: self, cp }
    }
}

pub struct ExprDisplay<'a> {
    expr: &'a RationalExpr,
    cp: &'a CrossedProduct,
}

impl<'a> fmt::Display for ExprDisplay<'a> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = |e: &'a RationalExpr| -> ExprDisplay<'a> { ExprDisplay { expr: e, cp: self.cp } };
        match self.expr {
            Const(x) => write!(f, "({})", self.cp.format(x)),
            Add(a, b) => write!(f, "({} + {})", d(a), d(b)),
            Neg(a) => write!(f, "-{}", d(a)),
            Mul(a, b) => write!(f, "{} * {}", d(a), d(b)),
            Inv(a) => write!(f, "inv({})", d(a)),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Mono(String),
    Inv,
    Plus,
    Minus,
    Star,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let chars: Vec<char> = s.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        match c {
            ' ' | '\t' | '\n' => i += 1,
            '+' => {
                out.push(Tok::Plus);
                i += 1
            }
            '-' => {
                out.push(Tok::Minus);
                i += 1
            }
            '*' => {
                out.push(Tok::Star);
                i += 1
            }
            '(' => {
                out.push(Tok::LParen);
                i += 1
            }
            ')' => {
                out.push(Tok::RParen);
                i += 1
            }
            '[' => {
                let mut depth = 0;
                let start = i + 1;
                let mut j = i;
                loop {
                    if j >= chars.len() {
                        return Err(Error::Parse(format!("unterminated `[` in `{s}`")));
                    }
                    match chars[j] {
                        '[' => depth += 1,
                        ']' => {
                            depth -= 1;
                            if depth == 0 {
                                break;
                            }
                        }
                        _ => {}
                    }
                    j += 1;
                }
                out.push(Tok::Mono(chars[start..j].iter().collect()));
                i = j + 1;
            }
            c if c.is_ascii_digit() => {
                let start = i;
                while i < chars.len() && (chars[i].is_ascii_digit() || chars[i] == '/') {
                    i += 1;
                }
                out.push(Tok::Num(chars[start..i].iter().collect()));
            }
            'i' if chars[i..].iter().take(3).collect::<String>() == "inv" => {
                out.push(Tok::Inv);
                i += 3;
            }
            other => {
                return Err(Error::Parse(format!(
                    "unexpected `{other}` in `{s}`; grammar: E := E + E | E - E | E * E | inv(E) | (E) | scalar*[word]"
                )))
            }
        }
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    cp: &'a CrossedProduct,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        match self.next() {
            Some(ref got) if *got == t => Ok(()),
            got => Err(Error::Parse(format!("expected {t:?}, found {got:?}"))),
        }
    }

    fn expr(&mut self) -> Result<RationalExpr> {
        let mut acc = self.term()?;
        while let Some(t) = self.peek() {
            match t {
                Tok::Plus => {
                    self.pos += 1;
                    let r = self.term()?;
                    acc = fold(self.cp, RationalExpr::add(acc, r))?;
                }
                Tok::Minus => {
                    self.pos += 1;
                    let r = fold(self.cp, RationalExpr::neg(self.term()?))?;
                    acc = fold(self.cp, RationalExpr::add(acc, r))?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RationalExpr> {
        let mut acc = self.unary()?;
        while self.peek() == Some(&Tok::Star) {
            self.pos += 1;
            let r = self.unary()?;
            acc = fold(self.cp, RationalExpr::mul(acc, r))?;
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RationalExpr> {
        if self.peek() == Some(&Tok::Minus) {
            self.pos += 1;
            let a = self.unary()?;
            return fold(self.cp, RationalExpr::neg(a));
        }
        self.atom()
    }

    fn atom(&mut self) -> Result<RationalExpr> {
        match self.next() {
            Some(Tok::Num(n)) => {
                Ok(Const(CpElement::monomial(self.cp.group.identity(), scalar::parse(&n)?)))
            }
            Some(Tok::Mono(w)) => {
                Ok(Const(CpElement::monomial(self.cp.group.parse_element(&w)?, scalar::one())))
            }
            Some(Tok::Inv) => {
                self.expect(Tok::LParen)?;
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(RationalExpr::inv(e))
            }
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            got => Err(Error::Parse(format!("unexpected token {got:?}"))),
        }
    }
}

/// Folds operations whose operands are all constants.
fn fold(cp: &CrossedProduct, e: RationalExpr) -> Result<RationalExpr> {
    Ok(match e {
        Add(a, b) => match (*a, *b) {
            (Const(x), Const(y)) => Const(cp.add(&x, &y)?),
            (a, b) => RationalExpr::add(a, b),
        },
        Mul(a, b) => match (*a, *b) {
            (Const(x), Const(y)) => Const(cp.mul(&x, &y)?),
            (a, b) => RationalExpr::mul(a, b),
        },
        Neg(a) => match *a {
            Const(x) => Const(cp.neg(&x)),
            a => RationalExpr::neg(a),
        },
        other => other,
    })
}

/// Parses `E := E + E | E - E | E * E | inv(E) | (E) | scalar*[word]`, folding constant
/// subtrees into single crossed-product elements.
pub fn parse_expr(cp: &CrossedProduct, s: &str) -> Result<RationalExpr> {
    let toks = tokenize(s)?;
    if toks.is_empty() {
        return Err(Error::Parse("empty expression".into()));
    }
    let mut p = Parser { toks, pos: 0, cp };
    let e = p.expr()?;
    if p.pos != p.toks.len() {
        return Err(Error::Parse(format!("trailing input after token {}", p.pos)));
    }
    Ok(e)
}

/// Evaluates with the tower's working frontiers.
pub fn eval(expr: &RationalExpr, tower: &Tower) -> Result<TowerElem> {
    let n = tower.rank();
    match expr {
        Const(x) => tower.from_cp(x),
        Add(a, b) => Ok(tower.add(n, &eval(a, tower)?, &eval(b, tower)?)),
        Neg(a) => Ok(tower.neg(&eval(a, tower)?)),
        Mul(a, b) => Ok(tower.mul(n, &eval(a, tower)?, &eval(b, tower)?)),
        Inv(a) => {
            let v = eval(a, tower)?;
            tower
                .invert(n, &v)
                .map_err(|e| e.with_context(&format!("inv({})", a.display(&tower.cp))))
        }
    }
}

pub const ESCALATION_ROUNDS: usize = 6;

/// Evaluates and certifies the requested box, escalating the working frontiers when
/// inversions consume part of it. Only levels that fall short are raised, by twice their
/// shortfall; a failed evaluation raises every level.
pub fn eval_certified(expr: &RationalExpr, base: &Tower, requested: &[Exp]) -> Result<TowerElem> {
    let n = base.rank();
    let mut last_err = None;
    let mut achieved = String::new();
    let mut w: Vec<Exp> = requested.to_vec();
    for round in 0..ESCALATION_ROUNDS {
        let tower = base.with_working(w.clone())?;
        let step = Exp::from_integer(round as i64 + 2);
        match eval(expr, &tower) {
            Ok(v) => {
                if tower.covers(n, &v, requested) {
                    return Ok(tower.truncate(n, &v, requested));
                }
                let got = tower.certified_box(n, &v);
                achieved = Tower::format_box(&got);
                for ((wi, r), g) in w.iter_mut().zip(requested).zip(&got) {
                    if let Some(g) = g {
                        if g < r {
                            *wi += (r - g) * Exp::from_integer(2) + step;
                        }
                    }
                }
            }
            Err(e @ (Error::ZeroUpToFrontier { .. } | Error::LevelExhausted { .. })) => {
                last_err = Some(e);
                for (wi, r) in w.iter_mut().zip(requested) {
                    *wi += r + step;
                }
            }
            Err(e) => return Err(e),
        }
    }
    if let Some(e) = last_err {
        if achieved.is_empty() {
            return Err(e);
        }
    }
    let req: Vec<Option<Exp>> = requested.iter().map(|r| Some(*r)).collect();
    Err(Error::FrontierBudgetExceeded { requested: Tower::format_box(&req), achieved })
}
