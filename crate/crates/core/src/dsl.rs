//! Ring-file syntax: parsing, printing and building rings.
//!
//! ```text
//! ring S {
//!   base Zmod 6
//!   grading Z
//!   gen x deg 1 invertible
//!   rel x^2 - 1        # optional, any number
//!   reduce monic       # optional: none | monic | linear
//! }
//! ```
//!
//! Expressions use integer literals, `a/b` rational literals (base `Q` only),
//! generator names, `+ - * ^` and parentheses. `^` binds tightest and takes
//! a signed integer exponent.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use crate::algebra::{Element, Reduction, Ring, RingPresentation};
use crate::error::{Error, Result};
use crate::grading::GradingGroup;
use crate::scalars::BaseRing;

/// A syntax node with its source position. Equality ignores the position.
#[derive(Clone, Debug)]
pub struct Spanned<T> {
    pub node: T,
    pub line: usize,
    pub col: usize,
}

impl<T: PartialEq> PartialEq for Spanned<T> {
    fn eq(&self, other: &Self) -> bool {
        self.node == other.node
    }
}

impl<T> Spanned<T> {
    fn new(node: T, line: usize, col: usize) -> Self {
        Spanned { node, line, col }
    }

    fn error(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            col: self.col,
            msg: msg.into(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Int(BigInt),
    Rational(BigInt, BigInt),
    Var(String),
    Neg(Box<Spanned<Expr>>),
    Add(Box<Spanned<Expr>>, Box<Spanned<Expr>>),
    Sub(Box<Spanned<Expr>>, Box<Spanned<Expr>>),
    Mul(Box<Spanned<Expr>>, Box<Spanned<Expr>>),
    Pow(Box<Spanned<Expr>>, i64),
}

#[derive(Clone, Debug, PartialEq)]
pub enum Stmt {
    Base(BaseRing),
    Grading(GradingGroup),
    Gen {
        name: String,
        grade: Vec<i64>,
        invertible: bool,
    },
    Rel(Spanned<Expr>),
    Reduce(Reduction),
}

#[derive(Clone, Debug, PartialEq)]
pub struct RingBlock {
    pub name: String,
    pub stmts: Vec<Spanned<Stmt>>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RingFile {
    pub rings: Vec<Spanned<RingBlock>>,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Int(BigInt),
    Sym(char),
    Newline,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str, first_line: usize) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    for (li, line) in text.lines().enumerate() {
        let line_no = li + first_line;
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let col = i + 1;
            if c == '#' {
                break;
            }
            if c.is_whitespace() {
                i += 1;
            } else if c.is_ascii_digit() {
                let start = i;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
                let s: String = chars[start..i].iter().collect();
                out.push(Token {
                    tok: Tok::Int(s.parse().expect("digits")),
                    line: line_no,
                    col,
                });
            } else if c.is_alphabetic() || c == '_' {
                let start = i;
                while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                    i += 1;
                }
                out.push(Token {
                    tok: Tok::Ident(chars[start..i].iter().collect()),
                    line: line_no,
                    col,
                });
            } else if "+-*^()/,{}".contains(c) {
                out.push(Token {
                    tok: Tok::Sym(c),
                    line: line_no,
                    col,
                });
                i += 1;
            } else {
                return Err(Error::Parse {
                    line: line_no,
                    col,
                    msg: format!("unexpected character `{c}`"),
                });
            }
        }
        out.push(Token {
            tok: Tok::Newline,
            line: line_no,
            col: chars.len() + 1,
        });
    }
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    last_line: usize,
}

impl Parser {
    fn new(toks: Vec<Token>) -> Self {
        let last_line = toks.last().map_or(1, |t| t.line);
        Parser {
            toks,
            pos: 0,
            last_line,
        }
    }

    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn here(&self) -> (usize, usize) {
        self.peek()
            .map_or((self.last_line, 1), |t| (t.line, t.col))
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let (line, col) = self.here();
        Err(Error::Parse {
            line,
            col,
            msg: msg.into(),
        })
    }

    fn next(&mut self) -> Option<Token> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn at_sym(&self, c: char) -> bool {
        matches!(self.peek(), Some(Token { tok: Tok::Sym(s), .. }) if *s == c)
    }

    fn at_newline(&self) -> bool {
        matches!(self.peek(), Some(Token { tok: Tok::Newline, .. }) | None)
    }

    fn skip_newlines(&mut self) {
        while matches!(self.peek(), Some(Token { tok: Tok::Newline, .. })) {
            self.pos += 1;
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        if self.at_sym(c) {
            self.pos += 1;
            Ok(())
        } else {
            self.err(format!("expected `{c}`"))
        }
    }

    fn expect_newline(&mut self) -> Result<()> {
        if self.at_newline() {
            self.pos += 1;
            Ok(())
        } else {
            self.err("expected end of line")
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek() {
            Some(Token {
                tok: Tok::Ident(s), ..
            }) => {
                let s = s.clone();
                self.pos += 1;
                Ok(s)
            }
            _ => self.err("expected a name"),
        }
    }

    fn keyword(&mut self, kw: &str) -> Result<()> {
        let (line, col) = self.here();
        let got = self.ident()?;
        if got == kw {
            Ok(())
        } else {
            Err(Error::Parse {
                line,
                col,
                msg: format!("expected `{kw}`, found `{got}`"),
            })
        }
    }

    fn int(&mut self) -> Result<BigInt> {
        match self.peek() {
            Some(Token { tok: Tok::Int(v), .. }) => {
                let v = v.clone();
                self.pos += 1;
                Ok(v)
            }
            _ => self.err("expected an integer"),
        }
    }

    fn small_int(&mut self) -> Result<i64> {
        let neg = if self.at_sym('-') {
            self.pos += 1;
            true
        } else {
            false
        };
        let v = self.int()?;
        let v = v
            .to_i64()
            .ok_or_else(|| Error::Parse {
                line: self.here().0,
                col: self.here().1,
                msg: "integer too large".into(),
            })?;
        Ok(if neg { -v } else { v })
    }

    fn file(&mut self) -> Result<RingFile> {
        let mut rings = Vec::new();
        self.skip_newlines();
        while self.peek().is_some() {
            rings.push(self.block()?);
            self.skip_newlines();
        }
        if rings.is_empty() {
            return Err(Error::Parse {
                line: 1,
                col: 1,
                msg: "no ring blocks".into(),
            });
        }
        Ok(RingFile { rings })
    }

    fn block(&mut self) -> Result<Spanned<RingBlock>> {
        let (line, col) = self.here();
        self.keyword("ring")?;
        let name = self.ident()?;
        self.expect_sym('{')?;
        self.expect_newline()?;
        let mut stmts = Vec::new();
        loop {
            self.skip_newlines();
            if self.at_sym('}') {
                self.pos += 1;
                break;
            }
            if self.peek().is_none() {
                return self.err("unterminated ring block");
            }
            stmts.push(self.stmt()?);
        }
        if !self.at_newline() {
            return self.err("expected end of line");
        }
        let block = RingBlock { name, stmts };
        check_literals(&block)?;
        Ok(Spanned::new(block, line, col))
    }

    fn stmt(&mut self) -> Result<Spanned<Stmt>> {
        let (line, col) = self.here();
        let kw = self.ident()?;
        let stmt = match kw.as_str() {
            "base" => Stmt::Base(self.base()?),
            "grading" => Stmt::Grading(self.grading()?),
            "gen" => {
                let name = self.ident()?;
                self.keyword("deg")?;
                let grade = if self.at_sym('(') {
                    self.pos += 1;
                    let mut v = vec![self.small_int()?];
                    while self.at_sym(',') {
                        self.pos += 1;
                        v.push(self.small_int()?);
                    }
                    self.expect_sym(')')?;
                    v
                } else {
                    vec![self.small_int()?]
                };
                let invertible = if self.at_newline() {
                    false
                } else {
                    self.keyword("invertible")?;
                    true
                };
                Stmt::Gen {
                    name,
                    grade,
                    invertible,
                }
            }
            "rel" => Stmt::Rel(self.expr()?),
            "reduce" => {
                let (l, c) = self.here();
                match self.ident()?.as_str() {
                    "none" => Stmt::Reduce(Reduction::None),
                    "monic" => Stmt::Reduce(Reduction::MonicUnivariate),
                    "linear" => Stmt::Reduce(Reduction::PerDegreeLinear),
                    other => {
                        return Err(Error::Parse {
                            line: l,
                            col: c,
                            msg: format!("unknown reduction `{other}`"),
                        })
                    }
                }
            }
            other => {
                return Err(Error::Parse {
                    line,
                    col,
                    msg: format!("unknown statement `{other}`"),
                })
            }
        };
        self.expect_newline()?;
        Ok(Spanned::new(stmt, line, col))
    }

    fn base(&mut self) -> Result<BaseRing> {
        let (line, col) = self.here();
        match self.ident()?.as_str() {
            "Z" => Ok(BaseRing::Integers),
            "Q" => Ok(BaseRing::Rationals),
            "Zmod" => {
                let n = self.int()?;
                BaseRing::modular(n).map_err(|e| Error::Parse {
                    line,
                    col,
                    msg: e.to_string(),
                })
            }
            other => Err(Error::Parse {
                line,
                col,
                msg: format!("unknown base ring `{other}`"),
            }),
        }
    }

    fn grading(&mut self) -> Result<GradingGroup> {
        let (line, col) = self.here();
        let wrap = |e: Error| Error::Parse {
            line,
            col,
            msg: e.to_string(),
        };
        match self.ident()?.as_str() {
            "Z" => {
                let rank = if self.at_sym('^') {
                    self.pos += 1;
                    let r = self.small_int()?;
                    if !self.at_newline() {
                        self.keyword("lex")?;
                    }
                    r
                } else {
                    1
                };
                GradingGroup::free_lex(rank.max(0) as usize).map_err(wrap)
            }
            "Zmod" => {
                let m = self.small_int()?;
                GradingGroup::cyclic(m).map_err(wrap)
            }
            other => Err(Error::Parse {
                line,
                col,
                msg: format!("unknown grading group `{other}`"),
            }),
        }
    }

    fn expr(&mut self) -> Result<Spanned<Expr>> {
        let mut lhs = self.term()?;
        loop {
            let op = if self.at_sym('+') {
                '+'
            } else if self.at_sym('-') {
                '-'
            } else {
                break;
            };
            self.pos += 1;
            let rhs = self.term()?;
            let (line, col) = (lhs.line, lhs.col);
            let node = if op == '+' {
                Expr::Add(Box::new(lhs), Box::new(rhs))
            } else {
                Expr::Sub(Box::new(lhs), Box::new(rhs))
            };
            lhs = Spanned::new(node, line, col);
        }
        Ok(lhs)
    }

    fn term(&mut self) -> Result<Spanned<Expr>> {
        let mut lhs = self.unary()?;
        while self.at_sym('*') {
            self.pos += 1;
            let rhs = self.unary()?;
            let (line, col) = (lhs.line, lhs.col);
            lhs = Spanned::new(Expr::Mul(Box::new(lhs), Box::new(rhs)), line, col);
        }
        Ok(lhs)
    }

    fn unary(&mut self) -> Result<Spanned<Expr>> {
        if self.at_sym('-') {
            let (line, col) = self.here();
            self.pos += 1;
            let inner = self.unary()?;
            return Ok(Spanned::new(Expr::Neg(Box::new(inner)), line, col));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Spanned<Expr>> {
        let atom = self.atom()?;
        if self.at_sym('^') {
            self.pos += 1;
            let k = self.small_int()?;
            let (line, col) = (atom.line, atom.col);
            return Ok(Spanned::new(Expr::Pow(Box::new(atom), k), line, col));
        }
        Ok(atom)
    }

    fn atom(&mut self) -> Result<Spanned<Expr>> {
        let (line, col) = self.here();
        match self.next() {
            Some(Token { tok: Tok::Int(v), .. }) => {
                if self.at_sym('/') {
                    self.pos += 1;
                    let d = self.int()?;
                    if d.is_zero() {
                        return Err(Error::Parse {
                            line,
                            col,
                            msg: "zero denominator".into(),
                        });
                    }
                    Ok(Spanned::new(Expr::Rational(v, d), line, col))
                } else {
                    Ok(Spanned::new(Expr::Int(v), line, col))
                }
            }
            Some(Token {
                tok: Tok::Ident(s), ..
            }) => Ok(Spanned::new(Expr::Var(s), line, col)),
            Some(Token { tok: Tok::Sym('('), .. }) => {
                let e = self.expr()?;
                self.expect_sym(')')?;
                Ok(e)
            }
            _ => {
                self.pos -= 1;
                self.err("expected an expression")
            }
        }
    }
}

fn check_literals(block: &RingBlock) -> Result<()> {
    let base = block.stmts.iter().find_map(|s| match &s.node {
        Stmt::Base(b) => Some(b.clone()),
        _ => None,
    });
    if base == Some(BaseRing::Rationals) {
        return Ok(());
    }
    fn find(e: &Spanned<Expr>) -> Option<&Spanned<Expr>> {
        match &e.node {
            Expr::Rational(..) => Some(e),
            Expr::Int(_) | Expr::Var(_) => None,
            Expr::Neg(a) | Expr::Pow(a, _) => find(a),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => find(a).or_else(|| find(b)),
        }
    }
    for s in &block.stmts {
        if let Stmt::Rel(e) = &s.node {
            if let Some(r) = find(e) {
                return Err(r.error("rational literals require base Q"));
            }
        }
    }
    Ok(())
}

pub fn parse_ring_file(text: &str) -> Result<RingFile> {
    Parser::new(lex(text, 1)?).file()
}

/// Parses a single expression (the whole input).
pub fn parse_expr(text: &str) -> Result<Spanned<Expr>> {
    let mut p = Parser::new(lex(text, 1)?);
    p.skip_newlines();
    let e = p.expr()?;
    p.skip_newlines();
    if p.peek().is_some() {
        return p.err("unexpected input after expression");
    }
    Ok(e)
}

/// Evaluates an expression in a ring.
pub fn eval_expr(ring: &Ring, e: &Spanned<Expr>) -> Result<Element> {
    let wrap = |err: Error| match err {
        Error::Parse { .. } => err,
        other => e.error(other.to_string()),
    };
    match &e.node {
        Expr::Int(v) => Ok(ring.integer(v.clone())),
        Expr::Rational(n, d) => {
            if ring.base() != &BaseRing::Rationals {
                return Err(e.error("rational literals require base Q"));
            }
            ring.rational(BigRational::new(n.clone(), d.clone()))
                .map_err(wrap)
        }
        Expr::Var(name) => ring
            .gen_named(name)
            .map_err(|_| e.error(format!("unknown identifier `{name}`"))),
        Expr::Neg(a) => Ok(eval_expr(ring, a)?.neg()),
        Expr::Add(a, b) => eval_expr(ring, a)?.add(&eval_expr(ring, b)?).map_err(wrap),
        Expr::Sub(a, b) => eval_expr(ring, a)?.sub(&eval_expr(ring, b)?).map_err(wrap),
        Expr::Mul(a, b) => eval_expr(ring, a)?.mul(&eval_expr(ring, b)?).map_err(wrap),
        Expr::Pow(a, k) => eval_expr(ring, a)?.pow_signed(*k).map_err(wrap),
    }
}

/// Parses and evaluates an element expression.
pub fn element(ring: &Ring, text: &str) -> Result<Element> {
    eval_expr(ring, &parse_expr(text)?)
}

/// Builds the ring described by one block.
pub fn build_ring(block: &Spanned<RingBlock>) -> Result<Ring> {
    let b = &block.node;
    let base = b.stmts.iter().find_map(|s| match &s.node {
        Stmt::Base(x) => Some(x.clone()),
        _ => None,
    });
    let grading = b.stmts.iter().find_map(|s| match &s.node {
        Stmt::Grading(x) => Some(x.clone()),
        _ => None,
    });
    let base = base.ok_or_else(|| block.error(format!("ring {} has no base", b.name)))?;
    let grading =
        grading.ok_or_else(|| block.error(format!("ring {} has no grading", b.name)))?;
    let mut p = RingPresentation::new(b.name.clone(), base, grading);
    for s in &b.stmts {
        match &s.node {
            Stmt::Gen {
                name,
                grade,
                invertible,
            } => {
                p = p
                    .gen(name, grade, *invertible)
                    .map_err(|e| s.error(e.to_string()))?;
            }
            Stmt::Reduce(r) => p = p.reduction(*r),
            _ => {}
        }
    }
    let free = p.free_ring().map_err(|e| block.error(e.to_string()))?;
    let mut rel_lines = Vec::new();
    for s in &b.stmts {
        if let Stmt::Rel(e) = &s.node {
            let f = eval_expr(&free, e)?;
            p = p.rel_terms(f.terms().clone());
            rel_lines.push(s);
        }
    }
    p.build().map_err(|e| match &e {
        Error::NonHomogeneousRelation { index, .. } => rel_lines
            .get(*index)
            .map_or_else(|| block.error(e.to_string()), |s| s.error(e.to_string())),
        Error::Parse { .. } => e,
        _ => block.error(e.to_string()),
    })
}

/// Builds every ring in a file.
pub fn build_rings(file: &RingFile) -> Result<Vec<Ring>> {
    file.rings.iter().map(build_ring).collect()
}

/// Parses a ring file and builds its first ring.
pub fn ring_from_str(text: &str) -> Result<Ring> {
    let file = parse_ring_file(text)?;
    build_ring(&file.rings[0])
}

fn prec(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 1,
        Expr::Mul(..) => 2,
        Expr::Neg(_) => 3,
        Expr::Pow(..) => 4,
        _ => 5,
    }
}

fn write_expr(e: &Spanned<Expr>, min: u8, out: &mut String) {
    let paren = prec(&e.node) < min;
    if paren {
        out.push('(');
    }
    match &e.node {
        Expr::Int(v) => out.push_str(&v.to_string()),
        Expr::Rational(n, d) => out.push_str(&format!("{n}/{d}")),
        Expr::Var(s) => out.push_str(s),
        Expr::Neg(a) => {
            out.push('-');
            write_expr(a, 3, out);
        }
        Expr::Add(a, b) | Expr::Sub(a, b) => {
            write_expr(a, 1, out);
            out.push_str(if matches!(e.node, Expr::Add(..)) { " + " } else { " - " });
            write_expr(b, 2, out);
        }
        Expr::Mul(a, b) => {
            write_expr(a, 2, out);
            out.push_str(" * ");
            write_expr(b, 3, out);
        }
        Expr::Pow(a, k) => {
            write_expr(a, 5, out);
            out.push_str(&format!("^{k}"));
        }
    }
    if paren {
        out.push(')');
    }
}

pub fn print_expr(e: &Spanned<Expr>) -> String {
    let mut s = String::new();
    write_expr(e, 0, &mut s);
    s
}

fn print_grade(g: &[i64]) -> String {
    if g.len() == 1 {
        g[0].to_string()
    } else {
        let parts: Vec<String> = g.iter().map(|x| x.to_string()).collect();
        format!("({})", parts.join(","))
    }
}

impl fmt::Display for RingFile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, r) in self.rings.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            writeln!(f, "ring {} {{", r.node.name)?;
            for s in &r.node.stmts {
                match &s.node {
                    Stmt::Base(b) => writeln!(f, "  base {b}")?,
                    Stmt::Grading(g) => writeln!(f, "  grading {g}")?,
                    Stmt::Gen {
                        name,
                        grade,
                        invertible,
                    } => {
                        let inv = if *invertible { " invertible" } else { "" };
                        writeln!(f, "  gen {name} deg {}{inv}", print_grade(grade))?
                    }
                    Stmt::Rel(e) => writeln!(f, "  rel {}", print_expr(e))?,
                    Stmt::Reduce(r) => {
                        let r = match r {
                            Reduction::None => "none",
                            Reduction::MonicUnivariate => "monic",
                            Reduction::PerDegreeLinear => "linear",
                        };
                        writeln!(f, "  reduce {r}")?
                    }
                }
            }
            writeln!(f, "}}")?;
        }
        Ok(())
    }
}
