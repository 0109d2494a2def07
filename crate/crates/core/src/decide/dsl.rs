//! The condition language used by the table data.
//!
//! ```text
//! expr    := and ('|' and)*
//! and     := unary ('&' unary)*
//! unary   := '!' unary | 'true' | 'false' | '(' expr ')' | atom
//! atom    := 'legendre(' arith ',' arith ')' rel rhs
//!          | arith rel rhs [ ' (' arith ')' ]
//! rhs     := ['±' | '+-'] arith
//! rel     := '=' | '!=' | '<' | '<=' | '>' | '>='
//! arith   := term (('+' | '-') term)*
//! term    := factor (('*' | '/') factor | factor)*
//! factor  := '-' factor | base ['^' factor]
//! base    := integer | variable | '(' arith ')'
//! ```
//!
//! A trailing `(m)` separated by whitespace turns a relation into a
//! congruence modulo `m`; only `=` and `!=` are allowed there. Writing two
//! factors with no space between them multiplies them, so `5e` and
//! `q(q+e)` read as products, whereas `4e (9)` is `4e` modulo 9. Variables are
//! `p`, `q`, `q0`, `n`, `d`, `f` and `e`, the last being the sign `±1`.

use std::fmt;

use crate::error::{Error, Result};
use crate::numth::{legendre, pow_mod, rem_euclid};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Var {
    P,
    Q,
    Q0,
    N,
    D,
    F,
    E,
}

impl Var {
    pub const ALL: [Var; 7] = [Var::P, Var::Q, Var::Q0, Var::N, Var::D, Var::F, Var::E];

    pub fn name(self) -> &'static str {
        match self {
            Var::P => "p",
            Var::Q => "q",
            Var::Q0 => "q0",
            Var::N => "n",
            Var::D => "d",
            Var::F => "f",
            Var::E => "e",
        }
    }

    fn from_name(s: &str) -> Option<Var> {
        Var::ALL.into_iter().find(|v| v.name() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Arith {
    Num(i128),
    Var(Var),
    Neg(Box<Arith>),
    Add(Box<Arith>, Box<Arith>),
    Sub(Box<Arith>, Box<Arith>),
    Mul(Box<Arith>, Box<Arith>),
    Div(Box<Arith>, Box<Arith>),
    Pow(Box<Arith>, Box<Arith>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

impl Rel {
    fn symbol(self) -> &'static str {
        match self {
            Rel::Eq => "=",
            Rel::Ne => "!=",
            Rel::Lt => "<",
            Rel::Le => "<=",
            Rel::Gt => ">",
            Rel::Ge => ">=",
        }
    }
}

/// Right-hand side of a relation; `pm` means "`value` or `-value`".
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Rhs {
    pub pm: bool,
    pub value: Arith,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Atom {
    Bool(bool),
    Cmp { lhs: Arith, rel: Rel, rhs: Rhs, modulus: Option<Arith> },
    Legendre { a: Arith, p: Arith, rel: Rel, rhs: Rhs },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Expr {
    Atom(Atom),
    Not(Box<Expr>),
    And(Vec<Expr>),
    Or(Vec<Expr>),
}

/// Values for the free variables of a condition.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Env {
    vals: [Option<i128>; 7],
}

impl Env {
    pub fn new() -> Env {
        Env::default()
    }

    pub fn with(mut self, v: Var, x: i128) -> Env {
        self.set(v, x);
        self
    }

    pub fn set(&mut self, v: Var, x: i128) {
        self.vals[Var::ALL.iter().position(|&w| w == v).unwrap()] = Some(x);
    }

    pub fn get(&self, v: Var) -> Result<i128> {
        self.vals[Var::ALL.iter().position(|&w| w == v).unwrap()].ok_or_else(|| Error::Unbound(v.name().into()))
    }
}

// ---------------------------------------------------------------- lexing

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Num(i128),
    Ident(String),
    Sym(&'static str),
}

#[derive(Debug, Clone)]
struct Token {
    tok: Tok,
    pos: usize,
    /// Whitespace immediately before this token.
    spaced: bool,
}

const SYMBOLS: [&str; 17] = ["+-", "!=", "<=", ">=", "±", "+", "-", "*", "/", "^", "(", ")", ",", "=", "<", ">", "&"];

fn lex(src: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let mut i = 0;
    let mut spaced = false;
    let bytes = src.as_bytes();
    'outer: while i < src.len() {
        let c = src[i..].chars().next().unwrap();
        if c.is_whitespace() {
            spaced = true;
            i += c.len_utf8();
            continue;
        }
        let start = i;
        if c.is_ascii_digit() {
            while i < src.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let v = src[start..i]
                .parse::<i128>()
                .map_err(|_| Error::Parse { pos: start, msg: "number too large".into() })?;
            out.push(Token { tok: Tok::Num(v), pos: start, spaced });
        } else if c.is_ascii_alphabetic() {
            while i < src.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push(Token { tok: Tok::Ident(src[start..i].to_string()), pos: start, spaced });
        } else if c == '|' || c == '!' && !src[i..].starts_with("!=") {
            i += 1;
            out.push(Token { tok: Tok::Sym(if c == '|' { "|" } else { "!" }), pos: start, spaced });
        } else {
            for s in SYMBOLS {
                if src[i..].starts_with(s) {
                    i += s.len();
                    let s = if s == "+-" { "±" } else { s };
                    out.push(Token { tok: Tok::Sym(s), pos: start, spaced });
                    spaced = false;
                    continue 'outer;
                }
            }
            return Err(Error::Parse { pos: i, msg: format!("unexpected character `{c}`") });
        }
        spaced = false;
    }
    Ok(out)
}

// --------------------------------------------------------------- parsing

struct Parser<'a> {
    toks: &'a [Token],
    at: usize,
    end: usize,
}

impl Parser<'_> {
    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.at)
    }

    fn is_sym(&self, s: &str) -> bool {
        matches!(self.peek(), Some(Token { tok: Tok::Sym(t), .. }) if *t == s)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        let pos = self.peek().map(|t| t.pos).unwrap_or(self.end);
        Err(Error::Parse { pos, msg: msg.into() })
    }

    fn expect(&mut self, s: &str) -> Result<()> {
        if self.is_sym(s) {
            self.at += 1;
            Ok(())
        } else {
            self.err(format!("expected `{s}`"))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut items = vec![self.and()?];
        while self.is_sym("|") {
            self.at += 1;
            items.push(self.and()?);
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { Expr::Or(items) })
    }

    fn and(&mut self) -> Result<Expr> {
        let mut items = vec![self.unary()?];
        while self.is_sym("&") {
            self.at += 1;
            items.push(self.unary()?);
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { Expr::And(items) })
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.is_sym("!") {
            self.at += 1;
            return Ok(Expr::Not(Box::new(self.unary()?)));
        }
        if let Some(Token { tok: Tok::Ident(id), .. }) = self.peek() {
            if id == "true" || id == "false" {
                let b = id == "true";
                self.at += 1;
                return Ok(Expr::Atom(Atom::Bool(b)));
            }
        }
        if self.is_sym("(") {
            // Either a parenthesised condition or arithmetic starting an atom.
            let save = self.at;
            self.at += 1;
            if let Ok(e) = self.expr() {
                if self.is_sym(")") {
                    self.at += 1;
                    if !self.at_relation_or_arith() {
                        return Ok(e);
                    }
                }
            }
            self.at = save;
        }
        Ok(Expr::Atom(self.atom()?))
    }

    fn at_relation_or_arith(&self) -> bool {
        match self.peek() {
            Some(Token { tok: Tok::Sym(s), spaced, .. }) => {
                matches!(*s, "=" | "!=" | "<" | "<=" | ">" | ">=" | "+" | "-" | "*" | "/" | "^")
                    || (*s == "(" && !spaced)
            }
            Some(Token { spaced: false, .. }) => true,
            _ => false,
        }
    }

    fn rel(&mut self) -> Result<Rel> {
        let r = match self.peek() {
            Some(Token { tok: Tok::Sym(s), .. }) => match *s {
                "=" => Rel::Eq,
                "!=" => Rel::Ne,
                "<" => Rel::Lt,
                "<=" => Rel::Le,
                ">" => Rel::Gt,
                ">=" => Rel::Ge,
                _ => return self.err("expected a relation"),
            },
            _ => return self.err("expected a relation"),
        };
        self.at += 1;
        Ok(r)
    }

    fn rhs(&mut self, rel: Rel) -> Result<Rhs> {
        let pm = self.is_sym("±");
        if pm {
            if !matches!(rel, Rel::Eq | Rel::Ne) {
                return self.err("± needs = or !=");
            }
            self.at += 1;
        }
        Ok(Rhs { pm, value: self.arith()? })
    }

    fn atom(&mut self) -> Result<Atom> {
        if let Some(Token { tok: Tok::Ident(id), .. }) = self.peek() {
            if id == "legendre" {
                self.at += 1;
                self.expect("(")?;
                let a = self.arith()?;
                self.expect(",")?;
                let p = self.arith()?;
                self.expect(")")?;
                let rel = self.rel()?;
                let rhs = self.rhs(rel)?;
                return Ok(Atom::Legendre { a, p, rel, rhs });
            }
        }
        let lhs = self.arith()?;
        let rel = self.rel()?;
        let rhs = self.rhs(rel)?;
        let mut modulus = None;
        if matches!(self.peek(), Some(Token { tok: Tok::Sym("("), spaced: true, .. })) {
            if !matches!(rel, Rel::Eq | Rel::Ne) {
                return self.err("congruences use = or !=");
            }
            self.at += 1;
            modulus = Some(self.arith()?);
            self.expect(")")?;
        }
        Ok(Atom::Cmp { lhs, rel, rhs, modulus })
    }

    fn arith(&mut self) -> Result<Arith> {
        let mut acc = self.term()?;
        loop {
            if self.is_sym("+") {
                self.at += 1;
                acc = Arith::Add(Box::new(acc), Box::new(self.term()?));
            } else if self.is_sym("-") {
                self.at += 1;
                acc = Arith::Sub(Box::new(acc), Box::new(self.term()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_adjacent_factor(&self) -> bool {
        match self.peek() {
            Some(Token { spaced: true, .. }) | None => false,
            Some(Token { tok: Tok::Num(_), .. }) => true,
            Some(Token { tok: Tok::Ident(id), .. }) => Var::from_name(id).is_some(),
            Some(Token { tok: Tok::Sym(s), .. }) => *s == "(",
        }
    }

    fn term(&mut self) -> Result<Arith> {
        let mut acc = self.factor()?;
        loop {
            if self.is_sym("*") {
                self.at += 1;
                acc = Arith::Mul(Box::new(acc), Box::new(self.factor()?));
            } else if self.is_sym("/") {
                self.at += 1;
                acc = Arith::Div(Box::new(acc), Box::new(self.factor()?));
            } else if self.starts_adjacent_factor() {
                acc = Arith::Mul(Box::new(acc), Box::new(self.factor()?));
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Arith> {
        if self.is_sym("-") {
            self.at += 1;
            return Ok(Arith::Neg(Box::new(self.factor()?)));
        }
        let base = self.base()?;
        if self.is_sym("^") {
            self.at += 1;
            return Ok(Arith::Pow(Box::new(base), Box::new(self.factor()?)));
        }
        Ok(base)
    }

    fn base(&mut self) -> Result<Arith> {
        match self.peek().cloned() {
            Some(Token { tok: Tok::Num(v), .. }) => {
                self.at += 1;
                Ok(Arith::Num(v))
            }
            Some(Token { tok: Tok::Ident(id), .. }) => match Var::from_name(&id) {
                Some(v) => {
                    self.at += 1;
                    Ok(Arith::Var(v))
                }
                None => self.err(format!("unknown variable `{id}`")),
            },
            Some(Token { tok: Tok::Sym("("), .. }) => {
                self.at += 1;
                let a = self.arith()?;
                self.expect(")")?;
                Ok(a)
            }
            _ => self.err("expected a number, variable or `(`"),
        }
    }
}

pub fn parse_condition(src: &str) -> Result<Expr> {
    let toks = lex(src)?;
    let mut p = Parser { toks: &toks, at: 0, end: src.len() };
    let e = p.expr()?;
    if p.at != toks.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

pub fn parse_arith(src: &str) -> Result<Arith> {
    let toks = lex(src)?;
    let mut p = Parser { toks: &toks, at: 0, end: src.len() };
    let a = p.arith()?;
    if p.at != toks.len() {
        return p.err("trailing input");
    }
    Ok(a)
}

// ------------------------------------------------------------ evaluation

fn overflow() -> Error {
    Error::pre("arithmetic overflow in condition")
}

impl Arith {
    pub fn eval(&self, env: &Env) -> Result<i128> {
        Ok(match self {
            Arith::Num(v) => *v,
            Arith::Var(v) => env.get(*v)?,
            Arith::Neg(a) => a.eval(env)?.checked_neg().ok_or_else(overflow)?,
            Arith::Add(a, b) => a.eval(env)?.checked_add(b.eval(env)?).ok_or_else(overflow)?,
            Arith::Sub(a, b) => a.eval(env)?.checked_sub(b.eval(env)?).ok_or_else(overflow)?,
            Arith::Mul(a, b) => a.eval(env)?.checked_mul(b.eval(env)?).ok_or_else(overflow)?,
            Arith::Div(a, b) => {
                let d = b.eval(env)?;
                if d == 0 {
                    return Err(Error::pre("division by zero in condition"));
                }
                a.eval(env)?.div_euclid(d)
            }
            Arith::Pow(a, b) => {
                let e = exponent(b, env)?;
                a.eval(env)?.checked_pow(e).ok_or_else(overflow)?
            }
        })
    }

    /// Residue modulo `m`, reducing as it goes so large powers stay cheap.
    pub fn eval_mod(&self, env: &Env, m: u64) -> Result<u64> {
        let r = |x: i128| rem_euclid(x, m);
        Ok(match self {
            Arith::Num(v) => r(*v),
            Arith::Var(v) => r(env.get(*v)?),
            Arith::Neg(a) => (m - a.eval_mod(env, m)?) % m,
            Arith::Add(a, b) => ((a.eval_mod(env, m)? as u128 + b.eval_mod(env, m)? as u128) % m as u128) as u64,
            Arith::Sub(a, b) => {
                ((a.eval_mod(env, m)? as u128 + m as u128 - b.eval_mod(env, m)? as u128) % m as u128) as u64
            }
            Arith::Mul(a, b) => ((a.eval_mod(env, m)? as u128 * b.eval_mod(env, m)? as u128) % m as u128) as u64,
            Arith::Div(..) => r(self.eval(env)?),
            Arith::Pow(a, b) => pow_mod(a.eval_mod(env, m)?, exponent(b, env)? as u64, m),
        })
    }

    fn needs_parens(&self) -> bool {
        !matches!(self, Arith::Num(_) | Arith::Var(_))
    }
}

fn exponent(b: &Arith, env: &Env) -> Result<u32> {
    let e = b.eval(env)?;
    u32::try_from(e).map_err(|_| Error::pre("exponent must be a nonnegative integer"))
}

fn compare(rel: Rel, l: i128, r: i128) -> bool {
    match rel {
        Rel::Eq => l == r,
        Rel::Ne => l != r,
        Rel::Lt => l < r,
        Rel::Le => l <= r,
        Rel::Gt => l > r,
        Rel::Ge => l >= r,
    }
}

fn signed_match(rel: Rel, pm: bool, hit: impl Fn(bool) -> bool) -> bool {
    let any = hit(false) || (pm && hit(true));
    match rel {
        Rel::Eq => any,
        Rel::Ne => !any,
        _ => hit(false),
    }
}

impl Atom {
    pub fn eval(&self, env: &Env) -> Result<bool> {
        match self {
            Atom::Bool(b) => Ok(*b),
            Atom::Cmp { lhs, rel, rhs, modulus: Some(m) } => {
                let m = m.eval(env)?;
                let m =
                    u64::try_from(m).ok().filter(|&m| m > 0).ok_or_else(|| Error::pre("modulus must be positive"))?;
                let l = lhs.eval_mod(env, m)?;
                let r = rhs.value.eval_mod(env, m)?;
                Ok(signed_match(*rel, rhs.pm, |neg| l == if neg { (m - r) % m } else { r }))
            }
            Atom::Cmp { lhs, rel, rhs, modulus: None } => {
                let l = lhs.eval(env)?;
                let r = rhs.value.eval(env)?;
                if rhs.pm {
                    return Ok(signed_match(*rel, true, |neg| l == if neg { -r } else { r }));
                }
                Ok(compare(*rel, l, r))
            }
            Atom::Legendre { a, p, rel, rhs } => {
                let pv = u64::try_from(p.eval(env)?).map_err(|_| Error::pre("legendre needs a positive prime"))?;
                let av = a.eval_mod(env, pv)?;
                let l = legendre(av as i64, pv)? as i128;
                let r = rhs.value.eval(env)?;
                if rhs.pm {
                    return Ok(signed_match(*rel, true, |neg| l == if neg { -r } else { r }));
                }
                Ok(compare(*rel, l, r))
            }
        }
    }
}

impl Expr {
    pub fn eval(&self, env: &Env) -> Result<bool> {
        match self {
            Expr::Atom(a) => a.eval(env),
            Expr::Not(e) => Ok(!e.eval(env)?),
            Expr::And(items) => {
                for e in items {
                    if !e.eval(env)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            Expr::Or(items) => {
                for e in items {
                    if e.eval(env)? {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
        }
    }
}

pub fn eval_condition(src: &str, env: &Env) -> Result<bool> {
    parse_condition(src)?.eval(env)
}

// --------------------------------------------------------------- display

fn sub(a: &Arith) -> String {
    if a.needs_parens() {
        format!("({a})")
    } else {
        a.to_string()
    }
}

impl fmt::Display for Arith {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Arith::Num(v) if *v < 0 => write!(f, "-{}", v.unsigned_abs()),
            Arith::Num(v) => write!(f, "{v}"),
            Arith::Var(v) => f.write_str(v.name()),
            Arith::Neg(a) => write!(f, "-{}", sub(a)),
            Arith::Add(a, b) => write!(f, "{} + {}", sub(a), sub(b)),
            Arith::Sub(a, b) => write!(f, "{} - {}", sub(a), sub(b)),
            Arith::Mul(a, b) => write!(f, "{}*{}", sub(a), sub(b)),
            Arith::Div(a, b) => write!(f, "{}/{}", sub(a), sub(b)),
            Arith::Pow(a, b) => write!(f, "{}^{}", sub(a), sub(b)),
        }
    }
}

impl fmt::Display for Rhs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pm {
            f.write_str("±")?;
        }
        write!(f, "{}", self.value)
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Bool(b) => write!(f, "{b}"),
            Atom::Cmp { lhs, rel, rhs, modulus } => {
                write!(f, "{lhs} {} {rhs}", rel.symbol())?;
                if let Some(m) = modulus {
                    write!(f, " ({m})")?;
                }
                Ok(())
            }
            Atom::Legendre { a, p, rel, rhs } => write!(f, "legendre({a}, {p}) {} {rhs}", rel.symbol()),
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let child = |e: &Expr| match e {
            Expr::And(_) | Expr::Or(_) => format!("({e})"),
            _ => e.to_string(),
        };
        match self {
            Expr::Atom(a) => write!(f, "{a}"),
            Expr::Not(e) => match **e {
                Expr::Atom(Atom::Bool(_)) => write!(f, "!{e}"),
                _ => write!(f, "!({e})"),
            },
            Expr::And(items) => f.write_str(&items.iter().map(child).collect::<Vec<_>>().join(" & ")),
            Expr::Or(items) => f.write_str(&items.iter().map(child).collect::<Vec<_>>().join(" | ")),
        }
    }
}
