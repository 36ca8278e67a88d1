// Text format for vector fields:
//
//     vars x, y
//     params a, b = 2, c, d = 1/2
//     param z with z' = b*z
//     x' = x*(a*y + b); y' = y*(c*x + d)
//
// Statements end at `;` or a newline, `#` starts a comment. `p/q` without
// spaces is a single rational literal; `^` takes an integer exponent and binds
// tighter than unary minus.

use std::collections::{HashMap, HashSet};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::algebra::{RatFunc, Rational, Scalar};
use crate::error::{Error, Result};
use crate::symbol::Symbol;
use crate::vectorfield::{DerivativeLaw, DiffParam, VectorField};

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Num(Rational),
    Name(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i32),
}

#[derive(Clone, Debug, PartialEq)]
pub struct SystemSpec {
    pub vars: Vec<String>,
    pub params: Vec<(String, Option<Rational>)>,
    pub diff_params: Vec<(String, Expr)>,
    pub equations: Vec<(String, Expr)>,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Ident(String),
    Num(Rational),
    Sym(char),
    Sep,
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    column: usize,
}

fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax {
        line,
        column,
        message: message.into(),
    }
}

fn digits_to_int(s: &str) -> BigInt {
    s.parse().expect("ascii digits")
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        let push = |out: &mut Vec<Token>, tok| out.push(Token { tok, line: l0, column: c0 });
        if c == '\n' {
            push(&mut out, Tok::Sep);
            i += 1;
            line += 1;
            col = 1;
            continue;
        }
        if c == '#' {
            while i < chars.len() && chars[i] != '\n' {
                i += 1;
                col += 1;
            }
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            push(&mut out, Tok::Ident(chars[start..i].iter().collect()));
        } else if c.is_ascii_digit() {
            let run = |i: &mut usize| {
                let s = *i;
                while *i < chars.len() && chars[*i].is_ascii_digit() {
                    *i += 1;
                }
                chars[s..*i].iter().collect::<String>()
            };
            let whole = run(&mut i);
            let value = if i + 1 < chars.len() && chars[i] == '.' && chars[i + 1].is_ascii_digit() {
                i += 1;
                let frac = run(&mut i);
                let scale = BigInt::from(10).pow(frac.len() as u32);
                Rational::new(digits_to_int(&whole) * &scale + digits_to_int(&frac), scale)
            } else if i + 1 < chars.len() && chars[i] == '/' && chars[i + 1].is_ascii_digit() {
                i += 1;
                let den = digits_to_int(&run(&mut i));
                if den.is_zero() {
                    return Err(syntax(l0, c0, "zero denominator in a rational literal"));
                }
                Rational::new(digits_to_int(&whole), den)
            } else {
                Rational::from_integer(digits_to_int(&whole))
            };
            if i < chars.len() && (chars[i].is_ascii_alphabetic() || chars[i] == '_' || chars[i] == '.') {
                return Err(syntax(line, col + (i - start), format!("unexpected '{}' after a number", chars[i])));
            }
            push(&mut out, Tok::Num(value));
        } else if "+-*/^()=,'".contains(c) {
            i += 1;
            push(&mut out, Tok::Sym(c));
        } else if c == ';' {
            i += 1;
            push(&mut out, Tok::Sep);
        } else {
            return Err(syntax(l0, c0, format!("unexpected character '{c}'")));
        }
        col += i - start;
    }
    out.push(Token {
        tok: Tok::End,
        line,
        column: col,
    });
    Ok(out)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    /// Where each name was first used in an expression, for error reporting.
    uses: Vec<(String, usize, usize)>,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if t.tok != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error_here(&self, message: impl Into<String>) -> Error {
        let t = self.peek();
        syntax(t.line, t.column, message)
    }

    fn describe(t: &Tok) -> String {
        match t {
            Tok::Ident(s) => format!("'{s}'"),
            Tok::Num(q) => format!("'{q}'"),
            Tok::Sym(c) => format!("'{c}'"),
            Tok::Sep => "end of statement".into(),
            Tok::End => "end of input".into(),
        }
    }

    fn expect_sym(&mut self, c: char) -> Result<()> {
        if self.peek().tok == Tok::Sym(c) {
            self.next();
            Ok(())
        } else {
            Err(self.error_here(format!("expected '{c}', found {}", Self::describe(&self.peek().tok))))
        }
    }

    fn ident(&mut self) -> Result<String> {
        match self.peek().tok.clone() {
            Tok::Ident(s) if !matches!(s.as_str(), "vars" | "params" | "param" | "with") => {
                self.next();
                Ok(s)
            }
            t => Err(self.error_here(format!("expected a name, found {}", Self::describe(&t)))),
        }
    }

    fn at_statement_end(&self) -> bool {
        matches!(self.peek().tok, Tok::Sep | Tok::End)
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Sym('+') => {
                    self.next();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Tok::Sym('-') => {
                    self.next();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.unary()?;
        loop {
            match self.peek().tok {
                Tok::Sym('*') => {
                    self.next();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.unary()?));
                }
                Tok::Sym('/') => {
                    self.next();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.unary()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.peek().tok == Tok::Sym('-') {
            self.next();
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek().tok != Tok::Sym('^') {
            return Ok(base);
        }
        self.next();
        let negative = if self.peek().tok == Tok::Sym('-') {
            self.next();
            true
        } else {
            false
        };
        match self.peek().tok.clone() {
            Tok::Num(q) if q.is_integer() => {
                let e: i32 = q
                    .to_integer()
                    .try_into()
                    .map_err(|_| self.error_here("exponent is too large"))?;
                self.next();
                Ok(Expr::Pow(Box::new(base), if negative { -e } else { e }))
            }
            t => Err(self.error_here(format!("expected an integer exponent, found {}", Self::describe(&t)))),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Num(q) => {
                self.next();
                Ok(Expr::Num(q))
            }
            Tok::Ident(_) => {
                let name = self.ident()?;
                self.uses.push((name.clone(), t.line, t.column));
                Ok(Expr::Name(name))
            }
            Tok::Sym('(') => {
                self.next();
                let e = self.expr()?;
                self.expect_sym(')')?;
                Ok(e)
            }
            other => Err(self.error_here(format!("expected an expression, found {}", Self::describe(&other)))),
        }
    }

    fn signed_number(&mut self) -> Result<Rational> {
        let negative = if self.peek().tok == Tok::Sym('-') {
            self.next();
            true
        } else {
            false
        };
        match self.peek().tok.clone() {
            Tok::Num(q) => {
                self.next();
                Ok(if negative { -q } else { q })
            }
            t => Err(self.error_here(format!("expected a number, found {}", Self::describe(&t)))),
        }
    }

    /// `name'` on the left of an equation.
    fn primed(&mut self) -> Result<String> {
        let name = self.ident()?;
        self.expect_sym('\'')?;
        Ok(name)
    }
}

/// Parse a whole system description.
pub fn parse_system(text: &str) -> Result<SystemSpec> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        uses: Vec::new(),
    };
    let mut spec = SystemSpec {
        vars: vec![],
        params: vec![],
        diff_params: vec![],
        equations: vec![],
    };
    let mut declared: HashSet<String> = HashSet::new();
    let mut declare = |name: String, t: &Token| -> Result<String> {
        if !declared.insert(name.clone()) {
            return Err(syntax(t.line, t.column, format!("{name} is declared twice")));
        }
        Ok(name)
    };
    loop {
        while p.peek().tok == Tok::Sep {
            p.next();
        }
        let t = p.peek().clone();
        match &t.tok {
            Tok::End => break,
            Tok::Ident(k) if k == "vars" => {
                p.next();
                loop {
                    let at = p.peek().clone();
                    let name = p.ident()?;
                    spec.vars.push(declare(name, &at)?);
                    if p.peek().tok != Tok::Sym(',') {
                        break;
                    }
                    p.next();
                }
            }
            Tok::Ident(k) if k == "params" => {
                p.next();
                loop {
                    let at = p.peek().clone();
                    let name = declare(p.ident()?, &at)?;
                    let value = if p.peek().tok == Tok::Sym('=') {
                        p.next();
                        Some(p.signed_number()?)
                    } else {
                        None
                    };
                    spec.params.push((name, value));
                    if p.peek().tok != Tok::Sym(',') {
                        break;
                    }
                    p.next();
                }
            }
            Tok::Ident(k) if k == "param" => {
                p.next();
                let at = p.peek().clone();
                let name = declare(p.ident()?, &at)?;
                match p.peek().tok.clone() {
                    Tok::Ident(w) if w == "with" => {
                        p.next();
                    }
                    other => return Err(p.error_here(format!("expected 'with', found {}", Parser::describe(&other)))),
                }
                let at = p.peek().clone();
                let lhs = p.primed()?;
                if lhs != name {
                    return Err(syntax(at.line, at.column, format!("expected {name}', found {lhs}'")));
                }
                p.expect_sym('=')?;
                spec.diff_params.push((name, p.expr()?));
            }
            Tok::Ident(_) => {
                let name = p.primed()?;
                if spec.equations.iter().any(|(n, _)| *n == name) {
                    return Err(Error::DuplicateEquation(name));
                }
                if !spec.vars.contains(&name) {
                    return Err(Error::UndeclaredName {
                        name,
                        line: t.line,
                        column: t.column,
                    });
                }
                p.expect_sym('=')?;
                spec.equations.push((name, p.expr()?));
            }
            other => return Err(p.error_here(format!("expected a statement, found {}", Parser::describe(other)))),
        }
        if !p.at_statement_end() {
            return Err(p.error_here(format!("unexpected {}", Parser::describe(&p.peek().tok))));
        }
    }
    for (name, line, column) in &p.uses {
        if !declared.contains(name) {
            return Err(Error::UndeclaredName {
                name: name.clone(),
                line: *line,
                column: *column,
            });
        }
    }
    for v in &spec.vars {
        if !spec.equations.iter().any(|(n, _)| n == v) {
            return Err(Error::MissingEquation(v.clone()));
        }
    }
    Ok(spec)
}

/// Parse a lone expression (for command-line arguments).
pub fn parse_expr(text: &str) -> Result<Expr> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
        uses: Vec::new(),
    };
    let e = p.expr()?;
    if p.peek().tok != Tok::End {
        return Err(p.error_here(format!("unexpected {}", Parser::describe(&p.peek().tok))));
    }
    Ok(e)
}

fn precedence(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => 1,
        Expr::Mul(..) | Expr::Div(..) => 2,
        Expr::Neg(_) => 3,
        Expr::Pow(..) => 4,
        Expr::Num(_) | Expr::Name(_) => 5,
    }
}

fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |e: &Expr, min: u8| {
            if precedence(e) < min {
                format!("({e})")
            } else {
                e.to_string()
            }
        };
        match self {
            // Literals are nonnegative when parsed; a negative one prints as negation.
            Expr::Num(q) if q.is_negative() => write!(f, "-{}", fmt_rational(&-q)),
            Expr::Num(q) => f.write_str(&fmt_rational(q)),
            Expr::Name(n) => f.write_str(n),
            Expr::Neg(e) => write!(f, "-{}", wrap(e, 4)),
            Expr::Add(a, b) => write!(f, "{} + {}", wrap(a, 1), wrap(b, 2)),
            Expr::Sub(a, b) => write!(f, "{} - {}", wrap(a, 1), wrap(b, 2)),
            Expr::Mul(a, b) => write!(f, "{} * {}", wrap(a, 2), wrap(b, 3)),
            Expr::Div(a, b) => write!(f, "{} / {}", wrap(a, 2), wrap(b, 3)),
            Expr::Pow(a, e) => write!(f, "{}^{}", wrap(a, 5), e),
        }
    }
}

impl fmt::Display for SystemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut lines = Vec::new();
        if !self.vars.is_empty() {
            lines.push(format!("vars {}", self.vars.join(", ")));
        }
        if !self.params.is_empty() {
            let ps: Vec<String> = self
                .params
                .iter()
                .map(|(n, v)| match v {
                    Some(q) if q.is_negative() => format!("{n} = -{}", fmt_rational(&-q)),
                    Some(q) => format!("{n} = {}", fmt_rational(q)),
                    None => n.clone(),
                })
                .collect();
            lines.push(format!("params {}", ps.join(", ")));
        }
        for (n, e) in &self.diff_params {
            lines.push(format!("param {n} with {n}' = {e}"));
        }
        for (n, e) in &self.equations {
            lines.push(format!("{n}' = {e}"));
        }
        f.write_str(&lines.join("\n"))
    }
}

impl Expr {
    /// Evaluate with the given name bindings; unbound names become symbols.
    pub fn eval(&self, bound: &HashMap<String, Rational>) -> Result<RatFunc> {
        Ok(match self {
            Expr::Num(q) => RatFunc::from_rational(q.clone()),
            Expr::Name(n) => match bound.get(n) {
                Some(q) => RatFunc::from_rational(q.clone()),
                None => RatFunc::var(n),
            },
            Expr::Neg(e) => -e.eval(bound)?,
            Expr::Add(a, b) => &a.eval(bound)? + &b.eval(bound)?,
            Expr::Sub(a, b) => &a.eval(bound)? - &b.eval(bound)?,
            Expr::Mul(a, b) => &a.eval(bound)? * &b.eval(bound)?,
            Expr::Div(a, b) => a.eval(bound)?.checked_div(&b.eval(bound)?)?,
            Expr::Pow(a, e) => a.eval(bound)?.pow(*e)?,
        })
    }

    pub fn names(&self, out: &mut Vec<String>) {
        match self {
            Expr::Num(_) => {}
            Expr::Name(n) => {
                if !out.contains(n) {
                    out.push(n.clone())
                }
            }
            Expr::Neg(e) | Expr::Pow(e, _) => e.names(out),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
                a.names(out);
                b.names(out);
            }
        }
    }
}

impl SystemSpec {
    /// Parameter values from the text, overridden by `sets`. Unknown names in `sets` are rejected.
    pub fn bindings(&self, sets: &[(String, Rational)]) -> Result<HashMap<String, Rational>> {
        let mut out: HashMap<String, Rational> = self
            .params
            .iter()
            .filter_map(|(n, v)| v.clone().map(|q| (n.clone(), q)))
            .collect();
        for (k, v) in sets {
            if !self.params.iter().any(|(n, _)| n == k) {
                return Err(Error::InvalidArgument(format!("--set {k}: no parameter named {k}")));
            }
            out.insert(k.clone(), v.clone());
        }
        Ok(out)
    }

    /// Build the vector field, specializing bound parameters.
    pub fn to_field(&self, sets: &[(String, Rational)]) -> Result<VectorField> {
        let bound = self.bindings(sets)?;
        let vars: Vec<Symbol> = self.vars.iter().map(|v| Symbol::new(v)).collect();
        let mut components = Vec::new();
        for v in &self.vars {
            let (_, e) = self.equations.iter().find(|(n, _)| n == v).ok_or_else(|| Error::MissingEquation(v.clone()))?;
            components.push(e.eval(&bound)?);
        }
        let mut diff_params = Vec::new();
        for (name, e) in &self.diff_params {
            let z = Symbol::new(name);
            let rhs = e.eval(&bound)?;
            if vars.iter().any(|v| rhs.contains(*v)) {
                return Err(Error::InvalidArgument(format!("{name}' must not involve the variables")));
            }
            let law = if !rhs.contains(z) {
                DerivativeLaw::Const(rhs.to_scalar(&[]).expect("no variables"))
            } else {
                let c = rhs.checked_div(&RatFunc::symbol(z))?;
                if c.contains(z) {
                    return Err(Error::InvalidArgument(format!(
                        "{name}' must be c*{name} or a constant, got {e}"
                    )));
                }
                DerivativeLaw::Log(c.to_scalar(&[]).expect("no variables"))
            };
            diff_params.push(DiffParam { name: z, law });
        }
        VectorField::new(vars, components, diff_params)
    }
}

/// `k=v` with v a rational or decimal literal, optionally negative.
pub fn parse_assignment(s: &str) -> Result<(String, Rational)> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| Error::InvalidArgument(format!("expected name=value, got {s}")))?;
    Ok((k.trim().to_string(), parse_number(v.trim())?))
}

pub fn parse_number(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidArgument(format!("not a number: {s}"));
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let toks = lex(body).map_err(|_| bad())?;
    match toks.as_slice() {
        [Token { tok: Tok::Num(q), .. }, Token { tok: Tok::End, .. }] => Ok(if neg { -q.clone() } else { q.clone() }),
        _ => Err(bad()),
    }
}

/// A Scalar from an expression free of variables (e.g. "2", "b", "b + 1/2").
pub fn parse_scalar(s: &str) -> Result<Scalar> {
    let e = parse_expr(s)?;
    let r = e.eval(&HashMap::new())?;
    r.to_scalar(&[]).ok_or_else(|| Error::InvalidArgument(format!("not a scalar: {s}")))
}
