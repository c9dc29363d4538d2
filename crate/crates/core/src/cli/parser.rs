//! Recursive-descent parser for the system DSL.
//!
//! ```text
//! file := decl* ;
//! decl := "indep" ids ";" | "dep" ids ";" | "const" ids ";"
//!       | "func" ID "(" exprs ")" ";" | "eq" ID ":" jet "=" expr ";"
//!       | "let" ID "=" expr ";" | "rule" pd-call "=" expr ";" ;
//! ```

use num_bigint::BigInt;
use num_traits::ToPrimitive;

use super::lexer::{tokenize, Tok, Token};
use crate::error::{Error, Result};
use crate::expr::{atom_partial, sym, Atom, Elementary, Expr, Sym, Q};
use crate::jet::{total_derivative, MultiIndex};
use crate::systems::{Constraint, DifferentialSystem, Equation};
use crate::variational::LinearDiffOperator;

/// Declared names visible to expressions.
#[derive(Clone, Debug, Default)]
pub struct Scope {
    pub indeps: Vec<Sym>,
    pub deps: Vec<Sym>,
    pub consts: Vec<Sym>,
    /// Opaque functions with their declared argument expressions.
    pub funcs: Vec<(Sym, Vec<Expr>)>,
    pub lets: Vec<(Sym, Expr)>,
}

impl Scope {
    fn declared(&self, name: &str) -> bool {
        self.indeps.iter().any(|s| &**s == name)
            || self.deps.iter().any(|s| &**s == name)
            || self.consts.iter().any(|s| &**s == name)
            || self.funcs.iter().any(|(s, _)| &**s == name)
            || self.lets.iter().any(|(s, _)| &**s == name)
            || RESERVED.contains(&name)
    }

    fn func(&self, name: &str) -> Option<&Vec<Expr>> {
        self.funcs.iter().find(|(s, _)| &**s == name).map(|(_, a)| a)
    }
}

const RESERVED: [&str; 20] = [
    "indep", "dep", "const", "func", "eq", "let", "rule", "exp", "sin", "cos", "sinh", "cosh", "W",
    "D", "pd", "diff", "sqrt", "claim", "item", "expect",
];

fn is_placeholder(name: &str) -> bool {
    name == "_" || (name.starts_with('_') && name.len() > 1 && name[1..].chars().all(|c| c.is_ascii_digit()))
}

pub(crate) struct Parser {
    toks: Vec<Token>,
    pos: usize,
    pub scope: Scope,
}

pub(crate) fn perr<T>(t: &Token, msg: impl Into<String>) -> Result<T> {
    Err(Error::Parse { line: t.line, col: t.col, msg: msg.into() })
}

impl Parser {
    pub fn new(text: &str, scope: Scope) -> Result<Self> {
        Ok(Parser { toks: tokenize(text)?, pos: 0, scope })
    }

    pub fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    pub fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    pub fn at_eof(&self) -> bool {
        self.peek().tok == Tok::Eof
    }

    pub fn is_punct(&self, c: char) -> bool {
        self.peek().tok == Tok::Punct(c)
    }

    pub fn eat_punct(&mut self, c: char) -> bool {
        if self.is_punct(c) {
            self.next();
            true
        } else {
            false
        }
    }

    pub fn expect_punct(&mut self, c: char) -> Result<()> {
        if self.eat_punct(c) {
            Ok(())
        } else {
            let t = self.peek().clone();
            perr(&t, format!("expected '{c}', found {}", describe(&t.tok)))
        }
    }

    pub fn is_ident(&self, s: &str) -> bool {
        matches!(&self.peek().tok, Tok::Ident(x) if x == s)
    }

    pub fn ident(&mut self) -> Result<(String, Token)> {
        let t = self.next();
        match &t.tok {
            Tok::Ident(s) => Ok((s.clone(), t.clone())),
            other => perr(&t, format!("expected a name, found {}", describe(other))),
        }
    }

    /// A dashed word such as `find-cosymmetry` or `ex1-claw-2`, glued from
    /// adjacent name, number and `-` tokens.
    pub fn word(&mut self) -> Result<(String, Token)> {
        let first = self.next();
        let mut out = match &first.tok {
            Tok::Ident(s) | Tok::Num(s) => s.clone(),
            other => return perr(&first, format!("expected a name, found {}", describe(other))),
        };
        let mut end = first.col + out.chars().count();
        loop {
            let t = self.peek();
            if t.line != first.line || t.col != end {
                break;
            }
            let piece = match &t.tok {
                Tok::Ident(s) | Tok::Num(s) => s.clone(),
                Tok::Punct('-') => "-".to_string(),
                _ => break,
            };
            end += piece.chars().count();
            out.push_str(&piece);
            self.next();
        }
        Ok((out, first))
    }

    pub fn string(&mut self) -> Result<String> {
        let t = self.next();
        match &t.tok {
            Tok::Str(s) => Ok(s.clone()),
            other => perr(&t, format!("expected a quoted string, found {}", describe(other))),
        }
    }

    fn new_name(&mut self) -> Result<Sym> {
        let (name, t) = self.ident()?;
        if self.scope.declared(&name) || is_placeholder(&name) {
            return perr(&t, format!("{name} is already declared or reserved"));
        }
        Ok(sym(&name))
    }

    fn names(&mut self) -> Result<Vec<Sym>> {
        let mut out = vec![self.new_name()?];
        while self.eat_punct(',') {
            out.push(self.new_name()?);
        }
        Ok(out)
    }

    /// Comma-separated expressions up to (not including) a closing token.
    pub fn exprs(&mut self) -> Result<Vec<Expr>> {
        let mut out = vec![self.expr()?];
        while self.eat_punct(',') {
            out.push(self.expr()?);
        }
        Ok(out)
    }

    pub fn expr(&mut self) -> Result<Expr> {
        let mut acc = self.term()?;
        loop {
            if self.eat_punct('+') {
                acc = &acc + &self.term()?;
            } else if self.eat_punct('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.unary()?;
        loop {
            if self.eat_punct('*') {
                acc = &acc * &self.unary()?;
            } else if self.is_punct('/') {
                let t = self.next();
                let d = self.unary()?;
                acc = match acc.checked_div(&d) {
                    Ok(v) => v,
                    Err(_) => return perr(&t, "division by zero"),
                };
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.eat_punct('-') {
            return Ok(-self.unary()?);
        }
        if self.eat_punct('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.primary()?;
        if !self.is_punct('^') {
            return Ok(base);
        }
        let t = self.next();
        let ex = self.unary()?;
        let Some(q) = ex.as_rational() else {
            return perr(&t, "exponent must be a rational number");
        };
        let r = if q.is_integer() {
            match q.to_integer().to_i64() {
                Some(n) => base.pow(n),
                None => return perr(&t, "exponent too large"),
            }
        } else {
            base.pow_rational(&q)
        };
        r.or_else(|e| perr(&t, e.to_string()))
    }

    fn number(t: &Token, lit: &str) -> Result<Expr> {
        let (int, frac) = lit.split_once('.').unwrap_or((lit, ""));
        let digits = format!("{int}{frac}");
        let Ok(n) = digits.parse::<BigInt>() else {
            return perr(t, format!("malformed number {lit}"));
        };
        let d = num_traits::pow(BigInt::from(10), frac.len());
        Ok(Expr::q(Q::new(n, d)))
    }

    fn primary(&mut self) -> Result<Expr> {
        let t = self.next();
        match &t.tok {
            Tok::Num(lit) => Self::number(&t, lit),
            Tok::Punct('(') => {
                let e = self.expr()?;
                self.expect_punct(')')?;
                Ok(e)
            }
            Tok::Ident(name) => {
                let name = name.clone();
                if self.is_punct('[') {
                    return self.jet(&t, &name);
                }
                if self.is_punct('(') {
                    return self.call(&t, &name);
                }
                self.name(&t, &name)
            }
            other => perr(&t, format!("expected an expression, found {}", describe(other))),
        }
    }

    fn name(&mut self, t: &Token, name: &str) -> Result<Expr> {
        let s = &self.scope;
        if s.indeps.iter().any(|x| &**x == name) {
            Ok(Expr::indep(name))
        } else if s.deps.iter().any(|x| &**x == name) || is_placeholder(name) {
            Ok(Expr::jet(name, MultiIndex::empty()))
        } else if s.consts.iter().any(|x| &**x == name) {
            Ok(Expr::constant(name))
        } else if let Some(args) = s.func(name) {
            Ok(Expr::opaque(name, vec![], args.clone()))
        } else if let Some((_, e)) = s.lets.iter().find(|(x, _)| &**x == name) {
            Ok(e.clone())
        } else {
            perr(t, format!("undeclared identifier {name}"))
        }
    }

    fn jet(&mut self, t: &Token, name: &str) -> Result<Expr> {
        if !self.scope.deps.iter().any(|x| &**x == name) && !is_placeholder(name) {
            return perr(t, format!("{name} is not a dependent variable"));
        }
        self.expect_punct('[')?;
        let mut vars = Vec::new();
        if !self.is_punct(']') {
            loop {
                let (v, vt) = self.ident()?;
                if !self.scope.indeps.iter().any(|x| **x == *v) {
                    return perr(&vt, format!("{v} is not an independent variable"));
                }
                vars.push(v);
                if !self.eat_punct(',') {
                    break;
                }
            }
        }
        self.expect_punct(']')?;
        Ok(Expr::jet(name, MultiIndex::new(vars.iter().map(String::as_str))))
    }

    fn call(&mut self, t: &Token, name: &str) -> Result<Expr> {
        self.expect_punct('(')?;
        if let Some(f) = Elementary::from_name(name) {
            let a = self.expr()?;
            self.expect_punct(')')?;
            return Ok(Expr::elem(f, a));
        }
        match name {
            "sqrt" => {
                let a = self.expr()?;
                self.expect_punct(')')?;
                Expr::root(a, 2).or_else(|e| perr(t, e.to_string()))
            }
            "D" => {
                let e = self.expr()?;
                self.expect_punct(',')?;
                let (x, xt) = self.ident()?;
                if !self.scope.indeps.iter().any(|v| **v == *x) {
                    return perr(&xt, format!("{x} is not an independent variable"));
                }
                let mut n = 1;
                if self.eat_punct(',') {
                    let nt = self.next();
                    n = match &nt.tok {
                        Tok::Num(s) => match s.parse::<usize>() {
                            Ok(k) => k,
                            Err(_) => return perr(&nt, "derivative count must be a whole number"),
                        },
                        _ => return perr(&nt, "derivative count must be a whole number"),
                    };
                }
                self.expect_punct(')')?;
                let mut out = e;
                for _ in 0..n {
                    out = total_derivative(&out, &x);
                }
                Ok(out)
            }
            "diff" => {
                let e = self.expr()?;
                self.expect_punct(',')?;
                let at = self.peek().clone();
                let a = self.expr()?;
                self.expect_punct(')')?;
                match a.as_gen() {
                    Some(g) => Ok(atom_partial(&e, g)),
                    None => perr(&at, "diff needs a single variable or atom"),
                }
            }
            "pd" => {
                let (f, ft) = self.ident()?;
                let Some(defaults) = self.scope.func(&f).cloned() else {
                    return perr(&ft, format!("{f} is not a declared function"));
                };
                let mut slots = Vec::new();
                while self.eat_punct(',') {
                    let kt = self.next();
                    let k = match &kt.tok {
                        Tok::Num(s) => s.parse::<usize>().ok(),
                        _ => None,
                    };
                    match k {
                        Some(k) if k >= 1 && k <= defaults.len() => slots.push((k - 1) as u8),
                        _ => return perr(&kt, format!("slot must be between 1 and {}", defaults.len())),
                    }
                }
                self.expect_punct(')')?;
                if slots.is_empty() {
                    return perr(&ft, "pd needs at least one slot");
                }
                let args = if self.is_punct('(') {
                    let at = self.peek().clone();
                    self.next();
                    let args = self.exprs()?;
                    self.expect_punct(')')?;
                    if args.len() != defaults.len() {
                        return perr(&at, format!("{f} takes {} arguments", defaults.len()));
                    }
                    args
                } else {
                    defaults
                };
                Ok(Expr::opaque(&f, slots, args))
            }
            _ => {
                let Some(defaults) = self.scope.func(name).cloned() else {
                    return perr(t, format!("unknown function {name}"));
                };
                let args = self.exprs()?;
                self.expect_punct(')')?;
                if args.len() != defaults.len() {
                    return perr(t, format!("{name} takes {} arguments", defaults.len()));
                }
                Ok(Expr::opaque(name, vec![], args))
            }
        }
    }

    /// Parses one declaration if the next token starts one.
    pub fn decl(&mut self, file: &mut SystemDecls) -> Result<bool> {
        let t = self.peek().clone();
        let Tok::Ident(kw) = &t.tok else { return Ok(false) };
        match kw.as_str() {
            "indep" | "dep" | "const" => {
                let kw = kw.clone();
                self.next();
                let names = self.names()?;
                self.expect_punct(';')?;
                match kw.as_str() {
                    "indep" => self.scope.indeps.extend(names),
                    "dep" => self.scope.deps.extend(names),
                    _ => self.scope.consts.extend(names),
                }
            }
            "func" => {
                self.next();
                let name = self.new_name()?;
                self.expect_punct('(')?;
                let args = self.exprs()?;
                self.expect_punct(')')?;
                self.expect_punct(';')?;
                if args.len() > u8::MAX as usize {
                    return perr(&t, "too many arguments");
                }
                self.scope.funcs.push((name, args));
            }
            "let" => {
                self.next();
                let name = self.new_name()?;
                self.expect_punct('=')?;
                let e = self.expr()?;
                self.expect_punct(';')?;
                self.scope.lets.push((name, e));
            }
            "eq" => {
                self.next();
                let (name, nt) = self.ident()?;
                if file.eqs.iter().any(|e| e.name == name) {
                    return perr(&nt, format!("equation {name} defined twice"));
                }
                self.expect_punct(':')?;
                let lt = self.peek().clone();
                let lhs = self.expr()?;
                self.expect_punct('=')?;
                let rhs = self.expr()?;
                self.expect_punct(';')?;
                let lead = match lhs.as_gen().map(|g| g.atom().clone()) {
                    Some(Atom::Jet { dep, index }) if self.scope.deps.contains(&dep) => (dep, index),
                    _ => {
                        return perr(
                            &lt,
                            format!(
                                "implicit equation {name}: the left side must be a single derivative such as u[t], \
                                 found {lhs}"
                            ),
                        )
                    }
                };
                file.eqs.push(Equation { name, dep: lead.0, lead: lead.1, rhs });
                if let Err(e) = file.build(&self.scope) {
                    return perr(&lt, e.to_string());
                }
            }
            "rule" => {
                self.next();
                let lt = self.peek().clone();
                let lhs = self.expr()?;
                self.expect_punct('=')?;
                let rhs = self.expr()?;
                self.expect_punct(';')?;
                let c = match lhs.as_gen().map(|g| g.atom().clone()) {
                    Some(Atom::Opaque { name, slots, args }) if !slots.is_empty() => {
                        Constraint { func: name, args, slots, rhs }
                    }
                    _ => return perr(&lt, "a rule needs a partial pd(F, k, ...) on the left"),
                };
                file.rules.push(c);
                if let Err(e) = file.build(&self.scope) {
                    return perr(&lt, e.to_string());
                }
            }
            _ => return Ok(false),
        }
        Ok(true)
    }
}

pub(crate) fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("'{s}'"),
        Tok::Num(s) => format!("number {s}"),
        Tok::Str(s) => format!("string \"{s}\""),
        Tok::Punct(c) => format!("'{c}'"),
        Tok::Eof => "end of input".into(),
    }
}

/// Equations and rules collected while parsing.
#[derive(Clone, Debug, Default)]
pub struct SystemDecls {
    pub eqs: Vec<Equation>,
    pub rules: Vec<Constraint>,
}

impl SystemDecls {
    fn build(&self, scope: &Scope) -> Result<DifferentialSystem> {
        DifferentialSystem::new(scope.indeps.clone(), scope.deps.clone(), self.eqs.clone(), self.rules.clone())
    }
}

/// A parsed system file.
#[derive(Clone, Debug)]
pub struct SystemFile {
    pub scope: Scope,
    pub decls: SystemDecls,
    system: DifferentialSystem,
}

impl SystemFile {
    pub(crate) fn from_parts(scope: Scope, decls: SystemDecls) -> Result<Self> {
        let system = decls.build(&scope)?;
        Ok(SystemFile { scope, decls, system })
    }

    pub fn system(&self) -> &DifferentialSystem {
        &self.system
    }

    /// Value of a `let` binding.
    pub fn binding(&self, name: &str) -> Option<&Expr> {
        self.scope.lets.iter().find(|(s, _)| &**s == name).map(|(_, e)| e)
    }

    pub fn parse_expr(&self, text: &str) -> Result<Expr> {
        let mut p = Parser::new(text, self.scope.clone())?;
        let e = p.expr()?;
        if !p.at_eof() {
            let t = p.peek().clone();
            return perr(&t, format!("unexpected {}", describe(&t.tok)));
        }
        Ok(e)
    }

    /// Comma-separated expressions.
    pub fn parse_exprs(&self, text: &str) -> Result<Vec<Expr>> {
        let mut p = Parser::new(text, self.scope.clone())?;
        let es = p.exprs()?;
        if !p.at_eof() {
            let t = p.peek().clone();
            return perr(&t, format!("unexpected {}", describe(&t.tok)));
        }
        Ok(es)
    }

    /// Operator with one row per dependent variable, read off expressions
    /// linear in the placeholders `_` (single equation) or `_1.._n`.
    pub fn operator(&self, rows: &[Expr]) -> Result<LinearDiffOperator> {
        let n = self.system.equations().len();
        let holders: Vec<Sym> = if n == 1 && rows.iter().all(|r| !r.jets().iter().any(|(d, _)| &**d == "_1")) {
            vec![sym("_")]
        } else {
            (1..=n).map(|k| sym(&format!("_{k}"))).collect()
        };
        LinearDiffOperator::from_linear_exprs(rows, &holders)
    }
}

/// Parses a complete system file.
pub fn parse_system(text: &str) -> Result<SystemFile> {
    let mut p = Parser::new(text, Scope::default())?;
    let mut decls = SystemDecls::default();
    while !p.at_eof() {
        if !p.decl(&mut decls)? {
            let t = p.peek().clone();
            return perr(&t, format!("expected a declaration, found {}", describe(&t.tok)));
        }
    }
    SystemFile::from_parts(p.scope, decls)
}

/// Rational value of a literal expression, for flags such as exponents.
pub fn rational_literal(e: &Expr) -> Option<Q> {
    e.as_rational()
}
