//! Expressions over jet coordinates with exact rational arithmetic.
//!
//! Every [`Expr`] is kept in canonical form: a reduced fraction of
//! polynomials whose generators are interned atoms.

pub mod atom;
pub mod derive;
pub mod display;
pub mod frac;
pub mod poly;
pub mod subst;
pub mod zero;

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::atomic::{AtomicU32, Ordering as AtomicOrdering};
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed};

pub use atom::{sym, Atom, Elementary, Gen, Sym};
pub use derive::{antiderivative, atom_partial, derive_with};
pub use frac::Frac;
pub use poly::{q_frac, q_int, Mono, Poly, Q};
pub use subst::{map_gens, substitute};
pub use zero::{is_zero, ZeroVerdict};

use crate::error::{Error, Result};
use crate::jet::MultiIndex;

static EXPANSION_CAP: AtomicU32 = AtomicU32::new(12);

/// Largest exponent to which a multi-term expression is expanded.
pub fn expansion_cap() -> u32 {
    EXPANSION_CAP.load(AtomicOrdering::Relaxed)
}

pub fn set_expansion_cap(cap: u32) {
    EXPANSION_CAP.store(cap, AtomicOrdering::Relaxed);
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Expr(Arc<Frac>);

impl Expr {
    pub fn from_frac(f: Frac) -> Expr {
        Expr(Arc::new(f))
    }

    pub fn frac(&self) -> &Frac {
        &self.0
    }

    pub fn zero() -> Expr {
        Expr::from_frac(Frac::zero())
    }

    pub fn one() -> Expr {
        Expr::int(1)
    }

    pub fn int(n: i64) -> Expr {
        Expr::from_frac(Frac::constant(q_int(n)))
    }

    pub fn rational(n: i64, d: i64) -> Expr {
        Expr::from_frac(Frac::constant(q_frac(n, d)))
    }

    pub fn q(c: Q) -> Expr {
        Expr::from_frac(Frac::constant(c))
    }

    pub fn gen(g: Gen) -> Expr {
        Expr::from_frac(Frac::gen(g))
    }

    pub fn atom(a: Atom) -> Expr {
        Expr::gen(Gen::intern(a))
    }

    pub fn indep(name: &str) -> Expr {
        Expr::atom(Atom::Indep(sym(name)))
    }

    pub fn constant(name: &str) -> Expr {
        Expr::atom(Atom::Const(sym(name)))
    }

    pub fn jet(dep: &str, index: MultiIndex) -> Expr {
        Expr::atom(Atom::jet(dep, index))
    }

    /// Jet from a list of variable names, e.g. `Expr::u("u", &["x", "x"])`.
    pub fn u(dep: &str, vars: &[&str]) -> Expr {
        Expr::jet(dep, MultiIndex::new(vars.iter().copied()))
    }

    /// Opaque function atom; `slots` are 0-based and get sorted.
    pub fn opaque(name: &str, mut slots: Vec<u8>, args: Vec<Expr>) -> Expr {
        slots.sort_unstable();
        Expr::atom(Atom::Opaque { name: sym(name), slots, args })
    }

    pub fn elem(func: Elementary, arg: Expr) -> Expr {
        if arg.is_zero() {
            return match func {
                Elementary::Exp | Elementary::Cos | Elementary::Cosh => Expr::one(),
                Elementary::Sin | Elementary::Sinh | Elementary::LambertW => Expr::zero(),
            };
        }
        let negative = arg
            .frac()
            .num
            .leading()
            .map(|(_, c)| c.is_negative())
            .unwrap_or(false);
        match func {
            Elementary::Sin | Elementary::Sinh if negative => {
                -Expr::atom(Atom::Elem { func, arg: -arg })
            }
            Elementary::Cos | Elementary::Cosh if negative => Expr::atom(Atom::Elem { func, arg: -arg }),
            _ => Expr::atom(Atom::Elem { func, arg }),
        }
    }

    pub fn exp(arg: Expr) -> Expr {
        Expr::elem(Elementary::Exp, arg)
    }

    /// `base^(1/q)`.
    pub fn root(base: Expr, q: u32) -> Result<Expr> {
        if q == 0 {
            return Err(Error::ZeroDenominator);
        }
        if q == 1 || base.is_zero() || base.as_rational().is_some_and(|c| c.is_one()) {
            return Ok(base);
        }
        Ok(Expr::atom(Atom::Root { base, q }))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.as_rational().is_some_and(|c| c.is_one())
    }

    pub fn as_rational(&self) -> Option<Q> {
        self.0.as_constant()
    }

    /// If the expression is a single generator, that generator.
    pub fn as_gen(&self) -> Option<Gen> {
        let f = self.frac();
        if !f.has_unit_den() || f.num.terms.len() != 1 {
            return None;
        }
        let (m, c) = &f.num.terms[0];
        if c.is_one() && m.0.len() == 1 && m.0[0].1 == 1 {
            Some(m.0[0].0)
        } else {
            None
        }
    }

    /// Number of numerator terms of the canonical form.
    pub fn term_count(&self) -> usize {
        self.0.num.len()
    }

    pub fn scale(&self, c: &Q) -> Expr {
        Expr::from_frac(self.0.scale(c))
    }

    pub fn scale_int(&self, n: i64) -> Expr {
        self.scale(&q_int(n))
    }

    pub fn checked_div(&self, other: &Expr) -> Result<Expr> {
        let inv = other.0.recip().ok_or(Error::ZeroDenominator)?;
        Ok(Expr::from_frac(self.0.mul(&inv)))
    }

    pub fn recip(&self) -> Result<Expr> {
        self.0.recip().map(Expr::from_frac).ok_or(Error::ZeroDenominator)
    }

    /// Integer power. Expanding a multi-term expression above the
    /// expansion cap is refused.
    pub fn pow(&self, n: i64) -> Result<Expr> {
        if n == 0 {
            return Ok(Expr::one());
        }
        let e = n.unsigned_abs() as u32;
        let f = self.frac();
        if e > expansion_cap() && f.num.len() > 1 {
            return Err(Error::ExpansionCap { exponent: e, cap: expansion_cap() });
        }
        if n < 0 {
            let inv = self.recip()?;
            Ok(Expr::from_frac(inv.frac().pow(e)))
        } else {
            Ok(Expr::from_frac(f.pow(e)))
        }
    }

    /// `self^(p/q)` for a rational exponent.
    pub fn pow_rational(&self, exp: &Q) -> Result<Expr> {
        if exp.is_integer() {
            let n: i64 = exp.to_integer().try_into().map_err(|_| Error::ExpansionCap {
                exponent: u32::MAX,
                cap: expansion_cap(),
            })?;
            return self.pow(n);
        }
        let q: u32 = exp
            .denom()
            .try_into()
            .map_err(|_| Error::Domain("root degree too large".into()))?;
        let p: i64 = exp
            .numer()
            .try_into()
            .map_err(|_| Error::Domain("exponent too large".into()))?;
        Expr::root(self.clone(), q)?.pow(p)
    }

    /// Every generator at the top level of the canonical form.
    pub fn gens(&self) -> Vec<Gen> {
        self.0.gens()
    }

    /// Every generator, including those nested inside atom arguments.
    pub fn gens_deep(&self) -> BTreeSet<Gen> {
        let mut out = BTreeSet::new();
        collect_deep(self, &mut out);
        out
    }

    /// Jet coordinates occurring anywhere in the expression.
    pub fn jets(&self) -> BTreeSet<(Sym, MultiIndex)> {
        self.gens_deep()
            .into_iter()
            .filter_map(|g| match g.atom() {
                Atom::Jet { dep, index } => Some((dep.clone(), index.clone())),
                _ => None,
            })
            .collect()
    }

    /// True if some generator (at any depth) satisfies `pred`.
    pub fn any_gen(&self, pred: &dyn Fn(Gen) -> bool) -> bool {
        self.gens_deep().into_iter().any(pred)
    }

    pub fn depends_on(&self, g: Gen) -> bool {
        self.gens_deep().contains(&g)
    }

    /// Deterministic order independent of interning order.
    pub fn display_cmp(&self, other: &Expr) -> Ordering {
        if self == other {
            return Ordering::Equal;
        }
        self.term_count()
            .cmp(&other.term_count())
            .then_with(|| self.to_string().cmp(&other.to_string()))
    }

    /// Equality as elements of the field: the difference normalizes to zero.
    pub fn same(&self, other: &Expr) -> bool {
        self == other || (self - other).is_zero()
    }

    /// Numerator and denominator as separate expressions.
    pub fn numer_denom(&self) -> (Expr, Expr) {
        let f = self.frac();
        let den = Frac {
            num: f.den_poly(),
            ..Frac::default()
        };
        (Expr::from_frac(f.numerator()), Expr::from_frac(den))
    }

    pub fn sum<I: IntoIterator<Item = Expr>>(items: I) -> Expr {
        let mut items: Vec<Expr> = items.into_iter().collect();
        // Pairwise reduction keeps intermediate denominators small.
        while items.len() > 1 {
            let mut next = Vec::with_capacity(items.len().div_ceil(2));
            let mut it = items.into_iter();
            while let Some(a) = it.next() {
                match it.next() {
                    Some(b) => next.push(&a + &b),
                    None => next.push(a),
                }
            }
            items = next;
        }
        items.pop().unwrap_or_else(Expr::zero)
    }

    pub fn product<I: IntoIterator<Item = Expr>>(items: I) -> Expr {
        items.into_iter().fold(Expr::one(), |a, b| &a * &b)
    }
}

fn collect_deep(e: &Expr, out: &mut BTreeSet<Gen>) {
    for g in e.gens() {
        if out.insert(g) {
            match g.atom() {
                Atom::Opaque { args, .. } => args.iter().for_each(|a| collect_deep(a, out)),
                Atom::Elem { arg, .. } => collect_deep(arg, out),
                Atom::Root { base, .. } => collect_deep(base, out),
                _ => {}
            }
        }
    }
}

impl From<i64> for Expr {
    fn from(n: i64) -> Expr {
        Expr::int(n)
    }
}

impl From<BigInt> for Expr {
    fn from(n: BigInt) -> Expr {
        Expr::q(Q::from_integer(n))
    }
}

impl Add<&Expr> for &Expr {
    type Output = Expr;
    fn add(self, rhs: &Expr) -> Expr {
        Expr::from_frac(self.0.add(&rhs.0))
    }
}

impl Sub<&Expr> for &Expr {
    type Output = Expr;
    fn sub(self, rhs: &Expr) -> Expr {
        Expr::from_frac(self.0.sub(&rhs.0))
    }
}

impl Mul<&Expr> for &Expr {
    type Output = Expr;
    fn mul(self, rhs: &Expr) -> Expr {
        Expr::from_frac(self.0.mul(&rhs.0))
    }
}

impl Neg for &Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        Expr::from_frac(self.0.neg())
    }
}

impl Neg for Expr {
    type Output = Expr;
    fn neg(self) -> Expr {
        -&self
    }
}

macro_rules! owned_ops {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<Expr> for Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr { (&self).$m(&rhs) }
        }
        impl $tr<&Expr> for Expr {
            type Output = Expr;
            fn $m(self, rhs: &Expr) -> Expr { (&self).$m(rhs) }
        }
        impl $tr<Expr> for &Expr {
            type Output = Expr;
            fn $m(self, rhs: Expr) -> Expr { self.$m(&rhs) }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&display::expr_string(self))
    }
}

impl fmt::Debug for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&display::expr_string(self))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(v: &[&str]) -> Expr {
        Expr::u("u", v)
    }

    #[test]
    fn square_expansion_cancels() {
        let (a, b) = (u(&["x"]), u(&[]));
        let s = (&a + &b).pow(2).unwrap();
        let r = s - a.pow(2).unwrap() - (&a * &b).scale_int(2) - b.pow(2).unwrap();
        assert!(r.is_zero());
    }

    #[test]
    fn exp_collection() {
        let bx = Expr::constant("b") * Expr::indep("x");
        let e = Expr::exp(bx.clone()) * Expr::exp(-bx);
        assert!(e.is_one());
        let two = Expr::exp(u(&[])).pow(2).unwrap();
        assert_eq!(two, Expr::exp(u(&[]).scale_int(2)));
        let q = Expr::one().checked_div(&Expr::exp(u(&[]))).unwrap();
        assert_eq!(q, Expr::exp(-u(&[])));
    }

    #[test]
    fn hyperbolic_rewrite() {
        let c = Expr::elem(Elementary::Cosh, u(&[]));
        let s = Expr::elem(Elementary::Sinh, u(&[]));
        let r = c.pow(2).unwrap() - s.pow(2).unwrap();
        assert!(r.is_one());
        let q = Expr::one().checked_div(&c.pow(2).unwrap()).unwrap();
        let back = q * (Expr::one() + s.pow(2).unwrap());
        assert!(back.is_one());
    }

    #[test]
    fn quotient_cancellation() {
        let (a, b) = (u(&["x"]), u(&[]));
        let f = &a + &b;
        let e = (&f * &a).checked_div(&f).unwrap();
        assert_eq!(e, a);
        let s = Expr::one().checked_div(&f).unwrap() + a.checked_div(&f).unwrap().scale_int(0);
        assert_eq!(s * &f, Expr::one());
        assert!(matches!(Expr::one().checked_div(&(&a - &a)), Err(Error::ZeroDenominator)));
    }

    #[test]
    fn fraction_sums() {
        let (a, b) = (u(&["x"]), u(&[]));
        let l = a.checked_div(&(&a + &b)).unwrap() + b.checked_div(&(&a + &b)).unwrap();
        assert!(l.is_one());
        let m = Expr::one().checked_div(&a).unwrap() - Expr::one().checked_div(&a).unwrap();
        assert!(m.is_zero());
    }

    #[test]
    fn roots_reduce() {
        let t = Expr::indep("t");
        let r = Expr::root(t.clone(), 3).unwrap();
        assert_eq!(r.pow(3).unwrap(), t);
        let inv = Expr::one().checked_div(&r).unwrap();
        assert_eq!(inv * &r, Expr::one());
    }

    #[test]
    fn power_cap() {
        let s = u(&["x"]) + u(&[]);
        assert!(matches!(s.pow(13), Err(Error::ExpansionCap { .. })));
        assert!(u(&[]).pow(40).is_ok());
    }

    #[test]
    fn parity_of_trig_arguments() {
        let a = u(&[]);
        assert_eq!(Expr::elem(Elementary::Sin, -a.clone()), -Expr::elem(Elementary::Sin, a.clone()));
        assert_eq!(Expr::elem(Elementary::Cosh, -a.clone()), Expr::elem(Elementary::Cosh, a));
        assert!(Expr::elem(Elementary::LambertW, Expr::zero()).is_zero());
    }
}
