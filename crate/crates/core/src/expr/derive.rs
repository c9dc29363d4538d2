//! Derivations of the expression field.
//!
//! A derivation is fixed by its values on base coordinates (independent
//! variables, jets, constants); it extends through opaque, elementary and
//! root atoms by the chain rule.

use std::collections::HashMap;


use super::atom::{Atom, Elementary, Gen};
use super::frac::{build, Frac};
use super::poly::{q_int, Mono, Poly, Q};
use super::Expr;

/// Applies the derivation given by `base` on base coordinates. `base`
/// returns `None` for zero.
pub fn derive_with(e: &Expr, base: &mut dyn FnMut(Gen) -> Option<Expr>) -> Expr {
    let mut memo: HashMap<Gen, Option<Expr>> = HashMap::new();
    derive_memo(e, base, &mut memo)
}

fn derive_memo(
    e: &Expr,
    base: &mut dyn FnMut(Gen) -> Option<Expr>,
    memo: &mut HashMap<Gen, Option<Expr>>,
) -> Expr {
    let f = e.frac();
    if f.num.is_empty() {
        return Expr::zero();
    }
    for g in f.gens() {
        gen_derivative(g, base, memo);
    }
    let dn = poly_derivative(&f.num, memo);
    if f.has_unit_den() {
        return dn;
    }
    let inv_den = Expr::from_frac(f.den_recip());
    let mut log_terms: Vec<Expr> = Vec::new();
    for &(g, k) in &f.den_mono.0 {
        if let Some(Some(dg)) = memo.get(&g) {
            let over = Expr::from_frac(build(Poly::one(), Mono::var(g, 1), Vec::new(), false));
            log_terms.push((dg * &over).scale_int(k as i64));
        }
    }
    for (p, k) in &f.den_factors {
        let dp = poly_derivative(p, memo);
        if dp.is_zero() {
            continue;
        }
        let over = Expr::from_frac(Frac {
            num: Poly::one(),
            den_mono: Mono::one(),
            den_factors: vec![(p.clone(), 1)],
        });
        log_terms.push((dp * over).scale_int(*k as i64));
    }
    let first = dn * &inv_den;
    if log_terms.is_empty() {
        return first;
    }
    first - e * Expr::sum(log_terms)
}

fn poly_derivative(p: &Poly, memo: &HashMap<Gen, Option<Expr>>) -> Expr {
    let mut parts = Vec::new();
    for g in p.gens() {
        if let Some(Some(dg)) = memo.get(&g) {
            let pp = p.partial(g);
            if !pp.is_zero() {
                parts.push(Expr::from_frac(Frac::from_poly(pp)) * dg);
            }
        }
    }
    Expr::sum(parts)
}

fn gen_derivative(
    g: Gen,
    base: &mut dyn FnMut(Gen) -> Option<Expr>,
    memo: &mut HashMap<Gen, Option<Expr>>,
) {
    if memo.contains_key(&g) {
        return;
    }
    let d = match g.atom() {
        Atom::Indep(_) | Atom::Jet { .. } | Atom::Const(_) => base(g),
        Atom::Opaque { name, slots, args } => {
            let mut parts = Vec::new();
            for (k, a) in args.iter().enumerate() {
                let da = derive_memo(a, base, memo);
                if da.is_zero() {
                    continue;
                }
                let mut s = slots.clone();
                s.push(k as u8);
                s.sort_unstable();
                let atom = Expr::atom(Atom::Opaque { name: name.clone(), slots: s, args: args.clone() });
                parts.push(atom * da);
            }
            nonzero(Expr::sum(parts))
        }
        Atom::Elem { func, arg } => {
            let da = derive_memo(arg, base, memo);
            if da.is_zero() {
                None
            } else {
                let outer = elem_derivative(*func, g, arg);
                nonzero(outer * da)
            }
        }
        Atom::Root { base: b, q } => {
            let db = derive_memo(b, base, memo);
            if db.is_zero() {
                None
            } else {
                let r = Expr::gen(g);
                let scale = Q::new(1.into(), (*q as i64).into());
                let quotient = db.checked_div(b).expect("root base is nonzero");
                nonzero((r * quotient).scale(&scale))
            }
        }
    };
    memo.insert(g, d);
}

fn nonzero(e: Expr) -> Option<Expr> {
    if e.is_zero() {
        None
    } else {
        Some(e)
    }
}

/// Derivative of an elementary function at its own argument.
pub fn elem_derivative(func: Elementary, g: Gen, arg: &Expr) -> Expr {
    let me = Expr::gen(g);
    match func {
        Elementary::Exp => me,
        Elementary::Sin => Expr::elem(Elementary::Cos, arg.clone()),
        Elementary::Cos => -Expr::elem(Elementary::Sin, arg.clone()),
        Elementary::Sinh => Expr::elem(Elementary::Cosh, arg.clone()),
        Elementary::Cosh => Expr::elem(Elementary::Sinh, arg.clone()),
        // W' = W / (z (1 + W))
        Elementary::LambertW => {
            let den = arg * (Expr::one() + &me);
            me.checked_div(&den).expect("lambert-w derivative at nonzero argument")
        }
    }
}

/// Partial derivative with respect to a base coordinate, every other
/// atom held fixed; composite atoms differentiate through their arguments.
pub fn atom_partial(e: &Expr, wrt: Gen) -> Expr {
    derive_with(e, &mut |g| if g == wrt { Some(Expr::one()) } else { None })
}

/// Partial derivative with respect to any generator treated as an
/// independent symbol, including composite atoms (no chain rule).
pub fn gen_partial(e: &Expr, wrt: Gen) -> Expr {
    let f = e.frac();
    let dn = f.num.partial(wrt);
    let mut out = Expr::from_frac(build(dn, f.den_mono.clone(), f.den_factors.clone(), true));
    let k = f.den_mono.exp_of(wrt);
    if k > 0 {
        let over = Expr::from_frac(build(Poly::one(), Mono::var(wrt, 1), Vec::new(), false));
        out = out - (e * over).scale_int(k as i64);
    }
    for (p, k) in &f.den_factors {
        let dp = p.partial(wrt);
        if dp.is_zero() {
            continue;
        }
        let over = Expr::from_frac(Frac {
            num: dp,
            den_mono: Mono::one(),
            den_factors: vec![(p.clone(), 1)],
        });
        out = out - (e * over).scale(&q_int(*k as i64));
    }
    out
}

/// Antiderivative with respect to a base coordinate for sums of
/// `w^n exp(a w + b)` terms: the denominator must be free of `w`, and every
/// composite atom either free of `w` or an exponential linear in it.
pub fn antiderivative(e: &Expr, wrt: Gen) -> Option<Expr> {
    let f = e.frac();
    let (_, den) = e.numer_denom();
    if den.depends_on(wrt) {
        return None;
    }
    let w = Expr::gen(wrt);
    let mut out = Expr::zero();
    for (m, c) in &f.num.terms {
        let mut slope: Option<Expr> = None;
        for g in m.gens() {
            if g == wrt || !Expr::gen(g).depends_on(wrt) {
                continue;
            }
            let Atom::Elem { func: Elementary::Exp, arg } = g.atom() else {
                return None;
            };
            let a = atom_partial(arg, wrt).scale_int(m.exp_of(g) as i64);
            if slope.is_some() || a.depends_on(wrt) || a.is_zero() {
                return None;
            }
            slope = Some(a);
        }
        let n = m.exp_of(wrt);
        let base = Expr::from_frac(Frac::from_poly(Poly::monomial(m.without(wrt), c.clone())));
        let piece = match slope {
            None => w.pow(n as i64 + 1).ok()?.scale(&(q_int(1) / q_int(n as i64 + 1))),
            // repeated integration by parts against exp(a w)
            Some(a) => {
                let mut sum = Expr::zero();
                let mut coef = q_int(1);
                let mut a_pow = a.clone();
                for j in 0..=n {
                    sum = sum + w.pow((n - j) as i64).ok()?.scale(&coef).checked_div(&a_pow).ok()?;
                    coef = -coef * q_int((n - j) as i64);
                    a_pow = &a_pow * &a;
                }
                sum
            }
        };
        out = out + base * piece;
    }
    out.checked_div(&den).ok()
}
