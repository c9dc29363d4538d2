//! Simultaneous substitution of generators.

use std::collections::HashMap;

use num_traits::One;

use super::atom::{Atom, Gen};
use super::frac::build;
use super::poly::{Mono, Poly, Q};
use super::Expr;
use crate::error::{Error, Result};

/// Rebuilds `e` with every generator replaced by `f(g)` where that returns
/// `Some`; composite atoms are rebuilt from their mapped arguments.
pub fn map_gens(e: &Expr, f: &mut dyn FnMut(Gen) -> Option<Expr>) -> Expr {
    let mut memo: HashMap<Gen, Option<Expr>> = HashMap::new();
    map_memo(e, f, &mut memo)
}

fn map_memo(
    e: &Expr,
    f: &mut dyn FnMut(Gen) -> Option<Expr>,
    memo: &mut HashMap<Gen, Option<Expr>>,
) -> Expr {
    let fr = e.frac();
    let mut changed = false;
    for g in fr.gens() {
        if map_gen(g, f, memo).is_some() {
            changed = true;
        }
    }
    if !changed {
        return e.clone();
    }
    let num = expand_with(&fr.num, memo);
    if fr.has_unit_den() {
        return num;
    }
    let mut den = expand_with(&Poly::monomial(fr.den_mono.clone(), Q::one()), memo);
    for (p, k) in &fr.den_factors {
        let img = expand_with(p, memo);
        den = den * img.pow(*k as i64).expect("power of a factor");
    }
    num.checked_div(&den).expect("substitution made a denominator vanish")
}

fn map_gen(
    g: Gen,
    f: &mut dyn FnMut(Gen) -> Option<Expr>,
    memo: &mut HashMap<Gen, Option<Expr>>,
) -> Option<Expr> {
    if let Some(v) = memo.get(&g) {
        return v.clone();
    }
    let out = match f(g) {
        Some(v) => Some(v),
        None => match g.atom() {
            Atom::Opaque { name, slots, args } => {
                let new_args: Vec<Expr> = args.iter().map(|a| map_memo(a, f, memo)).collect();
                if new_args == *args {
                    None
                } else {
                    Some(Expr::atom(Atom::Opaque {
                        name: name.clone(),
                        slots: slots.clone(),
                        args: new_args,
                    }))
                }
            }
            Atom::Elem { func, arg } => {
                let a = map_memo(arg, f, memo);
                if a == *arg {
                    None
                } else {
                    Some(Expr::elem(*func, a))
                }
            }
            Atom::Root { base, q } => {
                let b = map_memo(base, f, memo);
                if b == *base {
                    None
                } else {
                    Some(Expr::root(b, *q).expect("root degree is valid"))
                }
            }
            _ => None,
        },
    };
    memo.insert(g, out.clone());
    out
}

/// Evaluates a polynomial with mapped generators. Terms are grouped by
/// their mapped part so unchanged generators stay in polynomial form.
fn expand_with(p: &Poly, memo: &HashMap<Gen, Option<Expr>>) -> Expr {
    let mut groups: HashMap<Mono, Vec<(Mono, Q)>> = HashMap::new();
    for (m, c) in &p.terms {
        let mut fixed = Mono::one();
        let mut moved = Mono::one();
        for &(g, e) in &m.0 {
            if matches!(memo.get(&g), Some(Some(_))) {
                moved = moved.mul(&Mono::var(g, e));
            } else {
                fixed = fixed.mul(&Mono::var(g, e));
            }
        }
        groups.entry(moved).or_default().push((fixed, c.clone()));
    }
    let mut keys: Vec<&Mono> = groups.keys().collect();
    keys.sort_by(|a, b| b.lex_cmp(a));
    let mut parts = Vec::with_capacity(keys.len());
    let mut powers: HashMap<(Gen, u32), Expr> = HashMap::new();
    for moved in keys {
        let coeff = Expr::from_frac(build(
            Poly::from_terms(groups[moved].clone()),
            Mono::one(),
            Vec::new(),
            false,
        ));
        let mut factor = Expr::one();
        for &(g, e) in &moved.0 {
            let img = powers
                .entry((g, e))
                .or_insert_with(|| {
                    let base = memo[&g].clone().expect("mapped generator");
                    Expr::from_frac(base.frac().pow(e))
                })
                .clone();
            factor = factor * img;
        }
        parts.push(coeff * factor);
    }
    Expr::sum(parts)
}

/// Substitution checked against the binding rules: bound generators must be
/// base coordinates or opaque atoms, an independent variable may not be
/// bound while it indexes a jet, and an opaque atom may only be replaced by
/// an expression in its own arguments and constants.
pub fn substitute(e: &Expr, bindings: &HashMap<Gen, Expr>) -> Result<Expr> {
    if bindings.is_empty() {
        return Ok(e.clone());
    }
    let present = e.gens_deep();
    for (g, v) in bindings {
        match g.atom() {
            Atom::Indep(name) => {
                let used = present.iter().any(|h| match h.atom() {
                    Atom::Jet { index, .. } => index.vars().contains(name),
                    _ => false,
                });
                if used {
                    return Err(Error::IllegalSubstitution(format!(
                        "independent variable {name} indexes a jet"
                    )));
                }
            }
            Atom::Jet { .. } | Atom::Const(_) => {}
            Atom::Opaque { name, slots, args } => {
                if !slots.is_empty() {
                    return Err(Error::IllegalSubstitution(format!(
                        "bind {name} itself, not one of its partials"
                    )));
                }
                let mut allowed = std::collections::BTreeSet::new();
                for a in args {
                    allowed.extend(a.gens_deep());
                }
                for h in v.gens_deep() {
                    let ok = allowed.contains(&h) || matches!(h.atom(), Atom::Const(_));
                    if !ok {
                        return Err(Error::IllegalSubstitution(format!(
                            "{name} may only be replaced by an expression in its arguments"
                        )));
                    }
                }
            }
            _ => {
                return Err(Error::IllegalSubstitution(format!("cannot bind {g:?}")));
            }
        }
    }
    let mut partial_images: HashMap<Gen, Expr> = HashMap::new();
    let mut out_err = None;
    let result = map_gens(e, &mut |g| {
        if let Some(v) = bindings.get(&g) {
            return Some(v.clone());
        }
        if let Atom::Opaque { name, slots, args } = g.atom() {
            if slots.is_empty() {
                return None;
            }
            let plain = Gen::intern(Atom::Opaque { name: name.clone(), slots: vec![], args: args.clone() });
            let v = bindings.get(&plain)?;
            if let Some(img) = partial_images.get(&g) {
                return Some(img.clone());
            }
            let mut d = v.clone();
            for &k in slots {
                match args[k as usize].as_gen() {
                    Some(a) => d = super::derive::atom_partial(&d, a),
                    None => {
                        out_err = Some(Error::IllegalSubstitution(format!(
                            "slot {} of {name} is not a coordinate",
                            k + 1
                        )));
                        return None;
                    }
                }
            }
            partial_images.insert(g, d.clone());
            return Some(d);
        }
        None
    });
    match out_err {
        Some(err) => Err(err),
        None => Ok(result),
    }
}

/// `e` with a single generator replaced.
pub fn replace(e: &Expr, g: Gen, by: &Expr) -> Expr {
    map_gens(e, &mut |h| if h == g { Some(by.clone()) } else { None })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_binding() {
        let ux = Expr::u("u", &["x"]);
        let b = Expr::constant("b");
        let mut m = HashMap::new();
        m.insert(b.as_gen().unwrap(), Expr::int(2));
        assert_eq!(substitute(&(&ux * &b), &m).unwrap(), ux.scale_int(2));
    }

    #[test]
    fn family_constraint() {
        let (a, b) = (Expr::constant("a"), Expr::constant("b"));
        let mut m = HashMap::new();
        m.insert(a.as_gen().unwrap(), -b.pow(2).unwrap());
        assert!(substitute(&(&a + &b.pow(2).unwrap()), &m).unwrap().is_zero());
    }

    #[test]
    fn opaque_binding_rules() {
        let u = Expr::u("u", &[]);
        let ux = Expr::u("u", &["x"]);
        let f = Expr::opaque("F", vec![], vec![u.clone(), ux.clone()]);
        let g = Expr::opaque("G", vec![], vec![u.clone()]);
        let h = Expr::opaque("H", vec![], vec![u.clone()]);
        let mut m = HashMap::new();
        m.insert(f.as_gen().unwrap(), &g * &h);
        assert!(matches!(substitute(&f, &m), Err(Error::IllegalSubstitution(_))));
        let mut m = HashMap::new();
        m.insert(f.as_gen().unwrap(), &u * &ux.pow(2).unwrap());
        let f2 = Expr::opaque("F", vec![1], vec![u.clone(), ux.clone()]);
        assert_eq!(substitute(&f2, &m).unwrap(), (&u * &ux).scale_int(2));
    }

    #[test]
    fn indep_in_jet_index_is_illegal() {
        let ux = Expr::u("u", &["x"]);
        let x = Expr::indep("x");
        let mut m = HashMap::new();
        m.insert(x.as_gen().unwrap(), Expr::int(1));
        assert!(substitute(&(&ux * &x), &m).is_err());
    }

    #[test]
    fn identity_bindings() {
        let u = Expr::u("u", &[]);
        let e = Expr::exp(u.clone()) + &u;
        let mut m = HashMap::new();
        m.insert(u.as_gen().unwrap(), u.clone());
        assert_eq!(substitute(&e, &m).unwrap(), e);
    }
}
