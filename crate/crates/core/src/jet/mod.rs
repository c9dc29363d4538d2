//! Jet coordinates, total derivatives and evolutionary vector fields.

mod index;

use std::collections::HashMap;

pub use index::MultiIndex;

use crate::error::{Error, Result};
use crate::expr::{derive_with, sym, Atom, Expr, Sym};

/// Total derivative `D_x e`.
pub fn total_derivative(e: &Expr, x: &str) -> Expr {
    let x = sym(x);
    derive_with(e, &mut |g| match g.atom() {
        Atom::Indep(y) if *y == x => Some(Expr::one()),
        Atom::Jet { dep, index } => Some(Expr::jet(dep, index.with(&x))),
        _ => None,
    })
}

/// `D_J e`.
pub fn total_derivative_multi(e: &Expr, j: &MultiIndex) -> Expr {
    let mut out = e.clone();
    for x in j.vars() {
        if out.is_zero() {
            break;
        }
        out = total_derivative(&out, x);
    }
    out
}

/// `(-D)_J e`.
pub fn signed_total_derivative(e: &Expr, j: &MultiIndex) -> Expr {
    let d = total_derivative_multi(e, j);
    if j.sign() < 0 {
        -d
    } else {
        d
    }
}

/// Memoized `D_J` of a fixed expression, reusing shorter prefixes.
#[derive(Clone)]
pub struct DerivativeCache {
    base: Expr,
    memo: HashMap<MultiIndex, Expr>,
}

impl DerivativeCache {
    pub fn new(base: Expr) -> Self {
        let mut memo = HashMap::new();
        memo.insert(MultiIndex::empty(), base.clone());
        DerivativeCache { base, memo }
    }

    pub fn base(&self) -> &Expr {
        &self.base
    }

    pub fn get(&mut self, j: &MultiIndex) -> Expr {
        if let Some(e) = self.memo.get(j) {
            return e.clone();
        }
        let last = j.vars().last().expect("nonempty index").clone();
        let parent = j.without(&last).expect("contains last");
        let p = self.get(&parent);
        let d = total_derivative(&p, &last);
        self.memo.insert(j.clone(), d.clone());
        d
    }
}

/// Components `alpha^a`, one per dependent variable.
#[derive(Clone, Debug, PartialEq)]
pub struct Characteristic {
    deps: Vec<Sym>,
    comps: Vec<Expr>,
}

impl Characteristic {
    pub fn new(deps: Vec<Sym>, comps: Vec<Expr>) -> Result<Self> {
        if deps.len() != comps.len() {
            return Err(Error::Dimension(format!(
                "{} components for {} dependent variables",
                comps.len(),
                deps.len()
            )));
        }
        Ok(Characteristic { deps, comps })
    }

    pub fn scalar(dep: &str, alpha: Expr) -> Self {
        Characteristic { deps: vec![sym(dep)], comps: vec![alpha] }
    }

    pub fn deps(&self) -> &[Sym] {
        &self.deps
    }

    pub fn comps(&self) -> &[Expr] {
        &self.comps
    }

    pub fn get(&self, dep: &str) -> Option<&Expr> {
        self.deps.iter().position(|d| &**d == dep).map(|i| &self.comps[i])
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Expr::is_zero)
    }
}

/// Prolonged action `X_alpha e = sum (D_J alpha^a) d e / d u^a_J`.
pub fn prolong_apply(alpha: &Characteristic, e: &Expr) -> Result<Expr> {
    for (dep, _) in e.jets() {
        if alpha.get(&dep).is_none() {
            return Err(Error::Dimension(format!("characteristic has no component for {dep}")));
        }
    }
    let mut caches: HashMap<Sym, DerivativeCache> = alpha
        .deps
        .iter()
        .cloned()
        .zip(alpha.comps.iter().cloned().map(DerivativeCache::new))
        .collect();
    Ok(derive_with(e, &mut |g| match g.atom() {
        Atom::Jet { dep, index } => {
            let d = caches.get_mut(dep).expect("checked above").get(index);
            if d.is_zero() {
                None
            } else {
                Some(d)
            }
        }
        _ => None,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn u(v: &[&str]) -> Expr {
        Expr::u("u", v)
    }

    #[test]
    fn total_derivative_examples() {
        let e = &u(&[]) * &u(&["x"]);
        let d = total_derivative(&e, "x");
        assert_eq!(d, u(&["x"]).pow(2).unwrap() + &u(&[]) * &u(&["x", "x"]));
        let f = Expr::opaque("f", vec![], vec![Expr::indep("t")]);
        let fp = Expr::opaque("f", vec![0], vec![Expr::indep("t")]);
        let d = total_derivative(&(&f * &u(&[])), "t");
        assert_eq!(d, &fp * &u(&[]) + &f * &u(&["t"]));
        let e = Expr::exp(u(&[])) * u(&["x"]);
        let d = total_derivative(&e, "x");
        let ex = Expr::exp(u(&[]));
        assert_eq!(d, &ex * &u(&["x"]).pow(2).unwrap() + &ex * &u(&["x", "x"]));
    }

    #[test]
    fn multi_index_derivatives() {
        let xx = MultiIndex::new(["x", "x"]);
        assert_eq!(total_derivative_multi(&u(&[]), &xx), u(&["x", "x"]));
        assert_eq!(total_derivative_multi(&u(&["t"]), &MultiIndex::empty()), u(&["t"]));
        let e = Expr::indep("x") * u(&[]);
        let d = signed_total_derivative(&e, &MultiIndex::new(["x"]));
        assert_eq!(d, -u(&[]) - Expr::indep("x") * u(&["x"]));
    }

    #[test]
    fn prolongation_examples() {
        let one = Characteristic::scalar("u", Expr::one());
        assert_eq!(prolong_apply(&one, &u(&[]).pow(2).unwrap()).unwrap(), u(&[]).scale_int(2));
        let ux = Characteristic::scalar("u", u(&["x"]));
        let r = prolong_apply(&ux, &(&u(&[]) * &u(&["x", "x"]))).unwrap();
        assert_eq!(r, &u(&["x"]) * &u(&["x", "x"]) + &u(&[]) * &u(&["x", "x", "x"]));
        let v = Expr::u("v", &[]);
        assert!(prolong_apply(&ux, &v).is_err());
    }
}
