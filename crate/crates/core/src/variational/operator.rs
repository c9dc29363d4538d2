use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::expr::{atom_partial, Atom, Expr, Gen, Sym};
use crate::jet::{total_derivative_multi, DerivativeCache, MultiIndex};

/// Sum of `coeff_J D_J` terms.
pub type ScalarOperator = BTreeMap<MultiIndex, Expr>;

/// Matrix of scalar differential operators in normal form (coefficients
/// on the left of the total derivatives).
#[derive(Clone, PartialEq)]
pub struct LinearDiffOperator {
    rows: usize,
    cols: usize,
    entries: Vec<ScalarOperator>,
}

impl LinearDiffOperator {
    pub fn zero(rows: usize, cols: usize) -> Self {
        LinearDiffOperator { rows, cols, entries: vec![BTreeMap::new(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut op = Self::zero(n, n);
        for i in 0..n {
            op.add_term(i, i, MultiIndex::empty(), Expr::one());
        }
        op
    }

    /// Single scalar operator `coeff * D_J`.
    pub fn scalar(j: MultiIndex, coeff: Expr) -> Self {
        let mut op = Self::zero(1, 1);
        op.add_term(0, 0, j, coeff);
        op
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entry(&self, r: usize, c: usize) -> &ScalarOperator {
        &self.entries[r * self.cols + c]
    }

    pub fn add_term(&mut self, r: usize, c: usize, j: MultiIndex, coeff: Expr) {
        if coeff.is_zero() {
            return;
        }
        let e = &mut self.entries[r * self.cols + c];
        let sum = match e.get(&j) {
            Some(old) => old + &coeff,
            None => coeff,
        };
        if sum.is_zero() {
            e.remove(&j);
        } else {
            e.insert(j, sum);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_empty())
    }

    /// Maximal order of a total derivative occurring.
    pub fn order(&self) -> usize {
        self.entries
            .iter()
            .flat_map(|e| e.keys().map(MultiIndex::order))
            .max()
            .unwrap_or(0)
    }

    /// Applies the operator to a column tuple.
    pub fn apply(&self, v: &[Expr]) -> Result<Vec<Expr>> {
        if v.len() != self.cols {
            return Err(Error::Dimension(format!(
                "operator with {} columns applied to {} components",
                self.cols,
                v.len()
            )));
        }
        let mut caches: Vec<DerivativeCache> = v.iter().cloned().map(DerivativeCache::new).collect();
        let mut out = Vec::with_capacity(self.rows);
        for r in 0..self.rows {
            let mut parts = Vec::new();
            for (c, cache) in caches.iter_mut().enumerate() {
                for (j, coeff) in self.entry(r, c) {
                    let d = cache.get(j);
                    if !d.is_zero() {
                        parts.push(coeff * &d);
                    }
                }
            }
            out.push(Expr::sum(parts));
        }
        Ok(out)
    }

    /// Formal adjoint: transpose, and `c D_J -> (-D)_J . c` re-expanded
    /// by the Leibniz rule.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zero(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                for (j, coeff) in self.entry(r, c) {
                    let sign = j.sign();
                    let mut cache = DerivativeCache::new(coeff.clone());
                    for (k, w) in j.sub_indices() {
                        let rest = j.minus(&k).expect("sub-multiset");
                        let d = cache.get(&rest);
                        if d.is_zero() {
                            continue;
                        }
                        out.add_term(c, r, k, d.scale_int(sign * w as i64));
                    }
                }
            }
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, -1)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, 1)
    }

    fn combine(&self, other: &Self, sign: i64) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension("operator shapes differ".into()));
        }
        let mut out = self.clone();
        for r in 0..self.rows {
            for c in 0..self.cols {
                for (j, coeff) in other.entry(r, c) {
                    out.add_term(r, c, j.clone(), coeff.scale_int(sign));
                }
            }
        }
        Ok(out)
    }

    /// Coefficientwise map, dropping terms that become zero.
    pub fn map_coeffs(&self, f: &mut dyn FnMut(&Expr) -> Expr) -> Self {
        let mut out = Self::zero(self.rows, self.cols);
        for r in 0..self.rows {
            for c in 0..self.cols {
                for (j, coeff) in self.entry(r, c) {
                    out.add_term(r, c, j.clone(), f(coeff));
                }
            }
        }
        out
    }

    /// True if every coefficient satisfies `pred`.
    pub fn all_coeffs(&self, pred: &mut dyn FnMut(&Expr) -> bool) -> bool {
        self.entries.iter().all(|e| e.values().all(&mut *pred))
    }

    /// Reads an operator off expressions linear in placeholder dependent
    /// variables: row `r` is `exprs[r]`, column `c` is placeholder `c`.
    pub fn from_linear_exprs(exprs: &[Expr], placeholders: &[Sym]) -> Result<Self> {
        let mut op = Self::zero(exprs.len(), placeholders.len());
        for (r, e) in exprs.iter().enumerate() {
            let mut rebuilt = Vec::new();
            for (dep, j) in e.jets() {
                let Some(c) = placeholders.iter().position(|p| *p == dep) else {
                    continue;
                };
                let g = Gen::intern(Atom::Jet { dep: dep.clone(), index: j.clone() });
                let coeff = atom_partial(e, g);
                let nonlinear = coeff.jets().iter().any(|(d, _)| placeholders.contains(d));
                if nonlinear {
                    return Err(Error::Invalid(format!("operator row {} is not linear in {dep}", r + 1)));
                }
                rebuilt.push(&coeff * &Expr::gen(g));
                op.add_term(r, c, j, coeff);
            }
            if !(e - &Expr::sum(rebuilt)).is_zero() {
                return Err(Error::Invalid(format!(
                    "operator row {} has a part free of the placeholder",
                    r + 1
                )));
            }
        }
        Ok(op)
    }
}

impl fmt::Display for LinearDiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let mut cells = Vec::new();
            for c in 0..self.cols {
                let terms: Vec<String> = self
                    .entry(r, c)
                    .iter()
                    .map(|(j, coeff)| {
                        if j.is_empty() {
                            format!("({coeff})")
                        } else {
                            format!("({coeff})*D[{j}]")
                        }
                    })
                    .collect();
                cells.push(if terms.is_empty() { "0".to_string() } else { terms.join(" + ") });
            }
            if r > 0 {
                f.write_str("; ")?;
            }
            write!(f, "[{}]", cells.join(" | "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for LinearDiffOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Fréchet derivative: entry `(a, v)` is `sum_J dDelta^a/du^v_J D_J`.
pub fn frechet(delta: &[Expr], deps: &[Sym]) -> LinearDiffOperator {
    let mut op = LinearDiffOperator::zero(delta.len(), deps.len());
    for (a, d) in delta.iter().enumerate() {
        for (dep, j) in d.jets() {
            let Some(v) = deps.iter().position(|p| *p == dep) else {
                continue;
            };
            let g = Gen::intern(Atom::Jet { dep, index: j.clone() });
            op.add_term(a, v, j, atom_partial(d, g));
        }
    }
    op
}

/// `D*_Delta - D_Delta`.
pub fn helmholtz_defect(delta: &[Expr], deps: &[Sym]) -> Result<LinearDiffOperator> {
    let f = frechet(delta, deps);
    f.adjoint().sub(&f)
}

/// Collapses a row of operators `beta^a = sum_J beta^{aJ} D_J` to the
/// cosymmetry `sum_J (-D)_J beta^{aJ}`.
pub fn reduce_operator_cosymmetry(row: &LinearDiffOperator) -> Vec<Expr> {
    let mut out = Vec::with_capacity(row.cols());
    for c in 0..row.cols() {
        let mut parts = Vec::new();
        for r in 0..row.rows() {
            for (j, coeff) in row.entry(r, c) {
                let d = total_derivative_multi(coeff, j);
                parts.push(if j.sign() < 0 { -d } else { d });
            }
        }
        out.push(Expr::sum(parts));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::sym;

    fn u(v: &[&str]) -> Expr {
        Expr::u("u", v)
    }

    fn mi(v: &[&str]) -> MultiIndex {
        MultiIndex::new(v.iter().copied())
    }

    #[test]
    fn frechet_of_kdv() {
        let delta = u(&["t"]) + u(&[]) * u(&["x"]) + u(&["x", "x", "x"]);
        let f = frechet(&[delta], &[sym("u")]);
        let e = f.entry(0, 0);
        assert_eq!(e.len(), 4);
        assert_eq!(e[&mi(&["t"])], Expr::one());
        assert_eq!(e[&mi(&["x"])], u(&[]));
        assert_eq!(e[&mi(&[])], u(&["x"]));
        assert_eq!(e[&mi(&["x", "x", "x"])], Expr::one());
    }

    #[test]
    fn adjoint_examples() {
        let mut heat = LinearDiffOperator::scalar(mi(&["t"]), Expr::one());
        heat.add_term(0, 0, mi(&["x", "x"]), -Expr::one());
        let adj = heat.adjoint();
        assert_eq!(adj.entry(0, 0)[&mi(&["t"])], -Expr::one());
        assert_eq!(adj.entry(0, 0)[&mi(&["x", "x"])], -Expr::one());
        assert_eq!(adj.entry(0, 0).len(), 2);
        let udx = LinearDiffOperator::scalar(mi(&["x"]), u(&[]));
        let adj = udx.adjoint();
        assert_eq!(adj.entry(0, 0)[&mi(&["x"])], -u(&[]));
        assert_eq!(adj.entry(0, 0)[&mi(&[])], -u(&["x"]));
        let c = LinearDiffOperator::scalar(mi(&[]), Expr::indep("x"));
        assert_eq!(c.adjoint(), c);
    }

    #[test]
    fn helmholtz_examples() {
        let d = helmholtz_defect(&[-u(&["x", "x"])], &[sym("u")]).unwrap();
        assert!(d.is_zero());
        let d = helmholtz_defect(&[u(&["t"]) - u(&["x", "x"])], &[sym("u")]).unwrap();
        assert_eq!(d.entry(0, 0).len(), 1);
        assert_eq!(d.entry(0, 0)[&mi(&["t"])], Expr::int(-2));
    }

    #[test]
    fn operator_cosymmetry_reduction() {
        let dx = LinearDiffOperator::scalar(mi(&["x"]), Expr::one());
        assert!(reduce_operator_cosymmetry(&dx)[0].is_zero());
        let udx = LinearDiffOperator::scalar(mi(&["x"]), u(&[]));
        assert_eq!(reduce_operator_cosymmetry(&udx)[0], -u(&["x"]));
        let b = Expr::exp(Expr::indep("x"));
        let op = LinearDiffOperator::scalar(mi(&[]), b.clone());
        assert_eq!(reduce_operator_cosymmetry(&op)[0], b);
    }

    #[test]
    fn placeholder_extraction() {
        let p = Expr::u("_", &["x"]) * u(&[]) + Expr::u("_", &[]);
        let op = LinearDiffOperator::from_linear_exprs(&[p], &[sym("_")]).unwrap();
        assert_eq!(op.entry(0, 0)[&mi(&["x"])], u(&[]));
        let bad = Expr::u("_", &[]).pow(2).unwrap();
        assert!(LinearDiffOperator::from_linear_exprs(&[bad], &[sym("_")]).is_err());
    }
}
