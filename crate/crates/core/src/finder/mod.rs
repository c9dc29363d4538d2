//! Linear-ansatz search for cosymmetries and characteristics.
//!
//! A candidate multiplier is `sum c_k b_k` with unknown rational `c_k`. The
//! residual is linear in `c`; it is put over a common denominator, its
//! numerator is expanded in the canonical generators and every monomial
//! coefficient is set to zero.

pub mod linalg;

use std::collections::HashMap;

use num_traits::Zero;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::expr::{Atom, Elementary, Expr, Gen, Mono, Q};
use crate::systems::DifferentialSystem;
use crate::variational::euler_all;

/// Candidate multipliers `b_1..b_m`, each a tuple with one entry per
/// equation.
#[derive(Clone, Debug)]
pub struct AnsatzBasis {
    elems: Vec<Vec<Expr>>,
}

impl AnsatzBasis {
    pub fn new(elems: Vec<Vec<Expr>>) -> Result<Self> {
        if elems.is_empty() {
            return Err(Error::Invalid("empty ansatz basis".into()));
        }
        let width = elems[0].len();
        for b in &elems {
            if b.len() != width {
                return Err(Error::Dimension("basis tuples of different lengths".into()));
            }
            for e in b {
                if e.any_gen(&|g| matches!(g.atom(), Atom::Const(_))) {
                    return Err(Error::Invalid(format!(
                        "basis element {e} contains a symbolic constant; instantiate it first"
                    )));
                }
            }
            if b.iter().all(Expr::is_zero) {
                return Err(Error::Invalid("zero basis element".into()));
            }
        }
        for i in 0..elems.len() {
            for j in i + 1..elems.len() {
                if proportional(&elems[i], &elems[j]) {
                    return Err(Error::Invalid(format!(
                        "basis elements {} and {} are proportional",
                        i + 1,
                        j + 1
                    )));
                }
            }
        }
        Ok(AnsatzBasis { elems })
    }

    /// Basis for a scalar system.
    pub fn scalar(elems: Vec<Expr>) -> Result<Self> {
        Self::new(elems.into_iter().map(|e| vec![e]).collect())
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    pub fn elems(&self) -> &[Vec<Expr>] {
        &self.elems
    }

    /// `sum c_k b_k`.
    pub fn combine(&self, c: &[Q]) -> Vec<Expr> {
        let width = self.elems[0].len();
        (0..width)
            .map(|a| {
                Expr::sum(
                    self.elems
                        .iter()
                        .zip(c)
                        .filter(|(_, ck)| !ck.is_zero())
                        .map(|(b, ck)| b[a].scale(ck)),
                )
            })
            .collect()
    }

    /// Rational coefficients `c` with `combine(c) = target`, if any.
    pub fn coordinates(&self, target: &[Expr]) -> Option<Vec<Q>> {
        let m = self.len();
        if target.len() != self.elems[0].len() {
            return None;
        }
        let unknowns: Vec<Gen> = (0..m)
            .map(|k| Gen::intern(Atom::Const(crate::expr::sym(&format!("c#{}", k + 1)))))
            .collect();
        let mut rows: Vec<Vec<Q>> = Vec::new();
        for (a, goal) in target.iter().enumerate() {
            let total = Expr::sum(self.elems.iter().zip(&unknowns).map(|(b, c)| &b[a] * &Expr::gen(*c))) - goal;
            // clear denominators shared by the elements
            let total = total.numer_denom().0;
            let mut collected: HashMap<Mono, Vec<Q>> = HashMap::new();
            for (mono, coef) in &total.frac().num.terms {
                let k = unknowns.iter().position(|c| mono.exp_of(*c) == 1).unwrap_or(m);
                let key = if k < m { mono.without(unknowns[k]) } else { mono.clone() };
                let row = collected.entry(key).or_insert_with(|| vec![Q::zero(); m + 1]);
                if k < m {
                    row[k] += coef;
                } else {
                    row[m] -= coef;
                }
            }
            rows.extend(collected.into_values());
        }
        let pivots = linalg::rref(&mut rows, m + 1);
        if pivots.contains(&m) {
            return None;
        }
        let mut c = vec![Q::zero(); m];
        for (r, &p) in pivots.iter().enumerate() {
            c[p] = rows[r][m].clone();
        }
        (self.combine(&c).iter().zip(target).all(|(x, y)| (x - y).is_zero())).then_some(c)
    }
}

fn proportional(a: &[Expr], b: &[Expr]) -> bool {
    let mut ratio: Option<Q> = None;
    for (x, y) in a.iter().zip(b) {
        match (x.is_zero(), y.is_zero()) {
            (true, true) => continue,
            (true, false) | (false, true) => return false,
            _ => {}
        }
        let Some(r) = x.checked_div(y).ok().and_then(|q| q.as_rational()) else {
            return false;
        };
        match &ratio {
            Some(r0) if *r0 != r => return false,
            _ => ratio = Some(r),
        }
    }
    true
}

/// Null-space basis of the coefficient system, as coefficient vectors and
/// as the corresponding multipliers.
#[derive(Clone, Debug)]
pub struct SolutionSpace {
    pub basis: AnsatzBasis,
    pub vectors: Vec<Vec<Q>>,
}

impl SolutionSpace {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }

    pub fn multipliers(&self) -> Vec<Vec<Expr>> {
        self.vectors.iter().map(|c| self.basis.combine(c)).collect()
    }

    /// Whether `c` lies in the span of the solution vectors.
    pub fn contains(&self, c: &[Q]) -> bool {
        let mut rows = self.vectors.clone();
        let before = linalg::rref(&mut rows.clone(), c.len()).len();
        rows.push(c.to_vec());
        linalg::rref(&mut rows, c.len()).len() == before
    }

    /// Whether the given coefficient vectors span exactly this space.
    pub fn spanned_by(&self, vs: &[Vec<Q>]) -> bool {
        let width = self.basis.len();
        vs.iter().all(|v| v.len() == width && self.contains(v))
            && linalg::rref(&mut vs.to_vec(), width).len() == self.dim()
    }
}

/// Searches for `beta = sum c_k b_k` with `E_v(beta . Delta)` vanishing on
/// solutions.
pub fn find_cosymmetries(s: &DifferentialSystem, basis: &AnsatzBasis) -> Result<SolutionSpace> {
    search(s, basis, true)
}

/// Searches for `beta = sum c_k b_k` with `E_v(beta . Delta)` vanishing
/// identically.
pub fn find_characteristics(s: &DifferentialSystem, basis: &AnsatzBasis) -> Result<SolutionSpace> {
    search(s, basis, false)
}

/// Residual tuple for a candidate multiplier.
pub fn candidate_residual(s: &DifferentialSystem, beta: &[Expr], on_shell: bool) -> Result<Vec<Expr>> {
    euler_all(&s.pair(beta)?, s.deps())
        .iter()
        .map(|e| if on_shell { s.on_shell_reduce(e) } else { s.apply_constraints(e) })
        .collect()
}

fn search(s: &DifferentialSystem, basis: &AnsatzBasis, on_shell: bool) -> Result<SolutionSpace> {
    if basis.elems[0].len() != s.equations().len() {
        return Err(Error::Dimension("basis tuple length does not match the system".into()));
    }
    let parts: Vec<Vec<Expr>> = basis
        .elems
        .par_iter()
        .map(|b| candidate_residual(s, b, on_shell))
        .collect::<Result<_>>()?;
    let m = basis.len();
    let unknowns: Vec<Gen> = (0..m)
        .map(|k| Gen::intern(Atom::Const(crate::expr::sym(&format!("c#{}", k + 1)))))
        .collect();
    let mut rows: Vec<Vec<Q>> = Vec::new();
    for v in 0..s.deps().len() {
        let total = Expr::sum(parts.iter().zip(&unknowns).map(|(p, c)| &p[v] * &Expr::gen(*c)));
        refuse_hidden_relations(&total)?;
        let mut collected: HashMap<Mono, Vec<Q>> = HashMap::new();
        for (mono, coef) in &total.frac().num.terms {
            let Some(k) = unknowns.iter().position(|c| mono.exp_of(*c) == 1) else {
                return Err(Error::Aborted("residual term free of the unknowns".into()));
            };
            let row = collected.entry(mono.without(unknowns[k])).or_insert_with(|| vec![Q::zero(); m]);
            row[k] += coef;
        }
        rows.extend(collected.into_values());
    }
    let vectors = linalg::null_space(rows, m);
    let space = SolutionSpace { basis: basis.clone(), vectors };
    for beta in space.multipliers() {
        if !candidate_residual(s, &beta, on_shell)?.iter().all(Expr::is_zero) {
            return Err(Error::Aborted(format!(
                "solution {} does not reduce to an exact zero",
                crate::systems::tuple_string(&beta)
            )));
        }
    }
    Ok(space)
}

// Collection treats generators as independent; trigonometric pairs of the
// same argument are not, so such residuals are refused.
fn refuse_hidden_relations(e: &Expr) -> Result<()> {
    let mut sines = Vec::new();
    let mut cosines = Vec::new();
    for g in e.gens_deep() {
        if let Atom::Elem { func, arg } = g.atom() {
            match func {
                Elementary::Sin => sines.push(arg.clone()),
                Elementary::Cos => cosines.push(arg.clone()),
                _ => {}
            }
        }
    }
    if sines.iter().any(|a| cosines.contains(a)) {
        return Err(Error::Aborted(
            "residual mixes sin and cos of one argument; coefficient collection would be unsound".into(),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::q_int;

    fn u(v: &[&str]) -> Expr {
        Expr::u("u", v)
    }

    fn power_flux(n: i64) -> DifferentialSystem {
        let rhs = u(&["x", "x"]) + u(&["x"]).pow(n).unwrap();
        DifferentialSystem::scalar(&["t", "x"], "u", &["t"], rhs).unwrap()
    }

    #[test]
    fn finds_exponential_cosymmetry() {
        let eu = Expr::exp(u(&[]));
        let basis = AnsatzBasis::scalar(vec![eu.clone(), &Expr::indep("x") * &eu, &u(&[]) * &eu]).unwrap();
        let space = find_cosymmetries(&power_flux(2), &basis).unwrap();
        // e^u Delta = w_t - w_xx for w = e^u, so x e^u qualifies as well
        let found: Vec<String> = space.multipliers().iter().map(|b| b[0].to_string()).collect();
        assert_eq!(found, ["exp(u)", "x*exp(u)"]);
    }

    #[test]
    fn coordinates_of_combinations() {
        let eu = Expr::exp(u(&[]));
        let basis = AnsatzBasis::scalar(vec![eu.clone(), &Expr::indep("x") * &eu, u(&[])]).unwrap();
        let target = &eu.scale_int(2) - &(&Expr::indep("x") * &eu);
        assert_eq!(basis.coordinates(&[target]).unwrap(), vec![q_int(2), q_int(-1), q_int(0)]);
        assert!(basis.coordinates(&[Expr::indep("t")]).is_none());
    }

    #[test]
    fn rejects_constants_and_proportional_elements() {
        assert!(AnsatzBasis::scalar(vec![Expr::constant("b")]).is_err());
        assert!(AnsatzBasis::scalar(vec![u(&[]), u(&[]).scale_int(3)]).is_err());
    }

    #[test]
    fn heat_has_no_linear_characteristic() {
        let s = power_flux(0);
        let heat = DifferentialSystem::scalar(&["t", "x"], "u", &["t"], u(&["x", "x"])).unwrap();
        let basis = AnsatzBasis::scalar(vec![u(&[])]).unwrap();
        assert!(find_characteristics(&heat, &basis).unwrap().is_empty());
        let one = AnsatzBasis::scalar(vec![Expr::one()]).unwrap();
        assert_eq!(find_characteristics(&s, &one).unwrap().dim(), 1);
    }

    #[test]
    fn span_membership() {
        let basis = AnsatzBasis::scalar(vec![Expr::one(), u(&[])]).unwrap();
        let space = SolutionSpace { basis, vectors: vec![vec![q_int(1), q_int(0)]] };
        assert!(space.contains(&[q_int(3), q_int(0)]));
        assert!(!space.contains(&[q_int(0), q_int(1)]));
    }
}
