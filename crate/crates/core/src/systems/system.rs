use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use crate::error::{Error, Result};
use crate::expr::{map_gens, sym, Atom, Expr, Gen, Sym};
use crate::jet::{total_derivative, DerivativeCache, MultiIndex};
use crate::variational::LinearDiffOperator;

/// One solved equation `u^dep_lead = rhs`.
#[derive(Clone, Debug)]
pub struct Equation {
    pub name: String,
    pub dep: Sym,
    pub lead: MultiIndex,
    pub rhs: Expr,
}

impl Equation {
    pub fn leading(&self) -> Expr {
        Expr::jet(&self.dep, self.lead.clone())
    }

    /// Residual form `lead - rhs`.
    pub fn residual(&self) -> Expr {
        self.leading() - &self.rhs
    }
}

/// A relation satisfied by an opaque function of independent variables,
/// `pd(F, slots)(args) = rhs`; its partials follow by differentiation.
#[derive(Clone, Debug)]
pub struct Constraint {
    pub func: Sym,
    pub args: Vec<Expr>,
    pub slots: Vec<u8>,
    pub rhs: Expr,
}

type Cache = Arc<Mutex<HashMap<Gen, Expr>>>;

/// A differential system in solved form.
#[derive(Clone, Debug)]
pub struct DifferentialSystem {
    indeps: Vec<Sym>,
    deps: Vec<Sym>,
    eqs: Vec<Equation>,
    constraints: Vec<Constraint>,
    reduced: Cache,
}

const DEPTH_LIMIT: usize = 256;

impl DifferentialSystem {
    pub fn new(
        indeps: Vec<Sym>,
        deps: Vec<Sym>,
        eqs: Vec<Equation>,
        constraints: Vec<Constraint>,
    ) -> Result<Self> {
        for (i, a) in eqs.iter().enumerate() {
            if !deps.contains(&a.dep) {
                return Err(Error::Invalid(format!("equation {} leads with undeclared {}", a.name, a.dep)));
            }
            for b in eqs.iter().skip(i + 1) {
                if a.dep == b.dep && (a.lead.contains(&b.lead) || b.lead.contains(&a.lead)) {
                    return Err(Error::Invalid(format!(
                        "leading derivatives of {} and {} overlap",
                        a.name, b.name
                    )));
                }
            }
        }
        for a in &eqs {
            for (dep, j) in a.rhs.jets() {
                for b in &eqs {
                    if dep == b.dep && j.contains(&b.lead) {
                        return Err(Error::Invalid(format!(
                            "right-hand side of {} contains {}, a derivative of the leading term {} of {}",
                            a.name,
                            Expr::jet(&dep, j.clone()),
                            b.leading(),
                            b.name
                        )));
                    }
                }
            }
        }
        for c in &constraints {
            for a in &c.args {
                if !matches!(a.as_gen().map(|g| g.atom()), Some(Atom::Indep(_))) {
                    return Err(Error::Invalid(format!(
                        "constraint on {} needs independent variables as arguments",
                        c.func
                    )));
                }
            }
            if !c.rhs.jets().is_empty() {
                return Err(Error::Invalid(format!("constraint on {} may not involve jets", c.func)));
            }
        }
        Ok(DifferentialSystem { indeps, deps, eqs, constraints, reduced: Arc::default() })
    }

    /// Scalar evolution-type system `dep_lead = rhs`.
    pub fn scalar(indeps: &[&str], dep: &str, lead: &[&str], rhs: Expr) -> Result<Self> {
        Self::new(
            indeps.iter().map(|s| sym(s)).collect(),
            vec![sym(dep)],
            vec![Equation {
                name: "eq".into(),
                dep: sym(dep),
                lead: MultiIndex::new(lead.iter().copied()),
                rhs,
            }],
            Vec::new(),
        )
    }

    pub fn indeps(&self) -> &[Sym] {
        &self.indeps
    }

    pub fn deps(&self) -> &[Sym] {
        &self.deps
    }

    pub fn equations(&self) -> &[Equation] {
        &self.eqs
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    /// `Delta^a = L_a - rhs_a`.
    pub fn residuals(&self) -> Vec<Expr> {
        self.eqs.iter().map(Equation::residual).collect()
    }

    /// `sum_a beta^a Delta^a`.
    pub fn pair(&self, beta: &[Expr]) -> Result<Expr> {
        if beta.len() != self.eqs.len() {
            return Err(Error::Dimension(format!(
                "{} multiplier components for {} equations",
                beta.len(),
                self.eqs.len()
            )));
        }
        Ok(Expr::sum(
            beta.iter()
                .zip(self.residuals())
                .filter(|(b, _)| !b.is_zero())
                .map(|(b, d)| b * &d),
        ))
    }

    fn lead_for(&self, dep: &Sym, j: &MultiIndex) -> Option<usize> {
        self.eqs.iter().position(|e| e.dep == *dep && j.contains(&e.lead))
    }

    /// Replaces every prolongation of a leading derivative by the matching
    /// derivative of its right-hand side, recursively; also applies the
    /// opaque-function constraints.
    pub fn on_shell_reduce(&self, e: &Expr) -> Result<Expr> {
        let mut err = None;
        let out = map_gens(e, &mut |g| {
            if err.is_some() {
                return None;
            }
            match self.reduce_gen(g, 0) {
                Ok(v) => v,
                Err(x) => {
                    err = Some(x);
                    None
                }
            }
        });
        match err {
            Some(x) => Err(x),
            None => Ok(out),
        }
    }

    /// Applies only the opaque-function constraints.
    pub fn apply_constraints(&self, e: &Expr) -> Result<Expr> {
        if self.constraints.is_empty() {
            return Ok(e.clone());
        }
        let mut err = None;
        let out = map_gens(e, &mut |g| match self.constraint_image(g, 0) {
            Ok(v) => v,
            Err(x) => {
                err = Some(x);
                None
            }
        });
        match err {
            Some(x) => Err(x),
            None => Ok(out),
        }
    }

    fn cached(&self, g: Gen) -> Option<Expr> {
        self.reduced.lock().expect("cache poisoned").get(&g).cloned()
    }

    fn store(&self, g: Gen, e: &Expr) {
        self.reduced.lock().expect("cache poisoned").insert(g, e.clone());
    }

    fn reduce_gen(&self, g: Gen, depth: usize) -> Result<Option<Expr>> {
        if depth > DEPTH_LIMIT {
            return Err(Error::NonTerminating(format!("{g:?}")));
        }
        match g.atom() {
            Atom::Jet { dep, index } => {
                let Some(a) = self.lead_for(dep, index) else {
                    return Ok(None);
                };
                if let Some(v) = self.cached(g) {
                    return Ok(Some(v));
                }
                let eq = &self.eqs[a];
                let v = if *index == eq.lead {
                    self.reduce_expr(&eq.rhs, depth + 1)?
                } else {
                    let rest = index.minus(&eq.lead).expect("contains lead");
                    let j = rest.vars()[0].clone();
                    let parent = index.without(&j).expect("contains j");
                    let pg = Gen::intern(Atom::Jet { dep: dep.clone(), index: parent });
                    let p = self.reduce_gen(pg, depth + 1)?.expect("parent is a prolongation");
                    let d = total_derivative(&p, &j);
                    self.reduce_expr(&d, depth + 1)?
                };
                self.store(g, &v);
                Ok(Some(v))
            }
            Atom::Opaque { .. } => self.constraint_image(g, depth),
            _ => Ok(None),
        }
    }

    fn reduce_expr(&self, e: &Expr, depth: usize) -> Result<Expr> {
        let mut err = None;
        let out = map_gens(e, &mut |g| {
            if err.is_some() {
                return None;
            }
            match self.reduce_gen(g, depth) {
                Ok(v) => v,
                Err(x) => {
                    err = Some(x);
                    None
                }
            }
        });
        match err {
            Some(x) => Err(x),
            None => Ok(out),
        }
    }

    fn constraint_image(&self, g: Gen, depth: usize) -> Result<Option<Expr>> {
        let Atom::Opaque { name, slots, args } = g.atom() else {
            return Ok(None);
        };
        let Some(c) = self.constraints.iter().find(|c| {
            c.func == *name && c.args == *args && MultiIndex::contains_slots(slots, &c.slots)
        }) else {
            return Ok(None);
        };
        if depth > DEPTH_LIMIT {
            return Err(Error::NonTerminating(format!("{g:?}")));
        }
        if let Some(v) = self.cached(g) {
            return Ok(Some(v));
        }
        let mut rest = slots.clone();
        for s in &c.slots {
            let i = rest.iter().position(|x| x == s).expect("contains");
            rest.remove(i);
        }
        let mut v = c.rhs.clone();
        for s in rest {
            let var = match args[s as usize].as_gen().map(|g| g.atom()) {
                Some(Atom::Indep(x)) => x.clone(),
                _ => unreachable!("validated"),
            };
            v = total_derivative(&v, &var);
        }
        let mut err = None;
        let v = map_gens(&v, &mut |h| match self.constraint_image(h, depth + 1) {
            Ok(x) => x,
            Err(x) => {
                err = Some(x);
                None
            }
        });
        if let Some(x) = err {
            return Err(x);
        }
        self.store(g, &v);
        Ok(Some(v))
    }

    fn residual_dep(&self, a: usize) -> Sym {
        sym(&format!("~{}", self.eqs[a].name))
    }

    /// Splits `e = remainder + sum Gamma^{aJ} D_J Delta^a` with the
    /// remainder free of leading-derivative prolongations. The operator has
    /// one row and one column per equation.
    pub fn decompose(&self, e: &Expr) -> Result<(Expr, LinearDiffOperator)> {
        let e = self.apply_constraints(e)?;
        let mut caches: Vec<DerivativeCache> =
            self.eqs.iter().map(|q| DerivativeCache::new(q.rhs.clone())).collect();
        let mut memo: HashMap<Gen, Expr> = HashMap::new();
        let phi = self.to_residual_coords(&e, &mut caches, &mut memo, 0)?;
        // residual coordinates present
        let mut vs: Vec<(usize, MultiIndex)> = Vec::new();
        for (dep, j) in phi.jets() {
            if let Some(a) = (0..self.eqs.len()).find(|a| self.residual_dep(*a) == dep) {
                vs.push((a, j));
            }
        }
        vs.sort_by(|x, y| x.0.cmp(&y.0).then_with(|| x.1.cmp(&y.1)));
        let gens: Vec<Gen> = vs
            .iter()
            .map(|(a, j)| Gen::intern(Atom::Jet { dep: self.residual_dep(*a), index: j.clone() }))
            .collect();
        let zero_from = |k: usize, e: &Expr| -> Expr {
            let zs: Vec<Gen> = gens[k..].to_vec();
            map_gens(e, &mut |g| if zs.contains(&g) { Some(Expr::zero()) } else { None })
        };
        let mut op = LinearDiffOperator::zero(1, self.eqs.len());
        let mut prev = zero_from(0, &phi);
        let remainder = prev.clone();
        for k in 0..gens.len() {
            let cur = zero_from(k + 1, &phi);
            let diff = &cur - &prev;
            prev = cur;
            if diff.is_zero() {
                continue;
            }
            let gamma = diff.checked_div(&Expr::gen(gens[k]))?;
            let gamma = self.from_residual_coords(&gamma)?;
            op.add_term(0, vs[k].0, vs[k].1.clone(), gamma);
        }
        Ok((remainder, op))
    }

    fn to_residual_coords(
        &self,
        e: &Expr,
        caches: &mut Vec<DerivativeCache>,
        memo: &mut HashMap<Gen, Expr>,
        depth: usize,
    ) -> Result<Expr> {
        if depth > DEPTH_LIMIT {
            return Err(Error::NonTerminating("residual coordinates".into()));
        }
        let mut targets: Vec<Gen> = Vec::new();
        for g in e.gens_deep() {
            if let Atom::Jet { dep, index } = g.atom() {
                if self.lead_for(dep, index).is_some() && !memo.contains_key(&g) {
                    targets.push(g);
                }
            }
        }
        for g in targets {
            let Atom::Jet { dep, index } = g.atom() else { unreachable!() };
            let a = self.lead_for(dep, index).expect("leading prolongation");
            let rest = index.minus(&self.eqs[a].lead).expect("contains lead");
            let v = Expr::jet(&self.residual_dep(a), rest.clone());
            let d = caches[a].get(&rest);
            let img = self.to_residual_coords(&d, caches, memo, depth + 1)?;
            memo.insert(g, v + img);
        }
        Ok(map_gens(e, &mut |g| memo.get(&g).cloned()))
    }

    fn from_residual_coords(&self, e: &Expr) -> Result<Expr> {
        let residuals = self.residuals();
        let mut caches: Vec<DerivativeCache> = residuals.into_iter().map(DerivativeCache::new).collect();
        Ok(map_gens(e, &mut |g| match g.atom() {
            Atom::Jet { dep, index } => {
                let a = (0..self.eqs.len()).find(|a| self.residual_dep(*a) == *dep)?;
                Some(caches[a].get(index))
            }
            _ => None,
        }))
    }
}

impl MultiIndex {
    /// Sub-multiset test on raw slot lists.
    pub fn contains_slots(have: &[u8], need: &[u8]) -> bool {
        let mut rest = have.to_vec();
        for s in need {
            match rest.iter().position(|x| x == s) {
                Some(i) => {
                    rest.remove(i);
                }
                None => return false,
            }
        }
        true
    }
}
