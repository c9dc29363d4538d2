//! Euler operator, Noether and Lagrange identity fluxes, Fréchet
//! derivatives and adjoints.

mod operator;

use std::collections::{BTreeMap, HashMap};

pub use operator::{
    frechet, helmholtz_defect, reduce_operator_cosymmetry, LinearDiffOperator, ScalarOperator,
};

use crate::error::{Error, Result};
use crate::expr::{antiderivative, atom_partial, Atom, Expr, Gen, Sym};
use crate::jet::{total_derivative, Characteristic, DerivativeCache, MultiIndex};

/// Flux components, one per independent variable.
#[derive(Clone, Debug, PartialEq)]
pub struct FluxVector {
    pub vars: Vec<Sym>,
    pub comps: Vec<Expr>,
}

impl FluxVector {
    pub fn zero(vars: &[Sym]) -> Self {
        FluxVector { vars: vars.to_vec(), comps: vec![Expr::zero(); vars.len()] }
    }

    pub fn new(vars: &[Sym], comps: Vec<Expr>) -> Result<Self> {
        if vars.len() != comps.len() {
            return Err(Error::Dimension(format!(
                "{} flux components for {} independent variables",
                comps.len(),
                vars.len()
            )));
        }
        Ok(FluxVector { vars: vars.to_vec(), comps })
    }

    pub fn get(&self, var: &str) -> &Expr {
        let i = self.vars.iter().position(|v| &**v == var).expect("known variable");
        &self.comps[i]
    }

    /// `sum_i D_i P^i`.
    pub fn divergence(&self) -> Expr {
        Expr::sum(
            self.vars
                .iter()
                .zip(&self.comps)
                .filter(|(_, c)| !c.is_zero())
                .map(|(v, c)| total_derivative(c, v)),
        )
    }

    pub fn sub(&self, other: &FluxVector) -> FluxVector {
        FluxVector {
            vars: self.vars.clone(),
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(Expr::is_zero)
    }

    fn add_to(&mut self, var: &Sym, e: Expr) -> Result<()> {
        let i = self
            .vars
            .iter()
            .position(|v| v == var)
            .ok_or_else(|| Error::Dimension(format!("no independent variable {var}")))?;
        self.comps[i] = &self.comps[i] + &e;
        Ok(())
    }
}

fn jet_gen(dep: &Sym, j: &MultiIndex) -> Gen {
    Gen::intern(Atom::Jet { dep: dep.clone(), index: j.clone() })
}

/// Coefficients `d e / d u^a_J` for every jet of `dep` present.
fn jet_partials(e: &Expr, dep: &str) -> BTreeMap<MultiIndex, Expr> {
    let mut out = BTreeMap::new();
    for (d, j) in e.jets() {
        if &*d != dep {
            continue;
        }
        let p = atom_partial(e, jet_gen(&d, &j));
        if !p.is_zero() {
            out.insert(j, p);
        }
    }
    out
}

/// Euler operator `E_a e = sum_J (-D)_J de/du^a_J`, evaluated by nesting
/// along the tree whose parent of `J` drops its largest variable.
pub fn euler(e: &Expr, dep: &str) -> Expr {
    let partials = jet_partials(e, dep);
    if partials.is_empty() {
        return Expr::zero();
    }
    let mut acc: BTreeMap<MultiIndex, Expr> = BTreeMap::new();
    for (j, p) in partials {
        let mut k = j.clone();
        while let Some(last) = k.vars().last().cloned() {
            k = k.without(&last).expect("contains last");
            acc.entry(k.clone()).or_insert_with(Expr::zero);
        }
        acc.insert(j, p);
    }
    let mut keys: Vec<MultiIndex> = acc.keys().cloned().collect();
    keys.sort_by(|a, b| b.cmp(a));
    for j in keys {
        if j.is_empty() {
            continue;
        }
        let q = acc.remove(&j).expect("present");
        if q.is_zero() {
            continue;
        }
        let last = j.vars().last().expect("nonempty").clone();
        let parent = j.without(&last).expect("contains last");
        let d = total_derivative(&q, &last);
        let slot = acc.get_mut(&parent).expect("closed under parents");
        *slot = &*slot - &d;
    }
    acc.remove(&MultiIndex::empty()).unwrap_or_else(Expr::zero)
}

/// All Euler components, in the order of `deps`.
pub fn euler_all(e: &Expr, deps: &[Sym]) -> Vec<Expr> {
    deps.iter().map(|d| euler(e, d)).collect()
}

/// Integration by parts of `sum g * D_J f_k` into `D_i flux^i + sum f_k r_k`.
///
/// `terms` holds `(k, J, g)`. Each term is peeled along the smallest
/// variable of `J`; terms with equal remaining index and equal `k` merge.
/// Returns the flux and the remainders `r_k`.
pub fn integrate_by_parts(
    vars: &[Sym],
    fs: &[Expr],
    terms: Vec<(usize, MultiIndex, Expr)>,
) -> Result<(FluxVector, Vec<Expr>)> {
    let mut flux = FluxVector::zero(vars);
    let mut acc: BTreeMap<(usize, MultiIndex), Expr> = BTreeMap::new();
    for (k, j, g) in terms {
        if g.is_zero() {
            continue;
        }
        let slot = acc.entry((k, j)).or_insert_with(Expr::zero);
        *slot = &*slot + &g;
    }
    let mut caches: Vec<DerivativeCache> = fs.iter().cloned().map(DerivativeCache::new).collect();
    let mut flux_parts: HashMap<Sym, Vec<Expr>> = HashMap::new();
    loop {
        let next = acc
            .iter()
            .filter(|((_, j), _)| !j.is_empty())
            .max_by(|a, b| a.0 .1.cmp(&b.0 .1).then_with(|| b.0 .0.cmp(&a.0 .0)))
            .map(|(key, _)| key.clone());
        let Some((k, j)) = next else { break };
        let g = acc.remove(&(k, j.clone())).expect("present");
        if g.is_zero() {
            continue;
        }
        let first = j.vars()[0].clone();
        let rest = j.without(&first).expect("contains first");
        let d_rest = caches[k].get(&rest);
        if !d_rest.is_zero() {
            flux_parts.entry(first.clone()).or_default().push(&g * &d_rest);
        }
        let dg = total_derivative(&g, &first);
        if !dg.is_zero() {
            let slot = acc.entry((k, rest)).or_insert_with(Expr::zero);
            *slot = &*slot - &dg;
        }
    }
    for v in vars {
        if let Some(parts) = flux_parts.remove(v) {
            flux.add_to(v, Expr::sum(parts))?;
        }
    }
    if let Some(v) = flux_parts.keys().next() {
        return Err(Error::Dimension(format!("no independent variable {v}")));
    }
    let mut rem = vec![Expr::zero(); fs.len()];
    for ((k, _), g) in acc {
        rem[k] = &rem[k] + &g;
    }
    Ok((flux, rem))
}

/// Fluxes `R^i e` with `X_alpha e = alpha^a E_a(e) + D_i R^i e`.
pub fn noether_remainder(vars: &[Sym], alpha: &Characteristic, e: &Expr) -> Result<FluxVector> {
    let mut terms = Vec::new();
    for (k, dep) in alpha.deps().iter().enumerate() {
        for (j, p) in jet_partials(e, dep) {
            if !j.is_empty() {
                terms.push((k, j, p));
            }
        }
    }
    for (dep, _) in e.jets() {
        if alpha.get(&dep).is_none() {
            return Err(Error::Dimension(format!("characteristic has no component for {dep}")));
        }
    }
    let (flux, _) = integrate_by_parts(vars, alpha.comps(), terms)?;
    Ok(flux)
}

/// Fluxes `Q^i` with
/// `beta^a (D_Delta alpha)_a - alpha^v (D*_Delta beta)_v = D_i Q^i`.
pub fn lagrange_fluxes(
    vars: &[Sym],
    deps: &[Sym],
    alpha: &[Expr],
    beta: &[Expr],
    delta: &[Expr],
) -> Result<FluxVector> {
    if alpha.len() != deps.len() || beta.len() != delta.len() {
        return Err(Error::Dimension("tuple lengths do not match the system".into()));
    }
    let op = frechet(delta, deps);
    let mut terms = Vec::new();
    for (a, b) in beta.iter().enumerate() {
        if b.is_zero() {
            continue;
        }
        for v in 0..deps.len() {
            for (j, c) in op.entry(a, v) {
                if !j.is_empty() {
                    terms.push((v, j.clone(), b * c));
                }
            }
        }
    }
    let (flux, _) = integrate_by_parts(vars, alpha, terms)?;
    Ok(flux)
}

/// Tries to write `p` as `D_i M^i` over `vars` by integrating its highest
/// jets by parts, one at a time, against the smallest admissible variable.
/// Returns `None` when no step applies or `max_steps` runs out; a returned
/// flux always satisfies the identity exactly.
pub fn invert_divergence(p: &Expr, vars: &[Sym], max_steps: usize) -> Option<FluxVector> {
    let mut flux = FluxVector::zero(vars);
    let mut rest = p.clone();
    for _ in 0..max_steps {
        if rest.is_zero() {
            return Some(flux);
        }
        let mut jets: Vec<(Sym, MultiIndex)> = rest
            .jets()
            .into_iter()
            .filter(|(_, j)| j.vars().iter().any(|v| vars.contains(v)))
            .collect();
        jets.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        let mut step = None;
        for (dep, j) in &jets {
            let g = jet_gen(dep, j);
            let c = atom_partial(&rest, g);
            if c.depends_on(g) {
                continue;
            }
            // prefer a variable whose lower jet already appears in c
            let mut cands: Vec<(&Sym, Gen)> = Vec::new();
            for v in j.vars().iter().filter(|v| vars.contains(v)) {
                if cands.iter().all(|(w, _)| *w != v) {
                    cands.push((v, jet_gen(dep, &j.without(v).expect("contains var"))));
                }
            }
            cands.sort_by_key(|(_, lower)| !c.depends_on(*lower));
            step = cands
                .into_iter()
                .find_map(|(v, lower)| antiderivative(&c, lower).map(|piece| (v.clone(), piece)));
            if step.is_some() {
                break;
            }
        }
        if step.is_none() && jets.is_empty() && rest.jets().is_empty() {
            // explicit functions of the independent variables
            for v in vars {
                let g = Gen::intern(Atom::Indep(v.clone()));
                if rest.depends_on(g) {
                    if let Some(piece) = antiderivative(&rest, g) {
                        step = Some((v.clone(), piece));
                        break;
                    }
                }
            }
        }
        let (var, piece) = step?;
        rest = &rest - &total_derivative(&piece, &var);
        flux.add_to(&var, piece).ok()?;
    }
    rest.is_zero().then_some(flux)
}
