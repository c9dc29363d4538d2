use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::report::{CheckConfig, CheckReport, Verdict};
use super::system::DifferentialSystem;
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::jet::{prolong_apply, Characteristic, MultiIndex};
use crate::variational::{
    euler_all, frechet, invert_divergence, lagrange_fluxes, noether_remainder,
    reduce_operator_cosymmetry, FluxVector, LinearDiffOperator,
};

const DIVERGENCE_STEPS: usize = 400;

pub(crate) fn tuple_string(es: &[Expr]) -> String {
    let parts: Vec<String> = es.iter().map(|e| e.to_string()).collect();
    format!("({})", parts.join(", "))
}

fn beta_subject(beta: &[Expr]) -> String {
    format!("beta = {}", tuple_string(beta))
}

fn alpha_subject(alpha: &Characteristic) -> String {
    format!("alpha = {}", tuple_string(alpha.comps()))
}

fn check_alpha(s: &DifferentialSystem, alpha: &Characteristic) -> Result<()> {
    if alpha.deps() != s.deps() {
        return Err(Error::Dimension(format!(
            "characteristic has {} components for {} dependent variables",
            alpha.deps().len(),
            s.deps().len()
        )));
    }
    Ok(())
}

fn reduce_all(s: &DifferentialSystem, es: &[Expr]) -> Result<Vec<Expr>> {
    es.iter().map(|e| s.on_shell_reduce(e)).collect()
}

fn constrain_all(s: &DifferentialSystem, es: &[Expr]) -> Result<Vec<Expr>> {
    es.iter().map(|e| s.apply_constraints(e)).collect()
}

/// `X_alpha Delta^a` vanishes on solutions for every equation.
pub fn check_symmetry(s: &DifferentialSystem, alpha: &Characteristic, cfg: &CheckConfig) -> Result<CheckReport> {
    let t0 = Instant::now();
    check_alpha(s, alpha)?;
    let xs: Vec<Expr> = s.residuals().iter().map(|d| prolong_apply(alpha, d)).collect::<Result<_>>()?;
    let res = reduce_all(s, &xs)?;
    Ok(CheckReport::from_residuals("symmetry", alpha_subject(alpha), res, cfg, t0))
}

/// `E_v(beta . Delta)` vanishes on solutions for every dependent variable.
pub fn check_cosymmetry(s: &DifferentialSystem, beta: &[Expr], cfg: &CheckConfig) -> Result<CheckReport> {
    let t0 = Instant::now();
    let e = euler_all(&s.pair(beta)?, s.deps());
    let res = reduce_all(s, &e)?;
    Ok(CheckReport::from_residuals("cosymmetry", beta_subject(beta), res, cfg, t0))
}

/// `E_v(beta . Delta)` vanishes identically.
pub fn check_characteristic(s: &DifferentialSystem, beta: &[Expr], cfg: &CheckConfig) -> Result<CheckReport> {
    let t0 = Instant::now();
    let e = euler_all(&s.pair(beta)?, s.deps());
    let res = constrain_all(s, &e)?;
    Ok(CheckReport::from_residuals("characteristic", beta_subject(beta), res, cfg, t0))
}

/// The adjoint-symmetry determining equations `(D*_Delta beta)_v` on
/// solutions; equivalent to [`check_cosymmetry`].
pub fn check_adjoint_symmetry(s: &DifferentialSystem, beta: &[Expr], cfg: &CheckConfig) -> Result<CheckReport> {
    let t0 = Instant::now();
    if beta.len() != s.equations().len() {
        return Err(Error::Dimension("multiplier length does not match the system".into()));
    }
    let e = frechet(&s.residuals(), s.deps()).adjoint().apply(beta)?;
    let res = reduce_all(s, &e)?;
    Ok(CheckReport::from_residuals("adjoint-symmetry", beta_subject(beta), res, cfg, t0))
}

/// A verified (or not) flux together with its extracted characteristic.
#[derive(Clone, Debug)]
pub struct ConservationLaw {
    pub flux: FluxVector,
    /// `gamma` with `D_i K^i = gamma . Delta + D_i(...)`; exact equality
    /// without the trailing divergence when `exact_characteristic` holds.
    pub characteristic: Option<Vec<Expr>>,
    pub exact_characteristic: bool,
    pub report: CheckReport,
}

/// `D_i K^i` vanishes on solutions.
pub fn check_conservation_law(s: &DifferentialSystem, k: &FluxVector, cfg: &CheckConfig) -> Result<ConservationLaw> {
    let t0 = Instant::now();
    if k.vars != s.indeps() {
        return Err(Error::Dimension("flux components do not match the independent variables".into()));
    }
    let div = k.divergence();
    let (rem, gamma) = s.decompose(&div)?;
    let report = CheckReport::from_residuals(
        "claw",
        format!("K = {}", tuple_string(&k.comps)),
        vec![rem],
        cfg,
        t0,
    );
    let mut characteristic = None;
    let mut exact = false;
    if report.is_verified() {
        exact = (0..gamma.cols()).all(|c| gamma.entry(0, c).keys().all(MultiIndex::is_empty));
        characteristic = Some(reduce_operator_cosymmetry(&gamma));
    }
    Ok(ConservationLaw { flux: k.clone(), characteristic, exact_characteristic: exact, report })
}

/// Kinds of conservation-law triviality.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Triviality {
    /// Every flux component vanishes on solutions.
    #[serde(rename = "trivial-1")]
    Trivial1,
    /// The divergence vanishes identically.
    #[serde(rename = "trivial-2")]
    Trivial2,
    /// Characteristic vanishes on solutions: a sum of both kinds.
    CombinedTrivial,
    Nontrivial,
    Inconclusive,
}

impl std::fmt::Display for Triviality {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Triviality::Trivial1 => "trivial-1",
            Triviality::Trivial2 => "trivial-2",
            Triviality::CombinedTrivial => "combined-trivial",
            Triviality::Nontrivial => "nontrivial",
            Triviality::Inconclusive => "inconclusive",
        })
    }
}

pub fn check_triviality(s: &DifferentialSystem, law: &ConservationLaw) -> Result<Triviality> {
    if !law.report.is_verified() {
        return Ok(Triviality::Inconclusive);
    }
    if reduce_all(s, &law.flux.comps)?.iter().all(Expr::is_zero) {
        return Ok(Triviality::Trivial1);
    }
    if s.apply_constraints(&law.flux.divergence())?.is_zero() {
        return Ok(Triviality::Trivial2);
    }
    match &law.characteristic {
        Some(g) => {
            if reduce_all(s, g)?.iter().all(Expr::is_zero) {
                Ok(Triviality::CombinedTrivial)
            } else {
                Ok(Triviality::Nontrivial)
            }
        }
        None => Ok(Triviality::Inconclusive),
    }
}

#[derive(Clone, Debug)]
pub struct NoetherOutcome {
    pub cosymmetry: CheckReport,
    pub symmetry: CheckReport,
    pub law: Option<ConservationLaw>,
    pub triviality: Option<Triviality>,
}

/// Fluxes `R^i(beta . Delta)` for a cosymmetry and a symmetry, checked as a
/// conservation law. No flux is produced if either input fails its check.
pub fn noether_flux(
    s: &DifferentialSystem,
    beta: &[Expr],
    alpha: &Characteristic,
    cfg: &CheckConfig,
) -> Result<NoetherOutcome> {
    let cosymmetry = check_cosymmetry(s, beta, cfg)?;
    let symmetry = check_symmetry(s, alpha, cfg)?;
    if !cosymmetry.is_verified() || !symmetry.is_verified() {
        return Ok(NoetherOutcome { cosymmetry, symmetry, law: None, triviality: None });
    }
    let flux = noether_remainder(s.indeps(), alpha, &s.pair(beta)?)?;
    let law = check_conservation_law(s, &flux, cfg)?;
    let triviality = check_triviality(s, &law)?;
    Ok(NoetherOutcome { cosymmetry, symmetry, law: Some(law), triviality: Some(triviality) })
}

/// `B* alpha - A*(1)` on solutions, where `X_alpha(beta . Delta) = A Delta`
/// and `E(beta . Delta) = B Delta`. `None` when either decomposition leaves
/// a nonzero remainder.
pub fn nontriviality_certificate(
    s: &DifferentialSystem,
    beta: &[Expr],
    alpha: &Characteristic,
) -> Result<Option<Vec<Expr>>> {
    check_alpha(s, alpha)?;
    let e = s.pair(beta)?;
    let (rem, a) = s.decompose(&prolong_apply(alpha, &e)?)?;
    if !rem.is_zero() {
        return Ok(None);
    }
    let n = s.equations().len();
    let mut b = LinearDiffOperator::zero(s.deps().len(), n);
    for (v, ev) in euler_all(&e, s.deps()).iter().enumerate() {
        let (rem, row) = s.decompose(ev)?;
        if !rem.is_zero() {
            return Ok(None);
        }
        for c in 0..n {
            for (j, coeff) in row.entry(0, c) {
                b.add_term(v, c, j.clone(), coeff.clone());
            }
        }
    }
    let ba = b.adjoint().apply(alpha.comps())?;
    let a1 = a.adjoint().apply(&[Expr::one()])?;
    let cert: Vec<Expr> = ba.iter().zip(&a1).map(|(x, y)| x - y).collect();
    Ok(Some(reduce_all(s, &cert)?))
}

/// `E(L) = T . Delta` identically, with `T` nondegenerate on solutions.
pub fn verify_quasi_lagrangian(
    s: &DifferentialSystem,
    l: &Expr,
    t: &LinearDiffOperator,
    cfg: &CheckConfig,
) -> Result<CheckReport> {
    let t0 = Instant::now();
    if t.rows() != s.deps().len() || t.cols() != s.equations().len() {
        return Err(Error::Dimension(format!(
            "operator is {}x{}, system needs {}x{}",
            t.rows(),
            t.cols(),
            s.deps().len(),
            s.equations().len()
        )));
    }
    let el = euler_all(l, s.deps());
    let td = t.apply(&s.residuals())?;
    let res: Vec<Expr> = el.iter().zip(&td).map(|(a, b)| a - b).collect();
    let res = constrain_all(s, &res)?;
    let subject = format!("L = {}, T = {}", l, t);
    let report = CheckReport::from_residuals("quasilagrangian", subject, res, cfg, t0);
    let mut nondegenerate = false;
    let mut err = None;
    t.all_coeffs(&mut |c| {
        match s.on_shell_reduce(c) {
            Ok(r) if !r.is_zero() => nondegenerate = true,
            Ok(_) => {}
            Err(e) => err = Some(e),
        }
        true
    });
    if let Some(e) = err {
        return Err(e);
    }
    if report.is_verified() && !nondegenerate {
        return Ok(report.with_verdict(Verdict::Refuted, "operator vanishes on solutions"));
    }
    Ok(report)
}

#[derive(Clone, Debug)]
pub struct VariationalSymmetry {
    pub report: CheckReport,
    /// `M^i` with `X_alpha L = D_i M^i`, when integration by parts succeeds.
    pub divergence: Option<FluxVector>,
}

/// `X_alpha L` is a total divergence, tested by `E(X_alpha L) = 0`.
pub fn check_variational_symmetry(
    s: &DifferentialSystem,
    l: &Expr,
    alpha: &Characteristic,
    cfg: &CheckConfig,
) -> Result<VariationalSymmetry> {
    let t0 = Instant::now();
    check_alpha(s, alpha)?;
    let xl = s.apply_constraints(&prolong_apply(alpha, l)?)?;
    let res = constrain_all(s, &euler_all(&xl, s.deps()))?;
    let report = CheckReport::from_residuals(
        "varsym",
        format!("L = {}, {}", l, alpha_subject(alpha)),
        res,
        cfg,
        t0,
    );
    let divergence = if report.is_verified() {
        invert_divergence(&xl, s.indeps(), DIVERGENCE_STEPS)
    } else {
        None
    };
    Ok(VariationalSymmetry { report, divergence })
}

/// `X_alpha (T . Delta)_v` vanishes on solutions.
pub fn check_subsymmetry(
    s: &DifferentialSystem,
    alpha: &Characteristic,
    t: &LinearDiffOperator,
    cfg: &CheckConfig,
) -> Result<CheckReport> {
    let t0 = Instant::now();
    check_alpha(s, alpha)?;
    let td = t.apply(&s.residuals())?;
    let xs: Vec<Expr> = td.iter().map(|e| prolong_apply(alpha, e)).collect::<Result<_>>()?;
    let res = reduce_all(s, &xs)?;
    Ok(CheckReport::from_residuals("subsym", format!("{}, T = {}", alpha_subject(alpha), t), res, cfg, t0))
}

/// Lagrange-identity fluxes `Q^i` for the system's residuals.
pub fn system_lagrange_fluxes(s: &DifferentialSystem, alpha: &[Expr], beta: &[Expr]) -> Result<FluxVector> {
    lagrange_fluxes(s.indeps(), s.deps(), alpha, beta, &s.residuals())
}

/// Flux `X` with `D_t T + D_x X` vanishing on solutions, reconstructed from
/// the on-shell value of `-D_t T` for a system in two variables.
pub fn reconstruct_flux(s: &DifferentialSystem, density: &Expr, time: &str) -> Result<Option<FluxVector>> {
    let space: Vec<_> = s.indeps().iter().filter(|v| &***v != time).cloned().collect();
    let dt = crate::jet::total_derivative(density, time);
    let p = -s.on_shell_reduce(&dt)?;
    let Some(m) = invert_divergence(&p, &space, DIVERGENCE_STEPS) else {
        return Ok(None);
    };
    let comps = s
        .indeps()
        .iter()
        .map(|v| if &**v == time { density.clone() } else { m.get(v).clone() })
        .collect();
    Ok(Some(FluxVector::new(s.indeps(), comps)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::sym;
    use crate::jet::total_derivative;

    fn u(v: &[&str]) -> Expr {
        Expr::u("u", v)
    }

    fn kdv() -> DifferentialSystem {
        let rhs = -(&u(&[]) * &u(&["x"])) - u(&["x", "x", "x"]);
        DifferentialSystem::scalar(&["t", "x"], "u", &["t"], rhs).unwrap()
    }

    fn heat() -> DifferentialSystem {
        DifferentialSystem::scalar(&["t", "x"], "u", &["t"], u(&["x", "x"])).unwrap()
    }

    fn heat_beta() -> Expr {
        let b = Expr::constant("b");
        Expr::exp(&b * &Expr::indep("x") - b.pow(2).unwrap() * Expr::indep("t"))
    }

    fn cfg() -> CheckConfig {
        CheckConfig::default()
    }

    #[test]
    fn kdv_translation_is_a_symmetry() {
        let r = check_symmetry(&kdv(), &Characteristic::scalar("u", u(&["x"])), &cfg()).unwrap();
        assert_eq!(r.verdict, Verdict::Verified);
    }

    #[test]
    fn cosymmetry_examples() {
        assert!(check_cosymmetry(&heat(), &[heat_beta()], &cfg()).unwrap().is_verified());
        let burgers = DifferentialSystem::scalar(
            &["t", "x"],
            "u",
            &["t"],
            u(&["x", "x"]) - &u(&[]) * &u(&["x"]),
        )
        .unwrap();
        assert_eq!(check_cosymmetry(&burgers, &[u(&[])], &cfg()).unwrap().verdict, Verdict::Refuted);
    }

    #[test]
    fn characteristic_examples() {
        let beta = Expr::indep("x") - &Expr::indep("t") * &u(&[]);
        assert!(check_characteristic(&kdv(), &[beta], &cfg()).unwrap().is_verified());
        assert_eq!(check_characteristic(&heat(), &[u(&[])], &cfg()).unwrap().verdict, Verdict::Refuted);
    }

    #[test]
    fn kdv_time_dependent_law() {
        let (x, t) = (Expr::indep("x"), Expr::indep("t"));
        let uu = u(&[]);
        let half = Expr::rational(1, 2);
        let tt = &x * &uu - &t * &uu.pow(2).unwrap() * &half;
        let xx = &t
            * &(&u(&["x"]).pow(2).unwrap() * &half
                - &uu * &u(&["x", "x"])
                - uu.pow(3).unwrap() * Expr::rational(1, 3))
            + &x * &uu.pow(2).unwrap() * &half
            + &x * &u(&["x", "x"])
            - u(&["x"]);
        let k = FluxVector::new(&[sym("t"), sym("x")], vec![tt.clone(), xx.clone()]).unwrap();
        let law = check_conservation_law(&kdv(), &k, &cfg()).unwrap();
        assert!(law.report.is_verified());
        assert!(law.exact_characteristic);
        let gamma = &law.characteristic.as_ref().unwrap()[0];
        assert!(gamma.same(&(&x - &t * &uu)));
        assert_eq!(check_triviality(&kdv(), &law).unwrap(), Triviality::Nontrivial);
        let rebuilt = reconstruct_flux(&kdv(), &tt, "t").unwrap().unwrap();
        assert!(check_conservation_law(&kdv(), &rebuilt, &cfg()).unwrap().report.is_verified());
    }

    #[test]
    fn triviality_kinds() {
        let s = heat();
        let vars = [sym("t"), sym("x")];
        let k1 = FluxVector::new(&vars, vec![s.residuals()[0].clone(), Expr::zero()]).unwrap();
        let l1 = check_conservation_law(&s, &k1, &cfg()).unwrap();
        assert_eq!(check_triviality(&s, &l1).unwrap(), Triviality::Trivial1);
        let k2 = FluxVector::new(&vars, vec![u(&["x"]), -u(&["t"])]).unwrap();
        let l2 = check_conservation_law(&s, &k2, &cfg()).unwrap();
        assert_eq!(check_triviality(&s, &l2).unwrap(), Triviality::Trivial2);
    }

    #[test]
    fn heat_noether_law_is_nontrivial() {
        let s = heat();
        let beta = heat_beta();
        let alpha = Characteristic::scalar("u", u(&["x"]));
        let out = noether_flux(&s, &[beta.clone()], &alpha, &cfg()).unwrap();
        let law = out.law.unwrap();
        assert!(law.report.is_verified());
        assert_eq!(out.triviality, Some(Triviality::Nontrivial));
        let cert = nontriviality_certificate(&s, &[beta.clone()], &alpha).unwrap().unwrap();
        assert!(!cert[0].is_zero());
        let zero = Characteristic::scalar("u", Expr::zero());
        let cert0 = nontriviality_certificate(&s, &[beta], &zero).unwrap().unwrap();
        assert!(cert0[0].is_zero());
    }

    #[test]
    fn genuine_lagrangian_is_quasi_lagrangian() {
        let s = DifferentialSystem::new(
            vec![sym("x")],
            vec![sym("u")],
            vec![crate::systems::Equation {
                name: "eq".into(),
                dep: sym("u"),
                lead: MultiIndex::new(["x", "x"]),
                rhs: Expr::zero(),
            }],
            vec![],
        )
        .unwrap();
        // residual u_xx = -E(u_x^2/2)
        let l = -(u(&["x"]).pow(2).unwrap() * Expr::rational(1, 2));
        let r = verify_quasi_lagrangian(&s, &l, &LinearDiffOperator::identity(1), &cfg()).unwrap();
        assert!(r.is_verified(), "{r}");
        let t = LinearDiffOperator::scalar(MultiIndex::empty(), Expr::zero());
        let r = verify_quasi_lagrangian(&s, &l, &t, &cfg()).unwrap();
        assert_ne!(r.verdict, Verdict::Verified);
    }

    #[test]
    fn variational_symmetry_emits_divergence() {
        let s = heat();
        let l = u(&["x"]).pow(2).unwrap() * Expr::rational(1, 2);
        let v = check_variational_symmetry(&s, &l, &Characteristic::scalar("u", u(&["x"])), &cfg()).unwrap();
        assert!(v.report.is_verified());
        let m = v.divergence.unwrap();
        assert!((m.divergence() - total_derivative(&l, "x")).is_zero());
    }

    #[test]
    fn symmetry_is_subsymmetry() {
        let r = check_subsymmetry(
            &kdv(),
            &Characteristic::scalar("u", u(&["x"])),
            &LinearDiffOperator::identity(1),
            &cfg(),
        )
        .unwrap();
        assert!(r.is_verified());
    }
}
