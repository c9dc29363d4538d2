//! Worked examples as data: each `.sys` file is a system followed by
//! `item` labels and `claim` lines, checked by [`run_corpus`].
//!
//! ```text
//! claim <check> <exprs> [with <exprs>]* [span <exprs>] expect <verdict>
//!       mode <exact|numeric> anchor "<quote>" [;]
//! ```
//! Checks taking a name instead of expressions (`critical`, `evolution`)
//! are written `claim critical "kdv-xt" ...`.

use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::cli::parser::{describe, perr, Parser, Scope, SystemDecls, SystemFile};
use crate::error::{Error, Result};
use crate::expr::Expr;
use crate::finder::{find_characteristics, find_cosymmetries, AnsatzBasis};
use crate::jet::{prolong_apply, Characteristic};
use crate::numeval::{critical_evolution, critical_point_check, EvolutionSetup};
use crate::systems::{
    check_adjoint_symmetry, check_characteristic, check_conservation_law, check_cosymmetry, check_subsymmetry,
    check_symmetry, check_triviality, check_variational_symmetry, noether_flux, nontriviality_certificate,
    reconstruct_flux, system_lagrange_fluxes, tuple_string, verify_quasi_lagrangian, CheckConfig, CheckReport,
    ResidualSummary, Triviality, Verdict, VerifyMode,
};
use crate::variational::{
    euler_all, frechet, helmholtz_defect, lagrange_fluxes, noether_remainder, reduce_operator_cosymmetry, FluxVector,
};

/// Trials used by numeric-mode claims.
pub const NUMERIC_TRIALS: usize = 200;
/// Trials used by closed-form critical-point claims.
pub const CRITICAL_TRIALS: usize = 100;
/// Largest deviation from the critical manifold accepted by `evolution`.
pub const EVOLUTION_TOL: f64 = 1e-3;

pub const CHECKS: [&str; 30] = [
    "cosymmetry",
    "characteristic",
    "adjoint-symmetry",
    "symmetry",
    "claw",
    "density",
    "varsym",
    "subsym",
    "quasilagrangian",
    "euler-equals",
    "zero",
    "onshell-zero",
    "equal",
    "onshell-equal",
    "adjoint-onshell-equals",
    "divergence-equals",
    "noether-flux",
    "nontrivial",
    "find-cosymmetry",
    "find-characteristic",
    "critical",
    "evolution",
    "noether-identity",
    "lagrange-identity",
    "lagrange-noether",
    "product-rule",
    "helmholtz",
    "operator-cosymmetry",
    "trivial",
    "variational-law",
];

/// Expression groups each check expects; `None` for named checks.
fn arity(check: &str) -> Option<std::ops::RangeInclusive<usize>> {
    Some(match check {
        "critical" | "evolution" => return None,
        "varsym" | "subsym" | "quasilagrangian" | "euler-equals" | "equal" | "onshell-equal"
        | "adjoint-onshell-equals" | "divergence-equals" | "nontrivial" | "noether-identity"
        | "lagrange-identity" | "lagrange-noether" | "variational-law" => 2..=2,
        "noether-flux" => 2..=3,
        _ => 1..=1,
    })
}

#[derive(Clone, Debug)]
pub struct Claim {
    pub check: String,
    /// Expression groups separated by `with`.
    pub groups: Vec<Vec<Expr>>,
    /// Name argument of `critical` and `evolution`.
    pub name: Option<String>,
    /// Expected solution span of a finder claim.
    pub span: Option<Vec<Expr>>,
    pub expect: Verdict,
    pub mode: VerifyMode,
    pub anchor: String,
    pub line: usize,
}

#[derive(Clone, Debug)]
pub struct CorpusItem {
    pub id: String,
    pub source: PathBuf,
    pub file: Arc<SystemFile>,
    pub claims: Vec<Claim>,
}

fn claim(p: &mut Parser) -> Result<Claim> {
    let (check, ct) = p.word()?;
    if !CHECKS.contains(&check.as_str()) {
        return perr(&ct, format!("unknown check {check}"));
    }
    let mut groups = Vec::new();
    let mut name = None;
    match arity(&check) {
        None => name = Some(p.string()?),
        Some(range) => {
            groups.push(p.exprs()?);
            while p.is_ident("with") {
                p.next();
                groups.push(p.exprs()?);
            }
            if !range.contains(&groups.len()) {
                return perr(&ct, format!("{check} takes {range:?} expression groups, found {}", groups.len()));
            }
        }
    }
    let mut span = None;
    if p.is_ident("span") {
        if !check.starts_with("find-") {
            return perr(p.peek(), "span only applies to find-cosymmetry and find-characteristic");
        }
        p.next();
        span = Some(p.exprs()?);
    }
    let kw = |p: &mut Parser, k: &str| -> Result<()> {
        if p.is_ident(k) {
            p.next();
            Ok(())
        } else {
            let t = p.peek().clone();
            perr(&t, format!("expected '{k}', found {}", describe(&t.tok)))
        }
    };
    kw(p, "expect")?;
    let (v, vt) = p.word()?;
    let expect: Verdict = v.parse().or_else(|e: String| perr(&vt, e))?;
    kw(p, "mode")?;
    let (m, mt) = p.word()?;
    let mode: VerifyMode = m.parse().or_else(|e: String| perr(&mt, e))?;
    kw(p, "anchor")?;
    let anchor = p.string()?;
    p.eat_punct(';');
    Ok(Claim { check, groups, name, span, expect, mode, anchor, line: ct.line })
}

/// Parses one item file; claims before any `item` line belong to an item
/// named after the file.
pub fn parse_items(text: &str, source: &Path) -> Result<Vec<CorpusItem>> {
    Ok(parse_item_file(text, source)?.1)
}

/// The system of an item file together with its items. Plain system files
/// parse with no items.
pub fn parse_item_file(text: &str, source: &Path) -> Result<(Arc<SystemFile>, Vec<CorpusItem>)> {
    let stem = source.file_stem().and_then(|s| s.to_str()).unwrap_or("item").to_string();
    let mut p = Parser::new(text, Scope::default())?;
    let mut decls = SystemDecls::default();
    let mut groups: Vec<(String, Vec<Claim>)> = Vec::new();
    let mut current = stem;
    let mut claimed = false;
    while !p.at_eof() {
        let t = p.peek().clone();
        if p.is_ident("item") {
            p.next();
            let (id, it) = p.word()?;
            if groups.iter().any(|(g, _)| *g == id) {
                return perr(&it, format!("item {id} appears twice"));
            }
            p.expect_punct(';')?;
            current = id;
            continue;
        }
        if p.is_ident("claim") {
            p.next();
            let c = claim(&mut p)?;
            claimed = true;
            match groups.iter_mut().find(|(g, _)| *g == current) {
                Some((_, cs)) => cs.push(c),
                None => groups.push((current.clone(), vec![c])),
            }
            continue;
        }
        if (p.is_ident("eq") || p.is_ident("rule")) && claimed {
            return perr(&t, "equations and rules must precede the claims");
        }
        if !p.decl(&mut decls)? {
            return perr(&t, format!("expected a declaration, item or claim, found {}", describe(&t.tok)));
        }
    }
    let file = Arc::new(SystemFile::from_parts(p.scope, decls)?);
    let items = groups
        .into_iter()
        .map(|(id, claims)| CorpusItem { id, source: source.to_path_buf(), file: file.clone(), claims })
        .collect();
    Ok((file, items))
}

fn located(e: Error, source: &Path) -> Error {
    match e {
        Error::Parse { line, col, msg } => Error::Parse { line, col, msg: format!("{}: {msg}", source.display()) },
        other => Error::Invalid(format!("{}: {other}", source.display())),
    }
}

/// Directory of the bundled item files.
pub fn default_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus")
}

/// All items of the `.sys` files in `dir`, ordered by file name.
pub fn load_corpus(dir: &Path) -> Result<Vec<CorpusItem>> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "sys"))
        .collect();
    files.sort();
    let mut out: Vec<CorpusItem> = Vec::new();
    for f in files {
        let text = std::fs::read_to_string(&f)?;
        for item in parse_items(&text, &f).map_err(|e| located(e, &f))? {
            if out.iter().any(|o| o.id == item.id) {
                return Err(Error::Invalid(format!("item {} defined in two files", item.id)));
            }
            out.push(item);
        }
    }
    Ok(out)
}

/// Shell-style match with `*` and `?`.
pub fn glob_match(pattern: &str, text: &str) -> bool {
    fn go(p: &[char], t: &[char]) -> bool {
        match p.split_first() {
            None => t.is_empty(),
            Some(('*', rest)) => (0..=t.len()).any(|k| go(rest, &t[k..])),
            Some(('?', rest)) => !t.is_empty() && go(rest, &t[1..]),
            Some((c, rest)) => t.first() == Some(c) && go(rest, &t[1..]),
        }
    }
    let p: Vec<char> = pattern.chars().collect();
    let t: Vec<char> = text.chars().collect();
    go(&p, &t)
}

/// One executed claim.
#[derive(Clone, Debug, Serialize)]
pub struct ClaimOutcome {
    pub item: String,
    pub anchor: String,
    pub expected: Verdict,
    #[serde(flatten)]
    pub report: CheckReport,
}

impl ClaimOutcome {
    pub fn matches(&self) -> bool {
        self.report.verdict == self.expected
    }
}

/// Runs every claim of the items whose id matches `filter`, concurrently,
/// reporting in file and claim order.
pub fn run_corpus(dir: &Path, filter: Option<&str>, cfg: &CheckConfig) -> Result<Vec<ClaimOutcome>> {
    let items = load_corpus(dir)?;
    let jobs: Vec<(&CorpusItem, &Claim)> = items
        .iter()
        .filter(|i| filter.is_none_or(|f| glob_match(f, &i.id)))
        .flat_map(|i| i.claims.iter().map(move |c| (i, c)))
        .collect();
    Ok(jobs.into_par_iter().map(|(item, c)| run_claim(item, c, cfg)).collect())
}

/// Runs one claim; failures to evaluate become inconclusive reports.
pub fn run_claim(item: &CorpusItem, c: &Claim, base: &CheckConfig) -> ClaimOutcome {
    let t0 = Instant::now();
    let mut cfg = base.clone();
    cfg.mode = c.mode;
    if c.mode == VerifyMode::Numeric {
        cfg.numeric.trials = cfg.numeric.trials.max(NUMERIC_TRIALS);
    }
    let mut report = evaluate(&item.file, c, &cfg).unwrap_or_else(|e| {
        let mut r = CheckReport::from_residuals(&c.check, describe_claim(c), vec![], &cfg, t0);
        r.verdict = Verdict::Inconclusive;
        r.notes.push(format!("error: {e}"));
        r
    });
    report.subject = format!("{}: {}", item.id, report.subject);
    ClaimOutcome { item: item.id.clone(), anchor: c.anchor.clone(), expected: c.expect, report }
}

fn describe_claim(c: &Claim) -> String {
    match &c.name {
        Some(n) => n.clone(),
        None => c.groups.iter().map(|g| tuple_string(g)).collect::<Vec<_>>().join(" with "),
    }
}

fn dot(a: &[Expr], b: &[Expr]) -> Expr {
    a.iter().zip(b).fold(Expr::zero(), |acc, (x, y)| acc + x * y)
}

fn evaluate(file: &SystemFile, c: &Claim, cfg: &CheckConfig) -> Result<CheckReport> {
    let t0 = Instant::now();
    let s = file.system();
    let g = |k: usize| c.groups[k].as_slice();
    let alpha = |k: usize| Characteristic::new(s.deps().to_vec(), g(k).to_vec());
    let single = |k: usize| -> Result<Expr> {
        match g(k) {
            [e] => Ok(e.clone()),
            _ => Err(Error::Invalid(format!("{} expects a single expression", c.check))),
        }
    };
    let plain = |name: &str, res: Vec<Expr>| CheckReport::from_residuals(name, describe_claim(c), res, cfg, t0);
    let constrain = |es: Vec<Expr>| -> Result<Vec<Expr>> { es.iter().map(|e| s.apply_constraints(e)).collect() };
    let reduce = |es: Vec<Expr>| -> Result<Vec<Expr>> { es.iter().map(|e| s.on_shell_reduce(e)).collect() };
    let diff = |a: &[Expr], b: &[Expr]| -> Result<Vec<Expr>> {
        if a.len() != b.len() {
            return Err(Error::Dimension(format!("{} against {} components", a.len(), b.len())));
        }
        Ok(a.iter().zip(b).map(|(x, y)| x - y).collect())
    };
    Ok(match c.check.as_str() {
        "cosymmetry" => check_cosymmetry(s, g(0), cfg)?,
        "characteristic" => check_characteristic(s, g(0), cfg)?,
        "adjoint-symmetry" => check_adjoint_symmetry(s, g(0), cfg)?,
        "symmetry" => check_symmetry(s, &alpha(0)?, cfg)?,
        "claw" => check_conservation_law(s, &FluxVector::new(s.indeps(), g(0).to_vec())?, cfg)?.report,
        "density" => {
            let time = s.indeps()[0].clone();
            match reconstruct_flux(s, &single(0)?, &time)? {
                Some(k) => check_conservation_law(s, &k, cfg)?.report,
                None => plain("density", vec![single(0)?])
                    .with_verdict(Verdict::Inconclusive, "no flux found for the density"),
            }
        }
        "varsym" => check_variational_symmetry(s, &single(0)?, &alpha(1)?, cfg)?.report,
        "subsym" => check_subsymmetry(s, &alpha(0)?, &file.operator(g(1))?, cfg)?,
        "quasilagrangian" => verify_quasi_lagrangian(s, &single(0)?, &file.operator(g(1))?, cfg)?,
        "euler-equals" => plain("euler-equals", constrain(diff(&euler_all(&single(0)?, s.deps()), g(1))?)?),
        "zero" => plain("zero", constrain(g(0).to_vec())?),
        "onshell-zero" => plain("onshell-zero", reduce(g(0).to_vec())?),
        "equal" => plain("equal", constrain(diff(g(0), g(1))?)?),
        "onshell-equal" => plain("onshell-equal", reduce(diff(g(0), g(1))?)?),
        "adjoint-onshell-equals" => {
            let adj = frechet(&s.residuals(), s.deps()).adjoint().apply(g(0))?;
            plain("adjoint-onshell-equals", reduce(diff(&adj, g(1))?)?)
        }
        "divergence-equals" => {
            let k = FluxVector::new(s.indeps(), g(0).to_vec())?;
            plain("divergence-equals", constrain(vec![k.divergence() - single(1)?])?)
        }
        "noether-flux" => {
            let out = noether_flux(s, g(0), &alpha(1)?, cfg)?;
            match out.law {
                None => {
                    let which = if out.cosymmetry.is_verified() { "symmetry" } else { "cosymmetry" };
                    plain("noether-flux", vec![]).with_verdict(Verdict::Refuted, format!("{which} check failed"))
                }
                Some(law) if c.groups.len() == 3 => {
                    let expected = FluxVector::new(s.indeps(), g(2).to_vec())?;
                    let gap = law.flux.sub(&expected).divergence();
                    let mut r = plain("noether-flux", constrain(vec![gap])?);
                    if !law.report.is_verified() {
                        r = r.with_verdict(law.report.verdict, "flux is not conserved");
                    }
                    r
                }
                Some(law) => law.report,
            }
        }
        "nontrivial" => match nontriviality_certificate(s, g(0), &alpha(1)?)? {
            None => plain("nontrivial", vec![]).with_verdict(Verdict::Inconclusive, "no decomposition"),
            Some(cert) => {
                let zero = cert.iter().all(Expr::is_zero);
                let mut r = plain("nontrivial", vec![]);
                r.residual = ResidualSummary { symbolic_terms: cert.iter().map(Expr::term_count).sum(), numeric_max: None };
                r.residuals = cert;
                r.verdict = if zero { Verdict::Refuted } else { Verdict::Verified };
                r
            }
        },
        "find-cosymmetry" | "find-characteristic" => {
            let basis = AnsatzBasis::scalar(g(0).to_vec())?;
            let space = if c.check == "find-cosymmetry" {
                find_cosymmetries(s, &basis)?
            } else {
                find_characteristics(s, &basis)?
            };
            let found: Vec<String> = space.multipliers().iter().map(|m| tuple_string(m)).collect();
            let mut r = plain(&c.check, vec![]);
            r.subject = format!("{} found span{{{}}}", r.subject, found.join(", "));
            let ok = match &c.span {
                None => !space.is_empty(),
                Some(span) => {
                    let coords: Option<Vec<_>> = span.iter().map(|e| basis.coordinates(&[e.clone()])).collect();
                    coords.is_some_and(|cs| space.spanned_by(&cs))
                }
            };
            if !ok {
                r.verdict = Verdict::Refuted;
            }
            r
        }
        "critical" => {
            let mut cc = cfg.clone();
            cc.numeric.trials = CRITICAL_TRIALS;
            critical_point_check(c.name.as_deref().unwrap_or_default(), &cc)?
        }
        "evolution" => {
            let id = c.name.as_deref().unwrap_or_default();
            let dev = critical_evolution(id, &EvolutionSetup::standard(id)?)?;
            let mut r = plain("evolution", vec![]);
            r.residual = ResidualSummary { symbolic_terms: 0, numeric_max: Some(dev) };
            r.verdict = if dev < EVOLUTION_TOL { Verdict::Verified } else { Verdict::Refuted };
            r
        }
        "noether-identity" => {
            let (e, a) = (single(0)?, alpha(1)?);
            let r = noether_remainder(s.indeps(), &a, &e)?;
            let ae = dot(a.comps(), &euler_all(&e, s.deps()));
            plain("noether-identity", constrain(vec![prolong_apply(&a, &e)? - ae - r.divergence()])?)
        }
        "lagrange-identity" => {
            let (b, a) = (g(0), alpha(1)?);
            let op = frechet(&s.residuals(), s.deps());
            let q = system_lagrange_fluxes(s, a.comps(), b)?;
            let lhs = dot(b, &op.apply(a.comps())?) - dot(a.comps(), &op.adjoint().apply(b)?);
            plain("lagrange-identity", constrain(vec![lhs - q.divergence()])?)
        }
        "lagrange-noether" => {
            let (b, a) = (g(0), alpha(1)?);
            let delta = s.residuals();
            let e = s.pair(b)?;
            let q1 = system_lagrange_fluxes(s, a.comps(), b)?;
            let q2 = lagrange_fluxes(s.indeps(), s.deps(), a.comps(), &delta, b)?;
            let ae = dot(a.comps(), &euler_all(&e, s.deps()));
            let gap = prolong_apply(&a, &e)? - ae - q1.divergence() - q2.divergence();
            plain("lagrange-noether", constrain(vec![gap])?)
        }
        "product-rule" => {
            let delta = s.residuals();
            let e = euler_all(&s.pair(g(0))?, s.deps());
            let d1 = frechet(&delta, s.deps()).adjoint().apply(g(0))?;
            let d2 = frechet(g(0), s.deps()).adjoint().apply(&delta)?;
            let res = e.iter().zip(d1.iter().zip(&d2)).map(|(x, (y, z))| x - y - z).collect();
            plain("product-rule", constrain(res)?)
        }
        "helmholtz" => {
            let e = euler_all(&s.pair(g(0))?, s.deps());
            let d = helmholtz_defect(&s.residuals(), s.deps())?.apply(g(0))?;
            plain("helmholtz", reduce(diff(&e, &d)?)?)
        }
        "operator-cosymmetry" => {
            let row = file.operator(g(0))?;
            let collapsed = reduce_operator_cosymmetry(&row);
            let full = euler_all(&row.apply(&s.residuals())?.iter().fold(Expr::zero(), |a, b| a + b), s.deps());
            let plain_form = euler_all(&s.pair(&collapsed)?, s.deps());
            let mut r = plain("operator-cosymmetry", reduce(diff(&full, &plain_form)?)?);
            r.subject = format!("{} collapsed {}", r.subject, tuple_string(&collapsed));
            r
        }
        "trivial" => {
            let law = check_conservation_law(s, &FluxVector::new(s.indeps(), g(0).to_vec())?, cfg)?;
            let kind = check_triviality(s, &law)?;
            let verdict = match kind {
                Triviality::Nontrivial => Verdict::Refuted,
                Triviality::Inconclusive => Verdict::Inconclusive,
                _ => Verdict::Verified,
            };
            law.report.with_verdict(verdict, kind.to_string())
        }
        "variational-law" => {
            let (l, a) = (single(0)?, alpha(1)?);
            let vs = check_variational_symmetry(s, &l, &a, cfg)?;
            match vs.divergence {
                _ if !vs.report.is_verified() => vs.report,
                None => vs.report.with_verdict(Verdict::Inconclusive, "no divergence form found for X(L)"),
                Some(m) => {
                    let flux = m.sub(&noether_remainder(s.indeps(), &a, &l)?);
                    let ae = dot(a.comps(), &euler_all(&l, s.deps()));
                    plain("variational-law", constrain(vec![flux.divergence() - ae])?)
                }
            }
        }
        other => return Err(Error::Invalid(format!("unknown check {other}"))),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const ITEM: &str = r#"
indep t,x; dep u; const b;
eq heat: u[t] = u[x,x];
item heat-demo;
claim cosymmetry exp(b*x - b^2*t) expect verified mode exact anchor "heat";
claim symmetry u expect verified mode exact anchor "linear";
item heat-bad;
claim cosymmetry u expect refuted mode exact anchor "not a multiplier"
claim find-cosymmetry 1, x, u span 1, x expect verified mode exact anchor "span";
"#;

    #[test]
    fn parses_items_and_claims() {
        let items = parse_items(ITEM, Path::new("demo.sys")).unwrap();
        assert_eq!(items.iter().map(|i| i.id.as_str()).collect::<Vec<_>>(), ["heat-demo", "heat-bad"]);
        assert_eq!(items[1].claims[1].span.as_ref().unwrap().len(), 2);
        for item in &items {
            for c in &item.claims {
                let out = run_claim(item, c, &CheckConfig::default());
                assert!(out.matches(), "{} {}", item.id, out.report);
            }
        }
    }

    #[test]
    fn malformed_claims_report_location() {
        let text = "indep t,x; dep u; eq h: u[t] = u[x,x];\nclaim cosymmetry u expect maybe mode exact anchor \"x\"";
        match parse_items(text, Path::new("bad.sys")) {
            Err(Error::Parse { line, col, .. }) => assert_eq!((line, col), (2, 27)),
            other => panic!("{other:?}"),
        }
        assert!(parse_items("indep x; claim frobnicate 1 expect verified mode exact anchor \"\"", Path::new("b.sys"))
            .is_err());
    }

    #[test]
    fn glob_patterns() {
        assert!(glob_match("ex1-*", "ex1-claw-2"));
        assert!(!glob_match("ex1-*", "ex2"));
        assert!(glob_match("family?", "family5"));
    }
}
