use std::sync::OnceLock;

use qnoether::corpus::{default_dir, load_corpus, run_corpus, ClaimOutcome, CorpusItem};
use qnoether::systems::{check_adjoint_symmetry, check_cosymmetry, CheckConfig, Verdict, VerifyMode};

fn outcomes() -> &'static [ClaimOutcome] {
    static RUN: OnceLock<Vec<ClaimOutcome>> = OnceLock::new();
    RUN.get_or_init(|| run_corpus(&default_dir(), None, &CheckConfig::default()).unwrap())
}

fn items() -> &'static [CorpusItem] {
    static ITEMS: OnceLock<Vec<CorpusItem>> = OnceLock::new();
    ITEMS.get_or_init(|| load_corpus(&default_dir()).unwrap())
}

fn squash(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

#[test]
fn every_claim_reaches_its_expected_verdict() {
    let bad: Vec<String> = outcomes()
        .iter()
        .filter(|o| !o.matches())
        .map(|o| format!("{} {}: expected {}, got {}", o.report.check, o.report.subject, o.expected, o.report.verdict))
        .collect();
    assert!(bad.is_empty(), "{}", bad.join("\n"));
    assert!(outcomes().len() > 100);
}

/// A verified nontriviality claim carries its nonzero certificate instead.
#[test]
fn exact_claims_have_no_residual_terms() {
    let claims = items().iter().flat_map(|i| i.claims.iter());
    for (c, o) in claims.zip(outcomes()) {
        if c.mode != VerifyMode::Exact || c.expect != Verdict::Verified || c.check == "nontrivial" {
            continue;
        }
        assert_eq!(o.report.residual.symbolic_terms, 0, "{}", o.report.subject);
    }
}

#[test]
fn numeric_claims_stay_below_tolerance() {
    let numeric: Vec<_> = items()
        .iter()
        .flat_map(|i| i.claims.iter().map(move |c| (i, c)))
        .filter(|(_, c)| c.mode == VerifyMode::Numeric && c.expect == Verdict::Verified && c.check != "evolution")
        .collect();
    assert!(!numeric.is_empty());
    for (i, c) in numeric {
        let o = qnoether::corpus::run_claim(i, c, &CheckConfig::default());
        assert!(o.report.seed == 42 && o.report.residual.numeric_max.unwrap_or(0.0) < 1e-8, "{}", o.report.subject);
    }
}

#[test]
fn anchors_cover_every_required_display() {
    let text = std::fs::read_to_string(default_dir().join("COVERAGE")).unwrap();
    let anchors: Vec<String> = items().iter().flat_map(|i| i.claims.iter().map(|c| squash(&c.anchor))).collect();
    let missing: Vec<&str> = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .filter(|l| !anchors.iter().any(|a| a.contains(&squash(l))))
        .collect();
    assert!(missing.is_empty(), "uncovered: {missing:#?}");
}

#[test]
fn reports_come_out_in_file_order_every_time() {
    let again = run_corpus(&default_dir(), None, &CheckConfig::default()).unwrap();
    let a: Vec<_> = outcomes().iter().map(|o| (&o.report.subject, o.report.verdict)).collect();
    let b: Vec<_> = again.iter().map(|o| (&o.report.subject, o.report.verdict)).collect();
    assert_eq!(a, b);
}

#[test]
fn filters_select_items_by_glob() {
    assert!(run_corpus(&default_dir(), Some("nonexistent"), &CheckConfig::default()).unwrap().is_empty());
    let uxn = run_corpus(&default_dir(), Some("uxn-*"), &CheckConfig::default()).unwrap();
    assert!(!uxn.is_empty() && uxn.iter().all(|o| o.item.starts_with("uxn-")));
}

/// Every multiplier verified as a characteristic also passes as a
/// cosymmetry, and the Euler-operator and adjoint-symmetry forms of the
/// cosymmetry test agree.
#[test]
fn characteristic_and_direct_method_consistency() {
    let cfg = CheckConfig::default();
    let mut seen = (0, 0);
    for item in items() {
        let s = item.file.system();
        for c in &item.claims {
            let beta = &c.groups.first().cloned().unwrap_or_default();
            if beta.len() != s.equations().len() {
                continue;
            }
            match c.check.as_str() {
                "characteristic" if c.expect == Verdict::Verified => {
                    assert!(check_cosymmetry(s, beta, &cfg).unwrap().is_verified(), "{}", item.id);
                    seen.0 += 1;
                }
                "cosymmetry" if c.mode == VerifyMode::Exact => {
                    let euler = check_cosymmetry(s, beta, &cfg).unwrap().verdict;
                    let adjoint = check_adjoint_symmetry(s, beta, &cfg).unwrap().verdict;
                    assert_eq!(euler, adjoint, "{}", item.id);
                    seen.1 += 1;
                }
                _ => {}
            }
        }
    }
    assert!(seen.0 >= 10 && seen.1 >= 10, "{seen:?}");
}
