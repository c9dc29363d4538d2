mod common;

use common::soliton;
use qnoether::expr::{Elementary, Expr};
use qnoether::numeval::{
    critical_evolution, critical_point_check, functional_drift, lambert_w, numeric_residual, EvolutionSetup,
    NumericConfig, CRITICAL_EXAMPLES,
};
use qnoether::systems::{CheckConfig, Verdict};

#[test]
fn sampling_is_reproducible() {
    let u = Expr::u("u", &[]);
    let e = &Expr::elem(Elementary::Sin, u.clone()) - &(&u * &Expr::u("u", &["x"]));
    let cfg = NumericConfig { trials: 50, ..NumericConfig::default() };
    let a = numeric_residual(&e, &cfg).unwrap();
    assert_eq!(a.to_bits(), numeric_residual(&e, &cfg).unwrap().to_bits());
    let other = NumericConfig { seed: 7, ..cfg };
    assert_ne!(a.to_bits(), numeric_residual(&e, &other).unwrap().to_bits());
}

#[test]
fn lambert_w_values() {
    let e = std::f64::consts::E;
    assert!((lambert_w(e).unwrap() - 1.0).abs() < 1e-14);
    assert_eq!(lambert_w(0.0).unwrap(), 0.0);
    assert!((lambert_w(1.0).unwrap() - 0.567_143_290_409_783_8).abs() < 1e-14);
    assert!((lambert_w(-1.0 / e).unwrap() + 1.0).abs() < 1e-6);
    assert!(lambert_w(-1.0).is_err());
    for z in [0.1, 2.0, 50.0, 1e6] {
        let w = lambert_w(z).unwrap();
        assert!((w * w.exp() - z).abs() < 1e-12 * z.max(1.0));
    }
}

#[test]
fn soliton_error_falls_with_resolution() {
    let coarse = soliton::final_error(&soliton::evolve(128, 4e-4, 0.5));
    let fine = soliton::final_error(&soliton::evolve(256, 2e-4, 0.5));
    assert!(coarse / fine >= 8.0, "coarse {coarse}, fine {fine}");
}

#[test]
fn soliton_keeps_mass_and_momentum() {
    let tr = soliton::evolve(256, 2e-4, 0.5);
    let u = Expr::u("u", &[]);
    assert!(functional_drift(&tr, &u).unwrap() < 1e-8);
    assert!(functional_drift(&tr, &u.pow(2).unwrap()).unwrap() < 1e-6);
}

#[test]
fn closed_form_critical_points() {
    let cfg = CheckConfig::numeric(100);
    for id in CRITICAL_EXAMPLES {
        let r = critical_point_check(id, &cfg).unwrap();
        assert_eq!(r.verdict, Verdict::Verified, "{id}");
        assert!(r.residual.numeric_max.unwrap_or(0.0) < 1e-8, "{id}");
    }
    let exact = critical_point_check("kdv-xt", &CheckConfig::default()).unwrap();
    assert_eq!(exact.verdict, Verdict::Verified);
    assert_eq!(exact.residual.symbolic_terms, 0);
}

#[test]
fn telegraph_solution_stays_on_the_critical_manifold() {
    let dev = critical_evolution("telegraph-w", &EvolutionSetup::standard("telegraph-w").unwrap()).unwrap();
    assert!(dev < 1e-3, "{dev}");
}
