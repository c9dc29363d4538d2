mod common;

use common::{cfg, diff_fn, evolution_rhs};
use proptest::prelude::*;
use qnoether::expr::Expr;
use qnoether::jet::{Characteristic, MultiIndex};
use qnoether::systems::{
    check_adjoint_symmetry, check_characteristic, check_conservation_law, check_cosymmetry, check_subsymmetry,
    check_variational_symmetry, noether_flux, CheckConfig, DifferentialSystem,
};
use qnoether::variational::LinearDiffOperator;

proptest! {
    #![proptest_config(cfg(50))]

    #[test]
    fn euler_and_adjoint_forms_of_the_cosymmetry_test_agree(f in evolution_rhs(), b in diff_fn(1, 2)) {
        let s = DifferentialSystem::scalar(&["t", "x"], "u", &["t"], f).unwrap();
        let c = CheckConfig::default();
        let euler = check_cosymmetry(&s, &[b.clone()], &c).unwrap().is_verified();
        let adjoint = check_adjoint_symmetry(&s, &[b.clone()], &c).unwrap().is_verified();
        prop_assert_eq!(euler, adjoint);
        if check_characteristic(&s, &[b], &c).unwrap().is_verified() {
            prop_assert!(euler);
        }
    }
}

#[test]
fn noether_fluxes_are_conservation_laws() {
    let ux = Expr::u("u", &["x"]);
    let burgers = DifferentialSystem::scalar(
        &["t", "x"],
        "u",
        &["t"],
        &(&Expr::u("u", &[]) * &ux) + &Expr::u("u", &["x", "x"]),
    )
    .unwrap();
    let c = CheckConfig::default();
    for alpha in [ux.clone(), Expr::u("u", &["t"])] {
        let out = noether_flux(&burgers, &[Expr::one()], &Characteristic::scalar("u", alpha), &c).unwrap();
        let law = out.law.unwrap();
        assert!(law.report.is_verified());
        assert!(check_conservation_law(&burgers, &law.flux, &c).unwrap().report.is_verified());
    }
}

/// Both branches of the compatibility statement for the third-order
/// example: `T* alpha` is a characteristic and `alpha` a sub-symmetry.
#[test]
fn variational_symmetries_of_the_third_order_example_are_compatible() {
    let path = qnoether::corpus::default_dir().join("ex1.sys");
    let text = std::fs::read_to_string(&path).unwrap();
    let (file, _) = qnoether::corpus::parse_item_file(&text, &path).unwrap();
    let s = file.system();
    let l = file.binding("L").unwrap().clone();
    let t = LinearDiffOperator::scalar(MultiIndex::new(["x"]), Expr::one());
    let c = CheckConfig::default();
    let time = Expr::indep("t");
    let alphas = [
        Expr::one(),
        Expr::u("u", &["x"]),
        Expr::u("u", &["t"]),
        &(&time * &Expr::u("u", &["t"])).scale_int(4) + &(&Expr::indep("x") * &Expr::u("u", &["x"])),
    ];
    for a in alphas {
        let alpha = Characteristic::scalar("u", a.clone());
        assert!(check_variational_symmetry(s, &l, &alpha, &c).unwrap().report.is_verified(), "{a}");
        let beta = t.adjoint().apply(&[a.clone()]).unwrap();
        assert!(check_characteristic(s, &beta, &c).unwrap().is_verified(), "{a}");
        assert!(check_subsymmetry(s, &alpha, &t, &c).unwrap().is_verified(), "{a}");
    }
}
