//! Symmetry, cosymmetry and characteristic checks on Burgers' equation.

use qnoether::expr::Expr;
use qnoether::jet::Characteristic;
use qnoether::systems::{
    check_adjoint_symmetry, check_characteristic, check_cosymmetry, check_symmetry, CheckConfig, DifferentialSystem,
};

fn main() -> qnoether::Result<()> {
    let u = |v: &[&str]| Expr::u("u", v);
    let burgers = DifferentialSystem::scalar(&["t", "x"], "u", &["t"], &(&u(&[]) * &u(&["x"])) + &u(&["x", "x"]))?;
    let cfg = CheckConfig::default();

    for beta in [Expr::one(), u(&[]), Expr::indep("x")] {
        let b = [beta];
        println!("{}", check_cosymmetry(&burgers, &b, &cfg)?);
        println!("{}", check_adjoint_symmetry(&burgers, &b, &cfg)?);
        println!("{}", check_characteristic(&burgers, &b, &cfg)?);
    }
    for alpha in [u(&["x"]), u(&["t"]), u(&[])] {
        println!("{}", check_symmetry(&burgers, &Characteristic::scalar("u", alpha), &cfg)?);
    }
    Ok(())
}
