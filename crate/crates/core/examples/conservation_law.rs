//! Fluxes from a cosymmetry and a symmetry, then their classification.

use qnoether::expr::Expr;
use qnoether::jet::Characteristic;
use qnoether::systems::{noether_flux, CheckConfig, DifferentialSystem};

fn main() -> qnoether::Result<()> {
    let u = |v: &[&str]| Expr::u("u", v);
    let kdv = DifferentialSystem::scalar(&["t", "x"], "u", &["t"], -&(&(&u(&[]) * &u(&["x"])) + &u(&["x", "x", "x"])))?;
    let cfg = CheckConfig::default();
    let galilei = &Expr::one() - &(&Expr::indep("t") * &u(&["x"]));
    // x-translation only yields trivial laws; the Galilean boost paired
    // with u recovers the mass law
    for (beta, alpha) in [(Expr::one(), u(&["x"])), (u(&[]), u(&["x"])), (u(&[]), galilei)] {
        let out = noether_flux(&kdv, &[beta.clone()], &Characteristic::scalar("u", alpha.clone()), &cfg)?;
        println!("beta = {beta}, alpha = {alpha}");
        if let Some(law) = out.law {
            println!("  K^t = {}", law.flux.get("t"));
            println!("  K^x = {}", law.flux.get("x"));
            println!("  {}", law.report);
        }
        println!("  {:?}", out.triviality);
    }
    Ok(())
}
