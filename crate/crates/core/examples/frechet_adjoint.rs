//! Fréchet derivative of KdV, its adjoint and the Helmholtz defect.

use qnoether::expr::Expr;
use qnoether::systems::DifferentialSystem;
use qnoether::variational::{frechet, helmholtz_defect};

fn main() -> qnoether::Result<()> {
    let u = |v: &[&str]| Expr::u("u", v);
    let kdv = DifferentialSystem::scalar(&["t", "x"], "u", &["t"], -&(&(&u(&[]) * &u(&["x"])) + &u(&["x", "x", "x"])))?;
    let d = frechet(&kdv.residuals(), kdv.deps());
    println!("D   = {d}");
    println!("D*  = {}", d.adjoint());
    println!("D** = {}", d.adjoint().adjoint());
    println!("D* - D = {}", helmholtz_defect(&kdv.residuals(), kdv.deps())?);
    println!("D*(1) = {}", d.adjoint().apply(&[Expr::one()])?[0]);
    Ok(())
}
