//! Total derivatives and prolonged evolutionary vector fields.

use qnoether::expr::Expr;
use qnoether::jet::{prolong_apply, total_derivative, Characteristic};

fn main() -> qnoether::Result<()> {
    let u = Expr::u("u", &[]);
    let ux = Expr::u("u", &["x"]);
    let e = &(&u * &ux) + &Expr::exp(&Expr::indep("t") * &u);

    println!("e = {e}");
    println!("D_x e = {}", total_derivative(&e, "x"));
    println!("D_t e = {}", total_derivative(&e, "t"));

    // Galilean boost of KdV acting on e
    let boost = Characteristic::scalar("u", &Expr::one() - &(&Expr::indep("t") * &ux));
    println!("X e = {}", prolong_apply(&boost, &e)?);
    Ok(())
}
