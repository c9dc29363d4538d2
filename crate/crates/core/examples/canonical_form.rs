//! Normal forms and the zero test.

use qnoether::expr::{is_zero, Elementary, Expr};

fn main() -> qnoether::Result<()> {
    let u = Expr::u("u", &[]);
    let ux = Expr::u("u", &["x"]);

    let sq = (&ux + &u).pow(2)?;
    println!("(u_x + u)^2 = {sq}");
    let rest = &(&(&sq - &ux.pow(2)?) - &(&u * &ux).scale_int(2)) - &u.pow(2)?;
    println!("minus its expansion: {rest}");

    let bx = &Expr::constant("b") * &Expr::indep("x");
    println!("exp(bx) exp(-bx) = {}", &Expr::exp(bx.clone()) * &Expr::exp(-&bx));

    let cosh = Expr::elem(Elementary::Cosh, u.clone()).pow(2)?;
    let sinh = Expr::elem(Elementary::Sinh, u.clone()).pow(2)?;
    println!("cosh(u)^2 - sinh(u)^2 = {}", &cosh - &sinh);

    // sin^2 + cos^2 is not rewritten, so the symbolic test cannot decide it
    let trig = &(&Expr::elem(Elementary::Sin, u.clone()).pow(2)? + &Expr::elem(Elementary::Cos, u).pow(2)?)
        - &Expr::one();
    println!("sin(u)^2 + cos(u)^2 - 1: {:?}", is_zero(&trig));
    println!("u_x: {:?}", is_zero(&ux));
    Ok(())
}
