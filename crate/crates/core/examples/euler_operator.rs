//! Euler operators and the Noether identity for a Lagrangian.

use qnoether::expr::{sym, Expr};
use qnoether::jet::{prolong_apply, Characteristic};
use qnoether::variational::{euler, noether_remainder};

fn main() -> qnoether::Result<()> {
    let vars = [sym("t"), sym("x")];
    let (u, ux, ut) = (Expr::u("u", &[]), Expr::u("u", &["x"]), Expr::u("u", &["t"]));
    // cubic Klein-Gordon
    let l = &(&(&ut.pow(2)? - &ux.pow(2)?) * &Expr::rational(1, 2)) - &(&u.pow(4)? * &Expr::rational(1, 4));
    println!("L = {l}");
    println!("E(L) = {}", euler(&l, "u"));

    let alpha = Characteristic::scalar("u", ux.clone());
    let r = noether_remainder(&vars, &alpha, &l)?;
    println!("R^t = {}", r.get("t"));
    println!("R^x = {}", r.get("x"));
    let gap = &(&prolong_apply(&alpha, &l)? - &(&ux * &euler(&l, "u"))) - &r.divergence();
    println!("X L - alpha E(L) - D_i R^i = {gap}");
    Ok(())
}
