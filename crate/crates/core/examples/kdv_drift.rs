//! Method of lines for a KdV soliton and the drift of its integrals.

use qnoether::expr::Expr;
use qnoether::numeval::{functional_drift, integrate_mol, GridState, MolOptions};
use qnoether::systems::DifferentialSystem;

fn main() -> qnoether::Result<()> {
    let u = |v: &[&str]| Expr::u("u", v);
    let kdv = DifferentialSystem::scalar(
        &["t", "x"],
        "u",
        &["t"],
        -&(&(&u(&[]) * &u(&["x"])).scale_int(6) + &u(&["x", "x", "x"])),
    )?;
    let c: f64 = 1.0;
    let soliton = |x: f64| 0.5 * c / (0.5 * c.sqrt() * (x + 5.0)).cosh().powi(2);
    let u0 = GridState::sample(-20.0, 40.0, 512, 0.0, 1, |_, x| soliton(x))?;
    let mut opts = MolOptions::new(1e-4, 1.0);
    opts.sample_every = 500;
    let tr = integrate_mol(&kdv, u0, &opts)?;
    let density = [
        ("u", u(&[])),
        ("u^2", u(&[]).pow(2)?),
        ("u^3 - u_x^2/2", &u(&[]).pow(3)? - &(&u(&["x"]).pow(2)? * &Expr::rational(1, 2))),
        ("u^3", u(&[]).pow(3)?),
    ];
    for (name, d) in density {
        println!("drift of int {name} dx: {:.3e}", functional_drift(&tr, &d)?);
    }
    Ok(())
}
