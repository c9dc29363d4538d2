//! A third-order equation with a quasi-Lagrangian, read from the DSL.

use qnoether::cli::parse_system;
use qnoether::jet::Characteristic;
use qnoether::systems::{check_subsymmetry, check_variational_symmetry, verify_quasi_lagrangian, CheckConfig};

const SYSTEM: &str = "
indep t, x; dep u;
func f(t);
let F = 3*u[x,x]*u[x,x,x]/u[x] - u[x,x]^3/u[x]^2 + f;
eq ex1: u[t] = F;
let L = -(1/2)*u[x]*(u[t] - F);
";

fn main() -> qnoether::Result<()> {
    let file = parse_system(SYSTEM)?;
    let s = file.system();
    let l = file.binding("L").expect("L is declared").clone();
    let t = file.operator(&[file.parse_expr("D(_, x)")?])?;
    let cfg = CheckConfig::default();
    println!("{}", verify_quasi_lagrangian(s, &l, &t, &cfg)?);
    for text in ["1", "u[x]", "u[t]", "4*t*u[t] + x*u[x]", "x*u[x]"] {
        let alpha = Characteristic::scalar("u", file.parse_expr(text)?);
        let vs = check_variational_symmetry(s, &l, &alpha, &cfg)?;
        println!("{}", vs.report);
        if vs.report.is_verified() {
            println!("  {}", check_subsymmetry(s, &alpha, &t, &cfg)?);
        }
    }
    Ok(())
}
