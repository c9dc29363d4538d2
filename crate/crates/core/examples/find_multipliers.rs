//! Linear search for multipliers of u_t = u_xx + u_x^n.

use qnoether::cli::parse_system;
use qnoether::finder::{find_characteristics, find_cosymmetries, AnsatzBasis};

const BASIS: &str = "1, x, t, u, x^2, x*t, x*u, t^2, u^2, x^3 - 6*t*x, exp(u), exp(-u)";

fn main() -> qnoether::Result<()> {
    for n in 0..4 {
        let file = parse_system(&format!("indep t, x; dep u; eq e: u[t] = u[x,x] + u[x]^{n};"))?;
        let basis = AnsatzBasis::scalar(file.parse_exprs(BASIS)?)?;
        let cos = find_cosymmetries(file.system(), &basis)?;
        let chars = find_characteristics(file.system(), &basis)?;
        println!("n = {n}: {} cosymmetries, {} characteristics", cos.dim(), chars.dim());
        for m in cos.multipliers() {
            println!("  {}", m[0]);
        }
    }
    Ok(())
}
