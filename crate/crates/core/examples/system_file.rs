//! Parsing a system file: declarations, opaque functions, lets and rules.

use qnoether::cli::parse_system;
use qnoether::systems::{check_cosymmetry, CheckConfig};

const TEXT: &str = "
# Heat equation as a member of a family with arbitrary G(u, u_x).
indep t, x; dep u; const b, p;
eq heat: u[t] = u[x,x];
let G = u[x]^2 + p*u[x];
let A = (u[x]*diff(G, u[x]) - G)/u[x]^2;
";

fn main() -> qnoether::Result<()> {
    let file = parse_system(TEXT)?;
    let s = file.system();
    println!("independent {:?}, dependent {:?}", s.indeps(), s.deps());
    println!("residual {}", s.residuals()[0]);
    println!("A = {}", file.binding("A").expect("declared"));
    let beta = file.parse_exprs("exp(b*x - b^2*t)")?;
    println!("{}", check_cosymmetry(s, &beta, &CheckConfig::default())?);

    match parse_system("indep t, x; dep u; eq bad: u[t] = u[t,x];") {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => println!("unexpectedly accepted"),
    }
    Ok(())
}
