//! Seeded sampling as a polynomial-identity oracle for arbitrary functions.

use qnoether::cli::parse_system;
use qnoether::numeval::{numeric_residual, NumericConfig};

fn main() -> qnoether::Result<()> {
    let file = parse_system("indep t, x; dep u; func G(u); const s;")?;
    let cfg = NumericConfig { trials: 200, ..NumericConfig::default() };
    for text in [
        "cosh(x*s)^2 - sinh(x*s)^2 - 1",
        "D(G, x) - pd(G, 1)*u[x]",
        "sin(u)^2 + cos(u)^2 - 1",
        "u[x] - u",
    ] {
        let e = file.parse_expr(text)?;
        println!("{text}: max |.| = {:.3e} (seed {})", numeric_residual(&e, &cfg)?, cfg.seed);
    }
    Ok(())
}
