//! Closed-form solutions on the critical manifold of a conserved density.

use qnoether::numeval::{critical_evolution, critical_point_check, EvolutionSetup, CRITICAL_EXAMPLES};
use qnoether::systems::CheckConfig;

fn main() -> qnoether::Result<()> {
    for id in CRITICAL_EXAMPLES {
        println!("{}", critical_point_check(id, &CheckConfig::numeric(100))?);
    }
    println!("{}", critical_point_check("kdv-xt", &CheckConfig::default())?);
    let dev = critical_evolution("telegraph-w", &EvolutionSetup::standard("telegraph-w")?)?;
    println!("telegraph-w: largest E(T) along the evolved solution {dev:.3e}");
    Ok(())
}
