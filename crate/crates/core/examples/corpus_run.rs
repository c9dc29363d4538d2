//! Runs the bundled claims and prints a tally per item.

use std::collections::BTreeMap;

use qnoether::corpus::{default_dir, run_corpus};
use qnoether::systems::CheckConfig;

fn main() -> qnoether::Result<()> {
    let filter = std::env::args().nth(1);
    let outcomes = run_corpus(&default_dir(), filter.as_deref(), &CheckConfig::default())?;
    let mut tally: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for o in &outcomes {
        let t = tally.entry(&o.item).or_default();
        t.0 += o.matches() as usize;
        t.1 += 1;
        if !o.matches() {
            println!("MISMATCH {}: expected {}, got {}", o.report.subject, o.expected, o.report.verdict);
        }
    }
    for (item, (ok, n)) in tally {
        println!("{item:32} {ok}/{n}");
    }
    Ok(())
}
