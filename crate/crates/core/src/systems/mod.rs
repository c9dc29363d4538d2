//! Differential systems in solved form, on-shell reduction and the
//! verification predicates.

mod checks;
mod report;
mod system;

pub use checks::*;
pub use report::{judge, CheckConfig, CheckReport, ResidualSummary, Verdict, VerifyMode};
pub use system::{Constraint, DifferentialSystem, Equation};
