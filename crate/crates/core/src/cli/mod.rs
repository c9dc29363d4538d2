//! Text front end: the system DSL, configuration files and commands.

pub mod commands;
pub mod config;
pub mod lexer;
pub mod parser;

pub use commands::{run_command, EXIT_INCONCLUSIVE, EXIT_REFUTED, EXIT_USAGE, EXIT_VERIFIED};
pub use config::Settings;
pub use parser::{parse_system, Scope, SystemFile};
