pub mod cli;
pub mod corpus;
pub mod error;
pub mod expr;
pub mod finder;
pub mod jet;
pub mod numeval;
pub mod systems;
pub mod variational;

pub use error::{Error, Result};
