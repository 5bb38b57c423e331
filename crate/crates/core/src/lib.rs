pub mod automata;
pub mod conservation;
pub mod debruijn;
pub mod dynamics;
pub mod error;
pub mod exec;
pub mod injectivity;
pub mod model;
pub mod parse;
pub mod simulation;
pub mod surjectivity;

pub use error::{Error, Result};
pub use exec::Execution;
pub use model::*;
