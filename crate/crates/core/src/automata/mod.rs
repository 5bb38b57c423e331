//! Finite automata over opaque integer symbols.

mod fa;
mod layered;
mod ops;

pub use fa::{Dfa, Nfa, StateId, Symbol};
pub use layered::{
    biinfinite_flagged_path, layered_product_reach, FactorWitness, LayeredProduct, LayeredWordGraph, Region,
};
pub use ops::{complement, determinize, determinize_capped, factor_scanner, minimize, project, subset_construction};
