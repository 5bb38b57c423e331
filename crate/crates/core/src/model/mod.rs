//! Alphabets, local rules, rule sets, and eventually periodic distributions
//! and configurations.

mod configuration;
mod distribution;
mod rule;
mod ruleset;
mod word;

pub use configuration::Configuration;
pub use distribution::Distribution;
pub use rule::{index_word, word_index, Alphabet, Letter, LocalRule};
pub use ruleset::{RuleId, RuleSet, RuleWord};
pub use word::PeriodicWord;

pub(crate) use word::lcm;
