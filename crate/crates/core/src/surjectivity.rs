//! Surjectivity of partial transition functions and of distributions.
//!
//! `F_R` is the set of rule words `ψ` whose partial transition function `h_ψ`
//! misses some output word. It is regular: determinize the DeBruijn automaton
//! over `R × A`, keep the pairs `(ψ, u)` driving the subset walk to the empty
//! set (no preimage), then forget the letters. A distribution is surjective iff
//! none of its finite factors lies in `F_R`.

use std::collections::HashMap;
use std::sync::Arc;

use crate::automata::{
    complement, determinize_capped, layered_product_reach, project, Dfa, LayeredWordGraph, StateId,
};
use crate::debruijn::build_debruijn;
use crate::error::{invalid, Error, Result};
use crate::exec::{map_range, Execution};
use crate::model::{index_word, word_index, Distribution, Letter, RuleId, RuleSet};

/// Default bound on the number of subsets built by either determinization.
pub const DEFAULT_STATE_CAP: usize = 1_000_000;

/// Automata recognising `F_R`, with the letter-level automaton kept for
/// witness extraction.
#[derive(Debug, Clone)]
pub struct ForbiddenPatterns {
    rules: Arc<RuleSet>,
    patterns: Dfa,
    missing: Dfa,
}

/// Builds the automata for `F_R` with [`DEFAULT_STATE_CAP`].
pub fn forbidden_pattern_dfa(rules: Arc<RuleSet>) -> Result<ForbiddenPatterns> {
    forbidden_pattern_dfa_capped(rules, DEFAULT_STATE_CAP)
}

pub fn forbidden_pattern_dfa_capped(rules: Arc<RuleSet>, cap: usize) -> Result<ForbiddenPatterns> {
    let padded = Arc::new(rules.padded_to(1)?);
    let graph = build_debruijn(padded.clone())?;
    let s = padded.alphabet().size();
    // accepts (ψ, u) iff h_ψ^{-1}(u) = ∅
    let missing = complement(&determinize_capped(&graph.to_nfa(), cap)?);
    let projected = project(&missing.to_nfa(), padded.len(), |sym| sym / s);
    let patterns = determinize_capped(&projected, cap)?;
    Ok(ForbiddenPatterns { rules, patterns, missing })
}

impl ForbiddenPatterns {
    /// The rule set as given, before any radius padding.
    pub fn rules(&self) -> &RuleSet {
        &self.rules
    }

    /// Minimal DFA over rule indices recognising `F_R`.
    pub fn dfa(&self) -> &Dfa {
        &self.patterns
    }

    /// Minimal DFA over `R × A` (symbol `f·s + a`) accepting the pairs
    /// `(ψ, u)` with no preimage.
    pub fn pair_dfa(&self) -> &Dfa {
        &self.missing
    }

    pub fn contains(&self, psi: &[RuleId]) -> bool {
        self.patterns.accepts(psi)
    }

    /// Some `u` with `h_ψ^{-1}(u) = ∅`, least in index order among the
    /// shortest searches, or `None` when `h_ψ` is onto.
    pub fn unreachable_word(&self, psi: &[RuleId]) -> Option<Vec<Letter>> {
        let s = self.rules.alphabet().size();
        let d = &self.missing;
        // layer k maps each reachable state to (previous state, letter)
        let mut layers: Vec<HashMap<StateId, (StateId, Letter)>> = Vec::with_capacity(psi.len());
        let mut frontier = vec![d.start()];
        for &f in psi {
            let mut layer = HashMap::new();
            let mut next = Vec::new();
            for &q in &frontier {
                for a in 0..s {
                    let t = d.next(q, f * s + a);
                    if let std::collections::hash_map::Entry::Vacant(e) = layer.entry(t) {
                        e.insert((q, a as Letter));
                        next.push(t);
                    }
                }
            }
            next.sort_unstable();
            layers.push(layer);
            frontier = next;
        }
        let mut state = *frontier.iter().find(|&&q| d.is_accepting(q))?;
        let mut u = vec![0; psi.len()];
        for (k, layer) in layers.iter().enumerate().rev() {
            let (prev, a) = layer[&state];
            u[k] = a;
            state = prev;
        }
        Some(u)
    }

    /// Checks every finite factor of `θ` against `F_R`.
    pub fn check_distribution(&self, theta: &Distribution) -> Result<SurjectivityReport> {
        if !Arc::ptr_eq(theta.rules_arc(), &self.rules) && theta.rules() != self.rules.as_ref() {
            return Err(invalid("distribution uses a different rule set"));
        }
        let g = LayeredWordGraph::new(theta.word().clone());
        let Some(hit) = layered_product_reach(&g, &self.patterns) else {
            return Ok(SurjectivityReport { surjective: true, witness: None });
        };
        let unreachable = self
            .unreachable_word(&hit.symbols)
            .expect("a factor accepted by the pattern automaton has a word without preimage");
        Ok(SurjectivityReport {
            surjective: false,
            witness: Some(SurjectivityWitness { window: (hit.start, hit.end()), pattern: hit.symbols, unreachable }),
        })
    }
}

/// A window `[i, j]` of the distribution whose pattern misses `unreachable`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurjectivityWitness {
    pub window: (i64, i64),
    pub pattern: Vec<RuleId>,
    pub unreachable: Vec<Letter>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SurjectivityReport {
    pub surjective: bool,
    pub witness: Option<SurjectivityWitness>,
}

/// `h_ψ` onto, decided by the `F_R` automaton.
pub fn is_pattern_surjective(patterns: &ForbiddenPatterns, psi: &[RuleId]) -> bool {
    !patterns.contains(psi)
}

/// Decides surjectivity of `H_θ`, building the `F_R` automaton first.
pub fn is_distribution_surjective(theta: &Distribution) -> Result<SurjectivityReport> {
    forbidden_pattern_dfa(theta.rules_arc().clone())?.check_distribution(theta)
}

/// `|h_ψ^{-1}(u)|` for every `u ∈ A^{|ψ|}`, indexed by `word_index(u)`, by
/// enumerating all `s^{|ψ|+2r}` inputs. Refuses when that count exceeds `cap`.
pub fn preimage_counts(rules: &RuleSet, psi: &[RuleId], cap: u64, exec: Execution) -> Result<Vec<u64>> {
    rules.check_ids(psi)?;
    if psi.is_empty() {
        return Err(invalid("rule word must be non-empty"));
    }
    let a = rules.alphabet();
    let n = psi.len();
    let len = n + 2 * rules.radius();
    let total = a
        .word_count(len)
        .filter(|&t| t <= cap)
        .ok_or(Error::CapExceeded { what: "preimage enumeration", cap: cap as usize })?;
    let outputs = a.word_count(n).expect("fewer outputs than inputs") as usize;
    let chunk = total.div_ceil(64).max(1);
    let partial = map_range(exec, 0..total.div_ceil(chunk), |c| {
        let mut counts = vec![0u64; outputs];
        for i in c * chunk..((c + 1) * chunk).min(total) {
            let w = index_word(a, len, i as usize);
            counts[word_index(a, &rules.apply_partial_unchecked(psi, &w))] += 1;
        }
        counts
    });
    let mut counts = vec![0u64; outputs];
    for part in partial {
        for (acc, c) in counts.iter_mut().zip(part) {
            *acc += c;
        }
    }
    Ok(counts)
}

/// `h_ψ` onto, decided by enumerating its whole domain.
pub fn brute_force_pattern_surjective(rules: &RuleSet, psi: &[RuleId], cap: u64) -> Result<bool> {
    Ok(preimage_counts(rules, psi, cap, Execution::Sequential)?.iter().all(|&c| c > 0))
}
