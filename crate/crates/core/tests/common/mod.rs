//! Rules, rule sets and brute-force oracles shared by the integration tests.
//! The oracles here only use rule tables and plain vectors, never the
//! analyzers under test.

#![allow(dead_code)]

use std::sync::Arc;

use nuca_core::{Alphabet, Distribution, Letter, LocalRule, RuleId, RuleSet};

pub fn rule(name: &str) -> LocalRule {
    let a = Alphabet::binary();
    match name {
        "id" => LocalRule::from_fn("id", a, 1, |w| w[1]).unwrap(),
        "shift" => LocalRule::from_fn("shift", a, 1, |w| w[2]).unwrap(),
        "xor" => LocalRule::linear("xor", a, vec![1, 0, 1]).unwrap(),
        "zero" => LocalRule::from_fn("zero", a, 1, |_| 0).unwrap(),
        "traffic" => LocalRule::from_fn("traffic", a, 1, |w| match (w[0], w[1], w[2]) {
            (1, 0, _) => 1,
            (_, 1, 1) => 1,
            _ => 0,
        })
        .unwrap(),
        other => panic!("unknown test rule {other}"),
    }
}

pub fn rules(names: &[&str]) -> Arc<RuleSet> {
    Arc::new(RuleSet::new(names.iter().map(|n| rule(n)).collect()).unwrap())
}

pub fn uniform(set: &Arc<RuleSet>, name: &str) -> Distribution {
    Distribution::uniform(set.clone(), set.id(name).unwrap()).unwrap()
}

/// Every non-empty subset of `pool` with at most `max` elements.
pub fn subsets<'a>(pool: &[&'a str], max: usize) -> Vec<Vec<&'a str>> {
    let mut out = Vec::new();
    for mask in 1u32..(1 << pool.len()) {
        if mask.count_ones() as usize <= max {
            out.push((0..pool.len()).filter(|&i| mask >> i & 1 == 1).map(|i| pool[i]).collect());
        }
    }
    out
}

/// All rule words of length `1..=max_len` over `k` rules.
pub fn rule_words(k: usize, max_len: usize) -> Vec<Vec<RuleId>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<RuleId>> = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|w| {
                (0..k).map(move |f| {
                    let mut v = w.clone();
                    v.push(f);
                    v
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

/// Every word of length `len` over `{0..s-1}`.
pub fn letter_words(s: usize, len: usize) -> Vec<Vec<Letter>> {
    let mut out = vec![Vec::new()];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|w: Vec<Letter>| {
                (0..s).map(move |a| {
                    let mut v = w.clone();
                    v.push(a as Letter);
                    v
                })
            })
            .collect();
    }
    out
}

/// `h_ψ(w)` evaluated cell by cell from the rule tables.
pub fn apply(set: &RuleSet, psi: &[RuleId], w: &[Letter]) -> Vec<Letter> {
    let len = 2 * set.radius() + 1;
    psi.iter().enumerate().map(|(i, &f)| set.rule(f).eval(&w[i..i + len])).collect()
}

/// Preimage count of every output word of `h_ψ`, keyed by the output.
pub fn preimages(set: &RuleSet, psi: &[RuleId]) -> std::collections::HashMap<Vec<Letter>, u64> {
    let s = set.alphabet().size();
    let mut counts = std::collections::HashMap::new();
    for w in letter_words(s, psi.len() + 2 * set.radius()) {
        *counts.entry(apply(set, psi, &w)).or_insert(0) += 1;
    }
    counts
}

pub fn onto(set: &RuleSet, psi: &[RuleId]) -> bool {
    let total = (set.alphabet().size() as u64).pow(psi.len() as u32);
    preimages(set, psi).len() as u64 == total
}

/// An eventually periodic word kept as raw vectors and read independently of
/// the library's representation.
#[derive(Debug, Clone)]
pub struct RawWord<T> {
    pub left: Vec<T>,
    pub middle: Vec<T>,
    pub right: Vec<T>,
    pub anchor: i64,
}

impl<T: Copy> RawWord<T> {
    pub fn at(&self, i: i64) -> T {
        let m = self.middle.len() as i64;
        if i >= self.anchor && i < self.anchor + m {
            self.middle[(i - self.anchor) as usize]
        } else if i < self.anchor {
            // last left letter sits at anchor - 1
            let back = (self.anchor - 1 - i) as usize % self.left.len();
            self.left[self.left.len() - 1 - back]
        } else {
            let ahead = (i - self.anchor - m) as usize % self.right.len();
            self.right[ahead]
        }
    }
}
