use std::collections::HashMap;
use std::ops::Deref;

use super::rule::{Alphabet, Letter, LocalRule};
use crate::error::{invalid, Result};

/// Index of a rule inside its [`RuleSet`].
pub type RuleId = usize;

/// A finite set of local rules over one alphabet, all padded to a common radius.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleSet {
    alphabet: Alphabet,
    radius: usize,
    rules: Vec<LocalRule>,
    original_radii: Vec<usize>,
    by_name: HashMap<String, RuleId>,
}

impl RuleSet {
    /// Pads every rule to the largest radius present. Names must be unique.
    pub fn new(rules: Vec<LocalRule>) -> Result<Self> {
        let radius = rules.iter().map(LocalRule::radius).max().unwrap_or(0);
        Self::with_min_radius(rules, radius)
    }

    /// Like [`RuleSet::new`] but pads to at least `min_radius`.
    pub fn with_min_radius(rules: Vec<LocalRule>, min_radius: usize) -> Result<Self> {
        let first = rules.first().ok_or_else(|| invalid("a rule set needs at least one rule"))?;
        let alphabet = first.alphabet();
        let radius = rules.iter().map(LocalRule::radius).max().unwrap_or(0).max(min_radius);
        let mut by_name = HashMap::new();
        let mut original_radii = Vec::with_capacity(rules.len());
        let mut padded = Vec::with_capacity(rules.len());
        for (id, rule) in rules.into_iter().enumerate() {
            if rule.alphabet() != alphabet {
                return Err(invalid(format!("rule {} uses a different alphabet", rule.name())));
            }
            if by_name.insert(rule.name().to_string(), id).is_some() {
                return Err(invalid(format!("duplicate rule name {}", rule.name())));
            }
            original_radii.push(rule.radius());
            padded.push(rule.padded(radius)?);
        }
        Ok(Self { alphabet, radius, rules: padded, original_radii, by_name })
    }

    /// The same rules re-padded to radius `max(r, min_radius)`; ids are kept.
    pub fn padded_to(&self, min_radius: usize) -> Result<Self> {
        if min_radius <= self.radius {
            return Ok(self.clone());
        }
        let mut out = self.clone();
        out.radius = min_radius;
        out.rules = self.rules.iter().map(|r| r.padded(min_radius)).collect::<Result<_>>()?;
        Ok(out)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn len(&self) -> usize {
        self.rules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rules.is_empty()
    }

    pub fn rules(&self) -> &[LocalRule] {
        &self.rules
    }

    pub fn rule(&self, id: RuleId) -> &LocalRule {
        &self.rules[id]
    }

    pub fn name(&self, id: RuleId) -> &str {
        self.rules[id].name()
    }

    pub fn id(&self, name: &str) -> Option<RuleId> {
        self.by_name.get(name).copied()
    }

    /// Radius the rule was declared with before padding.
    pub fn original_radius(&self, id: RuleId) -> usize {
        self.original_radii[id]
    }

    pub fn ids(&self) -> std::ops::Range<RuleId> {
        0..self.rules.len()
    }

    pub fn names(&self, ids: &[RuleId]) -> Vec<String> {
        ids.iter().map(|&id| self.name(id).to_string()).collect()
    }

    pub fn lookup(&self, names: &[&str]) -> Result<Vec<RuleId>> {
        names
            .iter()
            .map(|n| self.id(n).ok_or_else(|| invalid(format!("unknown rule {n}"))))
            .collect()
    }

    pub fn check_ids(&self, ids: &[RuleId]) -> Result<()> {
        match ids.iter().find(|&&id| id >= self.len()) {
            Some(bad) => Err(invalid(format!("rule index {bad} out of range for {} rules", self.len()))),
            None => Ok(()),
        }
    }

    /// The partial transition function `h_ψ : A^(n+2r) → A^n`,
    /// `h_ψ(w)_i = ψ_i(w[i..=i+2r])`.
    pub fn apply_partial(&self, psi: &[RuleId], w: &[Letter]) -> Result<Vec<Letter>> {
        self.check_ids(psi)?;
        let span = 2 * self.radius;
        if w.len() != psi.len() + span {
            return Err(invalid(format!(
                "partial transition of {} rules needs {} letters, got {}",
                psi.len(),
                psi.len() + span,
                w.len()
            )));
        }
        Ok(self.apply_partial_unchecked(psi, w))
    }

    pub(crate) fn apply_partial_unchecked(&self, psi: &[RuleId], w: &[Letter]) -> Vec<Letter> {
        let len = 2 * self.radius + 1;
        psi.iter().enumerate().map(|(i, &f)| self.rules[f].eval(&w[i..i + len])).collect()
    }
}

/// A finite word of rule indices `ψ`, validated against a rule set.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RuleWord(Vec<RuleId>);

impl RuleWord {
    pub fn new(rules: &RuleSet, ids: Vec<RuleId>) -> Result<Self> {
        rules.check_ids(&ids)?;
        Ok(Self(ids))
    }

    pub fn from_names(rules: &RuleSet, names: &[&str]) -> Result<Self> {
        Ok(Self(rules.lookup(names)?))
    }

    pub fn into_inner(self) -> Vec<RuleId> {
        self.0
    }
}

impl Deref for RuleWord {
    type Target = [RuleId];

    fn deref(&self) -> &[RuleId] {
        &self.0
    }
}
