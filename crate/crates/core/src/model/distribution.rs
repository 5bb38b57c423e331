use std::sync::Arc;

use super::ruleset::{RuleId, RuleSet, RuleWord};
use super::word::PeriodicWord;
use super::LocalRule;
use crate::error::Result;

/// An eventually periodic assignment `θ : Z → R` of rules to cells.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Distribution {
    rules: Arc<RuleSet>,
    word: PeriodicWord<RuleId>,
}

impl Distribution {
    pub fn new(
        rules: Arc<RuleSet>,
        left: Vec<RuleId>,
        middle: Vec<RuleId>,
        right: Vec<RuleId>,
        anchor: i64,
    ) -> Result<Self> {
        let word = PeriodicWord::new(left, middle, right, anchor)?;
        Self::from_word(rules, word)
    }

    pub fn from_word(rules: Arc<RuleSet>, word: PeriodicWord<RuleId>) -> Result<Self> {
        rules.check_ids(word.left())?;
        rules.check_ids(word.middle())?;
        rules.check_ids(word.right())?;
        Ok(Self { rules, word })
    }

    pub fn uniform(rules: Arc<RuleSet>, rule: RuleId) -> Result<Self> {
        Self::from_word(rules, PeriodicWord::uniform(rule))
    }

    /// Convenience constructor using rule names.
    pub fn from_names(
        rules: Arc<RuleSet>,
        left: &[&str],
        middle: &[&str],
        right: &[&str],
        anchor: i64,
    ) -> Result<Self> {
        let (l, m, r) = (rules.lookup(left)?, rules.lookup(middle)?, rules.lookup(right)?);
        Self::new(rules, l, m, r, anchor)
    }

    pub fn rules(&self) -> &RuleSet {
        &self.rules
    }

    pub fn rules_arc(&self) -> &Arc<RuleSet> {
        &self.rules
    }

    pub fn word(&self) -> &PeriodicWord<RuleId> {
        &self.word
    }

    pub fn radius(&self) -> usize {
        self.rules.radius()
    }

    /// `θ_i`.
    pub fn rule_at(&self, i: i64) -> RuleId {
        self.word.get(i)
    }

    pub fn local_rule(&self, i: i64) -> &LocalRule {
        self.rules.rule(self.word.get(i))
    }

    /// `θ_[i,j]`.
    pub fn window(&self, i: i64, j: i64) -> Result<RuleWord> {
        RuleWord::new(&self.rules, self.word.window(i, j)?)
    }

    /// The same distribution read with another (compatible) rule set, e.g.
    /// one padded to a larger radius.
    pub fn with_rules(&self, rules: Arc<RuleSet>) -> Result<Self> {
        Self::from_word(rules, self.word.clone())
    }

    /// `σ^k(θ)`: `θ'_i = θ_{i+k}`.
    pub fn shifted(&self, k: i64) -> Self {
        Self { rules: self.rules.clone(), word: self.word.shifted(k) }
    }

    /// Every rule that occurs somewhere in `θ`.
    pub fn used_rules(&self) -> Vec<RuleId> {
        self.word.symbols()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Alphabet;

    fn rules() -> Arc<RuleSet> {
        let a = Alphabet::binary();
        Arc::new(
            RuleSet::new(vec![
                LocalRule::from_fn("id", a, 1, |w| w[1]).unwrap(),
                LocalRule::linear("xor", a, vec![1, 0, 1]).unwrap(),
            ])
            .unwrap(),
        )
    }

    #[test]
    fn rule_at_examples() {
        let r = rules();
        let u = Distribution::uniform(r.clone(), 1).unwrap();
        assert_eq!(u.rule_at(-1_000_000), 1);
        let theta = Distribution::from_names(r, &["id"], &["xor", "xor"], &["id"], 0).unwrap();
        assert_eq!(theta.rule_at(1), 1);
        assert_eq!(theta.rule_at(2), 0);
        assert_eq!(theta.rule_at(-1), 0);
    }

    #[test]
    fn window_examples() {
        let r = rules();
        let theta = Distribution::from_names(r.clone(), &["id"], &["xor", "xor"], &["id"], 0).unwrap();
        assert_eq!(&*theta.window(-1, 2).unwrap(), &[0, 1, 1, 0]);
        assert_eq!(&*theta.window(1, 1).unwrap(), &[1]);
        assert!(theta.window(2, 1).is_err());
        let u = Distribution::uniform(r, 1).unwrap();
        assert_eq!(&*u.window(5, 7).unwrap(), &[1, 1, 1]);
    }

    #[test]
    fn invalid_ids_rejected() {
        assert!(Distribution::new(rules(), vec![0], vec![5], vec![0], 0).is_err());
        assert!(Distribution::from_names(rules(), &["nope"], &[], &["id"], 0).is_err());
    }
}
