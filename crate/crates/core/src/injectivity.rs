//! Injectivity of `H_θ` via bi-infinite paths in the product graph.
//!
//! `H_θ(x) = H_θ(y)` with `x ≠ y` exactly when the projected product graph has
//! a bi-infinite path labelled `θ` through some off-diagonal node. The path's
//! nodes are pairs of `2r`-windows; their centre letters spell `x` and `y`.

use std::sync::Arc;

use crate::automata::{biinfinite_flagged_path, LayeredWordGraph};
use crate::debruijn::build_product;
use crate::error::Result;
use crate::model::{Configuration, Distribution};
use crate::simulation::step;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InjectivityReport {
    pub injective: bool,
    /// Distinct configurations with the same image.
    pub witness: Option<(Configuration, Configuration)>,
}

pub fn is_distribution_injective(theta: &Distribution) -> Result<InjectivityReport> {
    let rules = Arc::new(theta.rules().padded_to(1)?);
    let product = build_product(rules)?;
    let g = LayeredWordGraph::new(theta.word().clone());
    let Some(path) = biinfinite_flagged_path(&g, &product.projected_nfa(), &product.off_diagonal()) else {
        return Ok(InjectivityReport { injective: true, witness: None });
    };
    let alphabet = theta.rules().alphabet();
    let x = Configuration::from_word(alphabet, path.map(|q| product.center_letters(q).0).normalized())?;
    let y = Configuration::from_word(alphabet, path.map(|q| product.center_letters(q).1).normalized())?;
    debug_assert!(verify_witness(theta, &x, &y)?);
    Ok(InjectivityReport { injective: false, witness: Some((x, y)) })
}

/// `x ≠ y` and `H_θ(x) = H_θ(y)`, decided exactly.
pub fn verify_witness(theta: &Distribution, x: &Configuration, y: &Configuration) -> Result<bool> {
    Ok(x != y && step(theta, x)? == step(theta, y)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Alphabet, LocalRule, RuleSet};

    fn rules() -> Arc<RuleSet> {
        let a = Alphabet::binary();
        Arc::new(
            RuleSet::new(vec![
                LocalRule::from_fn("id", a, 1, |w| w[1]).unwrap(),
                LocalRule::from_fn("shift", a, 1, |w| w[2]).unwrap(),
                LocalRule::linear("xor", a, vec![1, 0, 1]).unwrap(),
                LocalRule::from_fn("zero", a, 1, |_| 0).unwrap(),
            ])
            .unwrap(),
        )
    }

    fn uniform(name: &str) -> Distribution {
        let r = rules();
        let id = r.id(name).unwrap();
        Distribution::uniform(r, id).unwrap()
    }

    #[test]
    fn bijections_are_injective() {
        for name in ["id", "shift"] {
            let report = is_distribution_injective(&uniform(name)).unwrap();
            assert!(report.injective, "{name}");
            assert!(report.witness.is_none());
        }
    }

    #[test]
    fn xor_collides() {
        let theta = uniform("xor");
        let report = is_distribution_injective(&theta).unwrap();
        assert!(!report.injective);
        let (x, y) = report.witness.unwrap();
        assert!(verify_witness(&theta, &x, &y).unwrap());
    }

    #[test]
    fn known_collision_verifies() {
        let theta = uniform("xor");
        let a = Alphabet::binary();
        let ones = Configuration::uniform(a, 1).unwrap();
        let zeros = Configuration::zero(a);
        assert!(verify_witness(&theta, &ones, &zeros).unwrap());
        assert!(!verify_witness(&theta, &ones, &ones).unwrap());
        assert!(!verify_witness(&uniform("id"), &ones, &zeros).unwrap());
    }

    #[test]
    fn mixed_distributions() {
        let r = rules();
        // a single zero cell forgets its letter
        let theta = Distribution::from_names(r.clone(), &["id"], &["zero"], &["id"], 3).unwrap();
        let report = is_distribution_injective(&theta).unwrap();
        let (x, y) = report.witness.expect("zero cell loses information");
        assert!(verify_witness(&theta, &x, &y).unwrap());
        // id then shift never reads cell 0
        let seam = Distribution::from_names(r.clone(), &["id"], &[], &["shift"], 0).unwrap();
        let report = is_distribution_injective(&seam).unwrap();
        let (x, y) = report.witness.expect("cell 0 is never read");
        assert!(x.get(0) != y.get(0));
        assert!(verify_witness(&seam, &x, &y).unwrap());
        // shift then id reads cell 0 twice and every other cell once
        let fine = Distribution::from_names(r, &["shift"], &[], &["id"], 0).unwrap();
        let report = is_distribution_injective(&fine).unwrap();
        assert!(report.injective);
    }
}
