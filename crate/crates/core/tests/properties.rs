//! Randomized invariants checked against the oracles in `common`.

mod common;

use std::sync::Arc;

use proptest::prelude::*;

use common::{apply, onto, RawWord};
use nuca_core::conservation::{charge_oracle, is_distribution_nc, OracleMode};
use nuca_core::dynamics::{is_left_wall, is_right_wall, is_wall_exhaustive, Side};
use nuca_core::injectivity::{is_distribution_injective, verify_witness};
use nuca_core::simulation::{cantor_distance, iterate, perturbation_cone, step, CantorDistance};
use nuca_core::surjectivity::{forbidden_pattern_dfa, is_distribution_surjective};
use nuca_core::{Alphabet, Configuration, Distribution, Execution, Letter, LocalRule, RuleSet};

fn binary_rules(codes: &[u8]) -> Arc<RuleSet> {
    let a = Alphabet::binary();
    let rules = codes
        .iter()
        .enumerate()
        .map(|(k, &c)| LocalRule::from_table(format!("e{c}_{k}"), a, 1, (0..8).map(|i| (c >> i) & 1).collect()).unwrap())
        .collect();
    Arc::new(RuleSet::new(rules).unwrap())
}

fn raw(symbols: usize, max_mid: usize) -> impl Strategy<Value = RawWord<usize>> {
    (
        prop::collection::vec(0..symbols, 1..=3),
        prop::collection::vec(0..symbols, 0..=max_mid),
        prop::collection::vec(0..symbols, 1..=3),
        -6i64..=6,
    )
        .prop_map(|(left, middle, right, anchor)| RawWord { left, middle, right, anchor })
}

fn distribution(set: &Arc<RuleSet>, w: &RawWord<usize>) -> Distribution {
    Distribution::new(set.clone(), w.left.clone(), w.middle.clone(), w.right.clone(), w.anchor).unwrap()
}

fn configuration(a: Alphabet, w: &RawWord<usize>) -> Configuration {
    let l = |v: &[usize]| v.iter().map(|&x| x as Letter).collect();
    Configuration::new(a, l(&w.left), l(&w.middle), l(&w.right), w.anchor).unwrap()
}

fn linear_rules(s: usize, coeffs: &[Vec<u8>]) -> Arc<RuleSet> {
    let a = Alphabet::new(s).unwrap();
    let rules = coeffs
        .iter()
        .enumerate()
        .map(|(k, c)| LocalRule::linear(format!("f{k}"), a, c.iter().map(|&x| x % s as u8).collect()).unwrap())
        .collect();
    Arc::new(RuleSet::new(rules).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partial_functions_match_tables(codes in prop::collection::vec(any::<u8>(), 1..=3),
                                      seed in prop::collection::vec((0usize..3, 0u8..2), 1..=6)) {
        let set = binary_rules(&codes);
        let psi: Vec<usize> = seed.iter().map(|&(f, _)| f % set.len()).collect();
        let mut w: Vec<Letter> = seed.iter().map(|&(_, a)| a).collect();
        w.extend([1, 0]);
        prop_assert_eq!(set.apply_partial(&psi, &w).unwrap(), apply(&set, &psi, &w));
    }

    #[test]
    fn padding_ignores_outer_cells(code in any::<u8>(), w in prop::collection::vec(0u8..2, 5)) {
        let rule = LocalRule::from_table("f", Alphabet::binary(), 1, (0..8).map(|i| (code >> i) & 1).collect()).unwrap();
        prop_assert_eq!(rule.padded(2).unwrap().eval(&w), rule.eval(&w[1..4]));
    }

    #[test]
    fn linear_rules_are_additive(s in 2usize..=5, c in prop::collection::vec(0u8..5, 3),
                                 u in prop::collection::vec(0u8..5, 3), v in prop::collection::vec(0u8..5, 3)) {
        let rule = LocalRule::linear("f", Alphabet::new(s).unwrap(), c.iter().map(|&x| x % s as u8).collect()).unwrap();
        let m = |x: &[u8]| x.iter().map(|&a| a % s as u8).collect::<Vec<_>>();
        let (u, v) = (m(&u), m(&v));
        let sum: Vec<u8> = u.iter().zip(&v).map(|(&a, &b)| (a + b) % s as u8).collect();
        prop_assert_eq!(rule.eval(&sum), (rule.eval(&u) + rule.eval(&v)) % s as u8);
        prop_assert!(rule.is_linear());
    }

    #[test]
    fn step_reads_the_right_rule_and_cells(codes in prop::collection::vec(any::<u8>(), 1..=3),
                                           t in raw(3, 5), c in raw(2, 6)) {
        let set = binary_rules(&codes);
        let t = RawWord { left: t.left.iter().map(|&f| f % set.len()).collect(),
                          middle: t.middle.iter().map(|&f| f % set.len()).collect(),
                          right: t.right.iter().map(|&f| f % set.len()).collect(), anchor: t.anchor };
        let theta = distribution(&set, &t);
        let y = step(&theta, &configuration(Alphabet::binary(), &c)).unwrap();
        for i in -40..=40 {
            let nb: Vec<Letter> = (i - 1..=i + 1).map(|k| c.at(k) as Letter).collect();
            prop_assert_eq!(y.get(i), set.rule(t.at(i)).eval(&nb));
        }
    }

    #[test]
    fn uniform_step_commutes_with_shift(code in any::<u8>(), c in raw(2, 6), k in -5i64..=5) {
        let set = binary_rules(&[code]);
        let theta = Distribution::uniform(set, 0).unwrap();
        let x = configuration(Alphabet::binary(), &c);
        prop_assert_eq!(step(&theta, &x.shifted(k)).unwrap(), step(&theta, &x).unwrap().shifted(k));
    }

    #[test]
    fn iterate_composes_steps(codes in prop::collection::vec(any::<u8>(), 2), t in raw(2, 4), c in raw(2, 4), n in 0usize..6) {
        let set = binary_rules(&codes);
        let theta = distribution(&set, &t);
        let x = configuration(Alphabet::binary(), &c);
        let mut y = x.clone();
        for _ in 0..n {
            y = step(&theta, &y).unwrap();
        }
        prop_assert_eq!(iterate(&theta, &x, n).unwrap(), y);
    }

    #[test]
    fn perturbations_stay_in_the_light_cone(codes in prop::collection::vec(any::<u8>(), 2), t in raw(2, 4),
                                            c in raw(2, 4), p in -5i64..=5) {
        let set = binary_rules(&codes);
        let theta = distribution(&set, &t);
        let cone = perturbation_cone(&theta, &configuration(Alphabet::binary(), &c), p, 12).unwrap();
        prop_assert_eq!(cone.differences(0), vec![p]);
        for step in 0..=12 {
            for i in cone.differences(step) {
                prop_assert!((i - p).unsigned_abs() <= step as u64);
            }
        }
    }

    #[test]
    fn cantor_distance_is_symmetric_and_separating(a in raw(2, 4), b in raw(2, 4)) {
        let (x, y) = (configuration(Alphabet::binary(), &a), configuration(Alphabet::binary(), &b));
        let d = cantor_distance(&x, &y).unwrap();
        prop_assert_eq!(d, cantor_distance(&y, &x).unwrap());
        prop_assert_eq!(d == CantorDistance::Zero, x == y);
        if let CantorDistance::Pow2Neg(k) = d {
            let k = k as i64;
            prop_assert!(x.get(k) != y.get(k) || x.get(-k) != y.get(-k));
            for i in 1 - k..k {
                prop_assert_eq!(x.get(i), y.get(i));
            }
        }
    }

    #[test]
    fn forbidden_patterns_match_enumeration(codes in prop::collection::vec(any::<u8>(), 1..=2),
                                            psi in prop::collection::vec(0usize..2, 1..=4)) {
        let set = binary_rules(&codes);
        let psi: Vec<usize> = psi.iter().map(|&f| f % set.len()).collect();
        let fp = forbidden_pattern_dfa(set.clone()).unwrap();
        prop_assert_eq!(fp.contains(&psi), !onto(&set, &psi));
        if let Some(u) = fp.unreachable_word(&psi) {
            prop_assert!(!common::preimages(&set, &psi).contains_key(&u));
        }
    }

    #[test]
    fn injective_uniform_is_surjective(code in any::<u8>()) {
        let theta = Distribution::uniform(binary_rules(&[code]), 0).unwrap();
        let inj = is_distribution_injective(&theta).unwrap();
        if inj.injective {
            prop_assert!(is_distribution_surjective(&theta).unwrap().surjective);
        } else {
            let (x, y) = inj.witness.unwrap();
            prop_assert!(verify_witness(&theta, &x, &y).unwrap());
        }
    }

    #[test]
    fn nc_verdict_is_shift_invariant(codes in prop::collection::vec(any::<u8>(), 2), t in raw(2, 3), k in -4i64..=4) {
        let set = binary_rules(&codes);
        let theta = distribution(&set, &t);
        prop_assert_eq!(is_distribution_nc(&theta).unwrap().conserving,
                        is_distribution_nc(&theta.shifted(k)).unwrap().conserving);
    }

    #[test]
    fn nc_verdict_matches_charge_oracle(codes in prop::collection::vec(0u8..4, 2), l in 0usize..2,
                                        mid in prop::collection::vec(0usize..2, 0..=2), r in 0usize..2) {
        // 0 → zero, 1 → min, 2 → id, 3 → shift; all fix the zero neighbourhood
        let a = Alphabet::binary();
        let pick = |c: u8, k: usize| match c {
            0 => LocalRule::from_fn(format!("zero{k}"), a, 1, |_| 0),
            1 => LocalRule::from_fn(format!("min{k}"), a, 1, |w| w[0] & w[2]),
            2 => LocalRule::from_fn(format!("id{k}"), a, 1, |w| w[1]),
            _ => LocalRule::from_fn(format!("shift{k}"), a, 1, |w| w[2]),
        }.unwrap();
        let set = Arc::new(RuleSet::new(vec![pick(codes[0], 0), pick(codes[1], 1)]).unwrap());
        let theta = Distribution::new(set, vec![l], mid, vec![r], 0).unwrap();
        let verdict = is_distribution_nc(&theta).unwrap().conserving;
        let oracle = charge_oracle(&theta, 4, OracleMode::Exhaustive, Execution::Sequential).unwrap();
        prop_assert_eq!(verdict, oracle.is_confirmed(), "{:?}", oracle);
    }

    #[test]
    fn wall_basis_check_matches_exhaustive(s in 2usize..=3, coeffs in prop::collection::vec(prop::collection::vec(0u8..3, 3), 1..=3)) {
        let set = linear_rules(s, &coeffs);
        let psi: Vec<usize> = (0..set.len()).collect();
        prop_assert_eq!(is_right_wall(&set, &psi).unwrap().verified,
                        is_wall_exhaustive(&set, &psi, Side::Right).unwrap().verified);
        prop_assert_eq!(is_left_wall(&set, &psi).unwrap().verified,
                        is_wall_exhaustive(&set, &psi, Side::Left).unwrap().verified);
    }

    #[test]
    fn walls_mirror(s in 2usize..=3, coeffs in prop::collection::vec(prop::collection::vec(0u8..3, 3), 1..=3)) {
        let set = linear_rules(s, &coeffs);
        let mirrored: Vec<Vec<u8>> = coeffs.iter().rev().map(|c| c.iter().rev().copied().collect()).collect();
        let mirror = linear_rules(s, &mirrored);
        let psi: Vec<usize> = (0..set.len()).collect();
        prop_assert_eq!(is_right_wall(&set, &psi).unwrap().verified, is_left_wall(&mirror, &psi).unwrap().verified);
    }
}
