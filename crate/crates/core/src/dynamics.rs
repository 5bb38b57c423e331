//! Linear distributions over `Z_s`: walls, propagation radii, and the
//! sensitive/equicontinuous dichotomy.
//!
//! A rule word `ψ` of length `n ≥ r` is a right-wall when information entering
//! from its right never reaches its `r` leftmost cells: with `u_0 = 0^n`,
//! `u_1 = h_ψ(0^r u_0 v)` and `u_{k+1} = h_ψ(0^r u_k 0^r)` for `k ≥ 1`, every
//! `u_k` starts with `0^r`, for every `v ∈ A^r`. Left-walls are the mirror
//! image. A distribution is equicontinuous when walls recur in both tails:
//! left-walls arbitrarily far left and right-walls arbitrarily far right.

use std::collections::HashMap;

use crate::error::{invalid, Error, Result};
use crate::exec::{map_range, map_slice, Execution};
use crate::model::{index_word, Configuration, Distribution, Letter, RuleId, RuleSet};
use crate::simulation::perturbation_cone;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

/// The orbit `u_1, u_2, …` started from one input `v`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitSummary {
    pub input: Vec<Letter>,
    /// Index `k` of the first state that later repeats.
    pub cycle_start: usize,
    pub cycle_len: usize,
    /// First `k` whose guarded letters are not all zero.
    pub violation: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallCertificate {
    pub pattern: Vec<RuleId>,
    pub side: Side,
    pub orbits: Vec<OrbitSummary>,
    /// Every recorded orbit state keeps its guarded letters at zero.
    pub verified: bool,
}

fn require_linear(rules: &RuleSet, ids: &[RuleId]) -> Result<()> {
    match ids.iter().find(|&&f| !rules.rule(f).is_linear()) {
        Some(&f) => Err(Error::Unsupported(format!("rule {} is not linear", rules.name(f)))),
        None => Ok(()),
    }
}

/// Runs the orbit of one input until a state repeats or a guarded letter
/// becomes non-zero.
fn orbit(rules: &RuleSet, psi: &[RuleId], side: Side, v: Vec<Letter>) -> OrbitSummary {
    let r = rules.radius();
    let n = psi.len();
    let mut input = vec![0; n + 2 * r];
    match side {
        Side::Right => input[r + n..].copy_from_slice(&v),
        Side::Left => input[..r].copy_from_slice(&v),
    }
    let guarded = |u: &[Letter]| match side {
        Side::Right => u[..r].iter().all(|&a| a == 0),
        Side::Left => u[n - r..].iter().all(|&a| a == 0),
    };
    let mut seen: HashMap<Vec<Letter>, usize> = HashMap::new();
    let mut u = rules.apply_partial_unchecked(psi, &input);
    let mut k = 1;
    loop {
        if !guarded(&u) {
            return OrbitSummary { input: v, cycle_start: 0, cycle_len: 0, violation: Some(k) };
        }
        if let Some(&first) = seen.get(&u) {
            return OrbitSummary { input: v, cycle_start: first, cycle_len: k - first, violation: None };
        }
        seen.insert(u.clone(), k);
        input.fill(0);
        input[r..r + n].copy_from_slice(&u);
        u = rules.apply_partial_unchecked(psi, &input);
        k += 1;
    }
}

fn wall_check(rules: &RuleSet, psi: &[RuleId], side: Side, inputs: Vec<Vec<Letter>>) -> Result<WallCertificate> {
    rules.check_ids(psi)?;
    require_linear(rules, psi)?;
    let r = rules.radius();
    if psi.is_empty() || psi.len() < r {
        return Err(invalid(format!("wall patterns need at least max(r, 1) = {} rules", r.max(1))));
    }
    let mut orbits = Vec::with_capacity(inputs.len());
    let mut verified = true;
    for v in inputs {
        let o = orbit(rules, psi, side, v);
        let bad = o.violation.is_some();
        orbits.push(o);
        if bad {
            verified = false;
            break;
        }
    }
    Ok(WallCertificate { pattern: psi.to_vec(), side, orbits, verified })
}

fn basis(rules: &RuleSet) -> Vec<Vec<Letter>> {
    let r = rules.radius();
    (0..r)
        .map(|j| {
            let mut e = vec![0; r];
            e[j] = 1;
            e
        })
        .collect()
}

fn all_inputs(rules: &RuleSet) -> Result<Vec<Vec<Letter>>> {
    let a = rules.alphabet();
    let r = rules.radius();
    let count = a
        .word_count(r)
        .filter(|&n| n <= 1 << 20)
        .ok_or(Error::CapExceeded { what: "wall input enumeration", cap: 1 << 20 })?;
    Ok((0..count as usize).map(|i| index_word(a, r, i)).collect())
}

/// Right-wall test using the unit vectors `e_j` only; the inputs keeping the
/// guarded letters at zero form a submodule, so this is exact.
pub fn is_right_wall(rules: &RuleSet, psi: &[RuleId]) -> Result<WallCertificate> {
    wall_check(rules, psi, Side::Right, basis(rules))
}

pub fn is_left_wall(rules: &RuleSet, psi: &[RuleId]) -> Result<WallCertificate> {
    wall_check(rules, psi, Side::Left, basis(rules))
}

/// Wall test over every `v ∈ A^r`.
pub fn is_wall_exhaustive(rules: &RuleSet, psi: &[RuleId], side: Side) -> Result<WallCertificate> {
    wall_check(rules, psi, side, all_inputs(rules)?)
}

/// `r_i^n` for `n = 0..=steps`: the largest `|offset|` with a non-zero
/// coefficient in the expansion of `H^n(x)_i` as a combination of the `x_j`.
pub fn propagation_radii(theta: &Distribution, i: i64, steps: usize) -> Result<Vec<usize>> {
    let rules = theta.rules();
    require_linear(rules, &theta.used_rules())?;
    let r = rules.radius();
    let s = rules.alphabet().size() as u32;
    // row[k] is the coefficient of x_{i + k − n·r} after n steps
    let mut row: Vec<u32> = vec![1];
    let mut radii = vec![0];
    for n in 0..steps {
        let mut next = vec![0u32; row.len() + 2 * r];
        for (k, &c) in row.iter().enumerate() {
            if c == 0 {
                continue;
            }
            let offset = k as i64 - (n * r) as i64;
            let lambda = theta.local_rule(i + offset).coefficients().expect("checked linear");
            for (j, &l) in lambda.iter().enumerate() {
                next[k + j] = (next[k + j] + c * l as u32) % s;
            }
        }
        row = next;
        let centre = ((n + 1) * r) as i64;
        let reach = row.iter().enumerate().filter(|(_, &c)| c != 0).map(|(k, _)| (k as i64 - centre).unsigned_abs());
        radii.push(reach.max().unwrap_or(0) as usize);
    }
    Ok(radii)
}

/// A wall found in a periodic tail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WallHit {
    pub side: Side,
    /// Phase of the pattern's first cell within the tail's period.
    pub phase: usize,
    pub length: usize,
    /// Start of one occurrence; the pattern recurs every period further out.
    pub start: i64,
    pub certificate: WallCertificate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Equicontinuous,
    /// No wall up to the search bound in at least one tail.
    SensitiveBoundedEvidence,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DynamicsReport {
    pub verdict: Verdict,
    /// Left-wall found in the left tail.
    pub left: Option<WallHit>,
    /// Right-wall found in the right tail.
    pub right: Option<WallHit>,
    pub n_max: usize,
}

impl DynamicsReport {
    /// The sensitive verdict only reflects the finite search.
    pub fn bounded(&self) -> bool {
        self.verdict == Verdict::SensitiveBoundedEvidence
    }
}

/// `max(4 p_L, 4 p_R, 8 r)`.
pub fn default_n_max(theta: &Distribution) -> usize {
    let w = theta.word();
    (4 * w.left().len()).max(4 * w.right().len()).max(8 * theta.radius())
}

/// Searches tail factors of length `max(r, 1)..=n_max` for a wall of the given
/// side; shortest length first, then smallest phase.
fn search_tail(theta: &Distribution, side: Side, n_max: usize, exec: Execution) -> Result<Option<WallHit>> {
    let rules = theta.rules();
    let w = theta.word();
    let period = match side {
        Side::Left => w.left(),
        Side::Right => w.right(),
    };
    let p = period.len();
    for length in rules.radius().max(1)..=n_max {
        let found = map_range(exec, 0..p as u64, |phase| {
            let phase = phase as usize;
            let psi: Vec<RuleId> = (0..length).map(|k| period[(phase + k) % p]).collect();
            let cert = match side {
                Side::Left => is_left_wall(rules, &psi),
                Side::Right => is_right_wall(rules, &psi),
            }?;
            Ok(cert.verified.then_some((phase, cert)))
        });
        for item in found {
            if let Some((phase, certificate)) = item? {
                let start = match side {
                    Side::Left => {
                        let base = w.anchor() - length as i64;
                        base - (base - w.anchor() - phase as i64).rem_euclid(p as i64)
                    }
                    Side::Right => w.middle_end() + phase as i64,
                };
                return Ok(Some(WallHit { side, phase, length, start, certificate }));
            }
        }
    }
    Ok(None)
}

/// Equicontinuous when a left-wall recurs in the left tail and a right-wall in
/// the right tail; otherwise sensitive as far as the bound `n_max` can tell.
pub fn classify(theta: &Distribution, n_max: usize, exec: Execution) -> Result<DynamicsReport> {
    let rules = theta.rules();
    require_linear(rules, &theta.used_rules())?;
    if n_max < rules.radius().max(1) {
        return Err(invalid(format!("n_max must be at least {}", rules.radius().max(1))));
    }
    let left = search_tail(theta, Side::Left, n_max, exec)?;
    let right = search_tail(theta, Side::Right, n_max, exec)?;
    let verdict = if left.is_some() && right.is_some() {
        Verdict::Equicontinuous
    } else {
        Verdict::SensitiveBoundedEvidence
    };
    Ok(DynamicsReport { verdict, left, right, n_max })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmpiricalSummary {
    /// `(origin, spread)` per trial.
    pub trials: Vec<(i64, u64)>,
    pub window: u64,
    pub steps: usize,
    /// Some difference travelled further than `window` from its origin.
    pub escaped: bool,
}

/// Perturbs the zero configuration at `trials` positions spread over the
/// described part of `θ` and watches how far differences travel. By linearity
/// the zero background is representative. Corroboration only.
pub fn empirical_classify(
    theta: &Distribution,
    trials: usize,
    steps: usize,
    window: u64,
    exec: Execution,
) -> Result<EmpiricalSummary> {
    let w = theta.word();
    let lo = w.anchor() - 2 * w.left().len() as i64;
    let hi = w.middle_end() + 2 * w.right().len() as i64;
    let span = (hi - lo).max(1);
    let zero = Configuration::zero(theta.rules().alphabet());
    let origins: Vec<i64> = (0..trials).map(|k| lo + (k as i64 * span) / trials as i64).collect();
    let spreads = map_slice(exec, &origins, |&p| perturbation_cone(theta, &zero, p, steps).map(|c| c.spread()));
    let trials = origins.into_iter().zip(spreads).map(|(p, d)| Ok((p, d?))).collect::<Result<Vec<_>>>()?;
    let escaped = trials.iter().any(|&(_, d)| d > window);
    Ok(EmpiricalSummary { trials, window, steps, escaped })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::model::{Alphabet, LocalRule};

    fn rules() -> Arc<RuleSet> {
        let a = Alphabet::binary();
        Arc::new(
            RuleSet::new(vec![
                LocalRule::linear("id", a, vec![0, 1, 0]).unwrap(),
                LocalRule::linear("xor", a, vec![1, 0, 1]).unwrap(),
                LocalRule::linear("shift", a, vec![0, 0, 1]).unwrap(),
                LocalRule::from_fn("and", a, 1, |w| w[0] & w[2]).unwrap(),
            ])
            .unwrap(),
        )
    }

    #[test]
    fn wall_examples() {
        let r = rules();
        assert!(is_right_wall(&r, &[0]).unwrap().verified);
        assert!(is_left_wall(&r, &[0]).unwrap().verified);
        assert!(!is_right_wall(&r, &[1]).unwrap().verified);
        assert!(!is_left_wall(&r, &[1]).unwrap().verified);
        assert!(is_right_wall(&r, &[0, 0]).unwrap().verified);
        // shift carries information leftward only
        assert!(!is_right_wall(&r, &[2]).unwrap().verified);
        assert!(is_left_wall(&r, &[2]).unwrap().verified);
    }

    #[test]
    fn wall_errors() {
        let r = rules();
        assert!(matches!(is_right_wall(&r, &[3]), Err(Error::Unsupported(_))));
        assert!(is_right_wall(&r, &[]).is_err());
    }

    #[test]
    fn orbit_records_cycle() {
        let r = rules();
        let c = is_right_wall(&r, &[0]).unwrap();
        assert_eq!(c.orbits.len(), 1);
        assert_eq!((c.orbits[0].cycle_start, c.orbits[0].cycle_len), (1, 1));
        let c = is_right_wall(&r, &[1]).unwrap();
        assert_eq!(c.orbits[0].violation, Some(1));
    }

    #[test]
    fn radii() {
        let r = rules();
        let id = Distribution::uniform(r.clone(), 0).unwrap();
        assert!(propagation_radii(&id, 5, 10).unwrap().iter().all(|&x| x == 0));
        let xor = Distribution::uniform(r.clone(), 1).unwrap();
        assert_eq!(propagation_radii(&xor, -3, 8).unwrap(), (0..=8).collect::<Vec<_>>());
        let shift = Distribution::uniform(r.clone(), 2).unwrap();
        assert_eq!(propagation_radii(&shift, 0, 5).unwrap(), (0..=5).collect::<Vec<_>>());
        let and = Distribution::uniform(r, 3).unwrap();
        assert!(propagation_radii(&and, 0, 2).is_err());
    }

    #[test]
    fn classification() {
        let r = rules();
        let id = Distribution::uniform(r.clone(), 0).unwrap();
        let report = classify(&id, default_n_max(&id), Execution::Parallel).unwrap();
        assert_eq!(report.verdict, Verdict::Equicontinuous);
        assert_eq!(report.left.as_ref().unwrap().length, 1);
        let xor = Distribution::uniform(r.clone(), 1).unwrap();
        let report = classify(&xor, 10, Execution::Sequential).unwrap();
        assert_eq!(report.verdict, Verdict::SensitiveBoundedEvidence);
        assert!(report.bounded());
        let block = Distribution::from_names(r.clone(), &["id"], &["xor", "xor", "xor"], &["id"], 0).unwrap();
        assert_eq!(classify(&block, 8, Execution::Parallel).unwrap().verdict, Verdict::Equicontinuous);
        // walls on the left only do not stop information arriving from the right
        let half = Distribution::from_names(r, &["id"], &[], &["xor"], 0).unwrap();
        let report = classify(&half, 8, Execution::Sequential).unwrap();
        assert_eq!(report.verdict, Verdict::SensitiveBoundedEvidence);
        assert!(report.left.is_some() && report.right.is_none());
    }

    #[test]
    fn left_hits_lie_in_the_left_tail() {
        let r = rules();
        let theta = Distribution::from_names(r, &["xor", "id", "id"], &["shift"], &["id"], 4).unwrap();
        let hit = classify(&theta, 12, Execution::Sequential).unwrap().left.unwrap();
        assert!(hit.start + hit.length as i64 <= 4);
        let actual = theta.window(hit.start, hit.start + hit.length as i64 - 1).unwrap();
        assert_eq!(&actual[..], &hit.certificate.pattern[..]);
    }

    #[test]
    fn empirical() {
        let r = rules();
        let id = Distribution::uniform(r.clone(), 0).unwrap();
        assert!(!empirical_classify(&id, 4, 16, 0, Execution::Sequential).unwrap().escaped);
        let xor = Distribution::uniform(r, 1).unwrap();
        let e = empirical_classify(&xor, 2, 32, 16, Execution::Parallel).unwrap();
        assert!(e.escaped);
        assert!(e.trials.iter().all(|&(_, d)| d == 32));
    }
}
