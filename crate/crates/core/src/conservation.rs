//! Number conservation.
//!
//! A distribution conserves the letter sum exactly when every window
//! `ψ = θ_[j−2r, j]` satisfies, for all `u ∈ A^{2r+1}`,
//!
//! ```text
//! ψ_{2r}(u) = u_0 + Σ_{i=0}^{2r−1} [ψ_{i+1}(0^{2r−i} u_[1, i+1]) − ψ_i(0^{2r−i} u_[0, i])]
//! ```
//!
//! over the integers. Windows failing it form the finite set `F_R`; the
//! conserving distributions are the subshift of finite type avoiding it.

use std::fmt::Write as _;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};
use crate::exec::{find_first, map_range, Execution};
use crate::model::{index_word, Configuration, Distribution, Letter, RuleId, RuleSet};

/// A window together with an input breaking the identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WindowViolation {
    pub pattern: Vec<RuleId>,
    pub word: Vec<Letter>,
}

/// Checks the identity for every `u`; returns the first violating `u` in index
/// order, or `None` when the window is allowed.
pub fn is_nc_window(rules: &RuleSet, psi: &[RuleId]) -> Result<Option<Vec<Letter>>> {
    rules.check_ids(psi)?;
    let r2 = 2 * rules.radius();
    if psi.len() != r2 + 1 {
        return Err(invalid(format!("window must have {} rules, got {}", r2 + 1, psi.len())));
    }
    let a = rules.alphabet();
    let count = a
        .word_count(r2 + 1)
        .filter(|&n| n <= 1 << 26)
        .ok_or(Error::CapExceeded { what: "window inputs", cap: 1 << 26 })?;
    let eval = |f: RuleId, w: &[Letter]| rules.rule(psi[f]).eval(w) as i64;
    let mut buf = vec![0; r2 + 1];
    for idx in 0..count as usize {
        let u = index_word(a, r2 + 1, idx);
        let mut rhs = u[0] as i64;
        for i in 0..r2 {
            let zeros = r2 - i;
            buf[..zeros].fill(0);
            buf[zeros..].copy_from_slice(&u[1..=i + 1]);
            rhs += eval(i + 1, &buf);
            buf[zeros..].copy_from_slice(&u[..=i]);
            rhs -= eval(i, &buf);
        }
        if eval(r2, &u) != rhs {
            return Ok(Some(u));
        }
    }
    Ok(None)
}

/// Every forbidden window of a rule set, in index order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NcForbiddenSet {
    pub windows: Vec<WindowViolation>,
}

impl NcForbiddenSet {
    pub fn contains(&self, psi: &[RuleId]) -> bool {
        self.windows.iter().any(|w| w.pattern == psi)
    }

    pub fn len(&self) -> usize {
        self.windows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.windows.is_empty()
    }
}

fn window_count(rules: &RuleSet, len: usize) -> Result<u64> {
    (rules.len() as u64)
        .checked_pow(len as u32)
        .filter(|&n| n <= 1 << 24)
        .ok_or(Error::CapExceeded { what: "rule window enumeration", cap: 1 << 24 })
}

/// Rule word with index `idx` among the words of length `len` over `R`.
fn rule_word(k: usize, len: usize, mut idx: u64) -> Vec<RuleId> {
    let mut w = vec![0; len];
    for slot in w.iter_mut().rev() {
        *slot = (idx % k as u64) as RuleId;
        idx /= k as u64;
    }
    w
}

/// Checks all `|R|^{2r+1}` windows.
pub fn forbidden_nc_windows(rules: &RuleSet, exec: Execution) -> Result<NcForbiddenSet> {
    let len = 2 * rules.radius() + 1;
    let total = window_count(rules, len)?;
    let results = map_range(exec, 0..total, |idx| {
        let psi = rule_word(rules.len(), len, idx);
        is_nc_window(rules, &psi).map(|v| v.map(|word| WindowViolation { pattern: psi, word }))
    });
    let windows = results.into_iter().filter_map(Result::transpose).collect::<Result<_>>()?;
    Ok(NcForbiddenSet { windows })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NcReport {
    pub conserving: bool,
    /// First forbidden window `[j − 2r, j]` and its violation.
    pub witness: Option<(i64, i64, WindowViolation)>,
}

/// Checks every distinct window position of `θ`: one period of each tail plus
/// all windows meeting the middle.
pub fn is_distribution_nc(theta: &Distribution) -> Result<NcReport> {
    let w = theta.word();
    let r2 = 2 * theta.radius() as i64;
    let first = w.anchor() - w.left().len() as i64;
    let last = w.middle_end() + r2 + w.right().len() as i64 - 1;
    for j in first..=last {
        let psi = w.slice(j - r2, j + 1);
        if let Some(word) = is_nc_window(theta.rules(), &psi)? {
            return Ok(NcReport { conserving: false, witness: Some((j - r2, j, WindowViolation { pattern: psi, word })) });
        }
    }
    Ok(NcReport { conserving: true, witness: None })
}

/// The shift of finite type of conserving distributions: vertices are rule
/// words of length `2r`, edges the allowed windows from prefix to suffix.
#[derive(Debug, Clone)]
pub struct NcSft {
    rule_names: Vec<String>,
    word_len: usize,
    vertices: usize,
    /// `(prefix, suffix, window)`, sorted.
    edges: Vec<(usize, usize, Vec<RuleId>)>,
    forbidden: NcForbiddenSet,
}

pub fn nc_sft(rules: &RuleSet, exec: Execution) -> Result<NcSft> {
    let forbidden = forbidden_nc_windows(rules, exec)?;
    let word_len = 2 * rules.radius();
    let vertices = window_count(rules, word_len)? as usize;
    let k = rules.len();
    let total = window_count(rules, word_len + 1)?;
    let edges = (0..total)
        .map(|idx| rule_word(k, word_len + 1, idx))
        .filter(|psi| !forbidden.contains(psi))
        .map(|psi| {
            let enc = |w: &[RuleId]| w.iter().fold(0usize, |acc, &f| acc * k + f);
            (enc(&psi[..word_len]), enc(&psi[1..]), psi)
        })
        .collect();
    let rule_names = rules.ids().map(|f| rules.name(f).to_string()).collect();
    Ok(NcSft { rule_names, word_len, vertices, edges, forbidden })
}

impl NcSft {
    pub fn vertices(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize, Vec<RuleId>)] {
        &self.edges
    }

    pub fn forbidden(&self) -> &NcForbiddenSet {
        &self.forbidden
    }

    /// Vertices lying on some bi-infinite path: repeatedly drop vertices
    /// without an incoming or outgoing edge among the survivors.
    pub fn core(&self) -> Vec<bool> {
        let mut alive = vec![true; self.vertices];
        loop {
            let mut has_in = vec![false; self.vertices];
            let mut has_out = vec![false; self.vertices];
            for (u, v, _) in &self.edges {
                if alive[*u] && alive[*v] {
                    has_out[*u] = true;
                    has_in[*v] = true;
                }
            }
            let mut changed = false;
            for v in 0..self.vertices {
                if alive[v] && !(has_in[v] && has_out[v]) {
                    alive[v] = false;
                    changed = true;
                }
            }
            if !changed {
                return alive;
            }
        }
    }

    /// True when no distribution over the rule set conserves the charge.
    pub fn is_empty(&self) -> bool {
        !self.core().iter().any(|&a| a)
    }

    /// Period of some conserving periodic distribution, if one exists.
    pub fn periodic_point(&self) -> Option<Vec<RuleId>> {
        let alive = self.core();
        let start = alive.iter().position(|&a| a)?;
        let mut trail: Vec<(usize, RuleId)> = Vec::new();
        let mut v = start;
        loop {
            if let Some(i) = trail.iter().position(|&(u, _)| u == v) {
                return Some(trail[i..].iter().map(|&(_, f)| f).collect());
            }
            let (_, next, psi) = self
                .edges
                .iter()
                .find(|(u, t, _)| *u == v && alive[*t])
                .expect("core vertices keep an outgoing edge");
            trail.push((v, psi[self.word_len]));
            v = *next;
        }
    }

    fn vertex_name(&self, v: usize) -> String {
        if self.word_len == 0 {
            return "ε".into();
        }
        rule_word(self.rule_names.len(), self.word_len, v as u64)
            .iter()
            .map(|&f| self.rule_names[f].as_str())
            .collect::<Vec<_>>()
            .join(" ")
    }

    /// DOT rendering; each edge is labelled with the rule it appends.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph nc {\n");
        for v in 0..self.vertices {
            let _ = writeln!(out, "  v{v} [label=\"{}\"];", self.vertex_name(v));
        }
        for (u, v, psi) in &self.edges {
            let _ = writeln!(out, "  v{u} -> v{v} [label=\"{}\"];", self.rule_names[psi[self.word_len]]);
        }
        out.push_str("}\n");
        out
    }
}

/// Which finite configurations the charge oracle tries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OracleMode {
    /// Every configuration supported in `[−W, W]`.
    Exhaustive,
    /// `samples` configurations drawn uniformly from the same set.
    Random { samples: u64, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OracleOutcome {
    Confirmed { checked: u64 },
    /// `θ_position` maps `0^{2r+1}` to a non-zero letter, so `H(0) ≠ 0`.
    ZeroNotFixed { position: i64, rule: RuleId },
    /// `μ(H(x)) ≠ μ(x)`.
    Violation { x: Configuration, before: i128, after: i128 },
}

impl OracleOutcome {
    pub fn is_confirmed(&self) -> bool {
        matches!(self, OracleOutcome::Confirmed { .. })
    }
}

/// Largest number of configurations the exhaustive oracle will enumerate.
pub const ORACLE_CAP: u64 = 1 << 26;

/// Compares `μ(x)` and `μ(H_θ(x))` for finite configurations supported in
/// `[−W, W]`, reporting the first violation in enumeration order.
pub fn charge_oracle(theta: &Distribution, width: u32, mode: OracleMode, exec: Execution) -> Result<OracleOutcome> {
    let rules = theta.rules();
    let a = rules.alphabet();
    let r = rules.radius();
    let w = theta.word();
    let span = w.anchor() - w.left().len() as i64..w.middle_end() + w.right().len() as i64;
    for i in span {
        let f = theta.rule_at(i);
        // index 0 is the all-zero neighbourhood
        if rules.rule(f).eval_index(0) != 0 {
            return Ok(OracleOutcome::ZeroNotFixed { position: i, rule: f });
        }
    }

    let wi = width as i64;
    let len = 2 * width as usize + 1;
    // rules on [−W−r, W+r] are the only ones that can see the support
    let lo = -wi - r as i64;
    let local: Vec<RuleId> = (lo..=wi + r as i64).map(|i| theta.rule_at(i)).collect();
    let check = |letters: &[Letter]| -> Option<(i128, i128)> {
        let mut padded = vec![0; len + 4 * r];
        padded[2 * r..2 * r + len].copy_from_slice(letters);
        let before: i128 = letters.iter().map(|&l| l as i128).sum();
        let after: i128 = local
            .iter()
            .enumerate()
            .map(|(k, &f)| rules.rule(f).eval(&padded[k..k + 2 * r + 1]) as i128)
            .sum();
        (before != after).then_some((before, after))
    };
    let violation = |letters: Vec<Letter>, (before, after): (i128, i128)| -> Result<OracleOutcome> {
        Ok(OracleOutcome::Violation { x: Configuration::finite(a, -wi, letters)?.normalized(), before, after })
    };

    match mode {
        OracleMode::Exhaustive => {
            let total = a
                .word_count(len)
                .filter(|&n| n <= ORACLE_CAP)
                .ok_or(Error::CapExceeded { what: "charge oracle enumeration", cap: ORACLE_CAP as usize })?;
            let hit = find_first(exec, 0..total, |idx| {
                let letters = index_word(a, len, idx as usize);
                check(&letters).map(|c| (letters, c))
            });
            match hit {
                Some((letters, c)) => violation(letters, c),
                None => Ok(OracleOutcome::Confirmed { checked: total }),
            }
        }
        OracleMode::Random { samples, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let s = a.size();
            let drawn: Vec<Vec<Letter>> = (0..samples)
                .map(|_| (0..len).map(|_| rng.random_range(0..s) as Letter).collect())
                .collect();
            let hit = find_first(exec, 0..samples, |k| check(&drawn[k as usize]).map(|c| (k, c)));
            match hit {
                Some((k, c)) => violation(drawn[k as usize].clone(), c),
                None => Ok(OracleOutcome::Confirmed { checked: samples }),
            }
        }
    }
}
