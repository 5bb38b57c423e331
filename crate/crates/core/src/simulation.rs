//! Exact simulation of `H_θ` on eventually periodic configurations, charge
//! accounting, the Cantor distance, space-time diagrams and perturbation
//! cones.

use std::fmt::Write as _;

use crate::error::{invalid, Result};
use crate::model::{lcm, Alphabet, Configuration, Distribution, Letter, PeriodicWord};

/// `H_θ(x)`, again eventually periodic.
///
/// Left of `min(anchor_θ, anchor_x − r)` both the rule and every neighbourhood
/// read periodic tails, so the image is periodic there with the lcm of the two
/// left periods; symmetrically on the right. Everything between is computed
/// cell by cell.
pub fn step(theta: &Distribution, x: &Configuration) -> Result<Configuration> {
    check_alphabet(theta, x)?;
    let r = theta.radius() as i64;
    let (tw, xw) = (theta.word(), x.word());
    let lo = tw.anchor().min(xw.anchor() - r);
    let hi = tw.middle_end().max(xw.middle_end() + r);
    let pl = lcm(tw.left().len(), xw.left().len()) as i64;
    let pr = lcm(tw.right().len(), xw.right().len()) as i64;
    let image = |a: i64, b: i64| (a..b).map(|i| cell(theta, x, i)).collect::<Vec<_>>();
    let word = PeriodicWord::new(image(lo - pl, lo), image(lo, hi), image(hi, hi + pr), lo)?;
    Configuration::from_word(x.alphabet(), word.normalized())
}

/// `H_θ(x)_i = θ_i(x_[i−r, i+r])`.
pub fn cell(theta: &Distribution, x: &Configuration, i: i64) -> Letter {
    let r = theta.radius() as i64;
    let rule = theta.local_rule(i);
    let s = x.alphabet().size();
    let index = (i - r..=i + r).fold(0usize, |acc, j| acc * s + x.get(j) as usize);
    rule.eval_index(index)
}

/// `H_θ^t(x)`.
pub fn iterate(theta: &Distribution, x: &Configuration, t: usize) -> Result<Configuration> {
    check_alphabet(theta, x)?;
    let mut current = x.clone();
    for _ in 0..t {
        current = step(theta, &current)?;
    }
    Ok(current)
}

fn check_alphabet(theta: &Distribution, x: &Configuration) -> Result<()> {
    let (a, b) = (theta.rules().alphabet(), x.alphabet());
    if a != b {
        return Err(invalid(format!(
            "distribution uses alphabet of size {} but configuration uses {}",
            a.size(),
            b.size()
        )));
    }
    Ok(())
}

/// Value of the Cantor distance, always `0` or a power of two `2^{-k}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CantorDistance {
    Zero,
    /// `2^{-k}`.
    Pow2Neg(u32),
}

impl CantorDistance {
    pub fn as_f64(self) -> f64 {
        match self {
            CantorDistance::Zero => 0.0,
            CantorDistance::Pow2Neg(k) => 2f64.powi(-(k as i32)),
        }
    }
}

/// `d(x, y) = 2^{-k}` with `k` the least `i ≥ 0` such that `x` and `y` differ
/// on `[-i, i]`.
pub fn cantor_distance(x: &Configuration, y: &Configuration) -> Result<CantorDistance> {
    if x.alphabet() != y.alphabet() {
        return Err(invalid("configurations use different alphabets"));
    }
    Ok(match x.word().first_difference_from_origin(y.word()) {
        None => CantorDistance::Zero,
        Some(i) => CantorDistance::Pow2Neg(i.unsigned_abs() as u32),
    })
}

/// `μ_n(x) = Σ_{i=-n}^{n} x_i`.
pub fn partial_charge(x: &Configuration, n: u64) -> i128 {
    let n = n as i64;
    (-n..=n).map(|i| x.get(i) as i128).sum()
}

/// The global charge `μ(x)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Charge {
    Finite(i128),
    Infinite,
}

pub fn global_charge(x: &Configuration) -> Charge {
    if !x.is_finite() {
        return Charge::Infinite;
    }
    let w = x.word();
    Charge::Finite(w.middle().iter().map(|&a| a as i128).sum())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChargeEntry {
    pub n: u64,
    pub before: i128,
    pub after: i128,
    /// `μ_n(H(x)) / μ_n(x)` when `μ_n(x) ≠ 0`.
    pub ratio: Option<f64>,
}

/// Partial charges of `x` and `H_θ(x)` for `n = 0..=n_max`, with the smallest
/// and largest ratio over the last half of the series as finite stand-ins for
/// the liminf and limsup.
#[derive(Debug, Clone, PartialEq)]
pub struct ChargeSeries {
    pub entries: Vec<ChargeEntry>,
    pub tail_min: Option<f64>,
    pub tail_max: Option<f64>,
}

pub fn charge_ratio_series(theta: &Distribution, x: &Configuration, n_max: u64) -> Result<ChargeSeries> {
    let y = step(theta, x)?;
    let mut entries = Vec::with_capacity(n_max as usize + 1);
    let (mut before, mut after) = (x.get(0) as i128, y.get(0) as i128);
    for n in 0..=n_max {
        if n > 0 {
            let k = n as i64;
            before += x.get(-k) as i128 + x.get(k) as i128;
            after += y.get(-k) as i128 + y.get(k) as i128;
        }
        let ratio = (before != 0).then(|| after as f64 / before as f64);
        entries.push(ChargeEntry { n, before, after, ratio });
    }
    let tail: Vec<f64> = entries[entries.len() / 2..].iter().filter_map(|e| e.ratio).collect();
    let tail_min = tail.iter().copied().reduce(f64::min);
    let tail_max = tail.iter().copied().reduce(f64::max);
    Ok(ChargeSeries { entries, tail_min, tail_max })
}

/// Rows `t = 0..=T` of `H^t(x)` restricted to `[a, b]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceTimeDiagram {
    pub alphabet: Alphabet,
    pub a: i64,
    pub b: i64,
    pub rows: Vec<Vec<Letter>>,
}

pub fn space_time(theta: &Distribution, x: &Configuration, a: i64, b: i64, steps: usize) -> Result<SpaceTimeDiagram> {
    if a > b {
        return Err(invalid(format!("window {a}..{b} is empty")));
    }
    check_alphabet(theta, x)?;
    let mut rows = Vec::with_capacity(steps + 1);
    let mut current = x.clone();
    rows.push(current.slice(a, b + 1));
    for _ in 0..steps {
        current = step(theta, &current)?;
        rows.push(current.slice(a, b + 1));
    }
    Ok(SpaceTimeDiagram { alphabet: x.alphabet(), a, b, rows })
}

impl SpaceTimeDiagram {
    pub fn width(&self) -> usize {
        (self.b - self.a + 1) as usize
    }

    /// Plain PGM (`P2`), maxval 255, letter 0 white and `s-1` black.
    pub fn to_pgm(&self) -> String {
        let top = self.alphabet.size() - 1;
        let mut out = format!("P2\n{} {}\n255\n", self.width(), self.rows.len());
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|&a| (255 - a as usize * 255 / top).to_string()).collect();
            out.push_str(&line.join(" "));
            out.push('\n');
        }
        out
    }

    /// Header `t,<positions>` then one line per time step.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t");
        for i in self.a..=self.b {
            let _ = write!(out, ",{i}");
        }
        out.push('\n');
        for (t, row) in self.rows.iter().enumerate() {
            let _ = write!(out, "{t}");
            for a in row {
                let _ = write!(out, ",{a}");
            }
            out.push('\n');
        }
        out
    }

    /// One line per step; `.` for 0, digits or letters otherwise.
    pub fn to_text(&self) -> String {
        let glyph = |a: Letter| match a {
            0 => '.',
            1..=9 => (b'0' + a) as char,
            10..=35 => (b'a' + a - 10) as char,
            _ => '#',
        };
        let mut out = String::new();
        for row in &self.rows {
            out.extend(row.iter().map(|&a| glyph(a)));
            out.push('\n');
        }
        out
    }
}

/// Where `H^t(x)` and `H^t(y)` differ, `y` being `x` with one letter bumped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerturbationCone {
    pub origin: i64,
    /// Left end of the reported window.
    pub lo: i64,
    /// `masks[t][k]` is set iff the orbits differ at `lo + k` at time `t`.
    pub masks: Vec<Vec<bool>>,
}

impl PerturbationCone {
    /// Positions where the orbits differ at time `t`.
    pub fn differences(&self, t: usize) -> Vec<i64> {
        self.masks[t].iter().enumerate().filter(|(_, &m)| m).map(|(k, _)| self.lo + k as i64).collect()
    }

    /// Largest distance from the origin reached by a difference at any time.
    pub fn spread(&self) -> u64 {
        (0..self.masks.len())
            .flat_map(|t| self.differences(t))
            .map(|i| (i - self.origin).unsigned_abs())
            .max()
            .unwrap_or(0)
    }
}

/// Runs `x` and `x` with the letter at `p` cycled by +1 side by side for
/// `steps` steps, reporting differences on `[p − r·T − 1, p + r·T + 1]`.
pub fn perturbation_cone(theta: &Distribution, x: &Configuration, p: i64, steps: usize) -> Result<PerturbationCone> {
    check_alphabet(theta, x)?;
    let s = x.alphabet().size();
    let bumped = ((x.get(p) as usize + 1) % s) as Letter;
    let mut y = x.with_letter(p, bumped)?;
    let mut x = x.clone();
    let reach = theta.radius() as i64 * steps as i64 + 1;
    let (lo, hi) = (p - reach, p + reach);
    let mask = |x: &Configuration, y: &Configuration| (lo..=hi).map(|i| x.get(i) != y.get(i)).collect();
    let mut masks = vec![mask(&x, &y)];
    for _ in 0..steps {
        x = step(theta, &x)?;
        y = step(theta, &y)?;
        masks.push(mask(&x, &y));
    }
    Ok(PerturbationCone { origin: p, lo, masks })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::model::{LocalRule, RuleSet};

    fn rules() -> Arc<RuleSet> {
        let a = Alphabet::binary();
        Arc::new(
            RuleSet::new(vec![
                LocalRule::from_fn("id", a, 1, |w| w[1]).unwrap(),
                LocalRule::from_fn("shift", a, 1, |w| w[2]).unwrap(),
                LocalRule::linear("xor", a, vec![1, 0, 1]).unwrap(),
            ])
            .unwrap(),
        )
    }

    fn uniform(name: &str) -> Distribution {
        let r = rules();
        let id = r.id(name).unwrap();
        Distribution::uniform(r, id).unwrap()
    }

    fn single(p: i64) -> Configuration {
        Configuration::single(Alphabet::binary(), 1, p).unwrap()
    }

    #[test]
    fn shift_moves_left() {
        let y = step(&uniform("shift"), &single(0)).unwrap();
        assert_eq!(y, single(-1));
        assert_eq!(iterate(&uniform("shift"), &single(0), 3).unwrap(), single(-3));
    }

    #[test]
    fn xor_doubles_single_one() {
        let y = step(&uniform("xor"), &single(0)).unwrap();
        assert_eq!(y.slice(-2, 3), vec![0, 1, 0, 1, 0]);
        assert_eq!(global_charge(&y), Charge::Finite(2));
        let y2 = iterate(&uniform("xor"), &single(0), 2).unwrap();
        let ones: Vec<i64> = (-10..=10).filter(|&i| y2.get(i) == 1).collect();
        assert_eq!(ones, vec![-2, 2]);
    }

    #[test]
    fn identity_and_zero_steps() {
        let x = Configuration::new(Alphabet::binary(), vec![1, 0], vec![1, 1, 0], vec![0, 0, 1], 4).unwrap();
        assert_eq!(step(&uniform("id"), &x).unwrap(), x);
        assert_eq!(iterate(&uniform("xor"), &x, 0).unwrap(), x);
    }

    #[test]
    fn periodic_images_are_exact() {
        let r = rules();
        let theta = Distribution::from_names(r, &["id", "xor"], &["shift"], &["xor", "shift", "id"], -2).unwrap();
        let x = Configuration::new(Alphabet::binary(), vec![1, 1, 0], vec![0, 1], vec![1, 0], 3).unwrap();
        let y = step(&theta, &x).unwrap();
        for i in -60..60 {
            assert_eq!(y.get(i), cell(&theta, &x, i), "position {i}");
        }
    }

    #[test]
    fn alphabet_mismatch_rejected() {
        let x = Configuration::zero(Alphabet::new(3).unwrap());
        assert!(step(&uniform("id"), &x).is_err());
    }

    #[test]
    fn cantor_examples() {
        let a = Alphabet::binary();
        let x = Configuration::zero(a);
        assert_eq!(cantor_distance(&x, &x).unwrap(), CantorDistance::Zero);
        assert_eq!(cantor_distance(&x, &single(0)).unwrap().as_f64(), 1.0);
        let y = Configuration::finite(a, -3, vec![1, 0, 0, 0, 0, 0, 1]).unwrap();
        assert_eq!(cantor_distance(&x, &y).unwrap(), CantorDistance::Pow2Neg(3));
        assert_eq!(cantor_distance(&x, &single(3)).unwrap().as_f64(), 0.125);
    }

    #[test]
    fn charges() {
        let a = Alphabet::binary();
        assert_eq!(partial_charge(&Configuration::zero(a), 5), 0);
        assert_eq!(partial_charge(&Configuration::finite(a, -1, vec![1, 1, 1]).unwrap(), 2), 3);
        assert_eq!(partial_charge(&Configuration::uniform(a, 1).unwrap(), 4), 9);
        let t = Alphabet::new(3).unwrap();
        let x = Configuration::finite(t, 0, vec![1, 0, 0, 0, 0, 2]).unwrap();
        assert_eq!(global_charge(&x), Charge::Finite(3));
        let p = Configuration::new(a, vec![0], vec![], vec![0, 1], 0).unwrap();
        assert_eq!(global_charge(&p), Charge::Infinite);
    }

    #[test]
    fn ratio_series() {
        let s = charge_ratio_series(&uniform("xor"), &single(0), 8).unwrap();
        assert!(s.entries[1..].iter().all(|e| e.ratio == Some(2.0)));
        assert_eq!((s.tail_min, s.tail_max), (Some(2.0), Some(2.0)));
        let x = Configuration::finite(Alphabet::binary(), -2, vec![1, 0, 1, 1]).unwrap();
        let s = charge_ratio_series(&uniform("shift"), &x, 10).unwrap();
        assert!(s.entries[4..].iter().all(|e| e.ratio == Some(1.0)));
        let z = charge_ratio_series(&uniform("id"), &Configuration::zero(Alphabet::binary()), 3).unwrap();
        assert!(z.entries.iter().all(|e| e.ratio.is_none()));
        assert_eq!(z.tail_min, None);
    }

    #[test]
    fn pascal_triangle() {
        let d = space_time(&uniform("xor"), &single(0), -8, 8, 8).unwrap();
        for (t, row) in d.rows.iter().enumerate() {
            for (k, &a) in row.iter().enumerate() {
                let i = k as i64 - 8;
                // ⊕^t(δ)_i = C(t, (t + i) / 2) mod 2 when t + i is even and |i| <= t
                let t = t as i64;
                let expected = if i.abs() <= t && (t + i) % 2 == 0 {
                    let k = ((t + i) / 2) as u64;
                    // Lucas: C(t, k) odd iff k & !t == 0
                    (k & !(t as u64) == 0) as Letter
                } else {
                    0
                };
                assert_eq!(a, expected, "t={t} i={i}");
            }
        }
        let pgm = d.to_pgm();
        assert!(pgm.starts_with("P2\n17 9\n255\n"));
        assert!(d.to_csv().starts_with("t,-8,-7"));
    }

    #[test]
    fn shift_stripe() {
        let d = space_time(&uniform("shift"), &single(0), -4, 4, 4).unwrap();
        for (t, row) in d.rows.iter().enumerate() {
            assert_eq!(row.iter().position(|&a| a == 1), Some(4 - t));
        }
    }

    #[test]
    fn cones() {
        let x = Configuration::zero(Alphabet::binary());
        let c = perturbation_cone(&uniform("id"), &x, 5, 6).unwrap();
        assert!((0..=6).all(|t| c.differences(t) == vec![5]));
        let c = perturbation_cone(&uniform("shift"), &x, 5, 6).unwrap();
        assert!((0..=6).all(|t| c.differences(t) == vec![5 - t as i64]));
        assert_eq!(c.spread(), 6);
    }
}
