//! Eventually periodic bi-infinite words.
//!
//! A word is stored as `^ω left · middle · right^ω`. The middle occupies
//! positions `[anchor, anchor + middle.len())`; the left period is laid out so
//! that its last symbol sits at `anchor - 1` and repeats leftward, and the
//! right period starts at `anchor + middle.len()` and repeats rightward.

use crate::error::{invalid, Result};

#[derive(Debug, Clone)]
pub struct PeriodicWord<T> {
    left: Vec<T>,
    middle: Vec<T>,
    right: Vec<T>,
    anchor: i64,
}

impl<T: Copy + Eq> PeriodicWord<T> {
    pub fn new(left: Vec<T>, middle: Vec<T>, right: Vec<T>, anchor: i64) -> Result<Self> {
        if left.is_empty() || right.is_empty() {
            return Err(invalid("periods of an eventually periodic word must be non-empty"));
        }
        Ok(Self { left, middle, right, anchor })
    }

    pub fn uniform(symbol: T) -> Self {
        Self { left: vec![symbol], middle: Vec::new(), right: vec![symbol], anchor: 0 }
    }

    pub fn left(&self) -> &[T] {
        &self.left
    }

    pub fn middle(&self) -> &[T] {
        &self.middle
    }

    pub fn right(&self) -> &[T] {
        &self.right
    }

    pub fn anchor(&self) -> i64 {
        self.anchor
    }

    /// First position of the right periodic tail.
    pub fn middle_end(&self) -> i64 {
        self.anchor + self.middle.len() as i64
    }

    pub fn get(&self, i: i64) -> T {
        if i < self.anchor {
            let p = self.left.len() as i64;
            self.left[(i - self.anchor).rem_euclid(p) as usize]
        } else if i < self.middle_end() {
            self.middle[(i - self.anchor) as usize]
        } else {
            let p = self.right.len() as i64;
            self.right[(i - self.middle_end()).rem_euclid(p) as usize]
        }
    }

    /// Symbols at positions `[start, end)`; empty when `end <= start`.
    pub fn slice(&self, start: i64, end: i64) -> Vec<T> {
        (start..end).map(|i| self.get(i)).collect()
    }

    /// Symbols at positions `[i, j]` (inclusive).
    pub fn window(&self, i: i64, j: i64) -> Result<Vec<T>> {
        if i > j {
            return Err(invalid(format!("window [{i}, {j}] is empty")));
        }
        Ok(self.slice(i, j + 1))
    }

    pub fn map<U: Copy + Eq>(&self, f: impl Fn(T) -> U) -> PeriodicWord<U> {
        PeriodicWord {
            left: self.left.iter().map(|&t| f(t)).collect(),
            middle: self.middle.iter().map(|&t| f(t)).collect(),
            right: self.right.iter().map(|&t| f(t)).collect(),
            anchor: self.anchor,
        }
    }

    /// The word `w'` with `w'_i = w_{i+k}`.
    pub fn shifted(&self, k: i64) -> Self {
        Self { anchor: self.anchor - k, ..self.clone() }
    }

    /// True when both tails repeat the same letter `t` and the middle is empty
    /// of anything else.
    pub fn is_constant(&self, t: T) -> bool {
        self.left.iter().chain(&self.middle).chain(&self.right).all(|&s| s == t)
    }

    /// True when only `t` occurs in both periodic tails.
    pub fn tails_are(&self, t: T) -> bool {
        self.left.iter().chain(&self.right).all(|&s| s == t)
    }

    /// Every distinct symbol occurring anywhere in the word.
    pub fn symbols(&self) -> Vec<T>
    where
        T: Ord,
    {
        let mut out: Vec<T> = self.left.iter().chain(&self.middle).chain(&self.right).copied().collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Positions `[lo, hi)` on which two words must agree for them to be equal.
    ///
    /// Left of `min(anchor)` both words are periodic with the lcm of their left
    /// periods, so one full joint period there decides the whole left half;
    /// symmetrically on the right.
    pub fn comparison_span(&self, other: &Self) -> (i64, i64) {
        let lo = self.anchor.min(other.anchor);
        let hi = self.middle_end().max(other.middle_end());
        let pl = lcm(self.left.len(), other.left.len()) as i64;
        let pr = lcm(self.right.len(), other.right.len()) as i64;
        (lo - pl, hi + pr)
    }

    /// Position closest to the origin where the words differ; ties are broken
    /// toward the negative side.
    pub fn first_difference_from_origin(&self, other: &Self) -> Option<i64> {
        let (lo, hi) = self.comparison_span(other);
        let reach = lo.unsigned_abs().max(hi.unsigned_abs()) as i64;
        (0..=reach).find_map(|k| {
            [-k, k].into_iter().find(|&i| self.get(i) != other.get(i))
        })
    }

    /// Canonical representation: primitive periods, the left tail extended as
    /// far right as it matches, and the right tail starting as early as it can.
    /// Purely periodic words are anchored at 0 with an empty middle.
    pub fn normalized(&self) -> Self {
        let p = minimal_period(&self.left);
        let q = minimal_period(&self.right);
        let left_p = self.left[self.left.len() - p..].to_vec();
        let right_q = self.right[..q].to_vec();
        let base = Self { left: left_p, middle: self.middle.clone(), right: right_q, anchor: self.anchor };
        let (a0, b0) = (base.anchor, base.middle_end());
        let (pi, qi) = (p as i64, q as i64);

        if p == q && (a0 - pi..b0).all(|i| base.get(i) == base.get(i + pi)) {
            return Self {
                left: base.slice(-pi, 0),
                middle: Vec::new(),
                right: base.slice(0, pi),
                anchor: 0,
            };
        }

        let guard = (pi * qi + pi + qi) + (b0 - a0);
        let mut b = b0;
        while b > a0 - guard && base.get(b - 1) == base.get(b - 1 + qi) {
            b -= 1;
        }
        let mut a = a0;
        while a < b0 + guard && base.get(a) == base.get(a - pi) {
            a += 1;
        }
        let end = b.max(a);
        Self {
            left: base.slice(a - pi, a),
            middle: base.slice(a, end),
            right: base.slice(end, end + qi),
            anchor: a,
        }
    }
}

impl<T: Copy + Eq> PartialEq for PeriodicWord<T> {
    fn eq(&self, other: &Self) -> bool {
        let (lo, hi) = self.comparison_span(other);
        (lo..hi).all(|i| self.get(i) == other.get(i))
    }
}

impl<T: Copy + Eq> Eq for PeriodicWord<T> {}

/// Smallest `d` dividing `w.len()` such that `w` is a power of a length-`d` word.
pub(crate) fn minimal_period<T: Eq>(w: &[T]) -> usize {
    let n = w.len();
    (1..=n)
        .filter(|d| n.is_multiple_of(*d))
        .find(|&d| (0..n).all(|k| w[k] == w[(k + d) % n]))
        .unwrap_or(n)
}

pub(crate) fn gcd(mut a: usize, mut b: usize) -> usize {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

pub(crate) fn lcm(a: usize, b: usize) -> usize {
    a / gcd(a, b) * b
}
