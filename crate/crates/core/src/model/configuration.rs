use super::rule::{Alphabet, Letter};
use super::word::PeriodicWord;
use crate::error::{invalid, Result};

/// An eventually periodic configuration `x : Z → A`.
///
/// Equality compares the words themselves, not their representations.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Configuration {
    alphabet: Alphabet,
    word: PeriodicWord<Letter>,
}

impl Configuration {
    pub fn new(
        alphabet: Alphabet,
        left: Vec<Letter>,
        middle: Vec<Letter>,
        right: Vec<Letter>,
        anchor: i64,
    ) -> Result<Self> {
        Self::from_word(alphabet, PeriodicWord::new(left, middle, right, anchor)?)
    }

    pub fn from_word(alphabet: Alphabet, word: PeriodicWord<Letter>) -> Result<Self> {
        let all = word.left().iter().chain(word.middle()).chain(word.right());
        if let Some(bad) = all.copied().find(|&a| !alphabet.contains(a)) {
            return Err(invalid(format!("letter {bad} outside alphabet of size {}", alphabet.size())));
        }
        Ok(Self { alphabet, word })
    }

    /// The all-zero configuration.
    pub fn zero(alphabet: Alphabet) -> Self {
        Self { alphabet, word: PeriodicWord::uniform(0) }
    }

    pub fn uniform(alphabet: Alphabet, letter: Letter) -> Result<Self> {
        Self::from_word(alphabet, PeriodicWord::uniform(letter))
    }

    /// Zero everywhere except `letter` at `position`.
    pub fn single(alphabet: Alphabet, letter: Letter, position: i64) -> Result<Self> {
        Self::finite(alphabet, position, vec![letter])
    }

    /// Zero outside `[start, start + letters.len())`.
    pub fn finite(alphabet: Alphabet, start: i64, letters: Vec<Letter>) -> Result<Self> {
        Self::new(alphabet, vec![0], letters, vec![0], start)
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn word(&self) -> &PeriodicWord<Letter> {
        &self.word
    }

    pub fn get(&self, i: i64) -> Letter {
        self.word.get(i)
    }

    /// Letters at `[start, end)`.
    pub fn slice(&self, start: i64, end: i64) -> Vec<Letter> {
        self.word.slice(start, end)
    }

    /// Finite support: both periodic tails are all-zero.
    pub fn is_finite(&self) -> bool {
        self.word.tails_are(0)
    }

    pub fn is_zero(&self) -> bool {
        self.word.is_constant(0)
    }

    /// `σ^k(x)`: `x'_i = x_{i+k}`.
    pub fn shifted(&self, k: i64) -> Self {
        Self { alphabet: self.alphabet, word: self.word.shifted(k) }
    }

    pub fn normalized(&self) -> Self {
        Self { alphabet: self.alphabet, word: self.word.normalized() }
    }

    /// Copy of `x` with the letter at `position` replaced.
    pub fn with_letter(&self, position: i64, letter: Letter) -> Result<Self> {
        let (lo, hi) = (self.word.anchor().min(position), self.word.middle_end().max(position + 1));
        let mut middle = self.slice(lo, hi);
        middle[(position - lo) as usize] = letter;
        // re-align tails so they keep their phase at the new boundaries
        let pl = self.word.left().len() as i64;
        let pr = self.word.right().len() as i64;
        let left = self.slice(lo - pl, lo);
        let right = self.slice(hi, hi + pr);
        Self::new(self.alphabet, left, middle, right, lo)
    }
}
