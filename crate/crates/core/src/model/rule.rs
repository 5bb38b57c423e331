use std::fmt;

use crate::error::{invalid, Result};

/// A letter of the numerical alphabet `{0, .., s-1}`.
pub type Letter = u8;

/// The alphabet `{0, .., s-1}` with `2 <= s <= 256`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Alphabet(u16);

impl Alphabet {
    pub fn new(size: usize) -> Result<Self> {
        if !(2..=256).contains(&size) {
            return Err(invalid(format!("alphabet size must be in 2..=256, got {size}")));
        }
        Ok(Self(size as u16))
    }

    pub fn binary() -> Self {
        Self(2)
    }

    pub fn size(self) -> usize {
        self.0 as usize
    }

    pub fn contains(self, letter: Letter) -> bool {
        (letter as usize) < self.size()
    }

    pub fn letters(self) -> impl Iterator<Item = Letter> {
        (0..self.size()).map(|a| a as Letter)
    }

    /// Number of words of length `len`, or `None` on overflow.
    pub fn word_count(self, len: usize) -> Option<u64> {
        (self.size() as u64).checked_pow(len as u32)
    }
}

/// Index of `w` with the leftmost letter most significant.
pub fn word_index(alphabet: Alphabet, w: &[Letter]) -> usize {
    let s = alphabet.size();
    w.iter().fold(0, |acc, &a| acc * s + a as usize)
}

/// Inverse of [`word_index`] for words of length `len`.
pub fn index_word(alphabet: Alphabet, len: usize, mut index: usize) -> Vec<Letter> {
    let s = alphabet.size();
    let mut w = vec![0; len];
    for slot in w.iter_mut().rev() {
        *slot = (index % s) as Letter;
        index /= s;
    }
    w
}

/// A radius-`r` local rule given by its full truth table.
///
/// The table has `s^(2r+1)` entries indexed by [`word_index`]. When the rule is
/// additive over `Z_s` its coefficient vector `λ` is kept alongside, so that
/// `f(u) = Σ λ_i u_i mod s`.
#[derive(Clone, PartialEq, Eq)]
pub struct LocalRule {
    name: String,
    alphabet: Alphabet,
    radius: usize,
    table: Vec<Letter>,
    coefficients: Option<Vec<Letter>>,
}

impl fmt::Debug for LocalRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("LocalRule")
            .field("name", &self.name)
            .field("radius", &self.radius)
            .field("alphabet", &self.alphabet.size())
            .field("linear", &self.coefficients)
            .finish()
    }
}

impl LocalRule {
    /// Builds a rule from its table; linearity is detected automatically.
    pub fn from_table(
        name: impl Into<String>,
        alphabet: Alphabet,
        radius: usize,
        table: Vec<Letter>,
    ) -> Result<Self> {
        let name = name.into();
        let expected = alphabet
            .word_count(2 * radius + 1)
            .filter(|&n| n <= 1 << 26)
            .ok_or_else(|| invalid(format!("rule {name}: table for radius {radius} is too large")))?;
        if table.len() as u64 != expected {
            return Err(invalid(format!(
                "rule {name}: expected {expected} table entries, got {}",
                table.len()
            )));
        }
        if let Some(bad) = table.iter().find(|&&a| !alphabet.contains(a)) {
            return Err(invalid(format!("rule {name}: letter {bad} outside alphabet")));
        }
        let mut rule = Self { name, alphabet, radius, table, coefficients: None };
        rule.coefficients = rule.infer_coefficients();
        Ok(rule)
    }

    /// Builds the linear rule `u ↦ λ • u mod s`; the radius is `(|λ| - 1) / 2`.
    pub fn linear(name: impl Into<String>, alphabet: Alphabet, coefficients: Vec<Letter>) -> Result<Self> {
        let name = name.into();
        if coefficients.len().is_multiple_of(2) {
            return Err(invalid(format!(
                "rule {name}: linear rules need 2r+1 coefficients, got {}",
                coefficients.len()
            )));
        }
        if let Some(bad) = coefficients.iter().find(|&&a| !alphabet.contains(a)) {
            return Err(invalid(format!("rule {name}: coefficient {bad} outside alphabet")));
        }
        let radius = coefficients.len() / 2;
        let s = alphabet.size();
        let rule = Self::from_fn(name, alphabet, radius, |u| {
            let sum: usize = coefficients.iter().zip(u).map(|(&l, &x)| l as usize * x as usize).sum();
            (sum % s) as Letter
        })?;
        debug_assert_eq!(rule.coefficients.as_deref(), Some(&coefficients[..]));
        Ok(rule)
    }

    pub fn from_fn(
        name: impl Into<String>,
        alphabet: Alphabet,
        radius: usize,
        f: impl Fn(&[Letter]) -> Letter,
    ) -> Result<Self> {
        let len = 2 * radius + 1;
        let count = alphabet
            .word_count(len)
            .filter(|&n| n <= 1 << 26)
            .ok_or_else(|| invalid(format!("radius {radius} is too large to tabulate")))?;
        let table = (0..count as usize).map(|i| f(&index_word(alphabet, len, i))).collect();
        Self::from_table(name, alphabet, radius, table)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    /// Length `2r + 1` of the neighbourhood.
    pub fn window_len(&self) -> usize {
        2 * self.radius + 1
    }

    pub fn table(&self) -> &[Letter] {
        &self.table
    }

    pub fn is_linear(&self) -> bool {
        self.coefficients.is_some()
    }

    pub fn coefficients(&self) -> Option<&[Letter]> {
        self.coefficients.as_deref()
    }

    pub fn eval_index(&self, index: usize) -> Letter {
        self.table[index]
    }

    /// Applies the rule to a neighbourhood of length `2r + 1`.
    pub fn eval(&self, neighbourhood: &[Letter]) -> Letter {
        debug_assert_eq!(neighbourhood.len(), self.window_len());
        self.table[word_index(self.alphabet, neighbourhood)]
    }

    /// Same rule seen with a larger radius: `g(w) = f(center of w)`.
    pub fn padded(&self, radius: usize) -> Result<Self> {
        if radius < self.radius {
            return Err(invalid(format!(
                "cannot pad rule {} of radius {} down to {radius}",
                self.name, self.radius
            )));
        }
        if radius == self.radius {
            return Ok(self.clone());
        }
        let off = radius - self.radius;
        let inner = self.window_len();
        let mut rule = Self::from_fn(self.name.clone(), self.alphabet, radius, |w| {
            self.eval(&w[off..off + inner])
        })?;
        // detected anyway; keep the zero-extended vector explicit
        rule.coefficients = self.coefficients.as_ref().map(|c| {
            let mut z = vec![0; 2 * radius + 1];
            z[off..off + inner].copy_from_slice(c);
            z
        });
        Ok(rule)
    }

    /// `λ_j = f(e_j)`, kept only if `f(u) = λ • u` on every input.
    fn infer_coefficients(&self) -> Option<Vec<Letter>> {
        let len = self.window_len();
        let s = self.alphabet.size();
        let lambda: Vec<Letter> = (0..len)
            .map(|j| {
                let mut e = vec![0; len];
                e[j] = 1;
                self.eval(&e)
            })
            .collect();
        let additive = (0..self.table.len()).all(|i| {
            let u = index_word(self.alphabet, len, i);
            let dot: usize = lambda.iter().zip(&u).map(|(&l, &x)| l as usize * x as usize).sum();
            (dot % s) as Letter == self.table[i]
        });
        additive.then_some(lambda)
    }
}
