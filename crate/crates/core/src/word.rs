//! Freely reduced words over the generators `a_0, …, a_{s-1}` and their inverses.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// A signed generator letter `a_index^exponent` with `exponent ∈ {+1, -1}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub index: u32,
    pub exponent: i8,
}

impl Letter {
    pub fn new(index: usize, exponent: i8) -> Result<Self> {
        if exponent != 1 && exponent != -1 {
            return Err(Error::Parse(format!("exponent must be 1 or -1, got {exponent}")));
        }
        Ok(Letter {
            index: index as u32,
            exponent,
        })
    }

    pub const fn pos(index: u32) -> Self {
        Letter { index, exponent: 1 }
    }

    pub const fn neg(index: u32) -> Self {
        Letter { index, exponent: -1 }
    }

    #[inline]
    pub fn idx(self) -> usize {
        self.index as usize
    }

    #[inline]
    pub fn inverse(self) -> Self {
        Letter {
            index: self.index,
            exponent: -self.exponent,
        }
    }

    #[inline]
    pub fn is_inverse_of(self, other: Letter) -> bool {
        self.index == other.index && self.exponent == -other.exponent
    }

    /// The letter with its index moved down by `r` modulo `s`: `a_i ↦ a_{i-r}`.
    pub fn shifted(self, r: usize, s: usize) -> Self {
        let i = (self.idx() + s - r % s) % s;
        Letter {
            index: i as u32,
            exponent: self.exponent,
        }
    }

    /// Enumeration order used for canonical forms: index ascending, `+1` before `-1`.
    pub fn all(s: usize) -> Vec<Letter> {
        (0..s as u32)
            .flat_map(|i| [Letter::pos(i), Letter::neg(i)])
            .collect()
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 1 {
            write!(f, "a_{}", self.index)
        } else {
            write!(f, "a_{}^-1", self.index)
        }
    }
}

/// A freely reduced word; the empty word is the identity.
///
/// Every constructor reduces, so two adjacent letters are never mutually inverse.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn generator(index: usize) -> Self {
        Word {
            letters: vec![Letter::pos(index as u32)],
        }
    }

    pub fn letter(l: Letter) -> Self {
        Word { letters: vec![l] }
    }

    /// Builds the free reduction of the given letter sequence.
    pub fn from_letters<I: IntoIterator<Item = Letter>>(letters: I) -> Self {
        let mut w = Word::identity();
        for l in letters {
            w.push(l);
        }
        w
    }

    /// Builds a word from `(index, exponent)` pairs, reducing as it goes.
    pub fn from_pairs(pairs: &[(usize, i8)]) -> Result<Self> {
        let mut w = Word::identity();
        for &(i, e) in pairs {
            w.push(Letter::new(i, e)?);
        }
        Ok(w)
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn first(&self) -> Option<Letter> {
        self.letters.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.letters.last().copied()
    }

    /// Appends a letter, cancelling against the last letter when they are inverse.
    #[inline]
    pub fn push(&mut self, l: Letter) {
        match self.letters.last() {
            Some(&last) if last.is_inverse_of(l) => {
                self.letters.pop();
            }
            _ => self.letters.push(l),
        }
    }

    pub fn extend_reduced(&mut self, other: &Word) {
        for &l in &other.letters {
            self.push(l);
        }
    }

    /// The group product `self · other`, freely reduced.
    pub fn compose(&self, other: &Word) -> Word {
        let mut out = self.clone();
        out.extend_reduced(other);
        out
    }

    pub fn invert(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    /// `self^k` for any integer `k`.
    pub fn pow(&self, k: i64) -> Word {
        let base = if k < 0 { self.invert() } else { self.clone() };
        let mut out = Word::identity();
        for _ in 0..k.unsigned_abs() {
            out.extend_reduced(&base);
        }
        out
    }

    /// Applies `a_i ↦ a_{i-r mod s}` to every letter.
    pub fn shifted(&self, r: usize, s: usize) -> Word {
        Word {
            letters: self.letters.iter().map(|l| l.shifted(r, s)).collect(),
        }
    }

    /// Largest letter index, if any.
    pub fn max_index(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.idx()).max()
    }

    /// Signed count of the letters with the given index.
    pub fn exponent_sum(&self, index: usize) -> i64 {
        self.letters
            .iter()
            .filter(|l| l.idx() == index)
            .map(|l| l.exponent as i64)
            .sum()
    }

    /// The rotation that moves the first `k` letters to the end. Not reduced if the
    /// word is not cyclically reduced.
    pub fn rotate_left(&self, k: usize) -> Word {
        if self.is_empty() {
            return Word::identity();
        }
        let k = k % self.len();
        let mut v = self.letters[k..].to_vec();
        v.extend_from_slice(&self.letters[..k]);
        Word::from_letters(v)
    }

    /// `(index, exponent)` pairs, the serialized form.
    pub fn to_pairs(&self) -> Vec<(usize, i8)> {
        self.letters.iter().map(|l| (l.idx(), l.exponent)).collect()
    }

    /// The commutator `[x, y] = x^{-1} y^{-1} x y`.
    pub fn commutator(x: &Word, y: &Word) -> Word {
        x.invert().compose(&y.invert()).compose(x).compose(y)
    }

    /// Parses the display form, e.g. `a_1 a_0^-1` (or `1` for the identity).
    pub fn parse_text(text: &str) -> Result<Word> {
        let mut w = Word::identity();
        for tok in text.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let body = tok
                .strip_prefix("a_")
                .ok_or_else(|| Error::Parse(format!("bad letter `{tok}`")))?;
            let (idx, exp) = match body.split_once('^') {
                Some((i, e)) => (i, e),
                None => (body, "1"),
            };
            let index: usize = idx
                .parse()
                .map_err(|_| Error::Parse(format!("bad index in `{tok}`")))?;
            let exp: i8 = exp
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in `{tok}`")))?;
            w.push(Letter::new(index, exp)?);
        }
        Ok(w)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for (k, l) in self.letters.iter().enumerate() {
            if k > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word::from_letters(iter)
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_pairs().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let pairs: Vec<(usize, i8)> = Vec::deserialize(deserializer)?;
        Word::from_pairs(&pairs).map_err(serde::de::Error::custom)
    }
}

pub fn compose(w1: &Word, w2: &Word) -> Word {
    w1.compose(w2)
}

pub fn invert(w: &Word) -> Word {
    w.invert()
}
