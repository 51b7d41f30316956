//! Words in the five standard generators n1…n5.
//!
//! The text format is whitespace-separated tokens `n<k>` or `n<k>^<e>` with
//! 1 ≤ k ≤ 5 and a nonzero integer exponent, e.g. `n1 n2^-1 n3^2`. Words are
//! stored letter by letter; nothing reduces implicitly.

use std::fmt;
use std::str::FromStr;

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

pub const GENERATOR_COUNT: usize = 5;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum WordParseError {
    #[error("unrecognized token {0:?} (expected n1..n5 with optional ^exponent)")]
    BadToken(String),
    #[error("token {0:?} has exponent zero")]
    ZeroExponent(String),
}

/// A single generator or inverse generator.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    gen: u8,
    inv: bool,
}

impl Letter {
    pub fn new(gen: u8, inv: bool) -> Self {
        assert!((1..=GENERATOR_COUNT as u8).contains(&gen), "generator index out of range");
        Letter { gen, inv }
    }

    /// Generator index in 1..=5.
    pub fn generator(&self) -> usize {
        self.gen as usize
    }

    pub fn is_inverse(&self) -> bool {
        self.inv
    }

    pub fn inverse(&self) -> Letter {
        Letter { gen: self.gen, inv: !self.inv }
    }

    /// Index into a 10-element table ordered n1, n1⁻¹, n2, n2⁻¹, …
    pub fn table_index(&self) -> usize {
        2 * (self.gen as usize - 1) + self.inv as usize
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inv {
            write!(f, "n{}^-1", self.gen)
        } else {
            write!(f, "n{}", self.gen)
        }
    }
}

impl fmt::Debug for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// A word in the free group on n1…n5, kept exactly as written.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Word {
    letters: Vec<Letter>,
}

impl Word {
    pub fn empty() -> Self {
        Word { letters: Vec::new() }
    }

    pub fn from_letters(letters: Vec<Letter>) -> Self {
        Word { letters }
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn push(&mut self, letter: Letter) {
        self.letters.push(letter);
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&other.letters);
        Word { letters }
    }

    pub fn inverse(&self) -> Word {
        Word {
            letters: self.letters.iter().rev().map(Letter::inverse).collect(),
        }
    }

    /// Cancels adjacent s s⁻¹ pairs until none remain.
    pub fn free_reduce(&self) -> Word {
        let mut stack: Vec<Letter> = Vec::with_capacity(self.len());
        for &letter in &self.letters {
            if stack.last() == Some(&letter.inverse()) {
                stack.pop();
            } else {
                stack.push(letter);
            }
        }
        Word { letters: stack }
    }

    /// Net exponent of each generator, indexed n1…n5.
    pub fn exponent_sums(&self) -> [i64; GENERATOR_COUNT] {
        let mut sums = [0i64; GENERATOR_COUNT];
        for letter in &self.letters {
            sums[letter.generator() - 1] += if letter.is_inverse() { -1 } else { 1 };
        }
        sums
    }
}

impl FromStr for Word {
    type Err = WordParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.trim() == "e" {
            return Ok(Word::empty());
        }
        let mut letters = Vec::new();
        for token in s.split_whitespace() {
            let body = token.strip_prefix('n').ok_or_else(|| WordParseError::BadToken(token.into()))?;
            let (gen_str, exp_str) = match body.split_once('^') {
                Some((g, e)) => (g, Some(e)),
                None => (body, None),
            };
            let gen: u8 = gen_str.parse().map_err(|_| WordParseError::BadToken(token.into()))?;
            if !(1..=GENERATOR_COUNT as u8).contains(&gen) {
                return Err(WordParseError::BadToken(token.into()));
            }
            let exp: i64 = match exp_str {
                Some(e) => e.parse().map_err(|_| WordParseError::BadToken(token.into()))?,
                None => 1,
            };
            if exp == 0 {
                return Err(WordParseError::ZeroExponent(token.into()));
            }
            let letter = Letter::new(gen, exp < 0);
            for _ in 0..exp.unsigned_abs() {
                letters.push(letter);
            }
        }
        Ok(Word { letters })
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "e");
        }
        let parts: Vec<String> = self.letters.iter().map(Letter::to_string).collect();
        write!(f, "{}", parts.join(" "))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        if s == "e" {
            return Ok(Word::empty());
        }
        s.parse().map_err(de::Error::custom)
    }
}
