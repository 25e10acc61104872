//! Words over a finite alphabet of noncommuting operator symbols.
//!
//! A word is an ordered product of letters; the empty word is the identity
//! operator. Two alphabets are used: `{A, B}` for the raw splitting
//! expansion (A is the slow-force kick generator, B the fast subsystem
//! generator) and `{X, V, F}` for the scale-separated form, where B splits
//! into a drift part X and a fast-force part V, and A is renamed F.

use std::fmt;

/// A symbol in a fixed finite alphabet.
pub trait Letter: Copy + Eq + Ord + fmt::Debug + 'static {
    const ALPHABET: &'static [Self];

    fn symbol(self) -> char;

    fn from_symbol(c: char) -> Option<Self> {
        Self::ALPHABET.iter().copied().find(|l| l.symbol() == c)
    }
}

/// Two-letter alphabet of the splitting expansion: `A` generates the slow
/// kick, `B` the fast flow (drift plus fast force).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Ab {
    A,
    B,
}

impl Letter for Ab {
    const ALPHABET: &'static [Ab] = &[Ab::A, Ab::B];

    fn symbol(self) -> char {
        match self {
            Ab::A => 'A',
            Ab::B => 'B',
        }
    }
}

/// Scale-separated alphabet: `X` drift, `V` fast-force kick (carries one
/// factor of 1/eps^2 in the grading), `F` slow-force kick.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Xvf {
    X,
    V,
    F,
}

impl Letter for Xvf {
    const ALPHABET: &'static [Xvf] = &[Xvf::X, Xvf::V, Xvf::F];

    fn symbol(self) -> char {
        match self {
            Xvf::X => 'X',
            Xvf::V => 'V',
            Xvf::F => 'F',
        }
    }
}

/// An ordered product of letters; `Word::empty()` is the identity.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word<L: Letter> {
    letters: Vec<L>,
}

impl<L: Letter> Word<L> {
    pub fn empty() -> Self {
        Word { letters: Vec::new() }
    }

    pub fn single(letter: L) -> Self {
        Word { letters: vec![letter] }
    }

    pub fn from_letters(letters: impl IntoIterator<Item = L>) -> Self {
        Word {
            letters: letters.into_iter().collect(),
        }
    }

    /// Parses a word from its letter string, e.g. `"ABB"`. The empty string
    /// and `"1"` both denote the identity.
    pub fn parse(text: &str) -> Option<Self> {
        if text.is_empty() || text == "1" {
            return Some(Word::empty());
        }
        text.chars().map(L::from_symbol).collect::<Option<Vec<_>>>().map(Word::from_letters)
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn letters(&self) -> &[L] {
        &self.letters
    }

    /// Concatenation: the operator product of the two words.
    pub fn concat(&self, rhs: &Word<L>) -> Word<L> {
        let mut letters = Vec::with_capacity(self.len() + rhs.len());
        letters.extend_from_slice(&self.letters);
        letters.extend_from_slice(&rhs.letters);
        Word { letters }
    }
}

impl<L: Letter> fmt::Display for Word<L> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(f, "1");
        }
        for l in &self.letters {
            write!(f, "{}", l.symbol())?;
        }
        Ok(())
    }
}

/// Convenience constructor from a letter string; panics on an invalid
/// letter, so only use with literals.
pub fn word<L: Letter>(text: &str) -> Word<L> {
    Word::parse(text).unwrap_or_else(|| panic!("invalid word literal: {text:?}"))
}
