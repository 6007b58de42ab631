use std::fmt;

use crate::error::{Error, Result};

/// Index of a generator in an [`Alphabet`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(pub u8);

impl Symbol {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A finite word over some alphabet. The empty word is the identity.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Symbol>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_symbols(symbols: Vec<Symbol>) -> Self {
        Word(symbols)
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.0
    }

    pub fn into_symbols(self) -> Vec<Symbol> {
        self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `self · other`.
    pub fn concat(&self, other: &Word) -> Word {
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// The word repeated `times` times.
    pub fn pow(&self, times: usize) -> Word {
        Word(self.0.repeat(times))
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    /// Replace the factor `[offset, offset + len)` by `replacement`.
    pub fn splice(&self, offset: usize, len: usize, replacement: &[Symbol]) -> Word {
        let mut v = Vec::with_capacity(self.len() - len + replacement.len());
        v.extend_from_slice(&self.0[..offset]);
        v.extend_from_slice(replacement);
        v.extend_from_slice(&self.0[offset + len..]);
        Word(v)
    }

    /// Offsets of every occurrence of `factor` in this word.
    pub fn occurrences<'a>(&'a self, factor: &'a [Symbol]) -> impl Iterator<Item = usize> + 'a {
        let n = factor.len();
        (0..=self.len().saturating_sub(n)).filter(move |&i| self.len() >= n && &self.0[i..i + n] == factor)
    }

    pub fn exponent_sum(&self, s: Symbol) -> usize {
        self.0.iter().filter(|&&x| x == s).count()
    }
}

// lets hash maps keyed by Word be probed with a scratch slice
impl std::borrow::Borrow<[Symbol]> for Word {
    fn borrow(&self) -> &[Symbol] {
        &self.0
    }
}

impl From<&[Symbol]> for Word {
    fn from(s: &[Symbol]) -> Self {
        Word(s.to_vec())
    }
}

/// Ordered table of single-character generator names.
///
/// The character `1` is reserved for the identity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<char>,
}

impl Alphabet {
    pub fn new(names: &[char]) -> Result<Self> {
        if names.is_empty() || names.len() > 255 {
            return Err(Error::AlphabetSize);
        }
        for (i, &c) in names.iter().enumerate() {
            if c == '1' || c.is_whitespace() || c.is_control() {
                return Err(Error::ReservedSymbol(c));
            }
            if names[..i].contains(&c) {
                return Err(Error::DuplicateSymbol(c));
            }
        }
        Ok(Alphabet { names: names.to_vec() })
    }

    /// The two-letter alphabet `{a, b}`.
    pub fn ab() -> Self {
        Alphabet { names: vec!['a', 'b'] }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[char] {
        &self.names
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> {
        (0..self.names.len() as u8).map(Symbol)
    }

    pub fn symbol(&self, c: char) -> Option<Symbol> {
        self.names.iter().position(|&x| x == c).map(|i| Symbol(i as u8))
    }

    pub fn name(&self, s: Symbol) -> char {
        self.names[s.index()]
    }

    pub fn contains(&self, w: &Word) -> bool {
        w.symbols().iter().all(|s| s.index() < self.names.len())
    }

    /// Parse juxtaposed generator characters; the literal `1` is the empty word.
    pub fn parse(&self, text: &str) -> Result<Word> {
        if text == "1" {
            return Ok(Word::empty());
        }
        text.chars()
            .enumerate()
            .map(|(pos, ch)| self.symbol(ch).ok_or(Error::UnknownSymbol { ch, pos }))
            .collect::<Result<Vec<_>>>()
            .map(Word)
    }

    pub fn render(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".to_string();
        }
        w.symbols().iter().map(|&s| self.name(s)).collect()
    }

    pub fn display<'a>(&'a self, w: &'a Word) -> DisplayWord<'a> {
        DisplayWord { alphabet: self, word: w }
    }
}

pub struct DisplayWord<'a> {
    alphabet: &'a Alphabet,
    word: &'a Word,
}

impl fmt::Display for DisplayWord<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.alphabet.render(self.word))
    }
}
