//! Words over `Σ_q`, tandem duplication and deduplication.
//!
//! A tandem duplication of length `t` at position `i` rewrites `x = u v w`
//! into `u v v w` where `|u| = i` and `|v| = t`. A word is `≤k`-irreducible
//! when it contains no square `ww` with `1 ≤ |w| ≤ k`; for `k ∈ {2, 3}` every
//! word has exactly one irreducible ancestor, its root.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Largest alphabet a [`Word`] can carry.
pub const MAX_ALPHABET: u16 = 256;

/// A finite word over `Σ_q = {0, .., q-1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Word {
    q: u16,
    symbols: Vec<u8>,
}

impl Word {
    pub fn new(symbols: Vec<u8>, q: u16) -> Result<Self> {
        if !(2..=MAX_ALPHABET).contains(&q) {
            return invalid(format!("alphabet size {q} outside 2..={MAX_ALPHABET}"));
        }
        if let Some(&s) = symbols.iter().find(|&&s| u16::from(s) >= q) {
            return invalid(format!("symbol {s} outside alphabet of size {q}"));
        }
        Ok(Self { q, symbols })
    }

    pub fn empty(q: u16) -> Self {
        Self {
            q,
            symbols: Vec::new(),
        }
    }

    /// Parses a string of decimal digits, e.g. `"01210"`. Only usable for `q ≤ 10`.
    pub fn parse(s: &str, q: u16) -> Result<Self> {
        let symbols = s
            .chars()
            .map(|c| {
                c.to_digit(10)
                    .map(|d| d as u8)
                    .ok_or_else(|| Error::InvalidInput(format!("'{c}' is not a digit symbol")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(symbols, q)
    }

    pub(crate) fn from_trusted(symbols: Vec<u8>, q: u16) -> Self {
        debug_assert!(symbols.iter().all(|&s| u16::from(s) < q));
        Self { q, symbols }
    }

    pub fn q(&self) -> u16 {
        self.q
    }

    pub fn symbols(&self) -> &[u8] {
        &self.symbols
    }

    pub fn into_symbols(self) -> Vec<u8> {
        self.symbols
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn last(&self) -> Option<u8> {
        self.symbols.last().copied()
    }

    pub fn concat(&self, other: &Word) -> Result<Word> {
        check_same_alphabet(self, other)?;
        let mut symbols = Vec::with_capacity(self.len() + other.len());
        symbols.extend_from_slice(&self.symbols);
        symbols.extend_from_slice(&other.symbols);
        Ok(Word::from_trusted(symbols, self.q))
    }

    pub fn reversed(&self) -> Word {
        let mut symbols = self.symbols.clone();
        symbols.reverse();
        Word::from_trusted(symbols, self.q)
    }

    pub fn starts_with(&self, prefix: &Word) -> bool {
        self.q == prefix.q && self.symbols.starts_with(&prefix.symbols)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.q <= 10 {
            for &s in &self.symbols {
                write!(f, "{s}")?;
            }
            Ok(())
        } else {
            let parts: Vec<String> = self.symbols.iter().map(u8::to_string).collect();
            write!(f, "{}", parts.join("."))
        }
    }
}

pub(crate) fn check_same_alphabet(a: &Word, b: &Word) -> Result<()> {
    if a.q != b.q {
        return invalid(format!("mixed alphabets: q={} and q={}", a.q, b.q));
    }
    Ok(())
}

/// A tandem duplication `T_{position,length}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DuplicationEvent {
    pub position: usize,
    pub length: usize,
}

impl DuplicationEvent {
    pub fn new(position: usize, length: usize) -> Self {
        Self { position, length }
    }
}

/// Alphabet size and maximal duplication length of a duplication channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct DupSystem {
    q: u16,
    k: usize,
}

impl DupSystem {
    pub fn new(q: u16, k: usize) -> Result<Self> {
        if !(3..=MAX_ALPHABET).contains(&q) {
            return invalid(format!(
                "alphabet size must be in 3..={MAX_ALPHABET}, got {q}"
            ));
        }
        if !(2..=3).contains(&k) {
            return invalid(format!("duplication length bound must be 2 or 3, got {k}"));
        }
        Ok(Self { q, k })
    }

    pub fn q(&self) -> u16 {
        self.q
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub(crate) fn check_word(&self, x: &Word) -> Result<()> {
        if x.q != self.q {
            return invalid(format!(
                "word over q={} used with system over q={}",
                x.q, self.q
            ));
        }
        Ok(())
    }
}

/// Returns `u v v w` where `|u| = e.position` and `|v| = e.length`.
pub fn tandem_duplicate(x: &Word, e: DuplicationEvent) -> Result<Word> {
    if e.length == 0 || e.position + e.length > x.len() {
        return invalid(format!(
            "duplication ({}, {}) does not fit a word of length {}",
            e.position,
            e.length,
            x.len()
        ));
    }
    let end = e.position + e.length;
    let mut symbols = Vec::with_capacity(x.len() + e.length);
    symbols.extend_from_slice(&x.symbols[..end]);
    symbols.extend_from_slice(&x.symbols[e.position..]);
    Ok(Word::from_trusted(symbols, x.q))
}

/// Leftmost square `ww` with `|w| ≤ k` starting at or after `start`, shortest first on ties.
pub(crate) fn find_square_from(s: &[u8], k: usize, start: usize) -> Option<DuplicationEvent> {
    let n = s.len();
    for i in start..n {
        for t in 1..=k {
            if i + 2 * t > n {
                break;
            }
            if s[i..i + t] == s[i + t..i + 2 * t] {
                return Some(DuplicationEvent::new(i, t));
            }
        }
    }
    None
}

/// True when the suffix of `s` ends with a square `ww`, `|w| ≤ k`.
#[inline]
pub(crate) fn ends_with_square(s: &[u8], k: usize) -> bool {
    let n = s.len();
    (1..=k).any(|t| n >= 2 * t && s[n - 2 * t..n - t] == s[n - t..])
}

pub(crate) fn is_irreducible_slice(s: &[u8], k: usize) -> bool {
    find_square_from(s, k, 0).is_none()
}

/// Leftmost, then shortest, tandem repeat of period at most `k`.
pub fn find_tandem_repeat(x: &Word, k: usize) -> Option<DuplicationEvent> {
    find_square_from(&x.symbols, k, 0)
}

pub fn is_irreducible(x: &Word, k: usize) -> bool {
    is_irreducible_slice(&x.symbols, k)
}

/// The `≤k`-root of `y`, obtained by greedy leftmost-shortest deduplication.
pub fn root(y: &Word, sys: DupSystem) -> Result<Word> {
    sys.check_word(y)?;
    Ok(Word::from_trusted(root_slice(&y.symbols, sys.k), y.q))
}

pub(crate) fn root_slice(y: &[u8], k: usize) -> Vec<u8> {
    let mut s = y.to_vec();
    let mut start = 0;
    while let Some(e) = find_square_from(&s, k, start) {
        s.drain(e.position + e.length..e.position + 2 * e.length);
        // Squares starting before this window lie in the untouched, square-free prefix.
        start = (e.position + 1).saturating_sub(2 * k);
    }
    s
}

/// `x` followed by `i` copies of its last symbol.
pub fn extend_with_last(x: &Word, i: usize) -> Result<Word> {
    let Some(z) = x.last() else {
        return invalid("cannot extend the empty word");
    };
    let mut symbols = Vec::with_capacity(x.len() + i);
    symbols.extend_from_slice(&x.symbols);
    symbols.resize(x.len() + i, z);
    Ok(Word::from_trusted(symbols, x.q))
}

/// Applies `t` random duplications to `x`, reproducibly for a given `seed`.
///
/// Each event draws its length uniformly from `[1, min(k, |x|)]` and then its
/// position uniformly among the positions where that length fits. The empty
/// word admits no duplication and is returned unchanged.
pub fn random_descendant(
    x: &Word,
    t: usize,
    sys: DupSystem,
    seed: u64,
) -> Result<(Word, Vec<DuplicationEvent>)> {
    sys.check_word(x)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut current = x.clone();
    let mut events = Vec::with_capacity(t);
    if x.is_empty() {
        return Ok((current, events));
    }
    for _ in 0..t {
        let length = rng.gen_range(1..=sys.k.min(current.len()));
        let position = rng.gen_range(0..=current.len() - length);
        let e = DuplicationEvent::new(position, length);
        current = tandem_duplicate(&current, e)?;
        events.push(e);
    }
    Ok((current, events))
}
