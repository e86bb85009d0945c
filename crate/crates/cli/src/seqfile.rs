//! Plain-text sequence files: one word per line.

use std::fmt::Write as _;

use irrcode_core::Word;
use thiserror::Error;

const DNA: [char; 4] = ['A', 'C', 'G', 'T'];

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FormatError {
    #[error("line {line}: unexpected character {ch:?}")]
    BadSymbol { line: usize, ch: char },
    #[error("DNA letters require q = 4, got q = {0}")]
    DnaNeedsFour(u16),
    #[error("digit files support q <= 10, got q = {0}")]
    AlphabetTooLarge(u16),
}

/// How symbols are written.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Symbols {
    Digits,
    Dna,
}

impl Symbols {
    pub fn for_alphabet(q: u16, dna: bool) -> Result<Self, FormatError> {
        match (dna, q) {
            (true, 4) => Ok(Symbols::Dna),
            (true, _) => Err(FormatError::DnaNeedsFour(q)),
            (false, q) if q <= 10 => Ok(Symbols::Digits),
            (false, q) => Err(FormatError::AlphabetTooLarge(q)),
        }
    }

    fn char_of(self, s: u8) -> char {
        match self {
            Symbols::Dna => DNA[s as usize],
            Symbols::Digits => char::from(b'0' + s),
        }
    }

    fn symbol_of(self, c: char, q: u16) -> Option<u8> {
        let v = match self {
            Symbols::Dna => DNA.iter().position(|&d| d == c)? as u8,
            Symbols::Digits => c.to_digit(10)? as u8,
        };
        (u16::from(v) < q).then_some(v)
    }

    pub fn format_word(self, w: &Word) -> String {
        w.symbols().iter().map(|&s| self.char_of(s)).collect()
    }

    /// Parses one word; `line` is only used for error messages.
    pub fn parse_word(self, text: &str, q: u16, line: usize) -> Result<Word, FormatError> {
        let symbols = text
            .chars()
            .map(|ch| {
                self.symbol_of(ch, q)
                    .ok_or(FormatError::BadSymbol { line, ch })
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Word::new(symbols, q).expect("symbols checked against q"))
    }
}

/// Words of a sequence file in line order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SequenceFile {
    pub words: Vec<Word>,
    /// 1-based source line of each word; empty after construction from words.
    pub line_numbers: Vec<usize>,
}

impl SequenceFile {
    /// Empty lines are skipped; line numbers in errors are 1-based.
    pub fn parse(text: &str, q: u16, symbols: Symbols) -> Result<Self, FormatError> {
        let mut words = Vec::new();
        let mut line_numbers = Vec::new();
        for (i, l) in text.lines().enumerate().filter(|(_, l)| !l.is_empty()) {
            words.push(symbols.parse_word(l, q, i + 1)?);
            line_numbers.push(i + 1);
        }
        Ok(Self {
            words,
            line_numbers,
        })
    }

    pub fn from_words(words: Vec<Word>) -> Self {
        Self {
            words,
            line_numbers: Vec::new(),
        }
    }

    /// Source line of the `i`-th word, falling back to `i + 1`.
    pub fn line_of(&self, i: usize) -> usize {
        self.line_numbers.get(i).copied().unwrap_or(i + 1)
    }

    pub fn render(&self, symbols: Symbols) -> String {
        let mut out = String::new();
        for w in &self.words {
            writeln!(out, "{}", symbols.format_word(w)).unwrap();
        }
        out
    }
}
