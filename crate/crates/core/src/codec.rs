//! Codes correcting any number of tandem duplications of length at most `k`.
//!
//! The code of length `n` is the union, over root lengths `i = 1..=n`, of the
//! irreducible words of length `i` padded to length `n` by repeating their last
//! symbol. Messages `1..=|C|` are laid out block by block in ascending `i`, and
//! in rank order inside a block. Decoding takes the root of the received word.

use num_bigint::BigUint;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::enumeration::log_q;
use crate::error::{invalid, Error, Result};
use crate::ranking::Ranker;
use crate::word::{extend_with_last, root, DupSystem, Word};

/// Codeword length and duplication system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CodeSpec {
    pub sys: DupSystem,
    pub n: usize,
}

impl CodeSpec {
    pub fn new(sys: DupSystem, n: usize) -> Result<Self> {
        if n < 1 {
            return invalid("codeword length must be at least 1");
        }
        Ok(Self { sys, n })
    }
}

/// Encoder and decoder for one code, sharing a single count table.
#[derive(Debug, Clone)]
pub struct TdCodec {
    spec: CodeSpec,
    ranker: Ranker,
    /// `offsets[i]`: number of codewords whose root is shorter than `i`.
    offsets: Vec<BigUint>,
}

impl TdCodec {
    pub fn new(spec: CodeSpec) -> Result<Self> {
        let ranker = Ranker::new(spec.sys, spec.n)?;
        let mut offsets = vec![BigUint::zero(); spec.n + 2];
        for i in 1..=spec.n {
            offsets[i + 1] = &offsets[i] + ranker.count(i).expect("length within table");
        }
        Ok(Self {
            spec,
            ranker,
            offsets,
        })
    }

    pub fn spec(&self) -> CodeSpec {
        self.spec
    }

    /// Number of codewords.
    pub fn size(&self) -> &BigUint {
        &self.offsets[self.spec.n + 1]
    }

    /// Codeword for message `j` in `1..=size`.
    pub fn encode(&self, j: &BigUint) -> Result<Word> {
        if j.is_zero() || j > self.size() {
            return Err(Error::RankOutOfRange {
                rank: j.to_string(),
                size: self.size().to_string(),
            });
        }
        // largest i with offsets[i] < j
        let i = self.offsets[1..].partition_point(|o| o < j);
        let r = self.ranker.unrank(i, &(j - &self.offsets[i]))?;
        extend_with_last(&r, self.spec.n - i)
    }

    /// Message whose codeword is an ancestor of `y`.
    pub fn decode(&self, y: &Word) -> Result<BigUint> {
        let n = self.spec.n;
        if y.len() < n {
            return invalid(format!("received word has length {} < n = {n}", y.len()));
        }
        let r = root(y, self.spec.sys)?;
        if r.len() > n {
            return Err(Error::NotADescendant {
                root_len: r.len(),
                n,
            });
        }
        Ok(&self.offsets[r.len()] + self.ranker.rank(&r)?)
    }

    /// `(log2 |C|, |C|)`.
    pub fn capacity(&self) -> (f64, BigUint) {
        let size = self.size().clone();
        (log_q(&size, 2), size)
    }
}

pub fn encode_codeword(j: &BigUint, spec: CodeSpec) -> Result<Word> {
    TdCodec::new(spec)?.encode(j)
}

pub fn decode_codeword(y: &Word, spec: CodeSpec) -> Result<BigUint> {
    TdCodec::new(spec)?.decode(y)
}

/// `(log2 |C|, |C|)` for the code of length `spec.n`.
pub fn message_capacity(spec: CodeSpec) -> Result<(f64, BigUint)> {
    Ok(TdCodec::new(spec)?.capacity())
}

/// `(1/n) log_q |C|`.
pub fn code_rate(spec: CodeSpec) -> Result<f64> {
    let (_, size) = message_capacity(spec)?;
    Ok(log_q(&size, spec.sys.q()) / spec.n as f64)
}
