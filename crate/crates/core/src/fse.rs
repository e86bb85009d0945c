//! The `(ℓ, m)` finite-state encoder.
//!
//! States are the irreducible words of length `m`; `x → x'` is an edge when
//! `x x'` is irreducible. Each state labels its first `q^ℓ` neighbours, in
//! lexicographic order, with the `ℓ`-symbol message blocks, so a message of
//! `s` blocks becomes an irreducible word of length `s·m`.
//!
//! Only the last `2k - 1` symbols of a state can take part in a square that
//! crosses into the next state, so neighbour sets are determined by that
//! window. The rank-based backend exploits this: it counts completions of
//! `window · partial-neighbour` with the prefix recursion and never stores
//! more than `O(m)` integers.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::enumeration::{count_extensions, lex_extensions, multipliers, FseParams};
use crate::error::{invalid, Error, Result};
use crate::word::{ends_with_square, is_irreducible_slice, Word};

/// Default cap on `states × labels` for the lookup-table backend.
pub const DEFAULT_TABLE_LIMIT: usize = 1 << 22;

/// How neighbour lookups are answered.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Backend {
    /// Materialized neighbour lists for every state.
    LookupTable,
    /// Digit-by-digit selection with prefix-constrained counts.
    #[default]
    RankBased,
}

fn window_len(params: &FseParams) -> usize {
    2 * params.sys.k() - 1
}

fn check_state(x: &Word, params: &FseParams) -> Result<()> {
    params.sys.check_word(x)?;
    if x.len() != params.m {
        return invalid(format!("state {x} does not have length m = {}", params.m));
    }
    if !is_irreducible_slice(x.symbols(), params.sys.k()) {
        return Err(Error::NotIrreducible(x.to_string()));
    }
    Ok(())
}

fn window<'a>(x: &'a Word, params: &FseParams) -> &'a [u8] {
    &x.symbols()[x.len() - window_len(params)..]
}

/// All neighbours of state `x`, in lexicographic order.
pub fn neighbors(x: &Word, params: &FseParams) -> Result<Vec<Word>> {
    check_state(x, params)?;
    let s = window(x, params);
    let q = params.sys.q();
    Ok(lex_extensions(s, s.len() + params.m, q, params.sys.k())
        .into_iter()
        .map(|v| Word::from_trusted(v[s.len()..].to_vec(), q))
        .collect())
}

/// Lexicographically least irreducible word of length `len`.
pub(crate) fn first_irreducible(len: usize, q: u16, k: usize) -> Option<Vec<u8>> {
    fn go(buf: &mut Vec<u8>, len: usize, q: u16, k: usize) -> bool {
        if buf.len() == len {
            return true;
        }
        for c in 0..q {
            buf.push(c as u8);
            if !ends_with_square(buf, k) && go(buf, len, q, k) {
                return true;
            }
            buf.pop();
        }
        false
    }
    let mut buf = Vec::with_capacity(len);
    go(&mut buf, len, q, k).then_some(buf)
}

/// The first `q^ℓ` neighbours of every state.
#[derive(Debug, Clone)]
pub struct EdgeLabelTable {
    m: usize,
    rows: BTreeMap<Vec<u8>, Vec<Vec<u8>>>,
}

impl EdgeLabelTable {
    pub fn num_states(&self) -> usize {
        self.rows.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// Labelled neighbours of `x` in label order, or `None` if `x` is not a state.
    pub fn row(&self, x: &Word) -> Option<&[Vec<u8>]> {
        self.rows.get(x.symbols()).map(Vec::as_slice)
    }

    pub fn states(&self) -> impl Iterator<Item = &[u8]> {
        self.rows.keys().map(Vec::as_slice)
    }
}

/// Materializes the labelled neighbour lists; fails with a capacity error
/// when `states × q^ℓ` exceeds `limit`.
pub fn build_lookup_table(params: &FseParams, limit: usize) -> Result<EdgeLabelTable> {
    let sys = params.sys;
    let labels = params.labels().to_usize().filter(|&l| l <= limit);
    let states_count = crate::enumeration::count_irr(params.m, sys).to_usize();
    let within = match (labels, states_count) {
        (Some(l), Some(s)) => s.checked_mul(l).is_some_and(|t| t <= limit),
        _ => false,
    };
    if !within {
        return Err(Error::Capacity(format!(
            "lookup table for q = {}, k = {}, m = {}, ell = {} exceeds {limit} entries; use the rank-based backend",
            sys.q(),
            sys.k(),
            params.m,
            params.ell
        )));
    }
    let labels = labels.expect("checked above");
    let w = window_len(params);
    let mut by_window: BTreeMap<Vec<u8>, Vec<Vec<u8>>> = BTreeMap::new();
    let mut rows = BTreeMap::new();
    for state in lex_extensions(&[], params.m, sys.q(), sys.k()) {
        let s = state[params.m - w..].to_vec();
        let row = by_window
            .entry(s.clone())
            .or_insert_with(|| {
                first_extensions(&s, w + params.m, labels, sys.q(), sys.k())
                    .into_iter()
                    .map(|v| v[w..].to_vec())
                    .collect()
            })
            .clone();
        rows.insert(state, row);
    }
    Ok(EdgeLabelTable { m: params.m, rows })
}

/// First `limit` irreducible extensions of `prefix` in lexicographic order.
fn first_extensions(prefix: &[u8], total: usize, limit: usize, q: u16, k: usize) -> Vec<Vec<u8>> {
    fn go(buf: &mut Vec<u8>, total: usize, limit: usize, q: u16, k: usize, out: &mut Vec<Vec<u8>>) {
        if out.len() == limit {
            return;
        }
        if buf.len() == total {
            out.push(buf.clone());
            return;
        }
        for c in 0..q {
            buf.push(c as u8);
            if !ends_with_square(buf, k) {
                go(buf, total, limit, q, k, out);
            }
            buf.pop();
        }
    }
    let mut out = Vec::with_capacity(limit);
    go(&mut prefix.to_vec(), total, limit, q, k, &mut out);
    out
}

/// Counts irreducible completions of a boundary prefix using fundamental
/// solutions of the count recursion: `O(k·m)` stored integers.
#[derive(Debug, Clone)]
pub struct BoundaryCounter {
    q: u16,
    k: usize,
    /// `fundamentals[r][t]`: solution with initial values `δ_{r,t}` for `t < k`.
    fundamentals: Vec<Vec<BigUint>>,
}

impl BoundaryCounter {
    pub fn new(params: &FseParams) -> Self {
        let sys = params.sys;
        let k = sys.k();
        let mult = multipliers(sys);
        let horizon = params.m + 1;
        let fundamentals = (0..k)
            .map(|r| {
                let mut f: Vec<BigUint> = (0..k)
                    .map(|t| {
                        if t == r {
                            BigUint::one()
                        } else {
                            BigUint::zero()
                        }
                    })
                    .collect();
                while f.len() < horizon.max(k) {
                    let t = f.len();
                    let next = (1..=k).map(|b| &f[t - b] * mult[b - 1]).sum();
                    f.push(next);
                }
                f
            })
            .collect();
        Self {
            q: sys.q(),
            k,
            fundamentals,
        }
    }

    /// Irreducible words of length `total` starting with the irreducible word `p`.
    /// `p` must be at least `2k - 1` long.
    pub fn count(&self, p: &[u8], total: usize) -> BigUint {
        debug_assert!(p.len() >= 2 * self.k - 1);
        let Some(d) = total.checked_sub(p.len()) else {
            return BigUint::zero();
        };
        let base: Vec<u64> = (0..self.k.min(d + 1))
            .map(|t| count_extensions(p, p.len() + t, self.q, self.k))
            .collect();
        if d < self.k {
            return BigUint::from(base[d]);
        }
        base.iter()
            .zip(&self.fundamentals)
            .map(|(&b, f)| &f[d] * b)
            .sum()
    }

    pub fn stored_integers(&self) -> usize {
        self.fundamentals.iter().map(Vec::len).sum()
    }
}

#[derive(Debug, Clone)]
enum Lookup {
    Table(EdgeLabelTable),
    Ranked(BoundaryCounter),
}

/// An `(ℓ, m)` finite-state encoder with a chosen neighbour backend.
#[derive(Debug, Clone)]
pub struct FseCodec {
    params: FseParams,
    start: Word,
    labels: BigUint,
    lookup: Lookup,
}

impl FseCodec {
    pub fn new(params: FseParams, backend: Backend) -> Result<Self> {
        Self::with_table_limit(params, backend, DEFAULT_TABLE_LIMIT)
    }

    pub fn with_table_limit(params: FseParams, backend: Backend, limit: usize) -> Result<Self> {
        let sys = params.sys;
        let start = first_irreducible(params.m, sys.q(), sys.k())
            .map(|v| Word::from_trusted(v, sys.q()))
            .ok_or_else(|| Error::InvalidInput("no irreducible state exists".into()))?;
        let lookup = match backend {
            Backend::LookupTable => Lookup::Table(build_lookup_table(&params, limit)?),
            Backend::RankBased => Lookup::Ranked(BoundaryCounter::new(&params)),
        };
        Ok(Self {
            labels: params.labels(),
            params,
            start,
            lookup,
        })
    }

    pub fn params(&self) -> &FseParams {
        &self.params
    }

    /// The initial state `x_0`: the lexicographically least state.
    pub fn start_state(&self) -> &Word {
        &self.start
    }

    pub fn backend(&self) -> Backend {
        match self.lookup {
            Lookup::Table(_) => Backend::LookupTable,
            Lookup::Ranked(_) => Backend::RankBased,
        }
    }

    /// Big integers held by the rank-based backend (zero for the lookup table).
    pub fn stored_integers(&self) -> usize {
        match &self.lookup {
            Lookup::Table(_) => 0,
            Lookup::Ranked(c) => c.stored_integers(),
        }
    }

    /// The `j`-th (1-based) neighbour of `x` in lexicographic order, `j ≤ q^ℓ`.
    pub fn nth_neighbor(&self, x: &Word, j: &BigUint) -> Result<Word> {
        check_state(x, &self.params)?;
        if j.is_zero() || *j > self.labels {
            return invalid(format!("neighbour index {j} outside 1..={}", self.labels));
        }
        match &self.lookup {
            Lookup::Table(t) => {
                let row = t
                    .row(x)
                    .ok_or_else(|| Error::InvalidInput(format!("{x} is not a state")))?;
                let idx = j.to_usize().expect("bounded by table size") - 1;
                row.get(idx)
                    .map(|v| Word::from_trusted(v.clone(), x.q()))
                    .ok_or_else(|| {
                        Error::InvalidInput(format!("{x} has fewer than {j} neighbours"))
                    })
            }
            Lookup::Ranked(c) => self.nth_ranked(c, x, j),
        }
    }

    fn nth_ranked(&self, counter: &BoundaryCounter, x: &Word, j: &BigUint) -> Result<Word> {
        let k = self.params.sys.k();
        let q = self.params.sys.q();
        let w = window_len(&self.params);
        let total = w + self.params.m;
        let mut buf = window(x, &self.params).to_vec();
        let mut rem = j.clone();
        while buf.len() < total {
            let mut chosen = false;
            for c in 0..q {
                buf.push(c as u8);
                if !ends_with_square(&buf, k) {
                    let n = counter.count(&buf, total);
                    if rem <= n {
                        chosen = true;
                        break;
                    }
                    rem -= n;
                }
                buf.pop();
            }
            if !chosen {
                return invalid(format!("{x} has fewer than {j} neighbours"));
            }
        }
        Ok(Word::from_trusted(buf[w..].to_vec(), q))
    }

    /// 1-based label index of the edge `x → next`.
    pub fn neighbor_index(&self, x: &Word, next: &Word) -> Result<BigUint> {
        check_state(x, &self.params)?;
        self.params.sys.check_word(next)?;
        let k = self.params.sys.k();
        let w = window_len(&self.params);
        let mut joined = window(x, &self.params).to_vec();
        joined.extend_from_slice(next.symbols());
        if next.len() != self.params.m || !is_irreducible_slice(&joined, k) {
            return Err(Error::NotAnEdge {
                from: x.to_string(),
                to: next.to_string(),
            });
        }
        let index = match &self.lookup {
            Lookup::Table(t) => {
                let row = t.row(x).expect("valid states have rows");
                match row.binary_search_by(|v| v.as_slice().cmp(next.symbols())) {
                    Ok(pos) => BigUint::from(pos + 1),
                    Err(_) => {
                        // beyond the labelled prefix; compute the true index for the message
                        let counter = BoundaryCounter::new(&self.params);
                        lex_index(&counter, &joined, w, k)
                    }
                }
            }
            Lookup::Ranked(c) => lex_index(c, &joined, w, k),
        };
        if index > self.labels {
            return Err(Error::UnlabeledEdge {
                from: x.to_string(),
                to: next.to_string(),
                index: index.to_string(),
                labelled: self.labels.to_string(),
            });
        }
        Ok(index)
    }

    /// Encodes message blocks of length `ℓ` into an irreducible word of length `s·m`.
    pub fn encode_blocks(&self, blocks: &[Word]) -> Result<Word> {
        let mut digits = Vec::with_capacity(blocks.len() * self.params.ell);
        for b in blocks {
            self.params.sys.check_word(b)?;
            if b.len() != self.params.ell {
                return invalid(format!(
                    "message block {b} does not have length ell = {}",
                    self.params.ell
                ));
            }
            digits.extend_from_slice(b.symbols());
        }
        self.encode_digits(&digits)
    }

    /// Encodes a digit stream whose length is a multiple of `ℓ`.
    pub fn encode_digits(&self, digits: &[u8]) -> Result<Word> {
        let ell = self.params.ell;
        let q = self.params.sys.q();
        if !digits.len().is_multiple_of(ell) {
            return invalid(format!(
                "message length {} is not a multiple of ell = {ell}",
                digits.len()
            ));
        }
        if let Some(&d) = digits.iter().find(|&&d| u16::from(d) >= q) {
            return invalid(format!("message symbol {d} outside alphabet of size {q}"));
        }
        let mut out = Vec::with_capacity(digits.len() / ell * self.params.m);
        let mut state = self.start.clone();
        for block in digits.chunks(ell) {
            let value = block.iter().fold(BigUint::zero(), |acc, &d| acc * q + d);
            state = self.nth_neighbor(&state, &(value + 1u32))?;
            out.extend_from_slice(state.symbols());
        }
        Ok(Word::from_trusted(out, q))
    }

    /// Inverse of [`FseCodec::encode_blocks`].
    pub fn decode_blocks(&self, x: &Word) -> Result<Vec<Word>> {
        let q = self.params.sys.q();
        Ok(self
            .decode_digits(x)?
            .chunks(self.params.ell)
            .map(|c| Word::from_trusted(c.to_vec(), q))
            .collect())
    }

    /// Inverse of [`FseCodec::encode_digits`].
    pub fn decode_digits(&self, x: &Word) -> Result<Vec<u8>> {
        self.params.sys.check_word(x)?;
        let m = self.params.m;
        let q = self.params.sys.q();
        if !x.len().is_multiple_of(m) {
            return Err(Error::Corrupt(format!(
                "encoded length {} is not a multiple of m = {m}",
                x.len()
            )));
        }
        let mut digits = Vec::with_capacity(x.len() / m * self.params.ell);
        let mut state = self.start.clone();
        for (i, block) in x.symbols().chunks(m).enumerate() {
            let next = Word::from_trusted(block.to_vec(), q);
            let index = self.neighbor_index(&state, &next).map_err(|e| match e {
                Error::NotAnEdge { .. }
                | Error::UnlabeledEdge { .. }
                | Error::NotIrreducible(_) => Error::Corrupt(format!("block {i}: {e}")),
                other => other,
            })?;
            let mut value = index - 1u32;
            let mut block_digits = vec![0u8; self.params.ell];
            for d in block_digits.iter_mut().rev() {
                let (quot, rem) = value.div_rem(&BigUint::from(q));
                *d = rem.to_u8().expect("digit below q");
                value = quot;
            }
            digits.extend_from_slice(&block_digits);
            state = next;
        }
        Ok(digits)
    }
}

/// Lexicographic index (1-based) of `joined[w..]` among the completions of `joined[..w]`.
fn lex_index(counter: &BoundaryCounter, joined: &[u8], w: usize, k: usize) -> BigUint {
    let total = joined.len();
    let mut index = BigUint::one();
    let mut buf = joined[..w].to_vec();
    for &sym in &joined[w..] {
        for c in 0..sym {
            buf.push(c);
            if !ends_with_square(&buf, k) {
                index += counter.count(&buf, total);
            }
            buf.pop();
        }
        buf.push(sym);
    }
    index
}

/// `j`-th neighbour of `x` via the rank-based backend.
pub fn nth_neighbor(x: &Word, j: &BigUint, params: &FseParams) -> Result<Word> {
    FseCodec::new(*params, Backend::RankBased)?.nth_neighbor(x, j)
}

/// Label index of the edge `x → next` via the rank-based backend.
pub fn neighbor_index(x: &Word, next: &Word, params: &FseParams) -> Result<BigUint> {
    FseCodec::new(*params, Backend::RankBased)?.neighbor_index(x, next)
}

pub fn encode_stream(blocks: &[Word], params: &FseParams) -> Result<Word> {
    FseCodec::new(*params, Backend::RankBased)?.encode_blocks(blocks)
}

pub fn decode_stream(x: &Word, params: &FseParams) -> Result<Vec<Word>> {
    FseCodec::new(*params, Backend::RankBased)?.decode_blocks(x)
}
