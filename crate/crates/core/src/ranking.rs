//! Ranking and unranking of irreducible words.
//!
//! Every irreducible word of length `n` beyond the base lengths is obtained
//! from a shorter irreducible word by exactly one of the suffix maps in
//! [`Branch`]: `Append1` adds one symbol, `Append2` adds two, `Append3`
//! (only for `k = 3`) adds three. Each map is a bijection
//! `Irr(n - b) × [mult_b] → class_b(n)`, where `mult_b` is the recursion
//! multiplier, and the classes partition `Irr(n)`. Ranks list class 1
//! first, then class 2, then class 3; inside a class the map index varies
//! fastest. Base lengths are ordered lexicographically.
//!
//! The maps only append symbols, so the same order restricts to words with a
//! fixed prefix, which is what [`Ranker::with_prefix`] ranks.

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::enumeration::{
    base_len, lex_extensions, multipliers, prefix_base_end, CountTable, PrefixCountTable,
};
use crate::error::{invalid, Error, Result};
use crate::word::{is_irreducible_slice, DupSystem, Word};

/// Cap on the number of base-length words a ranker keeps in memory.
pub const MAX_BASE_WORDS: usize = 4_000_000;

/// Suffix map that produced a word, named by how many symbols it appends.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Branch {
    Append1,
    Append2,
    Append3,
}

impl Branch {
    pub fn appended(self) -> usize {
        match self {
            Branch::Append1 => 1,
            Branch::Append2 => 2,
            Branch::Append3 => 3,
        }
    }

    /// Branches available for `k`, in rank order.
    pub fn all(k: usize) -> &'static [Branch] {
        if k == 2 {
            &[Branch::Append1, Branch::Append2]
        } else {
            &[Branch::Append1, Branch::Append2, Branch::Append3]
        }
    }

    /// Number of admissible map indices for this branch.
    pub fn multiplicity(self, sys: DupSystem) -> u64 {
        multipliers(sys)
            .get(self.appended() - 1)
            .copied()
            .unwrap_or(0)
    }

    /// Shortest source word the map can be applied to.
    fn min_source_len(self, k: usize) -> usize {
        match (k, self) {
            (2, _) => 2,
            (_, Branch::Append1) => 3,
            (_, Branch::Append2) => 4,
            (_, Branch::Append3) => 3,
        }
    }
}

/// The `i`-th (1-based) symbol of `Σ_q` not in `excluded`, in ascending order.
fn nth_excluding(q: u16, excluded: &[u8], i: u64) -> Option<u8> {
    (0..q)
        .map(|c| c as u8)
        .filter(|c| !excluded.contains(c))
        .nth(usize::try_from(i).ok()?.checked_sub(1)?)
}

fn index_excluding(q: u16, excluded: &[u8], c: u8) -> Option<u64> {
    if excluded.contains(&c) || u16::from(c) >= q {
        return None;
    }
    Some(1 + (0..c).filter(|d| !excluded.contains(d)).count() as u64)
}

/// Symbols the new symbol must avoid, and the symbols echoed after it.
fn map_shape(v: &[u8], k: usize, branch: Branch) -> (Vec<u8>, Vec<u8>) {
    let l = v.len();
    match (k, branch) {
        (2, Branch::Append1) => (vec![v[l - 2], v[l - 1]], vec![]),
        (2, _) => (vec![v[l - 2], v[l - 1]], vec![v[l - 1]]),
        (_, Branch::Append1) => {
            if v[l - 3] != v[l - 1] {
                (vec![v[l - 3], v[l - 1]], vec![])
            } else {
                (vec![v[l - 2], v[l - 1]], vec![])
            }
        }
        (_, Branch::Append2) => {
            let distinct_tail = v[l - 3] != v[l - 1];
            let excl = if distinct_tail && (v[l - 4] == v[l - 1] || v[l - 4] == v[l - 2]) {
                vec![v[l - 3], v[l - 2], v[l - 1]]
            } else {
                vec![v[l - 4], v[l - 2], v[l - 1]]
            };
            (excl, vec![v[l - 2]])
        }
        (_, Branch::Append3) => {
            if v[l - 3] != v[l - 1] {
                (vec![v[l - 3], v[l - 1]], vec![v[l - 3], v[l - 1]])
            } else {
                (vec![v[l - 2], v[l - 1]], vec![v[l - 2], v[l - 1]])
            }
        }
    }
}

/// Appends the image of `(v, i)` under `branch` in place. Returns false if `i` is out of range.
fn apply_in_place(v: &mut Vec<u8>, i: u64, branch: Branch, sys: DupSystem) -> bool {
    let (excl, echo) = map_shape(v, sys.k(), branch);
    match nth_excluding(sys.q(), &excl, i) {
        Some(s) => {
            v.push(s);
            v.extend_from_slice(&echo);
            true
        }
        None => false,
    }
}

/// Which branch produced `y` (length at least 4 for k = 2, 6 for k = 3).
fn classify(y: &[u8], k: usize) -> Branch {
    let n = y.len();
    if k == 2 {
        return if y[n - 1] != y[n - 3] {
            Branch::Append1
        } else {
            Branch::Append2
        };
    }
    if y[n - 1] != y[n - 4] {
        return Branch::Append1;
    }
    let three = if y[n - 6] != y[n - 4] {
        y[n - 2] == y[n - 6]
    } else {
        y[n - 2] == y[n - 5]
    };
    if three {
        Branch::Append3
    } else {
        Branch::Append2
    }
}

/// Strips the last map from `y`, returning the source length, map index and branch.
fn invert_slice(y: &[u8], sys: DupSystem) -> Option<(usize, u64, Branch)> {
    let branch = classify(y, sys.k());
    let src_len = y.len() - branch.appended();
    let (excl, echo) = map_shape(&y[..src_len], sys.k(), branch);
    let tail = &y[src_len..];
    if tail[1..] != echo[..] {
        return None;
    }
    let i = index_excluding(sys.q(), &excl, tail[0])?;
    Some((src_len, i, branch))
}

fn min_len_for_maps(k: usize) -> usize {
    base_len(k) + 1
}

/// Applies one suffix map to an irreducible word.
pub fn apply_branch(x: &Word, i: u64, branch: Branch, sys: DupSystem) -> Result<Word> {
    sys.check_word(x)?;
    if !Branch::all(sys.k()).contains(&branch) {
        return invalid(format!(
            "branch {branch:?} does not exist for k = {}",
            sys.k()
        ));
    }
    let mult = branch.multiplicity(sys);
    if i == 0 || i > mult {
        return invalid(format!("map index {i} outside 1..={mult} for {branch:?}"));
    }
    if x.len() < branch.min_source_len(sys.k()) {
        return invalid(format!("word {x} too short for {branch:?}"));
    }
    if !is_irreducible_slice(x.symbols(), sys.k()) {
        return Err(Error::NotIrreducible(x.to_string()));
    }
    let mut v = x.symbols().to_vec();
    let ok = apply_in_place(&mut v, i, branch, sys);
    debug_assert!(ok);
    Ok(Word::from_trusted(v, x.q()))
}

/// Recovers `(x, i, branch)` from an irreducible word beyond the base lengths.
pub fn invert_branch(y: &Word, sys: DupSystem) -> Result<(Word, u64, Branch)> {
    sys.check_word(y)?;
    if y.len() < min_len_for_maps(sys.k()) {
        return invalid(format!(
            "word {y} is a base-case word (length ≤ {})",
            base_len(sys.k())
        ));
    }
    if !is_irreducible_slice(y.symbols(), sys.k()) {
        return Err(Error::NotIrreducible(y.to_string()));
    }
    let (len, i, branch) =
        invert_slice(y.symbols(), sys).ok_or_else(|| Error::NotIrreducible(y.to_string()))?;
    Ok((
        Word::from_trusted(y.symbols()[..len].to_vec(), y.q()),
        i,
        branch,
    ))
}

/// Arithmetic performed by one rank or unrank call.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct OpStats {
    /// Big-integer multiplications, divisions, comparisons and additions.
    pub bigint_ops: usize,
    /// Suffix maps applied or inverted.
    pub steps: usize,
}

/// Rank/unrank over `Irr^{(p)}_{≤k}(p, n, q)` for every `n` in `|p|..=max_len`.
///
/// With an empty prefix this ranks all of `Irr_{≤k}(n, q)`.
#[derive(Debug, Clone)]
pub struct Ranker {
    sys: DupSystem,
    prefix: Word,
    max_len: usize,
    base_end: usize,
    counts: Vec<BigUint>,
    /// Lexicographically sorted base words, indexed by `n - |p|`.
    base_words: Vec<Vec<Vec<u8>>>,
}

impl Ranker {
    pub fn new(sys: DupSystem, max_len: usize) -> Result<Self> {
        let table = CountTable::new(sys, max_len);
        Self::build(sys, Word::empty(sys.q()), max_len, table.values().to_vec())
    }

    pub fn with_prefix(sys: DupSystem, prefix: &Word, max_len: usize) -> Result<Self> {
        sys.check_word(prefix)?;
        if !is_irreducible_slice(prefix.symbols(), sys.k()) {
            return Err(Error::NotIrreducible(prefix.to_string()));
        }
        let table = PrefixCountTable::new(prefix, max_len, sys)?;
        let counts = (prefix.len()..=max_len)
            .map(|n| table.get(n).cloned().unwrap_or_default())
            .collect();
        Self::build(sys, prefix.clone(), max_len, counts)
    }

    fn build(sys: DupSystem, prefix: Word, max_len: usize, counts: Vec<BigUint>) -> Result<Self> {
        let base_end = prefix_base_end(prefix.len(), sys.k());
        let last_base = base_end.min(max_len);
        let expected: usize = (prefix.len()..=last_base)
            .map(|n| counts[n - prefix.len()].to_usize().unwrap_or(usize::MAX))
            .fold(0usize, usize::saturating_add);
        if expected > MAX_BASE_WORDS {
            return Err(Error::Capacity(format!(
                "{expected} base words for q = {}, k = {}",
                sys.q(),
                sys.k()
            )));
        }
        let base_words = (prefix.len()..=last_base)
            .map(|n| lex_extensions(prefix.symbols(), n, sys.q(), sys.k()))
            .collect();
        Ok(Self {
            sys,
            prefix,
            max_len,
            base_end,
            counts,
            base_words,
        })
    }

    pub fn sys(&self) -> DupSystem {
        self.sys
    }

    pub fn prefix(&self) -> &Word {
        &self.prefix
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    /// Number of ranked words of length `n`.
    pub fn count(&self, n: usize) -> Option<&BigUint> {
        n.checked_sub(self.prefix.len())
            .and_then(|i| self.counts.get(i))
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if n < self.prefix.len() || n > self.max_len {
            return invalid(format!(
                "length {n} outside {}..={} supported by this ranker",
                self.prefix.len(),
                self.max_len
            ));
        }
        Ok(())
    }

    fn cnt(&self, n: usize) -> &BigUint {
        &self.counts[n - self.prefix.len()]
    }

    pub fn unrank(&self, n: usize, j: &BigUint) -> Result<Word> {
        self.unrank_with_stats(n, j).map(|(w, _)| w)
    }

    pub fn unrank_with_stats(&self, n: usize, j: &BigUint) -> Result<(Word, OpStats)> {
        self.check_len(n)?;
        let size = self.cnt(n);
        if j.is_zero() || j > size {
            return Err(Error::RankOutOfRange {
                rank: j.to_string(),
                size: size.to_string(),
            });
        }
        let mut stats = OpStats::default();
        let mut steps: Vec<(u64, Branch)> = Vec::new();
        let mut n = n;
        // 0-based position inside the current length
        let mut r = j - 1u32;
        'peel: while n > self.base_end {
            for &branch in Branch::all(self.sys.k()) {
                let mult = branch.multiplicity(self.sys);
                if mult == 0 {
                    continue;
                }
                let block = self.cnt(n - branch.appended()) * mult;
                stats.bigint_ops += 2;
                if r < block {
                    let (quot, rem) = r.div_rem(&BigUint::from(mult));
                    stats.bigint_ops += 1;
                    steps.push((rem.to_u64().expect("remainder below q") + 1, branch));
                    r = quot;
                    n -= branch.appended();
                    continue 'peel;
                }
                r -= block;
                stats.bigint_ops += 1;
            }
            unreachable!("rank exceeded the class sizes despite the range check");
        }
        let idx = r.to_usize().expect("base rank fits in memory");
        let mut v = self.base_words[n - self.prefix.len()][idx].clone();
        for &(i, branch) in steps.iter().rev() {
            let ok = apply_in_place(&mut v, i, branch, self.sys);
            debug_assert!(ok);
        }
        stats.steps = steps.len();
        Ok((Word::from_trusted(v, self.sys.q()), stats))
    }

    pub fn rank(&self, x: &Word) -> Result<BigUint> {
        self.rank_with_stats(x).map(|(r, _)| r)
    }

    pub fn rank_with_stats(&self, x: &Word) -> Result<(BigUint, OpStats)> {
        self.sys.check_word(x)?;
        self.check_len(x.len())?;
        if !x.starts_with(&self.prefix) {
            return invalid(format!("{x} does not start with {}", self.prefix));
        }
        let s = x.symbols();
        if !is_irreducible_slice(s, self.sys.k()) {
            return Err(Error::NotIrreducible(x.to_string()));
        }
        let mut stats = OpStats::default();
        // (offset, multiplicity, index) for each peeled map, outermost first
        let mut steps: Vec<(BigUint, u64, u64)> = Vec::new();
        let mut len = s.len();
        while len > self.base_end {
            let (src, i, branch) = invert_slice(&s[..len], self.sys)
                .ok_or_else(|| Error::NotIrreducible(x.to_string()))?;
            let mut offset = BigUint::zero();
            for &b in Branch::all(self.sys.k()) {
                if b == branch {
                    break;
                }
                offset += self.cnt(len - b.appended()) * b.multiplicity(self.sys);
                stats.bigint_ops += 2;
            }
            steps.push((offset, branch.multiplicity(self.sys), i));
            len = src;
        }
        let base = &self.base_words[len - self.prefix.len()];
        let pos = base
            .binary_search_by(|w| w.as_slice().cmp(&s[..len]))
            .map_err(|_| Error::NotIrreducible(x.to_string()))?;
        let mut rank = BigUint::from(pos) + BigUint::one();
        for (offset, mult, i) in steps.iter().rev() {
            rank = (rank - 1u32) * *mult + *i + offset;
            stats.bigint_ops += 4;
        }
        stats.steps = steps.len();
        Ok((rank, stats))
    }

    /// Number of big integers held in the count table.
    pub fn stored_integers(&self) -> usize {
        self.counts.len()
    }
}

/// The `j`-th word (1-based) of `Irr_{≤k}(n, q)`.
pub fn unrank_irr(n: usize, j: &BigUint, sys: DupSystem) -> Result<Word> {
    Ranker::new(sys, n)?.unrank(n, j)
}

/// Rank (1-based) of an irreducible word within `Irr_{≤k}(|x|, q)`.
pub fn rank_irr(x: &Word, sys: DupSystem) -> Result<BigUint> {
    Ranker::new(sys, x.len())?.rank(x)
}

/// The `j`-th word of `Irr^{(p)}_{≤k}(p, n, q)`.
pub fn unrank_irr_prefix(p: &Word, n: usize, j: &BigUint, sys: DupSystem) -> Result<Word> {
    Ranker::with_prefix(sys, p, n)?.unrank(n, j)
}

/// Rank of `x` within `Irr^{(p)}_{≤k}(p, |x|, q)`.
pub fn rank_irr_prefix(p: &Word, x: &Word, sys: DupSystem) -> Result<BigUint> {
    Ranker::with_prefix(sys, p, x.len())?.rank(x)
}
