//! Brute-force reference implementations.
//!
//! Everything here works from the definitions alone: full enumeration of
//! `Σ_q^n`, exhaustive deduplication search and explicit state graphs. None of
//! it touches the counting or ranking code, so it can be used to check them.

use std::collections::{BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::word::{DupSystem, Word};

/// Limits that keep the oracles from running away.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleBudget {
    /// Cap on words enumerated, words visited or state pairs examined.
    pub max_words: u64,
    /// Cap on the number of (de)duplication rounds explored.
    pub max_depth: usize,
}

impl Default for OracleBudget {
    fn default() -> Self {
        Self {
            max_words: 1 << 26,
            max_depth: 64,
        }
    }
}

fn has_square(s: &[u8], k: usize) -> bool {
    (0..s.len())
        .any(|i| (1..=k).any(|t| i + 2 * t <= s.len() && (0..t).all(|d| s[i + d] == s[i + t + d])))
}

fn over(what: &str, need: u128, budget: &OracleBudget) -> Error {
    Error::BudgetExceeded(format!("{what} needs {need} > {} words", budget.max_words))
}

/// Every irreducible word of length `n`, by filtering all `q^n` words.
pub fn enumerate_irr_bruteforce(
    n: usize,
    sys: DupSystem,
    budget: &OracleBudget,
) -> Result<BTreeSet<Word>> {
    let q = sys.q();
    let total = u128::from(q).checked_pow(n as u32).unwrap_or(u128::MAX);
    if total > u128::from(budget.max_words) {
        return Err(over("enumeration", total, budget));
    }
    let mut out = BTreeSet::new();
    let mut digits = vec![0u8; n];
    loop {
        if !has_square(&digits, sys.k()) {
            out.insert(Word::new(digits.clone(), q)?);
        }
        // odometer increment, last digit fastest
        let mut i = n;
        loop {
            if i == 0 {
                return Ok(out);
            }
            i -= 1;
            if u16::from(digits[i]) + 1 < q {
                digits[i] += 1;
                break;
            }
            digits[i] = 0;
        }
    }
}

fn deduplications(s: &[u8], k: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    for i in 0..s.len() {
        for t in 1..=k {
            if i + 2 * t <= s.len() && s[i..i + t] == s[i + t..i + 2 * t] {
                let mut v = s[..i + t].to_vec();
                v.extend_from_slice(&s[i + 2 * t..]);
                out.push(v);
            }
        }
    }
    out
}

/// Every irreducible word reachable from `y` by some sequence of deduplications.
pub fn all_roots_bfs(y: &Word, sys: DupSystem, budget: &OracleBudget) -> Result<BTreeSet<Word>> {
    let k = sys.k();
    let mut seen: BTreeSet<Vec<u8>> = BTreeSet::new();
    let mut roots = BTreeSet::new();
    let mut queue = VecDeque::from([(y.symbols().to_vec(), 0usize)]);
    seen.insert(y.symbols().to_vec());
    while let Some((s, depth)) = queue.pop_front() {
        let next = deduplications(&s, k);
        if next.is_empty() {
            roots.insert(Word::new(s, sys.q())?);
            continue;
        }
        if depth == budget.max_depth {
            return Err(Error::BudgetExceeded(format!(
                "deduplication search deeper than {}",
                budget.max_depth
            )));
        }
        for v in next {
            if seen.insert(v.clone()) {
                if seen.len() as u64 > budget.max_words {
                    return Err(over("deduplication search", seen.len() as u128, budget));
                }
                queue.push_back((v, depth + 1));
            }
        }
    }
    Ok(roots)
}

/// Every word obtained from `x` by at most `depth` duplications of length `≤ k`.
pub fn descendants_bfs(
    x: &Word,
    depth: usize,
    sys: DupSystem,
    budget: &OracleBudget,
) -> Result<BTreeSet<Word>> {
    if depth > budget.max_depth {
        return Err(Error::BudgetExceeded(format!(
            "depth {depth} exceeds {}",
            budget.max_depth
        )));
    }
    let mut seen: BTreeSet<Vec<u8>> = BTreeSet::from([x.symbols().to_vec()]);
    let mut frontier = vec![x.symbols().to_vec()];
    for _ in 0..depth {
        let mut next = Vec::new();
        for s in &frontier {
            for t in 1..=sys.k().min(s.len()) {
                for i in 0..=s.len() - t {
                    let mut v = s[..i + t].to_vec();
                    v.extend_from_slice(&s[i..]);
                    if seen.insert(v.clone()) {
                        next.push(v);
                    }
                }
            }
            if seen.len() as u64 > budget.max_words {
                return Err(over("descendant search", seen.len() as u128, budget));
            }
        }
        frontier = next;
    }
    seen.into_iter().map(|s| Word::new(s, sys.q())).collect()
}

/// Minimum out-degree of the graph on irreducible words of length `m` where
/// `x → x'` when `x x'` is irreducible, computed from all state pairs.
pub fn min_outdegree_bruteforce(m: usize, sys: DupSystem, budget: &OracleBudget) -> Result<u64> {
    let states: Vec<Word> = enumerate_irr_bruteforce(m, sys, budget)?
        .into_iter()
        .collect();
    let pairs = (states.len() as u128).pow(2);
    if pairs > u128::from(budget.max_words) {
        return Err(over("state graph", pairs, budget));
    }
    let mut joined = Vec::with_capacity(2 * m);
    let min = states
        .iter()
        .map(|x| {
            states
                .iter()
                .filter(|y| {
                    joined.clear();
                    joined.extend_from_slice(x.symbols());
                    joined.extend_from_slice(y.symbols());
                    !has_square(&joined, sys.k())
                })
                .count() as u64
        })
        .min()
        .unwrap_or(0);
    Ok(min)
}
