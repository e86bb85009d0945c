//! Exact counts of irreducible words and the quantities derived from them.
//!
//! `I_{≤k}(n,q)` obeys a linear recursion with coefficients `[q-2, q-2]` for
//! `k = 2` (valid from `n = 4`) and `[q-2, q-3, q-2]` for `k = 3` (valid from
//! `n = 6`). The same recursion governs words with a fixed prefix and the
//! minimum out-degree of the finite-state encoder graph, which is what makes
//! the rank-based encoder and the `(ℓ, m)` parameter choice work.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::word::{ends_with_square, is_irreducible_slice, DupSystem, Word};

/// Largest length whose words are ordered and counted directly rather than by recursion.
pub(crate) fn base_len(k: usize) -> usize {
    if k == 2 {
        3
    } else {
        5
    }
}

/// Recursion multipliers; entry `b - 1` multiplies the count at `n - b`.
pub(crate) fn multipliers(sys: DupSystem) -> Vec<u64> {
    let q = u64::from(sys.q());
    if sys.k() == 2 {
        vec![q - 2, q - 2]
    } else {
        vec![q - 2, q - 3, q - 2]
    }
}

fn step(sys: DupSystem, prev: &[BigUint]) -> BigUint {
    // prev holds the last k values, oldest first
    multipliers(sys)
        .iter()
        .zip(prev.iter().rev())
        .map(|(&c, v)| v * c)
        .sum()
}

/// `I_{≤k}(n,q)` for every `n` in `0..=max_len`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CountTable {
    sys: DupSystem,
    values: Vec<BigUint>,
}

impl CountTable {
    pub fn new(sys: DupSystem, max_len: usize) -> Self {
        let q = BigUint::from(sys.q());
        let one = BigUint::one();
        let q1 = &q - 1u32;
        let q2 = &q - 2u32;
        let mut base = vec![one.clone(), q.clone(), &q * &q1, &q * &q1 * &q1];
        if sys.k() == 3 {
            base.push(&q * &q * &q1 * &q2);
            base.push(&q * &q1 * &q2 * (&q * &q - &q - 1u32));
        }
        let mut values: Vec<BigUint> = base.into_iter().take(max_len + 1).collect();
        while values.len() <= max_len {
            let next = step(sys, &values[values.len() - sys.k()..]);
            values.push(next);
        }
        Self { sys, values }
    }

    pub fn sys(&self) -> DupSystem {
        self.sys
    }

    pub fn max_len(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, n: usize) -> Option<&BigUint> {
        self.values.get(n)
    }

    pub fn values(&self) -> &[BigUint] {
        &self.values
    }
}

/// `I_{≤k}(n,q)`, the number of irreducible words of length `n`.
pub fn count_irr(n: usize, sys: DupSystem) -> BigUint {
    CountTable::new(sys, n).values.swap_remove(n)
}

/// `|C(n,≤k;q)| = Σ_{i=1}^{n} I_{≤k}(i,q)`.
pub fn code_size(n: usize, sys: DupSystem) -> BigUint {
    CountTable::new(sys, n).values.iter().skip(1).sum()
}

/// Counts words of length `total` that extend `prefix` and stay irreducible.
/// `prefix` itself must already be irreducible.
pub(crate) fn count_extensions(prefix: &[u8], total: usize, q: u16, k: usize) -> u64 {
    fn go(buf: &mut Vec<u8>, total: usize, q: u16, k: usize) -> u64 {
        if buf.len() == total {
            return 1;
        }
        let mut n = 0;
        for c in 0..q {
            buf.push(c as u8);
            if !ends_with_square(buf, k) {
                n += go(buf, total, q, k);
            }
            buf.pop();
        }
        n
    }
    let mut buf = prefix.to_vec();
    go(&mut buf, total, q, k)
}

/// Irreducible extensions of `prefix` to length `total`, in lexicographic order.
pub(crate) fn lex_extensions(prefix: &[u8], total: usize, q: u16, k: usize) -> Vec<Vec<u8>> {
    fn go(buf: &mut Vec<u8>, total: usize, q: u16, k: usize, out: &mut Vec<Vec<u8>>) {
        if buf.len() == total {
            out.push(buf.clone());
            return;
        }
        for c in 0..q {
            buf.push(c as u8);
            if !ends_with_square(buf, k) {
                go(buf, total, q, k, out);
            }
            buf.pop();
        }
    }
    let mut out = Vec::new();
    if is_irreducible_slice(prefix, k) {
        let mut buf = prefix.to_vec();
        go(&mut buf, total, q, k, &mut out);
    }
    out
}

/// Last length of a prefix class that is counted by direct extension.
pub(crate) fn prefix_base_end(prefix_len: usize, k: usize) -> usize {
    (prefix_len + k - 1).max(base_len(k))
}

/// `|Irr^{(p)}_{≤k}(p,n,q)|` for `n` in `|p|..=max_len`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixCountTable {
    sys: DupSystem,
    prefix: Word,
    values: Vec<BigUint>,
}

impl PrefixCountTable {
    pub fn new(prefix: &Word, max_len: usize, sys: DupSystem) -> Result<Self> {
        sys.check_word(prefix)?;
        if max_len < prefix.len() {
            return invalid(format!(
                "length {max_len} is shorter than the prefix ({})",
                prefix.len()
            ));
        }
        let p = prefix.symbols();
        let k = sys.k();
        let mut values = Vec::with_capacity(max_len - p.len() + 1);
        if is_irreducible_slice(p, k) {
            let base_end = prefix_base_end(p.len(), k).min(max_len);
            for n in p.len()..=base_end {
                values.push(BigUint::from(count_extensions(p, n, sys.q(), k)));
            }
            while values.len() < max_len - p.len() + 1 {
                let next = step(sys, &values[values.len() - k..]);
                values.push(next);
            }
        } else {
            values.resize(max_len - p.len() + 1, BigUint::zero());
        }
        Ok(Self {
            sys,
            prefix: prefix.clone(),
            values,
        })
    }

    pub fn prefix(&self) -> &Word {
        &self.prefix
    }

    pub fn sys(&self) -> DupSystem {
        self.sys
    }

    pub fn get(&self, n: usize) -> Option<&BigUint> {
        n.checked_sub(self.prefix.len())
            .and_then(|i| self.values.get(i))
    }

    /// Number of big integers held by the table.
    pub fn stored_integers(&self) -> usize {
        self.values.len()
    }
}

/// `|Irr^{(p)}_{≤k}(p,n,q)|`, irreducible words of length `n` starting with `p`.
pub fn count_irr_prefix(p: &Word, n: usize, sys: DupSystem) -> Result<BigUint> {
    let mut t = PrefixCountTable::new(p, n, sys)?;
    Ok(t.values.pop().unwrap_or_default())
}

/// Irreducible words of length `len` in first-occurrence normal form
/// (`0` appears first, each new symbol is one more than the largest so far).
pub(crate) fn canonical_windows(len: usize, sys: DupSystem) -> Vec<Vec<u8>> {
    fn go(buf: &mut Vec<u8>, len: usize, q: u16, k: usize, out: &mut Vec<Vec<u8>>) {
        if buf.len() == len {
            out.push(buf.clone());
            return;
        }
        let next_new = buf.iter().max().map_or(0, |&m| u16::from(m) + 1);
        for c in 0..=next_new.min(q - 1) {
            buf.push(c as u8);
            if !ends_with_square(buf, k) {
                go(buf, len, q, k, out);
            }
            buf.pop();
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), len, sys.q(), sys.k(), &mut out);
    out
}

/// Minimum out-degree computed over every boundary window: the neighbours
/// of a state depend only on its last `2k-1` symbols, and relabelling the
/// alphabet preserves neighbour counts.
pub(crate) fn window_min_degree(m: usize, sys: DupSystem) -> Result<BigUint> {
    let w = 2 * sys.k() - 1;
    if m < w {
        return invalid(format!("state length {m} below 2k-1 = {w}"));
    }
    let mut best: Option<BigUint> = None;
    for s in canonical_windows(w, sys) {
        let p = Word::new(s, sys.q())?;
        let c = count_irr_prefix(&p, w + m, sys)?;
        if best.as_ref().is_none_or(|b| c < *b) {
            best = Some(c);
        }
    }
    best.ok_or_else(|| Error::InvalidInput("no irreducible boundary window".into()))
}

/// First state length for which `Δ_{≤k}(m,q)` is defined here.
pub fn min_degree_base_start(k: usize) -> usize {
    if k == 2 {
        3
    } else {
        5
    }
}

/// `Δ_{≤k}(m,q)`, the minimum out-degree of the `(ℓ, m)` state graph.
///
/// For `k = 2` the base values are `q(q-2)^2` and `(q-2)^2(q^2-q-1)`. For
/// `k = 3` the three base values (`m = 5, 6, 7`) are computed exactly from
/// the boundary windows; afterwards the count recursion takes over.
pub fn min_out_degree(m: usize, sys: DupSystem) -> Result<BigUint> {
    Ok(MinDegreeTable::new(sys, m)?
        .values
        .swap_remove(m - min_degree_base_start(sys.k())))
}

/// `Δ_{≤k}(m,q)` for `m` from the first base case up to `max_m`.
#[derive(Debug, Clone)]
pub struct MinDegreeTable {
    sys: DupSystem,
    values: Vec<BigUint>,
}

impl MinDegreeTable {
    pub fn new(sys: DupSystem, max_m: usize) -> Result<Self> {
        let start = min_degree_base_start(sys.k());
        if max_m < start {
            return invalid(format!(
                "Δ is defined from m = {start} for k = {}, got m = {max_m}",
                sys.k()
            ));
        }
        let q = BigUint::from(sys.q());
        let q2 = &q - 2u32;
        let mut values = if sys.k() == 2 {
            vec![&q * &q2 * &q2, &q2 * &q2 * (&q * &q - &q - 1u32)]
        } else {
            (start..start + 3)
                .map(|m| window_min_degree(m, sys))
                .collect::<Result<Vec<_>>>()?
        };
        values.truncate(max_m - start + 1);
        while values.len() < max_m - start + 1 {
            let next = step(sys, &values[values.len() - sys.k()..]);
            values.push(next);
        }
        Ok(Self { sys, values })
    }

    pub fn get(&self, m: usize) -> Option<&BigUint> {
        m.checked_sub(min_degree_base_start(self.sys.k()))
            .and_then(|i| self.values.get(i))
    }
}

/// Known closed forms for `Δ_{≤3}(m,q)`, `m ∈ {5, 6, 7}`.
/// The `m = 7` polynomial does not agree with exhaustive counts; see
/// [`closed_form_mismatches`].
pub fn closed_form_min_degree_k3(m: usize, q: u16) -> Option<i128> {
    let q = i128::from(q);
    match m {
        5 => Some((q - 2) * (q * q - 2 * q - 1).pow(2)),
        6 => Some((q - 1) * (q.pow(5) - 6 * q.pow(4) + 9 * q.pow(3) + 4 * q * q - 8 * q - 9)),
        7 => Some(
            (q - 2) * (q.pow(6) - 6 * q.pow(4) + 9 * q.pow(3) + 4 * q * q - 8 * q - 10 * q + 3),
        ),
        _ => None,
    }
}

/// A closed form that disagrees with the exact value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClosedFormMismatch {
    pub m: usize,
    pub q: u16,
    pub closed_form: i128,
    pub exact: String,
}

/// Compares the `k = 3` closed forms against exact values for `q`.
pub fn closed_form_mismatches(q: u16) -> Result<Vec<ClosedFormMismatch>> {
    let sys = DupSystem::new(q, 3)?;
    let table = MinDegreeTable::new(sys, 7)?;
    let mut out = Vec::new();
    for m in 5..=7 {
        let exact = table.get(m).expect("base case present");
        let closed_form = closed_form_min_degree_k3(m, q).expect("closed form exists");
        let matches = closed_form >= 0 && BigUint::from(closed_form as u128) == *exact;
        if !matches {
            out.push(ClosedFormMismatch {
                m,
                q,
                closed_form,
                exact: exact.to_string(),
            });
        }
    }
    Ok(out)
}

/// Natural logarithm of an arbitrary-precision integer (`-inf` for zero).
pub fn ln_big(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits <= 1000 {
        return x.to_f64().map_or(f64::NAN, f64::ln);
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().unwrap_or(f64::NAN);
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

pub fn log_q(x: &BigUint, q: u16) -> f64 {
    ln_big(x) / f64::from(q).ln()
}

/// Growth constant, asymptotic rate and `κ` for a duplication system.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RateInfo {
    pub q: u16,
    pub k: usize,
    /// Dominant root of the count recursion.
    #[serde(rename = "lambda")]
    pub growth: f64,
    pub rate: f64,
    /// Largest `κ` with `Δ(m) ≥ κ·growth^m` on the base lengths.
    #[serde(rename = "kappa")]
    pub degree_constant: f64,
}

/// Dominant root of `x^2 - (q-2)x - (q-2)` (k = 2) or `x^3 - (q-2)x^2 - (q-3)x - (q-2)` (k = 3).
pub fn growth_constant(sys: DupSystem) -> f64 {
    let q = f64::from(sys.q());
    if sys.k() == 2 {
        return (q - 2.0 + (q * q - 4.0).sqrt()) / 2.0;
    }
    let f = |x: f64| ((x - (q - 2.0)) * x - (q - 3.0)) * x - (q - 2.0);
    // f(1) = 8 - 3q < 0 and f(q) = q^2 + 2q + 2 > 0
    let (mut lo, mut hi) = (1.0f64, q);
    while hi - lo > 1e-14 * hi {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Base state lengths used to pin `κ`.
pub fn degree_constant_base_lengths(k: usize) -> std::ops::RangeInclusive<usize> {
    if k == 2 {
        3..=4
    } else {
        5..=7
    }
}

pub fn asymptotic_rate(sys: DupSystem) -> Result<RateInfo> {
    let growth = growth_constant(sys);
    let range = degree_constant_base_lengths(sys.k());
    let table = MinDegreeTable::new(sys, *range.end())?;
    let degree_constant = range
        .map(|m| {
            let d = table.get(m).expect("base case present");
            (ln_big(d) - m as f64 * growth.ln()).exp()
        })
        .fold(f64::INFINITY, f64::min);
    Ok(RateInfo {
        q: sys.q(),
        k: sys.k(),
        growth,
        rate: growth.ln() / f64::from(sys.q()).ln(),
        degree_constant,
    })
}

/// Parameters of an `(ℓ, m)` finite-state encoder.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FseParams {
    pub sys: DupSystem,
    pub ell: usize,
    pub m: usize,
    /// Target gap to the asymptotic rate, when the parameters were derived from one.
    pub epsilon: Option<f64>,
}

impl FseParams {
    /// Validates `ℓ ≥ 1`, `m ≥ 2k-1` and `q^ℓ ≤ Δ_{≤k}(m,q)`.
    pub fn new(sys: DupSystem, ell: usize, m: usize) -> Result<Self> {
        let min_m = (2 * sys.k() - 1).max(min_degree_base_start(sys.k()));
        if ell == 0 {
            return invalid("ell must be at least 1");
        }
        if m < min_m {
            return invalid(format!("m must be at least {min_m} for k = {}", sys.k()));
        }
        let labels = BigUint::from(sys.q()).pow(ell as u32);
        let min_degree = min_out_degree(m, sys)?;
        if labels > min_degree {
            return invalid(format!(
                "q^ell = {labels} exceeds the minimum out-degree Δ({m}) = {min_degree}"
            ));
        }
        Ok(Self {
            sys,
            ell,
            m,
            epsilon: None,
        })
    }

    pub fn rate(&self) -> f64 {
        self.ell as f64 / self.m as f64
    }

    /// `q^ℓ`, the number of labelled edges leaving each state.
    pub fn labels(&self) -> BigUint {
        BigUint::from(self.sys.q()).pow(self.ell as u32)
    }
}

/// Chooses `(ℓ, m)` so that the encoder rate is within `epsilon` of the asymptotic rate.
pub fn choose_params(epsilon: f64, sys: DupSystem) -> Result<FseParams> {
    let info = asymptotic_rate(sys)?;
    let c = info.rate;
    if !(epsilon > 0.0 && epsilon < c) {
        return invalid(format!("epsilon must lie in (0, {c:.6}), got {epsilon}"));
    }
    let log_constant = info.degree_constant.ln() / f64::from(sys.q()).ln();
    let ell0 = ((c - epsilon) * (c - log_constant) / epsilon)
        .ceil()
        .max(1.0) as usize;
    let min_m = (2 * sys.k() - 1).max(min_degree_base_start(sys.k()));
    // The closed form can undershoot the smallest state length for large
    // epsilon; then search upward for the first admissible pair.
    let mut found = None;
    'search: for ell in ell0..ell0 + 64 {
        let m0 = (((ell as f64 - log_constant) / c).ceil() as usize).max(min_m);
        let labels = BigUint::from(sys.q()).pow(ell as u32);
        let mut m = m0;
        while ell as f64 / m as f64 >= c - epsilon {
            if labels <= min_out_degree(m, sys)? {
                found = Some((ell, m));
                break 'search;
            }
            m += 1;
        }
    }
    let Some((ell, m)) = found else {
        return invalid(format!(
            "no admissible (ell, m) found for epsilon = {epsilon}"
        ));
    };
    let mut params = FseParams::new(sys, ell, m)?;
    params.epsilon = Some(epsilon);
    Ok(params)
}

/// Rate summaries for `k = 2` and `k = 3` over several alphabets.
pub fn rate_table(qs: impl IntoIterator<Item = u16>) -> Result<BTreeMap<(u16, usize), RateInfo>> {
    let mut out = BTreeMap::new();
    for q in qs {
        for k in [2, 3] {
            let sys = DupSystem::new(q, k)?;
            out.insert((q, k), asymptotic_rate(sys)?);
        }
    }
    Ok(out)
}
