//! Deterministic inputs shared by the benchmarks.

use irrcode_core::BigUint;

/// `count` ranks spread evenly over `1..=size`.
pub fn spread_ranks(size: &BigUint, count: u32) -> Vec<BigUint> {
    (1..=count)
        .map(|i| size * i / count)
        .map(|r| {
            if r == BigUint::from(0u8) {
                BigUint::from(1u8)
            } else {
                r
            }
        })
        .collect()
}

/// A message digit stream of length `len` over `Σ_q`, cycling through a fixed pattern.
pub fn pattern_digits(len: usize, q: u16) -> Vec<u8> {
    (0..len)
        .map(|i| ((i * 7 + i / 3) % usize::from(q)) as u8)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks_are_in_range() {
        let size = BigUint::from(10u8);
        let r = spread_ranks(&size, 4);
        assert_eq!(r.len(), 4);
        assert!(r.iter().all(|j| *j >= BigUint::from(1u8) && *j <= size));
        assert_eq!(r[3], size);
        assert!(pattern_digits(50, 3).iter().all(|&d| d < 3));
    }
}
