//! Framing of binary payloads and their conversion to message symbols.
//!
//! A framed payload is an 8-byte big-endian bit length followed by the bytes.
//! For the finite-state encoder the framed bytes are cut into 8-byte chunks
//! (the last one zero-padded), each written as a fixed number of base-`q`
//! digits. The duplication code instead carries a fixed number of bits per
//! codeword.

use irrcode_core::BigUint;
use thiserror::Error;

const HEADER: usize = 8;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PayloadError {
    #[error("payload is truncated: header announces {needed} bytes, {available} present")]
    Truncated { needed: u64, available: usize },
    #[error("digit group {0} does not encode a 64-bit chunk")]
    ChunkOverflow(usize),
    #[error("bit length {0} is not a whole number of bytes")]
    PartialByte(u64),
}

/// Bytes with a length header so padding can be stripped on the way back.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FramedPayload {
    pub data: Vec<u8>,
}

impl FramedPayload {
    pub fn new(data: Vec<u8>) -> Self {
        Self { data }
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let bits = self.data.len() as u64 * 8;
        let mut out = Vec::with_capacity(HEADER + self.data.len());
        out.extend_from_slice(&bits.to_be_bytes());
        out.extend_from_slice(&self.data);
        out
    }

    /// Reads a frame from the start of `bytes`; trailing padding is ignored.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self, PayloadError> {
        if bytes.len() < HEADER {
            return Err(PayloadError::Truncated {
                needed: HEADER as u64,
                available: bytes.len(),
            });
        }
        let bits = u64::from_be_bytes(bytes[..HEADER].try_into().unwrap());
        if bits % 8 != 0 {
            return Err(PayloadError::PartialByte(bits));
        }
        let len = bits / 8;
        let body = &bytes[HEADER..];
        if (body.len() as u64) < len {
            return Err(PayloadError::Truncated {
                needed: len,
                available: body.len(),
            });
        }
        Ok(Self::new(body[..len as usize].to_vec()))
    }
}

/// Smallest `D` with `q^D ≥ 2^64`.
pub fn digits_per_chunk(q: u16) -> usize {
    let mut d = 0;
    let mut p = 1u128;
    while p < 1u128 << 64 {
        p *= u128::from(q);
        d += 1;
    }
    d
}

pub fn bytes_to_digits(bytes: &[u8], q: u16) -> Vec<u8> {
    let d = digits_per_chunk(q);
    let q = u64::from(q);
    let mut out = Vec::with_capacity(bytes.len().div_ceil(8) * d);
    for chunk in bytes.chunks(8) {
        let mut buf = [0u8; 8];
        buf[..chunk.len()].copy_from_slice(chunk);
        let mut v = u64::from_be_bytes(buf);
        let start = out.len();
        out.resize(start + d, 0);
        for slot in out[start..].iter_mut().rev() {
            *slot = (v % q) as u8;
            v /= q;
        }
    }
    out
}

/// Inverse of [`bytes_to_digits`]; an incomplete trailing group is ignored.
pub fn digits_to_bytes(digits: &[u8], q: u16) -> Result<Vec<u8>, PayloadError> {
    let d = digits_per_chunk(q);
    let mut out = Vec::with_capacity(digits.len() / d * 8);
    for (i, group) in digits.chunks_exact(d).enumerate() {
        let v = group
            .iter()
            .fold(0u128, |acc, &x| acc * u128::from(q) + u128::from(x));
        let v = u64::try_from(v).map_err(|_| PayloadError::ChunkOverflow(i))?;
        out.extend_from_slice(&v.to_be_bytes());
    }
    Ok(out)
}

/// Splits `bytes` into big-endian groups of `width` bits, zero-padding the last one.
pub fn bytes_to_bit_groups(bytes: &[u8], width: usize) -> Vec<BigUint> {
    assert!(width > 0);
    let total = bytes.len() * 8;
    let bit = |i: usize| i < total && (bytes[i / 8] >> (7 - i % 8)) & 1 == 1;
    (0..total.div_ceil(width))
        .map(|g| {
            let mut v = BigUint::from(0u8);
            for i in g * width..(g + 1) * width {
                v <<= 1u8;
                if bit(i) {
                    v |= BigUint::from(1u8);
                }
            }
            v
        })
        .collect()
}

/// Inverse of [`bytes_to_bit_groups`]; trailing bits short of a byte are dropped.
pub fn bit_groups_to_bytes(groups: &[BigUint], width: usize) -> Vec<u8> {
    let mut out = Vec::with_capacity(groups.len() * width / 8);
    let mut acc = 0u8;
    let mut filled = 0;
    for g in groups {
        for i in (0..width as u64).rev() {
            acc = (acc << 1) | u8::from(g.bit(i));
            filled += 1;
            if filled == 8 {
                out.push(acc);
                acc = 0;
                filled = 0;
            }
        }
    }
    out
}
