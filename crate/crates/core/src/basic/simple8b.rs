//! Simple-8b: each 64-bit word holds a 4-bit selector in its top bits and 60
//! data bits. The selector fixes how many integers the word carries and how
//! many bits each one uses; values are packed low bits first.
//!
//! Encoding is greedy: the selectors are tried in increasing order and the
//! first one that fits the upcoming values wins. The two zero-run selectors
//! are used only for complete runs of 240 or 120 zeros. The last word of a
//! stream may be partially filled; the decoder stops after `n` values.

use crate::codec::BlockCodec;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default)]
pub struct Simple8b;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Selector {
    pub value: u8,
    pub ints_coded: u32,
    pub bits_per_int: u32,
}

const fn sel(value: u8, ints_coded: u32, bits_per_int: u32) -> Selector {
    Selector {
        value,
        ints_coded,
        bits_per_int,
    }
}

pub const SELECTORS: [Selector; 16] = [
    sel(0, 240, 0),
    sel(1, 120, 0),
    sel(2, 60, 1),
    sel(3, 30, 2),
    sel(4, 20, 3),
    sel(5, 15, 4),
    sel(6, 12, 5),
    sel(7, 10, 6),
    sel(8, 8, 7),
    sel(9, 7, 8),
    sel(10, 6, 10),
    sel(11, 5, 12),
    sel(12, 4, 15),
    sel(13, 3, 20),
    sel(14, 2, 30),
    sel(15, 1, 60),
];

pub const MAX_VALUE: u64 = (1 << 60) - 1;

/// Encodes values below 2^60 into 64-bit words.
pub fn simple8b_encode(values: &[u64]) -> Result<Vec<u64>> {
    if let Some(index) = values.iter().position(|&v| v > MAX_VALUE) {
        return Err(Error::InvalidArgument(format!(
            "value {} at index {index} does not fit in 60 bits",
            values[index]
        )));
    }
    let mut out = Vec::with_capacity(values.len() / 4 + 1);
    encode_generic(values, &mut out);
    Ok(out)
}

/// Decodes `n` values.
pub fn simple8b_decode(words: &[u64], n: usize) -> Result<Vec<u64>> {
    let mut out = vec![0u64; n];
    let used = decode_generic(words.iter().copied(), &mut out)?;
    debug_assert!(used <= words.len());
    Ok(out)
}

trait Value: Copy {
    fn widen(self) -> u64;
    fn narrow(v: u64) -> Option<Self>;
}

impl Value for u32 {
    #[inline]
    fn widen(self) -> u64 {
        self as u64
    }
    #[inline]
    fn narrow(v: u64) -> Option<Self> {
        u32::try_from(v).ok()
    }
}

impl Value for u64 {
    #[inline]
    fn widen(self) -> u64 {
        self
    }
    #[inline]
    fn narrow(v: u64) -> Option<Self> {
        Some(v)
    }
}

#[inline]
fn bits64(v: u64) -> u32 {
    64 - v.leading_zeros()
}

fn encode_generic<T: Value>(values: &[T], out: &mut Vec<u64>) {
    let mut i = 0;
    let mut widths = [0u32; 60];
    while i < values.len() {
        let rest = &values[i..];
        if rest.len() >= 240 && rest[..240].iter().all(|v| v.widen() == 0) {
            out.push(0);
            i += 240;
            continue;
        }
        if rest.len() >= 120 && rest[..120].iter().all(|v| v.widen() == 0) {
            out.push(1 << 60);
            i += 120;
            continue;
        }
        // running maximum of the bit widths of the next (up to) 60 values
        let look = rest.len().min(60);
        let mut acc = 0;
        for (slot, v) in widths[..look].iter_mut().zip(rest) {
            acc = acc.max(bits64(v.widen()));
            *slot = acc;
        }
        let chosen = SELECTORS[2..]
            .iter()
            .find(|s| {
                let count = (s.ints_coded as usize).min(rest.len());
                widths[count - 1] <= s.bits_per_int
            })
            .expect("selector 15 fits any 60-bit value");
        let count = (chosen.ints_coded as usize).min(rest.len());
        let b = chosen.bits_per_int;
        let mut word = (chosen.value as u64) << 60;
        for (j, v) in rest[..count].iter().enumerate() {
            word |= v.widen() << (j as u32 * b);
        }
        out.push(word);
        i += count;
    }
}

#[inline(always)]
fn unpack_word<T: Value, const B: u32, const COUNT: usize>(data: u64, out: &mut [T]) -> Result<()> {
    let mask = (1u64 << B) - 1;
    for (j, slot) in out.iter_mut().enumerate().take(COUNT) {
        *slot = T::narrow((data >> (j as u32 * B)) & mask).ok_or_else(too_wide)?;
    }
    Ok(())
}

fn too_wide() -> Error {
    Error::corrupt("simple-8b value exceeds 32 bits")
}

/// Returns the number of 64-bit words consumed.
fn decode_generic<T: Value, I: Iterator<Item = u64>>(mut words: I, out: &mut [T]) -> Result<usize> {
    let mut pos = 0;
    let mut used = 0;
    while pos < out.len() {
        let word = words.next().ok_or(Error::Truncated)?;
        used += 1;
        let selector = (word >> 60) as usize;
        let count = (SELECTORS[selector].ints_coded as usize).min(out.len() - pos);
        let dst = &mut out[pos..pos + count];
        let data = word & MAX_VALUE;
        match selector {
            0 | 1 => {
                let zero = T::narrow(0).unwrap();
                dst.fill(zero);
            }
            2 => unpack_word::<T, 1, 60>(data, dst)?,
            3 => unpack_word::<T, 2, 30>(data, dst)?,
            4 => unpack_word::<T, 3, 20>(data, dst)?,
            5 => unpack_word::<T, 4, 15>(data, dst)?,
            6 => unpack_word::<T, 5, 12>(data, dst)?,
            7 => unpack_word::<T, 6, 10>(data, dst)?,
            8 => unpack_word::<T, 7, 8>(data, dst)?,
            9 => unpack_word::<T, 8, 7>(data, dst)?,
            10 => unpack_word::<T, 10, 6>(data, dst)?,
            11 => unpack_word::<T, 12, 5>(data, dst)?,
            12 => unpack_word::<T, 15, 4>(data, dst)?,
            13 => unpack_word::<T, 20, 3>(data, dst)?,
            14 => unpack_word::<T, 30, 2>(data, dst)?,
            _ => unpack_word::<T, 60, 1>(data, dst)?,
        }
        pos += count;
    }
    Ok(used)
}

/// Encodes 32-bit values, appending each 64-bit word as two 32-bit words
/// (low half first).
pub(crate) fn encode_u32_words(values: &[u32], out: &mut Vec<u32>) {
    let mut words = Vec::with_capacity(values.len() / 4 + 1);
    encode_generic(values, &mut words);
    out.extend(words.iter().flat_map(|&w| [w as u32, (w >> 32) as u32]));
}

/// Inverse of [`encode_u32_words`]; returns the number of 32-bit words used.
pub(crate) fn decode_u32_words(input: &[u32], out: &mut [u32]) -> Result<usize> {
    let pairs = input
        .chunks_exact(2)
        .map(|p| p[0] as u64 | (p[1] as u64) << 32);
    Ok(2 * decode_generic(pairs, out)?)
}

impl BlockCodec for Simple8b {
    fn block_multiple(&self) -> usize {
        1
    }

    fn encode(&self, input: &[u32], out: &mut Vec<u32>) -> Result<()> {
        encode_u32_words(input, out);
        Ok(())
    }

    fn decode(&self, input: &[u32], out: &mut [u32]) -> Result<usize> {
        decode_u32_words(input, out)
    }
}
