//! SimplePFOR, FastPFOR and SIMD-FastPFOR.
//!
//! Every 128-integer block gets its own width `b`; values wider than `b` are
//! exceptions whose high bits are collected for the whole page and compressed
//! in bulk. A page (at most 2^16 integers) is laid out as
//!
//! ```text
//! u32        offset, in words from the page start, of the byte-array length
//! [pad]      SimdFast only: zero words up to a 16-byte boundary
//! blocks     low b bits of each block (4 x scalar-32 groups, or vertical-128)
//! u32        byte-array length in bytes
//! bytes      per block: b, maxbits, and if maxbits > b: count, positions...
//!            zero-padded to a multiple of 4
//! exceptions Simple: u32 count, Simple-8b words
//!            Fast/SimdFast: u32 bitset of non-empty arrays (bit w-1 for
//!            width w), then per array: u32 count, [pad], packed values
//! ```

use crate::basic::simple8b;
use crate::bitpack::{
    bits, mask, pack128_masked_into, pack32_masked_into, unpack128_into, unpack32_into, BitWidth,
};
use crate::codec::{append_bytes, words_as_bytes, BlockCodec};
use crate::error::{Error, Result};

pub const BLOCK: usize = 128;
pub const PAGE: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FastPforVariant {
    /// Exception high bits coded with Simple-8b.
    Simple,
    /// Width-indexed exception arrays, scalar bit packing.
    Fast,
    /// Width-indexed exception arrays, vertical bit packing, 16-byte aligned.
    SimdFast,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct FastPfor(pub FastPforVariant);

/// Count of values per bit length 0..=32.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Histogram33 {
    pub counts: [u32; 33],
}

impl Histogram33 {
    pub fn of(values: &[u32]) -> Self {
        let mut counts = [0u32; 33];
        for &v in values {
            counts[bits(v) as usize] += 1;
        }
        Histogram33 { counts }
    }

    pub fn total(&self) -> u32 {
        self.counts.iter().sum()
    }

    /// Largest bit length present.
    pub fn max_bits(&self) -> u32 {
        self.counts.iter().rposition(|&c| c > 0).unwrap_or(0) as u32
    }

    /// Number of values wider than `b` bits.
    pub fn exceptions(&self, b: u32) -> u32 {
        self.counts[b as usize + 1..].iter().sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WidthChoice {
    pub b: u32,
    pub exceptions: u32,
    pub maxbits: u32,
}

/// Estimated cost in bits of coding a block at width `b`: every value uses `b`
/// bits and every exception one position byte plus its `maxbits - b` high
/// bits.
pub fn fastpfor_cost(h: &Histogram33, block_len: usize, b: u32) -> u64 {
    let maxbits = h.max_bits();
    let c = h.exceptions(b) as u64;
    b as u64 * block_len as u64 + (8 + maxbits.saturating_sub(b)) as u64 * c
}

/// Picks the width minimizing [`fastpfor_cost`], preferring larger widths on
/// ties.
pub fn choose_width_fastpfor(h: &Histogram33, block_len: usize) -> WidthChoice {
    let maxbits = h.max_bits();
    let mut best_b = maxbits;
    let mut best_cost = maxbits as u64 * block_len as u64;
    let mut c = 0u32;
    for b in (0..maxbits).rev() {
        c += h.counts[b as usize + 1];
        let cost = b as u64 * block_len as u64 + (8 + maxbits - b) as u64 * c as u64;
        if cost < best_cost {
            best_cost = cost;
            best_b = b;
        }
    }
    WidthChoice {
        b: best_b,
        exceptions: h.exceptions(best_b),
        maxbits,
    }
}

/// Per-block metadata as stored in the page byte array.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockMeta {
    pub b: BitWidth,
    pub maxbits: BitWidth,
    pub positions: Vec<u8>,
}

impl BlockMeta {
    /// Chooses the width for `block` (at most 256 values) and records the
    /// exception positions.
    pub fn for_block(block: &[u32]) -> Self {
        let h = Histogram33::of(block);
        let choice = choose_width_fastpfor(&h, block.len());
        let positions = block
            .iter()
            .enumerate()
            .filter(|(_, &v)| bits(v) > choice.b)
            .map(|(i, _)| i as u8)
            .collect();
        BlockMeta {
            b: BitWidth::new(choice.b).expect("width <= 32"),
            maxbits: BitWidth::new(choice.maxbits).expect("width <= 32"),
            positions,
        }
    }

    /// Serialized form: `[b, maxbits]` or `[b, maxbits, c, positions...]`.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = vec![self.b.get() as u8, self.maxbits.get() as u8];
        if self.maxbits > self.b {
            out.push(self.positions.len() as u8);
            out.extend_from_slice(&self.positions);
        }
        out
    }

    /// High bits (`value >> b`) of the exceptions of `block`.
    pub fn exception_highs(&self, block: &[u32]) -> Vec<u32> {
        self.positions
            .iter()
            .map(|&p| block[p as usize] >> self.b.get())
            .collect()
    }
}

pub fn fastpfor_encode(deltas: &[u32], variant: FastPforVariant) -> Result<Vec<u32>> {
    let mut out = Vec::new();
    FastPfor(variant).encode(deltas, &mut out)?;
    Ok(out)
}

pub fn fastpfor_decode(words: &[u32], n: usize, variant: FastPforVariant) -> Result<Vec<u32>> {
    let mut out = vec![0; n];
    FastPfor(variant).decode(words, &mut out)?;
    Ok(out)
}

fn pad_to_16(out: &mut Vec<u32>, page_start: usize) {
    while !(out.len() - page_start).is_multiple_of(4) {
        out.push(0);
    }
}

impl FastPfor {
    fn simd(&self) -> bool {
        self.0 == FastPforVariant::SimdFast
    }

    fn encode_page(&self, input: &[u32], out: &mut Vec<u32>) {
        let start = out.len();
        out.push(0);
        if self.simd() {
            pad_to_16(out, start);
        }
        let mut bytes = Vec::with_capacity(input.len() / BLOCK * 8);
        // exception high bits, indexed by maxbits - b (1..=32)
        let mut highs: Vec<Vec<u32>> = vec![Vec::new(); 33];
        let mut flat = Vec::new();
        for block in input.chunks_exact(BLOCK) {
            let h = Histogram33::of(block);
            let WidthChoice {
                b,
                exceptions,
                maxbits,
            } = choose_width_fastpfor(&h, BLOCK);
            bytes.push(b as u8);
            bytes.push(maxbits as u8);
            if maxbits > b {
                bytes.push(exceptions as u8);
                let slot = &mut highs[(maxbits - b) as usize];
                for (i, &v) in block.iter().enumerate() {
                    if bits(v) > b {
                        bytes.push(i as u8);
                        slot.push(v >> b);
                        flat.push(v >> b);
                    }
                }
            }
            let pos = out.len();
            out.resize(pos + 4 * b as usize, 0);
            if self.simd() {
                pack128_masked_into(block, b, &mut out[pos..]);
            } else {
                for (k, group) in block.chunks_exact(32).enumerate() {
                    pack32_masked_into(group, b, &mut out[pos + k * b as usize..]);
                }
            }
        }
        out[start] = (out.len() - start) as u32;
        out.push(bytes.len() as u32);
        append_bytes(out, &bytes);

        match self.0 {
            FastPforVariant::Simple => {
                out.push(flat.len() as u32);
                simple8b::encode_u32_words(&flat, out);
            }
            FastPforVariant::Fast | FastPforVariant::SimdFast => {
                let bitset = (1..=32u32)
                    .filter(|&w| !highs[w as usize].is_empty())
                    .fold(0u32, |acc, w| acc | 1 << (w - 1));
                out.push(bitset);
                for w in 1..=32u32 {
                    let values = &highs[w as usize];
                    if values.is_empty() {
                        continue;
                    }
                    out.push(values.len() as u32);
                    if self.simd() {
                        pad_to_16(out, start);
                        for group in values.chunks(128) {
                            let mut buf = [0u32; 128];
                            buf[..group.len()].copy_from_slice(group);
                            let pos = out.len();
                            out.resize(pos + 4 * w as usize, 0);
                            pack128_masked_into(&buf, w, &mut out[pos..]);
                        }
                    } else {
                        for group in values.chunks(32) {
                            let mut buf = [0u32; 32];
                            buf[..group.len()].copy_from_slice(group);
                            let pos = out.len();
                            out.resize(pos + w as usize, 0);
                            pack32_masked_into(&buf, w, &mut out[pos..]);
                        }
                    }
                }
            }
        }
    }

    fn decode_page(&self, input: &[u32], out: &mut [u32]) -> Result<usize> {
        let n = out.len();
        let header = *input.first().ok_or(Error::Truncated)? as usize;
        let first_block = if self.simd() { 4 } else { 1 };
        if header < first_block || header >= input.len() {
            return Err(Error::corrupt(format!(
                "byte array offset {header} out of range"
            )));
        }
        let byte_len = input[header] as usize;
        let byte_words = byte_len.div_ceil(4);
        let byte_region = input
            .get(header + 1..header + 1 + byte_words)
            .ok_or_else(|| Error::corrupt("byte array overruns the page"))?;
        let byte_view = words_as_bytes(byte_region);
        let meta = &byte_view[..byte_len];

        // exception section
        let mut pos = header + 1 + byte_words;
        let mut highs: Vec<Vec<u32>> = vec![Vec::new(); 33];
        let mut flat = Vec::new();
        match self.0 {
            FastPforVariant::Simple => {
                let count = *input.get(pos).ok_or(Error::Truncated)? as usize;
                pos += 1;
                if count > n {
                    return Err(Error::corrupt("more exceptions than integers"));
                }
                flat.resize(count, 0);
                pos += simple8b::decode_u32_words(&input[pos..], &mut flat)?;
            }
            FastPforVariant::Fast | FastPforVariant::SimdFast => {
                let bitset = *input.get(pos).ok_or(Error::Truncated)?;
                pos += 1;
                let group = if self.simd() { 128 } else { 32 };
                for w in 1..=32u32 {
                    if bitset & (1 << (w - 1)) == 0 {
                        continue;
                    }
                    let count = *input.get(pos).ok_or(Error::Truncated)? as usize;
                    pos += 1;
                    if count > n {
                        return Err(Error::corrupt("more exceptions than integers"));
                    }
                    if self.simd() {
                        pos = pos.next_multiple_of(4);
                    }
                    let groups = count.div_ceil(group);
                    let words = groups * (group / 32) * w as usize;
                    let src = input.get(pos..pos + words).ok_or(Error::Truncated)?;
                    let values = &mut highs[w as usize];
                    values.resize(groups * group, 0);
                    if self.simd() {
                        for (g, dst) in values.chunks_exact_mut(128).enumerate() {
                            unpack128_into(&src[g * 4 * w as usize..], w, dst);
                        }
                    } else {
                        for (g, dst) in values.chunks_exact_mut(32).enumerate() {
                            unpack32_into(&src[g * w as usize..], w, dst);
                        }
                    }
                    values.truncate(count);
                    pos += words;
                }
            }
        }
        let end = pos;

        // blocks
        let mut cursor = 0usize;
        let mut next_byte = || -> Result<u8> {
            let b = *meta
                .get(cursor)
                .ok_or_else(|| Error::corrupt("byte array exhausted"))?;
            cursor += 1;
            Ok(b)
        };
        let mut taken = [0usize; 33];
        let mut flat_taken = 0usize;
        let mut wpos = first_block;
        for block in out.chunks_exact_mut(BLOCK) {
            let b = next_byte()? as u32;
            let maxbits = next_byte()? as u32;
            if b > 32 || maxbits > 32 || b > maxbits {
                return Err(Error::corrupt(format!(
                    "bad block widths b={b} maxbits={maxbits}"
                )));
            }
            let words = 4 * b as usize;
            if wpos + words > header {
                return Err(Error::corrupt("packed blocks overrun the byte array"));
            }
            let src = &input[wpos..wpos + words];
            if self.simd() {
                unpack128_into(src, b, block);
            } else {
                for (k, group) in block.chunks_exact_mut(32).enumerate() {
                    unpack32_into(&src[k * b as usize..], b, group);
                }
            }
            wpos += words;
            if maxbits > b {
                let c = next_byte()? as usize;
                let delta = (maxbits - b) as usize;
                for _ in 0..c {
                    let p = next_byte()? as usize;
                    if p >= BLOCK {
                        return Err(Error::corrupt(format!(
                            "exception position {p} out of range"
                        )));
                    }
                    let high = match self.0 {
                        FastPforVariant::Simple => {
                            let v = flat.get(flat_taken).copied();
                            flat_taken += 1;
                            v
                        }
                        _ => {
                            let v = highs[delta].get(taken[delta]).copied();
                            taken[delta] += 1;
                            v
                        }
                    }
                    .ok_or_else(|| Error::corrupt("exception array underflow"))?;
                    if high > mask(delta as u32) {
                        return Err(Error::corrupt("exception value wider than recorded"));
                    }
                    block[p] |= high << b;
                }
            }
        }
        if wpos != header {
            return Err(Error::corrupt(
                "byte array offset does not follow the packed blocks",
            ));
        }
        Ok(end)
    }
}

impl BlockCodec for FastPfor {
    fn block_multiple(&self) -> usize {
        BLOCK
    }

    fn encode(&self, input: &[u32], out: &mut Vec<u32>) -> Result<()> {
        if !input.len().is_multiple_of(BLOCK) {
            return Err(Error::InvalidArgument(format!(
                "patched coding needs a multiple of {BLOCK} integers, got {}",
                input.len()
            )));
        }
        for page in input.chunks(PAGE) {
            self.encode_page(page, out);
        }
        Ok(())
    }

    fn decode(&self, input: &[u32], out: &mut [u32]) -> Result<usize> {
        if !out.len().is_multiple_of(BLOCK) {
            return Err(Error::InvalidArgument(format!(
                "patched coding needs a multiple of {BLOCK} integers, got {}",
                out.len()
            )));
        }
        let mut pos = 0;
        for page in out.chunks_mut(PAGE) {
            pos += self.decode_page(&input[pos..], page)?;
        }
        Ok(pos)
    }
}
