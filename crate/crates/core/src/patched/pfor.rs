//! PFOR: one bit width per page, exceptions chained through a linked list of
//! offsets stored in the packed slots, exception values kept as raw words.
//!
//! ```text
//! u32        b
//! per block: u32 marker = first exception position (128 = none) in the low
//!            16 bits, index of that exception in the table in the high 16
//!            4b words of packed slots (4 x scalar-32 groups)
//! u32        exception count
//! u32 x count exception values
//! ```
//!
//! A slot holding an exception stores the distance to the next exception of
//! the block minus one (0 for the last one). When that distance does not fit
//! in `b` bits a compulsory exception is inserted in between. The number of
//! exceptions in a block follows from consecutive table indices.

use crate::bitpack::{bits, mask, pack32_trusted, unpack32_into, BitWidth};
use crate::codec::BlockCodec;
use crate::error::{Error, Result};

use super::fastpfor::{Histogram33, BLOCK, PAGE};

#[derive(Debug, Clone, Copy, Default)]
pub struct Pfor;

const NO_EXCEPTION: u32 = BLOCK as u32;

/// Distance (in slots) that an offset of width `b` can span.
#[inline]
fn reach(b: u32) -> usize {
    1usize << b
}

/// Exception positions of a block at width `b`, including compulsory ones.
fn exception_positions(block: &[u32], b: u32, out: &mut Vec<usize>) {
    out.clear();
    let limit = mask(b);
    let step = reach(b);
    for (i, &v) in block.iter().enumerate() {
        if v > limit {
            if let Some(&prev) = out.last() {
                let mut prev = prev;
                while i - prev > step {
                    prev += step;
                    out.push(prev);
                }
            }
            out.push(i);
        }
    }
}

/// Number of exceptions (regular plus compulsory) that encoding `page` at
/// width `b` produces.
pub fn pfor_exception_count(page: &[u32], b: BitWidth) -> u64 {
    let limit = b.max_value();
    let step = reach(b.get()) as u64;
    let mut total = 0u64;
    for block in page.chunks(BLOCK) {
        let mut prev: Option<usize> = None;
        for (i, &v) in block.iter().enumerate() {
            if v > limit {
                if let Some(p) = prev {
                    total += (i - p - 1) as u64 / step;
                }
                total += 1;
                prev = Some(i);
            }
        }
    }
    total
}

/// Picks the page width from the bit-width histogram of the first 2^16
/// values.
///
/// The estimated cost of width `b` is `b + 32 * e` bits per value, where `e`
/// is the larger of the regular exception rate `r` and `(128 r - 1) / (r 2^b)`.
/// The second term stands in for compulsory exceptions, which the histogram
/// cannot see: it grows quickly once exceptions are too sparse for `b`-bit
/// offsets to chain them. Widths are scanned from 31 down to 0 against a
/// starting cost of 32; ties go to the smaller width.
pub fn pfor_choose_width(sample: &[u32]) -> BitWidth {
    let sample = &sample[..sample.len().min(PAGE)];
    if sample.is_empty() {
        return BitWidth::ZERO;
    }
    let h = Histogram33::of(sample);
    let n = sample.len() as f64;
    let mut best = (32.0, 32);
    let mut exceptions = 0u64;
    for b in (0..32u32).rev() {
        exceptions += h.counts[b as usize + 1] as u64;
        let mut rate = exceptions as f64 / n;
        if exceptions > 0 {
            let chained = (rate * BLOCK as f64 - 1.0) / (rate * reach(b) as f64);
            rate = rate.max(chained);
        }
        let cost = b as f64 + 32.0 * rate;
        if cost <= best.0 {
            best = (cost, b);
        }
    }
    BitWidth::new(best.1).expect("width <= 32")
}

pub fn pfor_encode(deltas: &[u32]) -> Result<Vec<u32>> {
    let mut out = Vec::new();
    Pfor.encode(deltas, &mut out)?;
    Ok(out)
}

pub fn pfor_decode(words: &[u32], n: usize) -> Result<Vec<u32>> {
    let mut out = vec![0; n];
    Pfor.decode(words, &mut out)?;
    Ok(out)
}

/// Encodes with a fixed width `b` instead of the cost-based choice.
pub fn pfor_encode_with_width(deltas: &[u32], b: BitWidth) -> Result<Vec<u32>> {
    if !deltas.len().is_multiple_of(BLOCK) {
        return Err(Error::InvalidArgument(format!(
            "patched coding needs a multiple of {BLOCK} integers, got {}",
            deltas.len()
        )));
    }
    let mut out = Vec::new();
    for page in deltas.chunks(PAGE) {
        encode_page_with_width(page, b.get(), &mut out);
    }
    Ok(out)
}

pub(crate) fn encode_page_with_width(page: &[u32], b: u32, out: &mut Vec<u32>) {
    debug_assert!(page.len() <= PAGE && page.len().is_multiple_of(BLOCK));
    out.push(b);
    let mut table = Vec::new();
    let mut positions = Vec::new();
    let mut slots = [0u32; BLOCK];
    for block in page.chunks_exact(BLOCK) {
        exception_positions(block, b, &mut positions);
        let first = positions.first().map_or(NO_EXCEPTION, |&p| p as u32);
        out.push(first | (table.len() as u32) << 16);
        slots.copy_from_slice(block);
        for (k, &p) in positions.iter().enumerate() {
            table.push(block[p]);
            slots[p] = match positions.get(k + 1) {
                Some(&next) => (next - p - 1) as u32,
                None => 0,
            };
        }
        let pos = out.len();
        out.resize(pos + 4 * b as usize, 0);
        for (k, group) in slots.chunks_exact(32).enumerate() {
            pack32_trusted(group, b, &mut out[pos + k * b as usize..]);
        }
    }
    out.push(table.len() as u32);
    out.extend_from_slice(&table);
}

fn decode_page(input: &[u32], out: &mut [u32]) -> Result<usize> {
    let b = *input.first().ok_or(Error::Truncated)?;
    if b > 32 {
        return Err(Error::corrupt(format!("page width {b} exceeds 32")));
    }
    let blocks = out.len() / BLOCK;
    let block_words = 1 + 4 * b as usize;
    let table_at = 1 + blocks * block_words;
    let count = *input.get(table_at).ok_or(Error::Truncated)? as usize;
    if count > out.len() {
        return Err(Error::corrupt("more exceptions than integers"));
    }
    let table = input
        .get(table_at + 1..table_at + 1 + count)
        .ok_or(Error::Truncated)?;

    for (k, block) in out.chunks_exact_mut(BLOCK).enumerate() {
        let at = 1 + k * block_words;
        let marker = input[at];
        let first = marker & 0xFFFF;
        let index = (marker >> 16) as usize;
        let next_index = if k + 1 < blocks {
            (input[at + block_words] >> 16) as usize
        } else {
            count
        };
        for (g, group) in block.chunks_exact_mut(32).enumerate() {
            unpack32_into(&input[at + 1 + g * b as usize..], b, group);
        }
        if next_index < index || next_index > count {
            return Err(Error::corrupt("exception table index out of range"));
        }
        let in_block = next_index - index;
        match (first, in_block) {
            (NO_EXCEPTION, 0) => {}
            (NO_EXCEPTION, _) | (_, 0) => {
                return Err(Error::corrupt(
                    "exception marker disagrees with table index",
                ));
            }
            (first, _) if first > NO_EXCEPTION => {
                return Err(Error::corrupt(format!(
                    "exception marker {first} out of range"
                )));
            }
            (first, _) => {
                let mut p = first as usize;
                for (j, &value) in table[index..next_index].iter().enumerate() {
                    if p >= BLOCK {
                        return Err(Error::corrupt("exception chain leaves the block"));
                    }
                    let offset = block[p] as usize;
                    block[p] = value;
                    if j + 1 < in_block {
                        p += offset + 1;
                    }
                }
            }
        }
    }
    Ok(table_at + 1 + count)
}

impl BlockCodec for Pfor {
    fn block_multiple(&self) -> usize {
        BLOCK
    }

    fn encode(&self, input: &[u32], out: &mut Vec<u32>) -> Result<()> {
        if !input.len().is_multiple_of(BLOCK) {
            return Err(Error::InvalidArgument(format!(
                "PFOR needs a multiple of {BLOCK} integers, got {}",
                input.len()
            )));
        }
        for page in input.chunks(PAGE) {
            let b = pfor_choose_width(page).get();
            encode_page_with_width(page, b, out);
        }
        Ok(())
    }

    fn decode(&self, input: &[u32], out: &mut [u32]) -> Result<usize> {
        if !out.len().is_multiple_of(BLOCK) {
            return Err(Error::InvalidArgument(format!(
                "PFOR needs a multiple of {BLOCK} integers, got {}",
                out.len()
            )));
        }
        let mut pos = 0;
        for page in out.chunks_mut(PAGE) {
            pos += decode_page(input.get(pos..).ok_or(Error::Truncated)?, page)?;
        }
        Ok(pos)
    }
}

/// Exception positions at width `b`, for inspection.
pub fn pfor_exception_positions(block: &[u32], b: BitWidth) -> Vec<usize> {
    let mut out = Vec::new();
    exception_positions(block, b.get(), &mut out);
    out
}

/// Regular exceptions only; used by callers that want the histogram view.
pub fn pfor_regular_exceptions(block: &[u32], b: BitWidth) -> usize {
    block.iter().filter(|&&v| bits(v) > b.get()).count()
}
