//! Binary packing with meta-block descriptors.
//!
//! BP32 groups four 32-integer blocks behind one descriptor word whose byte
//! `i` is the width of block `i`. SIMD-BP128 groups up to sixteen 128-integer
//! blocks, packed in the vertical layout, behind a 16-byte descriptor; a short
//! final meta-block still carries the full descriptor with zero widths for the
//! absent blocks.

use crate::bitpack::{
    max_bitwidth, pack128_trusted, pack32_trusted, unpack128_into, unpack32_into,
};
use crate::codec::BlockCodec;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default)]
pub struct Bp32;

#[derive(Debug, Clone, Copy, Default)]
pub struct SimdBp128;

fn check_multiple(n: usize) -> Result<()> {
    if !n.is_multiple_of(128) {
        return Err(Error::InvalidArgument(format!(
            "binary packing needs a multiple of 128 integers, got {n}"
        )));
    }
    Ok(())
}

fn width_byte(desc: &[u32], i: usize) -> Result<u32> {
    let b = (desc[i / 4] >> (8 * (i % 4))) & 0xFF;
    if b > 32 {
        return Err(Error::corrupt(format!("block width {b} exceeds 32")));
    }
    Ok(b)
}

pub fn bp32_encode(deltas: &[u32]) -> Result<Vec<u32>> {
    let mut out = Vec::new();
    Bp32.encode(deltas, &mut out)?;
    Ok(out)
}

pub fn bp32_decode(words: &[u32], n: usize) -> Result<Vec<u32>> {
    let mut out = vec![0; n];
    Bp32.decode(words, &mut out)?;
    Ok(out)
}

pub fn simdbp128_encode(deltas: &[u32]) -> Result<Vec<u32>> {
    let mut out = Vec::new();
    SimdBp128.encode(deltas, &mut out)?;
    Ok(out)
}

pub fn simdbp128_decode(words: &[u32], n: usize) -> Result<Vec<u32>> {
    let mut out = vec![0; n];
    SimdBp128.decode(words, &mut out)?;
    Ok(out)
}

impl BlockCodec for Bp32 {
    fn block_multiple(&self) -> usize {
        128
    }

    fn encode(&self, input: &[u32], out: &mut Vec<u32>) -> Result<()> {
        check_multiple(input.len())?;
        for meta in input.chunks_exact(128) {
            let mut widths = [0u32; 4];
            for (w, block) in widths.iter_mut().zip(meta.chunks_exact(32)) {
                *w = max_bitwidth(block).get();
            }
            out.push(widths[0] | widths[1] << 8 | widths[2] << 16 | widths[3] << 24);
            let start = out.len();
            out.resize(start + widths.iter().sum::<u32>() as usize, 0);
            let mut pos = start;
            for (&b, block) in widths.iter().zip(meta.chunks_exact(32)) {
                pack32_trusted(block, b, &mut out[pos..]);
                pos += b as usize;
            }
        }
        Ok(())
    }

    fn decode(&self, input: &[u32], out: &mut [u32]) -> Result<usize> {
        check_multiple(out.len())?;
        let mut pos = 0;
        for meta in out.chunks_exact_mut(128) {
            let desc = input.get(pos..pos + 1).ok_or(Error::Truncated)?;
            pos += 1;
            for (i, block) in meta.chunks_exact_mut(32).enumerate() {
                let b = width_byte(desc, i)? as usize;
                let src = input.get(pos..pos + b).ok_or(Error::Truncated)?;
                unpack32_into(src, b as u32, block);
                pos += b;
            }
        }
        Ok(pos)
    }
}

impl BlockCodec for SimdBp128 {
    fn block_multiple(&self) -> usize {
        128
    }

    fn encode(&self, input: &[u32], out: &mut Vec<u32>) -> Result<()> {
        check_multiple(input.len())?;
        for meta in input.chunks(2048) {
            let mut widths = [0u32; 16];
            for (w, block) in widths.iter_mut().zip(meta.chunks_exact(128)) {
                *w = max_bitwidth(block).get();
            }
            for quad in widths.chunks_exact(4) {
                out.push(quad[0] | quad[1] << 8 | quad[2] << 16 | quad[3] << 24);
            }
            let start = out.len();
            out.resize(start + 4 * widths.iter().sum::<u32>() as usize, 0);
            let mut pos = start;
            for (&b, block) in widths.iter().zip(meta.chunks_exact(128)) {
                pack128_trusted(block, b, &mut out[pos..]);
                pos += 4 * b as usize;
            }
        }
        Ok(())
    }

    fn decode(&self, input: &[u32], out: &mut [u32]) -> Result<usize> {
        check_multiple(out.len())?;
        let mut pos = 0;
        for meta in out.chunks_mut(2048) {
            let desc = input.get(pos..pos + 4).ok_or(Error::Truncated)?;
            pos += 4;
            let blocks = meta.len() / 128;
            for i in blocks..16 {
                if width_byte(desc, i)? != 0 {
                    return Err(Error::corrupt(
                        "width set for a block past the end of the data",
                    ));
                }
            }
            for (i, block) in meta.chunks_exact_mut(128).enumerate() {
                let b = width_byte(desc, i)? as usize;
                let src = input.get(pos..pos + 4 * b).ok_or(Error::Truncated)?;
                unpack128_into(src, b as u32, block);
                pos += 4 * b;
            }
        }
        Ok(pos)
    }
}
