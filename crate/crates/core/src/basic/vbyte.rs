//! Variable Byte: seven data bits per byte, least significant group first.
//! The high bit is set only on the last byte of each integer.

use crate::codec::{append_bytes, words_as_bytes, BlockCodec};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default)]
pub struct VByte;

/// Number of bytes used for `x`.
#[inline]
pub fn encoded_len(x: u32) -> usize {
    match x {
        0..=0x7F => 1,
        0x80..=0x3FFF => 2,
        0x4000..=0x1F_FFFF => 3,
        0x20_0000..=0xFFF_FFFF => 4,
        _ => 5,
    }
}

pub fn vbyte_encode(values: &[u32]) -> Vec<u8> {
    let mut out = Vec::with_capacity(values.len() * 2);
    encode_into(values, &mut out);
    out
}

pub fn vbyte_decode(bytes: &[u8], n: usize) -> Result<Vec<u32>> {
    let mut out = vec![0u32; n];
    decode_into(bytes, &mut out)?;
    Ok(out)
}

pub(crate) fn encode_into(values: &[u32], out: &mut Vec<u8>) {
    for &v in values {
        let mut v = v;
        while v >= 0x80 {
            out.push((v & 0x7F) as u8);
            v >>= 7;
        }
        out.push(v as u8 | 0x80);
    }
}

/// Fills `out` from `bytes` and returns the number of bytes consumed.
pub(crate) fn decode_into(bytes: &[u8], out: &mut [u32]) -> Result<usize> {
    let mut pos = 0;
    for slot in out.iter_mut() {
        let mut value = 0u32;
        let mut shift = 0;
        loop {
            let &byte = bytes.get(pos).ok_or(Error::Truncated)?;
            pos += 1;
            let group = (byte & 0x7F) as u32;
            if shift == 28 && group > 0xF {
                return Err(Error::corrupt("variable byte integer overflows 32 bits"));
            }
            value |= group << shift;
            if byte & 0x80 != 0 {
                break;
            }
            shift += 7;
            if shift > 28 {
                return Err(Error::corrupt("variable byte integer longer than 5 bytes"));
            }
        }
        *slot = value;
    }
    Ok(pos)
}

impl BlockCodec for VByte {
    fn block_multiple(&self) -> usize {
        1
    }

    fn encode(&self, input: &[u32], out: &mut Vec<u32>) -> Result<()> {
        let mut bytes = Vec::with_capacity(input.len() * 2);
        encode_into(input, &mut bytes);
        append_bytes(out, &bytes);
        Ok(())
    }

    fn decode(&self, input: &[u32], out: &mut [u32]) -> Result<usize> {
        let used = decode_into(&words_as_bytes(input), out)?;
        Ok(used.div_ceil(4))
    }
}
