//! varint-G8IU: groups of one descriptor byte followed by eight data bytes.
//!
//! Integers are written little-endian with the minimal number of bytes (1 to
//! 4) and never straddle two groups. Descriptor bit `i` describes data byte
//! `i` and is 0 exactly when that byte ends an integer; unused trailing bytes
//! have their bit set and are zero.

use crate::codec::{append_bytes, words_as_bytes, BlockCodec};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, Default)]
pub struct G8iu;

const GROUP: usize = 9;

#[inline]
fn byte_len(x: u32) -> usize {
    match x {
        0..=0xFF => 1,
        0x100..=0xFFFF => 2,
        0x1_0000..=0xFF_FFFF => 3,
        _ => 4,
    }
}

pub fn g8iu_encode(values: &[u32]) -> Vec<u8> {
    let mut out = Vec::with_capacity(values.len() * 3);
    let mut i = 0;
    while i < values.len() {
        let base = out.len();
        out.resize(base + GROUP, 0);
        let mut descriptor = 0xFFu8;
        let mut used = 0;
        while let Some(&v) = values.get(i) {
            let len = byte_len(v);
            if used + len > 8 {
                break;
            }
            let data = base + 1 + used;
            out[data..data + len].copy_from_slice(&v.to_le_bytes()[..len]);
            used += len;
            descriptor &= !(1 << (used - 1));
            i += 1;
        }
        out[base] = descriptor;
    }
    out
}

pub fn g8iu_decode(bytes: &[u8], n: usize) -> Result<Vec<u32>> {
    let mut out = vec![0u32; n];
    decode_into(bytes, &mut out)?;
    Ok(out)
}

/// Fills `out` and returns the number of bytes consumed (a multiple of 9).
fn decode_into(bytes: &[u8], out: &mut [u32]) -> Result<usize> {
    let mut pos = 0;
    let mut produced = 0;
    while produced < out.len() {
        let group = bytes.get(pos..pos + GROUP).ok_or(Error::Truncated)?;
        let descriptor = group[0];
        let data = &group[1..];
        let mut start = 0;
        let mut ends = !descriptor;
        while ends != 0 && produced < out.len() {
            let end = ends.trailing_zeros() as usize;
            ends &= ends - 1;
            let len = end + 1 - start;
            if len > 4 {
                return Err(Error::corrupt("varint-G8IU integer longer than 4 bytes"));
            }
            let mut le = [0u8; 4];
            le[..len].copy_from_slice(&data[start..=end]);
            out[produced] = u32::from_le_bytes(le);
            produced += 1;
            start = end + 1;
        }
        pos += GROUP;
    }
    Ok(pos)
}

impl BlockCodec for G8iu {
    fn block_multiple(&self) -> usize {
        1
    }

    fn encode(&self, input: &[u32], out: &mut Vec<u32>) -> Result<()> {
        append_bytes(out, &g8iu_encode(input));
        Ok(())
    }

    fn decode(&self, input: &[u32], out: &mut [u32]) -> Result<usize> {
        let used = decode_into(&words_as_bytes(input), out)?;
        Ok(used.div_ceil(4))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Reads integers one byte at a time following the descriptor bits.
    fn reference_decode(bytes: &[u8], n: usize) -> Vec<u32> {
        let mut out = Vec::new();
        for group in bytes.chunks(GROUP) {
            let mut value = 0u32;
            let mut shift = 0;
            for k in 0..8 {
                if shift < 32 {
                    value |= (group[1 + k] as u32) << shift;
                }
                shift += 8;
                if group[0] >> k & 1 == 0 {
                    out.push(value);
                    value = 0;
                    shift = 0;
                }
            }
        }
        out.truncate(n);
        out
    }

    #[test]
    fn descriptor_example() {
        let bytes = g8iu_encode(&[1 << 15, 1 << 23, 1 << 7]);
        assert_eq!(
            bytes,
            [0xCD, 0x00, 0x80, 0x00, 0x00, 0x80, 0x80, 0x00, 0x00]
        );
        assert_eq!(g8iu_decode(&bytes, 3).unwrap(), [1 << 15, 1 << 23, 1 << 7]);
    }

    #[test]
    fn eight_one_byte_values() {
        let bytes = g8iu_encode(&[1; 8]);
        assert_eq!(bytes, [0x00, 1, 1, 1, 1, 1, 1, 1, 1]);
    }

    #[test]
    fn fourth_value_starts_next_group() {
        let v = [1 << 15, 1 << 23, 1 << 7, 1 << 31];
        let bytes = g8iu_encode(&v);
        assert_eq!(bytes.len(), 18);
        assert_eq!(bytes[9], 0xF7);
        assert_eq!(g8iu_decode(&bytes, 4).unwrap(), v);
    }

    #[test]
    fn decode_errors() {
        assert!(matches!(
            g8iu_decode(&[0x00, 1, 1], 1),
            Err(Error::Truncated)
        ));
        // five bytes before the first terminator
        assert!(g8iu_decode(&[0b1110_1111, 0, 0, 0, 0, 0, 0, 0, 0], 1).is_err());
    }

    proptest! {
        #[test]
        fn matches_reference(v in prop::collection::vec(any::<u32>().prop_map(|x| x >> (x % 32)), 0..200)) {
            let bytes = g8iu_encode(&v);
            prop_assert_eq!(g8iu_decode(&bytes, v.len()).unwrap(), v.clone());
            prop_assert_eq!(reference_decode(&bytes, v.len()), v.clone());
            // every group but the last holds between 2 and 8 integers
            let groups = bytes.len() / GROUP;
            for (g, group) in bytes.chunks(GROUP).enumerate() {
                let count = (!group[0]).count_ones();
                prop_assert!(count <= 8);
                if g + 1 < groups {
                    prop_assert!(count >= 2);
                }
            }
        }
    }
}
