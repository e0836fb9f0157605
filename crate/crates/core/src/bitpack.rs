//! Fixed-width bit packing of 32-integer (scalar) and 128-integer (vertical,
//! four interleaved lanes) groups.
//!
//! Value `i` of a group occupies bits `[i*b, (i+1)*b)` of the little-endian
//! concatenation of the output words, low bits first. A field that crosses a
//! word boundary keeps its low bits in the high bits of the earlier word.
//! Unused bits are always written as zero.
//!
//! Every width 0..=32 has its own monomorphized kernel; the per-width tables
//! below dispatch to them.

use crate::error::{Error, Result};

/// Number of bits per packed integer, in `0..=32`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct BitWidth(u8);

impl BitWidth {
    pub const ZERO: BitWidth = BitWidth(0);
    pub const MAX: BitWidth = BitWidth(32);

    pub fn new(bits: u32) -> Result<Self> {
        if bits > 32 {
            return Err(Error::Corrupt(format!("bit width {bits} exceeds 32")));
        }
        Ok(BitWidth(bits as u8))
    }

    /// Width needed to represent `value` (0 for 0).
    #[inline]
    pub fn of(value: u32) -> Self {
        BitWidth((32 - value.leading_zeros()) as u8)
    }

    #[inline]
    pub fn get(self) -> u32 {
        self.0 as u32
    }

    /// Largest value representable at this width.
    #[inline]
    pub fn max_value(self) -> u32 {
        mask(self.get())
    }
}

impl From<BitWidth> for u32 {
    fn from(w: BitWidth) -> u32 {
        w.get()
    }
}

#[inline]
pub(crate) const fn mask(bits: u32) -> u32 {
    if bits >= 32 {
        u32::MAX
    } else {
        (1u32 << bits) - 1
    }
}

/// Integer logarithm `ceil(log2(x + 1))`, i.e. the position of the highest set
/// bit plus one.
#[inline]
pub fn bits(x: u32) -> u32 {
    32 - x.leading_zeros()
}

/// Maximum of [`bits`] over `values`, computed from the bitwise or of all
/// values. Empty input yields width 0.
pub fn max_bitwidth(values: &[u32]) -> BitWidth {
    let acc = values.iter().fold(0u32, |acc, &v| acc | v);
    BitWidth::of(acc)
}

// ---------------------------------------------------------------------------
// scalar kernels (K = 32)

#[inline(always)]
fn pack32_kernel<const B: u32, const MASKED: bool>(input: &[u32], out: &mut [u32]) {
    if B == 0 {
        return;
    }
    let out = &mut out[..B as usize];
    if B == 32 {
        out.copy_from_slice(&input[..32]);
        return;
    }
    out.fill(0);
    let m = mask(B);
    for (i, &raw) in input[..32].iter().enumerate() {
        let v = if MASKED { raw & m } else { raw };
        let bit = i as u32 * B;
        let word = (bit / 32) as usize;
        let shift = bit % 32;
        out[word] |= v << shift;
        if shift + B > 32 {
            out[word + 1] |= v >> (32 - shift);
        }
    }
}

#[inline(always)]
fn unpack32_kernel<const B: u32>(input: &[u32], out: &mut [u32]) {
    let out = &mut out[..32];
    if B == 0 {
        out.fill(0);
        return;
    }
    let input = &input[..B as usize];
    if B == 32 {
        out.copy_from_slice(input);
        return;
    }
    let m = mask(B);
    for (i, slot) in out.iter_mut().enumerate() {
        let bit = i as u32 * B;
        let word = (bit / 32) as usize;
        let shift = bit % 32;
        let mut v = input[word] >> shift;
        if shift + B > 32 {
            v |= input[word + 1] << (32 - shift);
        }
        *slot = v & m;
    }
}

// ---------------------------------------------------------------------------
// vertical kernels (K = 128, four lanes)

#[inline(always)]
fn pack128_kernel<const B: u32, const MASKED: bool>(input: &[u32], out: &mut [u32]) {
    if B == 0 {
        return;
    }
    let out = &mut out[..4 * B as usize];
    if B == 32 {
        out.copy_from_slice(&input[..128]);
        return;
    }
    out.fill(0);
    let m = mask(B);
    for (i, quad) in input[..128].chunks_exact(4).enumerate() {
        let bit = i as u32 * B;
        let word = (bit / 32) as usize;
        let shift = bit % 32;
        for lane in 0..4 {
            let v = if MASKED { quad[lane] & m } else { quad[lane] };
            out[4 * word + lane] |= v << shift;
            if shift + B > 32 {
                out[4 * word + 4 + lane] |= v >> (32 - shift);
            }
        }
    }
}

#[inline(always)]
fn unpack128_kernel<const B: u32>(input: &[u32], out: &mut [u32]) {
    let out = &mut out[..128];
    if B == 0 {
        out.fill(0);
        return;
    }
    let input = &input[..4 * B as usize];
    if B == 32 {
        out.copy_from_slice(input);
        return;
    }
    let m = mask(B);
    for (i, quad) in out.chunks_exact_mut(4).enumerate() {
        let bit = i as u32 * B;
        let word = (bit / 32) as usize;
        let shift = bit % 32;
        for lane in 0..4 {
            let mut v = input[4 * word + lane] >> shift;
            if shift + B > 32 {
                v |= input[4 * word + 4 + lane] << (32 - shift);
            }
            quad[lane] = v & m;
        }
    }
}

type PackFn = fn(&[u32], &mut [u32]);

macro_rules! width_table {
    ($kernel:ident $(, $flag:expr)?) => {
        [
            $kernel::<0 $(, $flag)?>, $kernel::<1 $(, $flag)?>, $kernel::<2 $(, $flag)?>,
            $kernel::<3 $(, $flag)?>, $kernel::<4 $(, $flag)?>, $kernel::<5 $(, $flag)?>,
            $kernel::<6 $(, $flag)?>, $kernel::<7 $(, $flag)?>, $kernel::<8 $(, $flag)?>,
            $kernel::<9 $(, $flag)?>, $kernel::<10 $(, $flag)?>, $kernel::<11 $(, $flag)?>,
            $kernel::<12 $(, $flag)?>, $kernel::<13 $(, $flag)?>, $kernel::<14 $(, $flag)?>,
            $kernel::<15 $(, $flag)?>, $kernel::<16 $(, $flag)?>, $kernel::<17 $(, $flag)?>,
            $kernel::<18 $(, $flag)?>, $kernel::<19 $(, $flag)?>, $kernel::<20 $(, $flag)?>,
            $kernel::<21 $(, $flag)?>, $kernel::<22 $(, $flag)?>, $kernel::<23 $(, $flag)?>,
            $kernel::<24 $(, $flag)?>, $kernel::<25 $(, $flag)?>, $kernel::<26 $(, $flag)?>,
            $kernel::<27 $(, $flag)?>, $kernel::<28 $(, $flag)?>, $kernel::<29 $(, $flag)?>,
            $kernel::<30 $(, $flag)?>, $kernel::<31 $(, $flag)?>, $kernel::<32 $(, $flag)?>,
        ]
    };
}

static PACK32: [PackFn; 33] = width_table!(pack32_kernel, false);
static PACK32_MASKED: [PackFn; 33] = width_table!(pack32_kernel, true);
static UNPACK32: [PackFn; 33] = width_table!(unpack32_kernel);
static PACK128: [PackFn; 33] = width_table!(pack128_kernel, false);
static PACK128_MASKED: [PackFn; 33] = width_table!(pack128_kernel, true);
static UNPACK128: [PackFn; 33] = width_table!(unpack128_kernel);

// Unchecked entry points for codecs that have already computed the width.
// `out` must hold at least `b` (scalar) or `4b` (vertical) words.

#[inline]
pub(crate) fn pack32_trusted(input: &[u32], b: u32, out: &mut [u32]) {
    debug_assert!(input[..32].iter().all(|&v| v <= mask(b)));
    PACK32[b as usize](input, out)
}

#[inline]
pub(crate) fn pack32_masked_into(input: &[u32], b: u32, out: &mut [u32]) {
    PACK32_MASKED[b as usize](input, out)
}

#[inline]
pub(crate) fn unpack32_into(input: &[u32], b: u32, out: &mut [u32]) {
    UNPACK32[b as usize](input, out)
}

#[inline]
pub(crate) fn pack128_trusted(input: &[u32], b: u32, out: &mut [u32]) {
    debug_assert!(input[..128].iter().all(|&v| v <= mask(b)));
    PACK128[b as usize](input, out)
}

#[inline]
pub(crate) fn pack128_masked_into(input: &[u32], b: u32, out: &mut [u32]) {
    PACK128_MASKED[b as usize](input, out)
}

#[inline]
pub(crate) fn unpack128_into(input: &[u32], b: u32, out: &mut [u32]) {
    UNPACK128[b as usize](input, out)
}

fn check_fits(values: &[u32], b: BitWidth) -> Result<()> {
    let limit = b.max_value();
    match values.iter().position(|&v| v > limit) {
        Some(index) => Err(Error::ValueTooWide {
            index,
            value: values[index],
            width: b.get(),
        }),
        None => Ok(()),
    }
}

/// Packs 32 integers into exactly `b` words.
pub fn pack_scalar32(values: &[u32; 32], b: BitWidth) -> Result<Vec<u32>> {
    check_fits(values, b)?;
    let mut out = vec![0u32; b.get() as usize];
    pack32_trusted(values, b.get(), &mut out);
    Ok(out)
}

/// Packs the low `b` bits of each of 32 integers, ignoring higher bits.
pub fn pack_scalar32_masked(values: &[u32; 32], b: BitWidth) -> Vec<u32> {
    let mut out = vec![0u32; b.get() as usize];
    pack32_masked_into(values, b.get(), &mut out);
    out
}

/// Inverse of [`pack_scalar32`]; reads exactly `b` words.
pub fn unpack_scalar32(words: &[u32], b: BitWidth) -> Result<[u32; 32]> {
    let need = b.get() as usize;
    if words.len() < need {
        return Err(Error::Truncated);
    }
    let mut out = [0u32; 32];
    unpack32_into(words, b.get(), &mut out);
    Ok(out)
}

/// Packs 128 integers in the vertical four-lane layout: lane `j` holds values
/// `j, j+4, j+8, ...` packed with the scalar layout, and scalar word `i` of
/// lane `j` is stored at position `4i + j`. Output is exactly `4b` words.
pub fn pack_vertical128(values: &[u32; 128], b: BitWidth) -> Result<Vec<u32>> {
    check_fits(values, b)?;
    let mut out = vec![0u32; 4 * b.get() as usize];
    pack128_trusted(values, b.get(), &mut out);
    Ok(out)
}

pub fn pack_vertical128_masked(values: &[u32; 128], b: BitWidth) -> Vec<u32> {
    let mut out = vec![0u32; 4 * b.get() as usize];
    pack128_masked_into(values, b.get(), &mut out);
    out
}

/// Inverse of [`pack_vertical128`]; reads exactly `4b` words.
pub fn unpack_vertical128(words: &[u32], b: BitWidth) -> Result<[u32; 128]> {
    let need = 4 * b.get() as usize;
    if words.len() < need {
        return Err(Error::Truncated);
    }
    let mut out = [0u32; 128];
    unpack128_into(words, b.get(), &mut out);
    Ok(out)
}
