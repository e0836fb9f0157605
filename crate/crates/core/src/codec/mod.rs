//! Codec registry and the chunked encode/decode pipeline.
//!
//! Each array is cut into chunks of at most 2^16 integers. A chunk is delta
//! coded in place, the largest prefix whose length is a multiple of the
//! scheme's block size goes through the scheme itself, and any leftover deltas
//! are appended with Variable Byte. Decoding is two passes per chunk: deltas
//! are reconstructed into the output buffer, then prefix-summed in place.

use std::borrow::Cow;
use std::fmt;
use std::str::FromStr;

use crate::basic::{G8iu, Simple8b, VByte};
use crate::binpack::{Bp32, SimdBp128};
use crate::delta::DeltaMode;
use crate::error::{Error, Result};
use crate::patched::{FastPfor, FastPforVariant, Pfor};

pub mod container;

/// Maximum number of integers per chunk.
pub const CHUNK_SIZE: usize = 1 << 16;

/// Name under which uncompressed arrays are stored in a container.
pub const RAW_NAME: &str = "RAW";

/// Core of a compression scheme: turns a delta buffer into 32-bit words and
/// back. Implementations are stateless.
pub trait BlockCodec: Sync {
    /// Number of integers consumed per block; inputs to [`encode`] are always
    /// a multiple of this.
    ///
    /// [`encode`]: BlockCodec::encode
    fn block_multiple(&self) -> usize;

    /// Appends the encoding of `input` to `out`.
    fn encode(&self, input: &[u32], out: &mut Vec<u32>) -> Result<()>;

    /// Decodes exactly `out.len()` integers from the front of `input` and
    /// returns the number of words consumed.
    fn decode(&self, input: &[u32], out: &mut [u32]) -> Result<usize>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Scheme {
    VByte,
    G8iu,
    Simple8b,
    Bp32,
    SimdBp128,
    Pfor,
    SimplePfor,
    FastPfor,
    SimdFastPfor,
}

impl Scheme {
    pub const ALL: [Scheme; 9] = [
        Scheme::VByte,
        Scheme::G8iu,
        Scheme::Simple8b,
        Scheme::Bp32,
        Scheme::SimdBp128,
        Scheme::Pfor,
        Scheme::SimplePfor,
        Scheme::FastPfor,
        Scheme::SimdFastPfor,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::VByte => "vbyte",
            Scheme::G8iu => "g8iu",
            Scheme::Simple8b => "simple8b",
            Scheme::Bp32 => "bp32",
            Scheme::SimdBp128 => "simdbp128",
            Scheme::Pfor => "pfor",
            Scheme::SimplePfor => "simplepfor",
            Scheme::FastPfor => "fastpfor",
            Scheme::SimdFastPfor => "simdfastpfor",
        }
    }

    pub fn core(self) -> &'static dyn BlockCodec {
        match self {
            Scheme::VByte => &VByte,
            Scheme::G8iu => &G8iu,
            Scheme::Simple8b => &Simple8b,
            Scheme::Bp32 => &Bp32,
            Scheme::SimdBp128 => &SimdBp128,
            Scheme::Pfor => &Pfor,
            Scheme::SimplePfor => &FastPfor(FastPforVariant::Simple),
            Scheme::FastPfor => &FastPfor(FastPforVariant::Fast),
            Scheme::SimdFastPfor => &FastPfor(FastPforVariant::SimdFast),
        }
    }

    pub fn block_multiple(self) -> usize {
        self.core().block_multiple()
    }
}

/// A scheme combined with a differential coding mode. Names are the scheme
/// name, with a `-s4` suffix for stride-4 deltas.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Codec {
    pub scheme: Scheme,
    pub delta: DeltaMode,
}

impl Codec {
    pub const fn new(scheme: Scheme, delta: DeltaMode) -> Self {
        Codec { scheme, delta }
    }

    /// Every scheme in both delta modes.
    pub fn all() -> Vec<Codec> {
        Scheme::ALL
            .iter()
            .flat_map(|&s| {
                [
                    Codec::new(s, DeltaMode::Scalar),
                    Codec::new(s, DeltaMode::Stride4),
                ]
            })
            .collect()
    }

    pub fn name(&self) -> String {
        match self.delta {
            DeltaMode::Scalar => self.scheme.name().to_owned(),
            DeltaMode::Stride4 => format!("{}-s4", self.scheme.name()),
        }
    }

    pub fn block_multiple(&self) -> usize {
        self.scheme.block_multiple()
    }

    /// Encodes one chunk (at most [`CHUNK_SIZE`] values). `scratch` receives
    /// the delta buffer.
    pub fn encode_chunk(
        &self,
        values: &[u32],
        scratch: &mut Vec<u32>,
        out: &mut Vec<u32>,
    ) -> Result<()> {
        scratch.clear();
        scratch.extend_from_slice(values);
        self.delta.encode(scratch);
        let core = self.scheme.core();
        let core_len = values.len() / core.block_multiple() * core.block_multiple();
        core.encode(&scratch[..core_len], out)?;
        if core_len < values.len() {
            let mut bytes = Vec::with_capacity(5 * (values.len() - core_len));
            crate::basic::vbyte::encode_into(&scratch[core_len..], &mut bytes);
            append_bytes(out, &bytes);
        }
        Ok(())
    }

    /// Decodes one chunk of `out.len()` values and returns the number of
    /// words consumed.
    pub fn decode_chunk(&self, words: &[u32], out: &mut [u32]) -> Result<usize> {
        let consumed = self.decode_deltas(words, out)?;
        self.delta.decode(out);
        Ok(consumed)
    }

    fn decode_deltas(&self, words: &[u32], out: &mut [u32]) -> Result<usize> {
        let core = self.scheme.core();
        let core_len = out.len() / core.block_multiple() * core.block_multiple();
        let (head, tail) = out.split_at_mut(core_len);
        let mut consumed = core.decode(words, head)?;
        if !tail.is_empty() {
            let rest = words.get(consumed..).ok_or(Error::Truncated)?;
            let bytes = words_as_bytes(rest);
            let used = crate::basic::vbyte::decode_into(&bytes, tail)?;
            consumed += used.div_ceil(4);
        }
        Ok(consumed)
    }
}

impl fmt::Display for Codec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for Codec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (base, delta) = match s.strip_suffix("-s4") {
            Some(base) => (base, DeltaMode::Stride4),
            None => (s, DeltaMode::Scalar),
        };
        Scheme::ALL
            .iter()
            .find(|scheme| scheme.name() == base)
            .map(|&scheme| Codec::new(scheme, delta))
            .ok_or_else(|| Error::UnknownCodec(s.to_owned()))
    }
}

/// One independently decodable piece of an array.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Chunk {
    pub original_length: u32,
    pub payload: Vec<u32>,
}

/// Payload format of a container: either plain values or a codec.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Format {
    Raw,
    Codec(Codec),
}

impl Format {
    pub fn name(&self) -> String {
        match self {
            Format::Raw => RAW_NAME.to_owned(),
            Format::Codec(c) => c.name(),
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        if name == RAW_NAME {
            Ok(Format::Raw)
        } else {
            name.parse().map(Format::Codec)
        }
    }

    pub fn encode_array(&self, values: &[u32]) -> Result<Vec<Chunk>> {
        match self {
            Format::Raw => Ok(values
                .chunks(CHUNK_SIZE)
                .map(|c| Chunk {
                    original_length: c.len() as u32,
                    payload: c.to_vec(),
                })
                .collect()),
            Format::Codec(codec) => encode_array(codec, values),
        }
    }

    pub fn decode_array(&self, chunks: &[Chunk]) -> Result<Vec<u32>> {
        match self {
            Format::Raw => {
                let mut out = Vec::with_capacity(total_length(chunks));
                for chunk in chunks {
                    let n = chunk.original_length as usize;
                    if chunk.payload.len() != n {
                        return Err(Error::corrupt("raw chunk length mismatch"));
                    }
                    out.extend_from_slice(&chunk.payload);
                }
                Ok(out)
            }
            Format::Codec(codec) => decode_array(codec, chunks),
        }
    }

    /// Number of words occupied by a chunk of `n` values at the front of
    /// `words`.
    pub(crate) fn chunk_extent(
        &self,
        words: &[u32],
        n: usize,
        scratch: &mut Vec<u32>,
    ) -> Result<usize> {
        match self {
            Format::Raw => {
                if words.len() < n {
                    return Err(Error::Truncated);
                }
                Ok(n)
            }
            Format::Codec(codec) => {
                scratch.clear();
                scratch.resize(n, 0);
                codec.decode_deltas(words, scratch)
            }
        }
    }
}

fn total_length(chunks: &[Chunk]) -> usize {
    chunks.iter().map(|c| c.original_length as usize).sum()
}

/// Checks that `values` is non-decreasing.
pub fn check_sorted(values: &[u32]) -> Result<()> {
    match values.windows(2).position(|w| w[1] < w[0]) {
        Some(i) => Err(Error::NotSorted { index: i + 1 }),
        None => Ok(()),
    }
}

/// Splits `values` into chunks of at most [`CHUNK_SIZE`] and encodes each.
pub fn encode_array(codec: &Codec, values: &[u32]) -> Result<Vec<Chunk>> {
    check_sorted(values)?;
    let mut scratch = Vec::with_capacity(values.len().min(CHUNK_SIZE));
    values
        .chunks(CHUNK_SIZE)
        .map(|part| {
            let mut payload = Vec::new();
            codec.encode_chunk(part, &mut scratch, &mut payload)?;
            Ok(Chunk {
                original_length: part.len() as u32,
                payload,
            })
        })
        .collect()
}

/// Decodes the output of [`encode_array`].
pub fn decode_array(codec: &Codec, chunks: &[Chunk]) -> Result<Vec<u32>> {
    let mut out = Vec::new();
    decode_array_into(codec, chunks, &mut out)?;
    Ok(out)
}

/// Like [`decode_array`] but reuses `out`.
pub fn decode_array_into(codec: &Codec, chunks: &[Chunk], out: &mut Vec<u32>) -> Result<()> {
    let total = total_length(chunks);
    out.clear();
    out.resize(total, 0);
    let mut start = 0;
    for chunk in chunks {
        let n = chunk.original_length as usize;
        if n > CHUNK_SIZE {
            return Err(Error::corrupt(format!(
                "chunk length {n} exceeds {CHUNK_SIZE}"
            )));
        }
        let consumed = codec.decode_chunk(&chunk.payload, &mut out[start..start + n])?;
        if consumed != chunk.payload.len() {
            return Err(Error::corrupt(format!(
                "chunk payload has {} words, decoder consumed {consumed}",
                chunk.payload.len()
            )));
        }
        start += n;
    }
    Ok(())
}

/// Little-endian byte view of a word slice.
pub(crate) fn words_as_bytes(words: &[u32]) -> Cow<'_, [u8]> {
    if cfg!(target_endian = "little") {
        Cow::Borrowed(bytemuck::cast_slice(words))
    } else {
        Cow::Owned(words.iter().flat_map(|w| w.to_le_bytes()).collect())
    }
}

/// Appends `bytes` as little-endian words, zero-padding the last one.
pub(crate) fn append_bytes(out: &mut Vec<u32>, bytes: &[u8]) {
    let mut it = bytes.chunks_exact(4);
    out.extend((&mut it).map(|c| u32::from_le_bytes([c[0], c[1], c[2], c[3]])));
    let rem = it.remainder();
    if !rem.is_empty() {
        let mut last = [0u8; 4];
        last[..rem.len()].copy_from_slice(rem);
        out.push(u32::from_le_bytes(last));
    }
}
