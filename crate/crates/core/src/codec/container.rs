//! On-disk container.
//!
//! ```text
//! magic        8 bytes  "INTZPK01"
//! name_len     u8
//! codec_name   name_len ASCII bytes
//! array_count  u32
//! per array:   original_length u32, word_count u32, word_count payload words
//! ```
//!
//! All integers are little-endian. An array's payload is the concatenation of
//! its chunk payloads; chunk boundaries are recovered on read by decoding.

use std::io::{self, Read, Write};

use super::{Chunk, Format, CHUNK_SIZE};
use crate::error::{Error, Result};

pub const MAGIC: &[u8; 8] = b"INTZPK01";

/// Writes `arrays` (each a list of chunks in `format`) to `sink`.
pub fn container_write<W: Write>(format: Format, arrays: &[Vec<Chunk>], mut sink: W) -> Result<()> {
    let name = format.name();
    sink.write_all(MAGIC)?;
    sink.write_all(&[name.len() as u8])?;
    sink.write_all(name.as_bytes())?;
    sink.write_all(&(arrays.len() as u32).to_le_bytes())?;
    let mut buf = Vec::new();
    for chunks in arrays {
        let length: u64 = chunks.iter().map(|c| c.original_length as u64).sum();
        let words: usize = chunks.iter().map(|c| c.payload.len()).sum();
        let length = u32::try_from(length)
            .map_err(|_| Error::InvalidArgument("array longer than 2^32-1 values".into()))?;
        let words = u32::try_from(words)
            .map_err(|_| Error::InvalidArgument("array payload longer than 2^32-1 words".into()))?;
        sink.write_all(&length.to_le_bytes())?;
        sink.write_all(&words.to_le_bytes())?;
        for chunk in chunks {
            buf.clear();
            buf.extend(chunk.payload.iter().flat_map(|w| w.to_le_bytes()));
            sink.write_all(&buf)?;
        }
    }
    sink.flush()?;
    Ok(())
}

/// Reads a container, returning its codec name and the chunk lists of every
/// array.
pub fn container_read<R: Read>(mut source: R) -> Result<(String, Vec<Vec<Chunk>>)> {
    let mut magic = [0u8; 8];
    read_exact(&mut source, &mut magic).map_err(|e| match e {
        Error::Truncated => Error::NotAContainer,
        other => other,
    })?;
    if &magic != MAGIC {
        return Err(Error::NotAContainer);
    }
    let mut len = [0u8; 1];
    read_exact(&mut source, &mut len)?;
    let mut name = vec![0u8; len[0] as usize];
    read_exact(&mut source, &mut name)?;
    let name = String::from_utf8(name).map_err(|_| Error::corrupt("codec name is not ASCII"))?;
    let format = Format::from_name(&name)?;

    let count = read_u32(&mut source)?;
    let mut arrays = Vec::new();
    let mut scratch = Vec::new();
    for _ in 0..count {
        let length = read_u32(&mut source)? as usize;
        let word_count = read_u32(&mut source)? as usize;
        let words = read_words(&mut source, word_count)?;
        arrays.push(split_chunks(format, &words, length, &mut scratch)?);
    }
    Ok((name, arrays))
}

/// Writes plain arrays, encoding each one with `format`.
pub fn write_arrays<W: Write>(format: Format, arrays: &[Vec<u32>], sink: W) -> Result<()> {
    let encoded = arrays
        .iter()
        .map(|a| format.encode_array(a))
        .collect::<Result<Vec<_>>>()?;
    container_write(format, &encoded, sink)
}

/// Reads and fully decodes a container.
pub fn read_arrays<R: Read>(source: R) -> Result<(Format, Vec<Vec<u32>>)> {
    let (name, arrays) = container_read(source)?;
    let format = Format::from_name(&name)?;
    let decoded = arrays
        .iter()
        .map(|chunks| format.decode_array(chunks))
        .collect::<Result<Vec<_>>>()?;
    Ok((format, decoded))
}

/// Serialized size in bytes of a container holding `arrays`.
pub fn container_size(format: Format, arrays: &[Vec<Chunk>]) -> usize {
    let header = MAGIC.len() + 1 + format.name().len() + 4;
    header
        + arrays
            .iter()
            .map(|chunks| 8 + 4 * chunks.iter().map(|c| c.payload.len()).sum::<usize>())
            .sum::<usize>()
}

fn split_chunks(
    format: Format,
    words: &[u32],
    length: usize,
    scratch: &mut Vec<u32>,
) -> Result<Vec<Chunk>> {
    let mut chunks = Vec::with_capacity(length.div_ceil(CHUNK_SIZE));
    let mut pos = 0;
    let mut remaining = length;
    while remaining > 0 {
        let n = remaining.min(CHUNK_SIZE);
        let used = format.chunk_extent(&words[pos..], n, scratch)?;
        chunks.push(Chunk {
            original_length: n as u32,
            payload: words[pos..pos + used].to_vec(),
        });
        pos += used;
        remaining -= n;
    }
    if pos != words.len() {
        return Err(Error::corrupt(format!(
            "array declares {} payload words but its chunks use {pos}",
            words.len()
        )));
    }
    Ok(chunks)
}

fn read_exact<R: Read>(source: &mut R, buf: &mut [u8]) -> Result<()> {
    source.read_exact(buf).map_err(|e| match e.kind() {
        io::ErrorKind::UnexpectedEof => Error::Truncated,
        _ => Error::Io(e),
    })
}

fn read_u32<R: Read>(source: &mut R) -> Result<u32> {
    let mut b = [0u8; 4];
    read_exact(source, &mut b)?;
    Ok(u32::from_le_bytes(b))
}

fn read_words<R: Read>(source: &mut R, count: usize) -> Result<Vec<u32>> {
    // Read incrementally so a corrupt count cannot force a huge allocation.
    let mut words = Vec::new();
    let mut buf = vec![0u8; 1 << 16];
    let mut remaining = count;
    while remaining > 0 {
        let take = remaining.min(buf.len() / 4);
        read_exact(source, &mut buf[..4 * take])?;
        words.extend(
            buf[..4 * take]
                .chunks_exact(4)
                .map(|c| u32::from_le_bytes([c[0], c[1], c[2], c[3]])),
        );
        remaining -= take;
    }
    Ok(words)
}
