//! Compression of sorted 32-bit integer arrays.
//!
//! Arrays are differentially coded (scalar or stride-4), cut into chunks of at
//! most 2^16 integers and handed to one of the block codecs: Variable Byte,
//! varint-G8IU, Simple-8b, BP32, SIMD-BP128, PFOR, SimplePFOR, FastPFOR or
//! SIMD-FastPFOR. The [`bench`] and [`datagen`] modules provide the
//! measurement harness and synthetic datasets used by the `intcodec` binary.
//!
//! ```
//! use intcodec::{decode_array, encode_array, Codec};
//!
//! let codec: Codec = "simdfastpfor-s4".parse().unwrap();
//! let values: Vec<u32> = (0..1000).map(|i| i * 3 + 7).collect();
//! let chunks = encode_array(&codec, &values).unwrap();
//! assert_eq!(decode_array(&codec, &chunks).unwrap(), values);
//! ```

pub mod basic;
pub mod bench;
pub mod binpack;
pub mod bitpack;
pub mod codec;
pub mod datagen;
pub mod delta;
pub mod error;
pub mod patched;

pub use bitpack::{max_bitwidth, BitWidth};
pub use codec::container::{container_read, container_write, read_arrays, write_arrays};
pub use codec::{decode_array, encode_array, BlockCodec, Chunk, Codec, Format, Scheme, CHUNK_SIZE};
pub use delta::DeltaMode;
pub use error::{Error, Result};
