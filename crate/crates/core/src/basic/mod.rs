//! Byte- and word-aligned codecs that work on arbitrary-length inputs:
//! Variable Byte, varint-G8IU and Simple-8b.

pub mod g8iu;
pub mod simple8b;
pub mod vbyte;

pub use g8iu::{g8iu_decode, g8iu_encode, G8iu};
pub use simple8b::{simple8b_decode, simple8b_encode, Selector, Simple8b, SELECTORS};
pub use vbyte::{vbyte_decode, vbyte_encode, VByte};
