//! Patched frame-of-reference codecs.

pub mod fastpfor;
pub mod pfor;

pub use fastpfor::{
    choose_width_fastpfor, fastpfor_cost, fastpfor_decode, fastpfor_encode, BlockMeta, FastPfor,
    FastPforVariant, Histogram33, WidthChoice,
};
pub use pfor::{
    pfor_choose_width, pfor_decode, pfor_encode, pfor_encode_with_width, pfor_exception_count,
    pfor_exception_positions, Pfor,
};
