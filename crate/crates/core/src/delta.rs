//! In-place differential coding.
//!
//! Scalar mode stores `x[0], x[1]-x[0], x[2]-x[1], ...`. Stride-4 mode keeps
//! the first four values and stores `x[i]-x[i-4]` afterwards, so four prefix
//! sums can be carried at once. Encoding walks from the end of the buffer and
//! decoding from the start, which lets both work without scratch space.

use std::fmt;
use std::str::FromStr;

use crate::error::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum DeltaMode {
    #[default]
    Scalar,
    Stride4,
}

impl DeltaMode {
    pub fn encode(self, values: &mut [u32]) {
        match self {
            DeltaMode::Scalar => delta_encode_scalar(values),
            DeltaMode::Stride4 => delta_encode_stride4(values),
        }
    }

    pub fn decode(self, values: &mut [u32]) {
        match self {
            DeltaMode::Scalar => delta_decode_scalar(values),
            DeltaMode::Stride4 => delta_decode_stride4(values),
        }
    }
}

impl fmt::Display for DeltaMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DeltaMode::Scalar => "scalar",
            DeltaMode::Stride4 => "stride4",
        })
    }
}

impl FromStr for DeltaMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "scalar" => Ok(DeltaMode::Scalar),
            "stride4" | "s4" => Ok(DeltaMode::Stride4),
            other => Err(Error::InvalidArgument(format!(
                "unknown delta mode {other:?}"
            ))),
        }
    }
}

/// Replaces a non-decreasing array by its successive differences.
///
/// Decreasing input is a contract violation (checked in debug builds).
pub fn delta_encode_scalar(values: &mut [u32]) {
    for i in (1..values.len()).rev() {
        debug_assert!(values[i] >= values[i - 1], "decreasing input at {i}");
        values[i] -= values[i - 1];
    }
}

/// Prefix sum; exact inverse of [`delta_encode_scalar`].
pub fn delta_decode_scalar(values: &mut [u32]) {
    let mut acc = 0u32;
    for v in values.iter_mut() {
        acc = acc.wrapping_add(*v);
        *v = acc;
    }
}

pub fn delta_encode_stride4(values: &mut [u32]) {
    for i in (4..values.len()).rev() {
        debug_assert!(values[i] >= values[i - 4], "decreasing input at {i}");
        values[i] -= values[i - 4];
    }
}

/// Four interleaved prefix sums; exact inverse of [`delta_encode_stride4`].
pub fn delta_decode_stride4(values: &mut [u32]) {
    if values.len() <= 4 {
        return;
    }
    let (head, rest) = values.split_at_mut(4);
    let mut acc = [head[0], head[1], head[2], head[3]];
    let mut quads = rest.chunks_exact_mut(4);
    for quad in &mut quads {
        for lane in 0..4 {
            acc[lane] = acc[lane].wrapping_add(quad[lane]);
            quad[lane] = acc[lane];
        }
    }
    for (lane, v) in quads.into_remainder().iter_mut().enumerate() {
        *v = v.wrapping_add(acc[lane]);
    }
}
