use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("value {value} at index {index} does not fit in {width} bits")]
    ValueTooWide {
        index: usize,
        value: u32,
        width: u32,
    },

    #[error("input is not sorted: value at index {index} is smaller than its predecessor")]
    NotSorted { index: usize },

    #[error("compressed stream is truncated")]
    Truncated,

    #[error("corrupt compressed data: {0}")]
    Corrupt(String),

    #[error("not a container")]
    NotAContainer,

    #[error("unknown codec name {0:?}")]
    UnknownCodec(String),

    #[error("nothing to measure")]
    NothingToMeasure,

    #[error("weight vector has no entry for bucket {0}")]
    MissingBucket(u32),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn corrupt(msg: impl Into<String>) -> Self {
        Error::Corrupt(msg.into())
    }
}
