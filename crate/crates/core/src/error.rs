//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("malformed WAVE file: {0}")]
    MalformedWav(String),

    #[error("unsupported sample format (format tag {format_tag}, PCM tag 1 required)")]
    UnsupportedSampleFormat { format_tag: u16 },

    #[error("unsupported bit depth ({bits} bits per sample, 16 required)")]
    UnsupportedBitDepth { bits: u16 },

    #[error("recording count {count} is not a positive multiple of 16")]
    BlockCount { count: usize },

    #[error("chessboard needs 64 bytes, got {got}")]
    BoardUnderrun { got: usize },

    #[error("bitstream exhausted with {entries_filled} of 256 S-box entries filled")]
    SBoxIncomplete { entries_filled: usize },

    #[error("table is not a bijection: value {value} appears more than once")]
    NotBijective { value: u8 },

    #[error("cannot parse S-box: {0}")]
    SBoxParse(String),

    #[error("{test}: {reason}")]
    TestPrecondition { test: &'static str, reason: String },

    #[error("invalid parameter: {0}")]
    InvalidParam(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Stable machine-readable category, used by the CLI for exit reporting.
    pub fn category(&self) -> &'static str {
        match self {
            Error::Io(_) => "io",
            Error::MalformedWav(_) => "wav-format",
            Error::UnsupportedSampleFormat { .. } => "wav-format",
            Error::UnsupportedBitDepth { .. } => "wav-format",
            Error::BlockCount { .. } => "block-count",
            Error::BoardUnderrun { .. } => "stream-exhausted",
            Error::SBoxIncomplete { .. } => "stream-exhausted",
            Error::NotBijective { .. } => "not-bijective",
            Error::SBoxParse(_) => "sbox-parse",
            Error::TestPrecondition { .. } => "test-precondition",
            Error::InvalidParam(_) => "bad-args",
        }
    }
}
