//! Byte-substitution boxes from physical noise.
//!
//! The pipeline turns PCM recordings (underwater acoustics in the original
//! setting, any 16-bit WAVE in practice) into a de-biased random bitstream,
//! drives a chain of knight's tours over 8x8 value boards to assemble
//! bijective 8-bit S-boxes, and evaluates any S-box against the standard
//! criteria: nonlinearity, SAC, BIC, linear and differential approximation
//! probability. A compact statistical battery certifies the extracted
//! bitstream.

pub mod audio;
pub mod bitstream;
pub mod entropy;
pub mod error;
pub mod randtest;
pub mod sbox;
pub mod sboxeval;
pub mod sboxgen;
pub mod synth;

pub use bitstream::BitStream;
pub use error::{Error, Result};
pub use sbox::SBox;
