//! Bit sequences with explicit length, plus the packed on-disk format.
//!
//! Bits are packed to bytes MSB-first. Because a stream length is rarely a
//! multiple of eight, the packed file is accompanied by a sidecar `<name>.len`
//! holding the exact bit count in decimal.

use std::fs;
use std::path::Path;

use crate::error::Result;

/// Ordered sequence of bits, one byte per bit (values 0 or 1).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BitStream {
    bits: Vec<u8>,
}

impl BitStream {
    pub fn new() -> Self {
        Self { bits: Vec::new() }
    }

    pub fn with_capacity(n: usize) -> Self {
        Self {
            bits: Vec::with_capacity(n),
        }
    }

    /// Builds a stream from raw 0/1 values. Any nonzero byte counts as a 1.
    pub fn from_bits(bits: impl IntoIterator<Item = u8>) -> Self {
        Self {
            bits: bits.into_iter().map(|b| (b != 0) as u8).collect(),
        }
    }

    pub fn push(&mut self, bit: u8) {
        self.bits.push((bit != 0) as u8);
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.bits
    }

    pub fn extend(&mut self, other: &BitStream) {
        self.bits.extend_from_slice(&other.bits);
    }

    pub fn truncate(&mut self, len: usize) {
        self.bits.truncate(len);
    }

    pub fn ones(&self) -> usize {
        self.bits.iter().map(|&b| b as usize).sum()
    }

    /// Iterator over whole bytes assembled MSB-first; a trailing partial byte
    /// is not yielded.
    pub fn bytes(&self) -> impl Iterator<Item = u8> + '_ {
        self.bits
            .chunks_exact(8)
            .map(|c| c.iter().fold(0u8, |acc, &b| (acc << 1) | b))
    }

    /// Packs to bytes MSB-first, zero-padding the final partial byte.
    pub fn to_packed(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(self.bits.len().div_ceil(8));
        for chunk in self.bits.chunks(8) {
            let mut byte = 0u8;
            for (k, &b) in chunk.iter().enumerate() {
                byte |= b << (7 - k);
            }
            out.push(byte);
        }
        out
    }

    pub fn from_packed(bytes: &[u8], bit_len: usize) -> Self {
        let mut bits = Vec::with_capacity(bit_len);
        for (i, &byte) in bytes.iter().enumerate() {
            for k in 0..8 {
                if i * 8 + k == bit_len {
                    break;
                }
                bits.push((byte >> (7 - k)) & 1);
            }
        }
        Self { bits }
    }

    /// Writes the packed stream to `path` and the bit count to `<path>.len`.
    pub fn write_packed_file(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_packed())?;
        fs::write(sidecar_path(path), format!("{}\n", self.len()))?;
        Ok(())
    }

    /// Reads a packed stream. Without a sidecar the length defaults to
    /// eight bits per byte.
    pub fn read_packed_file(path: &Path) -> Result<Self> {
        let bytes = fs::read(path)?;
        let bit_len = match fs::read_to_string(sidecar_path(path)) {
            Ok(text) => text
                .trim()
                .parse::<usize>()
                .unwrap_or(bytes.len() * 8)
                .min(bytes.len() * 8),
            Err(_) => bytes.len() * 8,
        };
        Ok(Self::from_packed(&bytes, bit_len))
    }
}

fn sidecar_path(path: &Path) -> std::path::PathBuf {
    let mut name = path.file_name().unwrap_or_default().to_os_string();
    name.push(".len");
    path.with_file_name(name)
}
