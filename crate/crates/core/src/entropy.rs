//! True-random bit extraction from blocks of 16 aligned amplitude series.
//!
//! Per time window, all C(16,2) = 120 pairwise amplitude differences are
//! formed (time-major, lexicographic pair order). Each nonzero difference is
//! folded to one bit, and the resulting stream is de-biased with the classic
//! Von Neumann extractor.

use crate::audio::AmplitudeSeries;
use crate::bitstream::BitStream;
use crate::error::{Error, Result};

/// Number of recordings consumed per block.
pub const BLOCK_SIZE: usize = 16;

/// Pairwise differences per time window: C(16, 2).
pub const PAIRS_PER_WINDOW: usize = BLOCK_SIZE * (BLOCK_SIZE - 1) / 2;

/// Exactly 16 amplitude series truncated to a common window count.
#[derive(Debug, Clone)]
pub struct RecordingBlock {
    series: Vec<AmplitudeSeries>,
    window_count: usize,
}

impl RecordingBlock {
    /// Builds a block from exactly 16 series, truncating all of them to the
    /// shortest length. Padding would inject constant data, so it is never
    /// done.
    pub fn new(mut series: Vec<AmplitudeSeries>) -> Result<Self> {
        if series.len() != BLOCK_SIZE {
            return Err(Error::BlockCount {
                count: series.len(),
            });
        }
        let window_count = series
            .iter()
            .map(|s| s.amplitudes.len())
            .min()
            .unwrap_or(0);
        for s in &mut series {
            s.amplitudes.truncate(window_count);
        }
        Ok(Self {
            series,
            window_count,
        })
    }

    pub fn window_count(&self) -> usize {
        self.window_count
    }

    pub fn series(&self) -> &[AmplitudeSeries] {
        &self.series
    }
}

/// Emits `amplitudes_j[t] - amplitudes_i[t]` for every window `t` and every
/// pair `i < j` in lexicographic order: 120 differences per window.
pub fn pair_differences(block: &RecordingBlock) -> Vec<i32> {
    let mut diffs = Vec::with_capacity(block.window_count * PAIRS_PER_WINDOW);
    for t in 0..block.window_count {
        for i in 0..BLOCK_SIZE {
            for j in (i + 1)..BLOCK_SIZE {
                let a = block.series[i].amplitudes[t] as i32;
                let b = block.series[j].amplitudes[t] as i32;
                diffs.push(b - a);
            }
        }
    }
    diffs
}

/// Folds each nonzero difference to one bit: the XOR of all bits of |d|
/// (the parity of its popcount). Zero differences emit nothing.
///
/// Folding the whole magnitude rather than keeping a single fixed bit
/// position mixes every bit of the difference into the output, which the
/// downstream Von Neumann stage cannot do on its own.
pub fn derive_bits(diffs: &[i32]) -> BitStream {
    let mut out = BitStream::with_capacity(diffs.len());
    for &d in diffs {
        if d != 0 {
            out.push((d.unsigned_abs().count_ones() & 1) as u8);
        }
    }
    out
}

/// Classic Von Neumann extractor: consume non-overlapping consecutive pairs;
/// 01 emits 0, 10 emits 1, 00/11 emit nothing. A trailing unpaired bit is
/// dropped.
pub fn von_neumann(raw: &BitStream) -> BitStream {
    let bits = raw.as_slice();
    let mut out = BitStream::with_capacity(bits.len() / 4);
    for pair in bits.chunks_exact(2) {
        if pair[0] != pair[1] {
            out.push(pair[0]);
        }
    }
    out
}

/// Runs the whole per-block pipeline and concatenates the outputs in block
/// order.
pub fn extract(blocks: &[RecordingBlock]) -> BitStream {
    let mut out = BitStream::new();
    for block in blocks {
        out.extend(&von_neumann(&derive_bits(&pair_differences(block))));
    }
    out
}

/// Groups series into blocks of 16 in input order and extracts. The series
/// count must be a positive multiple of 16; anything else is rejected before
/// any processing.
pub fn extract_series(series: Vec<AmplitudeSeries>) -> Result<BitStream> {
    if series.is_empty() || !series.len().is_multiple_of(BLOCK_SIZE) {
        return Err(Error::BlockCount {
            count: series.len(),
        });
    }
    let mut blocks = Vec::with_capacity(series.len() / BLOCK_SIZE);
    let mut it = series.into_iter();
    while it.len() > 0 {
        blocks.push(RecordingBlock::new(it.by_ref().take(BLOCK_SIZE).collect())?);
    }
    Ok(extract(&blocks))
}
