//! PCM audio ingestion: RIFF/WAVE parsing and per-window amplitude reduction.
//!
//! Only uncompressed 16-bit PCM (format tag 1) is accepted. Multi-channel
//! files are reduced to channel 0.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// Default analysis window in seconds.
pub const DEFAULT_WINDOW_SECONDS: f64 = 0.5;

/// A decoded mono recording: channel 0 of a 16-bit PCM WAVE file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PcmRecording {
    pub sample_rate: u32,
    pub samples: Vec<i16>,
    pub source_id: String,
}

/// Per-window peak amplitudes of one recording.
///
/// Each amplitude is the maximum absolute sample value inside a window of
/// `window_seconds`; a trailing partial window is discarded, never padded.
#[derive(Debug, Clone, PartialEq)]
pub struct AmplitudeSeries {
    pub window_seconds: f64,
    pub amplitudes: Vec<u16>,
    pub source_id: String,
}

/// Parses a RIFF/WAVE file, keeping channel 0.
pub fn read_pcm(path: &Path) -> Result<PcmRecording> {
    let data = fs::read(path)?;
    let source_id = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    parse_wav(&data, source_id)
}

fn parse_wav(data: &[u8], source_id: String) -> Result<PcmRecording> {
    if data.len() < 12 {
        return Err(Error::MalformedWav("file shorter than RIFF header".into()));
    }
    if &data[0..4] != b"RIFF" {
        return Err(Error::MalformedWav("missing RIFF magic".into()));
    }
    if &data[8..12] != b"WAVE" {
        return Err(Error::MalformedWav("missing WAVE marker".into()));
    }

    let mut fmt: Option<(u16, u16, u32, u16)> = None; // tag, channels, rate, bits
    let mut payload: Option<&[u8]> = None;
    let mut pos = 12;
    while pos + 8 <= data.len() {
        let id = &data[pos..pos + 4];
        let size = u32::from_le_bytes(data[pos + 4..pos + 8].try_into().unwrap()) as usize;
        let body_end = (pos + 8 + size).min(data.len());
        let body = &data[pos + 8..body_end];
        match id {
            b"fmt " => {
                if body.len() < 16 {
                    return Err(Error::MalformedWav("fmt chunk truncated".into()));
                }
                fmt = Some((
                    u16::from_le_bytes(body[0..2].try_into().unwrap()),
                    u16::from_le_bytes(body[2..4].try_into().unwrap()),
                    u32::from_le_bytes(body[4..8].try_into().unwrap()),
                    u16::from_le_bytes(body[14..16].try_into().unwrap()),
                ));
            }
            b"data" => {
                payload = Some(body);
            }
            _ => {}
        }
        // chunks are word-aligned
        pos = pos + 8 + size + (size & 1);
    }

    let (format_tag, channels, sample_rate, bits) =
        fmt.ok_or_else(|| Error::MalformedWav("no fmt chunk".into()))?;
    if format_tag != 1 {
        return Err(Error::UnsupportedSampleFormat { format_tag });
    }
    if bits != 16 {
        return Err(Error::UnsupportedBitDepth { bits });
    }
    if channels == 0 {
        return Err(Error::MalformedWav("zero channels".into()));
    }
    if sample_rate == 0 {
        return Err(Error::MalformedWav("zero sample rate".into()));
    }
    let payload = payload.ok_or_else(|| Error::MalformedWav("no data chunk".into()))?;

    let frame = 2 * channels as usize;
    let mut samples = Vec::with_capacity(payload.len() / frame);
    for chunk in payload.chunks_exact(frame) {
        samples.push(i16::from_le_bytes([chunk[0], chunk[1]]));
    }
    Ok(PcmRecording {
        sample_rate,
        samples,
        source_id,
    })
}

/// Writes a mono 16-bit PCM WAVE file.
pub fn write_pcm(path: &Path, sample_rate: u32, samples: &[i16]) -> Result<()> {
    let data_len = samples.len() * 2;
    let mut out = Vec::with_capacity(44 + data_len);
    out.extend_from_slice(b"RIFF");
    out.extend_from_slice(&(36 + data_len as u32).to_le_bytes());
    out.extend_from_slice(b"WAVE");
    out.extend_from_slice(b"fmt ");
    out.extend_from_slice(&16u32.to_le_bytes());
    out.extend_from_slice(&1u16.to_le_bytes()); // PCM
    out.extend_from_slice(&1u16.to_le_bytes()); // mono
    out.extend_from_slice(&sample_rate.to_le_bytes());
    out.extend_from_slice(&(sample_rate * 2).to_le_bytes());
    out.extend_from_slice(&2u16.to_le_bytes()); // block align
    out.extend_from_slice(&16u16.to_le_bytes());
    out.extend_from_slice(b"data");
    out.extend_from_slice(&(data_len as u32).to_le_bytes());
    for &s in samples {
        out.extend_from_slice(&s.to_le_bytes());
    }
    fs::write(path, out)?;
    Ok(())
}

/// Reduces a recording to its per-window peak amplitudes.
///
/// Window `k` covers samples `[k*W, (k+1)*W)` with
/// `W = floor(window_seconds * sample_rate)`; the amplitude is the peak
/// absolute sample in the window.
pub fn window_amplitudes(rec: &PcmRecording, window_seconds: f64) -> Result<AmplitudeSeries> {
    let w = (window_seconds * rec.sample_rate as f64).floor() as usize;
    if w == 0 {
        return Err(Error::InvalidParam(format!(
            "window of {window_seconds} s spans no samples at {} Hz",
            rec.sample_rate
        )));
    }
    let amplitudes = rec
        .samples
        .chunks_exact(w)
        .map(|win| win.iter().map(|&s| (s as i32).unsigned_abs() as u16).max().unwrap())
        .collect();
    Ok(AmplitudeSeries {
        window_seconds,
        amplitudes,
        source_id: rec.source_id.clone(),
    })
}
