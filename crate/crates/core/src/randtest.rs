//! Core statistical randomness tests and a battery runner.
//!
//! Eight tests are implemented: frequency (monobit), frequency within a
//! block, runs, longest run of ones in a block, serial (two p-values),
//! approximate entropy, and cumulative sums in both directions. Each test
//! reports one or more p-values and the verdict `Random` iff the smallest
//! p-value reaches the significance level.

use statrs::function::erf::erfc;
use statrs::function::gamma::gamma_ur;

use crate::bitstream::BitStream;
use crate::error::{Error, Result};

pub const DEFAULT_ALPHA: f64 = 0.01;
pub const DEFAULT_BLOCK_LEN: usize = 128;
pub const DEFAULT_SERIAL_M: usize = 16;
pub const DEFAULT_APEN_M: usize = 10;

/// Battery report order and display names.
pub const TEST_NAMES: [&str; 8] = [
    "frequency (monobit)",
    "frequency within a block",
    "runs",
    "longest run of ones in a block",
    "serial",
    "approximate entropy",
    "cumulative sums (forward)",
    "cumulative sums (reverse)",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Random,
    NonRandom,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Verdict::Random => write!(f, "random"),
            Verdict::NonRandom => write!(f, "non-random"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct NistResult {
    pub test_name: &'static str,
    pub p_values: Vec<f64>,
    pub verdict: Verdict,
}

impl NistResult {
    fn new(test_name: &'static str, p_values: Vec<f64>, alpha: f64) -> Self {
        let min_p = p_values.iter().copied().fold(f64::INFINITY, f64::min);
        let verdict = if min_p >= alpha {
            Verdict::Random
        } else {
            Verdict::NonRandom
        };
        Self {
            test_name,
            p_values,
            verdict,
        }
    }
}

fn precondition(test: &'static str, ok: bool, reason: impl Fn() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::TestPrecondition {
            test,
            reason: reason(),
        })
    }
}

fn phi(x: f64) -> f64 {
    0.5 * erfc(-x / std::f64::consts::SQRT_2)
}

fn clamp_p(p: f64) -> f64 {
    p.clamp(0.0, 1.0)
}

/// Regularized upper incomplete gamma with the zero-statistic edge handled.
fn igamc(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        1.0
    } else {
        gamma_ur(a, x)
    }
}

/// Frequency (monobit) test: `p = erfc(|S_n| / sqrt(n) / sqrt(2))` with
/// `S_n` the +-1 sum.
pub fn monobit(bits: &BitStream, alpha: f64) -> Result<NistResult> {
    let n = bits.len();
    precondition(TEST_NAMES[0], n >= 1, || "empty stream".into())?;
    let s: i64 = bits.as_slice().iter().map(|&b| 2 * b as i64 - 1).sum();
    let s_obs = s.unsigned_abs() as f64 / (n as f64).sqrt();
    let p = erfc(s_obs / std::f64::consts::SQRT_2);
    Ok(NistResult::new(TEST_NAMES[0], vec![clamp_p(p)], alpha))
}

/// Frequency within a block: chi-square over per-block ones proportions,
/// p-value from the upper incomplete gamma.
pub fn block_frequency(bits: &BitStream, block_len: usize, alpha: f64) -> Result<NistResult> {
    let n = bits.len();
    precondition(TEST_NAMES[1], block_len >= 1, || "block length 0".into())?;
    precondition(TEST_NAMES[1], n >= block_len, || {
        format!("need at least one block of {block_len} bits, got {n}")
    })?;
    let blocks = n / block_len;
    let mut chi2 = 0.0;
    for block in bits.as_slice().chunks_exact(block_len) {
        let ones: usize = block.iter().map(|&b| b as usize).sum();
        let pi = ones as f64 / block_len as f64;
        chi2 += (pi - 0.5) * (pi - 0.5);
    }
    chi2 *= 4.0 * block_len as f64;
    let p = igamc(blocks as f64 / 2.0, chi2 / 2.0);
    Ok(NistResult::new(TEST_NAMES[1], vec![clamp_p(p)], alpha))
}

/// Runs test: total number of runs against its expectation under the
/// observed ones proportion. The standard proportion pretest short-circuits
/// to p = 0.
pub fn runs(bits: &BitStream, alpha: f64) -> Result<NistResult> {
    let n = bits.len();
    precondition(TEST_NAMES[2], n >= 2, || {
        format!("need at least 2 bits, got {n}")
    })?;
    let ones = bits.ones();
    let pi = ones as f64 / n as f64;
    if (pi - 0.5).abs() >= 2.0 / (n as f64).sqrt() {
        return Ok(NistResult::new(TEST_NAMES[2], vec![0.0], alpha));
    }
    let slice = bits.as_slice();
    let v = 1 + slice.windows(2).filter(|w| w[0] != w[1]).count();
    let num = (v as f64 - 2.0 * n as f64 * pi * (1.0 - pi)).abs();
    let den = 2.0 * (2.0 * n as f64).sqrt() * pi * (1.0 - pi);
    let p = erfc(num / den);
    Ok(NistResult::new(TEST_NAMES[2], vec![clamp_p(p)], alpha))
}

/// Longest run of ones in a block, with the block size and class
/// probabilities picked from the stream length as in SP 800-22.
pub fn longest_run(bits: &BitStream, alpha: f64) -> Result<NistResult> {
    let n = bits.len();
    precondition(TEST_NAMES[3], n >= 128, || {
        format!("need at least 128 bits, got {n}")
    })?;
    let (m, classes, pi): (usize, &[u32], &[f64]) = if n < 6272 {
        (8, &[1, 2, 3], &[0.2148, 0.3672, 0.2305, 0.1875])
    } else if n < 750_000 {
        (
            128,
            &[4, 5, 6, 7, 8],
            &[0.1174, 0.2430, 0.2493, 0.1752, 0.1027, 0.1124],
        )
    } else {
        (
            10_000,
            &[10, 11, 12, 13, 14, 15],
            &[0.0882, 0.2092, 0.2483, 0.1933, 0.1208, 0.0675, 0.0727],
        )
    };
    let blocks = n / m;
    let mut nu = vec![0u64; pi.len()];
    for block in bits.as_slice().chunks_exact(m) {
        let mut longest = 0u32;
        let mut current = 0u32;
        for &b in block {
            if b == 1 {
                current += 1;
                longest = longest.max(current);
            } else {
                current = 0;
            }
        }
        // first class absorbs everything <= classes[0], last everything above
        let idx = classes
            .iter()
            .position(|&c| longest <= c)
            .unwrap_or(pi.len() - 1);
        nu[idx] += 1;
    }
    let mut chi2 = 0.0;
    for (i, &p_i) in pi.iter().enumerate() {
        let expected = blocks as f64 * p_i;
        chi2 += (nu[i] as f64 - expected).powi(2) / expected;
    }
    let k = pi.len() as f64 - 1.0;
    let p = igamc(k / 2.0, chi2 / 2.0);
    Ok(NistResult::new(TEST_NAMES[3], vec![clamp_p(p)], alpha))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Forward,
    Reverse,
}

/// Cumulative sums test: maximum excursion of the +-1 random walk, scanned
/// forward or reverse.
pub fn cumulative_sums(bits: &BitStream, direction: Direction, alpha: f64) -> Result<NistResult> {
    let name = match direction {
        Direction::Forward => TEST_NAMES[6],
        Direction::Reverse => TEST_NAMES[7],
    };
    let n = bits.len();
    precondition(name, n >= 1, || "empty stream".into())?;
    let slice = bits.as_slice();
    let mut s = 0i64;
    let mut z = 0i64;
    let mut step = |b: u8| {
        s += 2 * b as i64 - 1;
        z = z.max(s.abs());
    };
    match direction {
        Direction::Forward => slice.iter().for_each(|&b| step(b)),
        Direction::Reverse => slice.iter().rev().for_each(|&b| step(b)),
    }
    let z = z as f64;
    let n_f = n as f64;
    let sqrt_n = n_f.sqrt();
    let mut sum1 = 0.0;
    let k_lo = ((-n_f / z + 1.0) / 4.0).floor() as i64;
    let k_hi = ((n_f / z - 1.0) / 4.0).floor() as i64;
    for k in k_lo..=k_hi {
        let k = k as f64;
        sum1 += phi((4.0 * k + 1.0) * z / sqrt_n) - phi((4.0 * k - 1.0) * z / sqrt_n);
    }
    let mut sum2 = 0.0;
    let k_lo = ((-n_f / z - 3.0) / 4.0).floor() as i64;
    for k in k_lo..=k_hi {
        let k = k as f64;
        sum2 += phi((4.0 * k + 3.0) * z / sqrt_n) - phi((4.0 * k + 1.0) * z / sqrt_n);
    }
    let p = 1.0 - sum1 + sum2;
    Ok(NistResult::new(name, vec![clamp_p(p)], alpha))
}

/// Counts of all overlapping `m`-bit patterns with wraparound.
fn pattern_counts(bits: &[u8], m: usize) -> Vec<u64> {
    let n = bits.len();
    let mut counts = vec![0u64; 1 << m];
    let mask = (1usize << m) - 1;
    let mut window = 0usize;
    for j in 0..m {
        window = (window << 1) | bits[j % n] as usize;
    }
    counts[window] += 1;
    for i in 1..n {
        window = ((window << 1) & mask) | bits[(i + m - 1) % n] as usize;
        counts[window] += 1;
    }
    counts
}

fn psi_squared(bits: &[u8], m: usize) -> f64 {
    if m == 0 {
        return 0.0;
    }
    let n = bits.len() as f64;
    let sum_sq: f64 = pattern_counts(bits, m)
        .iter()
        .map(|&c| (c as f64) * (c as f64))
        .sum();
    (1u64 << m) as f64 / n * sum_sq - n
}

/// Serial test: first- and second-difference psi-square statistics over
/// overlapping `m`-bit patterns; two p-values.
pub fn serial(bits: &BitStream, m: usize, alpha: f64) -> Result<NistResult> {
    let n = bits.len();
    precondition(TEST_NAMES[4], m >= 2, || format!("m = {m} too small"))?;
    precondition(TEST_NAMES[4], n >= 8 && m < (n.ilog2() as usize).saturating_sub(2), || {
        format!("m = {m} too large for {n} bits (need m < floor(log2 n) - 2)")
    })?;
    let slice = bits.as_slice();
    let psi_m = psi_squared(slice, m);
    let psi_m1 = psi_squared(slice, m - 1);
    let psi_m2 = psi_squared(slice, m - 2);
    let d1 = psi_m - psi_m1;
    let d2 = psi_m - 2.0 * psi_m1 + psi_m2;
    let p1 = igamc(2f64.powi(m as i32 - 2), d1 / 2.0);
    let p2 = igamc(2f64.powi(m as i32 - 3), d2 / 2.0);
    Ok(NistResult::new(
        TEST_NAMES[4],
        vec![clamp_p(p1), clamp_p(p2)],
        alpha,
    ))
}

/// Approximate entropy test comparing overlapping `m`- and `m+1`-bit pattern
/// statistics.
pub fn approximate_entropy(bits: &BitStream, m: usize, alpha: f64) -> Result<NistResult> {
    let n = bits.len();
    precondition(TEST_NAMES[5], m >= 1, || "m = 0".into())?;
    precondition(TEST_NAMES[5], n >= 8 && m < (n.ilog2() as usize).saturating_sub(2), || {
        format!("m = {m} too large for {n} bits (need m < floor(log2 n) - 2)")
    })?;
    let slice = bits.as_slice();
    let phi_stat = |mm: usize| -> f64 {
        let n_f = n as f64;
        pattern_counts(slice, mm)
            .iter()
            .filter(|&&c| c > 0)
            .map(|&c| {
                let frac = c as f64 / n_f;
                frac * frac.ln()
            })
            .sum()
    };
    let apen = phi_stat(m) - phi_stat(m + 1);
    let chi2 = 2.0 * n as f64 * (std::f64::consts::LN_2 - apen);
    let p = igamc(2f64.powi(m as i32 - 1), chi2 / 2.0);
    Ok(NistResult::new(TEST_NAMES[5], vec![clamp_p(p)], alpha))
}

/// Runs the whole battery with default parameters, in the fixed report
/// order of [`TEST_NAMES`]. Streams shorter than a million bits still run
/// whatever tests their length permits; per-test preconditions surface as
/// errors in the corresponding slot.
pub fn run_battery(bits: &BitStream, alpha: f64) -> Vec<(&'static str, Result<NistResult>)> {
    vec![
        (TEST_NAMES[0], monobit(bits, alpha)),
        (TEST_NAMES[1], block_frequency(bits, DEFAULT_BLOCK_LEN, alpha)),
        (TEST_NAMES[2], runs(bits, alpha)),
        (TEST_NAMES[3], longest_run(bits, alpha)),
        (TEST_NAMES[4], serial(bits, DEFAULT_SERIAL_M, alpha)),
        (
            TEST_NAMES[5],
            approximate_entropy(bits, DEFAULT_APEN_M, alpha),
        ),
        (
            TEST_NAMES[6],
            cumulative_sums(bits, Direction::Forward, alpha),
        ),
        (
            TEST_NAMES[7],
            cumulative_sums(bits, Direction::Reverse, alpha),
        ),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn alternating(n: usize) -> BitStream {
        BitStream::from_bits((0..n).map(|i| (i % 2) as u8))
    }

    fn constant(bit: u8, n: usize) -> BitStream {
        BitStream::from_bits(std::iter::repeat(bit).take(n))
    }

    #[test]
    fn monobit_balanced_stream_is_certain() {
        let r = monobit(&alternating(100), DEFAULT_ALPHA).unwrap();
        assert_eq!(r.p_values, vec![1.0]);
        assert_eq!(r.verdict, Verdict::Random);
    }

    #[test]
    fn monobit_all_zeros_fails_hard() {
        let r = monobit(&constant(0, 100), DEFAULT_ALPHA).unwrap();
        assert!(r.p_values[0] < 1e-10);
        assert_eq!(r.verdict, Verdict::NonRandom);
    }

    #[test]
    fn monobit_ten_bit_example() {
        // six ones, four zeros: S = 2, p = erfc(2 / sqrt(10) / sqrt(2))
        let bits = BitStream::from_bits([1, 1, 1, 1, 1, 1, 0, 0, 0, 0]);
        let r = monobit(&bits, DEFAULT_ALPHA).unwrap();
        assert!((r.p_values[0] - 0.527089256865538).abs() < 1e-9);
    }

    #[test]
    fn monobit_is_order_invariant() {
        let a = BitStream::from_bits([1, 1, 0, 1, 0, 0, 1, 0, 1, 1, 0, 1]);
        let b = BitStream::from_bits([0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1, 1]);
        assert_eq!(
            monobit(&a, DEFAULT_ALPHA).unwrap().p_values,
            monobit(&b, DEFAULT_ALPHA).unwrap().p_values
        );
    }

    #[test]
    fn block_frequency_half_ones_blocks() {
        // every 128-bit block has exactly 64 ones -> chi2 = 0 -> p = 1
        let r = block_frequency(&alternating(1280), DEFAULT_BLOCK_LEN, DEFAULT_ALPHA).unwrap();
        assert_eq!(r.p_values, vec![1.0]);
    }

    #[test]
    fn block_frequency_constant_stream() {
        let r = block_frequency(&constant(0, 1280), DEFAULT_BLOCK_LEN, DEFAULT_ALPHA).unwrap();
        assert!(r.p_values[0] < 1e-10);
    }

    #[test]
    fn block_frequency_needs_one_block() {
        assert!(block_frequency(&alternating(100), 128, DEFAULT_ALPHA).is_err());
    }

    #[test]
    fn runs_alternating_explodes() {
        // V = 100 runs against an expectation of 50: frozen oracle value
        let r = runs(&alternating(100), DEFAULT_ALPHA).unwrap();
        let expected = 1.523_970_604_832_105e-23;
        assert!((r.p_values[0] - expected).abs() < expected * 1e-6);
        assert_eq!(r.verdict, Verdict::NonRandom);
    }

    #[test]
    fn runs_pretest_short_circuit() {
        let r = runs(&constant(1, 100), DEFAULT_ALPHA).unwrap();
        assert_eq!(r.p_values, vec![0.0]);
    }

    #[test]
    fn cumulative_sums_all_zeros() {
        let r = cumulative_sums(&constant(0, 200), Direction::Forward, DEFAULT_ALPHA).unwrap();
        assert!(r.p_values[0] < 1e-10);
    }

    #[test]
    fn serial_returns_two_p_values() {
        let bits = BitStream::from_bits((0..4096).map(|i| ((i * 7 + i / 3) % 2) as u8));
        let r = serial(&bits, 3, DEFAULT_ALPHA).unwrap();
        assert_eq!(r.p_values.len(), 2);
    }

    #[test]
    fn serial_m_bound_enforced() {
        let bits = alternating(1 << 10);
        assert!(serial(&bits, 8, DEFAULT_ALPHA).is_err()); // floor(log2) - 2 = 8
        assert!(serial(&bits, 7, DEFAULT_ALPHA).is_ok());
    }

    #[test]
    fn battery_all_ones_rejects_everything() {
        let results = run_battery(&constant(1, 1 << 20), DEFAULT_ALPHA);
        assert_eq!(results.len(), 8);
        for (name, r) in results {
            let r = r.unwrap_or_else(|e| panic!("{name} errored: {e}"));
            assert_eq!(r.verdict, Verdict::NonRandom, "{name} should reject");
        }
    }

    #[test]
    fn battery_empty_stream_reports_preconditions() {
        let results = run_battery(&BitStream::new(), DEFAULT_ALPHA);
        assert_eq!(results.len(), 8);
        for (name, r) in results {
            assert!(r.is_err(), "{name} should report its precondition");
        }
    }
}
