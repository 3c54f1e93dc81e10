//! The five standard S-box quality criteria: nonlinearity, strict avalanche,
//! bit independence, linear approximation probability and differential
//! approximation probability.
//!
//! All counting is done in exact integer arithmetic; probabilities only
//! become floats at the reporting boundary. The spectral fast paths
//! (Walsh-Hadamard) are cross-checked against brute-force oracles in the
//! test suite.

use serde_json::json;

use crate::error::{Error, Result};
use crate::sbox::{duplicated_values, SBox};

/// In-place fast Walsh-Hadamard butterfly.
fn fwht(v: &mut [i32]) {
    let mut h = 1;
    while h < v.len() {
        let mut i = 0;
        while i < v.len() {
            for j in i..i + h {
                let (x, y) = (v[j], v[j + h]);
                v[j] = x + y;
                v[j + h] = x - y;
            }
            i += 2 * h;
        }
        h *= 2;
    }
}

/// Walsh spectrum of a Boolean function given as a 0/1 truth table.
///
/// `spectrum[m] = sum_x (-1)^(f(x) XOR <x, m>)` with the GF(2) dot product
/// `<x, m> = parity(x AND m)`, computed by fast transform in `O(n 2^n)`.
pub fn walsh_spectrum(truth_table: &[u8]) -> Result<Vec<i32>> {
    if truth_table.is_empty() || !truth_table.len().is_power_of_two() {
        return Err(Error::InvalidParam(format!(
            "truth table length {} is not a power of two",
            truth_table.len()
        )));
    }
    let mut v: Vec<i32> = truth_table
        .iter()
        .map(|&b| if b == 0 { 1 } else { -1 })
        .collect();
    fwht(&mut v);
    Ok(v)
}

/// Truth table of the component `x -> parity(mask AND s(x))`.
fn component_truth_table(s: &SBox, mask: u8) -> Vec<u8> {
    (0..256)
        .map(|x| ((s.apply(x as u8) & mask).count_ones() & 1) as u8)
        .collect()
}

/// Nonlinearity of one component from its Walsh spectrum maximum.
fn component_nl(s: &SBox, mask: u8) -> u32 {
    let spectrum = walsh_spectrum(&component_truth_table(s, mask)).expect("length 256");
    let max_abs = spectrum.iter().map(|w| w.unsigned_abs()).max().unwrap();
    128 - max_abs / 2
}

/// Nonlinearity of the 8 coordinate functions and of all 255 components.
#[derive(Debug, Clone, PartialEq)]
pub struct NonlinearityProfile {
    /// NL of output bit `i` (mask `1 << i`).
    pub per_coordinate: [u32; 8],
    /// Minimum NL over all 255 nonzero output masks.
    pub min_component: u32,
    /// Maximum of `per_coordinate`; the figure usually quoted in comparisons.
    pub max_coordinate: u32,
    pub avg_coordinate: f64,
}

pub fn nonlinearity(s: &SBox) -> NonlinearityProfile {
    let mut per_coordinate = [0u32; 8];
    for (i, slot) in per_coordinate.iter_mut().enumerate() {
        *slot = component_nl(s, 1 << i);
    }
    let min_component = (1..=255u8).map(|m| component_nl(s, m)).min().unwrap();
    NonlinearityProfile {
        per_coordinate,
        min_component,
        max_coordinate: *per_coordinate.iter().max().unwrap(),
        avg_coordinate: per_coordinate.iter().sum::<u32>() as f64 / 8.0,
    }
}

/// The 8x8 avalanche dependency matrix.
///
/// `flip_counts[r][w]` counts inputs whose output bit `7-r` flips when input
/// bit `7-w` flips (rows and columns run MSB-first, matching the usual
/// tabulation). Every probability is an exact multiple of 1/256.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SacMatrix {
    pub flip_counts: [[u32; 8]; 8],
}

impl SacMatrix {
    pub fn q(&self, r: usize, w: usize) -> f64 {
        self.flip_counts[r][w] as f64 / 256.0
    }

    pub fn matrix(&self) -> [[f64; 8]; 8] {
        let mut m = [[0.0; 8]; 8];
        for r in 0..8 {
            for w in 0..8 {
                m[r][w] = self.q(r, w);
            }
        }
        m
    }

    /// Mean of the dependency matrix; 0.5 is ideal.
    pub fn mean(&self) -> f64 {
        let total: u32 = self.flip_counts.iter().flatten().sum();
        total as f64 / (64.0 * 256.0)
    }

    /// Mean absolute offset from 1/2 over all entries; 0 is ideal.
    pub fn offset_score(&self) -> f64 {
        let mut acc = 0.0;
        for row in &self.flip_counts {
            for &c in row {
                acc += (0.5 - c as f64 / 256.0).abs();
            }
        }
        acc / 64.0
    }
}

pub fn sac(s: &SBox) -> SacMatrix {
    let mut flip_counts = [[0u32; 8]; 8];
    for col in 0..8 {
        let flip = 1u8 << (7 - col);
        for x in 0..=255u8 {
            let d = s.apply(x) ^ s.apply(x ^ flip);
            for (row, counts) in flip_counts.iter_mut().enumerate() {
                counts[col] += u32::from((d >> (7 - row)) & 1);
            }
        }
    }
    SacMatrix { flip_counts }
}

/// Pairwise independence of output-bit avalanche variables.
///
/// `xor_flip_counts[j][k]` accumulates, over all 8 single-bit input flips and
/// all 256 inputs, how often output bits `7-j` and `7-k` (MSB-first again)
/// change differently; `dependence(j, k)` is that count over 2048 and sits at
/// 1/2 for ideally independent bits. `max_abs_correlation` is the largest
/// absolute Pearson correlation between two avalanche bit vectors under any
/// single flip, with zero-variance vectors contributing 0.
#[derive(Debug, Clone, PartialEq)]
pub struct BicMatrix {
    pub xor_flip_counts: [[u32; 8]; 8],
    pub max_abs_correlation: [[f64; 8]; 8],
}

impl BicMatrix {
    /// None on the diagonal, where the measure is undefined.
    pub fn dependence(&self, j: usize, k: usize) -> Option<f64> {
        (j != k).then(|| self.xor_flip_counts[j][k] as f64 / 2048.0)
    }

    pub fn dependence_matrix(&self) -> [[Option<f64>; 8]; 8] {
        let mut m = [[None; 8]; 8];
        for j in 0..8 {
            for k in 0..8 {
                m[j][k] = self.dependence(j, k);
            }
        }
        m
    }

    pub fn correlation(&self, j: usize, k: usize) -> Option<f64> {
        (j != k).then(|| self.max_abs_correlation[j][k])
    }

    /// Worst pair statistic: maximum over all pairs of output bits.
    pub fn max_correlation(&self) -> f64 {
        let mut best = 0.0f64;
        for j in 0..8 {
            for k in 0..8 {
                if j != k {
                    best = best.max(self.max_abs_correlation[j][k]);
                }
            }
        }
        best
    }
}

pub fn bic(s: &SBox) -> BicMatrix {
    // avalanche[i][x] = S(x) ^ S(x ^ e_i)
    let mut avalanche = [[0u8; 256]; 8];
    for i in 0..8 {
        let flip = 1u8 << (7 - i);
        for x in 0..=255u16 {
            avalanche[i][x as usize] = s.apply(x as u8) ^ s.apply(x as u8 ^ flip);
        }
    }

    let mut xor_flip_counts = [[0u32; 8]; 8];
    let mut max_abs_correlation = [[0.0f64; 8]; 8];
    for j in 0..8 {
        for k in 0..8 {
            if j == k {
                continue;
            }
            let (bj, bk) = (7 - j as u8, 7 - k as u8);
            let mut best = 0.0f64;
            for row in &avalanche {
                let mut sum_a = 0i64;
                let mut sum_b = 0i64;
                let mut sum_ab = 0i64;
                for &d in row.iter() {
                    let a = i64::from((d >> bj) & 1);
                    let b = i64::from((d >> bk) & 1);
                    sum_a += a;
                    sum_b += b;
                    sum_ab += a & b;
                    xor_flip_counts[j][k] += (((d >> bj) ^ (d >> bk)) & 1) as u32;
                }
                let n = 256i64;
                let var_a = n * sum_a - sum_a * sum_a;
                let var_b = n * sum_b - sum_b * sum_b;
                if var_a > 0 && var_b > 0 {
                    let num = (n * sum_ab - sum_a * sum_b) as f64;
                    let corr = (num / ((var_a as f64).sqrt() * (var_b as f64).sqrt())).abs();
                    best = best.max(corr);
                }
            }
            max_abs_correlation[j][k] = best;
        }
    }
    BicMatrix {
        xor_flip_counts,
        max_abs_correlation,
    }
}

/// Maximum linear bias over all nonzero input/output mask pairs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearProfile {
    /// `max |#{x : <x, g1> = <S(x), g2>} - 128|` over nonzero masks.
    pub max_bias_count: u32,
    /// `max_bias_count / 256`, always a multiple of 1/256.
    pub probability: f64,
}

/// Computes the linear approximation probability through the Walsh spectra
/// of the 255 output components.
pub fn lp(s: &SBox) -> LinearProfile {
    let mut max_abs_w = 0u32;
    for mask in 1..=255u8 {
        let spectrum = walsh_spectrum(&component_truth_table(s, mask)).expect("length 256");
        for w in &spectrum[1..] {
            max_abs_w = max_abs_w.max(w.unsigned_abs());
        }
    }
    LinearProfile {
        max_bias_count: max_abs_w / 2,
        probability: max_abs_w as f64 / 512.0,
    }
}

/// The full 256x256 difference distribution table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DifferenceDistributionTable {
    pub counts: Box<[[u16; 256]; 256]>,
    /// Maximum count over rows with nonzero input difference.
    pub max_count: u16,
}

impl DifferenceDistributionTable {
    /// `max_count / 256`, the differential approximation probability.
    pub fn probability(&self) -> f64 {
        self.max_count as f64 / 256.0
    }
}

pub fn dp(s: &SBox) -> DifferenceDistributionTable {
    let mut counts = Box::new([[0u16; 256]; 256]);
    for dx in 0..256usize {
        for x in 0..256usize {
            let dy = s.apply(x as u8) ^ s.apply(x as u8 ^ dx as u8);
            counts[dx][dy as usize] += 1;
        }
    }
    let max_count = counts[1..]
        .iter()
        .flat_map(|row| row.iter().copied())
        .max()
        .unwrap();
    DifferenceDistributionTable { counts, max_count }
}

/// Aggregate quality report for an arbitrary 256-entry table.
///
/// The criteria are only defined for bijections; a non-bijective table gets
/// the verdict and the list of duplicated values, nothing more.
#[derive(Debug, Clone)]
pub struct SBoxReport {
    pub bijective: bool,
    pub duplicated_values: Vec<u8>,
    pub nl: Option<NonlinearityProfile>,
    pub sac: Option<SacMatrix>,
    pub bic: Option<BicMatrix>,
    pub lp: Option<LinearProfile>,
    pub ddt: Option<DdtSummary>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DdtSummary {
    pub max_count: u16,
    pub probability: f64,
}

pub fn full_report(entries: &[u8; 256]) -> SBoxReport {
    match SBox::from_entries(*entries) {
        Ok(s) => {
            let ddt = dp(&s);
            SBoxReport {
                bijective: true,
                duplicated_values: Vec::new(),
                nl: Some(nonlinearity(&s)),
                sac: Some(sac(&s)),
                bic: Some(bic(&s)),
                lp: Some(lp(&s)),
                ddt: Some(DdtSummary {
                    max_count: ddt.max_count,
                    probability: ddt.probability(),
                }),
            }
        }
        Err(_) => SBoxReport {
            bijective: false,
            duplicated_values: duplicated_values(entries),
            nl: None,
            sac: None,
            bic: None,
            lp: None,
            ddt: None,
        },
    }
}

impl SBoxReport {
    /// JSON form:
    /// `{bijective, nl:{per_coordinate, min_component, max_coordinate, avg},
    ///   sac:{matrix, score, offset_score}, bic:{matrix, max_correlation},
    ///   lp, dp:{max_count, probability}}`
    /// where `sac.score` is the dependency-matrix mean.
    pub fn to_json(&self) -> serde_json::Value {
        if !self.bijective {
            return json!({
                "bijective": false,
                "duplicated_values": self.duplicated_values,
            });
        }
        let nl = self.nl.as_ref().unwrap();
        let sac = self.sac.as_ref().unwrap();
        let bic = self.bic.as_ref().unwrap();
        json!({
            "bijective": true,
            "nl": {
                "per_coordinate": nl.per_coordinate,
                "min_component": nl.min_component,
                "max_coordinate": nl.max_coordinate,
                "avg": nl.avg_coordinate,
            },
            "sac": {
                "matrix": sac.matrix(),
                "score": sac.mean(),
                "offset_score": sac.offset_score(),
            },
            "bic": {
                "matrix": bic.dependence_matrix(),
                "max_correlation": bic.max_correlation(),
            },
            "lp": self.lp.unwrap().probability,
            "dp": {
                "max_count": self.ddt.unwrap().max_count,
                "probability": self.ddt.unwrap().probability,
            },
        })
    }

    /// Human-readable report with the matrices laid out as 8x8 tables at six
    /// decimals.
    pub fn render_text(&self) -> String {
        use std::fmt::Write;
        let mut out = String::new();
        if !self.bijective {
            let _ = writeln!(out, "bijective: no");
            let _ = writeln!(out, "duplicated values: {:?}", self.duplicated_values);
            return out;
        }
        let nl = self.nl.as_ref().unwrap();
        let _ = writeln!(out, "bijective: yes");
        let _ = writeln!(
            out,
            "nonlinearity: max coordinate {}, avg coordinate {:.3}, min component {}",
            nl.max_coordinate, nl.avg_coordinate, nl.min_component
        );
        let _ = writeln!(out, "  per coordinate: {:?}", nl.per_coordinate);
        let sac = self.sac.as_ref().unwrap();
        let _ = writeln!(
            out,
            "sac: mean {:.6}, offset score {:.6}",
            sac.mean(),
            sac.offset_score()
        );
        for row in 0..8 {
            let line: Vec<String> = (0..8).map(|col| format!("{:.6}", sac.q(row, col))).collect();
            let _ = writeln!(out, "  {}", line.join(" "));
        }
        let bic = self.bic.as_ref().unwrap();
        let _ = writeln!(out, "bic: max pair correlation {:.6}", bic.max_correlation());
        for j in 0..8 {
            let line: Vec<String> = (0..8)
                .map(|k| match bic.dependence(j, k) {
                    Some(v) => format!("{v:.6}"),
                    None => "-".repeat(8),
                })
                .collect();
            let _ = writeln!(out, "  {}", line.join(" "));
        }
        let _ = writeln!(out, "lp: {:.6}", self.lp.unwrap().probability);
        let ddt = self.ddt.unwrap();
        let _ = writeln!(
            out,
            "dp: max count {} -> probability {:.6}",
            ddt.max_count, ddt.probability
        );
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_zero_spectrum() {
        let spec = walsh_spectrum(&[0u8; 8]).unwrap();
        assert_eq!(spec, vec![8, 0, 0, 0, 0, 0, 0, 0]);
    }

    #[test]
    fn linear_function_spectrum_concentrates() {
        // f(x) = <x, 5> on 3 bits
        let tt: Vec<u8> = (0..8u32).map(|x| ((x & 5).count_ones() & 1) as u8).collect();
        let spec = walsh_spectrum(&tt).unwrap();
        for (m, &w) in spec.iter().enumerate() {
            if m == 5 {
                assert_eq!(w, 8);
            } else {
                assert_eq!(w, 0);
            }
        }
    }

    #[test]
    fn non_power_of_two_rejected() {
        assert!(walsh_spectrum(&[0, 1, 0]).is_err());
        assert!(walsh_spectrum(&[]).is_err());
    }

    #[test]
    fn identity_coordinates_are_linear() {
        let profile = nonlinearity(&SBox::identity());
        assert_eq!(profile.per_coordinate, [0; 8]);
        assert_eq!(profile.max_coordinate, 0);
        assert_eq!(profile.min_component, 0);
    }

    #[test]
    fn identity_sac_is_the_identity_pattern() {
        let m = sac(&SBox::identity());
        for r in 0..8 {
            for w in 0..8 {
                // flipping input bit b flips exactly output bit b
                let expected = if r == w { 1.0 } else { 0.0 };
                assert_eq!(m.q(r, w), expected);
            }
        }
        assert_eq!(m.offset_score(), 0.5);
    }

    #[test]
    fn bic_matrices_are_symmetric() {
        let mut entries = [0u8; 256];
        for (x, e) in entries.iter_mut().enumerate() {
            *e = (x as u8).wrapping_mul(101).wrapping_add(55);
        }
        let b = bic(&SBox::from_entries(entries).unwrap());
        for j in 0..8 {
            for k in 0..8 {
                assert_eq!(b.xor_flip_counts[j][k], b.xor_flip_counts[k][j]);
                assert_eq!(b.max_abs_correlation[j][k], b.max_abs_correlation[k][j]);
            }
        }
    }

    #[test]
    fn identity_lp_is_half() {
        assert_eq!(lp(&SBox::identity()).probability, 0.5);
    }

    #[test]
    fn xor_constant_has_dp_one() {
        let mut entries = [0u8; 256];
        for (x, e) in entries.iter_mut().enumerate() {
            *e = x as u8 ^ 0xA7;
        }
        let table = dp(&SBox::from_entries(entries).unwrap());
        assert_eq!(table.max_count, 256);
        assert_eq!(table.probability(), 1.0);
    }

    #[test]
    fn ddt_zero_row_is_concentrated() {
        let mut entries = [0u8; 256];
        for (x, e) in entries.iter_mut().enumerate() {
            *e = (x as u8).wrapping_mul(89).wrapping_add(3);
        }
        let table = dp(&SBox::from_entries(entries).unwrap());
        assert_eq!(table.counts[0][0], 256);
        assert!(table.counts[0][1..].iter().all(|&c| c == 0));
    }

    #[test]
    fn identity_report_composite() {
        let report = full_report(SBox::identity().entries());
        assert!(report.bijective);
        assert_eq!(report.nl.as_ref().unwrap().max_coordinate, 0);
        assert_eq!(report.sac.as_ref().unwrap().offset_score(), 0.5);
        assert_eq!(report.lp.unwrap().probability, 0.5);
        assert_eq!(report.ddt.unwrap().probability, 1.0);
    }

    #[test]
    fn duplicate_table_reported_not_computed() {
        let mut entries = [0u8; 256];
        for (x, e) in entries.iter_mut().enumerate() {
            *e = x as u8;
        }
        entries[200] = 7;
        let report = full_report(&entries);
        assert!(!report.bijective);
        assert_eq!(report.duplicated_values, vec![7]);
        assert!(report.nl.is_none());
        let j = report.to_json();
        assert_eq!(j["bijective"], serde_json::Value::Bool(false));
    }
}
