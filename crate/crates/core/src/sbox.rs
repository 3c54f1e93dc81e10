//! The 8x8 substitution box: a bijection on bytes, stored as 256 entries.
//!
//! The text format mirrors the usual 16x16 tabulation: 16 lines of 16
//! decimal values, row-major. Comma-separated flat lists are also accepted.

use std::fmt;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq)]
pub struct SBox {
    entries: [u8; 256],
}

impl SBox {
    /// Validates that `entries` is a permutation of 0..=255.
    pub fn from_entries(entries: [u8; 256]) -> Result<Self> {
        if let Some(&dup) = duplicated_values(&entries).first() {
            return Err(Error::NotBijective { value: dup });
        }
        Ok(Self { entries })
    }

    pub fn identity() -> Self {
        let mut entries = [0u8; 256];
        for (x, e) in entries.iter_mut().enumerate() {
            *e = x as u8;
        }
        Self { entries }
    }

    #[inline]
    pub fn apply(&self, x: u8) -> u8 {
        self.entries[x as usize]
    }

    pub fn entries(&self) -> &[u8; 256] {
        &self.entries
    }

    /// Parses either the 16x16 table layout or a comma-separated flat list.
    pub fn parse(text: &str) -> Result<Self> {
        Self::from_entries(parse_entries(text)?)
    }

    pub fn read_file(path: &Path) -> Result<Self> {
        Self::parse(&fs::read_to_string(path)?)
    }

    pub fn write_file(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_string())?;
        Ok(())
    }
}

impl fmt::Display for SBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.entries.chunks(16) {
            let line: Vec<String> = row.iter().map(|v| format!("{v:3}")).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

impl fmt::Debug for SBox {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "SBox[{}, {}, {}, ..., {}]",
            self.entries[0], self.entries[1], self.entries[2], self.entries[255]
        )
    }
}

/// Parses 256 byte values (16x16 table or comma-separated) without checking
/// bijectivity, so that defective tables can still be inspected.
pub fn parse_entries(text: &str) -> Result<[u8; 256]> {
    let mut values = Vec::with_capacity(256);
    for token in text.split(|c: char| c.is_whitespace() || c == ',') {
        if token.is_empty() {
            continue;
        }
        let v: u16 = token
            .parse()
            .map_err(|_| Error::SBoxParse(format!("bad token {token:?}")))?;
        if v > 255 {
            return Err(Error::SBoxParse(format!("value {v} out of byte range")));
        }
        values.push(v as u8);
    }
    if values.len() != 256 {
        return Err(Error::SBoxParse(format!(
            "expected 256 values, found {}",
            values.len()
        )));
    }
    Ok(values.try_into().unwrap())
}

/// Every value that appears more than once, ascending, each listed once.
pub fn duplicated_values(entries: &[u8; 256]) -> Vec<u8> {
    let mut counts = [0u16; 256];
    for &v in entries {
        counts[v as usize] += 1;
    }
    counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 1)
        .map(|(v, _)| v as u8)
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_is_bijective() {
        let s = SBox::identity();
        for x in 0..=255u8 {
            assert_eq!(s.apply(x), x);
        }
    }

    #[test]
    fn duplicate_rejected_with_value() {
        let mut entries = *SBox::identity().entries();
        entries[5] = 9; // 9 now appears twice, 5 never
        match SBox::from_entries(entries) {
            Err(Error::NotBijective { value: 9 }) => {}
            other => panic!("unexpected: {other:?}"),
        }
        assert_eq!(duplicated_values(&entries), vec![9]);
    }

    #[test]
    fn display_parse_roundtrip() {
        let mut entries = [0u8; 256];
        for (x, e) in entries.iter_mut().enumerate() {
            *e = (x as u8).wrapping_mul(167).wrapping_add(13);
        }
        let s = SBox::from_entries(entries).unwrap();
        let text = s.to_string();
        assert_eq!(text.lines().count(), 16);
        assert_eq!(SBox::parse(&text).unwrap(), s);
    }

    #[test]
    fn parse_comma_separated() {
        let flat: Vec<String> = (0..=255u16).map(|v| v.to_string()).collect();
        let s = SBox::parse(&flat.join(",")).unwrap();
        assert_eq!(s, SBox::identity());
    }

    #[test]
    fn parse_rejects_wrong_count_and_range() {
        assert!(matches!(SBox::parse("1 2 3"), Err(Error::SBoxParse(_))));
        let flat: Vec<String> = (1..=256u16).map(|v| v.to_string()).collect();
        assert!(matches!(
            SBox::parse(&flat.join(" ")),
            Err(Error::SBoxParse(_))
        ));
    }
}
