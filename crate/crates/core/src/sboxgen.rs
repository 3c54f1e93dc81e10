//! S-box generation through a chain of knight's tours over 8x8 value boards.
//!
//! The bitstream is consumed as MSB-first bytes. The first two bytes seed the
//! first start square (`row = b0 mod 8`, `col = b1 mod 8`) and are not board
//! content. Each board is the next 64 bytes, filled row-major. A knight walks
//! the board greedily, always taking the first legal unvisited square in a
//! fixed move priority order; every visited square's value is kept iff it is
//! not yet in the S-box. When a tour gets stuck the board is abandoned and
//! the next board starts at (`S[n-1] mod 8`, `S[n] mod 8`) from the two most
//! recently appended entries, chaining the tours until 256 unique values have
//! been collected.

use crate::bitstream::BitStream;
use crate::error::{Error, Result};
use crate::sbox::SBox;

/// Move priority order: clockwise starting from (+1, +2).
pub const KNIGHT_OFFSETS: [(i8, i8); 8] = [
    (1, 2),
    (2, 1),
    (2, -1),
    (1, -2),
    (-1, -2),
    (-2, -1),
    (-2, 1),
    (-1, 2),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KnightPosition {
    pub row: u8,
    pub col: u8,
}

impl KnightPosition {
    /// Panics if off the 8x8 board.
    pub fn new(row: u8, col: u8) -> Self {
        assert!(row < 8 && col < 8, "position ({row}, {col}) off the board");
        Self { row, col }
    }

    fn offset(self, dr: i8, dc: i8) -> Option<Self> {
        let r = self.row as i8 + dr;
        let c = self.col as i8 + dc;
        if (0..8).contains(&r) && (0..8).contains(&c) {
            Some(Self {
                row: r as u8,
                col: c as u8,
            })
        } else {
            None
        }
    }
}

/// Legal knight moves from `p`, in priority order.
pub fn knight_moves(p: KnightPosition) -> Vec<KnightPosition> {
    KNIGHT_OFFSETS
        .iter()
        .filter_map(|&(dr, dc)| p.offset(dr, dc))
        .collect()
}

/// An 8x8 byte board plus the visited mask of one tour.
#[derive(Debug, Clone)]
pub struct Chessboard {
    pub cells: [[u8; 8]; 8],
    pub visited: [[bool; 8]; 8],
}

/// Fills a fresh board row-major from exactly 64 bytes.
pub fn build_board(bytes: &[u8]) -> Result<Chessboard> {
    if bytes.len() != 64 {
        return Err(Error::BoardUnderrun { got: bytes.len() });
    }
    let mut cells = [[0u8; 8]; 8];
    for (k, &b) in bytes.iter().enumerate() {
        cells[k / 8][k % 8] = b;
    }
    Ok(Chessboard {
        cells,
        visited: [[false; 8]; 8],
    })
}

/// One tour over one board: the start square and every square stepped on.
#[derive(Debug, Clone)]
pub struct BoardTrace {
    pub start: KnightPosition,
    pub path: Vec<KnightPosition>,
    pub collected: Vec<u8>,
}

fn tour_walk(
    board: &mut Chessboard,
    start: KnightPosition,
    taken: &[bool; 256],
    room: usize,
) -> BoardTrace {
    let mut seen = *taken;
    let mut path = Vec::with_capacity(64);
    let mut collected = Vec::new();
    let mut pos = start;
    board.visited[pos.row as usize][pos.col as usize] = true;
    path.push(pos);
    consider(board, pos, &mut seen, &mut collected, room);
    loop {
        if collected.len() >= room {
            break;
        }
        let next = KNIGHT_OFFSETS
            .iter()
            .filter_map(|&(dr, dc)| pos.offset(dr, dc))
            .find(|p| !board.visited[p.row as usize][p.col as usize]);
        match next {
            Some(p) => {
                pos = p;
                board.visited[pos.row as usize][pos.col as usize] = true;
                path.push(pos);
                consider(board, pos, &mut seen, &mut collected, room);
            }
            None => break, // stuck: abandon this board
        }
    }
    BoardTrace {
        start,
        path,
        collected,
    }
}

fn consider(
    board: &Chessboard,
    pos: KnightPosition,
    seen: &mut [bool; 256],
    collected: &mut Vec<u8>,
    room: usize,
) {
    if collected.len() >= room {
        return;
    }
    let v = board.cells[pos.row as usize][pos.col as usize];
    if !seen[v as usize] {
        seen[v as usize] = true;
        collected.push(v);
    }
}

/// Walks one board from `start`, returning the values collected for the
/// S-box: each visited square's value, kept only if absent from `taken` and
/// from earlier in this walk, up to `room` values.
pub fn tour_collect(
    board: &mut Chessboard,
    start: KnightPosition,
    taken: &[bool; 256],
    room: usize,
) -> Vec<u8> {
    tour_walk(board, start, taken, room).collected
}

fn generate_one(bytes: &mut impl Iterator<Item = u8>) -> Result<(SBox, Vec<BoardTrace>)> {
    let (b0, b1) = match (bytes.next(), bytes.next()) {
        (Some(a), Some(b)) => (a, b),
        _ => return Err(Error::SBoxIncomplete { entries_filled: 0 }),
    };
    let mut start = KnightPosition::new(b0 % 8, b1 % 8);

    let mut entries: Vec<u8> = Vec::with_capacity(256);
    let mut taken = [false; 256];
    let mut traces = Vec::new();
    while entries.len() < 256 {
        let mut board_bytes = [0u8; 64];
        for slot in board_bytes.iter_mut() {
            *slot = bytes.next().ok_or(Error::SBoxIncomplete {
                entries_filled: entries.len(),
            })?;
        }
        let mut board = build_board(&board_bytes)?;
        let trace = tour_walk(&mut board, start, &taken, 256 - entries.len());
        for &v in &trace.collected {
            taken[v as usize] = true;
            entries.push(v);
        }
        traces.push(trace);
        // Reseed the next tour from the two most recently appended entries.
        // Until two entries exist the previous start square is kept.
        if entries.len() >= 2 {
            start = KnightPosition::new(entries[entries.len() - 2] % 8, entries[entries.len() - 1] % 8);
        }
    }
    let entries: [u8; 256] = entries.try_into().expect("exactly 256 entries");
    Ok((SBox::from_entries(entries)?, traces))
}

/// Consumes the stream through the knight's-tour chain until the S-box holds
/// all 256 values.
pub fn generate_sbox(bits: &BitStream) -> Result<SBox> {
    generate_sbox_traced(bits).map(|(sbox, _)| sbox)
}

/// Like [`generate_sbox`] but also returns each board's tour trace.
pub fn generate_sbox_traced(bits: &BitStream) -> Result<(SBox, Vec<BoardTrace>)> {
    generate_one(&mut bits.bytes())
}

/// Draws `count` S-boxes back to back from one stream; each starts the chain
/// afresh with its own two seed bytes.
pub fn generate_sboxes(bits: &BitStream, count: usize) -> Result<Vec<SBox>> {
    let mut bytes = bits.bytes();
    (0..count)
        .map(|_| generate_one(&mut bytes).map(|(sbox, _)| sbox))
        .collect()
}

/// Inverse permutation: `out[s[x]] = x` for all `x`.
pub fn reverse_sbox(s: &SBox) -> SBox {
    let mut out = [0u8; 256];
    for x in 0..=255u8 {
        out[s.apply(x) as usize] = x;
    }
    SBox::from_entries(out).expect("inverse of a bijection is a bijection")
}
