//! Latin squares from bipermutive rules, orthogonality, and the
//! (2,2)-multipermutation property.

use crate::ca::{is_bipermutive, LocalRule};
use crate::error::{Error, Result};

/// Largest block length `n` for which a square of order `2^n` is materialized.
pub const MAX_SQUARE_BLOCK: u32 = 10;

/// An `N x N` array over the symbols `0..N`, row-major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LatinSquare {
    order: usize,
    entries: Vec<u32>,
}

impl LatinSquare {
    /// Builds a square from rows; the Latin property is not checked.
    pub fn from_rows(rows: &[Vec<u32>]) -> Result<Self> {
        let order = rows.len();
        if rows.iter().any(|r| r.len() != order) {
            return Err(Error::OrderMismatch(order, rows.first().map_or(0, Vec::len)));
        }
        Ok(LatinSquare {
            order,
            entries: rows.concat(),
        })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn get(&self, row: usize, col: usize) -> u32 {
        self.entries[row * self.order + col]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[u32]> {
        self.entries.chunks(self.order.max(1))
    }

    /// `N` lines of `N` comma-separated integers.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        for row in self.rows() {
            let line: Vec<String> = row.iter().map(u32::to_string).collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

/// Entry `(i, j)` is the global rule applied to the `2n` cells `bits(i) || bits(j)`.
pub fn square_from_rule(rule: &LocalRule) -> Result<LatinSquare> {
    if !is_bipermutive(rule) {
        return Err(Error::NotBipermutive);
    }
    let n = rule.block_len();
    if n > MAX_SQUARE_BLOCK {
        return Err(Error::SquareTooLarge(1 << n));
    }
    let order = 1usize << n;
    let entries = (0..order as u64)
        .flat_map(|i| (0..order as u64).map(move |j| (i << n) | j))
        .map(|s| rule.apply_packed(s, 2 * n) as u32)
        .collect();
    Ok(LatinSquare { order, entries })
}

fn is_permutation(symbols: impl Iterator<Item = u32>, order: usize) -> bool {
    let mut seen = vec![false; order];
    for s in symbols {
        match seen.get_mut(s as usize) {
            Some(slot) if !*slot => *slot = true,
            _ => return false,
        }
    }
    true
}

pub fn is_latin(sq: &LatinSquare) -> bool {
    let n = sq.order;
    (0..n).all(|i| is_permutation((0..n).map(|j| sq.get(i, j)), n))
        && (0..n).all(|j| is_permutation((0..n).map(|i| sq.get(i, j)), n))
}

/// True iff superposing the squares yields every ordered pair exactly once.
pub fn are_orthogonal(a: &LatinSquare, b: &LatinSquare) -> Result<bool> {
    if a.order != b.order {
        return Err(Error::OrderMismatch(a.order, b.order));
    }
    let n = a.order;
    let mut seen = vec![false; n * n];
    for (&x, &y) in a.entries.iter().zip(&b.entries) {
        if x as usize >= n || y as usize >= n {
            return Ok(false);
        }
        let slot = &mut seen[x as usize * n + y as usize];
        if *slot {
            return Ok(false);
        }
        *slot = true;
    }
    Ok(true)
}

/// (2,2)-multipermutation test on the map `(x, y) -> (F(x,y), G(x,y))`.
///
/// Distinct tuples `(x, y, F, G)` must differ in at least three of the four
/// `n`-bit blocks, i.e. every choice of two blocks determines the tuple.
pub fn is_multipermutation(f: &LocalRule, g: &LocalRule) -> Result<bool> {
    if f.diameter() != g.diameter() {
        return Err(Error::DiameterMismatch(f.diameter(), g.diameter()));
    }
    let n = f.block_len();
    if 2 * n > 32 {
        return Err(Error::PhaseSpaceTooLarge(2 * n));
    }
    let states = 1u64 << (2 * n);
    let block = (1u64 << n) - 1;
    let tuples: Vec<[u64; 4]> = (0..states)
        .map(|s| {
            [
                s >> n,
                s & block,
                f.apply_packed(s, 2 * n),
                g.apply_packed(s, 2 * n),
            ]
        })
        .collect();
    let mut seen = vec![0u64; (states as usize + 63) / 64];
    for a in 0..4 {
        for b in a + 1..4 {
            seen.iter_mut().for_each(|w| *w = 0);
            for t in &tuples {
                let key = (t[a] << n | t[b]) as usize;
                if seen[key / 64] >> (key % 64) & 1 == 1 {
                    return Ok(false);
                }
                seen[key / 64] |= 1 << (key % 64);
            }
        }
    }
    Ok(true)
}
