//! The dynamical system on `2n`-cell states driven by a pair of rules:
//! the new left half is `F(s)`, the new right half is `G(s)`.

use std::collections::BTreeMap;

use serde::ser::SerializeSeq;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::ca::{is_bipermutive, LocalRule};
use crate::error::{Error, Result};

/// Largest phase space (`2n` bits) swept exhaustively.
pub const MAX_SWEEP_BITS: u32 = 32;

/// A `2n`-bit state `(x, y)`, leftmost cell most significant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct SystemState {
    n: u32,
    bits: u64,
}

impl SystemState {
    pub fn new(n: u32, bits: u64) -> Result<Self> {
        if n == 0 || n > 32 {
            return Err(Error::InvalidLength(2 * n));
        }
        if n < 32 && bits >> (2 * n) != 0 {
            return Err(Error::StateMismatch {
                expected: n,
                got: (64 - bits.leading_zeros() + 1) / 2,
            });
        }
        Ok(SystemState { n, bits })
    }

    /// State from `2n` cells given as 0/1 values, cell 1 first.
    pub fn from_cells(cells: &[u8]) -> Result<Self> {
        if cells.len() % 2 != 0 {
            return Err(Error::InvalidLength(cells.len() as u32));
        }
        let bits = cells.iter().fold(0u64, |acc, &c| acc << 1 | (c & 1) as u64);
        Self::new(cells.len() as u32 / 2, bits)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn bits(&self) -> u64 {
        self.bits
    }

    pub fn left(&self) -> u64 {
        self.bits >> self.n
    }

    pub fn right(&self) -> u64 {
        self.bits & ((1 << self.n) - 1)
    }

    pub fn cells(&self) -> Vec<u8> {
        (0..2 * self.n)
            .rev()
            .map(|i| ((self.bits >> i) & 1) as u8)
            .collect()
    }

    /// The state as a GF(2) column vector: component `j` is cell `j + 1`.
    pub fn to_column_vector(&self) -> u128 {
        let w = 2 * self.n;
        (0..w).fold(0u128, |acc, j| acc | (((self.bits >> (w - 1 - j)) & 1) as u128) << j)
    }

    pub fn from_column_vector(n: u32, v: u128) -> Result<Self> {
        let w = 2 * n;
        let bits = (0..w).fold(0u64, |acc, j| acc << 1 | ((v >> j) & 1) as u64);
        Self::new(n, bits)
    }
}

/// The multiset of cycle lengths of a permutation of the phase space.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CycleDecomposition {
    cycles: BTreeMap<u64, u64>,
}

impl CycleDecomposition {
    pub fn from_counts(cycles: impl IntoIterator<Item = (u64, u64)>) -> Self {
        let mut map = BTreeMap::new();
        for (len, count) in cycles {
            *map.entry(len).or_insert(0) += count;
        }
        CycleDecomposition { cycles: map }
    }

    /// `(length, count)` pairs sorted by length.
    pub fn pairs(&self) -> Vec<(u64, u64)> {
        self.cycles.iter().map(|(&l, &c)| (l, c)).collect()
    }

    pub fn total_states(&self) -> u64 {
        self.cycles.iter().map(|(l, c)| l * c).sum()
    }

    pub fn max_cycle(&self) -> u64 {
        self.cycles.keys().next_back().copied().unwrap_or(0)
    }

    pub fn lcm(&self) -> u64 {
        self.cycles.keys().fold(1, |acc, &l| acc / gcd(acc, l) * l)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Serialized as `{"pairs": [[length, count], ...]}`.
impl Serialize for CycleDecomposition {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        struct Pairs<'a>(&'a BTreeMap<u64, u64>);
        impl Serialize for Pairs<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut seq = s.serialize_seq(Some(self.0.len()))?;
                for (l, c) in self.0 {
                    seq.serialize_element(&[l, c])?;
                }
                seq.end()
            }
        }
        #[derive(Serialize)]
        struct Wire<'a> {
            pairs: Pairs<'a>,
        }
        Wire {
            pairs: Pairs(&self.cycles),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CycleDecomposition {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Wire {
            pairs: Vec<(u64, u64)>,
        }
        Ok(Self::from_counts(Wire::deserialize(deserializer)?.pairs))
    }
}

/// Cycle structure of `step` over the states `0..2^bits`, which must be a
/// permutation. Each state is visited once; an orbit that runs into an
/// already visited state other than its start means `step` is not injective.
pub fn decompose_permutation(
    bits: u32,
    mut step: impl FnMut(u64) -> u64,
) -> Result<CycleDecomposition> {
    if bits > MAX_SWEEP_BITS {
        return Err(Error::PhaseSpaceTooLarge(bits));
    }
    let states = 1u64 << bits;
    let mut visited = vec![0u64; ((states + 63) / 64) as usize];
    let mut cycles = BTreeMap::new();
    for start in 0..states {
        if visited[(start / 64) as usize] >> (start % 64) & 1 == 1 {
            continue;
        }
        visited[(start / 64) as usize] |= 1 << (start % 64);
        let mut len = 1u64;
        let mut s = step(start);
        while s != start {
            let (w, b) = ((s / 64) as usize, s % 64);
            if s >= states || visited[w] >> b & 1 == 1 {
                return Err(Error::NotOcaPair);
            }
            visited[w] |= 1 << b;
            len += 1;
            s = step(s);
        }
        *cycles.entry(len).or_insert(0) += 1;
    }
    Ok(CycleDecomposition { cycles })
}

fn check_pair(f: &LocalRule, g: &LocalRule) -> Result<u32> {
    if f.diameter() != g.diameter() {
        return Err(Error::DiameterMismatch(f.diameter(), g.diameter()));
    }
    if !is_bipermutive(f) || !is_bipermutive(g) {
        return Err(Error::NotBipermutive);
    }
    Ok(f.block_len())
}

fn check_state(n: u32, s: &SystemState) -> Result<()> {
    if s.n != n {
        return Err(Error::StateMismatch {
            expected: n,
            got: s.n,
        });
    }
    Ok(())
}

#[inline]
fn step_packed(f: &LocalRule, g: &LocalRule, n: u32, s: u64) -> u64 {
    f.apply_packed(s, 2 * n) << n | g.apply_packed(s, 2 * n)
}

/// One update: `(F(s), G(s))`.
pub fn h_step(f: &LocalRule, g: &LocalRule, s: &SystemState) -> Result<SystemState> {
    let n = check_pair(f, g)?;
    check_state(n, s)?;
    Ok(SystemState {
        n,
        bits: step_packed(f, g, n, s.bits),
    })
}

/// Tabulated update map over all `2^(2n)` states.
pub fn step_table(f: &LocalRule, g: &LocalRule) -> Result<Vec<u64>> {
    let n = check_pair(f, g)?;
    if 2 * n > MAX_SWEEP_BITS {
        return Err(Error::PhaseSpaceTooLarge(2 * n));
    }
    Ok((0..1u64 << (2 * n))
        .map(|s| step_packed(f, g, n, s))
        .collect())
}

pub fn cycle_decomposition(f: &LocalRule, g: &LocalRule) -> Result<CycleDecomposition> {
    let n = check_pair(f, g)?;
    decompose_permutation(2 * n, |s| step_packed(f, g, n, s))
}

/// Least `p >= 1` with `H^p(s) = s`.
pub fn period_of_state(f: &LocalRule, g: &LocalRule, s: &SystemState) -> Result<u64> {
    let n = check_pair(f, g)?;
    check_state(n, s)?;
    let cap = if 2 * n >= 64 { u64::MAX } else { 1u64 << (2 * n) };
    let mut cur = step_packed(f, g, n, s.bits);
    let mut p = 1u64;
    while cur != s.bits {
        if p >= cap {
            return Err(Error::NotOcaPair);
        }
        cur = step_packed(f, g, n, cur);
        p += 1;
    }
    Ok(p)
}

/// Which bits of each state are emitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Extraction {
    #[default]
    FullState,
    LeftHalf,
}

/// `len` iterations from `h_step(seed)`, emitting the full `2n`-bit state per
/// step, most significant cell first.
pub fn keystream(f: &LocalRule, g: &LocalRule, seed: &SystemState, len: usize) -> Result<Vec<bool>> {
    keystream_with(f, g, seed, len, Extraction::FullState)
}

pub fn keystream_with(
    f: &LocalRule,
    g: &LocalRule,
    seed: &SystemState,
    len: usize,
    extraction: Extraction,
) -> Result<Vec<bool>> {
    let n = check_pair(f, g)?;
    check_state(n, seed)?;
    let width = match extraction {
        Extraction::FullState => 2 * n,
        Extraction::LeftHalf => n,
    };
    let mut out = Vec::with_capacity(len * width as usize);
    let mut s = seed.bits;
    for _ in 0..len {
        s = step_packed(f, g, n, s);
        let word = match extraction {
            Extraction::FullState => s,
            Extraction::LeftHalf => s >> n,
        };
        out.extend((0..width).rev().map(|i| (word >> i) & 1 == 1));
    }
    Ok(out)
}

/// `'0'`/`'1'` characters.
pub fn bits_to_string(bits: &[bool]) -> String {
    bits.iter().map(|&b| if b { '1' } else { '0' }).collect()
}

/// Packs bits into bytes, most significant bit first; a trailing partial
/// byte is zero-padded.
pub fn pack_bits(bits: &[bool]) -> Vec<u8> {
    bits.chunks(8)
        .map(|chunk| {
            chunk
                .iter()
                .enumerate()
                .fold(0u8, |acc, (i, &b)| acc | (b as u8) << (7 - i))
        })
        .collect()
}
