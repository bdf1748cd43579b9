//! Local rules, their classification, and the no-boundary global map.
//!
//! Truth tables are indexed with `x_1` as the most significant bit, so the
//! Wolfram code of a rule is its table read as an integer: rule 90 is
//! `x_1 ^ x_3` and rule 150 is `x_1 ^ x_2 ^ x_3`.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::BinPoly;

pub const MAX_DIAMETER: u32 = 16;

/// A binary local rule of diameter `d`, stored as its `2^d`-entry truth table.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LocalRule {
    diameter: u32,
    table: Vec<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Linearity {
    Linear,
    Affine,
    Nonlinear,
}

impl fmt::Display for Linearity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Linearity::Linear => "linear",
            Linearity::Affine => "affine",
            Linearity::Nonlinear => "nonlinear",
        })
    }
}

fn check_diameter(d: u32) -> Result<()> {
    if (2..=MAX_DIAMETER).contains(&d) {
        Ok(())
    } else {
        Err(Error::InvalidDiameter(d))
    }
}

fn table_words(d: u32) -> usize {
    ((1usize << d) + 63) / 64
}

impl LocalRule {
    /// Rule from a Wolfram code that fits in 64 bits (any diameter up to 6).
    pub fn from_wolfram(code: u64, diameter: u32) -> Result<Self> {
        Self::from_table_words(&[code], diameter)
    }

    /// Rule from an arbitrary-size Wolfram code.
    pub fn from_wolfram_big(code: &BigUint, diameter: u32) -> Result<Self> {
        Self::from_table_words(&code.to_u64_digits(), diameter)
    }

    /// Rule from little-endian 64-bit words of the truth table.
    pub fn from_table_words(words: &[u64], diameter: u32) -> Result<Self> {
        check_diameter(diameter)?;
        let len = table_words(diameter);
        let entries = 1u64 << diameter;
        let mut table = vec![0u64; len];
        for (i, &w) in words.iter().enumerate() {
            if i >= len {
                if w != 0 {
                    return Err(Error::CodeOutOfRange(diameter));
                }
                continue;
            }
            table[i] = w;
        }
        if entries < 64 && table[0] >> entries != 0 {
            return Err(Error::CodeOutOfRange(diameter));
        }
        Ok(LocalRule { diameter, table })
    }

    /// Rule from a predicate over table indices (`x_1` most significant).
    pub fn from_fn(diameter: u32, f: impl Fn(u64) -> bool) -> Result<Self> {
        check_diameter(diameter)?;
        let mut table = vec![0u64; table_words(diameter)];
        for idx in 0..1u64 << diameter {
            if f(idx) {
                table[(idx / 64) as usize] |= 1 << (idx % 64);
            }
        }
        Ok(LocalRule { diameter, table })
    }

    pub fn diameter(&self) -> u32 {
        self.diameter
    }

    /// Output length `n = d - 1` of one rule application on `2n` cells.
    pub fn block_len(&self) -> u32 {
        self.diameter - 1
    }

    pub fn table_words(&self) -> &[u64] {
        &self.table
    }

    pub fn wolfram_code(&self) -> BigUint {
        BigUint::from_slice(
            &self
                .table
                .iter()
                .flat_map(|&w| [w as u32, (w >> 32) as u32])
                .collect::<Vec<_>>(),
        )
    }

    /// Wolfram code when it fits in 64 bits.
    pub fn code_u64(&self) -> Option<u64> {
        self.table[1..]
            .iter()
            .all(|&w| w == 0)
            .then(|| self.table[0])
    }

    /// Output for the neighborhood whose bits form `index` (`x_1` most significant).
    #[inline]
    pub fn output(&self, index: u64) -> bool {
        (self.table[(index >> 6) as usize] >> (index & 63)) & 1 == 1
    }

    /// Applies the global rule to `len` cells packed in `cells` (cell 1 most
    /// significant), returning the `len - d + 1` output cells packed the same way.
    #[inline]
    pub fn apply_packed(&self, cells: u64, len: u32) -> u64 {
        let d = self.diameter;
        let window = (1u64 << d) - 1;
        let out_len = len - d + 1;
        (0..out_len).fold(0u64, |acc, i| {
            let idx = (cells >> (out_len - 1 - i)) & window;
            acc << 1 | self.output(idx) as u64
        })
    }

    fn complement(&self) -> LocalRule {
        let entries = 1u64 << self.diameter;
        let mut table: Vec<u64> = self.table.iter().map(|w| !w).collect();
        if entries < 64 {
            table[0] &= (1 << entries) - 1;
        }
        LocalRule {
            diameter: self.diameter,
            table,
        }
    }

    // Index-space mask of the inputs with f(e_i) = 1.
    fn unit_mask(&self) -> u64 {
        (0..self.diameter)
            .map(|b| 1u64 << b)
            .filter(|&e| self.output(e))
            .fold(0, |acc, e| acc | e)
    }

    fn is_linear_table(&self) -> bool {
        if self.output(0) {
            return false;
        }
        let mask = self.unit_mask();
        (0..1u64 << self.diameter).all(|x| self.output(x) == ((x & mask).count_ones() & 1 == 1))
    }
}

impl fmt::Debug for LocalRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LocalRule(d={}, code={})", self.diameter, self.wolfram_code())
    }
}

impl PartialOrd for LocalRule {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by diameter, then by Wolfram code.
impl Ord for LocalRule {
    fn cmp(&self, other: &Self) -> Ordering {
        self.diameter
            .cmp(&other.diameter)
            .then_with(|| self.table.iter().rev().cmp(other.table.iter().rev()))
    }
}

/// A finite configuration of at most 64 cells.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Configuration {
    len: u32,
    cells: u64,
}

impl Configuration {
    /// `cells` holds cell 1 in bit `len - 1`.
    pub fn from_packed(cells: u64, len: u32) -> Result<Self> {
        if len == 0 || len > 64 {
            return Err(Error::InvalidLength(len));
        }
        let mask = if len == 64 { u64::MAX } else { (1 << len) - 1 };
        Ok(Configuration {
            len,
            cells: cells & mask,
        })
    }

    /// Cells from a slice of 0/1 values, cell 1 first.
    pub fn from_cells(cells: &[u8]) -> Result<Self> {
        let packed = cells.iter().fold(0u64, |acc, &c| acc << 1 | (c & 1) as u64);
        Self::from_packed(packed, cells.len() as u32)
    }

    pub fn len(&self) -> u32 {
        self.len
    }

    pub fn packed(&self) -> u64 {
        self.cells
    }

    pub fn cells(&self) -> Vec<u8> {
        (0..self.len)
            .rev()
            .map(|i| ((self.cells >> i) & 1) as u8)
            .collect()
    }
}

pub fn eval_rule(rule: &LocalRule, neighborhood: &Configuration) -> Result<bool> {
    if neighborhood.len != rule.diameter {
        return Err(Error::LengthMismatch {
            expected: rule.diameter,
            got: neighborhood.len,
        });
    }
    Ok(rule.output(neighborhood.cells))
}

/// The no-boundary global map: `m` cells in, `m - d + 1` cells out.
pub fn nbca_apply(rule: &LocalRule, input: &Configuration) -> Result<Configuration> {
    if input.len < rule.diameter {
        return Err(Error::ConfigurationTooShort {
            len: input.len,
            diameter: rule.diameter,
        });
    }
    let out_len = input.len - rule.diameter + 1;
    Configuration::from_packed(rule.apply_packed(input.cells, input.len), out_len)
}

/// Flip test on both ends: toggling `x_1` (resp. `x_d`) must toggle the output
/// for every assignment of the remaining variables.
pub fn is_bipermutive(rule: &LocalRule) -> bool {
    let d = rule.diameter;
    let left = 1u64 << (d - 1);
    let left_ok = (0..left).all(|x| rule.output(x) != rule.output(x | left));
    let right_ok = (0..1u64 << d)
        .step_by(2)
        .all(|x| rule.output(x) != rule.output(x | 1));
    left_ok && right_ok
}

pub fn classify_linearity(rule: &LocalRule) -> Linearity {
    if rule.is_linear_table() {
        Linearity::Linear
    } else if rule.complement().is_linear_table() {
        Linearity::Affine
    } else {
        Linearity::Nonlinear
    }
}

/// `P_f(X) = a_1 + a_2 X + ... + a_d X^(d-1)` for a linear bipermutive rule.
pub fn rule_to_poly(rule: &LocalRule) -> Result<BinPoly> {
    if classify_linearity(rule) != Linearity::Linear || !is_bipermutive(rule) {
        return Err(Error::NotLinearBipermutive);
    }
    let d = rule.diameter;
    let mask = (0..d)
        .filter(|&k| rule.output(1 << (d - 1 - k)))
        .fold(0u64, |acc, k| acc | 1 << k);
    Ok(BinPoly::from_mask(mask))
}

/// The linear bipermutive rule of diameter `d` whose polynomial is `p`.
pub fn poly_to_rule(p: BinPoly, d: u32) -> Result<LocalRule> {
    check_diameter(d)?;
    if !p.is_rule_poly(d - 1) {
        return Err(Error::NotRulePolynomial(format!(
            "{} is not monic of degree {} with constant term 1",
            p.to_sum_string(),
            d - 1
        )));
    }
    let mask = (0..d)
        .filter(|&k| p.coeff(k))
        .fold(0u64, |acc, k| acc | 1 << (d - 1 - k));
    LocalRule::from_fn(d, |x| (x & mask).count_ones() & 1 == 1)
}

/// All `2^(2^(d-2))` bipermutive rules of diameter `d`, by ascending Wolfram code.
///
/// Every such rule has the form `x_1 ^ h(x_2, ..., x_{d-1}) ^ x_d`.
pub fn bipermutive_rules(d: u32) -> Result<Vec<LocalRule>> {
    check_diameter(d)?;
    if d > 6 {
        return Err(Error::DiameterOutOfRange {
            what: "bipermutive rule listing",
            diameter: d,
        });
    }
    let middle_bits = d - 2;
    let count = 1u64 << (1u64 << middle_bits);
    let ends = 1u64 << (d - 1) | 1;
    let mut rules: Vec<LocalRule> = (0..count)
        .map(|h| {
            LocalRule::from_fn(d, |x| {
                let mid = (x >> 1) & ((1 << middle_bits) - 1);
                ((x & ends).count_ones() & 1 == 1) ^ ((h >> mid) & 1 == 1)
            })
        })
        .collect::<Result<_>>()?;
    rules.sort();
    Ok(rules)
}

/// The `2^(d-2)` linear bipermutive rules of diameter `d`, by ascending polynomial mask.
pub fn linear_bipermutive_rules(d: u32) -> Result<Vec<LocalRule>> {
    check_diameter(d)?;
    let n = d - 1;
    (0..1u64 << (n - 1))
        .map(|mid| poly_to_rule(BinPoly::from_mask(1 | mid << 1 | 1 << n), d))
        .collect()
}
