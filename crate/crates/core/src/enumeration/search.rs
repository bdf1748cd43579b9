use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{run_sharded, RunOptions, ShardReport};
use crate::ca::{bipermutive_rules, classify_linearity, Linearity};
use crate::dynsys::decompose_permutation;
use crate::error::{Error, Result};

/// An ordered rule pair whose largest cycle has length `2^(2n) - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MaximalRulePair {
    pub rule_f: u64,
    pub rule_g: u64,
    pub class_f: Linearity,
    pub class_g: Linearity,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchReport {
    pub diameter: u32,
    pub total_pairs: u64,
    pub oca_pairs: u64,
    /// Largest cycle length -> number of OCA pairs reaching it.
    pub max_cycle_histogram: BTreeMap<u64, u64>,
    pub maximal_pairs: Vec<MaximalRulePair>,
}

impl SearchReport {
    fn empty(diameter: u32) -> Self {
        SearchReport {
            diameter,
            total_pairs: 0,
            oca_pairs: 0,
            max_cycle_histogram: BTreeMap::new(),
            maximal_pairs: Vec::new(),
        }
    }

    /// One row per maximal pair.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("diameter,rule_f,rule_g,class_f,class_g,max_cycle\n");
        let max = (1u64 << (2 * (self.diameter - 1))) - 1;
        for p in &self.maximal_pairs {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                self.diameter, p.rule_f, p.rule_g, p.class_f, p.class_g, max
            );
        }
        out
    }
}

impl ShardReport for SearchReport {
    fn merge(&mut self, next: Self) {
        debug_assert_eq!(self.diameter, next.diameter);
        self.total_pairs += next.total_pairs;
        self.oca_pairs += next.oca_pairs;
        for (len, count) in next.max_cycle_histogram {
            *self.max_cycle_histogram.entry(len).or_insert(0) += count;
        }
        self.maximal_pairs.extend(next.maximal_pairs);
    }
}

/// Exhaustive search for `2 <= d <= 5` with default execution settings.
pub fn search_bipermutive(d: u32) -> Result<SearchReport> {
    search_bipermutive_with(d, false, &RunOptions::default())
}

/// Every ordered pair of bipermutive rules of diameter `d`: tests whether the
/// update map is a bijection and, if so, records its largest cycle.
///
/// `d = 6` (about 4.3e9 pairs) requires `allow_long`.
pub fn search_bipermutive_with(d: u32, allow_long: bool, opts: &RunOptions) -> Result<SearchReport> {
    let max_d = if allow_long { 6 } else { 5 };
    if !(2..=max_d).contains(&d) {
        return Err(Error::DiameterOutOfRange {
            what: if d == 6 {
                "search without the long-run flag"
            } else {
                "bipermutive search"
            },
            diameter: d,
        });
    }
    let n = d - 1;
    let rules = bipermutive_rules(d)?;
    let states = 1usize << (2 * n);
    let rule_count = rules.len() as u64;
    // outputs[r * states + s] = global rule r applied to state s (n <= 5 bits)
    let outputs: Vec<u8> = rules
        .iter()
        .flat_map(|r| (0..states as u64).map(move |s| r.apply_packed(s, 2 * n) as u8))
        .collect();
    let codes: Vec<u64> = rules
        .iter()
        .map(|r| r.code_u64().expect("d <= 6 codes fit in 64 bits"))
        .collect();
    let classes: Vec<Linearity> = rules.iter().map(classify_linearity).collect();
    let maximal = states as u64 - 1;

    run_sharded(
        "search",
        d,
        rule_count * rule_count,
        opts,
        || SearchReport::empty(d),
        |range, report| {
            let mut seen = vec![0u64; (states + 63) / 64];
            for idx in range {
                let (fi, gi) = ((idx / rule_count) as usize, (idx % rule_count) as usize);
                let f_out = &outputs[fi * states..(fi + 1) * states];
                let g_out = &outputs[gi * states..(gi + 1) * states];
                report.total_pairs += 1;

                seen.iter_mut().for_each(|w| *w = 0);
                let bijective = f_out.iter().zip(g_out).all(|(&a, &b)| {
                    let h = (a as usize) << n | b as usize;
                    let fresh = seen[h / 64] >> (h % 64) & 1 == 0;
                    seen[h / 64] |= 1 << (h % 64);
                    fresh
                });
                if !bijective {
                    continue;
                }
                let step = |s: u64| (f_out[s as usize] as u64) << n | g_out[s as usize] as u64;
                let longest = decompose_permutation(2 * n, step)
                    .expect("bijective map decomposes")
                    .max_cycle();
                report.oca_pairs += 1;
                *report.max_cycle_histogram.entry(longest).or_insert(0) += 1;
                if longest == maximal {
                    report.maximal_pairs.push(MaximalRulePair {
                        rule_f: codes[fi],
                        rule_g: codes[gi],
                        class_f: classes[fi],
                        class_g: classes[gi],
                    });
                }
            }
        },
    )
}
