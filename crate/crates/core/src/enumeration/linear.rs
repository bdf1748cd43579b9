use std::fmt::Write as _;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::{run_sharded, RunOptions, ShardReport};
use crate::ca::poly_to_rule;
use crate::error::{Error, Result};
use crate::gf2::{poly_gcd, sylvester_matrix, BinPoly, MaximalOrderTest};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyPair {
    pub poly_f: BinPoly,
    pub poly_g: BinPoly,
}

/// Counts of coprime (`loca`) and maximal-order (`mloca`) linear pairs.
///
/// Unordered counts take each pair `{P_f, P_g}` once, oriented so that
/// `P_f < P_g` as coefficient masks. Maximality is not invariant under
/// swapping the two rules, so `mloca_unordered` is generally not half of
/// `mloca_ordered`; coprimality is, so `loca_unordered` is.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LinearEnumReport {
    pub diameter: u32,
    pub loca_ordered: u64,
    pub mloca_ordered: u64,
    pub loca_unordered: u64,
    pub mloca_unordered: u64,
    pub mloca_pairs: Vec<PolyPair>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl LinearEnumReport {
    fn empty(diameter: u32) -> Self {
        LinearEnumReport {
            diameter,
            loca_ordered: 0,
            mloca_ordered: 0,
            loca_unordered: 0,
            mloca_unordered: 0,
            mloca_pairs: Vec::new(),
            elapsed: Duration::ZERO,
        }
    }

    /// Maximal order `2^(2n) - 1`.
    pub fn period(&self) -> u64 {
        (1u64 << (2 * (self.diameter - 1))) - 1
    }

    /// One row per maximal ordered pair.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("diameter,poly_f,poly_g,rule_f,rule_g,order\n");
        for p in &self.mloca_pairs {
            let code = |poly| {
                poly_to_rule(poly, self.diameter)
                    .map(|r| r.wolfram_code().to_string())
                    .unwrap_or_default()
            };
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                self.diameter,
                p.poly_f,
                p.poly_g,
                code(p.poly_f),
                code(p.poly_g),
                self.period()
            );
        }
        out
    }
}

impl ShardReport for LinearEnumReport {
    fn merge(&mut self, next: Self) {
        debug_assert_eq!(self.diameter, next.diameter);
        self.loca_ordered += next.loca_ordered;
        self.mloca_ordered += next.mloca_ordered;
        self.loca_unordered += next.loca_unordered;
        self.mloca_unordered += next.mloca_unordered;
        self.mloca_pairs.extend(next.mloca_pairs);
    }
}

/// The `2^(n-1)` rule polynomials of degree `n`, ascending by mask.
pub fn rule_polys(n: u32) -> Vec<BinPoly> {
    (0..1u64 << (n - 1))
        .map(|mid| BinPoly::from_mask(1 | mid << 1 | 1 << n))
        .collect()
}

fn pair_at(polys: &[BinPoly], idx: u64) -> (BinPoly, BinPoly) {
    let k = polys.len() as u64;
    (polys[(idx / k) as usize], polys[(idx % k) as usize])
}

/// All ordered pairs of rule polynomials of degree `d - 1`.
pub fn enumerate_linear_pairs(d: u32) -> impl Iterator<Item = (BinPoly, BinPoly)> {
    let polys = if d >= 2 { rule_polys(d - 1) } else { Vec::new() };
    let total = (polys.len() as u64).pow(2);
    (0..total).map(move |i| pair_at(&polys, i))
}

pub fn enumerate_maximal_linear(d: u32) -> Result<LinearEnumReport> {
    enumerate_maximal_linear_with(d, &RunOptions::default())
}

/// Keeps the coprime pairs whose Sylvester matrix has order `2^(2n) - 1`.
pub fn enumerate_maximal_linear_with(d: u32, opts: &RunOptions) -> Result<LinearEnumReport> {
    if !(3..=16).contains(&d) {
        return Err(Error::DiameterOutOfRange {
            what: "linear enumeration",
            diameter: d,
        });
    }
    let started = Instant::now();
    let n = d - 1;
    let polys = rule_polys(n);
    let order_test = MaximalOrderTest::new(2 * n as usize)?;
    let space = (polys.len() as u64).pow(2);

    let mut report = run_sharded(
        "linear",
        d,
        space,
        opts,
        || LinearEnumReport::empty(d),
        |range, report| {
            for idx in range {
                let (p, q) = pair_at(&polys, idx);
                if poly_gcd(p, q).expect("rule polynomials are nonzero") != BinPoly::ONE {
                    continue;
                }
                report.loca_ordered += 1;
                report.loca_unordered += u64::from(p < q);
                let m = sylvester_matrix(p, q, n).expect("rule polynomials of degree n");
                if order_test.is_maximal(&m) {
                    report.mloca_ordered += 1;
                    report.mloca_unordered += u64::from(p < q);
                    report.mloca_pairs.push(PolyPair { poly_f: p, poly_g: q });
                }
            }
        },
    )?;
    report.elapsed = started.elapsed();
    Ok(report)
}
