//! Polynomial and matrix arithmetic over GF(2).
//!
//! Polynomials are coefficient bitmasks (`bit i` = coefficient of `X^i`).
//! Matrices are square with bit-packed rows: bit `j` of row `i` holds the
//! entry `(i, j)`, so a row printed left to right lists columns `0..size`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest supported matrix dimension.
pub const MAX_MATRIX_SIZE: usize = 128;

/// Largest dimension for which [`matrix_order`] is supported; orders then fit in a `u64`.
pub const MAX_ORDER_SIZE: usize = 64;

/// A polynomial over GF(2) of degree at most 63.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BinPoly(u64);

impl BinPoly {
    pub const ZERO: BinPoly = BinPoly(0);
    pub const ONE: BinPoly = BinPoly(1);

    pub const fn from_mask(mask: u64) -> Self {
        BinPoly(mask)
    }

    pub const fn mask(self) -> u64 {
        self.0
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }

    /// Index of the highest nonzero coefficient, `None` for the zero polynomial.
    pub fn degree(self) -> Option<u32> {
        (self.0 != 0).then(|| 63 - self.0.leading_zeros())
    }

    pub fn coeff(self, i: u32) -> bool {
        i < 64 && (self.0 >> i) & 1 == 1
    }

    /// Monic of degree `n` with nonzero constant term, i.e. the polynomial of
    /// a linear bipermutive rule of diameter `n + 1`.
    pub fn is_rule_poly(self, n: u32) -> bool {
        n >= 1 && self.degree() == Some(n) && self.coeff(0)
    }

    /// Remainder of `self` modulo `divisor` (nonzero).
    pub fn rem(self, divisor: BinPoly) -> BinPoly {
        let dd = divisor.degree().expect("division by the zero polynomial");
        let mut r = self.0;
        while r != 0 {
            let dr = 63 - r.leading_zeros();
            if dr < dd {
                break;
            }
            r ^= divisor.0 << (dr - dd);
        }
        BinPoly(r)
    }
}

impl fmt::Debug for BinPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinPoly({:#x} = {})", self.0, self.to_sum_string())
    }
}

/// Canonical form: the hexadecimal coefficient mask, e.g. `0x5`.
impl fmt::Display for BinPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#x}", self.0)
    }
}

impl BinPoly {
    /// Human-readable form, highest power first, e.g. `X^2+X+1`.
    pub fn to_sum_string(self) -> String {
        if self.0 == 0 {
            return "0".to_string();
        }
        let terms: Vec<String> = (0..64)
            .rev()
            .filter(|&i| self.coeff(i))
            .map(|i| match i {
                0 => "1".to_string(),
                1 => "X".to_string(),
                _ => format!("X^{i}"),
            })
            .collect();
        terms.join("+")
    }
}

/// Accepts either a hex mask (`0x5`) or a sum of monomials (`X^2+1`).
impl FromStr for BinPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let fail = |reason: &str| Error::ParsePoly {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if compact.is_empty() {
            return Err(fail("empty input"));
        }
        if let Some(hex) = compact
            .strip_prefix("0x")
            .or_else(|| compact.strip_prefix("0X"))
        {
            return u64::from_str_radix(hex, 16)
                .map(BinPoly)
                .map_err(|e| fail(&e.to_string()));
        }
        let mut mask = 0u64;
        for term in compact.split('+') {
            let exp = match term {
                "0" => continue,
                "1" => 0,
                "x" | "X" => 1,
                _ => {
                    let rest = term
                        .strip_prefix("X^")
                        .or_else(|| term.strip_prefix("x^"))
                        .ok_or_else(|| fail(&format!("bad term {term:?}")))?;
                    let e: u32 = rest
                        .parse()
                        .map_err(|_| fail(&format!("bad exponent {rest:?}")))?;
                    if e > 63 {
                        return Err(fail("degree exceeds 63"));
                    }
                    e
                }
            };
            mask ^= 1 << exp;
        }
        Ok(BinPoly(mask))
    }
}

impl Serialize for BinPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BinPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Greatest common divisor by the Euclidean algorithm.
pub fn poly_gcd(p: BinPoly, q: BinPoly) -> Result<BinPoly> {
    if p.is_zero() && q.is_zero() {
        return Err(Error::GcdUndefined);
    }
    let (mut a, mut b) = (p, q);
    while !b.is_zero() {
        let r = a.rem(b);
        a = b;
        b = r;
    }
    Ok(a)
}

/// A square matrix over GF(2) with bit-packed rows.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Matrix {
    size: usize,
    rows: Vec<u128>,
}

#[inline]
fn row_mask(size: usize) -> u128 {
    if size == 128 {
        u128::MAX
    } else {
        (1u128 << size) - 1
    }
}

// out[i] = XOR of b[j] over the set bits j of a[i]
#[inline]
fn mul_rows(a: &[u128], b: &[u128], out: &mut [u128]) {
    for (o, &row) in out.iter_mut().zip(a) {
        let mut acc = 0u128;
        let mut r = row;
        while r != 0 {
            acc ^= b[r.trailing_zeros() as usize];
            r &= r - 1;
        }
        *o = acc;
    }
}

impl Gf2Matrix {
    pub fn zero(size: usize) -> Result<Self> {
        check_size(size)?;
        Ok(Gf2Matrix {
            size,
            rows: vec![0; size],
        })
    }

    pub fn identity(size: usize) -> Result<Self> {
        check_size(size)?;
        Ok(Gf2Matrix {
            size,
            rows: (0..size).map(|i| 1u128 << i).collect(),
        })
    }

    /// Builds a matrix from row bitmasks; bits at or above `rows.len()` are rejected.
    pub fn from_rows(rows: Vec<u128>) -> Result<Self> {
        let size = rows.len();
        check_size(size)?;
        if rows.iter().any(|&r| r & !row_mask(size) != 0) {
            return Err(Error::MatrixSize(size));
        }
        Ok(Gf2Matrix { size, rows })
    }

    /// Parses rows written as `0`/`1` strings, column 0 first.
    pub fn from_row_strings(rows: &[&str]) -> Result<Self> {
        let packed = rows
            .iter()
            .map(|r| {
                r.chars()
                    .enumerate()
                    .filter(|&(_, c)| c == '1')
                    .fold(0u128, |acc, (j, _)| acc | 1 << j)
            })
            .collect();
        Self::from_rows(packed)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn rows(&self) -> &[u128] {
        &self.rows
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        (self.rows[i] >> j) & 1 == 1
    }

    pub fn is_identity(&self) -> bool {
        self.rows.iter().enumerate().all(|(i, &r)| r == 1u128 << i)
    }

    /// Rows rendered as `0`/`1` strings, column 0 first.
    pub fn row_strings(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|&r| {
                (0..self.size)
                    .map(|j| if (r >> j) & 1 == 1 { '1' } else { '0' })
                    .collect()
            })
            .collect()
    }

    /// Matrix-vector product; bit `j` of `v` is the `j`-th vector component.
    pub fn mul_vec(&self, v: u128) -> u128 {
        self.rows
            .iter()
            .enumerate()
            .fold(0, |acc, (i, &r)| acc | (((r & v).count_ones() & 1) as u128) << i)
    }

    fn square_into(&self, out: &mut Vec<u128>) {
        out.resize(self.size, 0);
        mul_rows(&self.rows, &self.rows, out);
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Gf2Matrix")
            .field("size", &self.size)
            .field("rows", &self.row_strings())
            .finish()
    }
}

fn check_size(size: usize) -> Result<()> {
    if size == 0 || size > MAX_MATRIX_SIZE {
        Err(Error::MatrixSize(size))
    } else {
        Ok(())
    }
}

/// The Sylvester matrix of two rule polynomials of degree `n`.
///
/// Row `i < n` carries the coefficients of `p` (constant term first) in
/// columns `i..=i+n`; row `n + i` does the same for `q`.
pub fn sylvester_matrix(p: BinPoly, q: BinPoly, n: u32) -> Result<Gf2Matrix> {
    for poly in [p, q] {
        if !poly.is_rule_poly(n) {
            return Err(Error::NotRulePolynomial(format!(
                "{} is not monic of degree {n} with constant term 1",
                poly.to_sum_string()
            )));
        }
    }
    let n = n as usize;
    check_size(2 * n)?;
    let rows = (0..n)
        .map(|i| (p.mask() as u128) << i)
        .chain((0..n).map(|i| (q.mask() as u128) << i))
        .collect();
    Ok(Gf2Matrix { size: 2 * n, rows })
}

pub fn mat_mul(a: &Gf2Matrix, b: &Gf2Matrix) -> Result<Gf2Matrix> {
    if a.size != b.size {
        return Err(Error::SizeMismatch {
            left: a.size,
            right: b.size,
        });
    }
    let mut rows = vec![0; a.size];
    mul_rows(&a.rows, &b.rows, &mut rows);
    Ok(Gf2Matrix { size: a.size, rows })
}

/// Left-to-right square-and-multiply over the bits of an exponent.
fn pow_bits(m: &Gf2Matrix, bits: impl Iterator<Item = bool>) -> Gf2Matrix {
    let mut acc = Gf2Matrix::identity(m.size).expect("size already validated");
    let mut scratch = vec![0u128; m.size];
    for bit in bits {
        acc.square_into(&mut scratch);
        std::mem::swap(&mut acc.rows, &mut scratch);
        if bit {
            mul_rows(&acc.rows, &m.rows, &mut scratch);
            std::mem::swap(&mut acc.rows, &mut scratch);
        }
    }
    acc
}

/// `m^e`, with `m^0` the identity.
pub fn mat_pow(m: &Gf2Matrix, e: u64) -> Gf2Matrix {
    let len = 64 - e.leading_zeros();
    pow_bits(m, (0..len).rev().map(|i| (e >> i) & 1 == 1))
}

/// `m^e` for an arbitrary-precision exponent.
pub fn mat_pow_big(m: &Gf2Matrix, e: &BigUint) -> Gf2Matrix {
    let len = e.bits();
    pow_bits(m, (0..len).rev().map(|i| e.bit(i)))
}

/// `m^(2^k)` by `k` successive squarings.
pub fn mat_pow_two_power(m: &Gf2Matrix, k: u32) -> Gf2Matrix {
    let mut acc = m.clone();
    let mut scratch = vec![0u128; m.size];
    for _ in 0..k {
        acc.square_into(&mut scratch);
        std::mem::swap(&mut acc.rows, &mut scratch);
    }
    acc
}

pub fn rank(m: &Gf2Matrix) -> usize {
    let mut rows = m.rows.clone();
    let mut rank = 0;
    for col in 0..m.size {
        let bit = 1u128 << col;
        let Some(pivot) = (rank..rows.len()).find(|&r| rows[r] & bit != 0) else {
            continue;
        };
        rows.swap(rank, pivot);
        let pivot_row = rows[rank];
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank && *row & bit != 0 {
                *row ^= pivot_row;
            }
        }
        rank += 1;
    }
    rank
}

pub fn is_invertible(m: &Gf2Matrix) -> bool {
    rank(m) == m.size
}

/// |GL(k, F_2)| = (2^k - 1)(2^k - 2)(2^k - 4)...(2^k - 2^(k-1)).
pub fn gl_order(k: u32) -> BigUint {
    let two_k = BigUint::from(1u8) << k;
    (0..k).fold(BigUint::from(1u8), |acc, i| {
        acc * (&two_k - (BigUint::from(1u8) << i))
    })
}

/// Prime factors with multiplicity, ascending, by trial division.
pub fn factorize(mut t: u64) -> Vec<u64> {
    let mut primes = Vec::new();
    while t % 2 == 0 && t > 0 {
        primes.push(2);
        t /= 2;
    }
    let mut p = 3u64;
    while p <= t / p {
        while t % p == 0 {
            primes.push(p);
            t /= p;
        }
        p += 2;
    }
    if t > 1 {
        primes.push(t);
    }
    primes
}

fn prime_powers(primes: impl IntoIterator<Item = u64>) -> BTreeMap<u64, u32> {
    let mut map = BTreeMap::new();
    for p in primes {
        *map.entry(p).or_insert(0) += 1;
    }
    map
}

/// Prime factorization of |GL(k, F_2)|, assembled from its product form so
/// the (huge) group order itself never needs factoring.
pub fn gl_order_factors(k: u32) -> BTreeMap<u64, u32> {
    let mut map = prime_powers((1..=k).flat_map(|i| factorize((1u64 << i) - 1)));
    let twos = k * k.saturating_sub(1) / 2;
    if twos > 0 {
        map.insert(2, twos);
    }
    map
}

/// Order of `m` in GL(size, F_2): the least `t >= 1` with `m^t = I`.
///
/// Starts from an exponent known to annihilate `m` (`2^size - 1` when that
/// works, else |GL|) and strips prime factors while the power stays the
/// identity.
pub fn matrix_order(m: &Gf2Matrix) -> Result<u64> {
    let k = m.size;
    if k > MAX_ORDER_SIZE {
        return Err(Error::OrderTooLarge(k));
    }
    if !is_invertible(m) {
        return Err(Error::NotInvertible);
    }
    let t = if k == 64 { u64::MAX } else { (1u64 << k) - 1 };
    if mat_pow(m, t).is_identity() {
        let mut e = t;
        for (p, mult) in prime_powers(factorize(t)) {
            for _ in 0..mult {
                if mat_pow(m, e / p).is_identity() {
                    e /= p;
                } else {
                    break;
                }
            }
        }
        return Ok(e);
    }
    let mut e = gl_order(k as u32);
    for (p, mult) in gl_order_factors(k as u32) {
        for _ in 0..mult {
            let candidate = &e / p;
            if mat_pow_big(m, &candidate).is_identity() {
                e = candidate;
            } else {
                break;
            }
        }
    }
    Ok(u64::try_from(e).expect("element orders in GL(k, F_2) are below 2^k"))
}

/// Precomputed test for order exactly `2^size - 1`.
#[derive(Debug, Clone)]
pub struct MaximalOrderTest {
    size: usize,
    period: u64,
    cofactors: Vec<u64>,
}

impl MaximalOrderTest {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 || size >= 64 {
            return Err(Error::OrderTooLarge(size));
        }
        let period = (1u64 << size) - 1;
        let cofactors = prime_powers(factorize(period))
            .keys()
            .map(|&p| period / p)
            .collect();
        Ok(MaximalOrderTest {
            size,
            period,
            cofactors,
        })
    }

    /// The maximal order `2^size - 1`.
    pub fn period(&self) -> u64 {
        self.period
    }

    /// True iff `m` has order exactly `2^size - 1`. `m` must be invertible:
    /// then `m^(2^size) = m` is equivalent to `m^(2^size - 1) = I`.
    pub fn is_maximal(&self, m: &Gf2Matrix) -> bool {
        debug_assert_eq!(m.size, self.size);
        if mat_pow_two_power(m, self.size as u32) != *m {
            return false;
        }
        self.cofactors
            .iter()
            .all(|&e| !mat_pow(m, e).is_identity())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn poly(s: &str) -> BinPoly {
        s.parse().unwrap()
    }

    fn m90_150() -> Gf2Matrix {
        sylvester_matrix(poly("X^2+1"), poly("X^2+X+1"), 2).unwrap()
    }

    // Entrywise triple loop, independent of the packed-row product.
    fn naive_mul(a: &Gf2Matrix, b: &Gf2Matrix) -> Gf2Matrix {
        let n = a.size();
        let mut rows = vec![0u128; n];
        for i in 0..n {
            for j in 0..n {
                let mut s = false;
                for k in 0..n {
                    s ^= a.get(i, k) && b.get(k, j);
                }
                if s {
                    rows[i] |= 1 << j;
                }
            }
        }
        Gf2Matrix::from_rows(rows).unwrap()
    }

    fn naive_pow(m: &Gf2Matrix, e: u64) -> Gf2Matrix {
        let mut acc = Gf2Matrix::identity(m.size()).unwrap();
        for _ in 0..e {
            acc = naive_mul(&acc, m);
        }
        acc
    }

    fn brute_order(m: &Gf2Matrix) -> u64 {
        let mut acc = m.clone();
        let mut t = 1;
        while !acc.is_identity() {
            acc = naive_mul(&acc, m);
            t += 1;
        }
        t
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(poly_gcd(poly("X^2+1"), poly("X^2+X+1")).unwrap(), BinPoly::ONE);
        assert_eq!(
            poly_gcd(poly("X^2+X+1"), poly("X^2+X+1")).unwrap(),
            poly("X^2+X+1")
        );
        assert_eq!(
            poly_gcd(poly("X^3+1"), poly("X^3+X^2+X+1")).unwrap(),
            poly("X+1")
        );
        assert!(matches!(
            poly_gcd(BinPoly::ZERO, BinPoly::ZERO),
            Err(Error::GcdUndefined)
        ));
        assert_eq!(poly_gcd(BinPoly::ZERO, poly("X+1")).unwrap(), poly("X+1"));
    }

    #[test]
    fn parse_and_display() {
        assert_eq!(poly("0x5"), poly("X^2+1"));
        assert_eq!(poly("x^2 + x + 1").mask(), 7);
        assert_eq!(poly("X^2+X+1").to_string(), "0x7");
        assert_eq!(poly("X^10+X^3+1").to_sum_string(), "X^10+X^3+1");
        assert!("X^64".parse::<BinPoly>().is_err());
        assert!("Y+1".parse::<BinPoly>().is_err());
        assert!("".parse::<BinPoly>().is_err());
        assert_eq!(BinPoly::ZERO.degree(), None);
        assert_eq!(poly("X^5+1").degree(), Some(5));
    }

    #[test]
    fn sylvester_examples() {
        assert_eq!(m90_150().row_strings(), ["1010", "0101", "1110", "0111"]);
        let singular = sylvester_matrix(poly("X+1"), poly("X+1"), 1).unwrap();
        assert_eq!(singular.row_strings(), ["11", "11"]);
        assert!(!is_invertible(&singular));
        assert!(matches!(
            sylvester_matrix(poly("X+1"), poly("X+1"), 2),
            Err(Error::NotRulePolynomial(_))
        ));
        assert!(sylvester_matrix(poly("X^2+X"), poly("X^2+1"), 2).is_err());
    }

    #[test]
    fn mul_examples() {
        let m = m90_150();
        let id = Gf2Matrix::identity(4).unwrap();
        assert_eq!(mat_mul(&id, &m).unwrap(), m);
        assert_eq!(mat_mul(&m, &m).unwrap(), naive_mul(&m, &m));
        let z = Gf2Matrix::zero(4).unwrap();
        assert_eq!(mat_mul(&z, &m).unwrap(), z);
        assert!(mat_mul(&m, &Gf2Matrix::identity(3).unwrap()).is_err());
    }

    #[test]
    fn pow_examples() {
        let m = m90_150();
        assert!(mat_pow(&m, 0).is_identity());
        assert_eq!(naive_pow(&m, 15), Gf2Matrix::identity(4).unwrap());
        assert!(mat_pow(&m, 15).is_identity());
        assert!(!naive_pow(&m, 5).is_identity());
        assert!(!mat_pow(&m, 5).is_identity());
        assert_eq!(mat_pow_big(&m, &BigUint::from(7u8)), naive_pow(&m, 7));
        assert_eq!(mat_pow_two_power(&m, 3), naive_pow(&m, 8));
    }

    #[test]
    fn invertibility_examples() {
        assert!(is_invertible(&Gf2Matrix::identity(4).unwrap()));
        assert!(is_invertible(&m90_150()));
        let s = sylvester_matrix(poly("X^3+1"), poly("X^3+X^2+X+1"), 3).unwrap();
        assert!(!is_invertible(&s));
        assert!(matches!(matrix_order(&s), Err(Error::NotInvertible)));
    }

    #[test]
    fn gl_order_examples() {
        assert_eq!(gl_order(1), BigUint::from(1u8));
        assert_eq!(gl_order(2), BigUint::from(6u8));
        assert_eq!(gl_order(4), BigUint::from(20160u32));
        for k in 1..=12 {
            let rebuilt = gl_order_factors(k)
                .iter()
                .fold(BigUint::from(1u8), |acc, (&p, &e)| acc * BigUint::from(p).pow(e));
            assert_eq!(rebuilt, gl_order(k), "k = {k}");
        }
    }

    #[test]
    fn factorize_examples() {
        assert_eq!(factorize(15), [3, 5]);
        assert_eq!(factorize(1_048_575), [3, 5, 5, 11, 31, 41]);
        assert!(factorize(1).is_empty());
        assert_eq!(factorize((1 << 31) - 1), [(1 << 31) - 1]);
    }

    #[test]
    fn order_examples() {
        assert_eq!(matrix_order(&Gf2Matrix::identity(4).unwrap()).unwrap(), 1);
        assert_eq!(matrix_order(&m90_150()).unwrap(), 15);
        let test = MaximalOrderTest::new(4).unwrap();
        assert!(test.is_maximal(&m90_150()));
        assert!(!test.is_maximal(&Gf2Matrix::identity(4).unwrap()));
    }

    #[test]
    fn resultant_characterization_exhaustive() {
        for n in 1..=5u32 {
            let polys: Vec<BinPoly> = (0..1u64 << (n - 1))
                .map(|mid| BinPoly::from_mask(1 | mid << 1 | 1 << n))
                .collect();
            for &p in &polys {
                for &q in &polys {
                    let m = sylvester_matrix(p, q, n).unwrap();
                    let coprime = poly_gcd(p, q).unwrap() == BinPoly::ONE;
                    assert_eq!(is_invertible(&m), coprime, "{p:?} {q:?}");
                }
            }
        }
    }

    #[test]
    fn order_matches_brute_force_small_sylvester() {
        for n in 1..=4u32 {
            let bound = (1u64 << (2 * n)) - 1;
            let lagrange = gl_order(2 * n);
            for mid_p in 0..1u64 << (n - 1) {
                for mid_q in 0..1u64 << (n - 1) {
                    let p = BinPoly::from_mask(1 | mid_p << 1 | 1 << n);
                    let q = BinPoly::from_mask(1 | mid_q << 1 | 1 << n);
                    let m = sylvester_matrix(p, q, n).unwrap();
                    if !is_invertible(&m) {
                        continue;
                    }
                    let order = matrix_order(&m).unwrap();
                    assert_eq!(order, brute_order(&m));
                    assert!(order <= bound);
                    assert_eq!(&lagrange % order, BigUint::from(0u8));
                }
            }
        }
    }

    fn arb_invertible(size: usize) -> impl Strategy<Value = Gf2Matrix> {
        prop::collection::vec(any::<u128>(), size).prop_filter_map("singular", move |rows| {
            let mask = (1u128 << size) - 1;
            let m = Gf2Matrix::from_rows(rows.into_iter().map(|r| r & mask).collect()).unwrap();
            is_invertible(&m).then_some(m)
        })
    }

    proptest! {
        #[test]
        fn pow_is_additive_in_exponent(
            rows in prop::collection::vec(any::<u128>(), 10),
            a in 0u64..=1 << 16,
            b in 0u64..=1 << 16,
        ) {
            let m = Gf2Matrix::from_rows(rows.into_iter().map(|r| r & 0x3ff).collect()).unwrap();
            prop_assert_eq!(
                mat_pow(&m, a + b),
                mat_mul(&mat_pow(&m, a), &mat_pow(&m, b)).unwrap()
            );
        }

        #[test]
        fn mul_matches_naive(
            a in prop::collection::vec(any::<u128>(), 9),
            b in prop::collection::vec(any::<u128>(), 9),
        ) {
            let a = Gf2Matrix::from_rows(a.into_iter().map(|r| r & 0x1ff).collect()).unwrap();
            let b = Gf2Matrix::from_rows(b.into_iter().map(|r| r & 0x1ff).collect()).unwrap();
            prop_assert_eq!(mat_mul(&a, &b).unwrap(), naive_mul(&a, &b));
        }

        #[test]
        fn order_is_minimal_for_random_invertibles(m in arb_invertible(6)) {
            let order = matrix_order(&m).unwrap();
            prop_assert_eq!(order, brute_order(&m));
            prop_assert_eq!(gl_order(6) % order, BigUint::from(0u8));
        }

        #[test]
        fn gcd_divides_both(p in 0u64..1 << 20, q in 1u64..1 << 20) {
            let (p, q) = (BinPoly::from_mask(p), BinPoly::from_mask(q));
            let g = poly_gcd(p, q).unwrap();
            prop_assert_eq!(g, poly_gcd(q, p).unwrap());
            prop_assert!(p.rem(g).is_zero());
            prop_assert!(q.rem(g).is_zero());
        }

        #[test]
        fn text_forms_agree(mask in any::<u64>()) {
            let p = BinPoly::from_mask(mask);
            prop_assert_eq!(p.to_string().parse::<BinPoly>().unwrap(), p);
            prop_assert_eq!(p.to_sum_string().parse::<BinPoly>().unwrap(), p);
        }
    }
}
