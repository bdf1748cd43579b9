//! Pseudorandom sequences from pairs of orthogonal cellular automata (OCA).
//!
//! Two bipermutive rules `f`, `g` of diameter `d` act on a state of `2n = 2(d-1)`
//! cells; their outputs are concatenated into the next state. When the Latin
//! squares of the two rules are orthogonal the update is a permutation of the
//! phase space. For linear rules the update is the Sylvester matrix of the
//! rule polynomials, and the longest achievable period is `2^(2n) - 1`.
//!
//! - [`gf2`]: polynomials and bit-packed matrices over GF(2), matrix order.
//! - [`ca`]: local rules, classification, the no-boundary global map.
//! - [`squares`]: Latin squares, orthogonality, multipermutations.
//! - [`dynsys`]: the update map, cycle decompositions, keystreams.
//! - [`enumeration`]: exhaustive and linear searches for maximal-period pairs.

pub mod ca;
pub mod dynsys;
pub mod enumeration;
pub mod error;
pub mod gf2;
pub mod squares;

pub use error::{Error, Result};
