//! Hardness reductions as instance generators.
//!
//! [`reduce_cnf_to_setpacking`] places one hypercube partition system per
//! variable and turns every satisfying assignment of every clause into one
//! set. [`reduce_setpacking_to_santaclaus`] turns sets into agents and
//! elements into items, padding with dummy items worth `T` to everyone.

mod cnf;
mod santa;

use std::ops::Range;

use crate::error::{Error, Result};
use crate::rational::Rational;

pub use cnf::{
    reduce_cnf_to_setpacking, verify_reduction_soundness, CnfReduction, SetOrigin, SoundnessReport,
    MAX_SOUNDNESS_SETS,
};
pub use santa::{reduce_setpacking_to_santaclaus, ItemOrigin, SantaReduction};

/// Partition system on the points of `[d]^Σ`.
///
/// Point `p` has coordinate `i` equal to digit `i` of `p` in base `d`. Edge
/// `(i, j)` is the set of points whose coordinate `i` equals `j`, so for a
/// fixed `i` the edges form a perfect matching of the block, and edges from
/// different matchings meet in `d^(|Σ|-2)` points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HypercubeGadget {
    pub var: usize,
    pub alphabet_size: usize,
    pub d: usize,
    /// Global id of point 0.
    pub offset: usize,
}

impl HypercubeGadget {
    pub fn block_size(&self) -> usize {
        self.d.pow(self.alphabet_size as u32)
    }

    pub fn block(&self) -> Range<usize> {
        self.offset..self.offset + self.block_size()
    }

    pub fn coordinate(&self, point: usize, i: usize) -> usize {
        point / self.d.pow(i as u32) % self.d
    }

    /// Global ids of edge `j` of matching `i`, ascending.
    pub fn edge(&self, i: usize, j: usize) -> Vec<usize> {
        (0..self.block_size())
            .filter(|&p| self.coordinate(p, i) == j)
            .map(|p| self.offset + p)
            .collect()
    }
}

pub fn hypercube_gadget(
    var: usize,
    alphabet_size: usize,
    d: usize,
    offset: usize,
) -> Result<HypercubeGadget> {
    if alphabet_size < 2 || d < 2 {
        return Err(Error::BadParams(format!(
            "gadget needs |Σ| >= 2 and d >= 2, got |Σ| = {alphabet_size}, d = {d}"
        )));
    }
    let fits = u32::try_from(alphabet_size)
        .ok()
        .and_then(|s| d.checked_pow(s))
        .is_some_and(|size| size <= 1 << 24);
    if !fits {
        return Err(Error::TooLarge(format!(
            "{d}^{alphabet_size} points per gadget"
        )));
    }
    Ok(HypercubeGadget {
        var,
        alphabet_size,
        d,
        offset,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReductionParams {
    pub q: usize,
    pub alphabet_size: usize,
    pub d: usize,
    /// Satisfying assignments per clause.
    pub eta: usize,
    pub gamma: Rational,
    pub eps_bound: Rational,
}

impl ReductionParams {
    pub fn new(q: usize, alphabet_size: usize, d: usize) -> Result<Self> {
        if q == 0 || q >= 63 || d < 2 || alphabet_size < 2 {
            return Err(Error::BadParams(format!(
                "q = {q}, |Σ| = {alphabet_size}, d = {d}"
            )));
        }
        let gamma = Rational::new(1, d as i64);
        Ok(ReductionParams {
            q,
            alphabet_size,
            d,
            eta: (1 << q) - 1,
            gamma,
            eps_bound: gamma / (2 * q as i64),
        })
    }

    /// Size of every output set: `q d^(|Σ|-1)`.
    pub fn set_size(&self) -> usize {
        self.q * self.d.pow(self.alphabet_size as u32 - 1)
    }
}
