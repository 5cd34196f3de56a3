//! Which k the construction covers: q = 2k - 1 must be an odd prime power
//! with q = 1 mod 4 (equivalently k odd, 2k = 2 mod 4).

use std::fmt;

use crate::gf::prime_power;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Inadmissible {
    TooSmall(usize),
    NotPrimePower(usize),
    NotTwoModFour(usize),
}

impl fmt::Display for Inadmissible {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::TooSmall(k) => write!(f, "k = {k} is below 3"),
            Self::NotPrimePower(q) => write!(f, "2k-1 not an odd prime power (2k-1 = {q})"),
            Self::NotTwoModFour(k) => write!(f, "2k ≢ 2 mod 4 (2k = {})", 2 * k),
        }
    }
}

impl std::error::Error for Inadmissible {}

/// A k covered by the construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Admissible {
    pub k: usize,
    pub q: usize,
    pub p: u64,
    pub alpha: u32,
}

pub fn check_k(k: usize) -> Result<Admissible, Inadmissible> {
    if k < 3 {
        return Err(Inadmissible::TooSmall(k));
    }
    let q = 2 * k - 1;
    let (p, alpha) = prime_power(q as u64).ok_or(Inadmissible::NotPrimePower(q))?;
    if k.is_multiple_of(2) {
        return Err(Inadmissible::NotTwoModFour(k));
    }
    Ok(Admissible { k, q, p, alpha })
}

/// Classifies every k in `k_min..=k_max`, optionally only the odd ones.
pub fn enumerate(k_min: usize, k_max: usize, odd_only: bool) -> Vec<(usize, Result<Admissible, Inadmissible>)> {
    (k_min..=k_max)
        .filter(|k| !odd_only || k % 2 == 1)
        .map(|k| (k, check_k(k)))
        .collect()
}

/// Every admissible order q = 2k - 1 up to `q_max`.
pub fn admissible_orders(q_max: usize) -> Vec<Admissible> {
    (3..=q_max.div_ceil(2))
        .filter_map(|k| check_k(k).ok())
        .filter(|a| a.q <= q_max)
        .collect()
}
