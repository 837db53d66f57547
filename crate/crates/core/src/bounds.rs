//! Prime-power exponents, the reduced bound `prod q^s(q)` and the reference
//! table of `I(r)` and `N(r)` for `r = 3..10`.

use std::fmt;

use num_bigint::BigUint;
use num_traits::One;
use thiserror::Error;

use crate::exact::primes_upto;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("q = {q} exceeds 2r = {two_r}")]
    PrimeTooLarge { q: u64, two_r: u64 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("r must be positive")]
    ZeroR,
    #[error("r = {0} must be odd")]
    EvenR(u64),
    #[error("no h with r <= 2^h q^s <= 2r for q = {q}, r = {r}")]
    NoValidH { q: u64, r: u64 },
    #[error("reference data covers r = 3..10, not r = {0}")]
    OutsideTable(u64),
}

fn is_prime(n: u64) -> bool {
    n >= 2
        && (2..)
            .take_while(|d| d * d <= n)
            .all(|d| !n.is_multiple_of(d))
}

/// Largest `s` with `q^s <= 2r`.
pub fn s_exponent(q: u64, r: u64) -> Result<u32, BoundsError> {
    if r == 0 {
        return Err(BoundsError::ZeroR);
    }
    if !is_prime(q) {
        return Err(BoundsError::NotPrime(q));
    }
    let two_r = 2 * r;
    if q > two_r {
        return Err(BoundsError::PrimeTooLarge { q, two_r });
    }
    let mut s = 0;
    let mut power = 1u64;
    while power * q <= two_r {
        power *= q;
        s += 1;
    }
    Ok(s)
}

/// Largest `h` with `r <= 2^h q^s(q) <= 2r`, for odd `r`.
pub fn h_exponent(q: u64, r: u64) -> Result<u32, BoundsError> {
    if r.is_multiple_of(2) {
        return Err(BoundsError::EvenR(r));
    }
    let s = s_exponent(q, r)?;
    let base = q.pow(s);
    (0..64u32)
        .take_while(|h| base << h <= 2 * r)
        .filter(|h| base << h >= r)
        .last()
        .ok_or(BoundsError::NoValidH { q, r })
}

/// `prod_{q <= 2r prime} q^s(q)`.
pub fn reduced_bound(r: u64) -> Result<BigUint, BoundsError> {
    if r == 0 {
        return Err(BoundsError::ZeroR);
    }
    let mut acc = BigUint::one();
    for q in primes_upto(2 * r) {
        acc *= BigUint::from(q).pow(s_exponent(q, r)?);
    }
    Ok(acc)
}

/// `r * reduced_bound(r)`, the closed formula for `N(r)`.
pub fn formula_n(r: u64) -> Result<BigUint, BoundsError> {
    Ok(reduced_bound(r)? * BigUint::from(r))
}

const TABLE: [(u64, &str, &str); 8] = [
    (3, "120", "60"),
    (4, "5040", "420"),
    (5, "1441440", "2520"),
    (6, "160626866400", "27720"),
    (7, "288807105787200", "360360"),
    (8, "6198089008491993412800", "360360"),
    (9, "7093601304616933605068169600", "12252240"),
    (10, "194603155528763897469736633833782400", "232792560"),
];

fn big(s: &str) -> BigUint {
    s.parse().expect("table literal")
}

/// Reference value of `I(r)`.
pub fn todorov_i(r: u64) -> Result<BigUint, BoundsError> {
    TABLE
        .iter()
        .find(|row| row.0 == r)
        .map(|row| big(row.1))
        .ok_or(BoundsError::OutsideTable(r))
}

/// Printed value of `N(r)`.
pub fn table_n(r: u64) -> Result<BigUint, BoundsError> {
    TABLE
        .iter()
        .find(|row| row.0 == r)
        .map(|row| big(row.2))
        .ok_or(BoundsError::OutsideTable(r))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatchFlag {
    MatchesReduced,
    OffByFactor2,
    Other,
}

impl fmt::Display for MatchFlag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MatchFlag::MatchesReduced => "matches_reduced",
            MatchFlag::OffByFactor2 => "off_by_factor_2",
            MatchFlag::Other => "other",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundTableRow {
    pub r: u64,
    pub todorov_i: BigUint,
    pub table_n: BigUint,
    pub formula_n: BigUint,
    pub reduced_bound: BigUint,
    pub match_flag: MatchFlag,
}

impl BoundTableRow {
    pub fn for_r(r: u64) -> Result<Self, BoundsError> {
        let table_n = table_n(r)?;
        let reduced = reduced_bound(r)?;
        let match_flag = if reduced == table_n {
            MatchFlag::MatchesReduced
        } else if reduced == &table_n * 2u32 {
            MatchFlag::OffByFactor2
        } else {
            MatchFlag::Other
        };
        Ok(BoundTableRow {
            r,
            todorov_i: todorov_i(r)?,
            formula_n: &reduced * BigUint::from(r),
            reduced_bound: reduced,
            table_n,
            match_flag,
        })
    }

    pub fn porcelain(&self) -> Vec<String> {
        let k = format!("bounds.r{}", self.r);
        vec![
            format!("{k}.todorov_I={}", self.todorov_i),
            format!("{k}.table_N={}", self.table_n),
            format!("{k}.reduced_bound={}", self.reduced_bound),
            format!("{k}.formula_N={}", self.formula_n),
            format!("{k}.match={}", self.match_flag),
        ]
    }
}

pub fn compare_bounds_table() -> Vec<BoundTableRow> {
    TABLE
        .iter()
        .map(|row| BoundTableRow::for_r(row.0).expect("table row"))
        .collect()
}
