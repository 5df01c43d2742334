//! Class numbers `h_ℓ = h_ℓ^+ · h_ℓ^-` of `Q(ζ_ℓ)`.
//!
//! The pipeline consumes class numbers as data. A table for all odd primes
//! below 100 ships with the crate; [`maillet_h_minus`] recomputes `h^-` from a
//! determinant so the table never has to be taken on trust.

use std::collections::BTreeMap;
use std::path::Path;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::ClassDataError;
use crate::galois_arith::{is_prime_u64, CyclotomicModulus};
use crate::serde_int;
use crate::zlattice::{bareiss_determinant, IntMatrix};

/// Conductors below this bound have `h^+ = 1` unconditionally.
pub const H_PLUS_KNOWN_BOUND: u64 = 100;

pub const BUILTIN_TABLE: &str = include_str!("../data/class_numbers.txt");

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassNumberRecord {
    pub ell: u64,
    #[serde(with = "serde_int::uint")]
    pub h_plus: BigUint,
    #[serde(with = "serde_int::uint")]
    pub h_minus: BigUint,
    #[serde(with = "serde_int::uint")]
    pub h: BigUint,
}

impl ClassNumberRecord {
    pub fn new(ell: u64, h_plus: BigUint, h_minus: BigUint) -> Self {
        let h = &h_plus * &h_minus;
        Self { ell, h_plus, h_minus, h }
    }

    pub fn has_trivial_class_group(&self) -> bool {
        self.h.is_one()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClassNumberTable {
    records: BTreeMap<u64, ClassNumberRecord>,
}

impl ClassNumberTable {
    pub fn builtin() -> Self {
        Self::parse(BUILTIN_TABLE).expect("shipped class number table is well formed")
    }

    pub fn load(path: &Path) -> Result<Self, ClassDataError> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Parses `ell h_plus h_minus` lines; `#` starts a comment. Every odd prime
    /// below [`H_PLUS_KNOWN_BOUND`] must be present with `h_plus = 1`.
    pub fn parse(text: &str) -> Result<Self, ClassDataError> {
        let mut records = BTreeMap::new();
        for (n, raw) in text.lines().enumerate() {
            let line = n + 1;
            let body = raw.split('#').next().unwrap_or("").trim();
            if body.is_empty() {
                continue;
            }
            let bad = |reason: String| ClassDataError::MalformedTable { line, reason };
            let fields: Vec<&str> = body.split_whitespace().collect();
            if fields.len() != 3 {
                return Err(bad(format!("expected 3 fields, found {}", fields.len())));
            }
            let ell: u64 = fields[0].parse().map_err(|_| bad(format!("bad ell `{}`", fields[0])))?;
            if ell < 3 || !is_prime_u64(ell) {
                return Err(bad(format!("{ell} is not an odd prime")));
            }
            let positive = |s: &str, what: &str| -> Result<BigUint, ClassDataError> {
                match s.parse::<BigUint>() {
                    Ok(v) if !v.is_zero() => Ok(v),
                    _ => Err(bad(format!("{what} must be a positive integer, got `{s}`"))),
                }
            };
            let h_plus = positive(fields[1], "h_plus")?;
            let h_minus = positive(fields[2], "h_minus")?;
            if ell < H_PLUS_KNOWN_BOUND && !h_plus.is_one() {
                return Err(bad(format!("h_plus({ell}) must be 1 below {H_PLUS_KNOWN_BOUND}")));
            }
            if records.insert(ell, ClassNumberRecord::new(ell, h_plus, h_minus)).is_some() {
                return Err(bad(format!("duplicate record for {ell}")));
            }
        }
        if let Some(missing) = (3..H_PLUS_KNOWN_BOUND).filter(|&p| is_prime_u64(p)).find(|p| !records.contains_key(p)) {
            return Err(ClassDataError::MissingPrime(missing));
        }
        Ok(Self { records })
    }

    pub fn get(&self, ell: u64) -> Result<&ClassNumberRecord, ClassDataError> {
        self.records.get(&ell).ok_or(ClassDataError::MissingPrime(ell))
    }

    pub fn records(&self) -> impl Iterator<Item = &ClassNumberRecord> {
        self.records.values()
    }
}

/// `h^-` from the Maillet determinant:
/// `|det(R(a·b^{-1}))_{1 ≤ a,b ≤ (ℓ−1)/2}| = ℓ^{(ℓ−3)/2} · h^-`,
/// `R(x)` the least positive residue mod `ℓ`.
pub fn maillet_h_minus(m: CyclotomicModulus) -> Result<BigUint, ClassDataError> {
    let half = m.half_order() as usize;
    let mut mat = IntMatrix::zero(half, half);
    for a in 1..=half {
        for b in 1..=half {
            let ga = m.element(a as i64).expect("a < ℓ");
            let gb = m.element(b as i64).expect("b < ℓ");
            mat[(a - 1, b - 1)] = BigInt::from(m.multiply(ga, m.inverse(gb)).residue());
        }
    }
    let det = bareiss_determinant(&mat).expect("square by construction").abs();
    let exponent = (m.ell() - 3) / 2;
    let scale = num_traits::pow(BigInt::from(m.ell()), exponent as usize);
    let (q, r) = det.div_rem(&scale);
    if !r.is_zero() || q.is_zero() {
        return Err(ClassDataError::InexactDivision { ell: m.ell(), exponent });
    }
    Ok(q.to_biguint().expect("nonnegative"))
}
