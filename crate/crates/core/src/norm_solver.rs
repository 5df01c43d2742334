//! Solvability of `|N_{Q(ζ_ℓ)/Q}(x)| = a` for rational `a`.
//!
//! Norms are non-negative (the field is totally complex) and `v_p(N(x))` is
//! always a multiple of the residue degree `f_p`, which settles every negative
//! answer. For the positive direction each prime `p | a` needs some element of
//! norm `p^{f_p}`; the rules below try to produce one, first match wins:
//!
//! | rule       | applies when                              | witness                   |
//! |------------|-------------------------------------------|---------------------------|
//! | `R-RAM`    | `p = ℓ`                                   | `1 − ζ_ℓ`                 |
//! | `R-INERT`  | `f_p = ℓ − 1`                             | `p`                       |
//! | `R-BEZOUT` | `gcd(f_p·h, ℓ−1)` divides `f_p`           | `β^s·p^t`, `(β) = 𝔭^h`    |
//! | `R-T2`     | `h` prime, `R = {1}`, `f_p > 1`           | generator of `𝔭`          |
//!
//! A prime no rule covers makes the verdict `UNKNOWN`.

use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_prime::nt_funcs::{factors, is_prime};
use num_prime::Primality;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::class_data::ClassNumberRecord;
use crate::error::NormError;
use crate::galois_arith::CyclotomicModulus;
use crate::serde_int;
use crate::stickelberger::ResidueDegreeSet;
use crate::zlattice::RationalValue;

/// Class number taken from the shipped (or user-supplied) table.
pub const ASSUME_CLASS_NUMBER_TABLE: &str = "class_number_table";

/// `sign · Π p^e`, primes strictly increasing, exponents nonzero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignedFactorization {
    pub sign: i8,
    pub factors: Vec<(BigUint, i64)>,
}

impl SignedFactorization {
    pub fn valuation(&self, p: &BigUint) -> i64 {
        self.factors.iter().find(|(q, _)| q == p).map_or(0, |(_, e)| *e)
    }

    pub fn to_rational(&self) -> BigRational {
        if self.sign == 0 {
            return BigRational::zero();
        }
        let mut num = BigInt::from(self.sign);
        let mut den = BigInt::one();
        for (p, e) in &self.factors {
            let pe = num_traits::pow(BigInt::from(p.clone()), e.unsigned_abs() as usize);
            if *e > 0 {
                num *= pe;
            } else {
                den *= pe;
            }
        }
        BigRational::new(num, den)
    }
}

fn prime_power_map(n: &BigUint) -> Result<Vec<(BigUint, usize)>, NormError> {
    if n.is_one() {
        return Ok(Vec::new());
    }
    let (found, rest) = factors(n.clone(), None);
    if rest.is_some_and(|r| !r.is_empty()) {
        return Err(NormError::Unfactored(n.to_string()));
    }
    for p in found.keys() {
        if matches!(is_prime(p, None), Primality::No) {
            return Err(NormError::Unfactored(n.to_string()));
        }
    }
    Ok(found.into_iter().collect())
}

/// Exact factorization of `numerator / denominator`.
pub fn factor_rational(numerator: &BigInt, denominator: &BigInt) -> Result<SignedFactorization, NormError> {
    if denominator.is_zero() {
        return Err(NormError::ZeroDenominator);
    }
    let q = BigRational::new(numerator.clone(), denominator.clone());
    if q.is_zero() {
        return Ok(SignedFactorization { sign: 0, factors: Vec::new() });
    }
    let sign = if q.is_negative() { -1 } else { 1 };
    let mut merged: Vec<(BigUint, i64)> = Vec::new();
    for (p, e) in prime_power_map(q.numer().magnitude())? {
        merged.push((p, e as i64));
    }
    for (p, e) in prime_power_map(q.denom().magnitude())? {
        merged.push((p, -(e as i64)));
    }
    merged.sort_by(|a, b| a.0.cmp(&b.0));
    let out = SignedFactorization { sign, factors: merged };
    debug_assert_eq!(out.to_rational(), q);
    Ok(out)
}

/// Parses `"n"` or `"n/d"`.
pub fn parse_rational(text: &str) -> Result<BigRational, NormError> {
    let t = text.trim();
    let bad = || NormError::Parse(text.to_string());
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let num = BigInt::from_str(n).map_err(|_| bad())?;
    let den = BigInt::from_str(d).map_err(|_| bad())?;
    if den.is_zero() {
        return Err(NormError::ZeroDenominator);
    }
    Ok(BigRational::new(num, den))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrimeLocalData {
    #[serde(with = "serde_int::uint")]
    pub p: BigUint,
    pub ramified: bool,
    pub residue_degree: u64,
}

pub fn local_data(m: CyclotomicModulus, p: &BigUint) -> PrimeLocalData {
    if *p == BigUint::from(m.ell()) {
        return PrimeLocalData { p: p.clone(), ramified: true, residue_degree: 1 };
    }
    let f = m.multiplicative_order(&BigInt::from(p.clone())).expect("p ≠ ℓ is prime to ℓ");
    PrimeLocalData { p: p.clone(), ramified: false, residue_degree: f }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NormStatus {
    #[serde(rename = "SOLVABLE")]
    Solvable,
    #[serde(rename = "NOT_SOLVABLE")]
    NotSolvable,
    #[serde(rename = "UNKNOWN")]
    Unknown,
}

impl fmt::Display for NormStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NormStatus::Solvable => "SOLVABLE",
            NormStatus::NotSolvable => "NOT_SOLVABLE",
            NormStatus::Unknown => "UNKNOWN",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NormRule {
    /// `a = 0`.
    #[serde(rename = "N0")]
    Zero,
    /// `a < 0`.
    #[serde(rename = "N1")]
    Negative,
    /// `f_p ∤ v_p(a)`.
    #[serde(rename = "N2")]
    ValuationMismatch,
    #[serde(rename = "R-RAM")]
    Ramified,
    #[serde(rename = "R-INERT")]
    Inert,
    #[serde(rename = "R-BEZOUT")]
    Bezout,
    #[serde(rename = "R-T2")]
    PrincipalPrimes,
    /// No rule produced a witness for this prime.
    #[serde(rename = "NONE")]
    NoRule,
    /// `a` could not be factored.
    #[serde(rename = "UNFACTORED")]
    Unfactored,
}

impl NormRule {
    pub fn name(self) -> &'static str {
        match self {
            NormRule::Zero => "N0",
            NormRule::Negative => "N1",
            NormRule::ValuationMismatch => "N2",
            NormRule::Ramified => "R-RAM",
            NormRule::Inert => "R-INERT",
            NormRule::Bezout => "R-BEZOUT",
            NormRule::PrincipalPrimes => "R-T2",
            NormRule::NoRule => "NONE",
            NormRule::Unfactored => "UNFACTORED",
        }
    }
}

/// `f·h·s + (ℓ−1)·t = g` with `g = gcd(f·h, ℓ−1)` and `f = k·g`, so
/// `p^f = (p^{f·h})^{k·s} · (p^{ℓ−1})^{k·t}` in norms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BezoutRecord {
    #[serde(with = "serde_int::int")]
    pub s: BigInt,
    #[serde(with = "serde_int::int")]
    pub t: BigInt,
    #[serde(with = "serde_int::int")]
    pub gcd: BigInt,
    pub cofactor: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceStep {
    #[serde(with = "opt_uint", default, skip_serializing_if = "Option::is_none")]
    pub prime: Option<BigUint>,
    pub rule: NormRule,
    pub detail: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub valuation: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residue_degree: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bezout: Option<BezoutRecord>,
}

mod opt_uint {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &Option<BigUint>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(x) => serde_int::uint::serialize(x, s),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigUint>, D::Error> {
        #[derive(Deserialize)]
        struct Wrap(#[serde(with = "serde_int::uint")] BigUint);
        Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormVerdict {
    pub ell: u64,
    pub a: RationalValue,
    pub status: NormStatus,
    pub trace: Vec<TraceStep>,
    pub assumptions: Vec<String>,
}

struct Step;

impl Step {
    fn global(rule: NormRule, detail: impl Into<String>) -> TraceStep {
        TraceStep { prime: None, rule, detail: detail.into(), valuation: None, residue_degree: None, bezout: None }
    }

    fn local(p: &BigUint, v: i64, f: u64, rule: NormRule, detail: impl Into<String>) -> TraceStep {
        TraceStep {
            prime: Some(p.clone()),
            rule,
            detail: detail.into(),
            valuation: Some(v),
            residue_degree: Some(f),
            bezout: None,
        }
    }
}

/// Decides `|N(x)| = a` over `Q(ζ_ℓ)`. `r_set` is the residue-degree set for
/// the same `ℓ`, when one has been computed.
pub fn norm_solvable(
    m: CyclotomicModulus,
    a: &BigRational,
    record: &ClassNumberRecord,
    r_set: Option<&ResidueDegreeSet>,
) -> NormVerdict {
    let ell = m.ell();
    let mut verdict = NormVerdict {
        ell,
        a: RationalValue::from(a),
        status: NormStatus::Solvable,
        trace: Vec::new(),
        assumptions: Vec::new(),
    };
    if a.is_zero() {
        verdict.trace.push(Step::global(NormRule::Zero, "N(0) = 0"));
        return verdict;
    }
    if a.is_negative() {
        verdict.status = NormStatus::NotSolvable;
        verdict.trace.push(Step::global(
            NormRule::Negative,
            format!("Q(zeta_{ell}) is totally complex, so every norm is non-negative"),
        ));
        return verdict;
    }
    let fact = match factor_rational(a.numer(), a.denom()) {
        Ok(f) => f,
        Err(e) => {
            verdict.status = NormStatus::Unknown;
            verdict.trace.push(Step::global(NormRule::Unfactored, e.to_string()));
            return verdict;
        }
    };
    let local: Vec<(PrimeLocalData, i64)> = fact.factors.iter().map(|(p, e)| (local_data(m, p), *e)).collect();

    for (ld, v) in &local {
        if v % ld.residue_degree as i64 != 0 {
            verdict.status = NormStatus::NotSolvable;
            verdict.trace.push(Step::local(
                &ld.p,
                *v,
                ld.residue_degree,
                NormRule::ValuationMismatch,
                format!("residue degree {} does not divide v_p(a) = {v}", ld.residue_degree),
            ));
        }
    }
    if verdict.status == NormStatus::NotSolvable {
        return verdict;
    }

    let h_big = BigInt::from(record.h.clone());
    let h_is_prime = !matches!(is_prime(&record.h, None), Primality::No) && record.h > BigUint::one();
    let r_trivial = r_set.filter(|r| r.ell == ell).filter(|r| r.is_trivial());
    let mut assumptions: Vec<String> = Vec::new();

    for (ld, v) in &local {
        let f = ld.residue_degree;
        let step = |rule, detail: String| Step::local(&ld.p, *v, f, rule, detail);
        if ld.ramified {
            verdict.trace.push(step(NormRule::Ramified, format!("N(1 - zeta_{ell}) = {ell}")));
            continue;
        }
        if f == m.group_order() {
            verdict.trace.push(step(NormRule::Inert, format!("p is inert; N(p) = p^{f}")));
            continue;
        }
        let mut rejected = vec!["R-INERT: p is not inert".to_string()];
        let fh = BigInt::from(f) * &h_big;
        let order = BigInt::from(m.group_order());
        let eg = fh.extended_gcd(&order);
        let g = eg.gcd.clone();
        if (BigInt::from(f) % &g).is_zero() {
            assert_eq!(&fh * &eg.x + &order * &eg.y, g, "extended gcd identity");
            let cofactor = (BigInt::from(f) / &g).to_u64().expect("cofactor ≤ f");
            let mut s = step(
                NormRule::Bezout,
                format!(
                    "p^{fh} and p^{n} are norms; {fh}*({s}) + {n}*({t}) = {g}, so p^{f} = (p^{fh})^{ks} * (p^{n})^{kt} with k = {cofactor}",
                    n = m.group_order(),
                    s = eg.x,
                    t = eg.y,
                    ks = &eg.x * cofactor,
                    kt = &eg.y * cofactor,
                ),
            );
            s.bezout = Some(BezoutRecord { s: eg.x, t: eg.y, gcd: g, cofactor });
            verdict.trace.push(s);
            assumptions.push(ASSUME_CLASS_NUMBER_TABLE.to_string());
            continue;
        }
        rejected.push(format!("R-BEZOUT: gcd({fh}, {}) = {g} does not divide {f}", m.group_order()));
        match r_trivial {
            Some(r) if h_is_prime && f > 1 => {
                verdict.trace.push(step(
                    NormRule::PrincipalPrimes,
                    format!(
                        "h = {} is prime and R = {{1}}, so primes of degree {f} are principal (rejected: {})",
                        record.h,
                        rejected.join("; ")
                    ),
                ));
                assumptions.push(ASSUME_CLASS_NUMBER_TABLE.to_string());
                assumptions.extend(r.assumptions.iter().cloned());
            }
            _ => {
                rejected.push(if r_trivial.is_none() {
                    "R-T2: R = {1} not established".to_string()
                } else {
                    format!("R-T2: h = {} is not prime", record.h)
                });
                verdict.status = NormStatus::Unknown;
                verdict.trace.push(step(NormRule::NoRule, format!("no rule applies ({})", rejected.join("; "))));
            }
        }
    }
    assumptions.sort();
    assumptions.dedup();
    verdict.assumptions = assumptions;
    verdict
}

/// `a ≥ 0` and `f_p | v_p(a)` for every `p`: the exact criterion when every
/// prime has an element of norm `p^{f_p}`.
pub fn valuation_criterion(m: CyclotomicModulus, a: &BigRational) -> Result<bool, NormError> {
    if a.is_negative() {
        return Ok(false);
    }
    if a.is_zero() {
        return Ok(true);
    }
    let fact = factor_rational(a.numer(), a.denom())?;
    Ok(fact.factors.iter().all(|(p, e)| e % local_data(m, p).residue_degree as i64 == 0))
}
