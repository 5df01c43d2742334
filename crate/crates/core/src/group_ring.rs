//! The integral group ring `Z[G]`, `G = Gal(Q(ζ_ℓ)/Q)`, with the Stickelberger
//! elements `θ_a`, the Kummer generators `f_i = θ_{i+1} − θ_i`, the trace `N`,
//! and the coset traces `θ_f`.
//!
//! Elements are dense: coefficient of `σ_a` lives at index `a − 1`.
//!
//! Text forms (see [`GroupRingElement::parse`]):
//! - support set `{1,5}` for 0/1 elements,
//! - coefficient form `2*s1 - 3*s7` (also `2·σ_1`),
//! - the literal `N` for the trace, `0` for zero.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::GroupRingError;
use crate::galois_arith::{CyclotomicModulus, GroupElement};

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawElement", into = "RawElement")]
pub struct GroupRingElement {
    modulus: CyclotomicModulus,
    coeffs: Vec<BigInt>,
}

#[derive(Serialize, Deserialize)]
struct RawElement {
    ell: CyclotomicModulus,
    #[serde(with = "crate::serde_int::int_vec")]
    coeffs: Vec<BigInt>,
}

impl TryFrom<RawElement> for GroupRingElement {
    type Error = GroupRingError;
    fn try_from(raw: RawElement) -> Result<Self, Self::Error> {
        Self::from_coeffs(raw.ell, raw.coeffs)
    }
}

impl From<GroupRingElement> for RawElement {
    fn from(x: GroupRingElement) -> Self {
        RawElement { ell: x.modulus, coeffs: x.coeffs }
    }
}

impl GroupRingElement {
    pub fn zero(m: CyclotomicModulus) -> Self {
        Self { modulus: m, coeffs: vec![BigInt::zero(); m.group_order() as usize] }
    }

    pub fn from_coeffs(m: CyclotomicModulus, coeffs: Vec<BigInt>) -> Result<Self, GroupRingError> {
        if coeffs.len() as u64 != m.group_order() {
            return Err(GroupRingError::Parse(format!(
                "expected {} coefficients, got {}",
                m.group_order(),
                coeffs.len()
            )));
        }
        Ok(Self { modulus: m, coeffs })
    }

    /// `Σ_{a ∈ support} σ_a`. Repeated residues accumulate.
    pub fn from_support<I: IntoIterator<Item = GroupElement>>(m: CyclotomicModulus, support: I) -> Self {
        let mut x = Self::zero(m);
        for g in support {
            x.coeffs[g.index()] += 1;
        }
        x
    }

    /// The single group element `σ_c`.
    pub fn sigma(m: CyclotomicModulus, c: GroupElement) -> Self {
        Self::from_support(m, [c])
    }

    pub fn modulus(&self) -> CyclotomicModulus {
        self.modulus
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<BigInt> {
        self.coeffs
    }

    pub fn coeff(&self, c: GroupElement) -> &BigInt {
        &self.coeffs[c.index()]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn coefficient_sum(&self) -> BigInt {
        self.coeffs.iter().sum()
    }

    /// Residues with nonzero coefficient, ascending.
    pub fn support(&self) -> Vec<u64> {
        self.coeffs.iter().enumerate().filter(|(_, c)| !c.is_zero()).map(|(i, _)| i as u64 + 1).collect()
    }

    /// True when every coefficient is 0 or 1.
    pub fn is_zero_one(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero() || c.is_one())
    }

    fn check_same(&self, other: &Self) -> Result<(), GroupRingError> {
        if self.modulus != other.modulus {
            return Err(GroupRingError::ModulusMismatch { left: self.modulus.ell(), right: other.modulus.ell() });
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self, GroupRingError> {
        self.check_same(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(Self { modulus: self.modulus, coeffs })
    }

    pub fn subtract(&self, other: &Self) -> Result<Self, GroupRingError> {
        self.check_same(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(Self { modulus: self.modulus, coeffs })
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self { modulus: self.modulus, coeffs: self.coeffs.iter().map(|c| c * k).collect() }
    }

    /// Left multiplication by `σ_c`: the coefficient of `σ_a` moves to `σ_{ca}`.
    pub fn group_act(&self, c: GroupElement) -> Self {
        let m = self.modulus;
        let mut out = Self::zero(m);
        for a in m.units() {
            out.coeffs[m.multiply(c, a).index()] = self.coeffs[a.index()].clone();
        }
        out
    }

    /// Parses the support-set, coefficient, `N`, or `0` forms.
    pub fn parse(m: CyclotomicModulus, text: &str) -> Result<Self, GroupRingError> {
        let t = text.trim();
        if t.is_empty() {
            return Err(GroupRingError::Parse("empty input".into()));
        }
        if let Some(inner) = t.strip_prefix('{') {
            let inner = inner
                .strip_suffix('}')
                .ok_or_else(|| GroupRingError::Parse(format!("unterminated support set `{t}`")))?;
            let mut x = Self::zero(m);
            for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
                let a = parse_residue(m, part)?;
                if !x.coeffs[a.index()].is_zero() {
                    return Err(GroupRingError::Parse(format!("residue {a} repeated in support set")));
                }
                x.coeffs[a.index()] = BigInt::one();
            }
            return Ok(x);
        }
        parse_linear_combination(m, t)
    }

    /// Canonical coefficient form, e.g. `2*s1 - 3*s7`; `0` for zero.
    pub fn to_coefficient_string(&self) -> String {
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if out.is_empty() {
                if c.is_negative() {
                    out.push('-');
                }
            } else {
                out.push_str(if c.is_negative() { " - " } else { " + " });
            }
            out.push_str(&format!("{}*s{}", c.abs(), i + 1));
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    /// `{a,b,…}` ascending; only meaningful for 0/1 elements.
    pub fn to_support_string(&self) -> String {
        let parts: Vec<String> = self.support().iter().map(u64::to_string).collect();
        format!("{{{}}}", parts.join(","))
    }
}

/// Support set when all coefficients are 0/1, coefficient form otherwise.
impl fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero_one() && !self.is_zero() {
            f.write_str(&self.to_support_string())
        } else {
            f.write_str(&self.to_coefficient_string())
        }
    }
}

fn parse_residue(m: CyclotomicModulus, s: &str) -> Result<GroupElement, GroupRingError> {
    let a: u64 = s.parse().map_err(|_| GroupRingError::Parse(format!("`{s}` is not a residue")))?;
    if a == 0 || a >= m.ell() {
        return Err(GroupRingError::Parse(format!("residue {a} outside 1..={}", m.ell() - 1)));
    }
    Ok(m.element(a as i64)?)
}

fn parse_linear_combination(m: CyclotomicModulus, text: &str) -> Result<GroupRingElement, GroupRingError> {
    let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut x = GroupRingElement::zero(m);
    let mut rest = compact.as_str();
    let mut first = true;
    while !rest.is_empty() {
        let negative = match rest.as_bytes()[0] {
            b'+' => {
                rest = &rest[1..];
                false
            }
            b'-' => {
                rest = &rest[1..];
                true
            }
            _ if first => false,
            _ => return Err(GroupRingError::Parse(format!("expected `+` or `-` before `{rest}`"))),
        };
        first = false;
        let end = rest.find(['+', '-']).unwrap_or(rest.len());
        let (term, tail) = rest.split_at(end);
        rest = tail;
        let (coef, atom) = split_term(term)?;
        let coef = if negative { -coef } else { coef };
        match atom {
            Atom::Trace => {
                for c in x.coeffs.iter_mut() {
                    *c += &coef;
                }
            }
            Atom::Sigma(a) => {
                let g = parse_residue(m, a)?;
                x.coeffs[g.index()] += coef;
            }
            Atom::Constant => {
                if !coef.is_zero() {
                    return Err(GroupRingError::Parse(format!("bare integer `{term}` is not a group ring term")));
                }
            }
        }
    }
    Ok(x)
}

enum Atom<'a> {
    Trace,
    Sigma(&'a str),
    Constant,
}

fn split_term(term: &str) -> Result<(BigInt, Atom<'_>), GroupRingError> {
    if term.is_empty() {
        return Err(GroupRingError::Parse("empty term".into()));
    }
    let digits_end = term.find(|c: char| !c.is_ascii_digit()).unwrap_or(term.len());
    let (num, atom) = term.split_at(digits_end);
    let coef = if num.is_empty() { BigInt::one() } else { BigInt::from_str(num).expect("ascii digits") };
    if atom.is_empty() {
        return Ok((coef, Atom::Constant));
    }
    let atom = atom.trim_start_matches(['*', '·']);
    if atom == "N" {
        return Ok((coef, Atom::Trace));
    }
    let idx = ["σ_", "σ", "s_", "s"]
        .iter()
        .find_map(|p| atom.strip_prefix(p))
        .ok_or_else(|| GroupRingError::Parse(format!("unrecognised term `{term}`")))?;
    Ok((coef, Atom::Sigma(idx)))
}

/// `N = Σ_{σ ∈ G} σ`.
pub fn trace_element(m: CyclotomicModulus) -> GroupRingElement {
    GroupRingElement { modulus: m, coeffs: vec![BigInt::one(); m.group_order() as usize] }
}

/// `θ_a = Σ_{i=1}^{ℓ−1} ⌊a·i/ℓ⌋ σ_i^{-1}`, for any `a ≥ 1` prime to `ℓ`.
pub fn theta_a(m: CyclotomicModulus, a: u64) -> Result<GroupRingElement, GroupRingError> {
    let ell = m.ell();
    if a == 0 || a.gcd(&ell) != 1 {
        return Err(GroupRingError::NotCoprime { a, ell });
    }
    let mut x = GroupRingElement::zero(m);
    for i in m.units() {
        let floor = (a as u128 * i.residue() as u128) / ell as u128;
        x.coeffs[m.inverse(i).index()] = BigInt::from(floor);
    }
    Ok(x)
}

/// `f_i = θ_{i+1} − θ_i` for `1 ≤ i ≤ (ℓ−1)/2`.
pub fn kummer_f(m: CyclotomicModulus, i: u64) -> Result<GroupRingElement, GroupRingError> {
    let max = m.half_order();
    if i == 0 || i > max {
        return Err(GroupRingError::IndexOutOfRange { i, max });
    }
    theta_a(m, i + 1)?.subtract(&theta_a(m, i)?)
}

/// Sum of `σ_r` over the canonical (smallest) representatives of `G/H_f`,
/// `H_f` the subgroup of order `f`.
pub fn theta_f_element(m: CyclotomicModulus, f: u64) -> Result<GroupRingElement, GroupRingError> {
    let sub = m.subgroup_of_order(f)?;
    Ok(GroupRingElement::from_support(m, m.coset_representatives(&sub)))
}
