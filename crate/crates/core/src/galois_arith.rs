//! Arithmetic in the cyclic group `(Z/ℓZ)^*`, identified with the Galois group
//! of `Q(ζ_ℓ)/Q` through `a ↦ σ_a`.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::ArithError;

/// The conductor `ℓ` of `Q(ζ_ℓ)`; always an odd prime.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "u64", into = "u64")]
pub struct CyclotomicModulus {
    ell: u64,
}

impl CyclotomicModulus {
    pub fn new(ell: u64) -> Result<Self, ArithError> {
        if ell < 3 || !is_prime_u64(ell) {
            return Err(ArithError::NotOddPrime(ell));
        }
        Ok(Self { ell })
    }

    #[inline]
    pub fn ell(&self) -> u64 {
        self.ell
    }

    /// `ℓ − 1 = |G| = [Q(ζ_ℓ):Q]`.
    #[inline]
    pub fn group_order(&self) -> u64 {
        self.ell - 1
    }

    /// `(ℓ − 1)/2`, the number of Kummer generators `f_i`.
    #[inline]
    pub fn half_order(&self) -> u64 {
        (self.ell - 1) / 2
    }

    /// Builds `σ_a` for any integer `a` prime to `ℓ`, reducing mod `ℓ`.
    pub fn element(&self, a: i64) -> Result<GroupElement, ArithError> {
        let r = a.rem_euclid(self.ell as i64) as u64;
        if r == 0 {
            return Err(ArithError::NotAUnit { value: a, ell: self.ell });
        }
        Ok(GroupElement(r))
    }

    /// All units `1, …, ℓ−1` in ascending order.
    pub fn units(&self) -> impl Iterator<Item = GroupElement> {
        (1..self.ell).map(GroupElement)
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement(1)
    }

    /// `σ_{−1}`, complex conjugation.
    pub fn minus_one(&self) -> GroupElement {
        GroupElement(self.ell - 1)
    }

    pub fn multiply(&self, a: GroupElement, b: GroupElement) -> GroupElement {
        GroupElement(mul_mod(a.0, b.0, self.ell))
    }

    pub fn inverse(&self, a: GroupElement) -> GroupElement {
        // Fermat: a^(ℓ−2) ≡ a^{-1}
        GroupElement(pow_mod(a.0, self.ell - 2, self.ell))
    }

    pub fn pow(&self, a: GroupElement, e: u64) -> GroupElement {
        GroupElement(pow_mod(a.0, e, self.ell))
    }

    /// Order of `a` in `G`.
    pub fn element_order(&self, a: GroupElement) -> u64 {
        let n = self.group_order();
        let mut order = n;
        for (q, _) in factor_u64(n) {
            while order.is_multiple_of(q) && pow_mod(a.0, order / q, self.ell) == 1 {
                order /= q;
            }
        }
        order
    }

    /// Smallest `f ≥ 1` with `p^f ≡ 1 (mod ℓ)`; for an unramified rational prime
    /// this is its residue degree in `Q(ζ_ℓ)`.
    pub fn multiplicative_order(&self, p: &BigInt) -> Result<u64, ArithError> {
        let r = p.mod_floor(&BigInt::from(self.ell)).to_u64().expect("residue below ell fits in u64");
        if r == 0 {
            return Err(ArithError::RamifiedPrime { p: p.to_string(), ell: self.ell });
        }
        Ok(self.element_order(GroupElement(r)))
    }

    /// Smallest primitive root mod `ℓ`, found by exhaustive order testing.
    pub fn primitive_root(&self) -> GroupElement {
        let n = self.group_order();
        self.units().find(|&g| self.element_order(g) == n).expect("(Z/ℓZ)^* is cyclic")
    }

    /// The unique subgroup of order `f`, generated by `g^((ℓ−1)/f)`.
    pub fn subgroup_of_order(&self, f: u64) -> Result<Subgroup, ArithError> {
        let n = self.group_order();
        if f == 0 || !n.is_multiple_of(f) {
            return Err(ArithError::NotADivisor { f, order: n });
        }
        let generator = self.pow(self.primitive_root(), n / f);
        let mut members = Vec::with_capacity(f as usize);
        let mut x = self.identity();
        for _ in 0..f {
            members.push(x);
            x = self.multiply(x, generator);
        }
        members.sort_unstable();
        Ok(Subgroup { order: f, members })
    }

    /// Smallest member of each coset `r·H`, in ascending order.
    pub fn coset_representatives(&self, sub: &Subgroup) -> Vec<GroupElement> {
        let mut covered = vec![false; self.ell as usize];
        let mut reps = Vec::with_capacity((self.group_order() / sub.order) as usize);
        for u in self.units() {
            if covered[u.0 as usize] {
                continue;
            }
            reps.push(u);
            for &h in &sub.members {
                covered[self.multiply(u, h).0 as usize] = true;
            }
        }
        reps
    }

    /// Divisors of `ℓ − 1`, ascending.
    pub fn divisors_of_order(&self) -> Vec<u64> {
        divisors_u64(self.group_order())
    }
}

impl fmt::Display for CyclotomicModulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.ell)
    }
}

impl TryFrom<u64> for CyclotomicModulus {
    type Error = ArithError;
    fn try_from(ell: u64) -> Result<Self, Self::Error> {
        Self::new(ell)
    }
}

impl From<CyclotomicModulus> for u64 {
    fn from(m: CyclotomicModulus) -> u64 {
        m.ell
    }
}

/// `σ_a`, stored as the residue `a ∈ [1, ℓ−1]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement(u64);

impl GroupElement {
    #[inline]
    pub fn residue(self) -> u64 {
        self.0
    }

    /// Position of `σ_a` in a dense coefficient vector.
    #[inline]
    pub fn index(self) -> usize {
        (self.0 - 1) as usize
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subgroup {
    order: u64,
    members: Vec<GroupElement>,
}

impl Subgroup {
    pub fn order(&self) -> u64 {
        self.order
    }

    /// Sorted ascending.
    pub fn members(&self) -> &[GroupElement] {
        &self.members
    }

    pub fn contains(&self, a: GroupElement) -> bool {
        self.members.binary_search(&a).is_ok()
    }
}

#[inline]
fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        e >>= 1;
    }
    acc
}

/// Deterministic trial division.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// Prime factorization by trial division, primes ascending.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn divisors_u64(n: u64) -> Vec<u64> {
    let mut divs = vec![1u64];
    for (p, e) in factor_u64(n) {
        let len = divs.len();
        let mut pk = 1;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                divs.push(divs[i] * pk);
            }
        }
    }
    divs.sort_unstable();
    divs
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m23() -> CyclotomicModulus {
        CyclotomicModulus::new(23).unwrap()
    }

    fn residues(xs: &[GroupElement]) -> Vec<u64> {
        xs.iter().map(|g| g.residue()).collect()
    }

    #[test]
    fn rejects_non_primes() {
        for bad in [0, 1, 2, 4, 9, 15, 91] {
            assert!(matches!(CyclotomicModulus::new(bad), Err(ArithError::NotOddPrime(_))), "{bad}");
        }
        assert!(CyclotomicModulus::new(3).is_ok());
        assert!(CyclotomicModulus::new(97).is_ok());
    }

    #[test]
    fn multiply_examples() {
        let m = m23();
        let e = |a| m.element(a).unwrap();
        assert_eq!(m.multiply(e(1), e(7)), e(7));
        assert_eq!(m.multiply(e(22), e(22)), e(1));
        assert_eq!(m.multiply(e(13), e(16)), e(1));
    }

    #[test]
    fn inverse_examples() {
        let m = m23();
        let e = |a| m.element(a).unwrap();
        assert_eq!(m.inverse(e(1)), e(1));
        assert_eq!(m.inverse(e(22)), e(22));
        assert_eq!(m.inverse(e(12)), e(2));
    }

    #[test]
    fn multiplicative_order_examples() {
        let m = m23();
        assert_eq!(m.multiplicative_order(&BigInt::from(2)).unwrap(), 11);
        assert_eq!(m.multiplicative_order(&BigInt::from(47)).unwrap(), 1);
        assert_eq!(m.multiplicative_order(&BigInt::from(5)).unwrap(), 22);
        assert!(matches!(m.multiplicative_order(&BigInt::from(46)), Err(ArithError::RamifiedPrime { .. })));
    }

    #[test]
    fn subgroups_of_23() {
        let m = m23();
        assert_eq!(residues(m.subgroup_of_order(11).unwrap().members()), vec![1, 2, 3, 4, 6, 8, 9, 12, 13, 16, 18]);
        assert_eq!(residues(m.subgroup_of_order(2).unwrap().members()), vec![1, 22]);
        assert_eq!(residues(m.subgroup_of_order(1).unwrap().members()), vec![1]);
        assert!(matches!(m.subgroup_of_order(3), Err(ArithError::NotADivisor { .. })));
    }

    #[test]
    fn coset_representatives_of_23() {
        let m = m23();
        let reps = |f| residues(&m.coset_representatives(&m.subgroup_of_order(f).unwrap()));
        assert_eq!(reps(11), vec![1, 5]);
        assert_eq!(reps(2), (1..=11).collect::<Vec<_>>());
        assert_eq!(reps(22), vec![1]);
    }

    #[test]
    fn subgroups_are_closed_for_small_ell() {
        for ell in (3..100).filter(|&n| is_prime_u64(n)) {
            let m = CyclotomicModulus::new(ell).unwrap();
            for f in m.divisors_of_order() {
                let h = m.subgroup_of_order(f).unwrap();
                assert_eq!(h.members().len() as u64, f);
                assert!(h.contains(m.identity()));
                for &a in h.members() {
                    for &b in h.members() {
                        assert!(h.contains(m.multiply(a, b)), "ell={ell} f={f}");
                    }
                }
                // cosets partition the units
                let mut hits = vec![0u32; ell as usize];
                for r in m.coset_representatives(&h) {
                    for &x in h.members() {
                        hits[m.multiply(r, x).residue() as usize] += 1;
                    }
                }
                assert!(hits[1..].iter().all(|&c| c == 1), "ell={ell} f={f}");
            }
        }
    }

    #[test]
    fn order_is_minimal() {
        for ell in (3..100).filter(|&n| is_prime_u64(n)) {
            let m = CyclotomicModulus::new(ell).unwrap();
            for p in 2..200i64 {
                if p % ell as i64 == 0 {
                    continue;
                }
                let f = m.multiplicative_order(&BigInt::from(p)).unwrap();
                assert_eq!((ell - 1) % f, 0);
                let r = (p as u64) % ell;
                assert_eq!(pow_mod(r, f, ell), 1);
                for d in divisors_u64(f).into_iter().filter(|&d| d < f) {
                    assert_ne!(pow_mod(r, d, ell), 1);
                }
            }
        }
    }

    #[test]
    fn divisors_and_factors() {
        assert_eq!(divisors_u64(28), vec![1, 2, 4, 7, 14, 28]);
        assert_eq!(divisors_u64(1), vec![1]);
        assert_eq!(factor_u64(96), vec![(2, 5), (3, 1)]);
    }
}
