//! Membership in the Stickelberger ideal `S ⊂ Z[G]` and the residue-degree
//! generation verdicts built on it.
//!
//! `S` is presented by Kummer's basis `f_1, …, f_{(ℓ−1)/2}, N`. If the classes of
//! degree-`f` primes generate the class group then the coset trace `θ_f`
//! annihilates it, and (with `h^+ = 1`) every annihilator lies in `S`. A
//! certified `θ_f ∉ S` therefore rules `f` out.

use std::cell::OnceCell;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::class_data::{ClassNumberRecord, H_PLUS_KNOWN_BOUND};
use crate::error::{ArithError, StickelbergerError};
use crate::galois_arith::{CyclotomicModulus, GroupElement};
use crate::group_ring::{kummer_f, trace_element, GroupRingElement};
use crate::serde_int;
use crate::zlattice::{hnf, solve_with_hermite, HermiteForm, IntMatrix, SolveOutcome};

/// Hypothesis `h_ℓ^+ = 1`.
pub const ASSUME_H_PLUS_ONE: &str = "h_plus_equals_one";
/// Hypothesis that annihilators of the class group lie in `S` (`[Z[G]:S] = h^-`).
pub const ASSUME_INDEX_H_MINUS: &str = "index_h_minus";
/// `h^+ = 1` was asserted by the caller rather than known.
pub const ASSUME_H_PLUS_USER: &str = "h_plus_user_assumed";

/// Kummer basis of `S` as an `(ℓ−1) × ((ℓ−1)/2 + 1)` matrix: columns
/// `f_1, …, f_{(ℓ−1)/2}`, then `N`.
#[derive(Clone, Debug)]
pub struct KummerBasis {
    modulus: CyclotomicModulus,
    matrix: IntMatrix,
    hermite: HermiteForm,
}

impl KummerBasis {
    pub fn new(m: CyclotomicModulus) -> Result<Self, StickelbergerError> {
        let matrix = Self::build_matrix(m)?;
        let hermite = hnf(&matrix);
        let expected = m.half_order() as usize + 1;
        if hermite.rank() != expected {
            return Err(StickelbergerError::RankDefect { ell: m.ell(), rank: hermite.rank(), expected });
        }
        Ok(Self { modulus: m, matrix, hermite })
    }

    /// The basis matrix alone, without the Hermite form.
    pub fn build_matrix(m: CyclotomicModulus) -> Result<IntMatrix, StickelbergerError> {
        let mut columns = Vec::with_capacity(m.half_order() as usize + 1);
        for i in 1..=m.half_order() {
            columns.push(kummer_f(m, i)?.into_coeffs());
        }
        columns.push(trace_element(m).into_coeffs());
        Ok(IntMatrix::from_columns(m.group_order() as usize, &columns))
    }

    pub fn modulus(&self) -> CyclotomicModulus {
        self.modulus
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.hermite.rank()
    }

    /// Basis elements in column order (`f_1, …, N`).
    pub fn elements(&self) -> Vec<GroupRingElement> {
        (0..self.matrix.cols())
            .map(|j| GroupRingElement::from_coeffs(self.modulus, self.matrix.column(j)).expect("column length ℓ−1"))
            .collect()
    }

    /// Decides `θ ∈ S`.
    pub fn member_of_s(&self, theta: &GroupRingElement) -> Result<MembershipResult, StickelbergerError> {
        if theta.modulus() != self.modulus {
            return Err(crate::error::GroupRingError::ModulusMismatch {
                left: self.modulus.ell(),
                right: theta.modulus().ell(),
            }
            .into());
        }
        let outcome = solve_with_hermite(&self.matrix, &self.hermite, theta.coeffs())?;
        Ok(match outcome {
            SolveOutcome::Solution { x } => MembershipResult::InS { coeffs: x },
            certificate => MembershipResult::NotInS { certificate },
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "membership")]
pub enum MembershipResult {
    /// `θ = Σ a_i f_i + a_0 N`; `coeffs` is `[a_1, …, a_{(ℓ−1)/2}, a_0]`.
    InS {
        #[serde(with = "serde_int::int_vec")]
        coeffs: Vec<BigInt>,
    },
    NotInS {
        certificate: SolveOutcome,
    },
}

impl MembershipResult {
    pub fn is_member(&self) -> bool {
        matches!(self, MembershipResult::InS { .. })
    }

    /// Re-checks the result against a basis matrix and `θ`.
    pub fn verify(&self, basis: &IntMatrix, theta: &GroupRingElement) -> Result<(), String> {
        match self {
            MembershipResult::InS { coeffs } => {
                SolveOutcome::Solution { x: coeffs.clone() }.verify(basis, theta.coeffs())
            }
            MembershipResult::NotInS { certificate } => {
                if certificate.is_solution() {
                    return Err("NotInS carries a solution".into());
                }
                certificate.verify(basis, theta.coeffs())
            }
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GenerationStatus {
    #[serde(rename = "IN_R")]
    InR,
    #[serde(rename = "NOT_IN_R")]
    NotInR,
    #[serde(rename = "INCONCLUSIVE")]
    Inconclusive,
}

impl fmt::Display for GenerationStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GenerationStatus::InR => "IN_R",
            GenerationStatus::NotInR => "NOT_IN_R",
            GenerationStatus::Inconclusive => "INCONCLUSIVE",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "reason", content = "certificate")]
pub enum Reason {
    /// `f = 1`: degree-one primes hit every class.
    DensityTheorem,
    /// `h = 1`.
    TrivialClassGroup,
    /// `f = ℓ − 1`: inert primes are generated by rational primes.
    InertNontrivialClass,
    ThetaNotInS(MembershipResult),
    ThetaInS(MembershipResult),
}

impl Reason {
    pub fn name(&self) -> &'static str {
        match self {
            Reason::DensityTheorem => "DensityTheorem",
            Reason::TrivialClassGroup => "TrivialClassGroup",
            Reason::InertNontrivialClass => "InertNontrivialClass",
            Reason::ThetaNotInS(_) => "ThetaNotInS",
            Reason::ThetaInS(_) => "ThetaInS",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueGenerationVerdict {
    pub ell: u64,
    pub f: u64,
    pub status: GenerationStatus,
    #[serde(flatten)]
    pub reason: Reason,
    /// Coset representatives whose sum was tested against `S`; smallest
    /// members unless a swapped choice produced the certificate.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub representatives: Option<Vec<u64>>,
    pub assumptions: Vec<String>,
}

impl ResidueGenerationVerdict {
    /// The coset-trace element the certificate refers to.
    pub fn tested_element(&self) -> Option<GroupRingElement> {
        let m = CyclotomicModulus::new(self.ell).ok()?;
        let reps = self.representatives.as_ref()?;
        let elems: Option<Vec<_>> = reps.iter().map(|&r| m.element(r as i64).ok()).collect();
        Some(GroupRingElement::from_support(m, elems?))
    }
}

/// Verdicts for one conductor, sharing a lazily built Kummer basis.
pub struct ResidueGeneration<'a> {
    modulus: CyclotomicModulus,
    record: &'a ClassNumberRecord,
    assumptions: Vec<String>,
    basis: OnceCell<KummerBasis>,
}

impl<'a> ResidueGeneration<'a> {
    /// Fails with `HPlusUnknown` unless `h^+ = 1` is known (`ℓ < 100` and the
    /// record agrees) or `assume_h_plus_one` is set.
    pub fn new(
        m: CyclotomicModulus,
        record: &'a ClassNumberRecord,
        assume_h_plus_one: bool,
    ) -> Result<Self, StickelbergerError> {
        if record.ell != m.ell() {
            return Err(StickelbergerError::RecordMismatch { expected: m.ell(), got: record.ell });
        }
        let known = m.ell() < H_PLUS_KNOWN_BOUND && record.h_plus.is_one();
        if !known && !assume_h_plus_one {
            return Err(StickelbergerError::HPlusUnknown { ell: m.ell() });
        }
        let mut assumptions = vec![ASSUME_H_PLUS_ONE.to_string(), ASSUME_INDEX_H_MINUS.to_string()];
        if !known {
            assumptions.push(ASSUME_H_PLUS_USER.to_string());
        }
        Ok(Self { modulus: m, record, assumptions, basis: OnceCell::new() })
    }

    pub fn modulus(&self) -> CyclotomicModulus {
        self.modulus
    }

    pub fn basis(&self) -> Result<&KummerBasis, StickelbergerError> {
        if let Some(b) = self.basis.get() {
            return Ok(b);
        }
        let b = KummerBasis::new(self.modulus)?;
        Ok(self.basis.get_or_init(|| b))
    }

    pub fn verdict(&self, f: u64) -> Result<ResidueGenerationVerdict, StickelbergerError> {
        let m = self.modulus;
        if f == 0 || !m.group_order().is_multiple_of(f) {
            return Err(ArithError::NotADivisor { f, order: m.group_order() }.into());
        }
        let make = |status, reason, assumptions: Vec<String>| ResidueGenerationVerdict {
            ell: m.ell(),
            f,
            status,
            reason,
            representatives: None,
            assumptions,
        };
        if f == 1 {
            return Ok(make(GenerationStatus::InR, Reason::DensityTheorem, vec![]));
        }
        if self.record.has_trivial_class_group() {
            return Ok(make(GenerationStatus::InR, Reason::TrivialClassGroup, vec![]));
        }
        if f == m.group_order() {
            return Ok(make(GenerationStatus::NotInR, Reason::InertNontrivialClass, vec![]));
        }
        let sub = m.subgroup_of_order(f)?;
        let canonical = m.coset_representatives(&sub);
        let basis = self.basis()?;
        let fresh = KummerBasis::build_matrix(m)?;
        let test = |reps: &[GroupElement]| -> Result<MembershipResult, StickelbergerError> {
            let theta = GroupRingElement::from_support(m, reps.iter().copied());
            let membership = basis.member_of_s(&theta)?;
            // re-check against an independently rebuilt matrix
            membership.verify(&fresh, &theta).map_err(StickelbergerError::CertificateRejected)?;
            Ok(membership)
        };
        let residues = |reps: &[GroupElement]| reps.iter().map(|g| g.residue()).collect::<Vec<_>>();
        let first = test(&canonical)?;
        if !first.is_member() {
            let mut v = make(GenerationStatus::NotInR, Reason::ThetaNotInS(first), self.assumptions.clone());
            v.representatives = Some(residues(&canonical));
            return Ok(v);
        }
        // Every choice of representatives annihilates when f ∈ R. Variants
        // differ from the canonical one by sums of single-coset swaps, so if
        // every single swap stays in S, every variant does.
        for (slot, &r) in canonical.iter().enumerate() {
            for &h in sub.members().iter().filter(|&&h| h != m.identity()) {
                let mut reps = canonical.clone();
                reps[slot] = m.multiply(r, h);
                let membership = test(&reps)?;
                if !membership.is_member() {
                    let mut v =
                        make(GenerationStatus::NotInR, Reason::ThetaNotInS(membership), self.assumptions.clone());
                    v.representatives = Some(residues(&reps));
                    return Ok(v);
                }
            }
        }
        let mut v = make(GenerationStatus::Inconclusive, Reason::ThetaInS(first), self.assumptions.clone());
        v.representatives = Some(residues(&canonical));
        Ok(v)
    }

    /// One verdict per divisor of `ℓ − 1`, ascending.
    pub fn table(&self) -> Result<Vec<ResidueGenerationVerdict>, StickelbergerError> {
        self.modulus.divisors_of_order().into_iter().map(|f| self.verdict(f)).collect()
    }

    /// Tests `θ_f` built from randomly chosen coset representatives against the
    /// canonical choice. Disagreements are reported, not treated as errors.
    pub fn stress_representatives<R: Rng>(
        &self,
        f: u64,
        trials: usize,
        rng: &mut R,
    ) -> Result<StressReport, StickelbergerError> {
        let m = self.modulus;
        let sub = m.subgroup_of_order(f)?;
        let reps = m.coset_representatives(&sub);
        let basis = self.basis()?;
        let canonical = basis.member_of_s(&GroupRingElement::from_support(m, reps.iter().copied()))?.is_member();
        let mut report = StressReport { f, trials, canonical_in_s: canonical, disagreements: Vec::new() };
        for _ in 0..trials {
            let choice: Vec<_> =
                reps.iter().map(|&r| m.multiply(r, sub.members()[rng.gen_range(0..sub.members().len())])).collect();
            let theta = GroupRingElement::from_support(m, choice.iter().copied());
            if basis.member_of_s(&theta)?.is_member() != canonical {
                report.disagreements.push(choice.iter().map(|g| g.residue()).collect());
            }
        }
        Ok(report)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StressReport {
    pub f: u64,
    pub trials: usize,
    pub canonical_in_s: bool,
    /// Representative sets whose membership tag differs from the canonical one.
    pub disagreements: Vec<Vec<u64>>,
}

pub fn residue_generation_verdict(
    m: CyclotomicModulus,
    f: u64,
    record: &ClassNumberRecord,
    assume_h_plus_one: bool,
) -> Result<ResidueGenerationVerdict, StickelbergerError> {
    ResidueGeneration::new(m, record, assume_h_plus_one)?.verdict(f)
}

pub fn compute_r_table(
    m: CyclotomicModulus,
    record: &ClassNumberRecord,
    assume_h_plus_one: bool,
) -> Result<Vec<ResidueGenerationVerdict>, StickelbergerError> {
    ResidueGeneration::new(m, record, assume_h_plus_one)?.table()
}

/// The residue-degree set `R` read off a verdict table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueDegreeSet {
    pub ell: u64,
    /// Degrees proven to generate.
    pub members: Vec<u64>,
    /// Degrees with an `INCONCLUSIVE` verdict.
    pub undecided: Vec<u64>,
    /// Union of the hypotheses behind the table.
    pub assumptions: Vec<String>,
}

impl ResidueDegreeSet {
    pub fn from_verdicts(ell: u64, verdicts: &[ResidueGenerationVerdict]) -> Self {
        let pick = |s| verdicts.iter().filter(|v| v.status == s).map(|v| v.f).collect();
        let mut assumptions: Vec<String> = verdicts.iter().flat_map(|v| v.assumptions.iter().cloned()).collect();
        assumptions.sort();
        assumptions.dedup();
        Self { ell, members: pick(GenerationStatus::InR), undecided: pick(GenerationStatus::Inconclusive), assumptions }
    }

    /// `R = {1}`.
    pub fn is_trivial(&self) -> bool {
        self.members == [1] && self.undecided.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::class_data::ClassNumberTable;
    use crate::galois_arith::is_prime_u64;
    use crate::group_ring::theta_f_element;
    use num_traits::Zero;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn m(ell: u64) -> CyclotomicModulus {
        CyclotomicModulus::new(ell).unwrap()
    }

    fn is_unit_vector(v: &[BigInt], j: usize) -> bool {
        v.iter().enumerate().all(|(i, x)| if i == j { x.is_one() } else { x.is_zero() })
    }

    #[test]
    fn basis_shapes() {
        let b23 = KummerBasis::new(m(23)).unwrap();
        assert_eq!((b23.matrix().rows(), b23.matrix().cols()), (22, 12));
        assert_eq!(b23.elements()[0].support(), vec![2, 5, 9, 11, 13, 15, 16, 17, 19, 20, 22]);
        let b5 = KummerBasis::new(m(5)).unwrap();
        assert_eq!((b5.matrix().rows(), b5.matrix().cols(), b5.rank()), (4, 3, 3));
        let b3 = KummerBasis::new(m(3)).unwrap();
        assert_eq!((b3.matrix().rows(), b3.matrix().cols(), b3.rank()), (2, 2, 2));
    }

    #[test]
    fn basis_columns_are_members() {
        for ell in [3, 5, 7, 11, 13, 23] {
            let b = KummerBasis::new(m(ell)).unwrap();
            for (j, e) in b.elements().iter().enumerate() {
                match b.member_of_s(e).unwrap() {
                    MembershipResult::InS { coeffs } => assert!(is_unit_vector(&coeffs, j)),
                    other => panic!("{other:?}"),
                }
            }
        }
    }

    #[test]
    fn membership_examples() {
        let md = m(23);
        let b = KummerBasis::new(md).unwrap();
        let n = trace_element(md);
        assert_eq!(
            b.member_of_s(&n).unwrap(),
            MembershipResult::InS { coeffs: (0..12).map(|j| BigInt::from((j == 11) as i32)).collect() }
        );
        let theta11 = theta_f_element(md, 11).unwrap();
        let r = b.member_of_s(&theta11).unwrap();
        assert!(!r.is_member());
        r.verify(b.matrix(), &theta11).unwrap();
        // sigma_1 + ... + sigma_11 lies in S; coefficients checked by hand
        // elimination over Q
        let theta2 = theta_f_element(md, 2).unwrap();
        let expected: Vec<BigInt> = [1, 1, 1, 1, 1, 1, 0, -1, -2, -3, -1, 1].into_iter().map(BigInt::from).collect();
        let r = b.member_of_s(&theta2).unwrap();
        assert_eq!(r, MembershipResult::InS { coeffs: expected });
        r.verify(b.matrix(), &theta2).unwrap();
        assert!(b.member_of_s(&trace_element(m(5))).is_err());
    }

    #[test]
    fn verdict_examples() {
        let t = ClassNumberTable::builtin();
        let v = residue_generation_verdict(m(23), 11, t.get(23).unwrap(), false).unwrap();
        assert_eq!(v.status, GenerationStatus::NotInR);
        assert_eq!(v.reason.name(), "ThetaNotInS");
        assert!(v.assumptions.contains(&ASSUME_INDEX_H_MINUS.to_string()));
        let v = residue_generation_verdict(m(23), 1, t.get(23).unwrap(), false).unwrap();
        assert_eq!((v.status, v.reason.name()), (GenerationStatus::InR, "DensityTheorem"));
        let v = residue_generation_verdict(m(3), 2, t.get(3).unwrap(), false).unwrap();
        assert_eq!((v.status, v.reason.name()), (GenerationStatus::InR, "TrivialClassGroup"));
        let v = residue_generation_verdict(m(23), 22, t.get(23).unwrap(), false).unwrap();
        assert_eq!((v.status, v.reason.name()), (GenerationStatus::NotInR, "InertNontrivialClass"));
        assert!(matches!(
            residue_generation_verdict(m(23), 3, t.get(23).unwrap(), false),
            Err(StickelbergerError::Arith(ArithError::NotADivisor { .. }))
        ));
        assert!(matches!(
            residue_generation_verdict(m(29), 2, t.get(23).unwrap(), false),
            Err(StickelbergerError::RecordMismatch { .. })
        ));
    }

    #[test]
    fn h_plus_gate() {
        let rec = ClassNumberRecord::new(101, 1u32.into(), 7u32.into());
        let md = m(101);
        assert!(matches!(ResidueGeneration::new(md, &rec, false), Err(StickelbergerError::HPlusUnknown { ell: 101 })));
        let gen = ResidueGeneration::new(md, &rec, true).unwrap();
        assert!(gen.assumptions.contains(&ASSUME_H_PLUS_USER.to_string()));
    }

    #[test]
    fn tables_for_23_29_5() {
        let t = ClassNumberTable::builtin();
        let statuses = |ell| -> Vec<(u64, GenerationStatus)> {
            compute_r_table(m(ell), t.get(ell).unwrap(), false).unwrap().iter().map(|v| (v.f, v.status)).collect()
        };
        use GenerationStatus::*;
        assert_eq!(statuses(23), vec![(1, InR), (2, NotInR), (11, NotInR), (22, NotInR)]);
        let v2 = residue_generation_verdict(m(23), 2, t.get(23).unwrap(), false).unwrap();
        let tested = v2.tested_element().unwrap();
        assert_ne!(tested, theta_f_element(m(23), 2).unwrap());
        match &v2.reason {
            Reason::ThetaNotInS(cert) => cert.verify(&KummerBasis::build_matrix(m(23)).unwrap(), &tested).unwrap(),
            other => panic!("{other:?}"),
        }
        assert_eq!(statuses(29), vec![(1, InR), (2, NotInR), (4, NotInR), (7, NotInR), (14, NotInR), (28, NotInR)]);
        assert!(statuses(5).iter().all(|(_, s)| *s == InR));
        let v23 = compute_r_table(m(23), t.get(23).unwrap(), false).unwrap();
        assert!(ResidueDegreeSet::from_verdicts(23, &v23).is_trivial());
    }

    #[test]
    fn verdict_json_round_trip() {
        let t = ClassNumberTable::builtin();
        for ell in [3, 23, 29] {
            for v in compute_r_table(m(ell), t.get(ell).unwrap(), false).unwrap() {
                let json = serde_json::to_string(&v).unwrap();
                assert_eq!(serde_json::from_str::<ResidueGenerationVerdict>(&json).unwrap(), v, "{json}");
            }
        }
    }

    #[test]
    fn stress_mode_runs() {
        let t = ClassNumberTable::builtin();
        let gen = ResidueGeneration::new(m(23), t.get(23).unwrap(), false).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let r = gen.stress_representatives(11, 20, &mut rng).unwrap();
        assert_eq!(r.trials, 20);
        assert!(!r.canonical_in_s);
    }

    #[test]
    fn membership_is_g_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for ell in (3..50).filter(|&p| is_prime_u64(p)) {
            let md = m(ell);
            let b = KummerBasis::new(md).unwrap();
            let basis_elems = b.elements();
            for trial in 0..6 {
                // even trials: integer combinations of the basis (members);
                // odd trials: random 0/1 vectors (almost always non-members)
                let theta = if trial % 2 == 0 {
                    basis_elems.iter().fold(GroupRingElement::zero(md), |acc, e| {
                        acc.add(&e.scale(&BigInt::from(rng.gen_range(-3..4)))).unwrap()
                    })
                } else {
                    let coeffs = (0..ell - 1).map(|_| BigInt::from(rng.gen_range(0..2))).collect();
                    GroupRingElement::from_coeffs(md, coeffs).unwrap()
                };
                let tag = b.member_of_s(&theta).unwrap().is_member();
                let c = md.element(rng.gen_range(1..ell as i64)).unwrap();
                assert_eq!(b.member_of_s(&theta.group_act(c)).unwrap().is_member(), tag, "ell={ell}");
            }
        }
    }
}
