//! Exact arithmetic for prime cyclotomic fields `Q(ζ_ℓ)`:
//!
//! - [`galois_arith`]: the Galois group `(Z/ℓZ)^*`, subgroups and cosets.
//! - [`group_ring`]: `Z[G]`, Stickelberger elements, Kummer generators.
//! - [`zlattice`]: Hermite/Smith forms and certified integer solving.
//! - [`stickelberger`]: membership in the Stickelberger ideal and
//!   residue-degree generation verdicts.
//! - [`norm_solver`]: solvability of `|N(x)| = a`.
//! - [`class_data`]: class number table and its determinant check.

pub mod class_data;
pub mod error;
pub mod galois_arith;
pub mod group_ring;
pub mod norm_solver;
pub mod serde_int;
pub mod stickelberger;
pub mod zlattice;

pub use class_data::{maillet_h_minus, ClassNumberRecord, ClassNumberTable};
pub use error::{ArithError, ClassDataError, GroupRingError, LatticeError, NormError, StickelbergerError};
pub use galois_arith::{CyclotomicModulus, GroupElement, Subgroup};
pub use group_ring::{kummer_f, theta_a, theta_f_element, trace_element, GroupRingElement};
pub use norm_solver::{norm_solvable, NormStatus, NormVerdict};
pub use stickelberger::{
    compute_r_table, residue_generation_verdict, GenerationStatus, KummerBasis, MembershipResult, ResidueDegreeSet,
    ResidueGeneration, ResidueGenerationVerdict,
};
pub use zlattice::{IntMatrix, SolveOutcome};
