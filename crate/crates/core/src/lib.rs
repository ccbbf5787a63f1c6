//! Classification of k-invariants of free `(Z/p)^2` actions on products of
//! two spheres, encoded as pairs of binary forms over `F_p`.
//!
//! The entry points are [`equivalence::canonical_form`] and
//! [`equivalence::decide_equivalent`] for degree-2 pairs,
//! [`equivalence::orbit_summary`] for exhaustive orbit counts, and the
//! [`construction`] module for pairs coming from linear actions.

pub mod cli;
pub mod cohomology;
pub mod construction;
pub mod equivalence;
pub mod error;
pub mod field;
pub mod forms;
pub mod restrictions;

pub use equivalence::{EquivalenceMode, FormPair, NormalForm, TransformWitness};
pub use error::{Error, Result};
pub use field::{ClassIndex, FieldContext, FieldElement};
pub use forms::{BinaryForm, Matrix2, ProjectivePoint};

/// Bounds on exhaustive computations.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Limits {
    /// Largest number of pairs an orbit enumeration may index.
    pub max_pairs: u64,
    /// Largest prime for the brute-force oracle.
    pub max_brute_force_prime: u32,
    /// Largest degree of `zeta^k`.
    pub max_zeta_degree: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_pairs: 13u64.pow(6),
            max_brute_force_prime: 7,
            max_zeta_degree: 60,
        }
    }
}
