//! # conika
//!
//! Conical 2-designs and what they say about bipartite entanglement.
//!
//! A POVM `{E_α}` on `C^d` is a *conical 2-design* when
//! `Σ_α E_α ⊗ E_α = k_s Π_sym + k_a Π_asym` with `k_s > k_a ≥ 0`. For such a
//! POVM the concurrence of any pure state is a function of the Euclidean norm
//! of its outcome-probability table alone, and the operator `Σ E⊗E` (with its
//! partial transpose) yields two entanglement witnesses.
//!
//! The crate provides
//!
//! - dense complex linear algebra on `C^d ⊗ C^d` ([`matrix`], [`operators`],
//!   [`eigen`], [`random`]);
//! - design constructors: MUBs, SICs, depolarized families ([`designs`]);
//! - the certifier that extracts `k_s`, `k_a` ([`certify`]);
//! - probability tables and concurrence ([`entanglement`]);
//! - witnesses, detection criteria and Werner states ([`witness`]);
//! - the `conika` command-line front end ([`cli`]).
//!
//! ```
//! use conika::{certify, design_concurrence, probability_vector, sic_povm, BipartiteState, DEFAULT_TOL};
//!
//! let sic = sic_povm(2)?;
//! let cert = certify(&sic, DEFAULT_TOL);
//! assert!(cert.is_projective_design);
//!
//! let table = probability_vector(&sic, &BipartiteState::max_entangled(2))?;
//! let c = design_concurrence(&cert, table.norm)?;
//! assert!((c - 1.0).abs() < 1e-12);
//! # Ok::<(), conika::Error>(())
//! ```
//!
//! The `book/` directory next to the workspace walks through the same
//! material chapter by chapter; every code block there is compiled and run
//! as a doc-test of this crate.

#![forbid(unsafe_code)]

pub mod catalog;
pub mod certify;
pub mod cli;
pub mod designs;
pub mod eigen;
pub mod entanglement;
pub mod error;
pub mod matrix;
pub mod operators;
pub mod random;
pub mod witness;

pub use catalog::{builtin_design, conical_catalogue};
pub use certify::{certify, design_sum, rank_profile, DesignCertificate, DEFAULT_TOL};
pub use designs::{basis_povm, depolarize, mub_full_set, sic_from_fiducial, sic_povm, Povm};
pub use eigen::{hermitian_eigensystem, Eigensystem};
pub use entanglement::{
    concurrence_oracle, design_concurrence, local_unitary_orbit_norms, pnorm_from_schmidt, probability_vector,
    schmidt_coefficients, BipartiteState, ProbabilityTable,
};
pub use error::{Error, Result};
pub use matrix::{ComplexMatrix, StateVector, C64};
pub use operators::{
    max_entangled_state, partial_trace, partial_transpose, swap_operator, sym_asym_projectors, tensor_product,
    Subsystem,
};
pub use random::haar_random_unitary;
pub use witness::{
    analytic_bounds, detect_linear, detect_quadratic, extremal_pure, seesaw_extremal_product, werner_state,
    witness_operators, witness_report, DensityMatrix, SeesawConfig, WitnessReport,
};

// Book chapters are compiled as doc-tests so their snippets cannot drift.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/operators.md")]
    mod operators {}
    #[doc = include_str!("../../../book/src/designs.md")]
    mod designs {}
    #[doc = include_str!("../../../book/src/certification.md")]
    mod certification {}
    #[doc = include_str!("../../../book/src/concurrence.md")]
    mod concurrence {}
    #[doc = include_str!("../../../book/src/witnesses.md")]
    mod witnesses {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
