#![no_std]
// `!(x <= tol)` is used on purpose so that NaN residuals fail.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
//! Symmetric spaces as symmetric pairs, the canonical virtual immersion
//! `⟦g,X⟧ ↦ Ad_g X` into `(g, ⊕ λᵢ Bᵢ)`, and numerical checks of the
//! identities it satisfies.

extern crate alloc;

pub mod bilinear;
pub mod error;
pub mod expm;
pub mod fd;
pub mod immersion;
pub mod lie;
pub mod linalg;
pub mod rng;
pub mod symmetric;
pub mod verification;

pub use bilinear::{BilinearForm, Signature, Subspace, TangentSplitter};
pub use error::{Error, Result};
pub use immersion::{
    classical_immersion, omega0, CanonicalImmersion, ClassicalImmersion, ClassicalKind,
    ComposedImmersion, ImmersionKind, VirtualImmersion,
};
pub use lie::{GroupElement, LieAlgebraModel};
pub use linalg::{Matrix, Vector};
pub use symmetric::{CartanDecomposition, Factor, FactorKind, SymmetricSpaceModel, TangentRep};
pub use verification::{run_suite, run_suite_for_space, CheckRecord, FDConfig, VerificationReport};
