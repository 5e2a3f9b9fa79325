//! Telescoping triples, symplectic sums and torus surgery as transitions on
//! exact state records.
//!
//! A [`TelescopingTriple`] carries `(e, σ)`, a presentation of the
//! fundamental group of the complement of its two tori, and the meridian and
//! push-off words of each torus. Triples compose by [`telescoping_sum`]; a
//! [`luttinger_surgery`] turns one into a [`ManifoldState`] by adjoining the
//! surgery relator `μ^k · c^p · c'^q`.

mod recipe;
mod registry;
mod replay;
mod sum;
mod surgery;
mod triple;

pub use recipe::{compose_recipe, BlockKind, FamilyRecipe, FAMILY_COUNT};
pub use registry::{BlockEntry, BlockName, FlagsEntry, Registry, RegistryFile, ToriEntry, TorusEntry};
pub use replay::{replay, Replayed, Step};
pub use sum::telescoping_sum;
pub use surgery::{
    botany_family_member, botany_seed, generating_curves, luttinger_surgery, surgery_pipeline,
    ExponentConvention, ManifoldState, SurgerySpec,
};
pub use triple::{validate_triple, Check, Curve, TelescopingTriple, TorusData, TorusId, ValidationReport};

use thiserror::Error;

use crate::group::GroupError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CalculusError {
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("registry parse error at line {line}, column {column}: {message}")]
    RegistryParse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("registry block {block}: {message}")]
    RegistryEntry { block: String, message: String },
    #[error("unknown block {0}")]
    UnknownBlock(String),
    #[error("block {block} failed validation: {failures}")]
    InvalidTriple { block: String, failures: String },
    #[error("invalid recipe: {0}")]
    InvalidRecipe(String),
    #[error("torus {0} was already consumed by an earlier surgery")]
    TorusConsumed(TorusId),
    #[error("surgery relator is trivial: k = 0 with p = q = 0")]
    TrivialSurgery,
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("replay failed: {0}")]
    Replay(String),
    #[error("integer overflow in {0}")]
    Overflow(&'static str),
}
