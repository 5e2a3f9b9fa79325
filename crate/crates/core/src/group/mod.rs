//! Finitely presented groups over exact integers.
//!
//! Words and presentations, Tietze simplification, exponent-sum relation
//! matrices, Smith normal form, and the abelian-group certificate that gates
//! every claim of the form "this presentation defines the group G".

mod abelian;
mod matrix;
mod presentation;
mod smith;
mod tietze;
mod word;

pub use abelian::{
    abelian_invariants, generates_full_group, is_certifiably_abelian, relation_matrix,
    AbelianCoordinates, AbelianInvariants, AbelianMap,
};
pub use matrix::IntegerMatrix;
pub use presentation::{adjoin_relator, GeneratorSymbol, Presentation};
pub use smith::{smith_normal_form, SmithDecomposition};
pub use tietze::{tietze_simplify, tietze_simplify_with, Simplification, TietzeConfig};
pub use word::{free_reduce, Letter, Word};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("generator name must be a nonempty identifier starting with a letter, got {0:?}")]
    InvalidGeneratorName(String),
    #[error("generator {0:?} listed twice")]
    DuplicateGenerator(String),
    #[error("unknown generator {name:?} in {input:?}")]
    UnknownGenerator { name: String, input: String },
    #[error("cannot parse word {input:?}: {message}")]
    Parse { input: String, message: String },
    #[error("relator references generator index {index} but the presentation has {generators} generators")]
    InvalidRelator { index: usize, generators: usize },
    #[error("presentation is not certified abelian: {0}")]
    NotCertified(String),
}
