//! Exact arithmetic for manufacturing 4-manifolds from telescoping triples.
//!
//! The crate is organised bottom-up:
//!
//! - [`group`]: words, finite presentations, Tietze simplification, Smith
//!   normal form and abelian invariants, all over exact integers.
//! - [`calculus`]: telescoping triples, symplectic sums and torus surgery as
//!   transitions on exact state records, with replayable provenance.
//! - [`geography`]: characteristic numbers and the family tables.
//! - [`homeo`]: topological prototypes and the Hambleton–Kreck criterion.
//! - [`catalog`], [`export`], [`verify`]: persistence, CSV/SVG output and the
//!   verification suites used by the `telescoping` binary.

pub mod calculus;
pub mod catalog;
pub mod export;
pub mod geography;
pub mod group;
pub mod homeo;
pub mod verify;

// The guide's snippets run as doc-tests.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/groups.md")]
    mod groups {}
    #[doc = include_str!("../../../book/src/calculus.md")]
    mod calculus {}
    #[doc = include_str!("../../../book/src/geography.md")]
    mod geography {}
    #[doc = include_str!("../../../book/src/homeo.md")]
    mod homeo {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
