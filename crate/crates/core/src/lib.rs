//! Finitely presented information systems, continuous information frames and stratified
//! conjunctive logics: axiom checks, the functors between their categories, witnesses of the
//! equivalences, derivability with traces, and finite rounded-ideal completion.
//!
//! All structures are finite and immutable once built. Checks are exhaustive and report
//! concrete witnesses; searches that could blow up are bounded by [`Limits`].

pub mod axioms;
pub mod bases;
mod bits;
pub mod category;
pub mod corpus;
pub mod doc;
pub mod error;
pub mod functors;
pub mod logic;
pub mod model;
pub mod report;
pub mod token;

pub use error::{Error, Result};
pub use model::{Family, Frame, InfoSystem, Morphism, MorphismKind, MorphismRel, Relation, Structure};
pub use report::{Limits, Report, Verdict, Violation, WitnessItem};
pub use token::{Token, TokenSet, RESERVED_TRUTH};
