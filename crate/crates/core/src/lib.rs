//! Decision procedures for ω-regular languages represented by morphisms
//! into finite ω-semigroups (Wilke algebras): level-2 and level-3
//! separation of the quantifier alternation hierarchy, and membership for
//! Boolean combinations at level 2, with machine-checkable certificates.
//!
//! Layers, bottom to top:
//!
//! - [`words`], [`semigroup`], [`wilke`]: carriers and axioms;
//! - [`morphism`], [`pairing`], [`quotient`], [`buchi`]: recognizers and
//!   the constructions that normalize them;
//! - [`ef`]: the rank-bounded logical preorders on finite words and the
//!   bounded chain-set estimation built on them;
//! - [`sat`]: the saturation sets on infinite elements, the level-2
//!   Boolean-membership equation, and the alternation graph;
//! - [`decide`]: the top-level verdicts with certificates;
//! - [`format`], [`report`], [`corpus`]: file formats, rendering, bundled
//!   examples.

pub mod buchi;
pub mod corpus;
pub mod decide;
pub mod ef;
pub mod format;
pub mod morphism;
pub mod pairing;
pub mod quotient;
pub mod report;
pub mod sat;
pub mod semigroup;
pub mod util;
pub mod wilke;
pub mod words;

pub use morphism::{AcceptSet, OmegaMorphism, RecognizedLanguage};
pub use semigroup::{FiniteSemigroup, OptPlus, PlusElem};
pub use wilke::{InfElem, WilkeAlgebra};
pub use words::{Alphabet, LassoWord, LetterSet, Word};
