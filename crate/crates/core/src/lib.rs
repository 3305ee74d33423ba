//! Many-valued graph-based semantics for non-distributive modal logic.
//!
//! The library is organized bottom-up:
//!
//! - [`algebra`]: finite residuated truth-value algebras (Łukasiewicz and
//!   Gödel chains, arbitrary finite tables) with an exhaustive law validator.
//! - [`mvset`]: algebra-valued sets and binary relations, subsethood,
//!   singletons, and the two relational liftings.
//! - [`polarity`]: polarities (formal contexts valued in an algebra), the
//!   Galois connection they induce, stable sets, formal concepts, and
//!   enriched polarities carrying box/diamond relations.
//! - [`graph`]: reflexive graphs valued in an algebra, the polarity they
//!   induce, graph-level closure and modal operators, and compatibility of
//!   additional relations with the graph.
//! - [`logic`]: formulas, models (frame + concept-valued atoms), and the
//!   recursive evaluator, together with support/refutation queries and
//!   sequent checking at model and frame level.
//! - [`parser`]: concrete syntax for formulas and sequents.
//! - [`analysis`]: first-order frame conditions corresponding to the modal
//!   axioms □⊥⊢⊥, ⊤⊢◇⊤, □p⊢p, p⊢◇p, and a harness comparing them against
//!   brute-force semantic validity.
//! - [`io`]: JSON frame-file loading and saving.
//! - [`casestudy`]: a small built-in three-node frame with three labelled
//!   relations and two atoms, plus the expected evaluation tables it must
//!   reproduce bit-exactly.
//! - [`render`]: plain-text table rendering shared by the CLI.
//!
//! All arithmetic is exact: truth values are carrier indices and chain
//! elements are rationals k/d handled as integers. No floating point is used
//! anywhere.

pub mod algebra;
pub mod analysis;
pub mod casestudy;
mod error;
pub mod graph;
pub mod io;
pub mod logic;
pub mod mvset;
pub mod parser;
pub mod polarity;
pub mod render;

pub use algebra::{AlgebraKind, TruthAlgebra, TruthValue, ValidationReport};
pub use error::Error;
pub use graph::{AGraph, GraphFrame};
pub use logic::{Formula, Model, Sequent};
pub use mvset::{ARelation, AValuedSet, IndexSet};
pub use polarity::{APolarity, Concept, EnrichedPolarity};
