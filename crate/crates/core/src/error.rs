use thiserror::Error;

use crate::algebra::ValidationReport;
use crate::parser::ParseError;
use crate::polarity::CompatibilityReport;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// A chain constructor was given a carrier size below 2.
    #[error("algebra size must be at least 2, got {size}")]
    InvalidAlgebraSize { size: usize },

    /// A table algebra failed the residuated-lattice laws.
    #[error("algebra rejected: {report}")]
    AlgebraRejected { report: ValidationReport },

    /// An operation mixed values or sets over different algebras.
    #[error("algebra mismatch in {context}")]
    AlgebraMismatch { context: &'static str },

    /// A truth value's index lies outside the algebra's carrier.
    #[error("truth value index {index} out of range for a {carrier}-element algebra")]
    ValueOutOfRange { index: usize, carrier: usize },

    /// A string did not name an element of the algebra.
    #[error("unknown algebra element `{name}`")]
    UnknownElement { name: String },

    /// An operation mixed sets or relations over different index sets.
    #[error("index-set mismatch in {context}")]
    IndexMismatch { context: &'static str },

    /// A label occurred twice where labels must be unique.
    #[error("duplicate label `{label}`")]
    DuplicateLabel { label: String },

    /// A label was looked up in an index set that does not contain it.
    #[error("unknown label `{label}`")]
    UnknownLabel { label: String },

    /// A matrix or vector had the wrong dimensions.
    #[error("shape mismatch: {context}")]
    ShapeMismatch { context: String },

    /// A graph edge relation is not reflexive.
    #[error("graph is not reflexive: E({node}, {node}) = {value}, expected 1")]
    NotReflexive { node: String, value: String },

    /// Extra relations are not compatible with the polarity or graph.
    #[error("relations are not compatible: {report}")]
    Incompatible { report: CompatibilityReport },

    /// A labelled relation pair is not compatible with its graph.
    #[error("relation `{label}` is not compatible with the graph: {report}")]
    IncompatibleRelation {
        label: String,
        report: CompatibilityReport,
    },

    /// An enumeration or search would exceed the configured budget.
    #[error("{what} needs {needed} steps, over the budget of {budget}")]
    BudgetExceeded {
        what: &'static str,
        needed: u128,
        budget: u64,
    },

    /// A formula mentions an atom the model does not interpret.
    #[error("unknown atom `{name}`")]
    UnknownAtom { name: String },

    /// An operation's preconditions rule out this input.
    #[error("unsupported: {context}")]
    Unsupported { context: &'static str },

    /// An unlabelled modality was used on a frame without exactly one label.
    #[error("unlabelled modality needs a frame with exactly one relation label, this frame has {count}")]
    AmbiguousLabel { count: usize },

    /// A valuation table is not a stable set (strict mode).
    #[error("valuation for `{atom}` is not stable: cell {cell} has value {value} but closure {closure}")]
    NotStable {
        atom: String,
        cell: String,
        value: String,
        closure: String,
    },

    /// Formula or sequent syntax error.
    #[error(transparent)]
    Parse(#[from] ParseError),

    /// A frame file is structurally valid JSON but semantically wrong.
    #[error("frame file error at {pointer}: {message}")]
    FrameFile { pointer: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
}
