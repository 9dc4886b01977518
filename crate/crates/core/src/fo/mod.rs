//! First-order structures over swap Nmatrices and twist matrices.
//!
//! Sentences are evaluated after canonicalization: free variables and closed
//! terms are replaced by the constants `@k` of the diagram language, so a
//! sentence and its substitution instances that denote the same elements are
//! literally the same sentence.

mod enumerate;
mod ground;
mod model_file;
mod structure;
mod swap_search;
mod twist_eval;

use thiserror::Error;

pub use enumerate::{enumerate_swap_models, enumerate_twist_models, ModelShape};
pub use ground::{canonicalize, eval_term, ground_closure, GroundSentence, DEFAULT_CLOSURE_CAP};
pub use model_file::{load_model, model_from_json, model_to_json, ModelFileError};
pub use structure::{
    check_standard_equality, tuples, EqualityKind, FOStructure, Structure, SwapStructure, Table, TruthValue,
    TwistStructure,
};
pub use swap_search::{
    check_fo_valuation, qmbc_consequence, qmbc_eq_filter, qmbc_possible_values, qmbc_valuations, FOValuation,
};
pub use twist_eval::{qlfi1_consequence, qlfi1_interpret, qlfi1_value, TwistCountermodel};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FoError {
    #[error("table has {found} entries, expected {expected}")]
    TableSize { expected: usize, found: usize },
    #[error("the domain is empty")]
    EmptyDomain,
    #[error("{0}")]
    Invalid(String),
    #[error("equality table is not standard: designated values must sit exactly on the diagonal")]
    NonStandardEquality,
    #[error("first-order search needs a full swap structure")]
    RestrictedMatrix,
    #[error("variable `{0}` is not assigned")]
    UnmappedVariable(String),
    #[error("symbol `{0}` is not interpreted by the structure")]
    UnknownSymbol(String),
    #[error("domain constant @{0} is out of range")]
    DomainOutOfRange(usize),
    #[error("the structure does not interpret equality")]
    NoEquality,
    #[error("ground closure exceeds the cap of {0} sentences")]
    ClosureTooLarge(usize),
    #[error("`{0}` is not a sentence")]
    NotASentence(String),
}
