//! Graded category backends: simple objects, fusion multiplicities, modified
//! dimensions, the b-function, Gram matrices and tetrahedral tables.

mod backend;
mod checks;
mod color;
pub mod load;

pub use backend::{canonical_triple, BackendData, CategoryBackend, LoadMode, SimpleObject, TetTable, Triple};
pub use checks::{
    check_chromatic, degree_pairs, validate_b, BFailure, BReport, ChromaticFailure, ChromaticReport,
};
pub use color::{b_color, extend_b_color, kirby_color, ExtendedColor, FormalColor};
pub use load::{backend_to_json, load_backend, load_backend_file, vec_group_backend};

use thiserror::Error;

use crate::gcore::{GroupError, ScalarError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CatError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("invariant `{name}` violated at {witness}")]
    InvariantViolation { name: String, witness: String },
    #[error("degree {0} lies in the bad set")]
    DegreeInBadSet(String),
    #[error("sampled degree {0} lies in the bad set")]
    BadDegreeSample(String),
    #[error("no admissible splitting element h for degree {0}")]
    NoValidH(String),
    #[error("singular Gram matrix at {0}")]
    SingularGram(String),
    #[error("b is not a valid b-function: {0}")]
    BadBFunction(String),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

impl CatError {
    pub(crate) fn violation(name: &str, witness: impl Into<String>) -> CatError {
        CatError::InvariantViolation { name: name.into(), witness: witness.into() }
    }
}
