//! Decorated surfaces: ideal triangulations, groupoid representations, gauge and
//! restriction, normal forms of equivalence words, and dual-graph intersection pairings.

pub mod equivalence;
pub mod io;
pub mod random;
pub mod rep;
pub mod skein;
pub mod suite;
pub mod surface;

use thiserror::Error;

pub use equivalence::{
    evaluate_word, normal_form, normal_form_with, random_word, Cylinder, Decoration, EquivalenceWord, Generator,
    NormalForm, Strategy,
};
pub use random::{random_gauge, random_rep};
pub use rep::{gauge_act, gauge_fix, reps_equal_up_to_equivalence, restrict_rep, validate_rep, GroupoidRep, Restriction};
pub use skein::{dual_graph_rep, intersect_colored, intersect_path, ColoredSkein, DualEdge, GSkein, ObjectSymbol, TensorWord};
pub use surface::{IdealSurfaceTriangulation, OEdge, SurfaceError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DecorError {
    #[error("labels(reverse(e)) != labels(e)^-1 on edge {0}")]
    ReversalViolation(usize),
    #[error("triangle {0} violates the cocycle condition")]
    CocycleViolation(usize),
    #[error("gauge domain does not match the vertex set")]
    DomainMismatch,
    #[error("component {0} has no kept base point")]
    EmptyComponent(usize),
    #[error("not a path: break at step {0}")]
    NotAPath(usize),
    #[error("representations live on different surfaces")]
    SurfaceMismatch,
    #[error("word is not composable at generator {0}")]
    NotComposable(usize),
    #[error("expected {expected} labels, got {got}")]
    LabelCount { expected: usize, got: usize },
    #[error("group element {0} out of range")]
    BadElement(u32),
    #[error("vertex {0} out of range")]
    BadVertex(usize),
    #[error("dual edge {0} does not cross its primal edge")]
    BadEdge(usize),
    #[error("no representation found after {0} attempts")]
    NoRepresentation(usize),
    #[error("schema: {0}")]
    Schema(String),
    #[error(transparent)]
    Surface(#[from] SurfaceError),
}
