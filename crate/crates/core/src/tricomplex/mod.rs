//! Closed Δ-complex 3-manifolds, H-triangulations, builders and guarded
//! Pachner and gauge moves.

mod build;
mod complex;
mod htri;
pub mod io;
mod moves;
mod sig;

pub use build::{
    barycentric_subdivision, boundary_4simplex, complex_from_labels, hamiltonian_cycle, one_vertex_lens,
    trivial_h_triangulation,
};
pub use complex::{
    pair_index, perm_compose, perm_inverse, perm_is_even, validate_complex, ComplexData, DeltaComplex3, FaceGluing,
    Perm, EDGE_PAIRS,
};
pub use htri::{gauge_move_phi, make_h_triangulation, HTriangulation};
pub use moves::{pachner_14, pachner_23, pachner_32, pachner_41, random_move, Move, MoveMix};
pub use sig::{complex_signature, signature};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TriError {
    #[error("schema error: {0}")]
    Schema(String),
    #[error("not closed: {0}")]
    NotClosed(String),
    #[error("not orientable at {0}")]
    NotOrientable(String),
    #[error("edge identified with its reverse: {0}")]
    BadLink(String),
    #[error("vertex link is not a sphere at {0}")]
    BadVertexLink(String),
    #[error("not quasi-regular: edge {0} is a loop")]
    NotQuasiRegular(usize),
    #[error("not Hamiltonian: vertex {0} meets no Γ edge")]
    NotHamiltonian(usize),
    #[error("cocycle condition fails on face {0}")]
    CocycleViolation(usize),
    #[error("edge {0} carries a degree in the bad set")]
    InadmissibleEdge(usize),
    #[error("guard failed: {0}")]
    GuardFailed(String),
    #[error("Hamiltonicity lost: {0}")]
    HamiltonicityLost(String),
    #[error("no Hamiltonian cycle found")]
    NotFound,
}
