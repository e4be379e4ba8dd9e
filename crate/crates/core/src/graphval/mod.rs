//! Evaluation of the closed graphs entering the state sum (unknots, thetas,
//! tetrahedra) and the handle-cancellation identities.

mod suite;
mod tet;

pub use suite::{identity_suite, IdentityCheck};
pub use tet::{
    admissible_labelings, check_even_permutation, even_permutations, faces_of, minus_from_plus, relabel, scan_even_permutation,
    tet_faces, EvenPermFailure, Sign, TetEvaluator, TetLabel, MINUS_FACES, PLUS_FACES,
};

use thiserror::Error;

use crate::catdata::{CatError, CategoryBackend, Triple};
use crate::gcore::{Element, Scalar};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("inadmissible tetrahedron label {0}")]
    InadmissibleLabel(String),
    #[error("basis index out of range at {0}")]
    IndexOutOfRange(String),
    #[error("no table entry for {0}")]
    MissingEntry(String),
    #[error("degree {0} lies in the bad set")]
    DegreeInBadSet(String),
    #[error(transparent)]
    Cat(#[from] CatError),
}

/// The unknot colored by `i`: its modified dimension.
pub fn eval_unknot(backend: &CategoryBackend, i: usize) -> Scalar {
    backend.d(i).clone()
}

/// Theta graph: the pairing of basis vector `x` of `H(i,j,k)` with `y` of `H(k*,j*,i*)`.
pub fn eval_theta(backend: &CategoryBackend, t: Triple, x: usize, y: usize) -> Result<Scalar, GraphError> {
    let n = backend.n(t);
    if x >= n || y >= n {
        return Err(GraphError::IndexOutOfRange(format!("{} ({x},{y})", backend.triple_name(t))));
    }
    Ok(backend.gram(t).expect("gram of admissible triple").get(x, y).clone())
}

pub fn eval_tet(backend: &CategoryBackend, label: &TetLabel) -> Result<Scalar, GraphError> {
    label.check(backend)?;
    let dims = backend.face_dims(&label.labels, label.sign);
    let values = backend
        .tet_table(label.sign)
        .get(&label.labels)
        .ok_or_else(|| GraphError::MissingEntry(backend.labels_name(&label.labels)))?;
    Ok(values[tet::flat_index(&dims, &label.basis)].clone())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CancellationFailure {
    pub witness: String,
    pub lhs: Scalar,
    pub rhs: Scalar,
}

#[derive(Clone, Debug, Default)]
pub struct CancellationReport {
    pub checked: usize,
    pub failures: Vec<CancellationFailure>,
}

impl CancellationReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// 1-2 cancellation in degree `g`: a circle colored by the Kirby color, cut open with
/// the copairing and closed against the pairing, must give `d(V) qdim(m)` on every
/// `V` and `m` of degree `g⁻¹ deg V`; contracted over `(i, basis)` as
/// `Σ_{i ∈ I_g} d(i) tr(C(V*,i,m) · G(V*,i,m))`.
pub fn check_cancellation_12(backend: &CategoryBackend, g: Element) -> Result<CancellationReport, GraphError> {
    let grp = backend.group();
    if backend.in_badset(g) {
        return Err(GraphError::DegreeInBadSet(grp.name(g).to_string()));
    }
    let f = backend.field();
    let mut report = CancellationReport::default();
    for v in 0..backend.n_simples() {
        let hm = grp.mul(grp.inv(g), backend.degree(v));
        for &m in backend.simples_of_degree(hm) {
            let mut lhs = f.zero();
            let mut broken = None;
            for &i in backend.simples_of_degree(g) {
                let t = [backend.star(v), i, m];
                if backend.n(t) == 0 {
                    continue;
                }
                match backend.copairing(t) {
                    Ok(c) => {
                        let gm = backend.gram(t).expect("gram of admissible triple");
                        lhs += &(backend.d(i) * &c.mul(gm).trace(f));
                    }
                    Err(_) => broken = Some(backend.triple_name(t)),
                }
            }
            let rhs = backend.d(v) * backend.qdim(m);
            report.checked += 1;
            if let Some(w) = broken {
                report.failures.push(CancellationFailure { witness: format!("singular gram {w}"), lhs, rhs });
            } else if lhs != rhs {
                let witness = format!("V={}, m={}", backend.simple(v).name, backend.simple(m).name);
                report.failures.push(CancellationFailure { witness, lhs, rhs });
            }
        }
    }
    Ok(report)
}

/// 2-3 cancellation: `Σ_i t(f ∘ x^i) x_i = f` on each sampled multiplicity space,
/// i.e. `gram · copairing = 1`. Failures report the trace of the product.
pub fn check_cancellation_23(backend: &CategoryBackend, triples: &[Triple]) -> CancellationReport {
    let f = backend.field();
    let mut report = CancellationReport::default();
    for &t in triples {
        let n = backend.n(t);
        if n == 0 {
            continue;
        }
        report.checked += 1;
        let gm = backend.gram(t).expect("gram of admissible triple");
        let rhs = f.int(n as i64);
        match backend.copairing(t) {
            Ok(c) => {
                let p = gm.mul(&c);
                if !p.is_identity() {
                    report.failures.push(CancellationFailure { witness: backend.triple_name(t), lhs: p.trace(f), rhs });
                }
            }
            Err(_) => report.failures.push(CancellationFailure {
                witness: format!("singular gram {}", backend.triple_name(t)),
                lhs: f.zero(),
                rhs,
            }),
        }
    }
    report
}
