use crate::gcore::{Element, Scalar};

use super::{CatError, CategoryBackend};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BFailure {
    pub g1: Element,
    pub g2: Element,
    pub simple: usize,
    pub lhs: Scalar,
    pub rhs: Scalar,
}

#[derive(Clone, Debug, Default)]
pub struct BReport {
    pub checked: usize,
    pub failures: Vec<BFailure>,
}

impl BReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// All pairs `(g1, g2)` with `g1, g2, g1g2` outside the bad set.
pub fn degree_pairs(backend: &CategoryBackend) -> Vec<(Element, Element)> {
    let g = backend.group();
    let mut out = Vec::new();
    for a in g.elements() {
        for b in g.elements() {
            if !backend.in_badset(a) && !backend.in_badset(b) && !backend.in_badset(g.mul(a, b)) {
                out.push((a, b));
            }
        }
    }
    out
}

/// Check `b(V) = Σ b(V1) b(V2) N(V*, V1, V2)` for every `V` of degree `g1g2`,
/// summing over `V1 ∈ I_{g1}`, `V2 ∈ I_{g2}`.
pub fn validate_b(backend: &CategoryBackend, samples: &[(Element, Element)]) -> Result<BReport, CatError> {
    let g = backend.group();
    let f = backend.field();
    let mut report = BReport::default();
    for &(g1, g2) in samples {
        for x in [g1, g2, g.mul(g1, g2)] {
            if backend.in_badset(x) {
                return Err(CatError::BadDegreeSample(g.name(x).to_string()));
            }
        }
        for &v in backend.simples_of_degree(g.mul(g1, g2)) {
            let mut rhs = f.zero();
            for &v1 in backend.simples_of_degree(g1) {
                for &v2 in backend.simples_of_degree(g2) {
                    let n = backend.n([backend.star(v), v1, v2]);
                    if n > 0 {
                        rhs += &(&(backend.b(v1) * backend.b(v2)) * &f.int(n as i64));
                    }
                }
            }
            report.checked += 1;
            if &rhs != backend.b(v) {
                report.failures.push(BFailure { g1, g2, simple: v, lhs: backend.b(v).clone(), rhs });
            }
        }
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChromaticFailure {
    pub v: usize,
    pub m: usize,
    pub lhs: Scalar,
    pub rhs: Scalar,
}

#[derive(Clone, Debug, Default)]
pub struct ChromaticReport {
    pub checked: usize,
    pub failures: Vec<ChromaticFailure>,
}

impl ChromaticReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Semisimple chromatic identity in degree `g`, contracted to multiplicities:
/// for every simple `V` and every `m` of degree `g⁻¹deg(V)`,
/// `Σ_{i ∈ I_g} d(i) N(V*, i, m) = d(V) qdim(m)`.
pub fn check_chromatic(backend: &CategoryBackend, g: Element) -> Result<ChromaticReport, CatError> {
    let grp = backend.group();
    if backend.in_badset(g) {
        return Err(CatError::DegreeInBadSet(grp.name(g).to_string()));
    }
    let f = backend.field();
    let mut report = ChromaticReport::default();
    for v in 0..backend.n_simples() {
        let hm = grp.mul(grp.inv(g), backend.degree(v));
        for &m in backend.simples_of_degree(hm) {
            let mut lhs = f.zero();
            for &i in backend.simples_of_degree(g) {
                let n = backend.n([backend.star(v), i, m]);
                if n > 0 {
                    lhs += &(backend.d(i) * &f.int(n as i64));
                }
            }
            let rhs = backend.d(v) * backend.qdim(m);
            report.checked += 1;
            if lhs != rhs {
                report.failures.push(ChromaticFailure { v, m, lhs, rhs });
            }
        }
    }
    Ok(report)
}
