use std::collections::BTreeSet;
use std::sync::Arc;

use crate::gcore::{Element, FiniteGroup};

use super::{DeltaComplex3, TriError};

/// A quasi-regular complex with a Hamiltonian edge set Γ and an admissible
/// G-labeling Φ of its edges (stored per quotient edge in its own orientation).
#[derive(Clone, Debug)]
pub struct HTriangulation {
    complex: DeltaComplex3,
    gamma: BTreeSet<usize>,
    phi: Vec<Element>,
    group: Arc<FiniteGroup>,
    badset: BTreeSet<Element>,
}

pub fn make_h_triangulation(
    complex: DeltaComplex3,
    gamma: BTreeSet<usize>,
    phi: Vec<Element>,
    group: Arc<FiniteGroup>,
    badset: BTreeSet<Element>,
) -> Result<HTriangulation, TriError> {
    let c = &complex;
    if let Some(e) = (0..c.n_edges()).find(|&e| c.edge_ends(e).0 == c.edge_ends(e).1) {
        return Err(TriError::NotQuasiRegular(e));
    }
    if let Some(&e) = gamma.iter().find(|&&e| e >= c.n_edges()) {
        return Err(TriError::Schema(format!("Γ edge {e} out of range")));
    }
    let mut covered = vec![false; c.n_vertices()];
    for &e in &gamma {
        let (a, b) = c.edge_ends(e);
        covered[a] = true;
        covered[b] = true;
    }
    if let Some(v) = covered.iter().position(|&x| !x) {
        return Err(TriError::NotHamiltonian(v));
    }
    if phi.len() != c.n_edges() {
        return Err(TriError::Schema(format!("{} edge labels for {} edges", phi.len(), c.n_edges())));
    }
    if phi.iter().any(|g| g.index() >= group.order()) {
        return Err(TriError::Schema("edge label out of range".into()));
    }
    let h = HTriangulation { complex, gamma, phi, group, badset };
    for face in 0..h.complex.n_faces() {
        let [(t, f), _] = h.complex.face_sides(face);
        let [p, q, r] = h.complex.face_cycle(t, f);
        let prod = h.group.mul3(h.phi_local(t, p, q), h.phi_local(t, q, r), h.phi_local(t, r, p));
        if prod != h.group.id() {
            return Err(TriError::CocycleViolation(face));
        }
    }
    if let Some(e) = (0..h.phi.len()).find(|&e| h.badset.contains(&h.phi[e])) {
        return Err(TriError::InadmissibleEdge(e));
    }
    Ok(h)
}

impl HTriangulation {
    pub fn complex(&self) -> &DeltaComplex3 {
        &self.complex
    }

    pub fn gamma(&self) -> &BTreeSet<usize> {
        &self.gamma
    }

    pub fn in_gamma(&self, e: usize) -> bool {
        self.gamma.contains(&e)
    }

    pub fn phi(&self) -> &[Element] {
        &self.phi
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn badset(&self) -> &BTreeSet<Element> {
        &self.badset
    }

    /// Φ on the local edge `x → y` of tetrahedron `t`.
    pub fn phi_local(&self, t: usize, x: usize, y: usize) -> Element {
        let (e, fwd) = self.complex.local_edge(t, x, y);
        if fwd {
            self.phi[e]
        } else {
            self.group.inv(self.phi[e])
        }
    }
}

/// Gauge transformation at vertex `v`: `Φ(xy) ↦ g(x) Φ(xy) g(y)⁻¹` with `g` supported at `v`.
/// Fails with `InadmissibleEdge` if some new label falls in the bad set.
pub fn gauge_move_phi(h: &HTriangulation, v: usize, g: Element) -> Result<HTriangulation, TriError> {
    let grp = &h.group;
    let c = &h.complex;
    if v >= c.n_vertices() {
        return Err(TriError::Schema(format!("vertex {v} out of range")));
    }
    let mut phi = h.phi.clone();
    for (e, x) in phi.iter_mut().enumerate() {
        let (a, b) = c.edge_ends(e);
        if a == v {
            *x = grp.mul(g, *x);
        }
        if b == v {
            *x = grp.mul(*x, grp.inv(g));
        }
    }
    if let Some(e) = (0..phi.len()).find(|&e| h.badset.contains(&phi[e])) {
        return Err(TriError::InadmissibleEdge(e));
    }
    Ok(HTriangulation { phi, ..h.clone() })
}
