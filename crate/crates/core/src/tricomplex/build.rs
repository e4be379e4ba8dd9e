use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::gcore::{Element, FiniteGroup};
use crate::graphval::Sign;

use super::{
    make_h_triangulation, perm_compose, validate_complex, ComplexData, DeltaComplex3, FaceGluing, HTriangulation,
    TriError,
};

/// Glue the faces of tetrahedra given by vertex labels: every triple of labels
/// spanned by a face must occur on exactly two faces.
pub fn complex_from_labels<L: Ord + Clone + std::fmt::Debug>(
    tets: &[[L; 4]],
    signs: Option<Vec<Sign>>,
) -> Result<DeltaComplex3, TriError> {
    let mut by_key: BTreeMap<[L; 3], Vec<(usize, usize)>> = BTreeMap::new();
    for (t, labels) in tets.iter().enumerate() {
        let distinct: BTreeSet<&L> = labels.iter().collect();
        if distinct.len() != 4 {
            return Err(TriError::Schema(format!("tetrahedron {t} repeats a vertex label")));
        }
        for f in 0..4 {
            let mut key: Vec<L> = (0..4).filter(|&x| x != f).map(|x| labels[x].clone()).collect();
            key.sort();
            by_key.entry([key[0].clone(), key[1].clone(), key[2].clone()]).or_default().push((t, f));
        }
    }
    let mut gluings = vec![[None; 4]; tets.len()];
    for (key, sides) in by_key {
        let [(t, f), (u, g)] = sides[..] else {
            return Err(TriError::NotClosed(format!("face {key:?} occurs {} times", sides.len())));
        };
        let mut perm = [0; 4];
        for x in 0..4 {
            perm[x] = if x == f { g } else { tets[u].iter().position(|l| *l == tets[t][x]).unwrap() };
        }
        gluings[t][f] = Some(FaceGluing { tet: u, face: g, perm });
        gluings[u][g] = Some(FaceGluing { tet: t, face: f, perm: super::perm_inverse(&perm) });
    }
    validate_complex(&ComplexData { gluings, signs })
}

/// The boundary of the 4-simplex: five tetrahedra, one per omitted vertex.
pub fn boundary_4simplex() -> DeltaComplex3 {
    let tets: Vec<[usize; 4]> = (0..5)
        .map(|k| {
            let v: Vec<usize> = (0..5).filter(|&x| x != k).collect();
            [v[0], v[1], v[2], v[3]]
        })
        .collect();
    complex_from_labels(&tets, None).expect("∂Δ⁴ is a closed manifold")
}

/// First one-tetrahedron, one-vertex closed orientable complex found by
/// searching all face pairings (a lens space; every edge is a loop).
pub fn one_vertex_lens() -> DeltaComplex3 {
    let pairings = [[(0, 1), (2, 3)], [(0, 2), (1, 3)], [(0, 3), (1, 2)]];
    let perms = all_face_maps();
    for pairing in pairings {
        for &(f0, g0) in &[pairing[0]] {
            for p in perms.iter().filter(|p| p[f0] == g0) {
                let (f1, g1) = pairing[1];
                for q in perms.iter().filter(|q| q[f1] == g1) {
                    let mut gluings = vec![[None; 4]];
                    gluings[0][f0] = Some(FaceGluing { tet: 0, face: g0, perm: *p });
                    gluings[0][g0] = Some(FaceGluing { tet: 0, face: f0, perm: super::perm_inverse(p) });
                    gluings[0][f1] = Some(FaceGluing { tet: 0, face: g1, perm: *q });
                    gluings[0][g1] = Some(FaceGluing { tet: 0, face: f1, perm: super::perm_inverse(q) });
                    if let Ok(c) = validate_complex(&ComplexData { gluings, signs: None }) {
                        if c.n_vertices() == 1 {
                            return c;
                        }
                    }
                }
            }
        }
    }
    unreachable!("one-vertex one-tetrahedron lens spaces exist")
}

fn all_face_maps() -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    let s: BTreeSet<usize> = p.iter().copied().collect();
                    if s.len() == 4 {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// Barycentric subdivision: tetrahedron `(t, σ)` has vertices
/// (vertex σ0, edge σ0σ1, face σ0σ1σ2, centre of t) in that local order.
pub fn barycentric_subdivision(c: &DeltaComplex3) -> DeltaComplex3 {
    let flags = all_face_maps();
    let idx = |t: usize, s: &[usize; 4]| 24 * t + flags.iter().position(|p| p == s).unwrap();
    let mut gluings = vec![[None; 4]; 24 * c.n_tets()];
    let mut signs = vec![Sign::Plus; 24 * c.n_tets()];
    for t in 0..c.n_tets() {
        for s in &flags {
            let me = idx(t, s);
            signs[me] = if super::perm_is_even(s) { c.sign(t) } else { c.sign(t).flip() };
            for k in 0..3 {
                let mut s2 = *s;
                s2.swap(k, k + 1);
                gluings[me][k] = Some(FaceGluing { tet: idx(t, &s2), face: k, perm: [0, 1, 2, 3] });
            }
            let g = c.gluing(t, s[3]);
            let s2 = perm_compose(&g.perm, s);
            gluings[me][3] = Some(FaceGluing { tet: idx(g.tet, &s2), face: 3, perm: [0, 1, 2, 3] });
        }
    }
    validate_complex(&ComplexData { gluings, signs: Some(signs) }).expect("subdivision of a valid complex")
}

/// A closed walk through every vertex exactly once along distinct edges, by backtracking.
pub fn hamiltonian_cycle(c: &DeltaComplex3) -> Result<Vec<usize>, TriError> {
    let n = c.n_vertices();
    if n < 2 || !c.quasi_regular() {
        return Err(TriError::NotFound);
    }
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for e in 0..c.n_edges() {
        let (a, b) = c.edge_ends(e);
        adj[a].push((b, e));
        adj[b].push((a, e));
    }
    fn extend(adj: &[Vec<(usize, usize)>], path: &mut Vec<usize>, used: &mut Vec<usize>, seen: &mut [bool]) -> bool {
        let v = *path.last().unwrap();
        if path.len() == seen.len() {
            return adj[v].iter().any(|&(w, e)| {
                if w == path[0] && !used.contains(&e) {
                    used.push(e);
                    true
                } else {
                    false
                }
            });
        }
        for &(w, e) in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                path.push(w);
                used.push(e);
                if extend(adj, path, used, seen) {
                    return true;
                }
                used.pop();
                path.pop();
                seen[w] = false;
            }
        }
        false
    }
    let mut seen = vec![false; n];
    seen[0] = true;
    let mut path = vec![0];
    let mut used = Vec::new();
    if extend(&adj, &mut path, &mut used, &mut seen) {
        Ok(used)
    } else {
        Err(TriError::NotFound)
    }
}

/// Γ from `hamiltonian_cycle` and Φ ≡ 1.
pub fn trivial_h_triangulation(
    c: DeltaComplex3,
    group: Arc<FiniteGroup>,
    badset: BTreeSet<Element>,
) -> Result<HTriangulation, TriError> {
    let gamma = hamiltonian_cycle(&c)?.into_iter().collect();
    let phi = vec![group.id(); c.n_edges()];
    make_h_triangulation(c, gamma, phi, group, badset)
}
