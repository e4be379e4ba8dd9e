use std::collections::VecDeque;

use crate::graphval::Sign;

use super::TriError;

pub type Perm = [usize; 4];

pub fn perm_inverse(p: &Perm) -> Perm {
    let mut q = [0; 4];
    for (i, &x) in p.iter().enumerate() {
        q[x] = i;
    }
    q
}

/// `(p ∘ q)(i) = p(q(i))`.
pub fn perm_compose(p: &Perm, q: &Perm) -> Perm {
    q.map(|x| p[x])
}

pub fn perm_is_even(p: &Perm) -> bool {
    let mut inv = 0;
    for i in 0..4 {
        for j in i + 1..4 {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    inv % 2 == 0
}

pub fn is_perm(p: &Perm) -> bool {
    let mut seen = [false; 4];
    p.iter().all(|&x| x < 4 && !std::mem::replace(&mut seen[x], true))
}

/// Local vertex pairs in label order `(01, 02, 03, 12, 13, 23)`.
pub const EDGE_PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

pub fn pair_index(x: usize, y: usize) -> usize {
    let key = (x.min(y), x.max(y));
    EDGE_PAIRS.iter().position(|&p| p == key).expect("distinct local vertices")
}

/// Face `f` of a tetrahedron (the face opposite local vertex `f`) is glued to
/// face `face` of `tet`; `perm` sends local vertices of the first tetrahedron to
/// local vertices of the second, with `perm[f] = face`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FaceGluing {
    pub tet: usize,
    pub face: usize,
    pub perm: Perm,
}

/// Raw gluing data before validation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ComplexData {
    pub gluings: Vec<[Option<FaceGluing>; 4]>,
    /// When absent, orientations are propagated from tetrahedron 0 of each component.
    pub signs: Option<Vec<Sign>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaComplex3 {
    signs: Vec<Sign>,
    gluings: Vec<[FaceGluing; 4]>,
    vertex_of: Vec<[usize; 4]>,
    n_vertices: usize,
    /// per local pair: quotient edge and whether the local order agrees with its orientation
    edge_of: Vec<[(usize, bool); 6]>,
    edges: Vec<(usize, usize)>,
    edge_reps: Vec<(usize, usize, usize)>,
    edge_degree: Vec<usize>,
    face_of: Vec<[usize; 4]>,
    faces: Vec<[(usize, usize); 2]>,
}

struct UnionFind {
    parent: Vec<usize>,
    // parity relative to the parent
    parity: Vec<bool>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect(), parity: vec![false; n] }
    }

    fn find(&mut self, x: usize) -> (usize, bool) {
        let p = self.parent[x];
        if p == x {
            return (x, false);
        }
        let (r, pp) = self.find(p);
        self.parent[x] = r;
        self.parity[x] ^= pp;
        (r, self.parity[x])
    }

    /// Merge with `parity(x) ^ parity(y) = flip`; false on contradiction.
    fn union(&mut self, x: usize, y: usize, flip: bool) -> bool {
        let (rx, px) = self.find(x);
        let (ry, py) = self.find(y);
        if rx == ry {
            return px ^ py == flip;
        }
        self.parent[ry] = rx;
        self.parity[ry] = px ^ py ^ flip;
        true
    }
}

pub fn validate_complex(data: &ComplexData) -> Result<DeltaComplex3, TriError> {
    let nt = data.gluings.len();
    if nt == 0 {
        return Err(TriError::NotClosed("no tetrahedra".into()));
    }
    let mut gluings = Vec::with_capacity(nt);
    for (t, gs) in data.gluings.iter().enumerate() {
        let mut row = [FaceGluing { tet: 0, face: 0, perm: [0, 1, 2, 3] }; 4];
        for f in 0..4 {
            let g = gs[f].ok_or_else(|| TriError::NotClosed(format!("face {f} of tetrahedron {t} is unglued")))?;
            if g.tet >= nt || g.face >= 4 || !is_perm(&g.perm) || g.perm[f] != g.face {
                return Err(TriError::Schema(format!("malformed gluing at tetrahedron {t} face {f}")));
            }
            if (g.tet, g.face) == (t, f) {
                return Err(TriError::NotClosed(format!("face {f} of tetrahedron {t} is glued to itself")));
            }
            let back = data.gluings[g.tet][g.face];
            if back != Some(FaceGluing { tet: t, face: f, perm: perm_inverse(&g.perm) }) {
                return Err(TriError::NotClosed(format!("gluing at tetrahedron {t} face {f} is not an involution")));
            }
            row[f] = g;
        }
        gluings.push(row);
    }

    // vertices
    let mut uf = UnionFind::new(4 * nt);
    for (t, row) in gluings.iter().enumerate() {
        for (f, g) in row.iter().enumerate() {
            for x in (0..4).filter(|&x| x != f) {
                uf.union(4 * t + x, 4 * g.tet + g.perm[x], false);
            }
        }
    }
    let mut vid = vec![usize::MAX; 4 * nt];
    let mut n_vertices = 0;
    let mut vertex_of = vec![[0; 4]; nt];
    for t in 0..nt {
        for x in 0..4 {
            let r = uf.find(4 * t + x).0;
            if vid[r] == usize::MAX {
                vid[r] = n_vertices;
                n_vertices += 1;
            }
            vertex_of[t][x] = vid[r];
        }
    }

    // edges, with orientation parity
    let mut uf = UnionFind::new(6 * nt);
    for (t, row) in gluings.iter().enumerate() {
        for (f, g) in row.iter().enumerate() {
            for (k, &(x, y)) in EDGE_PAIRS.iter().enumerate() {
                if x == f || y == f {
                    continue;
                }
                let (px, py) = (g.perm[x], g.perm[y]);
                let k2 = pair_index(px, py);
                if !uf.union(6 * t + k, 6 * g.tet + k2, px > py) {
                    return Err(TriError::BadLink(format!("tetrahedron {t} edge {x}{y}")));
                }
            }
        }
    }
    let mut eid = vec![usize::MAX; 6 * nt];
    let mut edges = Vec::new();
    let mut edge_reps = Vec::new();
    let mut edge_degree = Vec::new();
    let mut edge_of = vec![[(0, true); 6]; nt];
    for t in 0..nt {
        for (k, &(x, y)) in EDGE_PAIRS.iter().enumerate() {
            let (r, p) = uf.find(6 * t + k);
            if eid[r] == usize::MAX {
                eid[r] = edges.len();
                // orient the quotient edge along the root's local order
                let (tail, head) = if p { (y, x) } else { (x, y) };
                edges.push((vertex_of[t][tail], vertex_of[t][head]));
                edge_reps.push((t, tail, head));
                edge_degree.push(0);
            }
            edge_of[t][k] = (eid[r], !p);
            edge_degree[eid[r]] += 1;
        }
    }

    let signs = orient(&gluings, data.signs.as_deref())?;

    let mut face_of = vec![[usize::MAX; 4]; nt];
    let mut faces = Vec::new();
    for t in 0..nt {
        for f in 0..4 {
            if face_of[t][f] == usize::MAX {
                let g = gluings[t][f];
                face_of[t][f] = faces.len();
                face_of[g.tet][g.face] = faces.len();
                faces.push([(t, f), (g.tet, g.face)]);
            }
        }
    }

    let c = DeltaComplex3 { signs, gluings, vertex_of, n_vertices, edge_of, edges, edge_reps, edge_degree, face_of, faces };
    for v in 0..c.n_vertices {
        if c.vertex_link_euler(v) != 2 {
            return Err(TriError::BadVertexLink(format!("vertex {v}")));
        }
    }
    Ok(c)
}

fn orient(gluings: &[[FaceGluing; 4]], given: Option<&[Sign]>) -> Result<Vec<Sign>, TriError> {
    let nt = gluings.len();
    let compatible = |s: Sign, s2: Sign, p: &Perm| (s == s2) != perm_is_even(p);
    if let Some(signs) = given {
        if signs.len() != nt {
            return Err(TriError::Schema(format!("{} orientations for {nt} tetrahedra", signs.len())));
        }
        for (t, row) in gluings.iter().enumerate() {
            for (f, g) in row.iter().enumerate() {
                if !compatible(signs[t], signs[g.tet], &g.perm) {
                    return Err(TriError::NotOrientable(format!("tetrahedron {t} face {f}")));
                }
            }
        }
        return Ok(signs.to_vec());
    }
    propagate_signs(gluings, vec![None; nt])
}

/// Fill in orientations by walking across gluings from the seeded tetrahedra
/// (components without a seed start at `Plus` on their first tetrahedron).
pub(crate) fn propagate_signs(gluings: &[[FaceGluing; 4]], seeds: Vec<Option<Sign>>) -> Result<Vec<Sign>, TriError> {
    let nt = gluings.len();
    let mut signs = seeds;
    let mut queue: VecDeque<usize> = (0..nt).filter(|&t| signs[t].is_some()).collect();
    let mut next_root = 0;
    loop {
        while let Some(t) = queue.pop_front() {
            let s = signs[t].unwrap();
            for (f, g) in gluings[t].iter().enumerate() {
                let want = if perm_is_even(&g.perm) { s.flip() } else { s };
                match signs[g.tet] {
                    None => {
                        signs[g.tet] = Some(want);
                        queue.push_back(g.tet);
                    }
                    Some(s2) if s2 != want => return Err(TriError::NotOrientable(format!("tetrahedron {t} face {f}"))),
                    Some(_) => {}
                }
            }
        }
        while next_root < nt && signs[next_root].is_some() {
            next_root += 1;
        }
        if next_root == nt {
            break;
        }
        signs[next_root] = Some(Sign::Plus);
        queue.push_back(next_root);
    }
    Ok(signs.into_iter().map(Option::unwrap).collect())
}

impl DeltaComplex3 {
    pub fn n_tets(&self) -> usize {
        self.gluings.len()
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }

    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn n_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.n_vertices as i64 - self.n_edges() as i64 + self.n_faces() as i64 - self.n_tets() as i64
    }

    pub fn sign(&self, t: usize) -> Sign {
        self.signs[t]
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }

    pub fn gluing(&self, t: usize, f: usize) -> FaceGluing {
        self.gluings[t][f]
    }

    pub fn data(&self) -> ComplexData {
        ComplexData { gluings: self.gluings.iter().map(|r| r.map(Some)).collect(), signs: Some(self.signs.clone()) }
    }

    pub fn vertex(&self, t: usize, x: usize) -> usize {
        self.vertex_of[t][x]
    }

    pub fn tet_vertices(&self, t: usize) -> [usize; 4] {
        self.vertex_of[t]
    }

    /// Quotient edge of the local edge `x → y` and whether that matches its orientation.
    pub fn local_edge(&self, t: usize, x: usize, y: usize) -> (usize, bool) {
        let (e, fwd) = self.edge_of[t][pair_index(x, y)];
        (e, if x < y { fwd } else { !fwd })
    }

    /// `(tail, head)` of a quotient edge.
    pub fn edge_ends(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    /// A local `(tet, tail, head)` carrying the edge in its own orientation.
    pub fn edge_rep(&self, e: usize) -> (usize, usize, usize) {
        self.edge_reps[e]
    }

    /// Number of tetrahedron edges identified to `e`.
    pub fn edge_degree(&self, e: usize) -> usize {
        self.edge_degree[e]
    }

    pub fn face_index(&self, t: usize, f: usize) -> usize {
        self.face_of[t][f]
    }

    pub fn face_sides(&self, face: usize) -> [(usize, usize); 2] {
        self.faces[face]
    }

    /// Oriented boundary cycle of face `f` of `t` as local vertices.
    pub fn face_cycle(&self, t: usize, f: usize) -> [usize; 3] {
        crate::graphval::faces_of(self.signs[t])[f]
    }

    /// Local occurrences `(tet, local vertex)` of a quotient vertex.
    pub fn vertex_corners(&self, v: usize) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for (t, vs) in self.vertex_of.iter().enumerate() {
            for (x, &w) in vs.iter().enumerate() {
                if w == v {
                    out.push((t, x));
                }
            }
        }
        out
    }

    /// Local occurrences `(tet, x, y)` of a quotient edge, oriented along it.
    pub fn edge_corners(&self, e: usize) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for (t, row) in self.edge_of.iter().enumerate() {
            for (k, &(e2, fwd)) in row.iter().enumerate() {
                if e2 == e {
                    let (x, y) = EDGE_PAIRS[k];
                    out.push(if fwd { (t, x, y) } else { (t, y, x) });
                }
            }
        }
        out
    }

    pub fn edges_at(&self, v: usize) -> Vec<usize> {
        (0..self.n_edges()).filter(|&e| self.edges[e].0 == v || self.edges[e].1 == v).collect()
    }

    fn vertex_link_euler(&self, v: usize) -> i64 {
        let corners = self.vertex_corners(v).len() as i64;
        let mut edge_ends = 0;
        for &(a, b) in &self.edges {
            edge_ends += (a == v) as i64 + (b == v) as i64;
        }
        let mut face_corners = 0;
        for &[(t, f), _] in &self.faces {
            face_corners += (0..4).filter(|&x| x != f && self.vertex_of[t][x] == v).count() as i64;
        }
        edge_ends - face_corners + corners
    }

    /// Every simplex has pairwise distinct vertices.
    pub fn quasi_regular(&self) -> bool {
        self.edges.iter().all(|&(a, b)| a != b)
    }

    pub fn n_components(&self) -> usize {
        let mut seen = vec![false; self.n_tets()];
        let mut count = 0;
        for root in 0..self.n_tets() {
            if seen[root] {
                continue;
            }
            count += 1;
            seen[root] = true;
            let mut stack = vec![root];
            while let Some(t) = stack.pop() {
                for g in &self.gluings[t] {
                    if !std::mem::replace(&mut seen[g.tet], true) {
                        stack.push(g.tet);
                    }
                }
            }
        }
        count
    }
}
