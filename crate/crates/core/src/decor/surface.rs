use std::fmt;

use thiserror::Error;

/// An oriented edge: edge index `e` traversed forward (`2e`) or backward (`2e+1`).
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct OEdge(pub u32);

impl OEdge {
    pub fn new(edge: usize, forward: bool) -> OEdge {
        OEdge((edge as u32) << 1 | u32::from(!forward))
    }
    pub fn fwd(edge: usize) -> OEdge {
        OEdge::new(edge, true)
    }
    pub fn bwd(edge: usize) -> OEdge {
        OEdge::new(edge, false)
    }
    pub fn edge(self) -> usize {
        (self.0 >> 1) as usize
    }
    pub fn is_forward(self) -> bool {
        self.0 & 1 == 0
    }
    pub fn rev(self) -> OEdge {
        OEdge(self.0 ^ 1)
    }
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Debug for OEdge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", if self.is_forward() { "+" } else { "-" }, self.edge())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SurfaceError {
    #[error("vertex {0} out of range")]
    BadVertex(usize),
    #[error("edge {0} out of range")]
    BadEdge(usize),
    #[error("triangle {0} does not close up")]
    OpenTriangle(usize),
    #[error("oriented edge {edge:?} appears in {count} triangle corners (expected 1)")]
    EdgeCorner { edge: OEdge, count: usize },
    #[error("component {component} has Euler characteristic {chi}, not that of a closed orientable surface")]
    EulerCharacteristic { component: usize, chi: i64 },
    #[error("component {0} has no triangles and is neither a monogon nor a bigon")]
    Degenerate(usize),
    #[error("{0} orientation flags for {1} components")]
    OrientationFlags(usize, usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct EdgeData {
    tail: usize,
    head: usize,
}

/// A closed oriented surface with an ideal triangulation whose vertices are the base points.
///
/// Components with no triangles are the two sphere models excluded from ideal
/// triangulations: a single vertex (monogon) or two vertices joined by one edge (bigon).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealSurfaceTriangulation {
    vertex_names: Vec<String>,
    edges: Vec<EdgeData>,
    triangles: Vec<[OEdge; 3]>,
    orientation: Vec<bool>,
    component_of: Vec<usize>,
    n_components: usize,
    /// (triangle, position) of each oriented edge, indexed by `OEdge::index`.
    corner: Vec<Option<(usize, usize)>>,
    /// incident oriented edges leaving each vertex, sorted by edge index
    out_edges: Vec<Vec<OEdge>>,
}

fn find(parent: &mut [usize], mut x: usize) -> usize {
    while parent[x] != x {
        parent[x] = parent[parent[x]];
        x = parent[x];
    }
    x
}

impl IdealSurfaceTriangulation {
    /// Build and validate. `edges` lists (tail, head) pairs; triangles are
    /// cyclically ordered oriented edges. `orientation` defaults to `true`
    /// (triangles listed counterclockwise) on every component.
    pub fn new(
        vertex_names: Vec<String>,
        edges: Vec<(usize, usize)>,
        triangles: Vec<[OEdge; 3]>,
        orientation: Option<Vec<bool>>,
    ) -> Result<Self, SurfaceError> {
        let nv = vertex_names.len();
        for &(t, h) in &edges {
            for v in [t, h] {
                if v >= nv {
                    return Err(SurfaceError::BadVertex(v));
                }
            }
        }
        let edges: Vec<EdgeData> = edges.into_iter().map(|(tail, head)| EdgeData { tail, head }).collect();
        let tail = |o: OEdge| if o.is_forward() { edges[o.edge()].tail } else { edges[o.edge()].head };
        let head = |o: OEdge| tail(o.rev());
        let mut corner = vec![None; 2 * edges.len()];
        let mut counts = vec![0usize; 2 * edges.len()];
        for (ti, tri) in triangles.iter().enumerate() {
            for (k, &o) in tri.iter().enumerate() {
                if o.edge() >= edges.len() {
                    return Err(SurfaceError::BadEdge(o.edge()));
                }
                if head(o) != tail(tri[(k + 1) % 3]) {
                    return Err(SurfaceError::OpenTriangle(ti));
                }
                counts[o.index()] += 1;
                corner[o.index()] = Some((ti, k));
            }
        }
        // components through edges
        let mut parent: Vec<usize> = (0..nv).collect();
        for e in &edges {
            let (a, b) = (find(&mut parent, e.tail), find(&mut parent, e.head));
            parent[a] = b;
        }
        let mut comp_id = vec![usize::MAX; nv];
        let mut component_of = vec![0; nv];
        let mut n_components = 0;
        for v in 0..nv {
            let r = find(&mut parent, v);
            if comp_id[r] == usize::MAX {
                comp_id[r] = n_components;
                n_components += 1;
            }
            component_of[v] = comp_id[r];
        }
        let mut cv = vec![0i64; n_components];
        let mut ce = vec![0i64; n_components];
        let mut cf = vec![0i64; n_components];
        for v in 0..nv {
            cv[component_of[v]] += 1;
        }
        for e in &edges {
            ce[component_of[e.tail]] += 1;
        }
        for tri in &triangles {
            cf[component_of[tail(tri[0])]] += 1;
        }
        for c in 0..n_components {
            if cf[c] == 0 {
                if !((cv[c] == 1 && ce[c] == 0) || (cv[c] == 2 && ce[c] == 1)) {
                    return Err(SurfaceError::Degenerate(c));
                }
                continue;
            }
            let chi = cv[c] - ce[c] + cf[c];
            if chi > 2 || chi % 2 != 0 {
                return Err(SurfaceError::EulerCharacteristic { component: c, chi });
            }
        }
        for (i, &n) in counts.iter().enumerate() {
            let o = OEdge(i as u32);
            if cf[component_of[tail(o)]] > 0 && n != 1 {
                return Err(SurfaceError::EdgeCorner { edge: o, count: n });
            }
        }
        let orientation = match orientation {
            Some(o) if o.len() != n_components => {
                return Err(SurfaceError::OrientationFlags(o.len(), n_components))
            }
            Some(o) => o,
            None => vec![true; n_components],
        };
        let mut out_edges = vec![Vec::new(); nv];
        for (i, e) in edges.iter().enumerate() {
            out_edges[e.tail].push(OEdge::fwd(i));
            out_edges[e.head].push(OEdge::bwd(i));
        }
        Ok(IdealSurfaceTriangulation {
            vertex_names,
            edges,
            triangles,
            orientation,
            component_of,
            n_components,
            corner,
            out_edges,
        })
    }

    pub fn n_vertices(&self) -> usize {
        self.vertex_names.len()
    }
    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }
    pub fn n_triangles(&self) -> usize {
        self.triangles.len()
    }
    pub fn n_components(&self) -> usize {
        self.n_components
    }
    pub fn vertex_name(&self, v: usize) -> &str {
        &self.vertex_names[v]
    }
    pub fn vertex_names(&self) -> &[String] {
        &self.vertex_names
    }
    pub fn vertex_by_name(&self, name: &str) -> Option<usize> {
        self.vertex_names.iter().position(|n| n == name)
    }
    pub fn triangles(&self) -> &[[OEdge; 3]] {
        &self.triangles
    }
    pub fn triangle(&self, t: usize) -> [OEdge; 3] {
        self.triangles[t]
    }
    pub fn component_of(&self, v: usize) -> usize {
        self.component_of[v]
    }
    pub fn orientation(&self, component: usize) -> bool {
        self.orientation[component]
    }
    pub fn orientations(&self) -> &[bool] {
        &self.orientation
    }
    pub fn tail(&self, o: OEdge) -> usize {
        let e = &self.edges[o.edge()];
        if o.is_forward() {
            e.tail
        } else {
            e.head
        }
    }
    pub fn head(&self, o: OEdge) -> usize {
        self.tail(o.rev())
    }
    /// Endpoints (tail, head) of each edge in its forward orientation.
    pub fn edge_ends(&self) -> Vec<(usize, usize)> {
        self.edges.iter().map(|e| (e.tail, e.head)).collect()
    }
    pub fn oriented_edges(&self) -> impl Iterator<Item = OEdge> {
        (0..2 * self.edges.len() as u32).map(OEdge)
    }
    /// Triangle and position containing `o`, if its component has triangles.
    pub fn corner(&self, o: OEdge) -> Option<(usize, usize)> {
        self.corner[o.index()]
    }
    /// Oriented edges leaving `v`, sorted by edge index (loops appear twice).
    pub fn out_edges(&self, v: usize) -> &[OEdge] {
        &self.out_edges[v]
    }
    pub fn component_vertices(&self, c: usize) -> Vec<usize> {
        (0..self.n_vertices()).filter(|&v| self.component_of[v] == c).collect()
    }
    pub fn euler_characteristic(&self, c: usize) -> i64 {
        let v = self.component_vertices(c).len() as i64;
        let e = self.edges.iter().filter(|e| self.component_of[e.tail] == c).count() as i64;
        let f = self.triangles.iter().filter(|t| self.component_of[self.tail(t[0])] == c).count() as i64;
        if f == 0 {
            2
        } else {
            v - e + f
        }
    }

    /// Check that `path` is a composable sequence; returns its endpoints.
    pub fn path_ends(&self, path: &[OEdge]) -> Result<Option<(usize, usize)>, usize> {
        for (i, o) in path.iter().enumerate() {
            if o.edge() >= self.n_edges() {
                return Err(i);
            }
        }
        for i in 1..path.len() {
            if self.head(path[i - 1]) != self.tail(path[i]) {
                return Err(i);
            }
        }
        Ok(path.first().map(|&f| (self.tail(f), self.head(*path.last().unwrap()))))
    }

    /// Breadth-first spanning forest from `roots`, scanning edges in index order.
    /// Returns, for every reached vertex, the oriented edge from its parent.
    pub fn bfs_forest(&self, roots: &[usize]) -> Vec<Option<Option<OEdge>>> {
        let mut parent: Vec<Option<Option<OEdge>>> = vec![None; self.n_vertices()];
        let mut queue = std::collections::VecDeque::new();
        let mut sorted = roots.to_vec();
        sorted.sort_unstable();
        for r in sorted {
            if parent[r].is_none() {
                parent[r] = Some(None);
                queue.push_back(r);
            }
        }
        while let Some(u) = queue.pop_front() {
            for &o in &self.out_edges[u] {
                let w = self.head(o);
                if parent[w].is_none() {
                    parent[w] = Some(Some(o));
                    queue.push_back(w);
                }
            }
        }
        parent
    }

    /// Path from a forest root to `v` using the forest returned by [`Self::bfs_forest`].
    pub fn forest_path(&self, forest: &[Option<Option<OEdge>>], v: usize) -> Vec<OEdge> {
        let mut path = Vec::new();
        let mut cur = v;
        while let Some(Some(o)) = forest[cur] {
            path.push(o);
            cur = self.tail(o);
        }
        path.reverse();
        path
    }

    /// Subdivide triangle `t` by a new vertex joined to its three corners.
    pub fn stellar_subdivide(&self, t: usize) -> IdealSurfaceTriangulation {
        let mut names = self.vertex_names.clone();
        let v = names.len();
        names.push(format!("v{v}"));
        let mut edges = self.edge_ends();
        let tri = self.triangles[t];
        let spoke: Vec<usize> = (0..3)
            .map(|i| {
                edges.push((self.tail(tri[i]), v));
                edges.len() - 1
            })
            .collect();
        let mut triangles = self.triangles.clone();
        let new: Vec<[OEdge; 3]> = (0..3)
            .map(|i| [tri[i], OEdge::fwd(spoke[(i + 1) % 3]), OEdge::bwd(spoke[i])])
            .collect();
        triangles[t] = new[0];
        triangles.push(new[1]);
        triangles.push(new[2]);
        IdealSurfaceTriangulation::new(names, edges, triangles, Some(self.orientation.clone()))
            .expect("stellar subdivision of a valid surface")
    }
}

/// Polygon with side word `letters` (label, forward?), all sides paired, fan-triangulated from corner 0.
pub fn polygon_surface(letters: &[(usize, bool)]) -> Result<IdealSurfaceTriangulation, SurfaceError> {
    let k = letters.len();
    let n_labels = letters.iter().map(|l| l.0 + 1).max().unwrap_or(0);
    // corners of the polygon, identified through the side pairing
    let mut parent: Vec<usize> = (0..k).collect();
    let mut first_side: Vec<Option<usize>> = vec![None; n_labels];
    let side_ends = |i: usize| {
        let (a, b) = (i, (i + 1) % k);
        if letters[i].1 {
            (a, b)
        } else {
            (b, a)
        }
    };
    for i in 0..k {
        let l = letters[i].0;
        match first_side[l] {
            None => first_side[l] = Some(i),
            Some(j) => {
                let (t1, h1) = side_ends(j);
                let (t2, h2) = side_ends(i);
                for (a, b) in [(t1, t2), (h1, h2)] {
                    let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
                    parent[ra] = rb;
                }
            }
        }
    }
    let mut vid = vec![usize::MAX; k];
    let mut nv = 0;
    let mut vertex_of = vec![0; k];
    for c in 0..k {
        let r = find(&mut parent, c);
        if vid[r] == usize::MAX {
            vid[r] = nv;
            nv += 1;
        }
        vertex_of[c] = vid[r];
    }
    let mut edges = vec![(0, 0); n_labels];
    for i in 0..k {
        let (t, h) = side_ends(i);
        edges[letters[i].0] = (vertex_of[t], vertex_of[h]);
    }
    let side = |i: usize| OEdge::new(letters[i].0, letters[i].1);
    let mut diag = vec![0; k];
    for (j, d) in diag.iter_mut().enumerate().take(k - 1).skip(2) {
        edges.push((vertex_of[0], vertex_of[j]));
        *d = edges.len() - 1;
    }
    let mut triangles = Vec::new();
    for i in 1..=k - 2 {
        let a = if i == 1 { side(0) } else { OEdge::fwd(diag[i]) };
        let c = if i + 1 == k - 1 { side(k - 1) } else { OEdge::bwd(diag[i + 1]) };
        triangles.push([a, side(i), c]);
    }
    let names = (0..nv).map(|v| format!("p{v}")).collect();
    IdealSurfaceTriangulation::new(names, edges, triangles, None)
}

/// One-vertex torus: edges a, b and the diagonal c with c = a·b.
pub fn torus_one_vertex() -> IdealSurfaceTriangulation {
    polygon_surface(&[(0, true), (1, true), (0, false), (1, false)]).expect("torus")
}

pub fn torus_two_vertex() -> IdealSurfaceTriangulation {
    torus_one_vertex().stellar_subdivide(0)
}

pub fn torus_three_vertex() -> IdealSurfaceTriangulation {
    torus_two_vertex().stellar_subdivide(1)
}

pub fn genus2_one_vertex() -> IdealSurfaceTriangulation {
    let w = [(0, true), (1, true), (0, false), (1, false), (2, true), (3, true), (2, false), (3, false)];
    polygon_surface(&w).expect("genus two")
}

pub fn genus2_two_vertex() -> IdealSurfaceTriangulation {
    genus2_one_vertex().stellar_subdivide(0)
}

/// Sphere as the boundary of a tetrahedron (4 vertices, 6 edges, 4 triangles).
pub fn sphere_tetrahedron() -> IdealSurfaceTriangulation {
    // vertices 0..4, edge ij for i<j in lexicographic order
    let pairs = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
    let e = |a: usize, b: usize| {
        let i = pairs.iter().position(|&p| p == (a.min(b), a.max(b))).unwrap();
        OEdge::new(i, a < b)
    };
    let tris = [(0, 2, 1), (0, 1, 3), (0, 3, 2), (1, 2, 3)];
    let triangles = tris.iter().map(|&(a, b, c)| [e(a, b), e(b, c), e(c, a)]).collect();
    let names = (0..4).map(|v| format!("p{v}")).collect();
    IdealSurfaceTriangulation::new(names, pairs.to_vec(), triangles, None).expect("tetrahedron")
}

/// Sphere with one base point.
pub fn monogon() -> IdealSurfaceTriangulation {
    IdealSurfaceTriangulation::new(vec!["p".into()], vec![], vec![], None).expect("monogon")
}

/// Sphere with two base points joined by one edge.
pub fn bigon() -> IdealSurfaceTriangulation {
    IdealSurfaceTriangulation::new(vec!["p".into(), "q".into()], vec![(0, 1)], vec![], None).expect("bigon")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builders_have_expected_counts() {
        let cases = [
            (torus_one_vertex(), 1, 3, 2, 0),
            (torus_two_vertex(), 2, 6, 4, 0),
            (torus_three_vertex(), 3, 9, 6, 0),
            (genus2_one_vertex(), 1, 9, 6, -2),
            (genus2_two_vertex(), 2, 12, 8, -2),
            (sphere_tetrahedron(), 4, 6, 4, 2),
        ];
        for (s, v, e, f, chi) in cases {
            assert_eq!((s.n_vertices(), s.n_edges(), s.n_triangles()), (v, e, f));
            assert_eq!(s.euler_characteristic(0), chi);
        }
        assert_eq!(monogon().n_components(), 1);
        assert_eq!(bigon().n_edges(), 1);
    }

    #[test]
    fn open_triangle_rejected() {
        let r = IdealSurfaceTriangulation::new(
            vec!["a".into(), "b".into()],
            vec![(0, 1), (0, 1), (0, 1)],
            vec![[OEdge::fwd(0), OEdge::fwd(1), OEdge::fwd(2)]],
            None,
        );
        assert_eq!(r.unwrap_err(), SurfaceError::OpenTriangle(0));
    }

    #[test]
    fn missing_corner_rejected() {
        // same Euler characteristic, but one triangle listed twice and another missing
        let s = sphere_tetrahedron();
        let mut tris = s.triangles().to_vec();
        tris[3] = tris[0];
        let r = IdealSurfaceTriangulation::new(s.vertex_names().to_vec(), s.edge_ends(), tris, None);
        assert!(matches!(r, Err(SurfaceError::EdgeCorner { .. })), "{r:?}");
    }

    #[test]
    fn paths() {
        let s = torus_two_vertex();
        let forest = s.bfs_forest(&[0]);
        let p = s.forest_path(&forest, 1);
        assert_eq!(s.path_ends(&p).unwrap(), Some((0, 1)));
    }
}
