use std::collections::BTreeSet;
use std::sync::Arc;

use crate::gcore::{Element, FiniteGroup, GaugeFunction};

use super::surface::{IdealSurfaceTriangulation, OEdge};
use super::DecorError;

/// A representation of the fundamental groupoid of a surface, based at its vertices.
///
/// Labels are stored on forward edges; the reverse orientation carries the inverse.
#[derive(Clone, Debug)]
pub struct GroupoidRep {
    surface: Arc<IdealSurfaceTriangulation>,
    group: Arc<FiniteGroup>,
    labels: Vec<Element>,
}

impl PartialEq for GroupoidRep {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.surface, &other.surface) || self.surface == other.surface)
            && self.labels == other.labels
    }
}
impl Eq for GroupoidRep {}

/// Validate a labeling given on every oriented edge (indexed by `OEdge::index`).
pub fn validate_rep(
    surface: Arc<IdealSurfaceTriangulation>,
    group: Arc<FiniteGroup>,
    labels: &[Element],
) -> Result<GroupoidRep, DecorError> {
    if labels.len() != 2 * surface.n_edges() {
        return Err(DecorError::LabelCount { expected: 2 * surface.n_edges(), got: labels.len() });
    }
    for e in 0..surface.n_edges() {
        let (f, b) = (labels[OEdge::fwd(e).index()], labels[OEdge::bwd(e).index()]);
        if group.inv(f) != b {
            return Err(DecorError::ReversalViolation(e));
        }
    }
    let forward = (0..surface.n_edges()).map(|e| labels[OEdge::fwd(e).index()]).collect();
    GroupoidRep::from_forward(surface, group, forward)
}

impl GroupoidRep {
    /// Build from labels on forward edges, checking the triangle relations.
    pub fn from_forward(
        surface: Arc<IdealSurfaceTriangulation>,
        group: Arc<FiniteGroup>,
        labels: Vec<Element>,
    ) -> Result<GroupoidRep, DecorError> {
        if labels.len() != surface.n_edges() {
            return Err(DecorError::LabelCount { expected: surface.n_edges(), got: labels.len() });
        }
        if let Some(&g) = labels.iter().find(|g| g.index() >= group.order()) {
            return Err(DecorError::BadElement(g.0));
        }
        let rep = GroupoidRep { surface, group, labels };
        for (t, tri) in rep.surface.triangles().iter().enumerate() {
            if rep.group.product(tri.iter().map(|&o| rep.value(o))) != rep.group.id() {
                return Err(DecorError::CocycleViolation(t));
            }
        }
        Ok(rep)
    }

    pub fn trivial(surface: Arc<IdealSurfaceTriangulation>, group: Arc<FiniteGroup>) -> GroupoidRep {
        let labels = vec![group.id(); surface.n_edges()];
        GroupoidRep { surface, group, labels }
    }

    pub fn surface(&self) -> &Arc<IdealSurfaceTriangulation> {
        &self.surface
    }
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }
    pub fn forward_labels(&self) -> &[Element] {
        &self.labels
    }

    pub fn value(&self, o: OEdge) -> Element {
        let g = self.labels[o.edge()];
        if o.is_forward() {
            g
        } else {
            self.group.inv(g)
        }
    }

    /// Product of labels along a composable path (identity for the empty path).
    pub fn path_value(&self, path: &[OEdge]) -> Result<Element, DecorError> {
        self.surface.path_ends(path).map_err(DecorError::NotAPath)?;
        Ok(self.group.product(path.iter().map(|&o| self.value(o))))
    }

    pub fn same_surface(&self, other: &GroupoidRep) -> bool {
        Arc::ptr_eq(&self.surface, &other.surface) || self.surface == other.surface
    }

    /// Holonomies of a generating set of loops of π1 at the smallest vertex of
    /// each component: one loop per edge outside the breadth-first tree.
    pub fn holonomies(&self) -> Vec<(usize, Vec<Element>)> {
        let s = &self.surface;
        let mut out = Vec::new();
        for c in 0..s.n_components() {
            let root = s.component_vertices(c)[0];
            let forest = s.bfs_forest(&[root]);
            let tree: BTreeSet<usize> =
                (0..s.n_vertices()).filter_map(|v| forest[v].flatten()).map(|o| o.edge()).collect();
            let mut hol = Vec::new();
            for e in 0..s.n_edges() {
                let o = OEdge::fwd(e);
                if s.component_of(s.tail(o)) != c || tree.contains(&e) {
                    continue;
                }
                let to_tail = self.path_value(&s.forest_path(&forest, s.tail(o))).unwrap();
                let to_head = self.path_value(&s.forest_path(&forest, s.head(o))).unwrap();
                hol.push(self.group.mul3(to_tail, self.value(o), self.group.inv(to_head)));
            }
            out.push((root, hol));
        }
        out
    }
}

/// `(φ.ρ)(e) = φ(tail e) ρ(e) φ(head e)^{-1}`; `phi` must be defined on every vertex.
pub fn gauge_act(phi: &GaugeFunction, rho: &GroupoidRep) -> Result<GroupoidRep, DecorError> {
    let s = &rho.surface;
    if phi.domain().count() != s.n_vertices() || phi.domain().enumerate().any(|(i, v)| i != v) {
        return Err(DecorError::DomainMismatch);
    }
    let g = &rho.group;
    let labels = (0..s.n_edges())
        .map(|e| {
            let o = OEdge::fwd(e);
            let (a, b) = (phi.get(s.tail(o)).unwrap(), phi.get(s.head(o)).unwrap());
            g.mul3(a, rho.labels[e], g.inv(b))
        })
        .collect();
    Ok(GroupoidRep { surface: rho.surface.clone(), group: rho.group.clone(), labels })
}

/// Canonical gauge relative to `keep`: the gauge ψ (identity on `keep`) making every
/// breadth-first tree edge toward a non-kept vertex trivial, and the forest itself.
pub fn gauge_fix(
    rho: &GroupoidRep,
    keep: &BTreeSet<usize>,
) -> Result<(GroupoidRep, GaugeFunction, Vec<Option<Option<OEdge>>>), DecorError> {
    let s = &rho.surface;
    let g = &rho.group;
    if let Some(&v) = keep.iter().find(|&&v| v >= s.n_vertices()) {
        return Err(DecorError::BadVertex(v));
    }
    let roots: Vec<usize> = keep.iter().copied().collect();
    let forest = s.bfs_forest(&roots);
    if let Some(v) = (0..s.n_vertices()).find(|&v| forest[v].is_none()) {
        return Err(DecorError::EmptyComponent(s.component_of(v)));
    }
    // ψ(v) = ψ(parent)·ρ(parent edge), filled in breadth-first order
    let mut order: Vec<usize> = (0..s.n_vertices()).collect();
    let depth = |v: usize| s.forest_path(&forest, v).len();
    order.sort_by_key(|&v| depth(v));
    let mut psi = vec![g.id(); s.n_vertices()];
    for v in order {
        if let Some(Some(o)) = forest[v] {
            psi[v] = g.mul(psi[s.tail(o)], rho.value(o));
        }
    }
    let psi = GaugeFunction::new(psi.into_iter().enumerate().collect());
    let fixed = gauge_act(&psi, rho)?;
    Ok((fixed, psi, forest))
}

/// Where an old oriented edge went under [`restrict_rep`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EdgeImage {
    Contracted,
    Edge(OEdge),
}

#[derive(Clone, Debug)]
pub struct Restriction {
    pub rep: GroupoidRep,
    /// Old vertex → new vertex (every old vertex maps to the kept root of its tree).
    pub vertex_map: Vec<usize>,
    /// Indexed by old `OEdge::index`.
    pub edge_map: Vec<EdgeImage>,
}

impl Restriction {
    /// Image of an old path: contracted edges are dropped.
    pub fn map_path(&self, path: &[OEdge]) -> Vec<OEdge> {
        path.iter()
            .filter_map(|o| match self.edge_map[o.index()] {
                EdgeImage::Contracted => None,
                EdgeImage::Edge(n) => Some(n),
            })
            .collect()
    }
}

/// Forget the base points outside `keep` by contracting a spanning forest rooted at `keep`.
pub fn restrict_rep(rho: &GroupoidRep, keep: &BTreeSet<usize>) -> Result<Restriction, DecorError> {
    let s = &rho.surface;
    let (fixed, _, forest) = gauge_fix(rho, keep)?;
    let n_o = 2 * s.n_edges();
    let trivial = n_o;
    let mut parent: Vec<usize> = (0..=n_o).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let rev = |x: usize| if x == trivial { trivial } else { x ^ 1 };
    // union a~b together with rev(a)~rev(b); the trivial class is self-reverse
    let union = |p: &mut Vec<usize>, a: usize, b: usize| {
        for (x, y) in [(a, b), (rev(a), rev(b))] {
            let (rx, ry) = (find(p, x), find(p, y));
            if rx != ry {
                // keep the trivial class as representative
                if ry == trivial {
                    p[rx] = ry;
                } else {
                    p[ry] = rx;
                }
            }
        }
    };
    for v in 0..s.n_vertices() {
        if let Some(Some(o)) = forest[v] {
            union(&mut parent, o.index(), trivial);
        }
    }
    loop {
        let mut changed = false;
        for tri in s.triangles() {
            let ids: Vec<usize> = tri.iter().map(|o| o.index()).collect();
            for k in 0..3 {
                if find(&mut parent, ids[k]) == find(&mut parent, trivial) {
                    // the other two edges become mutually inverse
                    let (y, z) = (ids[(k + 1) % 3], ids[(k + 2) % 3]);
                    if find(&mut parent, z) != find(&mut parent, rev(y)) {
                        union(&mut parent, z, rev(y));
                        changed = true;
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    let triv_root = find(&mut parent, trivial);
    // new vertices: kept vertices in sorted order
    let kept: Vec<usize> = keep.iter().copied().collect();
    let new_index = |v: usize| kept.binary_search(&v).unwrap();
    let vertex_map: Vec<usize> = (0..s.n_vertices())
        .map(|v| {
            let path = s.forest_path(&forest, v);
            new_index(path.first().map_or(v, |&o| s.tail(o)))
        })
        .collect();
    // new edges: one per pair of mutually reverse classes
    let mut class_edge: std::collections::HashMap<usize, OEdge> = std::collections::HashMap::new();
    let mut new_edges: Vec<(usize, usize)> = Vec::new();
    let mut new_labels = Vec::new();
    let mut edge_map = vec![EdgeImage::Contracted; n_o];
    for i in 0..n_o {
        let r = find(&mut parent, i);
        if r == triv_root {
            continue;
        }
        let o = OEdge(i as u32);
        let img = match class_edge.get(&r) {
            Some(&img) => img,
            None => {
                let rr = find(&mut parent, rev(i));
                debug_assert_ne!(r, rr, "edge class identified with its reverse");
                let idx = new_edges.len();
                new_edges.push((vertex_map[s.tail(o)], vertex_map[s.head(o)]));
                new_labels.push(fixed.value(o));
                class_edge.insert(r, OEdge::fwd(idx));
                class_edge.insert(rr, OEdge::bwd(idx));
                OEdge::fwd(idx)
            }
        };
        debug_assert_eq!(fixed.value(o), {
            let base = new_labels[img.edge()];
            if img.is_forward() {
                base
            } else {
                rho.group.inv(base)
            }
        });
        edge_map[i] = EdgeImage::Edge(img);
    }
    let new_tris: Vec<[OEdge; 3]> = s
        .triangles()
        .iter()
        .filter(|tri| tri.iter().all(|o| find(&mut parent, o.index()) != triv_root))
        .map(|tri| {
            let m = |o: OEdge| match edge_map[o.index()] {
                EdgeImage::Edge(n) => n,
                EdgeImage::Contracted => unreachable!(),
            };
            [m(tri[0]), m(tri[1]), m(tri[2])]
        })
        .collect();
    let names = kept.iter().map(|&v| s.vertex_name(v).to_string()).collect();
    let orientation = {
        // components of the new surface are ordered by their smallest kept vertex,
        // which matches the order of old components restricted to kept vertices
        let mut seen = Vec::new();
        for &v in &kept {
            let c = s.component_of(v);
            if !seen.contains(&c) {
                seen.push(c);
            }
        }
        seen.iter().map(|&c| s.orientation(c)).collect::<Vec<_>>()
    };
    let surface = IdealSurfaceTriangulation::new(names, new_edges, new_tris, Some(orientation))
        .map_err(DecorError::Surface)?;
    let rep = GroupoidRep::from_forward(Arc::new(surface), rho.group.clone(), new_labels)?;
    Ok(Restriction { rep, vertex_map, edge_map })
}

/// Whether two representations on the same surface agree after forgetting all base
/// points: per component, the π1 holonomies at the root are simultaneously conjugate.
pub fn reps_equal_up_to_equivalence(a: &GroupoidRep, b: &GroupoidRep) -> Result<bool, DecorError> {
    if !a.same_surface(b) {
        return Err(DecorError::SurfaceMismatch);
    }
    let g = &a.group;
    for ((_, ha), (_, hb)) in a.holonomies().iter().zip(b.holonomies().iter()) {
        let found = g
            .elements()
            .any(|x| ha.iter().zip(hb).all(|(&p, &q)| g.conj(x, p) == q));
        if !found {
            return Ok(false);
        }
    }
    Ok(true)
}
