use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::gcore::Element;

use super::complex::{is_perm, propagate_signs};
use super::{
    make_h_triangulation, perm_compose, perm_inverse, validate_complex, ComplexData, FaceGluing, HTriangulation,
    TriError, EDGE_PAIRS,
};

/// A guarded move, as recorded in fuzz logs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Move {
    P23 { face: usize },
    P32 { edge: usize },
    P14 { tet: usize, reroute: Option<usize> },
    P41 { vertex: usize },
    Gauge { vertex: usize, g: Element },
}

impl Move {
    pub fn apply(&self, h: &HTriangulation) -> Result<HTriangulation, TriError> {
        match *self {
            Move::P23 { face } => pachner_23(h, face),
            Move::P32 { edge } => pachner_32(h, edge),
            Move::P14 { tet, reroute } => pachner_14(h, tet, reroute),
            Move::P41 { vertex } => pachner_41(h, vertex),
            Move::Gauge { vertex, g } => super::gauge_move_phi(h, vertex, g),
        }
    }
}

impl std::fmt::Display for Move {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Move::P23 { face } => write!(f, "2-3 at face {face}"),
            Move::P32 { edge } => write!(f, "3-2 at edge {edge}"),
            Move::P14 { tet, reroute: Some(e) } => write!(f, "1-4 at tet {tet} rerouting edge {e}"),
            Move::P14 { tet, reroute: None } => write!(f, "1-4 at tet {tet}"),
            Move::P41 { vertex } => write!(f, "4-1 at vertex {vertex}"),
            Move::Gauge { vertex, g } => write!(f, "gauge at vertex {vertex} by element {}", g.0),
        }
    }
}

fn guard(msg: impl Into<String>) -> TriError {
    TriError::GuardFailed(msg.into())
}

/// Replace the tetrahedra `removed` (a ball, with `internal` listing the faces glued
/// inside it) by `new_tets`, given as 4-tuples of ball points. Points past the old
/// ones are new vertices; `new_refs[i]` is an old point whose Φ-potential the
/// `i`-th new vertex should copy when admissible.
struct Ball<'a> {
    h: &'a HTriangulation,
    removed: Vec<usize>,
    internal: Vec<(usize, usize)>,
}

struct BallPoints {
    point: HashMap<(usize, usize), usize>,
    n: usize,
}

impl Ball<'_> {
    fn points(&self) -> Result<BallPoints, TriError> {
        let c = self.h.complex();
        let slot: HashMap<usize, usize> = self.removed.iter().enumerate().map(|(i, &t)| (t, i)).collect();
        let mut parent: Vec<usize> = (0..4 * self.removed.len()).collect();
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        for &(t, f) in &self.internal {
            let g = c.gluing(t, f);
            let (Some(&i), Some(&j)) = (slot.get(&t), slot.get(&g.tet)) else {
                return Err(guard("internal face leaves the ball"));
            };
            for x in (0..4).filter(|&x| x != f) {
                let a = find(&mut parent, 4 * i + x);
                let b = find(&mut parent, 4 * j + g.perm[x]);
                parent[b] = a;
            }
        }
        let mut ids = HashMap::new();
        let mut point = HashMap::new();
        for (i, &t) in self.removed.iter().enumerate() {
            let mut seen = BTreeSet::new();
            for x in 0..4 {
                let r = find(&mut parent, 4 * i + x);
                let n = ids.len();
                let id = *ids.entry(r).or_insert(n);
                if !seen.insert(id) {
                    return Err(guard(format!("tetrahedron {t} meets itself inside the ball")));
                }
                point.insert((t, x), id);
            }
        }
        Ok(BallPoints { n: ids.len(), point })
    }

    fn replace(
        &self,
        pts: &BallPoints,
        new_tets: &[[usize; 4]],
        new_refs: &[usize],
        gamma_remove: &[(usize, usize)],
        gamma_add: &[(usize, usize)],
    ) -> Result<HTriangulation, TriError> {
        let h = self.h;
        let c = h.complex();
        let grp = h.group();
        let removed: BTreeSet<usize> = self.removed.iter().copied().collect();
        let internal: BTreeSet<(usize, usize)> = self.internal.iter().copied().collect();

        // potentials: p(y) = p(x) Φ(x → y) across the ball
        let total = pts.n + new_refs.len();
        let mut pot: Vec<Option<Element>> = vec![None; total];
        let mut ball_edges = Vec::new();
        for &t in &self.removed {
            for x in 0..4 {
                for y in 0..4 {
                    if x != y {
                        ball_edges.push((pts.point[&(t, x)], pts.point[&(t, y)], h.phi_local(t, x, y)));
                    }
                }
            }
        }
        for start in 0..pts.n {
            if pot[start].is_some() {
                continue;
            }
            pot[start] = Some(grp.id());
            let mut changed = true;
            while changed {
                changed = false;
                for &(a, b, g) in &ball_edges {
                    if let Some(pa) = pot[a] {
                        let want = grp.mul(pa, g);
                        match pot[b] {
                            None => {
                                pot[b] = Some(want);
                                changed = true;
                            }
                            Some(pb) if pb != want => return Err(guard("Φ is not flat on the ball")),
                            Some(_) => {}
                        }
                    }
                }
            }
        }
        for (i, &r) in new_refs.iter().enumerate() {
            let v = pts.n + i;
            let neighbours: BTreeSet<usize> =
                new_tets.iter().filter(|t| t.contains(&v)).flat_map(|t| t.iter().copied()).filter(|&p| p != v).collect();
            let admissible = |pv: Element| {
                neighbours.iter().all(|&p| {
                    let pp = pot[p].expect("old point potential");
                    !h.badset().contains(&grp.mul(grp.inv(pp), pv))
                })
            };
            let first = pot[r].expect("reference point");
            let choice = std::iter::once(first).chain(grp.elements()).find(|&g| admissible(g));
            pot[v] = Some(choice.ok_or_else(|| guard("no admissible label for the new vertex"))?);
        }
        let pot: Vec<Element> = pot.into_iter().map(Option::unwrap).collect();

        // boundary faces of the ball keyed by their points
        let mut boundary: BTreeMap<[usize; 3], (usize, usize)> = BTreeMap::new();
        for &t in &self.removed {
            for f in 0..4 {
                if internal.contains(&(t, f)) {
                    continue;
                }
                let mut key = [0; 3];
                let mut k = 0;
                for x in (0..4).filter(|&x| x != f) {
                    key[k] = pts.point[&(t, x)];
                    k += 1;
                }
                key.sort();
                if boundary.insert(key, (t, f)).is_some() {
                    return Err(guard("ball boundary is not embedded"));
                }
            }
        }

        let kept: Vec<usize> = (0..c.n_tets()).filter(|t| !removed.contains(t)).collect();
        let new_index: HashMap<usize, usize> = kept.iter().enumerate().map(|(i, &t)| (t, i)).collect();
        let base = kept.len();
        let nt = base + new_tets.len();
        let mut gluings: Vec<[Option<FaceGluing>; 4]> = vec![[None; 4]; nt];
        for (i, &t) in kept.iter().enumerate() {
            for f in 0..4 {
                let g = c.gluing(t, f);
                if let Some(&j) = new_index.get(&g.tet) {
                    gluings[i][f] = Some(FaceGluing { tet: j, face: g.face, perm: g.perm });
                }
            }
        }

        let face_key = |tet: &[usize; 4], k: usize| {
            let mut key = [0; 3];
            let mut m = 0;
            for x in (0..4).filter(|&x| x != k) {
                key[m] = tet[x];
                m += 1;
            }
            key.sort();
            key
        };
        let mut new_faces: BTreeMap<[usize; 3], Vec<(usize, usize)>> = BTreeMap::new();
        for (i, tet) in new_tets.iter().enumerate() {
            for k in 0..4 {
                new_faces.entry(face_key(tet, k)).or_default().push((i, k));
            }
        }
        // old boundary face → (new tet, face, new local → old local)
        let mut image: HashMap<(usize, usize), (usize, usize, [usize; 4])> = HashMap::new();
        for (key, sides) in &new_faces {
            match (sides.as_slice(), boundary.get(key)) {
                ([(i, k), (j, l)], None) => {
                    let (ti, tj) = (&new_tets[*i], &new_tets[*j]);
                    let mut perm = [0; 4];
                    for x in 0..4 {
                        perm[x] = if x == *k { *l } else { tj.iter().position(|&p| p == ti[x]).unwrap() };
                    }
                    gluings[base + i][*k] = Some(FaceGluing { tet: base + j, face: *l, perm });
                    gluings[base + j][*l] = Some(FaceGluing { tet: base + i, face: *k, perm: perm_inverse(&perm) });
                }
                ([(i, k)], Some(&(t, f))) => {
                    let mut sigma = [0; 4];
                    for x in 0..4 {
                        sigma[x] = if x == *k { f } else { (0..4).find(|&y| pts.point[&(t, y)] == new_tets[*i][x]).unwrap() };
                    }
                    image.insert((t, f), (*i, *k, sigma));
                }
                _ => return Err(guard("new tetrahedra do not fill the ball")),
            }
        }
        if image.len() != boundary.len() {
            return Err(guard("ball boundary not covered"));
        }
        for (&(t, f), &(i, k, sigma)) in &image {
            let g = c.gluing(t, f);
            let through = perm_compose(&g.perm, &sigma);
            let glue = if let Some(&j) = new_index.get(&g.tet) {
                gluings[j][g.face] = Some(FaceGluing { tet: base + i, face: k, perm: perm_inverse(&through) });
                FaceGluing { tet: j, face: g.face, perm: through }
            } else {
                let &(j, l, sigma2) = image.get(&(g.tet, g.face)).ok_or_else(|| guard("dangling boundary face"))?;
                FaceGluing { tet: base + j, face: l, perm: perm_compose(&perm_inverse(&sigma2), &through) }
            };
            debug_assert!(is_perm(&glue.perm));
            gluings[base + i][k] = Some(glue);
        }
        if gluings.iter().flatten().any(Option::is_none) {
            return Err(guard("unglued face after the move"));
        }

        let full: Vec<[FaceGluing; 4]> = gluings.iter().map(|r| r.map(Option::unwrap)).collect();
        let mut seeds = vec![None; nt];
        for (i, &t) in kept.iter().enumerate() {
            seeds[i] = Some(c.sign(t));
        }
        let signs = propagate_signs(&full, seeds).map_err(|e| guard(e.to_string()))?;
        let nc = validate_complex(&ComplexData { gluings, signs: Some(signs) }).map_err(|e| guard(e.to_string()))?;

        // Φ on the new complex, read off kept tetrahedra or ball potentials
        let local_phi = |t: usize, x: usize, y: usize| -> Element {
            if t < base {
                h.phi_local(kept[t], x, y)
            } else {
                let tet = &new_tets[t - base];
                grp.mul(grp.inv(pot[tet[x]]), pot[tet[y]])
            }
        };
        let mut phi: Vec<Option<Element>> = vec![None; nc.n_edges()];
        for t in 0..nt {
            for &(x, y) in &EDGE_PAIRS {
                let (e, fwd) = nc.local_edge(t, x, y);
                let g = if fwd { local_phi(t, x, y) } else { local_phi(t, y, x) };
                match phi[e] {
                    None => phi[e] = Some(g),
                    Some(g2) if g2 != g => return Err(guard("Φ disagrees across a glued edge")),
                    Some(_) => {}
                }
            }
        }
        let phi: Vec<Element> = phi.into_iter().map(Option::unwrap).collect();

        // Γ: carry surviving edges, then apply the point-pair edits
        let by_points = |a: usize, b: usize| -> Option<usize> {
            new_tets.iter().enumerate().find_map(|(i, tet)| {
                let x = tet.iter().position(|&p| p == a)?;
                let y = tet.iter().position(|&p| p == b)?;
                Some(nc.local_edge(base + i, x, y).0)
            })
        };
        let mut gamma = BTreeSet::new();
        let mut removed_pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
        for &(a, b) in gamma_remove {
            removed_pairs.insert((a.min(b), a.max(b)));
        }
        for &e in h.gamma() {
            let mut target = None;
            let mut pair = None;
            for (t, x, y) in c.edge_corners(e) {
                if let Some(&i) = new_index.get(&t) {
                    target = Some(nc.local_edge(i, x, y).0);
                    break;
                }
                let (a, b) = (pts.point[&(t, x)], pts.point[&(t, y)]);
                pair = Some((a.min(b), a.max(b)));
            }
            if target.is_none() {
                if let Some((a, b)) = pair {
                    if removed_pairs.contains(&(a, b)) {
                        continue;
                    }
                    target = by_points(a, b);
                }
            }
            match target {
                Some(ne) => {
                    gamma.insert(ne);
                }
                None => return Err(guard(format!("Γ edge {e} would be removed"))),
            }
        }
        for &(a, b) in gamma_remove {
            if let Some(ne) = by_points(a, b) {
                gamma.remove(&ne);
            }
        }
        for &(a, b) in gamma_add {
            let ne = by_points(a, b).ok_or_else(|| guard("Γ edge to add is missing"))?;
            if !gamma.insert(ne) {
                return Err(guard("Γ edge to add is already in Γ"));
            }
        }

        make_h_triangulation(nc, gamma, phi, h.group().clone(), h.badset().clone()).map_err(|e| match e {
            TriError::NotHamiltonian(v) => TriError::HamiltonicityLost(format!("vertex {v} meets no Γ edge")),
            other => guard(other.to_string()),
        })
    }
}

/// 2-3 move across a face shared by two distinct tetrahedra with distinct apexes.
pub fn pachner_23(h: &HTriangulation, face: usize) -> Result<HTriangulation, TriError> {
    let c = h.complex();
    if face >= c.n_faces() {
        return Err(guard(format!("face {face} out of range")));
    }
    let [(t1, f1), (t2, f2)] = c.face_sides(face);
    if t1 == t2 {
        return Err(guard("both sides of the face lie in one tetrahedron"));
    }
    if c.vertex(t1, f1) == c.vertex(t2, f2) {
        return Err(guard("the two apexes coincide"));
    }
    let ball = Ball { h, removed: vec![t1, t2], internal: vec![(t1, f1), (t2, f2)] };
    let pts = ball.points()?;
    let d = pts.point[&(t1, f1)];
    let e = pts.point[&(t2, f2)];
    let abc: Vec<usize> = (0..4).filter(|&x| x != f1).map(|x| pts.point[&(t1, x)]).collect();
    let new_tets = [[d, e, abc[0], abc[1]], [d, e, abc[1], abc[2]], [d, e, abc[2], abc[0]]];
    ball.replace(&pts, &new_tets, &[], &[], &[])
}

/// 3-2 move removing an edge of degree three that meets three distinct tetrahedra.
pub fn pachner_32(h: &HTriangulation, edge: usize) -> Result<HTriangulation, TriError> {
    let c = h.complex();
    if edge >= c.n_edges() {
        return Err(guard(format!("edge {edge} out of range")));
    }
    if h.in_gamma(edge) {
        return Err(guard("edge lies in Γ"));
    }
    let corners = c.edge_corners(edge);
    let tets: BTreeSet<usize> = corners.iter().map(|c| c.0).collect();
    if corners.len() != 3 || tets.len() != 3 {
        return Err(guard(format!("edge has degree {} in {} tetrahedra", corners.len(), tets.len())));
    }
    let mut internal = Vec::new();
    for &(t, x, y) in &corners {
        for f in (0..4).filter(|&f| f != x && f != y) {
            internal.push((t, f));
        }
    }
    let ball = Ball { h, removed: corners.iter().map(|c| c.0).collect(), internal };
    let pts = ball.points()?;
    if pts.n != 5 {
        return Err(guard("edge link is not a triangle"));
    }
    let (t, x, y) = corners[0];
    let (d, e) = (pts.point[&(t, x)], pts.point[&(t, y)]);
    let link: Vec<usize> = (0..pts.n).filter(|&p| p != d && p != e).collect();
    let new_tets = [[link[0], link[1], link[2], d], [link[0], link[1], link[2], e]];
    ball.replace(&pts, &new_tets, &[], &[], &[])
}

/// 1-4 move coning tetrahedron `tet` to a new interior vertex `v`. The Γ edge
/// `reroute = AB` of `tet` is replaced by the path `A v B`; Φ(Av) = Φ(AB) and
/// Φ(vB) = 1 unless that would leave the admissible degrees.
pub fn pachner_14(h: &HTriangulation, tet: usize, reroute: Option<usize>) -> Result<HTriangulation, TriError> {
    let c = h.complex();
    if tet >= c.n_tets() {
        return Err(guard(format!("tetrahedron {tet} out of range")));
    }
    let Some(e) = reroute else {
        return Err(TriError::HamiltonicityLost("the new vertex meets no Γ edge".into()));
    };
    if !h.in_gamma(e) {
        return Err(guard(format!("edge {e} is not in Γ")));
    }
    let (a, b) = c
        .edge_corners(e)
        .into_iter()
        .find(|&(t, _, _)| t == tet)
        .map(|(_, x, y)| (x, y))
        .ok_or_else(|| guard(format!("edge {e} is not an edge of tetrahedron {tet}")))?;
    let ball = Ball { h, removed: vec![tet], internal: vec![] };
    let pts = ball.points()?;
    let p = |x: usize| pts.point[&(tet, x)];
    let v = pts.n;
    let new_tets: Vec<[usize; 4]> = (0..4)
        .map(|k| {
            let mut t = [p(0), p(1), p(2), p(3)];
            t[k] = v;
            t
        })
        .collect();
    ball.replace(&pts, &new_tets, &[p(b)], &[(p(a), p(b))], &[(p(a), v), (v, p(b))])
}

/// 4-1 move removing a vertex of degree four whose two Γ edges `Av`, `vB` are
/// replaced by `AB`.
pub fn pachner_41(h: &HTriangulation, vertex: usize) -> Result<HTriangulation, TriError> {
    let c = h.complex();
    if vertex >= c.n_vertices() {
        return Err(guard(format!("vertex {vertex} out of range")));
    }
    let corners = c.vertex_corners(vertex);
    let tets: BTreeSet<usize> = corners.iter().map(|c| c.0).collect();
    if corners.len() != 4 || tets.len() != 4 {
        return Err(guard(format!("vertex meets {} tetrahedron corners", corners.len())));
    }
    let gamma_at: Vec<usize> = c.edges_at(vertex).into_iter().filter(|&e| h.in_gamma(e)).collect();
    if gamma_at.len() != 2 {
        return Err(guard(format!("vertex meets {} Γ edges", gamma_at.len())));
    }
    let mut internal = Vec::new();
    for &(t, x) in &corners {
        for f in (0..4).filter(|&f| f != x) {
            internal.push((t, f));
        }
    }
    let ball = Ball { h, removed: corners.iter().map(|c| c.0).collect(), internal };
    let pts = ball.points()?;
    if pts.n != 5 {
        return Err(guard("vertex link is not a tetrahedron boundary"));
    }
    let pv = pts.point[&corners[0]];
    let mut ends = Vec::new();
    for &e in &gamma_at {
        let (t, x, y) = c.edge_corners(e)[0];
        let (a, b) = (pts.point[&(t, x)], pts.point[&(t, y)]);
        ends.push(if a == pv { b } else { a });
    }
    let link: Vec<usize> = (0..pts.n).filter(|&p| p != pv).collect();
    let new_tets = [[link[0], link[1], link[2], link[3]]];
    ball.replace(&pts, &new_tets, &[], &[(ends[0], pv), (pv, ends[1])], &[(ends[0], ends[1])])
}

/// Which moves `random_move` may draw.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MoveMix {
    Pachner,
    Gauge,
    All,
}

/// Draws a random move that passes its guards, keeping at most `max_tets` tetrahedra.
/// Candidates are taken from the places where the move's combinatorial shape fits,
/// so 3-2 and 4-1 moves are not starved. Gives up after 64 attempts.
pub fn random_move<R: rand::Rng + ?Sized>(
    h: &HTriangulation,
    rng: &mut R,
    max_tets: usize,
    mix: MoveMix,
) -> Option<(Move, HTriangulation)> {
    let c = h.complex();
    for _ in 0..64 {
        let kind = match mix {
            MoveMix::Pachner => rng.gen_range(0..4),
            MoveMix::Gauge => 4,
            MoveMix::All => rng.gen_range(0..5),
        };
        let mv = match kind {
            0 if c.n_tets() < max_tets => Move::P23 { face: rng.gen_range(0..c.n_faces()) },
            1 => {
                let es: Vec<usize> = (0..c.n_edges()).filter(|&e| c.edge_degree(e) == 3 && !h.in_gamma(e)).collect();
                if es.is_empty() {
                    continue;
                }
                Move::P32 { edge: es[rng.gen_range(0..es.len())] }
            }
            2 if c.n_tets() + 3 <= max_tets => {
                let e = *h.gamma().iter().nth(rng.gen_range(0..h.gamma().len())).expect("non-empty Γ");
                let corners = c.edge_corners(e);
                Move::P14 { tet: corners[rng.gen_range(0..corners.len())].0, reroute: Some(e) }
            }
            3 => {
                let vs: Vec<usize> = (0..c.n_vertices()).filter(|&v| c.vertex_corners(v).len() == 4).collect();
                if vs.is_empty() {
                    continue;
                }
                Move::P41 { vertex: vs[rng.gen_range(0..vs.len())] }
            }
            4 => Move::Gauge {
                vertex: rng.gen_range(0..c.n_vertices()),
                g: Element(rng.gen_range(0..h.group().order() as u32)),
            },
            _ => continue,
        };
        if let Ok(next) = mv.apply(h) {
            return Some((mv, next));
        }
    }
    None
}
