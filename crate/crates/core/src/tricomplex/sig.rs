use super::{perm_compose, perm_inverse, DeltaComplex3, HTriangulation, EDGE_PAIRS};

fn all_perms() -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    if a != b && a != c && a != d && b != c && b != d && c != d {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

/// Relabeling-invariant code: the least breadth-first encoding over every start
/// tetrahedron and start vertex order. `extra(t, x, y)` is appended per local edge.
fn encode(c: &DeltaComplex3, extra: &dyn Fn(usize, usize, usize) -> usize) -> Vec<usize> {
    let nt = c.n_tets();
    let mut best: Option<Vec<usize>> = None;
    for start in 0..nt {
        for p in all_perms() {
            // relabel[t] = new local k ↦ old local relabel[t][k]
            let mut order = vec![start];
            let mut index = vec![usize::MAX; nt];
            let mut relabel = vec![[0; 4]; nt];
            index[start] = 0;
            relabel[start] = p;
            let mut code = Vec::with_capacity(nt * 22);
            let mut i = 0;
            let mut pruned = false;
            while i < order.len() {
                let t = order[i];
                let r = relabel[t];
                for k in 0..4 {
                    let g = c.gluing(t, r[k]);
                    // partner vertex order induced through the gluing
                    let induced = perm_compose(&g.perm, &r);
                    if index[g.tet] == usize::MAX {
                        index[g.tet] = order.len();
                        relabel[g.tet] = induced;
                        order.push(g.tet);
                    }
                    let rel = perm_compose(&perm_inverse(&relabel[g.tet]), &induced);
                    code.push(index[g.tet]);
                    code.push(rel[0] * 64 + rel[1] * 16 + rel[2] * 4 + rel[3]);
                }
                for &(x, y) in &EDGE_PAIRS {
                    code.push(extra(t, r[x], r[y]));
                }
                if let Some(b) = &best {
                    if code.as_slice() > &b[..code.len().min(b.len())] {
                        pruned = true;
                        break;
                    }
                }
                i += 1;
            }
            if !pruned && order.len() == nt && best.as_ref().map_or(true, |b| code < *b) {
                best = Some(code);
            }
        }
    }
    best.unwrap_or_default()
}

/// Isomorphism signature of the bare complex.
pub fn complex_signature(c: &DeltaComplex3) -> Vec<usize> {
    encode(c, &|_, _, _| 0)
}

/// Isomorphism signature including Γ membership and Φ of every local edge.
pub fn signature(h: &HTriangulation) -> Vec<usize> {
    let c = h.complex();
    let n = h.group().order();
    encode(c, &|t, x, y| {
        let (e, _) = c.local_edge(t, x, y);
        h.phi_local(t, x, y).index() + n * h.in_gamma(e) as usize
    })
}
