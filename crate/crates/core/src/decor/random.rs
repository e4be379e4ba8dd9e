use std::sync::Arc;

use rand::Rng;

use crate::gcore::{Element, FiniteGroup, GaugeFunction};

use super::rep::GroupoidRep;
use super::surface::{IdealSurfaceTriangulation, OEdge};
use super::DecorError;

pub fn random_element<R: Rng>(g: &FiniteGroup, rng: &mut R) -> Element {
    Element(rng.gen_range(0..g.order() as u32))
}

pub fn random_gauge<R: Rng>(g: &FiniteGroup, n_vertices: usize, rng: &mut R) -> GaugeFunction {
    GaugeFunction::new((0..n_vertices).map(|v| (v, random_element(g, rng))).collect())
}

/// Random representation: free edges are drawn in index order, triangle relations
/// force the rest, and a conflict restarts the draw.
pub fn random_rep<R: Rng>(
    surface: &Arc<IdealSurfaceTriangulation>,
    group: &Arc<FiniteGroup>,
    rng: &mut R,
) -> Result<GroupoidRep, DecorError> {
    const ATTEMPTS: usize = 10_000;
    let g = group.as_ref();
    let tris = surface.triangles();
    let value = |labels: &[Option<Element>], o: OEdge| {
        labels[o.edge()].map(|x| if o.is_forward() { x } else { g.inv(x) })
    };
    'attempt: for _ in 0..ATTEMPTS {
        let mut labels: Vec<Option<Element>> = vec![None; surface.n_edges()];
        loop {
            // propagate
            let mut changed = true;
            while changed {
                changed = false;
                for tri in tris {
                    let vals: Vec<Option<Element>> = tri.iter().map(|&o| value(&labels, o)).collect();
                    match vals.iter().filter(|v| v.is_none()).count() {
                        0 => {
                            if g.product(vals.iter().map(|v| v.unwrap())) != g.id() {
                                continue 'attempt;
                            }
                        }
                        1 => {
                            let k = vals.iter().position(|v| v.is_none()).unwrap();
                            let (a, b) = (vals[(k + 1) % 3].unwrap(), vals[(k + 2) % 3].unwrap());
                            // x · a · b = 1 with x at position k (cyclically)
                            let x = g.inv(g.mul(a, b));
                            let o = tri[k];
                            labels[o.edge()] = Some(if o.is_forward() { x } else { g.inv(x) });
                            changed = true;
                        }
                        _ => {}
                    }
                }
            }
            match labels.iter().position(|l| l.is_none()) {
                Some(e) => labels[e] = Some(random_element(g, rng)),
                None => break,
            }
        }
        let labels = labels.into_iter().map(|l| l.unwrap()).collect();
        return GroupoidRep::from_forward(surface.clone(), group.clone(), labels);
    }
    Err(DecorError::NoRepresentation(ATTEMPTS))
}
