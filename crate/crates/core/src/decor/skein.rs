use std::fmt;
use std::sync::Arc;

use crate::gcore::{Element, FiniteGroup};

use super::rep::GroupoidRep;
use super::surface::{IdealSurfaceTriangulation, OEdge};
use super::DecorError;

/// One edge of the dual graph. It runs from the triangle containing `crosses.rev()`
/// to the triangle containing `crosses`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DualEdge<C> {
    pub crosses: OEdge,
    pub color: C,
}

/// A colored graph dual to the triangulation, one dual edge per primal edge.
#[derive(Clone, Debug)]
pub struct DualGraph<C> {
    surface: Arc<IdealSurfaceTriangulation>,
    edges: Vec<DualEdge<C>>,
}

/// Dual graph with group-element colors.
pub type GSkein = DualGraph<Element>;

impl<C: Clone> DualGraph<C> {
    /// `edges[i]` must cross primal edge `i`.
    pub fn new(surface: Arc<IdealSurfaceTriangulation>, edges: Vec<DualEdge<C>>) -> Result<Self, DecorError> {
        if edges.len() != surface.n_edges() {
            return Err(DecorError::LabelCount { expected: surface.n_edges(), got: edges.len() });
        }
        if let Some(i) = edges.iter().enumerate().position(|(i, d)| d.crosses.edge() != i) {
            return Err(DecorError::BadEdge(i));
        }
        Ok(DualGraph { surface, edges })
    }

    pub fn surface(&self) -> &Arc<IdealSurfaceTriangulation> {
        &self.surface
    }

    pub fn edges(&self) -> &[DualEdge<C>] {
        &self.edges
    }

    /// Triangles joined by dual edge `i` as (from, to); `None` on triangle-free components.
    pub fn endpoints(&self, i: usize) -> Option<(usize, usize)> {
        let d = &self.edges[i];
        let from = self.surface.corner(d.crosses.rev())?.0;
        let to = self.surface.corner(d.crosses)?.0;
        Some((from, to))
    }

    /// Sign of the crossing when a path traverses `step`: +1 when the dual edge
    /// goes from the right of `step` to its left.
    pub fn crossing_sign(&self, step: OEdge) -> i8 {
        let d = &self.edges[step.edge()];
        let ccw = self.surface.orientation(self.surface.component_of(self.surface.tail(step)));
        if (d.crosses == step) == ccw {
            1
        } else {
            -1
        }
    }

    /// The same graph with the dual edge `i` reversed and its color replaced.
    pub fn with_reversed(&self, i: usize, color: C) -> Self {
        let mut out = self.clone();
        out.edges[i] = DualEdge { crosses: self.edges[i].crosses.rev(), color };
        out
    }

    fn crossings(&self, path: &[OEdge]) -> Result<Vec<(C, i8)>, DecorError> {
        self.surface.path_ends(path).map_err(DecorError::NotAPath)?;
        Ok(path
            .iter()
            .map(|&o| (self.edges[o.edge()].color.clone(), self.crossing_sign(o)))
            .collect())
    }
}

/// The dual graph colored by ρ: each dual edge crosses its primal edge positively
/// and carries ρ of that primal edge.
pub fn dual_graph_rep(rho: &GroupoidRep) -> GSkein {
    let s = rho.surface();
    let edges = (0..s.n_edges())
        .map(|e| {
            let f = OEdge::fwd(e);
            let ccw = s.orientation(s.component_of(s.tail(f)));
            DualEdge { crosses: if ccw { f } else { f.rev() }, color: rho.value(f) }
        })
        .collect();
    DualGraph { surface: s.clone(), edges }
}

/// Ordered product of crossing colors along `path`, each raised to its crossing sign.
pub fn intersect_path(group: &FiniteGroup, path: &[OEdge], t: &GSkein) -> Result<Element, DecorError> {
    let cs = t.crossings(path)?;
    Ok(group.product(cs.into_iter().map(|(c, s)| if s > 0 { c } else { group.inv(c) })))
}

/// An object symbol with its degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ObjectSymbol {
    pub name: String,
    pub degree: Element,
}

/// Dual graph colored by object symbols.
pub type ColoredSkein = DualGraph<ObjectSymbol>;

/// Ordered tensor product of symbols with exponent ±1 (`-1` meaning the dual object).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TensorWord {
    pub factors: Vec<(ObjectSymbol, i8)>,
    pub degree: Element,
}

impl fmt::Display for TensorWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "1");
        }
        for (i, (s, e)) in self.factors.iter().enumerate() {
            if i > 0 {
                write!(f, " ⊗ ")?;
            }
            write!(f, "{}{}", s.name, if *e < 0 { "*" } else { "" })?;
        }
        Ok(())
    }
}

pub fn intersect_colored(group: &FiniteGroup, path: &[OEdge], t: &ColoredSkein) -> Result<TensorWord, DecorError> {
    let cs = t.crossings(path)?;
    let degree = group.product(cs.iter().map(|(c, s)| if *s > 0 { c.degree } else { group.inv(c.degree) }));
    Ok(TensorWord { factors: cs, degree })
}

/// Forget object symbols down to their degrees.
pub fn underlying_gskein(t: &ColoredSkein) -> GSkein {
    DualGraph {
        surface: t.surface.clone(),
        edges: t.edges.iter().map(|d| DualEdge { crosses: d.crosses, color: d.color.degree }).collect(),
    }
}
