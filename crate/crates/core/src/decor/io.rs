//! Surface and equivalence-word files.
//!
//! A surface is either a builder name (`"torus_one_vertex"`, `"torus_two_vertex"`,
//! `"torus_three_vertex"`, `"genus2_one_vertex"`, `"genus2_two_vertex"`,
//! `"sphere_tetrahedron"`, `"monogon"`, `"bigon"`) or
//!
//! ```json
//! { "vertices": ["p", "q"],
//!   "edges": [[0, 1], [1, 0], ...],
//!   "triangles": [[[0, true], [1, true], [2, false]], ...],
//!   "orientation": [true] }
//! ```
//! where an edge is `[tail, head]` and a triangle lists three oriented edges
//! `[edge, forward]` head to tail.
//!
//! A word file:
//!
//! ```json
//! { "group": "S3",
//!   "surface": "torus_two_vertex",
//!   "labels": ["(12)", "()", ...],
//!   "base": [0, 1],
//!   "word": [ {"gauge": {"0": "(12)", "1": "()"}}, {"restrict": [0]} ] }
//! ```
//! `labels` are the forward edge values of ρ (trivial when absent). A `restrict`
//! step may name its source with `"from"`; otherwise it starts at the current base.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde_json::Value;

use crate::catdata::load::{parse_element, parse_group};
use crate::gcore::{FiniteGroup, GaugeFunction};

use super::surface::{
    bigon, genus2_one_vertex, genus2_two_vertex, monogon, sphere_tetrahedron, torus_one_vertex, torus_three_vertex,
    torus_two_vertex,
};
use super::{Decoration, DecorError, EquivalenceWord, Generator, GroupoidRep, IdealSurfaceTriangulation, OEdge};

fn schema(msg: impl Into<String>) -> DecorError {
    DecorError::Schema(msg.into())
}

fn from_value<T: serde::de::DeserializeOwned>(v: &Value, what: &str) -> Result<T, DecorError> {
    serde_json::from_value(v.clone()).map_err(|e| schema(format!("{what}: {e}")))
}

pub fn builtin_surface(name: &str) -> Option<IdealSurfaceTriangulation> {
    Some(match name {
        "torus_one_vertex" => torus_one_vertex(),
        "torus_two_vertex" => torus_two_vertex(),
        "torus_three_vertex" => torus_three_vertex(),
        "genus2_one_vertex" => genus2_one_vertex(),
        "genus2_two_vertex" => genus2_two_vertex(),
        "sphere_tetrahedron" => sphere_tetrahedron(),
        "monogon" => monogon(),
        "bigon" => bigon(),
        _ => return None,
    })
}

pub fn parse_surface(v: &Value) -> Result<IdealSurfaceTriangulation, DecorError> {
    if let Value::String(name) = v {
        return builtin_surface(name).ok_or_else(|| schema(format!("unknown surface {name:?}")));
    }
    let o = v.as_object().ok_or_else(|| schema("surface must be a name or an object"))?;
    let field = |k: &str| o.get(k).ok_or_else(|| schema(format!("surface needs `{k}`")));
    let vertices: Vec<String> = from_value(field("vertices")?, "vertices")?;
    let edges: Vec<(usize, usize)> = from_value(field("edges")?, "edges")?;
    let tris: Vec<[(usize, bool); 3]> = from_value(field("triangles")?, "triangles")?;
    let orientation: Option<Vec<bool>> = o.get("orientation").map(|x| from_value(x, "orientation")).transpose()?;
    let triangles = tris.iter().map(|t| t.map(|(e, f)| OEdge::new(e, f))).collect();
    Ok(IdealSurfaceTriangulation::new(vertices, edges, triangles, orientation)?)
}

fn vertex_set(v: &Value, s: &IdealSurfaceTriangulation, what: &str) -> Result<BTreeSet<usize>, DecorError> {
    let items = v.as_array().ok_or_else(|| schema(format!("{what} must be an array")))?;
    items.iter().map(|x| vertex_ref(x, s)).collect()
}

fn vertex_ref(v: &Value, s: &IdealSurfaceTriangulation) -> Result<usize, DecorError> {
    let idx = match v {
        Value::Number(n) => n.as_u64().map(|x| x as usize),
        Value::String(name) => s.vertex_by_name(name).or_else(|| name.parse().ok()),
        _ => None,
    }
    .ok_or_else(|| schema(format!("bad vertex {v}")))?;
    if idx >= s.n_vertices() {
        return Err(DecorError::BadVertex(idx));
    }
    Ok(idx)
}

/// Parse a word file. Steps that do not compose give `NotComposable`.
pub fn parse_word(doc: &str) -> Result<EquivalenceWord, DecorError> {
    let v: Value = serde_json::from_str(doc).map_err(|e| schema(e.to_string()))?;
    let group: Arc<FiniteGroup> =
        Arc::new(parse_group(v.get("group").ok_or_else(|| schema("word file needs `group`"))?).map_err(|e| schema(e.to_string()))?);
    let surface = Arc::new(parse_surface(v.get("surface").ok_or_else(|| schema("word file needs `surface`"))?)?);
    let elem = |x: &Value| parse_element(&group, x).map_err(|e| schema(e.to_string()));
    let rho = match v.get("labels") {
        None | Some(Value::Null) => GroupoidRep::trivial(surface.clone(), group.clone()),
        Some(l) => {
            let labels = l.as_array().ok_or_else(|| schema("`labels` must be an array"))?;
            let labels = labels.iter().map(elem).collect::<Result<Vec<_>, _>>()?;
            GroupoidRep::from_forward(surface.clone(), group.clone(), labels)?
        }
    };
    let base = match v.get("base") {
        None | Some(Value::Null) => (0..surface.n_vertices()).collect(),
        Some(b) => vertex_set(b, &surface, "base")?,
    };
    let source = Decoration::new(&rho, base)?;
    let steps = v.get("word").and_then(Value::as_array).ok_or_else(|| schema("`word` must be an array"))?;
    let mut gens = Vec::new();
    let mut current = source.clone();
    for (i, step) in steps.iter().enumerate() {
        let gen = if let Some(g) = step.get("gauge") {
            let map = g.as_object().ok_or_else(|| schema(format!("step {i}: gauge must be an object")))?;
            let mut values = BTreeMap::new();
            for (k, x) in map {
                values.insert(vertex_ref(&Value::String(k.clone()), &surface)?, elem(x)?);
            }
            Generator::Gauge(GaugeFunction::new(values))
        } else if let Some(to) = step.get("restrict") {
            let to = vertex_set(to, &surface, "restrict")?;
            let from = match step.get("from") {
                Some(f) => vertex_set(f, &surface, "from")?,
                None => current.base().clone(),
            };
            Generator::restrict(from, to, current.rep())?
        } else {
            return Err(schema(format!("step {i}: expected `gauge` or `restrict`")));
        };
        gens.push(gen);
        current = EquivalenceWord::new(source.clone(), gens.clone())?.target()?;
    }
    EquivalenceWord::new(source, gens)
}
