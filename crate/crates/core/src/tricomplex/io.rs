//! Triangulation files.
//!
//! ```json
//! { "tets": [[0,1,2,3], ...],
//!   "gluings": [[t, f, t2, f2, [p0,p1,p2,p3]], ...],
//!   "orientations": [1, -1, ...],
//!   "gamma": [[0,1], [1,2], ...],
//!   "phi": [{"edge": [0,1], "g": "s"}, ...] }
//! ```
//! Without `gluings`, faces are glued by their label triples. Edge references are
//! either a pair of vertex labels `[a, b]` or a local edge `[tet, x, y]`; both are
//! oriented. Γ defaults to a Hamiltonian cycle, Φ to the identity.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde_json::{json, Value};

use crate::catdata::load::parse_element;
use crate::gcore::{Element, FiniteGroup};
use crate::graphval::Sign;

use super::{
    complex_from_labels, hamiltonian_cycle, make_h_triangulation, validate_complex, ComplexData, DeltaComplex3,
    FaceGluing, HTriangulation, TriError,
};

fn schema(msg: impl Into<String>) -> TriError {
    TriError::Schema(msg.into())
}

fn label_of(v: &Value) -> Result<String, TriError> {
    match v {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        _ => Err(schema(format!("bad vertex label {v}"))),
    }
}

fn index_of(v: &Value, what: &str) -> Result<usize, TriError> {
    v.as_u64().map(|x| x as usize).ok_or_else(|| schema(format!("{what} must be a non-negative integer")))
}

struct Parsed {
    complex: DeltaComplex3,
    labels: Vec<[String; 4]>,
}

impl Parsed {
    /// Quotient edge and orientation of an edge reference.
    fn edge(&self, r: &Value) -> Result<(usize, bool), TriError> {
        let items = r.as_array().ok_or_else(|| schema("edge reference must be an array"))?;
        let c = &self.complex;
        match items.len() {
            3 => {
                let t = index_of(&items[0], "tetrahedron")?;
                let x = index_of(&items[1], "local vertex")?;
                let y = index_of(&items[2], "local vertex")?;
                if t >= c.n_tets() || x >= 4 || y >= 4 || x == y {
                    return Err(schema(format!("bad local edge {r}")));
                }
                Ok(c.local_edge(t, x, y))
            }
            2 => {
                let (a, b) = (label_of(&items[0])?, label_of(&items[1])?);
                let mut found: BTreeSet<(usize, bool)> = BTreeSet::new();
                for (t, ls) in self.labels.iter().enumerate() {
                    if let (Some(x), Some(y)) = (ls.iter().position(|l| *l == a), ls.iter().position(|l| *l == b)) {
                        if x != y {
                            found.insert(c.local_edge(t, x, y));
                        }
                    }
                }
                match found.len() {
                    1 => Ok(found.into_iter().next().unwrap()),
                    0 => Err(schema(format!("no edge {a}-{b}"))),
                    _ => Err(schema(format!("edge {a}-{b} is ambiguous; use [tet, x, y]"))),
                }
            }
            _ => Err(schema(format!("bad edge reference {r}"))),
        }
    }
}

fn parse_complex(doc: &Value) -> Result<Parsed, TriError> {
    let tets = doc.get("tets").and_then(Value::as_array).ok_or_else(|| schema("missing `tets`"))?;
    let mut labels = Vec::new();
    for t in tets {
        let row = t.as_array().filter(|r| r.len() == 4).ok_or_else(|| schema("each tetrahedron needs 4 labels"))?;
        let ls: Vec<String> = row.iter().map(label_of).collect::<Result<_, _>>()?;
        labels.push([ls[0].clone(), ls[1].clone(), ls[2].clone(), ls[3].clone()]);
    }
    let signs = match doc.get("orientations") {
        None | Some(Value::Null) => None,
        Some(v) => {
            let arr = v.as_array().ok_or_else(|| schema("`orientations` must be an array"))?;
            Some(
                arr.iter()
                    .map(|s| match s.as_i64() {
                        Some(1) => Ok(Sign::Plus),
                        Some(-1) => Ok(Sign::Minus),
                        _ => Err(schema("orientations are 1 or -1")),
                    })
                    .collect::<Result<Vec<_>, _>>()?,
            )
        }
    };
    let complex = match doc.get("gluings") {
        None | Some(Value::Null) => complex_from_labels(&labels, signs)?,
        Some(v) => {
            let arr = v.as_array().ok_or_else(|| schema("`gluings` must be an array"))?;
            let mut gluings = vec![[None; 4]; labels.len()];
            for g in arr {
                let row = g.as_array().filter(|r| r.len() == 5).ok_or_else(|| schema("gluing is [t, f, t2, f2, perm]"))?;
                let t = index_of(&row[0], "tetrahedron")?;
                let f = index_of(&row[1], "face")?;
                let u = index_of(&row[2], "tetrahedron")?;
                let h = index_of(&row[3], "face")?;
                let p = row[4].as_array().filter(|p| p.len() == 4).ok_or_else(|| schema("perm needs 4 entries"))?;
                let mut perm = [0; 4];
                for k in 0..4 {
                    perm[k] = index_of(&p[k], "perm entry")?;
                }
                if t >= labels.len() || u >= labels.len() || f >= 4 || h >= 4 || !super::complex::is_perm(&perm) {
                    return Err(schema(format!("bad gluing {g}")));
                }
                gluings[t][f] = Some(FaceGluing { tet: u, face: h, perm });
                gluings[u][h] = Some(FaceGluing { tet: t, face: f, perm: super::perm_inverse(&perm) });
            }
            validate_complex(&ComplexData { gluings, signs })?
        }
    };
    Ok(Parsed { complex, labels })
}

pub fn load_complex(doc: &str) -> Result<DeltaComplex3, TriError> {
    let v: Value = serde_json::from_str(doc).map_err(|e| schema(e.to_string()))?;
    Ok(parse_complex(&v)?.complex)
}

/// Parse a triangulation file into an H-triangulation over `group` with bad set `badset`.
pub fn load_triangulation(
    doc: &str,
    group: Arc<FiniteGroup>,
    badset: BTreeSet<Element>,
) -> Result<HTriangulation, TriError> {
    let v: Value = serde_json::from_str(doc).map_err(|e| schema(e.to_string()))?;
    let parsed = parse_complex(&v)?;
    let c = &parsed.complex;
    let gamma: BTreeSet<usize> = match v.get("gamma") {
        None | Some(Value::Null) => hamiltonian_cycle(c)?.into_iter().collect(),
        Some(g) => g
            .as_array()
            .ok_or_else(|| schema("`gamma` must be an array"))?
            .iter()
            .map(|r| parsed.edge(r).map(|e| e.0))
            .collect::<Result<_, _>>()?,
    };
    let mut phi: Vec<Option<Element>> = vec![None; c.n_edges()];
    if let Some(p) = v.get("phi").filter(|p| !p.is_null()) {
        for entry in p.as_array().ok_or_else(|| schema("`phi` must be an array"))? {
            let (e, fwd) = parsed.edge(entry.get("edge").ok_or_else(|| schema("phi entry needs `edge`"))?)?;
            let g = parse_element(&group, entry.get("g").ok_or_else(|| schema("phi entry needs `g`"))?)
                .map_err(|e| schema(e.to_string()))?;
            let g = if fwd { g } else { group.inv(g) };
            if phi[e].is_some_and(|old| old != g) {
                return Err(schema(format!("conflicting phi on edge {e}")));
            }
            phi[e] = Some(g);
        }
    }
    let phi = phi.into_iter().map(|g| g.unwrap_or(group.id())).collect();
    make_h_triangulation(parsed.complex, gamma, phi, group, badset)
}

pub fn load_triangulation_file(
    path: &std::path::Path,
    group: Arc<FiniteGroup>,
    badset: BTreeSet<Element>,
) -> Result<HTriangulation, TriError> {
    let doc = std::fs::read_to_string(path).map_err(|e| schema(format!("{}: {e}", path.display())))?;
    load_triangulation(&doc, group, badset)
}

/// Serialize with explicit gluings, quotient vertex numbers as labels and local edge references.
pub fn triangulation_to_json(h: &HTriangulation) -> Value {
    let c = h.complex();
    let grp = h.group();
    let tets: Vec<Value> = (0..c.n_tets()).map(|t| json!(c.tet_vertices(t))).collect();
    let mut gluings = Vec::new();
    for t in 0..c.n_tets() {
        for f in 0..4 {
            let g = c.gluing(t, f);
            if (t, f) < (g.tet, g.face) {
                gluings.push(json!([t, f, g.tet, g.face, g.perm]));
            }
        }
    }
    let orientations: Vec<i64> = c.signs().iter().map(|s| if *s == Sign::Plus { 1 } else { -1 }).collect();
    let mut gamma = Vec::new();
    let mut phi = BTreeMap::new();
    for e in 0..c.n_edges() {
        let (t, x, y) = c.edge_rep(e);
        if h.in_gamma(e) {
            gamma.push(json!([t, x, y]));
        }
        if h.phi()[e] != grp.id() {
            phi.insert(e, json!({"edge": [t, x, y], "g": grp.name(h.phi()[e])}));
        }
    }
    json!({
        "tets": tets,
        "gluings": gluings,
        "orientations": orientations,
        "gamma": gamma,
        "phi": phi.into_values().collect::<Vec<_>>(),
    })
}
