//! JSON reading and writing of backends, groups and scalars.

use std::collections::{BTreeSet, HashMap};
use std::path::Path;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};
use serde_json::{json, Value};

use crate::gcore::{group_from_table, Element, Field, FiniteGroup, Matrix, Scalar};
use crate::graphval::{admissible_labelings, Sign};

use super::backend::{BackendData, CategoryBackend, LoadMode, SimpleObject, TetTable, Triple};
use super::CatError;

fn schema(msg: impl Into<String>) -> CatError {
    CatError::Schema(msg.into())
}

fn parse_int(v: &Value) -> Result<BigInt, CatError> {
    match v {
        Value::Number(n) => n.as_i64().map(BigInt::from).ok_or_else(|| schema(format!("not an integer: {n}"))),
        Value::String(s) => s.parse().map_err(|_| schema(format!("not an integer: {s:?}"))),
        _ => Err(schema(format!("not an integer: {v}"))),
    }
}

/// A scalar: an integer, a power-basis coefficient list, or `{"coeffs": [...], "den": n}`.
pub fn parse_scalar(field: Field, v: &Value) -> Result<Scalar, CatError> {
    let (coeffs, den) = match v {
        Value::Array(a) => (a.as_slice(), BigInt::from(1)),
        Value::Object(o) => {
            let c = o.get("coeffs").and_then(Value::as_array).ok_or_else(|| schema("scalar object needs `coeffs`"))?;
            let den = o.get("den").map(parse_int).transpose()?.unwrap_or_else(|| BigInt::from(1));
            (c.as_slice(), den)
        }
        _ => return Ok(field.rational(parse_int(v)?, BigInt::from(1))),
    };
    let coeffs = coeffs.iter().map(parse_int).collect::<Result<Vec<_>, _>>()?;
    field.from_coeffs(coeffs, den).map_err(CatError::from)
}

fn int_value(b: &BigInt) -> Value {
    match b.to_i64() {
        Some(i) => json!(i),
        None => json!(b.to_string()),
    }
}

pub fn scalar_to_json(s: &Scalar) -> Value {
    if let Some(r) = s.as_rational() {
        if r.denom() == &BigInt::from(1) {
            return int_value(r.numer());
        }
    }
    let mut coeffs: Vec<BigInt> = s.numerator().to_vec();
    while coeffs.len() > 1 && coeffs.last().is_some_and(Zero::is_zero) {
        coeffs.pop();
    }
    let coeffs: Vec<Value> = coeffs.iter().map(int_value).collect();
    if s.denominator() == &BigInt::from(1) {
        json!(coeffs)
    } else {
        json!({ "coeffs": coeffs, "den": int_value(s.denominator()) })
    }
}

/// Group from `{"order", "table", "element_names"?}` or a builtin name
/// (`Z/n`, `S<k>`, `trivial`).
pub fn parse_group(v: &Value) -> Result<FiniteGroup, CatError> {
    match v {
        Value::String(s) => builtin_group(s).ok_or_else(|| schema(format!("unknown group {s:?}"))),
        Value::Object(o) => {
            let table: Vec<Vec<usize>> = serde_json::from_value(o.get("table").cloned().unwrap_or(Value::Null))
                .map_err(|e| schema(format!("group table: {e}")))?;
            if let Some(order) = o.get("order").and_then(Value::as_u64) {
                if order as usize != table.len() {
                    return Err(schema(format!("group order {order} but table has {} rows", table.len())));
                }
            }
            let g = group_from_table(&table)?;
            match o.get("element_names") {
                Some(names) => {
                    let names: Vec<String> =
                        serde_json::from_value(names.clone()).map_err(|e| schema(format!("element_names: {e}")))?;
                    Ok(g.with_names(names)?)
                }
                None => Ok(g),
            }
        }
        _ => Err(schema("group must be a name or an object")),
    }
}

pub fn builtin_group(name: &str) -> Option<FiniteGroup> {
    if name == "trivial" {
        return Some(FiniteGroup::cyclic(1));
    }
    if let Some(n) = name.strip_prefix("Z/") {
        return n.parse().ok().filter(|&n: &usize| n > 0).map(FiniteGroup::cyclic);
    }
    if let Some(k) = name.strip_prefix('S') {
        return k.parse().ok().filter(|&k: &usize| (1..=5).contains(&k)).map(FiniteGroup::symmetric);
    }
    None
}

pub fn group_to_json(g: &FiniteGroup) -> Value {
    json!({ "order": g.order(), "table": g.table(), "element_names": g.names() })
}

/// An element by name or index.
pub fn parse_element(g: &FiniteGroup, v: &Value) -> Result<Element, CatError> {
    match v {
        Value::String(s) => g.element_by_name(s).ok_or_else(|| schema(format!("unknown group element {s:?}"))),
        Value::Number(n) => n
            .as_u64()
            .filter(|&i| (i as usize) < g.order())
            .map(|i| Element(i as u32))
            .ok_or_else(|| schema(format!("element index {n} out of range"))),
        _ => Err(schema(format!("bad group element {v}"))),
    }
}

fn parse_simple_ref(names: &HashMap<String, usize>, n: usize, v: &Value) -> Result<usize, CatError> {
    match v {
        Value::String(s) => names.get(s).copied().ok_or_else(|| schema(format!("unknown simple {s:?}"))),
        Value::Number(x) => x
            .as_u64()
            .map(|i| i as usize)
            .filter(|&i| i < n)
            .ok_or_else(|| schema(format!("simple index {x} out of range"))),
        _ => Err(schema(format!("bad simple reference {v}"))),
    }
}

fn parse_matrix(field: Field, v: &Value) -> Result<Matrix, CatError> {
    let rows = v.as_array().ok_or_else(|| schema("matrix must be a list of rows"))?;
    let rows = rows
        .iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| schema("matrix row must be a list"))?
                .iter()
                .map(|x| parse_scalar(field, x))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Matrix::from_rows(rows).ok_or_else(|| schema("matrix must be square"))
}

fn list<'a>(o: &'a serde_json::Map<String, Value>, key: &str) -> Result<&'a [Value], CatError> {
    match o.get(key) {
        None => Ok(&[]),
        Some(Value::Array(a)) => Ok(a),
        Some(_) => Err(schema(format!("`{key}` must be a list"))),
    }
}

/// Parse and validate a backend document. Group references that are not builtin
/// names are resolved relative to `base_dir`.
pub fn load_backend(doc: &str, base_dir: Option<&Path>, mode: LoadMode) -> Result<CategoryBackend, CatError> {
    let v: Value = serde_json::from_str(doc).map_err(|e| schema(format!("invalid JSON: {e}")))?;
    let o = v.as_object().ok_or_else(|| schema("backend must be a JSON object"))?;
    let conductor = o
        .get("conductor")
        .and_then(Value::as_u64)
        .ok_or_else(|| schema("missing integer `conductor`"))?;
    let field = Field::cyclotomic(conductor as u32)?;
    let gv = o.get("group").ok_or_else(|| schema("missing `group`"))?;
    let group = match gv {
        Value::String(s) if builtin_group(s).is_none() => {
            let path = base_dir.map(|d| d.join(s)).unwrap_or_else(|| s.into());
            let text = std::fs::read_to_string(&path).map_err(|e| schema(format!("group file {}: {e}", path.display())))?;
            let gv: Value = serde_json::from_str(&text).map_err(|e| schema(format!("group file: {e}")))?;
            parse_group(&gv)?
        }
        _ => parse_group(gv)?,
    };
    let simples_v = list(o, "simples")?;
    let mut names = HashMap::new();
    for (i, s) in simples_v.iter().enumerate() {
        let name = s.get("name").and_then(Value::as_str).ok_or_else(|| schema(format!("simple {i} has no name")))?;
        if names.insert(name.to_string(), i).is_some() {
            return Err(schema(format!("duplicate simple {name:?}")));
        }
    }
    let ns = simples_v.len();
    let mut simples = Vec::new();
    for s in simples_v {
        let get = |k: &str| s.get(k).ok_or_else(|| schema(format!("simple {} lacks `{k}`", s["name"])));
        simples.push(SimpleObject {
            name: s["name"].as_str().unwrap_or_default().to_string(),
            degree: parse_element(&group, get("degree")?)?,
            star: parse_simple_ref(&names, ns, get("star")?)?,
            d: parse_scalar(field, get("d")?)?,
            b: parse_scalar(field, get("b")?)?,
            qdim: s.get("qdim").map(|q| parse_scalar(field, q)).transpose()?,
        });
    }
    let badset = list(o, "badset")?
        .iter()
        .map(|x| parse_element(&group, x))
        .collect::<Result<BTreeSet<_>, _>>()?;
    let triple = |v: Option<&Value>| -> Result<Triple, CatError> {
        let a = v.and_then(Value::as_array).filter(|a| a.len() == 3).ok_or_else(|| schema("`triple` must list three simples"))?;
        Ok([
            parse_simple_ref(&names, ns, &a[0])?,
            parse_simple_ref(&names, ns, &a[1])?,
            parse_simple_ref(&names, ns, &a[2])?,
        ])
    };
    let mut n = Vec::new();
    for e in list(o, "N")? {
        let k = e.get("n").and_then(Value::as_u64).ok_or_else(|| schema("N entry needs integer `n`"))?;
        n.push((triple(e.get("triple"))?, k as usize));
    }
    let mut gram = Vec::new();
    for e in list(o, "gram")? {
        gram.push((triple(e.get("triple"))?, parse_matrix(field, e.get("matrix").unwrap_or(&Value::Null))?));
    }
    let mut copairing = Vec::new();
    for e in list(o, "copairing")? {
        copairing.push((triple(e.get("triple"))?, parse_matrix(field, e.get("matrix").unwrap_or(&Value::Null))?));
    }
    let tet = |key: &str| -> Result<Option<TetTable>, CatError> {
        let Some(entries) = o.get(key) else { return Ok(None) };
        let entries = entries.as_array().ok_or_else(|| schema(format!("`{key}` must be a list")))?;
        let mut table = TetTable::new();
        for e in entries {
            let l = e
                .get("labels")
                .and_then(Value::as_array)
                .filter(|a| a.len() == 6)
                .ok_or_else(|| schema(format!("{key} entry needs six `labels`")))?;
            let mut labels = [0; 6];
            for (k, x) in l.iter().enumerate() {
                labels[k] = parse_simple_ref(&names, ns, x)?;
            }
            let values = match (e.get("value"), e.get("values")) {
                (Some(x), None) => vec![parse_scalar(field, x)?],
                (None, Some(Value::Array(xs))) => xs.iter().map(|x| parse_scalar(field, x)).collect::<Result<_, _>>()?,
                _ => return Err(schema(format!("{key} entry needs `value` or `values`"))),
            };
            if table.insert(labels, values).is_some() {
                return Err(schema(format!("duplicate {key} entry {l:?}")));
            }
        }
        Ok(Some(table))
    };
    let data = BackendData {
        name: o.get("name").and_then(Value::as_str).unwrap_or("backend").to_string(),
        field,
        group: Arc::new(group),
        simples,
        badset,
        n,
        gram,
        copairing,
        tet_plus: tet("tet_plus")?.unwrap_or_default(),
        tet_minus: tet("tet_minus")?,
    };
    CategoryBackend::build(data, mode)
}

pub fn load_backend_file(path: &Path, mode: LoadMode) -> Result<CategoryBackend, CatError> {
    let text = std::fs::read_to_string(path).map_err(|e| schema(format!("{}: {e}", path.display())))?;
    load_backend(&text, path.parent(), mode)
}

/// Serialize with every table written out (including the derived `tet_minus`).
pub fn backend_to_json(b: &CategoryBackend) -> Value {
    let g = b.group();
    let sname = |i: usize| json!(b.simple(i).name);
    let simples: Vec<Value> = b
        .simples()
        .iter()
        .map(|s| {
            let mut v = json!({
                "name": s.name,
                "degree": g.name(s.degree),
                "star": b.simple(s.star).name,
                "d": scalar_to_json(&s.d),
                "b": scalar_to_json(&s.b),
            });
            if let Some(q) = &s.qdim {
                v["qdim"] = scalar_to_json(q);
            }
            v
        })
        .collect();
    let triple = |t: &Triple| json!([sname(t[0]), sname(t[1]), sname(t[2])]);
    let matrix = |m: &Matrix| json!(m.rows().iter().map(|r| r.iter().map(scalar_to_json).collect::<Vec<_>>()).collect::<Vec<_>>());
    let data = b.data();
    let tet = |sign: Sign| {
        let table = b.tet_table(sign);
        let mut keys: Vec<&[usize; 6]> = table.keys().collect();
        keys.sort_unstable();
        keys.into_iter()
            .map(|k| {
                let labels: Vec<Value> = k.iter().map(|&i| sname(i)).collect();
                let vals = &table[k];
                if vals.len() == 1 {
                    json!({ "labels": labels, "value": scalar_to_json(&vals[0]) })
                } else {
                    json!({ "labels": labels, "values": vals.iter().map(scalar_to_json).collect::<Vec<_>>() })
                }
            })
            .collect::<Vec<_>>()
    };
    let mut out = json!({
        "name": b.name(),
        "conductor": b.field().conductor(),
        "group": group_to_json(g),
        "badset": b.badset().iter().map(|&x| g.name(x)).collect::<Vec<_>>(),
        "simples": simples,
        "N": b.admissible_triples().iter().map(|t| json!({ "triple": triple(t), "n": b.n(*t) })).collect::<Vec<_>>(),
        "gram": b.admissible_triples().iter().map(|t| json!({ "triple": triple(t), "matrix": matrix(b.gram(*t).expect("gram")) })).collect::<Vec<_>>(),
        "tet_plus": tet(Sign::Plus),
        "tet_minus": tet(Sign::Minus),
    });
    if !data.copairing.is_empty() {
        out["copairing"] = json!(data.copairing.iter().map(|(t, m)| json!({ "triple": triple(t), "matrix": matrix(m) })).collect::<Vec<_>>());
    }
    out
}

/// The pointed backend `Vec_G`: one simple per element, `N = 1` on triples with
/// product `1`, `d ≡ 1`, the given `b`, unit Gram matrices and unit tetrahedra.
pub fn vec_group_backend(group: Arc<FiniteGroup>, field: Field, b: &[Scalar]) -> Result<CategoryBackend, CatError> {
    let g = group.clone();
    if b.len() != g.order() {
        return Err(CatError::BadBFunction(format!("{} values for a group of order {}", b.len(), g.order())));
    }
    for x in g.elements() {
        if b[x.index()] != b[g.inv(x).index()] {
            return Err(CatError::BadBFunction(format!("b({}) != b({}⁻¹)", g.name(x), g.name(x))));
        }
        for y in g.elements() {
            if b[g.mul(x, y).index()] != &b[x.index()] * &b[y.index()] {
                return Err(CatError::BadBFunction(format!("b not multiplicative at ({}, {})", g.name(x), g.name(y))));
            }
        }
    }
    let simples = g
        .elements()
        .map(|x| SimpleObject {
            name: format!("v{}", g.name(x)),
            degree: x,
            star: g.inv(x).index(),
            d: field.one(),
            b: b[x.index()].clone(),
            qdim: None,
        })
        .collect();
    let mut n = Vec::new();
    let mut gram = Vec::new();
    for x in g.elements() {
        for y in g.elements() {
            let z = g.inv(g.mul(x, y));
            let t = [x.index(), y.index(), z.index()];
            if super::canonical_triple(t) == t {
                n.push((t, 1));
                gram.push((t, Matrix::scalar(field.one())));
            }
        }
    }
    // gram entries for dual classes are implied; drop them to avoid duplicates
    let star = |i: usize| g.inv(Element(i as u32)).index();
    let mut seen = BTreeSet::new();
    gram.retain(|(t, _)| {
        let d = super::canonical_triple([star(t[2]), star(t[1]), star(t[0])]);
        let keep = !seen.contains(&d);
        seen.insert(*t);
        keep
    });
    let mut data = BackendData {
        name: format!("Vec_G (|G| = {})", g.order()),
        field,
        group,
        simples,
        badset: BTreeSet::new(),
        n,
        gram,
        copairing: Vec::new(),
        tet_plus: TetTable::new(),
        tet_minus: None,
    };
    let core = CategoryBackend::build_without_tets(data.clone(), LoadMode::Strict)?;
    data.tet_plus = admissible_labelings(&core).into_iter().map(|l| (l, vec![field.one()])).collect();
    CategoryBackend::build(data, LoadMode::Strict)
}
