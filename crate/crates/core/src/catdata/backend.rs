use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use crate::gcore::{Element, Field, FiniteGroup, Matrix, Scalar};
use crate::graphval::{admissible_labelings, minus_from_plus, tet_faces, Sign};

use super::CatError;

/// Simple-object indices `(i, j, k)` naming the multiplicity space `H(i, j, k)`.
pub type Triple = [usize; 3];

/// Lexicographically least cyclic rotation.
pub fn canonical_triple(t: Triple) -> Triple {
    let r1 = [t[1], t[2], t[0]];
    let r2 = [t[2], t[0], t[1]];
    t.min(r1).min(r2)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimpleObject {
    pub name: String,
    pub degree: Element,
    pub star: usize,
    /// modified dimension
    pub d: Scalar,
    pub b: Scalar,
    /// Categorical dimension; defaults to `d` when absent.
    pub qdim: Option<Scalar>,
}

/// Tetrahedral tensors keyed by the six edge labels `(AB, AC, AD, BC, BD, CD)`,
/// flattened row-major over the four face basis indices.
pub type TetTable = HashMap<[usize; 6], Vec<Scalar>>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LoadMode {
    /// Every invariant is enforced.
    Strict,
    /// Gram/copairing consistency and the two tet tables are not cross-checked,
    /// so that corrupted data can be loaded and reported on.
    Lenient,
}

/// Unvalidated backend contents.
#[derive(Clone, Debug)]
pub struct BackendData {
    pub name: String,
    pub field: Field,
    pub group: Arc<FiniteGroup>,
    pub simples: Vec<SimpleObject>,
    pub badset: BTreeSet<Element>,
    pub n: Vec<(Triple, usize)>,
    pub gram: Vec<(Triple, Matrix)>,
    pub copairing: Vec<(Triple, Matrix)>,
    pub tet_plus: TetTable,
    pub tet_minus: Option<TetTable>,
}

#[derive(Clone, Debug)]
pub struct CategoryBackend {
    data: BackendData,
    by_degree: Vec<Vec<usize>>,
    n: HashMap<Triple, usize>,
    gram: HashMap<Triple, Matrix>,
    copairing: HashMap<Triple, Matrix>,
    tet_minus: TetTable,
}

impl CategoryBackend {
    /// Everything except the tetrahedral tables.
    pub(crate) fn build_without_tets(data: BackendData, mode: LoadMode) -> Result<CategoryBackend, CatError> {
        let g = data.group.clone();
        let ns = data.simples.len();
        let name = |i: usize| data.simples[i].name.clone();
        let tname = |t: Triple| format!("({},{},{})", name(t[0]), name(t[1]), name(t[2]));

        for x in &data.badset {
            if x.index() >= g.order() {
                return Err(CatError::Schema(format!("bad-set element {} out of range", x.0)));
            }
            if !data.badset.contains(&g.inv(*x)) {
                return Err(CatError::violation("badset-symmetric", g.name(*x)));
            }
        }
        let mut by_degree = vec![Vec::new(); g.order()];
        for (i, s) in data.simples.iter().enumerate() {
            if s.star >= ns {
                return Err(CatError::Schema(format!("star of {} out of range", s.name)));
            }
            if s.degree.index() >= g.order() {
                return Err(CatError::Schema(format!("degree of {} out of range", s.name)));
            }
            if s.d.field() != data.field || s.b.field() != data.field {
                return Err(CatError::Schema(format!("scalar of {} in the wrong field", s.name)));
            }
            if data.simples[s.star].star != i {
                return Err(CatError::violation("star-involution", s.name.clone()));
            }
            if data.simples[s.star].degree != g.inv(s.degree) {
                return Err(CatError::violation("star-degree", s.name.clone()));
            }
            if data.badset.contains(&s.degree) {
                return Err(CatError::violation("degree-outside-badset", s.name.clone()));
            }
            if s.d.is_zero() {
                return Err(CatError::violation("d-nonzero", s.name.clone()));
            }
            if data.simples[s.star].d != s.d {
                return Err(CatError::violation("d-star", s.name.clone()));
            }
            if data.simples[s.star].b != s.b {
                return Err(CatError::violation("b-star", s.name.clone()));
            }
            by_degree[s.degree.index()].push(i);
        }
        for x in g.elements() {
            if !data.badset.contains(&x) && by_degree[x.index()].is_empty() {
                return Err(CatError::violation("generic-degree-nonempty", g.name(x)));
            }
        }

        let star = |i: usize| data.simples[i].star;
        let dual = |t: Triple| canonical_triple([star(t[2]), star(t[1]), star(t[0])]);

        let mut n: HashMap<Triple, usize> = HashMap::new();
        for &(t, v) in &data.n {
            if t.iter().any(|&i| i >= ns) {
                return Err(CatError::Schema(format!("N entry {t:?} out of range")));
            }
            let c = canonical_triple(t);
            if let Some(&old) = n.get(&c) {
                if old != v {
                    return Err(CatError::violation("N-cyclic", tname(t)));
                }
            }
            n.insert(c, v);
        }
        n.retain(|_, v| *v > 0);
        let mut keys: Vec<Triple> = n.keys().copied().collect();
        keys.sort_unstable();
        for t in keys {
            let v = n[&t];
            let deg = g.mul3(data.simples[t[0]].degree, data.simples[t[1]].degree, data.simples[t[2]].degree);
            if deg != g.id() {
                return Err(CatError::violation("N-degree", tname(t)));
            }
            match n.get(&dual(t)) {
                Some(&w) if w != v => return Err(CatError::violation("N-dual", tname(t))),
                Some(_) => {}
                None => {
                    n.insert(dual(t), v);
                }
            }
        }

        let mut given: HashMap<Triple, Matrix> = HashMap::new();
        for (t, m) in &data.gram {
            if t.iter().any(|&i| i >= ns) {
                return Err(CatError::Schema(format!("gram entry {t:?} out of range")));
            }
            let c = canonical_triple(*t);
            if given.insert(c, m.clone()).is_some() {
                return Err(CatError::Schema(format!("duplicate gram entry for {}", tname(c))));
            }
        }
        let mut gram = HashMap::new();
        let mut keys: Vec<Triple> = n.keys().copied().collect();
        keys.sort_unstable();
        for &t in &keys {
            let v = n[&t];
            let m = match (given.get(&t), given.get(&dual(t))) {
                (Some(m), Some(md)) => {
                    if *md != m.transpose() {
                        return Err(CatError::violation("gram-dual", tname(t)));
                    }
                    m.clone()
                }
                (Some(m), None) => m.clone(),
                (None, Some(md)) => md.transpose(),
                (None, None) => return Err(CatError::violation("gram-missing", tname(t))),
            };
            if m.size() != v {
                return Err(CatError::Schema(format!("gram for {} has size {} but N = {v}", tname(t), m.size())));
            }
            if m.rows().iter().flatten().any(|s| s.field() != data.field) {
                return Err(CatError::Schema(format!("gram for {} in the wrong field", tname(t))));
            }
            gram.insert(t, m);
        }
        let mut extra: Vec<&Triple> = given.keys().filter(|t| !n.contains_key(*t)).collect();
        extra.sort_unstable();
        if let Some(t) = extra.first() {
            return Err(CatError::Schema(format!("gram given for {} where N = 0", tname(**t))));
        }

        let mut copairing = HashMap::new();
        let mut explicit = HashMap::new();
        for (t, m) in &data.copairing {
            let c = canonical_triple(*t);
            if !n.contains_key(&c) || m.size() != n[&c] {
                return Err(CatError::Schema(format!("copairing for {} does not match N", tname(c))));
            }
            explicit.insert(c, m.clone());
        }
        for t in &keys {
            let (t, m) = (*t, &gram[t]);
            let c = match (explicit.get(&t), explicit.get(&dual(t))) {
                (Some(c), _) => c.clone(),
                (None, Some(cd)) => cd.transpose(),
                (None, None) => match m.inverse() {
                    Ok(c) => c,
                    Err(_) if mode == LoadMode::Lenient => continue,
                    Err(_) => return Err(CatError::violation("gram-invertible", tname(t))),
                },
            };
            if mode == LoadMode::Strict && !m.mul(&c).is_identity() {
                return Err(CatError::violation("copairing", tname(t)));
            }
            copairing.insert(t, c);
        }

        Ok(CategoryBackend { data, by_degree, n, gram, copairing, tet_minus: HashMap::new() })
    }

    pub fn build(data: BackendData, mode: LoadMode) -> Result<CategoryBackend, CatError> {
        let mut backend = CategoryBackend::build_without_tets(data, mode)?;
        let ns = backend.n_simples();
        let check_table = |table: &TetTable, sign: Sign| -> Result<(), CatError> {
            let mut keys: Vec<&[usize; 6]> = table.keys().collect();
            keys.sort_unstable();
            for labels in keys {
                let values = &table[labels];
                if labels.iter().any(|&i| i >= ns) {
                    return Err(CatError::Schema(format!("tet label {labels:?} out of range")));
                }
                let dims = backend.face_dims(labels, sign);
                if dims.contains(&0) {
                    return Err(CatError::violation("tet-admissible", backend.labels_name(labels)));
                }
                if values.len() != dims.iter().product::<usize>() {
                    return Err(CatError::Schema(format!(
                        "tet entry {} has {} values, expected {}",
                        backend.labels_name(labels),
                        values.len(),
                        dims.iter().product::<usize>()
                    )));
                }
            }
            Ok(())
        };
        check_table(&backend.data.tet_plus, Sign::Plus)?;
        let derived = minus_from_plus(&backend);
        match backend.data.tet_minus.clone() {
            Some(minus) => {
                check_table(&minus, Sign::Minus)?;
                if mode == LoadMode::Strict {
                    let mut keys: Vec<&[usize; 6]> = derived.keys().collect();
                    keys.sort_unstable();
                    for k in keys {
                        if minus.get(k) != Some(&derived[k]) {
                            return Err(CatError::violation("tet-minus", backend.labels_name(k)));
                        }
                    }
                }
                backend.tet_minus = minus;
            }
            None => backend.tet_minus = derived,
        }
        for labels in admissible_labelings(&backend) {
            if !backend.data.tet_plus.contains_key(&labels) {
                return Err(CatError::violation("tet-complete", backend.labels_name(&labels)));
            }
            if mode == LoadMode::Strict && !backend.tet_minus.contains_key(&labels) {
                return Err(CatError::violation("tet-complete", backend.labels_name(&labels)));
            }
        }
        Ok(backend)
    }

    /// The raw contents, for modification and rebuilding.
    pub fn data(&self) -> &BackendData {
        &self.data
    }

    pub fn name(&self) -> &str {
        &self.data.name
    }
    pub fn field(&self) -> Field {
        self.data.field
    }
    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.data.group
    }
    pub fn simples(&self) -> &[SimpleObject] {
        &self.data.simples
    }
    pub fn n_simples(&self) -> usize {
        self.data.simples.len()
    }
    pub fn simple(&self, i: usize) -> &SimpleObject {
        &self.data.simples[i]
    }
    pub fn simple_by_name(&self, name: &str) -> Option<usize> {
        self.data.simples.iter().position(|s| s.name == name)
    }
    pub fn star(&self, i: usize) -> usize {
        self.data.simples[i].star
    }
    pub fn degree(&self, i: usize) -> Element {
        self.data.simples[i].degree
    }
    pub fn d(&self, i: usize) -> &Scalar {
        &self.data.simples[i].d
    }
    pub fn b(&self, i: usize) -> &Scalar {
        &self.data.simples[i].b
    }
    pub fn qdim(&self, i: usize) -> &Scalar {
        let s = &self.data.simples[i];
        s.qdim.as_ref().unwrap_or(&s.d)
    }
    pub fn badset(&self) -> &BTreeSet<Element> {
        &self.data.badset
    }
    pub fn in_badset(&self, g: Element) -> bool {
        self.data.badset.contains(&g)
    }
    /// `I_g`, empty for degrees in the bad set.
    pub fn simples_of_degree(&self, g: Element) -> &[usize] {
        &self.by_degree[g.index()]
    }

    /// Dimension of `H(i, j, k)`.
    pub fn n(&self, t: Triple) -> usize {
        self.n.get(&canonical_triple(t)).copied().unwrap_or(0)
    }

    /// Canonical representatives of all classes with `N > 0`, sorted.
    pub fn admissible_triples(&self) -> Vec<Triple> {
        let mut v: Vec<Triple> = self.n.keys().copied().collect();
        v.sort_unstable();
        v
    }

    pub fn dual_triple(&self, t: Triple) -> Triple {
        [self.star(t[2]), self.star(t[1]), self.star(t[0])]
    }

    /// Pairing matrix between the bases of `H(i,j,k)` and `H(k*,j*,i*)`.
    pub fn gram(&self, t: Triple) -> Option<&Matrix> {
        self.gram.get(&canonical_triple(t))
    }

    /// Copairing coefficients `C` with `gram · C = 1` (or the explicitly supplied ones).
    pub fn copairing(&self, t: Triple) -> Result<Matrix, CatError> {
        let c = canonical_triple(t);
        if !self.n.contains_key(&c) {
            return Ok(Matrix::from_rows(Vec::new()).expect("empty"));
        }
        self.copairing.get(&c).cloned().ok_or_else(|| CatError::SingularGram(self.triple_name(c)))
    }

    pub fn tet_table(&self, sign: Sign) -> &TetTable {
        match sign {
            Sign::Plus => &self.data.tet_plus,
            Sign::Minus => &self.tet_minus,
        }
    }

    /// `N` of the four faces of a tetrahedron with these edge labels.
    pub fn face_dims(&self, labels: &[usize; 6], sign: Sign) -> [usize; 4] {
        tet_faces(labels, sign, |i| self.star(i)).map(|t| self.n(t))
    }

    pub fn triple_name(&self, t: Triple) -> String {
        format!("({},{},{})", self.simple(t[0]).name, self.simple(t[1]).name, self.simple(t[2]).name)
    }

    pub fn labels_name(&self, l: &[usize; 6]) -> String {
        let names: Vec<&str> = l.iter().map(|&i| self.simple(i).name.as_str()).collect();
        format!("[{}]", names.join(","))
    }
}
