use std::sync::atomic::{AtomicUsize, Ordering};

use dashmap::DashMap;

use crate::catdata::{CategoryBackend, TetTable, Triple};
use crate::gcore::Scalar;

use super::GraphError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

/// Oriented faces of a positive tetrahedron `ABCD`: `BCD, ADC, ABD, ACB`.
pub const PLUS_FACES: [[usize; 3]; 4] = [[1, 2, 3], [0, 3, 2], [0, 1, 3], [0, 2, 1]];
/// Oriented faces of a negative tetrahedron `ABCD`: `BDC, ACD, ADB, ABC`.
pub const MINUS_FACES: [[usize; 3]; 4] = [[1, 3, 2], [0, 2, 3], [0, 3, 1], [0, 1, 2]];

const PAIRS: [(usize, usize); 6] = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];

fn pair_index(x: usize, y: usize) -> usize {
    let key = (x.min(y), x.max(y));
    PAIRS.iter().position(|&p| p == key).expect("distinct vertices")
}

/// Label of the oriented edge `x → y` (starred when running against the vertex order).
fn edge_label(labels: &[usize; 6], star: impl Fn(usize) -> usize, x: usize, y: usize) -> usize {
    let l = labels[pair_index(x, y)];
    if x < y {
        l
    } else {
        star(l)
    }
}

pub fn faces_of(sign: Sign) -> &'static [[usize; 3]; 4] {
    match sign {
        Sign::Plus => &PLUS_FACES,
        Sign::Minus => &MINUS_FACES,
    }
}

/// The multiplicity spaces `H(f_1), …, H(f_4)` of a labeled tetrahedron.
pub fn tet_faces(labels: &[usize; 6], sign: Sign, star: impl Fn(usize) -> usize) -> [Triple; 4] {
    faces_of(sign).map(|[p, q, r]| {
        [edge_label(labels, &star, p, q), edge_label(labels, &star, q, r), edge_label(labels, &star, r, p)]
    })
}

pub(crate) fn flat_index(dims: &[usize; 4], basis: &[usize; 4]) -> usize {
    ((basis[0] * dims[1] + basis[1]) * dims[2] + basis[2]) * dims[3] + basis[3]
}

fn is_even(p: &[usize; 4]) -> bool {
    let mut inv = 0;
    for i in 0..4 {
        for j in i + 1..4 {
            if p[i] > p[j] {
                inv += 1;
            }
        }
    }
    inv % 2 == 0
}

/// The twelve even reorderings of `(A, B, C, D)`; identity first.
pub fn even_permutations() -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    let mut seen = [false; 4];
                    p.iter().for_each(|&x| seen[x] = true);
                    if seen.iter().all(|&s| s) && is_even(&p) {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

fn same_cycle(a: [usize; 3], b: [usize; 3]) -> bool {
    a == b || a == [b[1], b[2], b[0]] || a == [b[2], b[0], b[1]]
}

/// Reorder the vertices: new vertex `k` is old vertex `perm[k]`. Returns the new
/// labels, the new sign (flipped for odd `perm`), and for each new face the index
/// of the old face it coincides with.
pub fn relabel(
    labels: &[usize; 6],
    sign: Sign,
    perm: &[usize; 4],
    star: impl Fn(usize) -> usize,
) -> ([usize; 6], Sign, [usize; 4]) {
    let new_labels = PAIRS.map(|(x, y)| edge_label(labels, &star, perm[x], perm[y]));
    let new_sign = if is_even(perm) { sign } else { sign.flip() };
    let old_faces = faces_of(sign);
    let face_map = faces_of(new_sign).map(|f| {
        let image = f.map(|v| perm[v]);
        old_faces.iter().position(|&g| same_cycle(image, g)).expect("oriented faces are preserved")
    });
    (new_labels, new_sign, face_map)
}

/// A labeled tetrahedron with a chosen basis vector in each face space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TetLabel {
    /// `(AB, AC, AD, BC, BD, CD)` with edges oriented by the vertex order
    pub labels: [usize; 6],
    pub sign: Sign,
    pub basis: [usize; 4],
}

impl TetLabel {
    pub fn new(labels: [usize; 6], sign: Sign) -> TetLabel {
        TetLabel { labels, sign, basis: [0; 4] }
    }

    pub fn faces(&self, backend: &CategoryBackend) -> [Triple; 4] {
        tet_faces(&self.labels, self.sign, |i| backend.star(i))
    }

    pub fn check(&self, backend: &CategoryBackend) -> Result<(), GraphError> {
        if self.labels.iter().any(|&i| i >= backend.n_simples()) {
            return Err(GraphError::InadmissibleLabel(format!("{:?}", self.labels)));
        }
        let dims = backend.face_dims(&self.labels, self.sign);
        if dims.contains(&0) {
            return Err(GraphError::InadmissibleLabel(backend.labels_name(&self.labels)));
        }
        if (0..4).any(|k| self.basis[k] >= dims[k]) {
            return Err(GraphError::IndexOutOfRange(format!("{} basis {:?}", backend.labels_name(&self.labels), self.basis)));
        }
        Ok(())
    }

    /// The same tetrahedron with its vertices reordered by `perm`.
    pub fn permuted(&self, backend: &CategoryBackend, perm: &[usize; 4]) -> TetLabel {
        let (labels, sign, face_map) = relabel(&self.labels, self.sign, perm, |i| backend.star(i));
        TetLabel { labels, sign, basis: face_map.map(|j| self.basis[j]) }
    }

    /// Least label over the even reorderings.
    pub fn canonical(&self, backend: &CategoryBackend) -> TetLabel {
        let mut best = *self;
        for p in EVEN.iter().skip(1) {
            let c = self.permuted(backend, p);
            if c < best {
                best = c;
            }
        }
        best
    }
}

static EVEN: std::sync::LazyLock<Vec<[usize; 4]>> = std::sync::LazyLock::new(even_permutations);

/// Every labeling whose four faces have `N > 0`, sorted.
pub fn admissible_labelings(backend: &CategoryBackend) -> Vec<[usize; 6]> {
    let ns = backend.n_simples();
    let s = |i: usize| backend.star(i);
    let ok = |t: Triple| backend.n(t) > 0;
    let mut out = Vec::new();
    for ab in 0..ns {
        for ac in 0..ns {
            for bc in 0..ns {
                // ACB
                if !ok([ac, s(bc), s(ab)]) {
                    continue;
                }
                for ad in 0..ns {
                    for bd in 0..ns {
                        // ABD
                        if !ok([ab, bd, s(ad)]) {
                            continue;
                        }
                        for cd in 0..ns {
                            // BCD, ADC
                            if ok([bc, cd, s(bd)]) && ok([ad, s(cd), s(ac)]) {
                                out.push([ab, ac, ad, bc, bd, cd]);
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

fn all_bases(dims: &[usize; 4]) -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 0..dims[0] {
        for b in 0..dims[1] {
            for c in 0..dims[2] {
                for d in 0..dims[3] {
                    out.push([a, b, c, d]);
                }
            }
        }
    }
    out
}

/// The negative table determined by the positive one: `|ABCD|⁻ = |ACBD|⁺`
/// with the middle two face slots exchanged.
pub fn minus_from_plus(backend: &CategoryBackend) -> TetTable {
    let mut out = TetTable::new();
    let swap = [0, 2, 1, 3];
    for (labels, values) in backend.tet_table(Sign::Plus) {
        let plus_dims = backend.face_dims(labels, Sign::Plus);
        let (mlabels, msign, face_map) = relabel(labels, Sign::Plus, &swap, |i| backend.star(i));
        debug_assert_eq!(msign, Sign::Minus);
        let mdims = backend.face_dims(&mlabels, Sign::Minus);
        let mut mvalues = vec![backend.field().zero(); mdims.iter().product()];
        for basis in all_bases(&mdims) {
            let mut old = [0; 4];
            for k in 0..4 {
                old[face_map[k]] = basis[k];
            }
            if let Some(v) = values.get(flat_index(&plus_dims, &old)) {
                mvalues[flat_index(&mdims, &basis)] = v.clone();
            }
        }
        out.insert(mlabels, mvalues);
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvenPermFailure {
    pub label: TetLabel,
    pub perm: [usize; 4],
    pub value: Scalar,
    pub permuted_value: Scalar,
}

/// `None` when the value is invariant under all even reorderings; otherwise the
/// first reordering that changes it.
pub fn check_even_permutation(backend: &CategoryBackend, label: &TetLabel) -> Result<Option<EvenPermFailure>, GraphError> {
    let value = super::eval_tet(backend, label)?;
    for p in EVEN.iter().skip(1) {
        let q = label.permuted(backend, p);
        let pv = super::eval_tet(backend, &q)?;
        if pv != value {
            return Ok(Some(EvenPermFailure { label: *label, perm: *p, value, permuted_value: pv }));
        }
    }
    Ok(None)
}

/// Scan every admissible label, both signs, every basis choice.
pub fn scan_even_permutation(backend: &CategoryBackend) -> Result<(usize, Vec<EvenPermFailure>), GraphError> {
    let mut checked = 0;
    let mut failures = Vec::new();
    for labels in admissible_labelings(backend) {
        for sign in [Sign::Plus, Sign::Minus] {
            for basis in all_bases(&backend.face_dims(&labels, sign)) {
                checked += 1;
                if let Some(f) = check_even_permutation(backend, &TetLabel { labels, sign, basis })? {
                    failures.push(f);
                }
            }
        }
    }
    Ok((checked, failures))
}

/// Memoized tetrahedron evaluation keyed by the even-permutation-canonical label.
pub struct TetEvaluator<'a> {
    backend: &'a CategoryBackend,
    cache: DashMap<TetLabel, Scalar>,
    hits: AtomicUsize,
    misses: AtomicUsize,
}

impl<'a> TetEvaluator<'a> {
    pub fn new(backend: &'a CategoryBackend) -> Self {
        TetEvaluator { backend, cache: DashMap::new(), hits: AtomicUsize::new(0), misses: AtomicUsize::new(0) }
    }

    pub fn backend(&self) -> &'a CategoryBackend {
        self.backend
    }

    pub fn eval(&self, label: &TetLabel) -> Result<Scalar, GraphError> {
        let key = label.canonical(self.backend);
        if let Some(v) = self.cache.get(&key) {
            self.hits.fetch_add(1, Ordering::Relaxed);
            return Ok(v.clone());
        }
        self.misses.fetch_add(1, Ordering::Relaxed);
        let v = super::eval_tet(self.backend, &key)?;
        self.cache.insert(key, v.clone());
        Ok(v)
    }

    pub fn hits(&self) -> usize {
        self.hits.load(Ordering::Relaxed)
    }

    pub fn misses(&self) -> usize {
        self.misses.load(Ordering::Relaxed)
    }
}
