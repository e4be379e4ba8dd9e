//! The state sum: states of an H-triangulation, their weights, the contraction of
//! tetrahedral tensors against face copairings, and the invariant itself.

mod network;

use std::collections::HashMap;
use std::sync::Mutex;

use dashmap::DashMap;
use rayon::prelude::*;
use thiserror::Error;

use crate::catdata::{CatError, CategoryBackend, Triple};
use crate::gcore::{Matrix, Scalar};
use crate::graphval::{GraphError, TetEvaluator, TetLabel};
use crate::tricomplex::{HTriangulation, EDGE_PAIRS};

use network::{contract_face, contraction_size, Tensor};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StateError {
    #[error("edge {0} carries a degree in the bad set")]
    DegreeInBadSet(usize),
    #[error("inadmissible state: {0}")]
    InadmissibleState(String),
    #[error("triangulation and backend use different groups")]
    GroupMismatch,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Cat(#[from] CatError),
}

/// A simple object on every quotient edge, read along the edge's own orientation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct State {
    colors: Vec<usize>,
}

impl State {
    pub fn new(colors: Vec<usize>) -> State {
        State { colors }
    }

    pub fn colors(&self) -> &[usize] {
        &self.colors
    }

    pub fn color(&self, e: usize) -> usize {
        self.colors[e]
    }

    /// Color of `e` read forwards or backwards.
    pub fn oriented(&self, backend: &CategoryBackend, e: usize, forward: bool) -> usize {
        if forward {
            self.colors[e]
        } else {
            backend.star(self.colors[e])
        }
    }

    /// Color of the local edge `x → y` of tetrahedron `t`.
    pub fn local(&self, h: &HTriangulation, backend: &CategoryBackend, t: usize, x: usize, y: usize) -> usize {
        let (e, fwd) = h.complex().local_edge(t, x, y);
        self.oriented(backend, e, fwd)
    }

    /// Checks `φ(e) ∈ I_{Φ(e)}` and that every face is admissible.
    pub fn check(&self, h: &HTriangulation, backend: &CategoryBackend) -> Result<(), StateError> {
        let c = h.complex();
        if self.colors.len() != c.n_edges() {
            return Err(StateError::InadmissibleState(format!("{} colors for {} edges", self.colors.len(), c.n_edges())));
        }
        for (e, &i) in self.colors.iter().enumerate() {
            if i >= backend.n_simples() || backend.degree(i) != h.phi()[e] {
                return Err(StateError::InadmissibleState(format!("edge {e}")));
            }
        }
        for f in 0..c.n_faces() {
            if backend.n(face_triple(h, backend, self, f, 0)) == 0 {
                return Err(StateError::InadmissibleState(format!("face {f}")));
            }
        }
        Ok(())
    }
}

fn check_group(h: &HTriangulation, backend: &CategoryBackend) -> Result<(), StateError> {
    if **h.group() != **backend.group() {
        return Err(StateError::GroupMismatch);
    }
    if let Some(e) = h.phi().iter().position(|&g| backend.in_badset(g)) {
        return Err(StateError::DegreeInBadSet(e));
    }
    Ok(())
}

/// Triple of the face as seen from `side` (0 or 1) of its gluing.
fn face_triple(h: &HTriangulation, backend: &CategoryBackend, s: &State, face: usize, side: usize) -> Triple {
    let (t, k) = h.complex().face_sides(face)[side];
    let [p, q, r] = h.complex().face_cycle(t, k);
    [s.local(h, backend, t, p, q), s.local(h, backend, t, q, r), s.local(h, backend, t, r, p)]
}

fn tet_label(h: &HTriangulation, backend: &CategoryBackend, s: &State, t: usize) -> TetLabel {
    let labels = EDGE_PAIRS.map(|(x, y)| s.local(h, backend, t, x, y));
    TetLabel::new(labels, h.complex().sign(t))
}

/// Calls `f` on every state, in lexicographic order of edge colors.
pub fn for_each_state(
    h: &HTriangulation,
    backend: &CategoryBackend,
    mut f: impl FnMut(&State),
) -> Result<(), StateError> {
    check_group(h, backend)?;
    let c = h.complex();
    let ne = c.n_edges();
    // faces become checkable once their highest edge is colored
    let mut due: Vec<Vec<[(usize, bool); 3]>> = vec![Vec::new(); ne];
    for face in 0..c.n_faces() {
        let (t, k) = c.face_sides(face)[0];
        let [p, q, r] = c.face_cycle(t, k);
        let es = [c.local_edge(t, p, q), c.local_edge(t, q, r), c.local_edge(t, r, p)];
        let last = es.iter().map(|x| x.0).max().expect("three edges");
        due[last].push(es);
    }
    let cands: Vec<&[usize]> = h.phi().iter().map(|&g| backend.simples_of_degree(g)).collect();
    if ne == 0 {
        f(&State::new(Vec::new()));
        return Ok(());
    }
    let mut state = State::new(vec![0; ne]);
    let mut pos = vec![0usize; ne];
    let mut e = 0usize;
    loop {
        if pos[e] < cands[e].len() {
            state.colors[e] = cands[e][pos[e]];
            pos[e] += 1;
            let ok = due[e].iter().all(|es| {
                let t = es.map(|(x, fwd)| state.oriented(backend, x, fwd));
                backend.n(t) > 0
            });
            if !ok {
                continue;
            }
            if e + 1 == ne {
                f(&state);
            } else {
                e += 1;
                pos[e] = 0;
            }
        } else if e == 0 {
            return Ok(());
        } else {
            e -= 1;
        }
    }
}

pub fn enumerate_states(h: &HTriangulation, backend: &CategoryBackend) -> Result<Vec<State>, StateError> {
    let mut out = Vec::new();
    for_each_state(h, backend, |s| out.push(s.clone()))?;
    Ok(out)
}

/// `∏_{e ∈ Γ} b(φ(e)) · ∏_{e ∉ Γ} d(φ(e))`.
pub fn state_weight(h: &HTriangulation, backend: &CategoryBackend, s: &State) -> Scalar {
    let mut w = backend.field().one();
    for (e, &i) in s.colors.iter().enumerate() {
        w *= if h.in_gamma(e) { backend.b(i) } else { backend.d(i) };
    }
    w
}

/// Order in which faces are contracted, and which side of each face supplies the copairing.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionPlan {
    order: Vec<usize>,
    first_side: Vec<usize>,
}

impl ContractionPlan {
    /// Faces in index order, copairings taken from side 0.
    pub fn sequential(h: &HTriangulation) -> ContractionPlan {
        let n = h.complex().n_faces();
        ContractionPlan { order: (0..n).collect(), first_side: vec![0; n] }
    }

    /// Repeatedly contracts the face with the smallest copairing, breaking ties by the
    /// size of the resulting tensor.
    pub fn greedy(h: &HTriangulation, backend: &CategoryBackend, s: &State) -> ContractionPlan {
        let c = h.complex();
        let n = c.n_faces();
        let dims: Vec<usize> = (0..n).map(|f| backend.n(face_triple(h, backend, s, f, 0))).collect();
        let mut tensors: Vec<Tensor> = (0..c.n_tets())
            .map(|t| {
                let legs: Vec<(usize, usize)> = (0..4).map(|k| slot_leg(h, t, k)).collect();
                let d = legs.iter().map(|l| dims[l.0]).collect();
                Tensor { legs, dims: d, data: Vec::new() }
            })
            .collect();
        let mut left: Vec<usize> = (0..n).collect();
        let mut order = Vec::with_capacity(n);
        while !left.is_empty() {
            let (i, _) = left
                .iter()
                .enumerate()
                .min_by_key(|&(_, &f)| (dims[f], contraction_size(&tensors, f), f))
                .expect("non-empty");
            let f = left.remove(i);
            shape_contract(&mut tensors, f);
            order.push(f);
        }
        ContractionPlan { order, first_side: vec![0; n] }
    }

    /// The same schedule with every face read from the other side.
    pub fn flipped(&self) -> ContractionPlan {
        ContractionPlan { order: self.order.clone(), first_side: self.first_side.iter().map(|s| 1 - s).collect() }
    }

    pub fn reversed(&self) -> ContractionPlan {
        ContractionPlan { order: self.order.iter().rev().copied().collect(), first_side: self.first_side.clone() }
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    /// Every face exactly once.
    pub fn is_valid_for(&self, h: &HTriangulation) -> bool {
        let n = h.complex().n_faces();
        let mut seen = vec![false; n];
        self.first_side.len() == n
            && self.order.len() == n
            && self.order.iter().all(|&f| f < n && !std::mem::replace(&mut seen[f], true))
    }
}

fn slot_leg(h: &HTriangulation, t: usize, k: usize) -> (usize, usize) {
    let face = h.complex().face_index(t, k);
    let side = if h.complex().face_sides(face)[0] == (t, k) { 0 } else { 1 };
    (face, side)
}

// Shape-only contraction used for planning.
fn shape_contract(tensors: &mut Vec<Tensor>, face: usize) {
    let find = |tensors: &[Tensor], side: usize| {
        tensors.iter().position(|t| t.legs.contains(&(face, side))).expect("face slot present")
    };
    let (a, b) = (find(tensors, 0), find(tensors, 1));
    let keep = |t: &Tensor| -> (Vec<(usize, usize)>, Vec<usize>) {
        t.legs.iter().zip(&t.dims).filter(|(l, _)| l.0 != face).map(|(l, d)| (*l, *d)).unzip()
    };
    if a == b {
        let (legs, dims) = keep(&tensors[a]);
        tensors[a] = Tensor { legs, dims, data: Vec::new() };
    } else {
        let (mut legs, mut dims) = keep(&tensors[a]);
        let (l2, d2) = keep(&tensors[b]);
        legs.extend(l2);
        dims.extend(d2);
        tensors.remove(a.max(b));
        tensors.remove(a.min(b));
        tensors.push(Tensor { legs, dims, data: Vec::new() });
    }
}

fn face_omega(h: &HTriangulation, backend: &CategoryBackend, s: &State, face: usize, first: usize) -> Result<Matrix, StateError> {
    let t = face_triple(h, backend, s, face, first);
    if backend.n(t) == 0 {
        return Err(StateError::InadmissibleState(format!("face {face}")));
    }
    let c = backend.copairing(t)?;
    // rows index side 0, columns side 1
    Ok(if first == 0 { c.transpose() } else { c })
}

fn tet_tensor(h: &HTriangulation, tets: &TetEvaluator, s: &State, t: usize) -> Result<Tensor, StateError> {
    let backend = tets.backend();
    let label = tet_label(h, backend, s, t);
    let dims = backend.face_dims(&label.labels, label.sign);
    if dims.contains(&0) {
        return Err(StateError::InadmissibleState(format!("tetrahedron {t}")));
    }
    let total: usize = dims.iter().product();
    let mut data = Vec::with_capacity(total);
    for mut k in 0..total {
        let mut basis = [0; 4];
        for i in (0..4).rev() {
            basis[i] = k % dims[i];
            k /= dims[i];
        }
        data.push(tets.eval(&TetLabel { basis, ..label })?);
    }
    let legs = (0..4).map(|k| slot_leg(h, t, k)).collect();
    Ok(Tensor { legs, dims: dims.to_vec(), data })
}

/// Contracts the tetrahedral tensors of `s` along `plan`.
pub fn contract_state_with(
    h: &HTriangulation,
    tets: &TetEvaluator,
    s: &State,
    plan: &ContractionPlan,
) -> Result<Scalar, StateError> {
    let backend = tets.backend();
    if !plan.is_valid_for(h) {
        return Err(StateError::InadmissibleState("contraction plan does not cover every face once".into()));
    }
    let mut tensors = (0..h.complex().n_tets()).map(|t| tet_tensor(h, tets, s, t)).collect::<Result<Vec<_>, _>>()?;
    for &f in &plan.order {
        let omega = face_omega(h, backend, s, f, plan.first_side[f])?;
        contract_face(&mut tensors, f, &omega);
    }
    let mut out = backend.field().one();
    for t in &tensors {
        out *= &t.data[0];
    }
    Ok(out)
}

/// Contraction with the greedy plan and a fresh tetrahedron cache.
pub fn contract_state(h: &HTriangulation, backend: &CategoryBackend, s: &State) -> Result<Scalar, StateError> {
    let tets = TetEvaluator::new(backend);
    contract_state_with(h, &tets, s, &ContractionPlan::greedy(h, backend, s))
}

#[derive(Clone, Debug)]
pub struct TvReport {
    pub value: Scalar,
    pub states: usize,
    /// distinct factor multisets (scalar networks only)
    pub terms: usize,
    pub cache_hits: usize,
    pub cache_misses: usize,
}

pub fn tv_invariant(h: &HTriangulation, backend: &CategoryBackend) -> Result<Scalar, StateError> {
    Ok(tv_report(h, &TetEvaluator::new(backend))?.value)
}

/// The invariant with run statistics. Backends whose multiplicity spaces are all
/// at most one-dimensional take the scalar route, everything else goes through
/// the greedy tensor contraction.
pub fn tv_report(h: &HTriangulation, tets: &TetEvaluator) -> Result<TvReport, StateError> {
    let backend = tets.backend();
    let scalar = backend.admissible_triples().iter().all(|&t| backend.n(t) <= 1);
    if scalar {
        tv_scalar(h, tets)
    } else {
        tv_general(h, tets)
    }
}

/// Σ over states through the general tensor-network contraction.
pub fn tv_general(h: &HTriangulation, tets: &TetEvaluator) -> Result<TvReport, StateError> {
    let backend = tets.backend();
    let states = enumerate_states(h, backend)?;
    let terms: Vec<Scalar> = states
        .par_iter()
        .map(|s| {
            let plan = ContractionPlan::greedy(h, backend, s);
            Ok(state_weight(h, backend, s) * contract_state_with(h, tets, s, &plan)?)
        })
        .collect::<Result<_, StateError>>()?;
    let mut value = backend.field().zero();
    for t in &terms {
        value += t;
    }
    Ok(TvReport { value, states: states.len(), terms: terms.len(), cache_hits: tets.hits(), cache_misses: tets.misses() })
}

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
enum Factor {
    Weight(usize, bool),
    Tet(TetLabel),
    Face(Triple),
}

struct Atoms<'a> {
    tets: &'a TetEvaluator<'a>,
    ids: DashMap<Factor, Option<u32>>,
    values: Mutex<(Vec<Scalar>, HashMap<Scalar, u32>)>,
}

impl Atoms<'_> {
    // None for a vanishing factor
    fn id(&self, f: Factor) -> Result<Option<u32>, StateError> {
        if let Some(v) = self.ids.get(&f) {
            return Ok(*v);
        }
        let b = self.tets.backend();
        let v = match f {
            Factor::Weight(i, true) => b.b(i).clone(),
            Factor::Weight(i, false) => b.d(i).clone(),
            Factor::Tet(l) => self.tets.eval(&l)?,
            Factor::Face(t) => b.copairing(t)?.get(0, 0).clone(),
        };
        let id = if v.is_zero() {
            None
        } else {
            let mut g = self.values.lock().expect("atom table");
            let (vals, index) = &mut *g;
            Some(*index.entry(v.clone()).or_insert_with(|| {
                vals.push(v);
                (vals.len() - 1) as u32
            }))
        };
        self.ids.insert(f, id);
        Ok(id)
    }
}

/// Σ over states for scalar networks: each state is a product of weights, tetrahedra
/// and 1×1 copairings, so states are bucketed by their multiset of factor values
/// and each distinct monomial is evaluated once.
pub fn tv_scalar(h: &HTriangulation, tets: &TetEvaluator) -> Result<TvReport, StateError> {
    let backend = tets.backend();
    let c = h.complex();
    let states = enumerate_states(h, backend)?;
    let atoms = Atoms { tets, ids: DashMap::new(), values: Mutex::new((Vec::new(), HashMap::new())) };
    let key_of = |s: &State| -> Result<Option<Vec<u32>>, StateError> {
        let mut key = Vec::with_capacity(c.n_edges() + c.n_tets() + c.n_faces());
        let factors = s
            .colors
            .iter()
            .enumerate()
            .map(|(e, &i)| Factor::Weight(i, h.in_gamma(e)))
            .chain((0..c.n_tets()).map(|t| Factor::Tet(tet_label(h, backend, s, t))))
            .chain((0..c.n_faces()).map(|f| Factor::Face(face_triple(h, backend, s, f, 0))));
        for f in factors {
            match atoms.id(f)? {
                Some(id) => key.push(id),
                None => return Ok(None),
            }
        }
        key.sort_unstable();
        Ok(Some(key))
    };
    let buckets = states
        .par_iter()
        .try_fold(HashMap::<Vec<u32>, u64>::new, |mut m, s| {
            if let Some(k) = key_of(s)? {
                *m.entry(k).or_default() += 1;
            }
            Ok::<_, StateError>(m)
        })
        .try_reduce(HashMap::new, |mut a, b| {
            for (k, n) in b {
                *a.entry(k).or_default() += n;
            }
            Ok(a)
        })?;
    let values = atoms.values.into_inner().expect("atom table").0;
    let mut keys: Vec<(&Vec<u32>, &u64)> = buckets.iter().collect();
    keys.sort();
    let f = backend.field();
    let mut value = f.zero();
    for (k, &n) in keys {
        let mut term = f.int(n as i64);
        for &a in k {
            term *= &values[a as usize];
        }
        value += &term;
    }
    Ok(TvReport { value, states: states.len(), terms: buckets.len(), cache_hits: tets.hits(), cache_misses: tets.misses() })
}
