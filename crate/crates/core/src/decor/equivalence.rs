//! Words in gauge and restriction cylinders, and their normal forms.
//!
//! Words are read in application order: the first generator acts first.
//! A decoration is a base set `Y` together with a representation class in
//! `Rep(Σ, Y)`, stored as a full representation in canonical gauge relative to `Y`.

use std::collections::BTreeSet;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::gcore::{gauge_compose, Element, FiniteGroup, GaugeFunction};

use super::rep::{gauge_act, gauge_fix, restrict_rep, GroupoidRep};
use super::DecorError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decoration {
    base: BTreeSet<usize>,
    rep: GroupoidRep,
}

impl Decoration {
    pub fn new(rep: &GroupoidRep, base: BTreeSet<usize>) -> Result<Decoration, DecorError> {
        let (fixed, _, _) = gauge_fix(rep, &base)?;
        Ok(Decoration { base, rep: fixed })
    }
    pub fn base(&self) -> &BTreeSet<usize> {
        &self.base
    }
    pub fn rep(&self) -> &GroupoidRep {
        &self.rep
    }
    /// The class of the same representation relative to a smaller or different base set.
    pub fn rebase(&self, base: &BTreeSet<usize>) -> Result<Decoration, DecorError> {
        Decoration::new(&self.rep, base.clone())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Generator {
    /// `J_φ` with `φ` defined on the current base set.
    Gauge(GaugeFunction),
    /// `R(Y1, Y2, ρ)` with `ρ` canonical relative to `Y1 ∪ Y2`.
    Restrict { from: BTreeSet<usize>, to: BTreeSet<usize>, rho: GroupoidRep },
}

impl Generator {
    pub fn restrict(from: BTreeSet<usize>, to: BTreeSet<usize>, rho: &GroupoidRep) -> Result<Generator, DecorError> {
        let union: BTreeSet<usize> = from.union(&to).copied().collect();
        let (fixed, _, _) = gauge_fix(rho, &union)?;
        Ok(Generator::Restrict { from, to, rho: fixed })
    }
}

fn fmt_set(s: &BTreeSet<usize>) -> String {
    let v: Vec<String> = s.iter().map(|x| x.to_string()).collect();
    format!("{{{}}}", v.join(","))
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Gauge(phi) => {
                let v: Vec<String> = phi.iter().map(|(y, g)| format!("{y}:{g}")).collect();
                write!(f, "J[{}]", v.join(","))
            }
            Generator::Restrict { from, to, rho } => {
                let l: Vec<String> = rho.forward_labels().iter().map(|g| g.to_string()).collect();
                write!(f, "R({},{},[{}])", fmt_set(from), fmt_set(to), l.join(","))
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EquivalenceWord {
    source: Decoration,
    gens: Vec<Generator>,
}

impl EquivalenceWord {
    pub fn new(source: Decoration, gens: Vec<Generator>) -> Result<EquivalenceWord, DecorError> {
        let w = EquivalenceWord { source, gens };
        w.target()?;
        Ok(w)
    }

    pub fn source(&self) -> &Decoration {
        &self.source
    }
    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    /// Decoration reached after the whole word; fails at the first non-composable generator.
    pub fn target(&self) -> Result<Decoration, DecorError> {
        let mut d = self.source.clone();
        for (i, g) in self.gens.iter().enumerate() {
            d = step(&d, g).ok_or(DecorError::NotComposable(i))?;
        }
        Ok(d)
    }
}

fn full_gauge(phi: &GaugeFunction, rho: &GroupoidRep) -> GaugeFunction {
    phi.extend(rho.group(), 0..rho.surface().n_vertices())
}

fn step(d: &Decoration, g: &Generator) -> Option<Decoration> {
    match g {
        Generator::Gauge(phi) => {
            if !phi.domain().eq(d.base.iter().copied()) {
                return None;
            }
            let moved = gauge_act(&full_gauge(phi, &d.rep), &d.rep).ok()?;
            Decoration::new(&moved, d.base.clone()).ok()
        }
        Generator::Restrict { from, to, rho } => {
            if from != &d.base || !rho.same_surface(&d.rep) {
                return None;
            }
            let src = Decoration::new(rho, from.clone()).ok()?;
            if src != *d {
                return None;
            }
            Decoration::new(rho, to.clone()).ok()
        }
    }
}

/// The unique factorization `J_φ ∘ R(from, to, ρ)`: restriction first, then gauge.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormalForm {
    pub source: Decoration,
    pub from: BTreeSet<usize>,
    pub to: BTreeSet<usize>,
    /// Canonical relative to `from ∪ to`.
    pub rho: GroupoidRep,
    /// Defined on `to`, supported in `from ∩ to`.
    pub phi: GaugeFunction,
}

impl NormalForm {
    pub fn to_word(&self) -> EquivalenceWord {
        let mut gens = Vec::new();
        if self.from != self.to {
            gens.push(Generator::Restrict { from: self.from.clone(), to: self.to.clone(), rho: self.rho.clone() });
        }
        if !self.phi.is_identity(self.rho.group()) {
            gens.push(Generator::Gauge(self.phi.clone()));
        }
        EquivalenceWord { source: self.source.clone(), gens }
    }
}

impl fmt::Display for NormalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = Generator::Restrict { from: self.from.clone(), to: self.to.clone(), rho: self.rho.clone() };
        write!(f, "{} ∘ {}", Generator::Gauge(self.phi.clone()), r)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Leftmost,
    Rightmost,
    Random(u64),
}

/// Gauge χ, trivial on `base`, with `target = χ.source` (both full representations).
fn relating_gauge(source: &GroupoidRep, target: &GroupoidRep, base: &BTreeSet<usize>) -> Vec<Element> {
    let s = source.surface();
    let g = source.group();
    let roots: Vec<usize> = base.iter().copied().collect();
    let forest = s.bfs_forest(&roots);
    (0..s.n_vertices())
        .map(|v| {
            let p = s.forest_path(&forest, v);
            let a = source.path_value(&p).unwrap();
            let b = target.path_value(&p).unwrap();
            g.mul(g.inv(b), a)
        })
        .collect()
}

fn gauge_from_vec(values: Vec<Element>) -> GaugeFunction {
    GaugeFunction::new(values.into_iter().enumerate().collect())
}

fn canon(rho: &GroupoidRep, base: &BTreeSet<usize>) -> GroupoidRep {
    gauge_fix(rho, base).expect("base meets every component").0
}

/// Try the rules at position `i`; returns the replaced span length and replacement.
fn rewrite_at(group: &FiniteGroup, w: &[Generator], i: usize) -> Option<(usize, Vec<Generator>)> {
    match &w[i] {
        Generator::Gauge(phi) if phi.is_identity(group) => return Some((1, vec![])),
        Generator::Restrict { from, to, .. } if from == to => return Some((1, vec![])),
        _ => {}
    }
    let next = w.get(i + 1)?;
    match (&w[i], next) {
        (Generator::Gauge(a), Generator::Gauge(b)) => {
            let ba = gauge_compose(group, b, a).ok()?;
            Some((2, vec![Generator::Gauge(ba)]))
        }
        (Generator::Gauge(phi), Generator::Restrict { from, to, rho }) => {
            let ext = full_gauge(phi, rho);
            let moved = gauge_act(&ext.inverse(group), rho).ok()?;
            let union: BTreeSet<usize> = from.union(to).copied().collect();
            let r = Generator::Restrict { from: from.clone(), to: to.clone(), rho: canon(&moved, &union) };
            let j = Generator::Gauge(GaugeFunction::new(
                to.iter().map(|&y| (y, phi.get_or(y, group.id()))).collect(),
            ));
            Some((2, vec![r, j]))
        }
        (Generator::Restrict { from: y1, to: y2, rho }, Generator::Restrict { to: y3, rho: rho2, .. }) => {
            let chi = relating_gauge(rho, rho2, y2);
            let psi0: Vec<Element> = (0..chi.len())
                .map(|v| if y3.contains(&v) && !y1.contains(&v) { chi[v] } else { group.id() })
                .collect();
            let moved = gauge_act(&gauge_from_vec(psi0), rho).ok()?;
            let union: BTreeSet<usize> = y1.union(y3).copied().collect();
            let psi = GaugeFunction::new(
                y3.iter()
                    .map(|&y| (y, if y1.contains(&y) && !y2.contains(&y) { chi[y] } else { group.id() }))
                    .collect(),
            );
            let r = Generator::Restrict { from: y1.clone(), to: y3.clone(), rho: canon(&moved, &union) };
            Some((2, vec![r, Generator::Gauge(psi)]))
        }
        (Generator::Restrict { from, to, rho }, Generator::Gauge(phi)) => {
            if phi.support(group).iter().all(|y| from.contains(y)) {
                return None;
            }
            let out: Vec<Element> = (0..rho.surface().n_vertices())
                .map(|v| if to.contains(&v) && !from.contains(&v) { phi.get_or(v, group.id()) } else { group.id() })
                .collect();
            let moved = gauge_act(&gauge_from_vec(out), rho).ok()?;
            let union: BTreeSet<usize> = from.union(to).copied().collect();
            let inner = GaugeFunction::new(
                phi.iter().map(|(y, g)| (y, if from.contains(&y) { g } else { group.id() })).collect(),
            );
            let r = Generator::Restrict { from: from.clone(), to: to.clone(), rho: canon(&moved, &union) };
            Some((2, vec![r, Generator::Gauge(inner)]))
        }
    }
}

/// Normal form by leftmost rewriting.
pub fn normal_form(w: &EquivalenceWord) -> Result<NormalForm, DecorError> {
    normal_form_with(w, Strategy::Leftmost).map(|(nf, _)| nf)
}

/// Rewrite to normal form with the given redex selection; also returns the number of steps.
pub fn normal_form_with(w: &EquivalenceWord, strategy: Strategy) -> Result<(NormalForm, usize), DecorError> {
    w.target()?;
    let group = w.source.rep.group().clone();
    let mut rng = match strategy {
        Strategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    let mut word = w.gens.clone();
    let mut steps = 0;
    loop {
        let redexes: Vec<(usize, (usize, Vec<Generator>))> =
            (0..word.len()).filter_map(|i| rewrite_at(&group, &word, i).map(|r| (i, r))).collect();
        if redexes.is_empty() {
            break;
        }
        let pick = match (&mut rng, strategy) {
            (Some(r), _) => r.gen_range(0..redexes.len()),
            (None, Strategy::Rightmost) => redexes.len() - 1,
            _ => 0,
        };
        let (i, (len, repl)) = redexes.into_iter().nth(pick).unwrap();
        word.splice(i..i + len, repl);
        steps += 1;
    }
    let base = w.source.base.clone();
    let ident = |on: &BTreeSet<usize>| GaugeFunction::identity(&group, on.iter().copied());
    let nf = match word.as_slice() {
        [] => NormalForm {
            source: w.source.clone(),
            from: base.clone(),
            to: base.clone(),
            rho: w.source.rep.clone(),
            phi: ident(&base),
        },
        [Generator::Gauge(phi)] => NormalForm {
            source: w.source.clone(),
            from: base.clone(),
            to: base.clone(),
            rho: w.source.rep.clone(),
            phi: phi.clone(),
        },
        [Generator::Restrict { from, to, rho }] => NormalForm {
            source: w.source.clone(),
            from: from.clone(),
            to: to.clone(),
            rho: rho.clone(),
            phi: ident(to),
        },
        [Generator::Restrict { from, to, rho }, Generator::Gauge(phi)] => NormalForm {
            source: w.source.clone(),
            from: from.clone(),
            to: to.clone(),
            rho: rho.clone(),
            phi: phi.clone(),
        },
        other => unreachable!("irreducible word of unexpected shape: {}", other.len()),
    };
    Ok((nf, steps))
}

/// A decorated cylinder `Σ × [0,1]`: a full representation on the bottom and the
/// values of the vertical paths `y×0 → y×1` for every vertex.
#[derive(Clone, Debug)]
pub struct Cylinder {
    pub from: BTreeSet<usize>,
    pub to: BTreeSet<usize>,
    pub bottom: GroupoidRep,
    pub vertical: Vec<Element>,
}

impl Cylinder {
    fn top(&self) -> GroupoidRep {
        let g = self.bottom.group();
        let v: Vec<Element> = self.vertical.iter().map(|&x| g.inv(x)).collect();
        gauge_act(&gauge_from_vec(v), &self.bottom).expect("full gauge")
    }

    /// Stack `next` on top of `self`.
    fn then(&self, next: &Cylinder) -> Cylinder {
        let g = self.bottom.group();
        let top = self.top();
        let chi = relating_gauge(&top, &next.bottom, &self.to);
        let vertical = (0..self.vertical.len())
            .map(|y| g.mul3(self.vertical[y], g.inv(chi[y]), next.vertical[y]))
            .collect();
        Cylinder { from: self.from.clone(), to: next.to.clone(), bottom: self.bottom.clone(), vertical }
    }

    /// Invariants of the cylinder rel its base points: the bottom class (as the
    /// contracted representation on the source base) and, for every source point `s`
    /// and target point `t` in one component, the transport along bottom tree path then up.
    pub fn signature(&self) -> (Vec<Element>, Vec<((usize, usize), Element)>) {
        let s = self.bottom.surface();
        let g = self.bottom.group();
        let bottom = restrict_rep(&self.bottom, &self.from).expect("source base meets every component");
        let mut transports = Vec::new();
        for &a in &self.from {
            let forest = s.bfs_forest(&[a]);
            for &b in &self.to {
                if s.component_of(a) != s.component_of(b) {
                    continue;
                }
                let p = s.forest_path(&forest, b);
                transports.push(((a, b), g.mul(self.bottom.path_value(&p).unwrap(), self.vertical[b])));
            }
        }
        (bottom.rep.forward_labels().to_vec(), transports)
    }
}

/// Evaluate a word directly as a stack of cylinders, tracking the decoration with
/// `gauge_act` and comparing classes with `restrict_rep`.
pub fn evaluate_word(w: &EquivalenceWord) -> Result<Cylinder, DecorError> {
    let g = w.source.rep.group().clone();
    let n = w.source.rep.surface().n_vertices();
    let mut cyl = Cylinder {
        from: w.source.base.clone(),
        to: w.source.base.clone(),
        bottom: w.source.rep.clone(),
        vertical: vec![g.id(); n],
    };
    let mut current = w.source.rep.clone();
    for (i, gen) in w.gens.iter().enumerate() {
        let layer = match gen {
            Generator::Gauge(phi) => {
                let ext = full_gauge(phi, &current);
                let vertical = (0..n).map(|y| g.inv(ext.get(y).unwrap())).collect();
                let layer =
                    Cylinder { from: cyl.to.clone(), to: cyl.to.clone(), bottom: current.clone(), vertical };
                current = gauge_act(&ext, &current)?;
                layer
            }
            Generator::Restrict { from, to, rho } => {
                let here = restrict_rep(&current, from)?;
                let there = restrict_rep(rho, from)?;
                if from != &cyl.to || here.rep != there.rep {
                    return Err(DecorError::NotComposable(i));
                }
                current = rho.clone();
                Cylinder { from: from.clone(), to: to.clone(), bottom: rho.clone(), vertical: vec![g.id(); n] }
            }
        };
        cyl = cyl.then(&layer);
    }
    Ok(cyl)
}

/// Random composable word of `len` generators starting from `source`.
pub fn random_word<R: Rng>(source: &Decoration, len: usize, rng: &mut R) -> EquivalenceWord {
    let rep = source.rep();
    let g = rep.group().clone();
    let n = rep.surface().n_vertices();
    let mut d = source.clone();
    let mut gens = Vec::new();
    for _ in 0..len {
        let gen = if rng.gen_bool(0.5) {
            let phi = GaugeFunction::new(
                d.base
                    .iter()
                    .map(|&y| (y, if rng.gen_bool(0.2) { g.id() } else { Element(rng.gen_range(0..g.order() as u32)) }))
                    .collect(),
            );
            Generator::Gauge(phi)
        } else {
            let to = random_base(n, rng);
            // any gauge off the current base keeps the source class
            let shift = (0..n)
                .map(|v| if d.base.contains(&v) { g.id() } else { Element(rng.gen_range(0..g.order() as u32)) })
                .collect();
            let rho = gauge_act(&gauge_from_vec(shift), &d.rep).expect("full gauge");
            Generator::restrict(d.base.clone(), to, &rho).expect("nonempty base")
        };
        d = step(&d, &gen).expect("composable by construction");
        gens.push(gen);
    }
    EquivalenceWord { source: source.clone(), gens }
}

/// Nonempty random subset of `0..n`.
pub fn random_base<R: Rng>(n: usize, rng: &mut R) -> BTreeSet<usize> {
    loop {
        let s: BTreeSet<usize> = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
        if !s.is_empty() {
            return s;
        }
    }
}
