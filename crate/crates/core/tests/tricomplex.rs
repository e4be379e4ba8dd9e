use std::collections::BTreeSet;
use std::sync::Arc;

use mtv_core::gcore::{Element, FiniteGroup};
use mtv_core::graphval::Sign;
use mtv_core::tricomplex::io::{load_triangulation, triangulation_to_json};
use mtv_core::tricomplex::*;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn z(n: usize) -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::cyclic(n))
}

fn counts(c: &DeltaComplex3) -> [i64; 4] {
    [c.n_vertices() as i64, c.n_edges() as i64, c.n_faces() as i64, c.n_tets() as i64]
}

fn s3(group: Arc<FiniteGroup>, badset: BTreeSet<Element>) -> HTriangulation {
    trivial_h_triangulation(boundary_4simplex(), group, badset).unwrap()
}

#[test]
fn boundary_of_4_simplex() {
    let c = boundary_4simplex();
    assert_eq!(counts(&c), [5, 10, 10, 5]);
    assert_eq!(c.euler_characteristic(), 0);
    assert!(c.quasi_regular());
    assert_eq!(c.n_components(), 1);
    let cycle = hamiltonian_cycle(&c).unwrap();
    assert_eq!(cycle.len(), 5);
    let mut deg = [0; 5];
    for &e in &cycle {
        let (a, b) = c.edge_ends(e);
        deg[a] += 1;
        deg[b] += 1;
    }
    assert_eq!(deg, [2; 5]);
    for e in 0..10 {
        assert_eq!(c.edge_degree(e), 3);
    }
}

#[test]
fn one_vertex_lens_is_not_quasi_regular() {
    let c = one_vertex_lens();
    assert_eq!(c.n_vertices(), 1);
    assert_eq!(c.n_tets(), 1);
    assert_eq!(c.euler_characteristic(), 0);
    assert!(!c.quasi_regular());
    assert_eq!(hamiltonian_cycle(&c), Err(TriError::NotFound));
    let g = z(2);
    let phi = vec![g.id(); c.n_edges()];
    let err = make_h_triangulation(c, BTreeSet::new(), phi, g, BTreeSet::new()).unwrap_err();
    assert!(matches!(err, TriError::NotQuasiRegular(_)));
}

#[test]
fn subdivisions_are_quasi_regular() {
    let c = one_vertex_lens();
    let b1 = barycentric_subdivision(&c);
    assert_eq!(b1.n_tets(), 24);
    assert!(b1.quasi_regular());
    assert_eq!(b1.euler_characteristic(), 0);
    let b2 = barycentric_subdivision(&b1);
    assert_eq!(b2.n_tets(), 576);
    assert!(b2.quasi_regular());
    // V' = V + E + F + T
    assert_eq!(b1.n_vertices(), c.n_vertices() + c.n_edges() + c.n_faces() + c.n_tets());
}

fn all_perms() -> Vec<[usize; 4]> {
    let mut out = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for c in 0..4 {
                for d in 0..4 {
                    let p = [a, b, c, d];
                    if BTreeSet::from(p).len() == 4 {
                        out.push(p);
                    }
                }
            }
        }
    }
    out
}

#[test]
fn one_tetrahedron_census() {
    // closed orientable one-tetrahedron triangulations: two of S³, L(4,1), L(5,2)
    let perms = all_perms();
    let mut classes = BTreeSet::new();
    let mut orientable = 0;
    for (f0, g0, f1, g1) in [(0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2)] {
        for p in perms.iter().filter(|p| p[f0] == g0) {
            for q in perms.iter().filter(|q| q[f1] == g1) {
                let mut gluings = vec![[None; 4]];
                gluings[0][f0] = Some(FaceGluing { tet: 0, face: g0, perm: *p });
                gluings[0][g0] = Some(FaceGluing { tet: 0, face: f0, perm: perm_inverse(p) });
                gluings[0][f1] = Some(FaceGluing { tet: 0, face: g1, perm: *q });
                gluings[0][g1] = Some(FaceGluing { tet: 0, face: f1, perm: perm_inverse(q) });
                if !perm_is_even(p) && !perm_is_even(q) {
                    orientable += 1;
                }
                match validate_complex(&ComplexData { gluings, signs: None }) {
                    Ok(c) => {
                        assert_eq!(c.euler_characteristic(), 0);
                        classes.insert(complex_signature(&c));
                    }
                    Err(e) => assert!(matches!(e, TriError::NotOrientable(_) | TriError::BadLink(_)), "{e:?}"),
                }
            }
        }
    }
    assert_eq!(orientable, 27);
    assert_eq!(classes.len(), 4);
}

#[test]
fn random_two_tetrahedron_gluings_hit_link_errors() {
    let perms = all_perms();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (mut bad_edge, mut bad_vertex, mut non_orientable, mut ok) = (0, 0, 0, 0);
    for _ in 0..3000 {
        let mut slots: Vec<(usize, usize)> = (0..2).flat_map(|t| (0..4).map(move |f| (t, f))).collect();
        let mut gluings = vec![[None; 4]; 2];
        while !slots.is_empty() {
            let (t, f) = slots.swap_remove(rng.gen_range(0..slots.len()));
            let (u, g) = slots.swap_remove(rng.gen_range(0..slots.len()));
            let maps: Vec<&[usize; 4]> = perms.iter().filter(|p| p[f] == g).collect();
            let p = *maps[rng.gen_range(0..maps.len())];
            gluings[t][f] = Some(FaceGluing { tet: u, face: g, perm: p });
            gluings[u][g] = Some(FaceGluing { tet: t, face: f, perm: perm_inverse(&p) });
        }
        match validate_complex(&ComplexData { gluings, signs: None }) {
            Ok(_) => ok += 1,
            Err(TriError::NotOrientable(_)) => non_orientable += 1,
            Err(TriError::BadLink(_)) => bad_edge += 1,
            Err(TriError::BadVertexLink(_)) => bad_vertex += 1,
            Err(e) => panic!("{e:?}"),
        }
    }
    assert!(ok > 0 && bad_edge > 0 && bad_vertex > 0 && non_orientable > 0, "{ok} {bad_edge} {bad_vertex} {non_orientable}");
}

#[test]
fn mismatched_orientations() {
    let c = boundary_4simplex();
    let mut data = c.data();
    let mut signs = data.signs.clone().unwrap();
    signs[0] = signs[0].flip();
    data.signs = Some(signs);
    assert!(matches!(validate_complex(&data), Err(TriError::NotOrientable(_))));
    let mut data = c.data();
    data.gluings[0][0] = None;
    assert!(matches!(validate_complex(&data), Err(TriError::NotClosed(_))));
}

#[test]
fn h_triangulation_conditions() {
    let g = z(2);
    let c = boundary_4simplex();
    let cycle: BTreeSet<usize> = hamiltonian_cycle(&c).unwrap().into_iter().collect();
    // coboundary of the vertex set {0, 3}
    let marked = [true, false, false, true, false];
    let phi: Vec<Element> = (0..c.n_edges())
        .map(|e| {
            let (a, b) = c.edge_ends(e);
            Element((marked[a] != marked[b]) as u32)
        })
        .collect();
    assert!(make_h_triangulation(c.clone(), cycle.clone(), phi.clone(), g.clone(), BTreeSet::new()).is_ok());
    let mut broken = phi.clone();
    broken[0] = Element(1 - broken[0].0);
    assert!(matches!(
        make_h_triangulation(c.clone(), cycle.clone(), broken, g.clone(), BTreeSet::new()),
        Err(TriError::CocycleViolation(_))
    ));
    let one: BTreeSet<usize> = cycle.iter().copied().take(1).collect();
    assert!(matches!(
        make_h_triangulation(c.clone(), one, phi.clone(), g.clone(), BTreeSet::new()),
        Err(TriError::NotHamiltonian(_))
    ));
    // the same coboundary with generator 3 of Z/6 hits the bad set {3}
    let z6 = z(6);
    let phi6: Vec<Element> = phi.iter().map(|x| Element(3 * x.0)).collect();
    let bad: BTreeSet<Element> = [Element(3)].into();
    assert!(matches!(
        make_h_triangulation(c, cycle, phi6, z6, bad),
        Err(TriError::InadmissibleEdge(_))
    ));
}

#[test]
fn gauge_moves() {
    let g = z(2);
    let h = s3(g.clone(), BTreeSet::new());
    let same = gauge_move_phi(&h, 2, g.id()).unwrap();
    assert_eq!(same.phi(), h.phi());
    let moved = gauge_move_phi(&h, 2, Element(1)).unwrap();
    let flipped = (0..10).filter(|&e| moved.phi()[e] != h.phi()[e]).count();
    assert_eq!(flipped, 4);
    let back = gauge_move_phi(&moved, 2, Element(1)).unwrap();
    assert_eq!(back.phi(), h.phi());

    let s = Arc::new(FiniteGroup::symmetric(3));
    let h = s3(s.clone(), BTreeSet::new());
    let x = Element(3);
    let once = gauge_move_phi(&h, 0, x).unwrap();
    assert!(once.phi().iter().any(|&p| p != s.id()));
    assert_eq!(gauge_move_phi(&once, 0, s.inv(x)).unwrap().phi(), h.phi());
}

#[test]
fn two_three_and_back() {
    let h = s3(z(2), BTreeSet::new());
    let h = gauge_move_phi(&h, 1, Element(1)).unwrap();
    let before = counts(h.complex());
    let sig = signature(&h);
    for face in 0..h.complex().n_faces() {
        let m = pachner_23(&h, face).unwrap();
        let after = counts(m.complex());
        assert_eq!([after[0] - before[0], after[1] - before[1], after[2] - before[2], after[3] - before[3]], [0, 1, 2, 1]);
        assert!(m.complex().quasi_regular());
        assert_eq!(m.gamma().len(), h.gamma().len());
        let inverses: Vec<HTriangulation> =
            (0..m.complex().n_edges()).filter_map(|e| pachner_32(&m, e).ok()).collect();
        assert!(inverses.iter().any(|back| signature(back) == sig), "face {face}");
    }
}

#[test]
fn one_four_and_back() {
    let g = z(2);
    let h = gauge_move_phi(&s3(g.clone(), BTreeSet::new()), 0, Element(1)).unwrap();
    let before = counts(h.complex());
    let sig = signature(&h);
    let e = *h.gamma().iter().next().unwrap();
    let (t, _, _) = h.complex().edge_rep(e);
    assert!(matches!(pachner_14(&h, t, None), Err(TriError::HamiltonicityLost(_))));
    let m = pachner_14(&h, t, Some(e)).unwrap();
    let after = counts(m.complex());
    assert_eq!([after[0] - before[0], after[1] - before[1], after[2] - before[2], after[3] - before[3]], [1, 4, 6, 3]);
    assert_eq!(m.complex().n_tets(), 8);
    assert_eq!(m.gamma().len(), h.gamma().len() + 1);
    // Φ(Av) = Φ(AB), Φ(vB) = 1 at the new vertex (the only vertex of degree 4 among new ones)
    let v = m.complex().n_vertices() - 1;
    let at_v = m.complex().edges_at(v);
    assert_eq!(at_v.len(), 4);
    let gamma_at_v: Vec<usize> = at_v.iter().copied().filter(|&e| m.in_gamma(e)).collect();
    assert_eq!(gamma_at_v.len(), 2);
    let into_v: Vec<Element> = gamma_at_v
        .iter()
        .map(|&e| {
            let (_, head) = m.complex().edge_ends(e);
            if head == v { m.phi()[e] } else { g.inv(m.phi()[e]) }
        })
        .collect();
    assert!(into_v.contains(&h.phi()[e]) || into_v.contains(&g.inv(h.phi()[e])));
    let back = pachner_41(&m, v).unwrap();
    assert_eq!(signature(&back), sig);
}

#[test]
fn move_guards() {
    let h = s3(z(2), BTreeSet::new());
    // every edge of ∂Δ⁴ has degree 3 but Γ edges are refused
    let e = *h.gamma().iter().next().unwrap();
    assert!(matches!(pachner_32(&h, e), Err(TriError::GuardFailed(_))));
    let m = pachner_23(&h, 0).unwrap();
    let high = (0..m.complex().n_edges()).find(|&e| m.complex().edge_degree(e) != 3 && !m.in_gamma(e)).unwrap();
    assert!(matches!(pachner_32(&m, high), Err(TriError::GuardFailed(_))));
    // 1-4 with an edge not in Γ
    let off = (0..10).find(|e| !h.in_gamma(*e)).unwrap();
    let (t, _, _) = h.complex().edge_rep(off);
    assert!(matches!(pachner_14(&h, t, Some(off)), Err(TriError::GuardFailed(_))));
    // vertices of ∂Δ⁴ have degree 4: 4-1 leaves the two-tetrahedron sphere
    let small = pachner_41(&h, 0).unwrap();
    assert_eq!(counts(small.complex()), [4, 6, 4, 2]);
    assert!(matches!(pachner_41(&small, 0), Err(TriError::GuardFailed(_))));
}

#[test]
fn json_round_trip() {
    let g = z(2);
    let h = gauge_move_phi(&s3(g.clone(), BTreeSet::new()), 4, Element(1)).unwrap();
    let e = *h.gamma().iter().next().unwrap();
    let h = pachner_14(&h, h.complex().edge_rep(e).0, Some(e)).unwrap();
    let doc = triangulation_to_json(&h).to_string();
    let back = load_triangulation(&doc, g.clone(), BTreeSet::new()).unwrap();
    assert_eq!(signature(&back), signature(&h));

    let labelled = r#"{"tets": [[0,1,2,3],[0,1,2,4],[0,1,3,4],[0,2,3,4],[1,2,3,4]],
        "gamma": [[0,1],[1,2],[2,3],[3,4],[4,0]],
        "phi": [{"edge": [0,1], "g": "1"}, {"edge": [0,2], "g": "1"}, {"edge": [0,3], "g": "1"}, {"edge": [4,0], "g": "1"}]}"#;
    let h = load_triangulation(labelled, g.clone(), BTreeSet::new()).unwrap();
    assert_eq!(h.phi().iter().filter(|p| p.0 == 1).count(), 4);
    let bad = labelled.replace(r#"{"edge": [4,0], "g": "1"}"#, r#"{"edge": [4,0], "g": "0"}"#);
    assert!(matches!(load_triangulation(&bad, g.clone(), BTreeSet::new()), Err(TriError::CocycleViolation(_))));
    assert!(matches!(load_triangulation("{\"tets\": 3}", g, BTreeSet::new()), Err(TriError::Schema(_))));
}

/// A random guarded move; `None` when the sampled move was refused.
fn random_move(h: &HTriangulation, rng: &mut ChaCha8Rng, max_tets: usize) -> Option<HTriangulation> {
    let c = h.complex();
    let kind = rng.gen_range(0..5);
    let mv = match kind {
        0 if c.n_tets() < max_tets => Move::P23 { face: rng.gen_range(0..c.n_faces()) },
        1 => Move::P32 { edge: rng.gen_range(0..c.n_edges()) },
        2 if c.n_tets() + 3 <= max_tets => {
            let e = *h.gamma().iter().nth(rng.gen_range(0..h.gamma().len())).unwrap();
            Move::P14 { tet: c.edge_corners(e)[0].0, reroute: Some(e) }
        }
        3 => Move::P41 { vertex: rng.gen_range(0..c.n_vertices()) },
        _ => Move::Gauge { vertex: rng.gen_range(0..c.n_vertices()), g: Element(rng.gen_range(0..h.group().order() as u32)) },
    };
    match mv.apply(h) {
        Ok(m) => Some(m),
        Err(TriError::GuardFailed(_)) | Err(TriError::HamiltonicityLost(_)) | Err(TriError::InadmissibleEdge(_)) => None,
        Err(e) => panic!("{mv}: unexpected {e}"),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn random_moves_stay_valid(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = Arc::new(FiniteGroup::symmetric(3));
        let mut h = s3(s, BTreeSet::new());
        for _ in 0..30 {
            if let Some(m) = random_move(&h, &mut rng, 14) {
                let c = m.complex();
                prop_assert!(c.quasi_regular());
                prop_assert_eq!(c.euler_characteristic(), 0);
                prop_assert_eq!(c.n_faces(), 2 * c.n_tets());
                let revalidated = validate_complex(&c.data()).unwrap();
                prop_assert_eq!(counts(&revalidated), counts(c));
                prop_assert!(make_h_triangulation(revalidated, m.gamma().clone(), m.phi().to_vec(), m.group().clone(), m.badset().clone()).is_ok());
                h = m;
            }
        }
    }

    #[test]
    fn relative_gauges_stay_admissible(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let bad: BTreeSet<Element> = [Element(3)].into();
        let mut h = s3(z(6), bad);
        for _ in 0..20 {
            let v = rng.gen_range(0..5);
            let g = Element(rng.gen_range(0..6));
            if let Ok(m) = gauge_move_phi(&h, v, g) {
                prop_assert!(m.phi().iter().all(|p| p.0 != 3));
                h = m;
            }
        }
    }
}

#[test]
fn signs_are_coherent() {
    let c = boundary_4simplex();
    let plus = c.signs().iter().filter(|s| **s == Sign::Plus).count();
    assert_eq!(plus, 3);
}
