use std::collections::BTreeSet;
use std::path::PathBuf;
use std::sync::Arc;

use mtv_core::catdata::{load_backend_file, CategoryBackend, LoadMode};
use mtv_core::gcore::{Element, FiniteGroup, Scalar};
use mtv_core::graphval::TetEvaluator;
use mtv_core::statesum::*;
use mtv_core::tricomplex::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn backend(name: &str) -> CategoryBackend {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/backends").join(name);
    load_backend_file(&p, LoadMode::Strict).unwrap()
}

fn s3(b: &CategoryBackend) -> HTriangulation {
    trivial_h_triangulation(boundary_4simplex(), b.group().clone(), BTreeSet::new()).unwrap()
}

fn golden(b: &CategoryBackend) -> Scalar {
    b.field().from_i64_coeffs(&[0, 0, -1, -1], 1)
}

#[test]
fn pointed_backends_collapse_to_one() {
    for name in ["vec_z2.json", "vec_s3.json"] {
        let b = backend(name);
        let mut h = s3(&b);
        let one = b.field().one();
        assert_eq!(enumerate_states(&h, &b).unwrap().len(), 1);
        assert_eq!(tv_invariant(&h, &b).unwrap(), one);
        for (v, g) in [(0, 1), (3, 1), (2, b.group().order() - 1)] {
            h = gauge_move_phi(&h, v, Element(g as u32)).unwrap();
        }
        assert!(h.phi().iter().any(|g| *g != b.group().id()));
        let states = enumerate_states(&h, &b).unwrap();
        assert_eq!(states.len(), 1);
        for (e, &i) in states[0].colors().iter().enumerate() {
            assert_eq!(b.degree(i), h.phi()[e]);
        }
        assert_eq!(contract_state(&h, &b, &states[0]).unwrap(), one);
        assert_eq!(tv_invariant(&h, &b).unwrap(), one);
    }
}

#[test]
fn fibonacci_states_match_brute_force() {
    let b = backend("fib.json");
    let h = s3(&b);
    let c = h.complex();
    let tau = b.simple_by_name("t").unwrap();
    let unit = b.simple_by_name("1").unwrap();
    // a face is admissible iff it carries 0, 2 or 3 τ edges
    let mut expected = Vec::new();
    for mask in 0u32..1 << c.n_edges() {
        let ok = (0..c.n_faces()).all(|f| {
            let (t, k) = c.face_sides(f)[0];
            let [p, q, r] = c.face_cycle(t, k);
            let n = [(p, q), (q, r), (r, p)].iter().filter(|&&(x, y)| mask >> c.local_edge(t, x, y).0 & 1 == 1).count();
            n != 1
        });
        if ok {
            expected.push((0..c.n_edges()).map(|e| if mask >> e & 1 == 1 { tau } else { unit }).collect::<Vec<_>>());
        }
    }
    let mut got: Vec<Vec<usize>> = enumerate_states(&h, &b).unwrap().iter().map(|s| s.colors().to_vec()).collect();
    got.sort();
    expected.sort();
    assert_eq!(got, expected);
}

#[test]
fn fibonacci_three_sphere() {
    let b = backend("fib.json");
    let h = s3(&b);
    let f = b.field();
    let phi = golden(&b);
    assert_eq!(&phi * &phi, &phi + &f.one());
    let d2 = &f.int(2) + &phi;
    let expected = d2.inv().unwrap();
    assert_eq!(expected, (&f.int(3) - &phi) * f.ratio(1, 5));
    let tets = TetEvaluator::new(&b);
    let scalar = tv_scalar(&h, &tets).unwrap();
    let general = tv_general(&h, &TetEvaluator::new(&b)).unwrap();
    assert_eq!(scalar.value, expected);
    assert_eq!(general.value, expected);
    assert_eq!(scalar.states, general.states);
    assert!(scalar.terms < scalar.states);
    assert!(tets.hits() > 0);
}

#[test]
fn all_tau_weight() {
    let b = backend("fib.json");
    let h = s3(&b);
    let tau = b.simple_by_name("t").unwrap();
    let s = State::new(vec![tau; 10]);
    s.check(&h, &b).unwrap();
    let f = b.field();
    let phi = golden(&b);
    let d2 = &f.int(2) + &phi;
    let bt = phi.div(&d2).unwrap();
    assert_eq!(h.gamma().len(), 5);
    assert_eq!(state_weight(&h, &b, &s), bt.pow(5).unwrap() * phi.pow(5).unwrap());
}

#[test]
fn bad_degrees_and_groups_are_rejected() {
    let b = backend("vec_z6_relative.json");
    let c = boundary_4simplex();
    let z6 = b.group().clone();
    let h = trivial_h_triangulation(c, z6, BTreeSet::new()).unwrap();
    let h = gauge_move_phi(&h, 0, Element(3)).unwrap();
    assert!(matches!(tv_invariant(&h, &b), Err(StateError::DegreeInBadSet(_))));
    let other = s3(&backend("vec_z2.json"));
    assert_eq!(tv_invariant(&other, &b), Err(StateError::GroupMismatch));
    let bad = State::new(vec![0; 10]);
    let h = s3(&backend("fib.json"));
    let fib = backend("fib.json");
    let tau = fib.simple_by_name("t").unwrap();
    let mut colors = vec![0; 10];
    colors[0] = tau;
    assert!(matches!(State::new(colors.clone()).check(&h, &fib), Err(StateError::InadmissibleState(_))));
    assert!(matches!(contract_state(&h, &fib, &State::new(colors)), Err(StateError::InadmissibleState(_))));
    assert!(bad.check(&h, &fib).is_ok());
}

#[test]
fn pachner_moves_preserve_the_invariant() {
    let b = backend("fib.json");
    let h = s3(&b);
    let base = tv_invariant(&h, &b).unwrap();
    let h23 = pachner_23(&h, 0).unwrap();
    assert_eq!(h23.complex().n_tets(), 6);
    assert_eq!(tv_invariant(&h23, &b).unwrap(), base);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut cur = h;
    for _ in 0..12 {
        let (mv, next) = random_move(&cur, &mut rng, 10, MoveMix::Pachner).unwrap();
        assert_eq!(tv_invariant(&next, &b).unwrap(), base, "after {mv}");
        cur = next;
    }
}

#[test]
fn gauge_moves_preserve_the_invariant() {
    let b = backend("vec_z6_relative.json");
    let mut h = trivial_h_triangulation(boundary_4simplex(), b.group().clone(), b.badset().clone()).unwrap();
    let base = tv_invariant(&h, &b).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut moved = 0;
    for _ in 0..30 {
        if let Some((_, next)) = random_move(&h, &mut rng, 5, MoveMix::Gauge) {
            assert_eq!(tv_invariant(&next, &b).unwrap(), base);
            h = next;
            moved += 1;
        }
    }
    assert!(moved > 10);
}

#[test]
fn doubling_b_scales_by_gamma_edges() {
    let fib = backend("fib.json");
    let h = s3(&fib);
    let two = fib.field().int(2);
    let mut data = fib.data().clone();
    for s in &mut data.simples {
        s.b = &s.b * &two;
    }
    let doubled = CategoryBackend::build(data, LoadMode::Strict).unwrap();
    assert_eq!(tv_invariant(&h, &doubled).unwrap(), tv_invariant(&h, &fib).unwrap() * two.pow(5).unwrap());

    let z2 = backend("vec_z2.json");
    let s = Element(1);
    let h = gauge_move_phi(&s3(&z2), 0, s).unwrap();
    let labelled = h.gamma().iter().filter(|&&e| h.phi()[e] == s).count();
    assert_eq!(labelled, 2);
    let mut data = z2.data().clone();
    for simple in data.simples.iter_mut().filter(|x| x.degree == s) {
        simple.b = &simple.b * &z2.field().int(2);
    }
    let doubled = CategoryBackend::build(data, LoadMode::Strict).unwrap();
    assert_eq!(tv_invariant(&h, &doubled).unwrap(), z2.field().int(4));
}

#[test]
fn contraction_plans_agree() {
    let b = backend("fib.json");
    let h = s3(&b);
    let tets = TetEvaluator::new(&b);
    let states = enumerate_states(&h, &b).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..20 {
        let s = &states[rng.gen_range(0..states.len())];
        let greedy = ContractionPlan::greedy(&h, &b, s);
        let seq = ContractionPlan::sequential(&h);
        assert!(greedy.is_valid_for(&h) && seq.is_valid_for(&h));
        let v = contract_state_with(&h, &tets, s, &greedy).unwrap();
        for plan in [seq.clone(), seq.reversed(), greedy.flipped(), seq.flipped()] {
            assert_eq!(contract_state_with(&h, &tets, s, &plan).unwrap(), v);
        }
    }
}

#[test]
fn vec_states_contract_to_one() {
    let b = backend("vec_s3.json");
    let mut h = s3(&b);
    h = gauge_move_phi(&h, 1, Element(3)).unwrap();
    h = pachner_23(&h, 2).unwrap();
    let tets = TetEvaluator::new(&b);
    for s in enumerate_states(&h, &b).unwrap() {
        let plan = ContractionPlan::sequential(&h);
        assert_eq!(contract_state_with(&h, &tets, &s, &plan).unwrap(), b.field().one());
        assert_eq!(state_weight(&h, &b, &s), b.field().one());
    }
}

#[test]
fn disconnected_sum_multiplies() {
    let b = backend("fib.json");
    let v = tv_invariant(&s3(&b), &b).unwrap();
    let labels: Vec<[usize; 4]> = (0..10)
        .map(|t| {
            let (copy, k) = (t / 5, t % 5);
            let vs: Vec<usize> = (0..5).filter(|&x| x != k).map(|x| x + 5 * copy).collect();
            [vs[0], vs[1], vs[2], vs[3]]
        })
        .collect();
    let c = complex_from_labels(&labels, None).unwrap();
    assert_eq!(c.n_components(), 2);
    let mut name = vec![0; c.n_vertices()];
    for (t, l) in labels.iter().enumerate() {
        for x in 0..4 {
            name[c.vertex(t, x)] = l[x];
        }
    }
    let gamma: BTreeSet<usize> = (0..c.n_edges())
        .filter(|&e| {
            let (a, b) = c.edge_ends(e);
            let (a, b) = (name[a], name[b]);
            a / 5 == b / 5 && ((a % 5 + 1) % 5 == b % 5 || (b % 5 + 1) % 5 == a % 5)
        })
        .collect();
    assert_eq!(gamma.len(), 10);
    let g: Arc<FiniteGroup> = b.group().clone();
    let phi = vec![g.id(); c.n_edges()];
    let h = make_h_triangulation(c, gamma, phi, g, BTreeSet::new()).unwrap();
    assert_eq!(tv_invariant(&h, &b).unwrap(), &v * &v);
}

mod properties {
    use super::*;
    use proptest::prelude::{any, prop_assert_eq, proptest, ProptestConfig};

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(12))]

        #[test]
        fn fibonacci_invariant_under_random_moves(seed in any::<u64>()) {
            let b = backend("fib.json");
            let mut h = s3(&b);
            let base = tv_invariant(&h, &b).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..6 {
                let (mv, next) = random_move(&h, &mut rng, 9, MoveMix::Pachner).unwrap();
                prop_assert_eq!(tv_invariant(&next, &b).unwrap(), base.clone(), "after {}", mv);
                h = next;
            }
        }

        #[test]
        fn pointed_collapse_everywhere(seed in any::<u64>()) {
            let b = backend("vec_s3.json");
            let mut h = s3(&b);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..8 {
                h = random_move(&h, &mut rng, 11, MoveMix::All).unwrap().1;
            }
            prop_assert_eq!(enumerate_states(&h, &b).unwrap().len(), 1);
            prop_assert_eq!(tv_invariant(&h, &b).unwrap(), b.field().one());
        }

        #[test]
        fn relative_gauges_keep_the_value(seed in any::<u64>()) {
            let b = backend("vec_z6_relative.json");
            let mut h = trivial_h_triangulation(boundary_4simplex(), b.group().clone(), b.badset().clone()).unwrap();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..4 {
                h = random_move(&h, &mut rng, 9, MoveMix::Pachner).unwrap().1;
            }
            let base = tv_invariant(&h, &b).unwrap();
            for _ in 0..10 {
                h = random_move(&h, &mut rng, 9, MoveMix::Gauge).unwrap().1;
                prop_assert_eq!(tv_invariant(&h, &b).unwrap(), base.clone());
            }
        }

        #[test]
        fn plans_agree_after_moves(seed in any::<u64>()) {
            let b = backend("fib.json");
            let mut h = s3(&b);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for _ in 0..3 {
                h = random_move(&h, &mut rng, 9, MoveMix::Pachner).unwrap().1;
            }
            let tets = TetEvaluator::new(&b);
            let states = enumerate_states(&h, &b).unwrap();
            let s = &states[rng.gen_range(0..states.len())];
            let greedy = ContractionPlan::greedy(&h, &b, s);
            let v = contract_state_with(&h, &tets, s, &greedy).unwrap();
            prop_assert_eq!(contract_state_with(&h, &tets, s, &ContractionPlan::sequential(&h).reversed().flipped()).unwrap(), v);
            let general = tv_general(&h, &TetEvaluator::new(&b)).unwrap().value;
            prop_assert_eq!(tv_scalar(&h, &tets).unwrap().value, general);
        }
    }
}
