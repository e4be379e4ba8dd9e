//! One line per acceptance criterion. Exits non-zero if any criterion fails.

use std::path::PathBuf;
use std::sync::Arc;
use std::time::{Duration, Instant};

use mtv_core::catdata::{load_backend_file, validate_b, degree_pairs, CategoryBackend, LoadMode};
use mtv_core::decor::surface::{genus2_one_vertex, genus2_two_vertex, torus_one_vertex, torus_three_vertex, torus_two_vertex};
use mtv_core::decor::{dual_graph_rep, equivalence, evaluate_word, intersect_path, normal_form, random_rep, random_word, Decoration};
use mtv_core::gcore::FiniteGroup;
use mtv_core::graphval::{identity_suite, TetEvaluator};
use mtv_core::statesum::{contract_state_with, enumerate_states, tv_invariant, ContractionPlan};
use mtv_core::tricomplex::{boundary_4simplex, random_move, trivial_h_triangulation, HTriangulation, Move, MoveMix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn backend(name: &str, mode: LoadMode) -> CategoryBackend {
    let p = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data/backends").join(name);
    load_backend_file(&p, mode).unwrap_or_else(|e| panic!("{name}: {e}"))
}

fn s3(b: &CategoryBackend) -> HTriangulation {
    trivial_h_triangulation(boundary_4simplex(), b.group().clone(), b.badset().clone()).unwrap()
}

type Outcome = Result<String, String>;

fn pointed_collapse() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut runs = 0;
    for name in ["vec_z2.json", "vec_s3.json"] {
        let b = backend(name, LoadMode::Strict);
        let mut h = s3(&b);
        for round in 0..4 {
            let v = tv_invariant(&h, &b).map_err(|e| e.to_string())?;
            if v != b.field().one() {
                return Err(format!("{name} round {round}: {v}"));
            }
            runs += 1;
            for _ in 0..3 {
                if let Some((_, next)) = random_move(&h, &mut rng, 5, MoveMix::Gauge) {
                    h = next;
                }
            }
        }
    }
    Ok(format!("{runs} evaluations equal 1"))
}

fn fuzz(b: &CategoryBackend, moves: usize, max_tets: usize, seed: u64, mix: MoveMix) -> Result<[usize; 5], String> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut h = s3(b);
    let base = tv_invariant(&h, b).map_err(|e| e.to_string())?;
    let mut kinds = [0; 5];
    for i in 0..moves {
        let (mv, next) = random_move(&h, &mut rng, max_tets, mix).ok_or(format!("no applicable move at step {i}"))?;
        let v = tv_invariant(&next, b).map_err(|e| e.to_string())?;
        if v != base {
            return Err(format!("{}: step {i} ({mv}) gave {v}, expected {base}", b.name()));
        }
        kinds[match mv {
            Move::P23 { .. } => 0,
            Move::P32 { .. } => 1,
            Move::P14 { .. } => 2,
            Move::P41 { .. } => 3,
            Move::Gauge { .. } => 4,
        }] += 1;
        h = next;
    }
    Ok(kinds)
}

fn triangulation_invariance() -> Outcome {
    let mut out = Vec::new();
    for (name, max_tets) in [("fib.json", 11), ("vec_z2.json", 16)] {
        let b = backend(name, LoadMode::Strict);
        let k = fuzz(&b, 100, max_tets, 7, MoveMix::Pachner)?;
        out.push(format!("{name}: 2-3={} 3-2={} 1-4={} 4-1={}", k[0], k[1], k[2], k[3]));
    }
    Ok(out.join("; "))
}

fn gauge_invariance() -> Outcome {
    let mut out = Vec::new();
    for (name, moves) in [("vec_z6_relative.json", 25), ("vec_s3.json", 25)] {
        let b = backend(name, LoadMode::Strict);
        let k = fuzz(&b, moves, 5, 11, MoveMix::Gauge)?;
        out.push(format!("{name}: {} gauges", k[4]));
    }
    Ok(out.join("; "))
}

fn identity_suites() -> Outcome {
    let mut checked = 0;
    for name in ["fib.json", "vec_z2.json", "vec_s3.json", "vec_z6_relative.json"] {
        let b = backend(name, LoadMode::Strict);
        for c in identity_suite(&b).map_err(|e| e.to_string())? {
            if !c.passed() {
                return Err(format!("{name}: {} failed: {}", c.name, c.witness.unwrap_or_default()));
            }
            checked += c.checked;
        }
    }
    let corrupted = [
        ("fib_bad_b.json", "validate_b"),
        ("fib_bad_d.json", "check_chromatic"),
        ("fib_bad_tet.json", "check_even_permutation"),
        ("fib_bad_gram.json", "check_cancellation_12"),
        ("fib_bad_gram.json", "check_cancellation_23"),
    ];
    for (name, identity) in corrupted {
        let b = backend(name, LoadMode::Lenient);
        let suite = identity_suite(&b).map_err(|e| e.to_string())?;
        let c = suite.iter().find(|c| c.name == identity).expect("identity present");
        if c.passed() || c.witness.is_none() {
            return Err(format!("{name}: {identity} did not fail"));
        }
    }
    Ok(format!("{checked} instances pass on 4 backends; 5 corruptions caught with witnesses"))
}

fn groupoid_suite() -> Outcome {
    let mut n = 0;
    for (gi, group) in [FiniteGroup::cyclic(6), FiniteGroup::symmetric(3)].into_iter().enumerate() {
        let g = Arc::new(group);
        let mut rng = ChaCha8Rng::seed_from_u64(500 + gi as u64);
        for (si, surf) in [torus_two_vertex(), torus_three_vertex()].into_iter().enumerate() {
            let s = Arc::new(surf);
            for k in 0..250 {
                let rho = random_rep(&s, &g, &mut rng).map_err(|e| e.to_string())?;
                let base = equivalence::random_base(s.n_vertices(), &mut rng);
                let src = Decoration::new(&rho, base).map_err(|e| e.to_string())?;
                let len = rng.gen_range(1..9);
                let w = random_word(&src, len, &mut rng);
                let nf = normal_form(&w).map_err(|e| e.to_string())?;
                let direct = evaluate_word(&w).map_err(|e| e.to_string())?.signature();
                let via = evaluate_word(&nf.to_word()).map_err(|e| e.to_string())?.signature();
                if direct != via {
                    return Err(format!("group {gi} surface {si} word {k} disagrees"));
                }
                n += 1;
            }
        }
    }
    Ok(format!("{n} words"))
}

fn intersection_bijection() -> Outcome {
    let mut n = 0;
    let surfaces = [torus_one_vertex(), torus_two_vertex(), genus2_one_vertex(), genus2_two_vertex()];
    for (gi, group) in [FiniteGroup::cyclic(5), FiniteGroup::symmetric(3)].into_iter().enumerate() {
        let g = Arc::new(group);
        let mut rng = ChaCha8Rng::seed_from_u64(900 + gi as u64);
        for k in 0..100 {
            let s = Arc::new(surfaces[k % surfaces.len()].clone());
            let rho = random_rep(&s, &g, &mut rng).map_err(|e| e.to_string())?;
            let t = dual_graph_rep(&rho);
            for o in s.oriented_edges() {
                if intersect_path(&g, &[o], &t).map_err(|e| e.to_string())? != rho.value(o) {
                    return Err(format!("group {gi} sample {k} edge {o:?}"));
                }
            }
            n += 1;
        }
    }
    Ok(format!("{n} decorated surfaces"))
}

fn fibonacci_b() -> Outcome {
    let b = backend("fib.json", LoadMode::Strict);
    let f = b.field();
    let phi = f.from_i64_coeffs(&[0, 0, -1, -1], 1);
    if &phi * &phi != &phi + &f.one() {
        return Err("φ² != φ + 1".into());
    }
    let r = validate_b(&b, &degree_pairs(&b)).map_err(|e| e.to_string())?;
    if !r.passed() {
        return Err(format!("{} failures", r.failures.len()));
    }
    Ok(format!("{} instances, b(τ) = {}", r.checked, b.b(b.simple_by_name("t").unwrap())))
}

fn plan_independence() -> Outcome {
    let b = backend("fib.json", LoadMode::Strict);
    let h = s3(&b);
    let tets = TetEvaluator::new(&b);
    let states = enumerate_states(&h, &b).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut differing = 0;
    for i in 0..20 {
        let s = &states[rng.gen_range(0..states.len())];
        let greedy = ContractionPlan::greedy(&h, &b, s);
        let other = ContractionPlan::sequential(&h).reversed().flipped();
        if greedy.order() != other.order() {
            differing += 1;
        }
        let a = contract_state_with(&h, &tets, s, &greedy).map_err(|e| e.to_string())?;
        let c = contract_state_with(&h, &tets, s, &other).map_err(|e| e.to_string())?;
        if a != c {
            return Err(format!("state {i}: {a} vs {c}"));
        }
    }
    if differing == 0 {
        return Err("the two plans never differed".into());
    }
    Ok(format!("20 states of {}, contraction orders differ on {differing}", states.len()))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome, Duration); 8] = [
        ("1 pointed collapse", pointed_collapse, Duration::from_secs(1)),
        ("2 triangulation invariance", triangulation_invariance, Duration::from_secs(60)),
        ("3 gauge invariance", gauge_invariance, Duration::from_secs(10)),
        ("4 algebraic identity suite", identity_suites, Duration::from_secs(5)),
        ("5 groupoid normal forms", groupoid_suite, Duration::from_secs(10)),
        ("6 intersection bijection", intersection_bijection, Duration::from_secs(5)),
        ("7 fibonacci b-identity", fibonacci_b, Duration::from_secs(1)),
        ("8 contraction-plan independence", plan_independence, Duration::from_secs(5)),
    ];
    let mut failed = 0;
    for (name, run, limit) in criteria {
        let start = Instant::now();
        let outcome = run();
        let took = start.elapsed();
        let (ok, detail) = match outcome {
            Ok(d) if took <= limit => (true, d),
            Ok(d) => (false, format!("{d}; too slow")),
            Err(e) => (false, e),
        };
        if !ok {
            failed += 1;
        }
        println!(
            "{} criterion {name}: {detail} ({:.2}s, limit {}s)",
            if ok { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
            limit.as_secs()
        );
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
