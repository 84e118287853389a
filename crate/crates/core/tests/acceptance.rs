//! Acceptance suite: the engine's exit criteria, one test per criterion.
//! Every assertion is exact — the arithmetic is over a prime field, so there
//! are no tolerances anywhere. Each test prints one PASS line (run with
//! `cargo test --test acceptance -- --nocapture` to see them).

use sms_forge::endo::{decompose, is_isomorphic};
use sms_forge::io::fixtures;
use sms_forge::rep::{
    self, hom_basis, loewy_layers, projective, random_module, simple, syzygy, Rep,
};
use sms_forge::sms::{
    is_sms, minimalize_triangle, mutate, nu_shift_stable, okuyama_trace, same_system, strip,
    torsion_triangle, verify_orthogonal_bricks, MutationSign, SmsCandidate, SmsVerdict,
    StripStatus, TorsionSide, TorsionTriangle,
};
use sms_forge::stable::{cocone, cone, minimal_rep, serre, stable_hom};
use sms_forge::tilt::{
    build_okuyama, homotopy_hom, homotopy_isomorphic, is_tilting, silting_mutate_regular,
};
use sms_forge::{DetRng, Error, Fp, Mat};

fn pass(n: usize, what: &str) {
    println!("ACCEPTANCE {n} PASS: {what}");
}

fn z_system(fx: &sms_forge::io::Fixture) -> SmsCandidate {
    let members: Vec<(String, Rep)> = ["Z0", "Z1", "Z2", "Z3"]
        .iter()
        .map(|n| (n.to_string(), fx.module(n).unwrap().clone()))
        .collect();
    verify_orthogonal_bricks(members).unwrap()
}

fn simples_system(fx: &sms_forge::io::Fixture) -> SmsCandidate {
    let alg = &fx.algebra;
    let members: Vec<(String, Rep)> = (0..alg.n_vertices())
        .map(|v| (format!("S{}", alg.vertex_name(v)), simple(alg, v)))
        .collect();
    verify_orthogonal_bricks(members).unwrap()
}

/// All subsets of the simple modules stable under the Nakayama functor.
fn nu_stable_simple_subsets(fx: &sms_forge::io::Fixture, rng: &mut DetRng) -> Vec<Vec<usize>> {
    let alg = &fx.algebra;
    let n = alg.n_vertices();
    let mut out = Vec::new();
    for mask in 0u32..(1 << n) {
        let verts: Vec<usize> = (0..n).filter(|&v| mask & (1 << v) != 0).collect();
        let reps: Vec<Rep> = verts.iter().map(|&v| simple(alg, v)).collect();
        if reps.is_empty() || nu_shift_stable(&reps, rng).unwrap() {
            out.push(verts);
        }
    }
    out
}

// -----------------------------------------------------------------------
// 1. The two-step mutation pipeline from the restricted simples to the
//    simples, all memberships up to stable isomorphism.
// -----------------------------------------------------------------------
#[test]
fn criterion_1_mutation_pipeline() {
    let fx = fixtures::example5().unwrap();
    let mut rng = DetRng::new(0);
    let zs = z_system(&fx);
    let report = is_sms(&zs, 0).unwrap();
    assert_eq!(
        report.verdict,
        SmsVerdict::Sms,
        "Z family must verify as an SMS"
    );

    let m1 = mutate(&zs, &[0, 2], MutationSign::Plus, 0, &mut rng).unwrap();
    let expected1: Vec<(String, Rep)> = vec![
        ("Z0".into(), fx.module("Z0").unwrap().clone()),
        ("S1".into(), simple(&fx.algebra, 1)),
        ("Z2".into(), fx.module("Z2").unwrap().clone()),
        ("S3".into(), simple(&fx.algebra, 3)),
    ];
    let expected1 = verify_orthogonal_bricks(expected1).unwrap();
    assert!(
        same_system(&m1.output, &expected1, &mut rng),
        "first mutation must yield {{Z0, S1, Z2, S3}}"
    );

    let m2 = mutate(&m1.output, &[0, 1, 3], MutationSign::Plus, 0, &mut rng).unwrap();
    let target = simples_system(&fx);
    assert!(
        same_system(&m2.output, &target, &mut rng),
        "second mutation must yield the four simples"
    );
    pass(
        1,
        "example5: {Z0..Z3} is an SMS; two mutations reach the simple modules",
    );
}

// -----------------------------------------------------------------------
// 2. The intermediate filtration witnesses produced alongside the
//    mutations have exactly the stated composition structures.
// -----------------------------------------------------------------------
#[test]
fn criterion_2_intermediate_witnesses() {
    let fx = fixtures::example5().unwrap();
    let mut rng = DetRng::new(0);
    let zs = z_system(&fx);
    let m1 = mutate(&zs, &[0, 2], MutationSign::Plus, 0, &mut rng).unwrap();
    // companions for Z1 and Z3: extensions of Z0 by Z2
    // (dim vector k:1, 1:1, 2:2, 3:1 and Loewy layers 2 / (1 3) / (2 k))
    assert_eq!(m1.steps.len(), 2);
    for step in &m1.steps {
        assert_eq!(
            step.companion.dims(),
            &[1, 1, 2, 1],
            "{}",
            step.original_label
        );
        assert_eq!(
            loewy_layers(&step.companion),
            vec![vec![0, 0, 1, 0], vec![0, 1, 0, 1], vec![1, 0, 1, 0]],
            "{}",
            step.original_label
        );
    }
    let m2 = mutate(&m1.output, &[0, 1, 3], MutationSign::Plus, 0, &mut rng).unwrap();
    // companion for Z2: direct sum of two uniserials with top k and socles
    // S1 and S3 (dim vector k:2, 1:1, 3:1; Loewy layers (k k) / (1 3))
    assert_eq!(m2.steps.len(), 1);
    let w = &m2.steps[0].companion;
    assert_eq!(w.dims(), &[2, 1, 0, 1]);
    assert_eq!(loewy_layers(w), vec![vec![2, 0, 0, 0], vec![0, 1, 0, 1]]);
    let parts = decompose(w, &mut rng).unwrap();
    assert_eq!(parts.len(), 2, "two non-isomorphic uniserial summands");
    assert!(parts.iter().all(|(p, m)| p.dim_total() == 2 && *m == 1));
    pass(
        2,
        "example5: mutation companions match the printed composition structures",
    );
}

// -----------------------------------------------------------------------
// 3. The refutation on the 3-cycle Nakayama algebra: the localized
//    simple-minded collection is not a simple-minded system.
// -----------------------------------------------------------------------
#[test]
fn criterion_3_refutation() {
    let fx = fixtures::example3(3).unwrap();
    let s1 = simple(&fx.algebra, 0);
    let s2 = simple(&fx.algebra, 1);
    let co = rep::cosyzygy(&s1).unwrap();
    let dim = stable_hom(&co, &s2).unwrap().dim();
    assert!(
        dim >= 1,
        "stable Hom(cosyzygy(S1), S2) must be nonzero (got {dim})"
    );

    // M = uniserial with top S3 and socle S1 (P3 modulo its socle has top S3
    // and socle S1 on the 3-cycle)
    let p3 = projective(&fx.algebra, 2);
    let st = rep::structural(&p3);
    let (m, _) = rep::quotient(&p3, &st.socle).unwrap();
    assert_eq!(loewy_layers(&m), vec![vec![0, 0, 1], vec![1, 0, 0]]);
    let r = verify_orthogonal_bricks(vec![("A".into(), co), ("B".into(), s2), ("C".into(), m)]);
    assert!(
        matches!(r, Err(Error::NotOrthogonal(_, _))),
        "the candidate must fail pairwise orthogonality"
    );
    pass(
        3,
        "example3: Hom(cosyzygy(S1), S2) != 0 and the candidate set fails orthogonality",
    );
}

// -----------------------------------------------------------------------
// 4. The endo-trivial singleton over the dihedral group algebra.
// -----------------------------------------------------------------------
#[test]
fn criterion_4_endotrivial_singleton() {
    let fx = fixtures::example4().unwrap();
    let l = fx.module("L").unwrap().clone();
    assert!(sms_forge::stable::is_brick(&l).unwrap());
    let cand = verify_orthogonal_bricks(vec![("L".into(), l)]).unwrap();
    let report = is_sms(&cand, 0).unwrap();
    assert_eq!(report.verdict, SmsVerdict::Sms);

    // the orbit command reports a single node
    let args: Vec<String> = [
        "sms",
        "orbit",
        "--algebra",
        "example4",
        "--sms",
        "L",
        "--format",
        "json",
        "--no-timing",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    let mut buf = Vec::new();
    let code = sms_forge::cli::run(&args, &mut buf);
    assert_eq!(code, 0);
    let report: serde_json::Value = serde_json::from_slice(&buf).unwrap();
    assert_eq!(report["verdicts"]["nodes"], 1);
    pass(
        4,
        "example4: {L} is an SMS and its mutation orbit is a single node",
    );
}

// -----------------------------------------------------------------------
// 5. Oracle equivalence: the trace construction against the general
//    torsion-triangle mutation, on every fixture and every Nakayama-stable
//    subset of the simples.
// -----------------------------------------------------------------------
#[test]
fn criterion_5_trace_oracle_equivalence() {
    let mut rng = DetRng::new(0);
    let mut cases = 0usize;
    for fx in [
        fixtures::example3(3).unwrap(),
        fixtures::example4().unwrap(),
        fixtures::example5().unwrap(),
    ] {
        let alg = &fx.algebra;
        for verts in nu_stable_simple_subsets(&fx, &mut rng) {
            let x: Vec<Rep> = verts.iter().map(|&v| simple(alg, v)).collect();
            for j in 0..alg.n_vertices() {
                if verts.contains(&j) {
                    continue;
                }
                let s_j = simple(alg, j);
                let via_trace = okuyama_trace(&s_j, &verts).unwrap();
                let tt =
                    torsion_triangle(&syzygy(&s_j), &x, TorsionSide::Left, 0, &mut rng).unwrap();
                assert!(
                    is_isomorphic(&via_trace, tt.first(), &mut rng).is_some(),
                    "{}: U = {verts:?}, S_{j}",
                    fx.name
                );
                cases += 1;
            }
        }
    }
    assert!(cases >= 30, "expected a real sweep, got {cases} cases");
    pass(
        5,
        "trace fast path agrees with the torsion-triangle mutation on all fixtures",
    );
}

// -----------------------------------------------------------------------
// 6. Round trip: right mutation undoes left mutation, exhaustively over
//    Nakayama-stable subsets of every fixture system.
// -----------------------------------------------------------------------
#[test]
fn criterion_6_round_trip() {
    let mut rng = DetRng::new(0);
    let fx3 = fixtures::example3(3).unwrap();
    let fx4 = fixtures::example4().unwrap();
    let fx5 = fixtures::example5().unwrap();
    let systems: Vec<(&str, SmsCandidate)> = vec![
        ("example3 simples", simples_system(&fx3)),
        ("example4 {L}", {
            let l = fx4.module("L").unwrap().clone();
            verify_orthogonal_bricks(vec![("L".into(), l)]).unwrap()
        }),
        ("example5 Z family", z_system(&fx5)),
        ("example5 simples", simples_system(&fx5)),
    ];
    let mut cases = 0usize;
    for (name, s) in &systems {
        let n = s.members.len();
        for mask in 0u32..(1 << n) {
            let indices: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
            let subset: Vec<Rep> = indices.iter().map(|&i| s.members[i].rep.clone()).collect();
            if !subset.is_empty() && !nu_shift_stable(&subset, &mut rng).unwrap() {
                continue;
            }
            let plus = mutate(s, &indices, MutationSign::Plus, 0, &mut rng).unwrap();
            let back = mutate(&plus.output, &indices, MutationSign::Minus, 0, &mut rng).unwrap();
            assert!(
                same_system(&back.output, s, &mut rng),
                "{name}: subset {indices:?}"
            );
            cases += 1;
        }
    }
    assert!(cases >= 20, "expected a real sweep, got {cases}");
    pass(
        6,
        "right mutation undoes left mutation for every Nakayama-stable subset",
    );
}

// -----------------------------------------------------------------------
// 7. The two-term equation: the Okuyama complex agrees with the shifted
//    silting mutation of the regular module for every Nakayama-stable
//    simple subset of example3 and example5, and every such complex passes
//    the tilting test with vanishing shifted self-Homs.
// -----------------------------------------------------------------------
#[test]
fn criterion_7_two_term_equation() {
    let mut rng = DetRng::new(0);
    let mut cases = 0usize;
    for fx in [
        fixtures::example3(3).unwrap(),
        fixtures::example5().unwrap(),
    ] {
        let alg = &fx.algebra;
        for verts in nu_stable_simple_subsets(&fx, &mut rng) {
            let t = build_okuyama(alg, &verts, &mut rng).unwrap();
            let s = silting_mutate_regular(alg, &verts, &mut rng).unwrap();
            assert!(
                homotopy_isomorphic(&t, &s, &mut rng).unwrap(),
                "{}: U = {verts:?}",
                fx.name
            );
            assert_eq!(homotopy_hom(&t, &t, 1).unwrap().dim(), 0, "U = {verts:?}");
            assert_eq!(homotopy_hom(&t, &t, -1).unwrap().dim(), 0, "U = {verts:?}");
            let verdict = is_tilting(&t, &mut rng).unwrap();
            assert!(verdict.tilting, "{}: U = {verts:?}: {verdict:?}", fx.name);
            cases += 1;
        }
    }
    assert!(cases >= 18, "expected a real sweep, got {cases}");
    pass(
        7,
        "okuyama complexes equal shifted silting mutations and are tilting",
    );
}

// -----------------------------------------------------------------------
// 8. Serre duality dimension identity over the fixture pools.
// -----------------------------------------------------------------------
#[test]
fn criterion_8_serre_duality() {
    let mut pairs = 0usize;
    let fx3 = fixtures::example3(3).unwrap();
    let mut pool3: Vec<Rep> = Vec::new();
    for v in 0..3 {
        pool3.push(simple(&fx3.algebra, v));
        pool3.push(projective(&fx3.algebra, v));
        pool3.push(syzygy(&simple(&fx3.algebra, v)));
    }
    let fx5 = fixtures::example5().unwrap();
    let mut pool5: Vec<Rep> = Vec::new();
    for v in 0..4 {
        pool5.push(simple(&fx5.algebra, v));
    }
    for z in ["Z1", "Z2", "Z3"] {
        pool5.push(fx5.module(z).unwrap().clone());
    }
    for pool in [pool3, pool5] {
        for m in &pool {
            let nu_m = serre(m).unwrap();
            for n in &pool {
                let lhs = stable_hom(m, n).unwrap().dim();
                let rhs = stable_hom(n, &nu_m).unwrap().dim();
                assert_eq!(lhs, rhs, "Serre duality failed");
                pairs += 1;
            }
        }
    }
    assert!(pairs >= 50, "need at least 50 ordered pairs, got {pairs}");
    pass(
        8,
        "dim stable Hom(M, N) = dim stable Hom(N, nu M) over the fixture pools",
    );
}

// -----------------------------------------------------------------------
// 9. Seeded property suites, independent of the printed fixtures.
// -----------------------------------------------------------------------
#[test]
fn criterion_9_property_suites() {
    let mut cases = 0usize;
    let mut rng = DetRng::new(42);

    // rank-nullity on random matrices over assorted primes
    for &p in &[2u64, 3, 5, 65537] {
        let fp = Fp::new(p).unwrap();
        for _ in 0..8 {
            let rows = 1 + rng.below(6) as usize;
            let cols = 1 + rng.below(6) as usize;
            let mut m = Mat::zeros(fp, rows, cols);
            for i in 0..rows {
                for j in 0..cols {
                    m.set(i, j, rng.element(p) as u32);
                }
            }
            assert_eq!(m.rank() + m.kernel_basis().dim(), cols);
            cases += 1;
        }
    }

    let fx3 = fixtures::example3(3).unwrap();
    let fx5 = fixtures::example5().unwrap();

    // Hom bi-additivity
    for _ in 0..15 {
        let m = random_module(&fx3.algebra, &mut rng, 1);
        let m2 = random_module(&fx3.algebra, &mut rng, 1);
        let n = random_module(&fx3.algebra, &mut rng, 1);
        let (sum, _, _) = Rep::direct_sum(&[m.clone(), m2.clone()]);
        assert_eq!(
            hom_basis(&sum, &n).unwrap().len(),
            hom_basis(&m, &n).unwrap().len() + hom_basis(&m2, &n).unwrap().len()
        );
        cases += 1;
    }

    // decompose reassembly
    for k in 0..12 {
        let alg = if k % 3 == 0 {
            &fx5.algebra
        } else {
            &fx3.algebra
        };
        let m = random_module(alg, &mut rng, 1);
        let parts = decompose(&m, &mut rng).unwrap();
        let mut flat: Vec<Rep> = Vec::new();
        for (r, mult) in &parts {
            for _ in 0..*mult {
                flat.push(r.clone());
            }
        }
        if flat.is_empty() {
            assert!(m.is_zero());
        } else {
            let (sum, _, _) = Rep::direct_sum(&flat);
            assert!(is_isomorphic(&m, &sum, &mut rng).is_some());
        }
        cases += 1;
    }

    // triangle rotation: the cocone of the second map recovers the source
    let mut rotation_cases = 0usize;
    let mut k = 0usize;
    while rotation_cases < 12 {
        k += 1;
        let alg = if k % 4 == 0 {
            &fx5.algebra
        } else {
            &fx3.algebra
        };
        let a = minimal_rep(&random_module(alg, &mut rng, 1)).unwrap().rep;
        let b = minimal_rep(&random_module(alg, &mut rng, 1)).unwrap().rep;
        if a.is_zero() || b.is_zero() {
            continue;
        }
        let sh = stable_hom(&a, &b).unwrap();
        let f = if sh.dim() == 0 {
            sms_forge::rep::ModMap::zero(a.clone(), b.clone())
        } else {
            let coords: Vec<u32> = (0..sh.dim())
                .map(|_| rng.element(a.field().modulus() as u64) as u32)
                .collect();
            sh.realize_class(&coords)
        };
        let t = cone(&f).unwrap();
        let back = cocone(&t.g).unwrap();
        assert!(
            is_isomorphic(&back.a, &a, &mut rng).is_some(),
            "rotation must recover the source"
        );
        rotation_cases += 1;
        cases += 1;
    }

    // minimalize_triangle idempotence and part orthogonality on random input
    let zs = z_system(&fx5);
    let x: Vec<Rep> = vec![zs.members[0].rep.clone(), zs.members[2].rep.clone()];
    for _ in 0..10 {
        let m = random_module(&fx5.algebra, &mut rng, 1);
        let tt = torsion_triangle(&m, &x, TorsionSide::Left, 0, &mut rng).unwrap();
        let dims_before = (tt.first().dims().to_vec(), tt.second().dims().to_vec());
        let again = minimalize_triangle(
            TorsionTriangle {
                side: tt.side,
                triangle: tt.triangle,
                minimal: false,
            },
            &x,
            0,
            &mut rng,
        )
        .unwrap();
        assert_eq!(again.first().dims(), &dims_before.0[..]);
        assert_eq!(again.second().dims(), &dims_before.1[..]);
        cases += 1;
    }

    // mutation outputs are orthogonal bricks at random Nakayama-stable subsets
    let systems = [simples_system(&fx3), z_system(&fx5)];
    let mut ortho_cases = 0usize;
    'outer: for s in &systems {
        let n = s.members.len();
        for mask in 1u32..(1 << n) {
            let indices: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
            let subset: Vec<Rep> = indices.iter().map(|&i| s.members[i].rep.clone()).collect();
            if !nu_shift_stable(&subset, &mut rng).unwrap() {
                continue;
            }
            // mutate() re-verifies orthogonal bricks on its output
            let _ = mutate(s, &indices, MutationSign::Plus, 0, &mut rng).unwrap();
            ortho_cases += 1;
            cases += 1;
            if ortho_cases >= 11 {
                break 'outer;
            }
        }
    }

    // filtration length monotonicity: l(parts) <= l(input) over the simples
    let s3 = simples_system(&fx3);
    let members3 = s3.reps();
    let mut mono_cases = 0usize;
    while mono_cases < 12 {
        let m = random_module(&fx3.algebra, &mut rng, 2);
        let t = strip(&m, &members3, 0).unwrap();
        if t.status != StripStatus::Reached0 {
            continue;
        }
        let l_m = t.length().unwrap();
        let x: Vec<Rep> = vec![members3[0].clone()];
        let tt = torsion_triangle(&m, &x, TorsionSide::Left, 0, &mut rng).unwrap();
        for part in [tt.first(), tt.second()] {
            let lp = strip(part, &members3, 0).unwrap();
            assert_eq!(lp.status, StripStatus::Reached0);
            assert!(
                lp.length().unwrap() <= l_m,
                "filtration length must not grow"
            );
        }
        mono_cases += 1;
        cases += 1;
    }

    assert!(
        cases >= 100,
        "need at least 100 property cases, got {cases}"
    );
    pass(9, &format!("property suites over {cases} seeded cases"));
}
