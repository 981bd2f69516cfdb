mod common;

use std::collections::BTreeSet;

use eposa_core::gadgets::{build_z_with_gadget, CounterexampleInstance, GadgetKind};
use eposa_core::verify::*;
use eposa_core::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn z_from_wall(m: usize, n: usize, r: usize) -> CounterexampleInstance {
    let w = wall_prime(m, n).unwrap();
    let (e1, e2) = w.select_far_edge_pair(0).unwrap();
    build_z(
        &w.graph.clone(),
        &WallDesignation::identity(w),
        e1,
        e2,
        r,
        0,
    )
    .unwrap()
}

#[test]
fn heinlein_degree_table() {
    for r in 1..=6 {
        let w = heinlein_wall(r).unwrap();
        let g = &w.graph;
        assert_eq!(g.n(), 2 * r * r + r + 3);
        assert_eq!(g.m(), 4 * r * r + 2 * r);
        let t = w.terminals;
        assert_eq!((g.degree(t.a), g.degree(t.b)), (r, r));
        assert_eq!((t.c, t.d), (w.bottlenecks[0], w.bottlenecks[r]));
        assert_eq!((g.degree(t.c), g.degree(t.d)), (r + 1, r + 1));
        for j in 1..r {
            assert_eq!(g.degree(w.bottlenecks[j]), 2 * r + 2);
        }
        for j in 1..=r {
            for i in 1..=2 * r {
                assert_eq!(g.degree(w.path_vertex(j, i)), 3);
            }
        }
        assert_eq!(w.interior().len(), g.n() - 4);
    }
    assert!(matches!(heinlein_wall(0), Err(GadgetError::InvalidSize(_))));
}

#[test]
fn grids_and_multiplication() {
    assert_eq!(elementary_grid(1, 1).unwrap().n(), 1);
    assert_eq!(
        elementary_grid(2, 2).unwrap().edges(),
        Graph::cycle(4).permuted(&[0, 1, 3, 2]).edges()
    );
    let g = elementary_grid(3, 4).unwrap();
    assert_eq!((g.n(), g.m()), (12, 17));

    let p3 = multiply_edge(&Graph::path(2), Edge::new(0, 1), 1).unwrap();
    assert_eq!((p3.n(), p3.m()), (3, 2));
    let c3 = multiply_edge(&Graph::cycle(3), Edge::new(0, 1), 2).unwrap();
    assert_eq!((c3.n(), c3.m(), c3.degree(0), c3.degree(1)), (5, 6, 3, 3));
    assert!(multiply_edge(&Graph::path(3), Edge::new(0, 2), 1).is_err());
}

#[test]
fn multiplication_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let graphs = common::random_graphs(12, 100, 2, 9);
    let mut done = 0;
    for g in graphs {
        if g.m() == 0 {
            continue;
        }
        let e = g.edges()[rng.gen_range(0..g.m())];
        let k = rng.gen_range(1..=4);
        let big = multiply_edge(&g, e, k).unwrap();
        assert_eq!(big.n(), g.n() + k);
        // Contract the midpoints back: drop them and restore e.
        let keep: Vec<usize> = g.vertices().collect();
        let (core, _) = big.induced_subgraph(&keep);
        let back = core.add_edges([e]).unwrap();
        assert_eq!(back.edges(), g.edges());
        done += 1;
    }
    assert!(done > 80);
}

#[test]
fn z_counts_and_structure() {
    for (m, n, r) in [(2, 2, 1), (3, 3, 1), (3, 3, 2)] {
        let inst = z_from_wall(m, n, r);
        let h = &inst.pattern;
        assert_eq!(
            inst.z.n(),
            h.n() + 2 * r * (h.m() - 2) + 8 * r * r + 2 * r - 1
        );
        // Every surviving pattern edge has exactly 2r parallel length-2 paths.
        for (f, mids) in &inst.midpoints {
            assert_eq!(mids.len(), 2 * r);
            for &x in mids {
                assert_eq!(inst.z.neighbors(x), &[f.lo(), f.hi()]);
            }
        }
        // Contract midpoints and drop the gadget interior: H minus e1, e2.
        let mut recovered: BTreeSet<Edge> = inst.midpoints.keys().copied().collect();
        recovered.insert(inst.e1_edge());
        recovered.insert(inst.e2_edge());
        assert_eq!(recovered.into_iter().collect::<Vec<_>>(), h.edges());
        // Terminals sit on e1 and e2, and M* avoids W⁰.
        let t = inst.wall.terminals;
        assert_eq!(
            (t.a, t.b, t.c, t.d),
            (inst.e1.0, inst.e1.1, inst.e2.0, inst.e2.1)
        );
        let interior: BTreeSet<usize> = inst.wall.interior().into_iter().collect();
        for (_, p) in &inst.m_star.paths {
            assert!(p.iter().all(|v| !interior.contains(v)));
        }
        assert!(matches!(inst.wall.kind, GadgetKind::Heinlein { size } if size == 2 * r));
        let back: CounterexampleInstance =
            serde_json::from_str(&serde_json::to_string(&inst).unwrap()).unwrap();
        assert_eq!(back, inst);
    }
}

#[test]
fn build_z_rejections() {
    let k5 = Graph::complete(5);
    let w = wall_prime(2, 2).unwrap();
    let des = WallDesignation::identity(w);
    assert!(matches!(
        build_z(&k5, &des, (0, 1), (2, 3), 1, 0),
        Err(GadgetError::NotSubcubic(4))
    ));

    let w = wall_prime(3, 3).unwrap();
    let brick = w.bricks[4].clone();
    let des = WallDesignation::identity(w.clone());
    let r = build_z(
        &w.graph,
        &des,
        (brick[0], brick[1]),
        (brick[3], brick[4]),
        1,
        2,
    );
    assert!(
        matches!(r, Err(GadgetError::EdgesNotFarApart(_, _, _, 2))),
        "{r:?}"
    );
    let r = build_z(
        &w.graph,
        &des,
        (brick[0], brick[1]),
        (brick[3], brick[4]),
        1,
        DEFAULT_MIN_APART,
    );
    assert!(matches!(r, Err(GadgetError::EdgesNotFarApart(_, _, _, 70))));
}

#[test]
fn subdivision_in_z() {
    let inst = z_from_wall(2, 2, 1);
    let e = find_subdivision(&inst.pattern, &inst.z, &SearchConfig::default())
        .unwrap()
        .unwrap();
    e.validate(&inst.pattern, &inst.z).unwrap();
}

#[test]
fn hitting_modes_agree_on_small_z() {
    let inst = z_from_wall(2, 2, 1);
    let cfg = SearchConfig::default();
    for mode in [
        HittingMode::Exhaustive,
        HittingMode::Structural,
        HittingMode::Sampled {
            seed: 7,
            samples: 10,
        },
    ] {
        for budget in [0, 1] {
            let r = check_no_hitting_set(&inst, budget, mode, &cfg).unwrap();
            assert!(r.holds, "{mode:?} budget {budget}: {r:?}");
        }
    }
    assert!(matches!(
        check_no_hitting_set(&inst, 2, HittingMode::Exhaustive, &cfg),
        Err(VerifyError::InvalidInput(_))
    ));
    let a = check_no_hitting_set(
        &inst,
        1,
        HittingMode::Sampled {
            seed: 3,
            samples: 5,
        },
        &cfg,
    )
    .unwrap();
    let b = check_no_hitting_set(
        &inst,
        1,
        HittingMode::Sampled {
            seed: 3,
            samples: 5,
        },
        &cfg,
    )
    .unwrap();
    assert_eq!(a, b);
}

#[test]
fn hitting_set_found_when_gadget_is_fragile() {
    // With the double-path control gadget a single edge kills the c-d route
    // for the structural argument.
    let w = wall_prime(2, 2).unwrap();
    let (e1, e2) = w.select_far_edge_pair(0).unwrap();
    let inst = build_z_with_gadget(
        &w.graph.clone(),
        &WallDesignation::identity(w),
        e1,
        e2,
        1,
        0,
        &double_path_gadget(1),
    )
    .unwrap();
    let r =
        check_no_hitting_set(&inst, 1, HittingMode::Structural, &SearchConfig::default()).unwrap();
    assert!(!r.holds);
    assert_eq!(r.gadget_robust, Some(false));
    assert!(r.failing_set.is_some());
}

#[test]
fn survey_counts() {
    let inst = z_from_wall(2, 2, 1);
    let cfg = SearchConfig::default();
    let report = all_subdivisions_contain_linkage(&inst, &cfg).unwrap();
    assert!(report.canonical_embeddings > 0);
    assert_eq!(
        report.conforming + report.violating,
        report.canonical_embeddings
    );
    assert_eq!(
        report.expanded_conforming + report.expanded_violating,
        report.expanded_embeddings
    );
    assert!(report.expanded_embeddings >= report.canonical_embeddings as u128);
    if let Some(v) = &report.first_violation {
        v.validate(&inst.pattern, &inst.z).unwrap();
    }

    // Controls with two disjoint terminal paths as the gadget. Paired a-b,
    // c-d, every embedding of the cubic pattern has to use both paths, so
    // all conform. Paired a-c, b-d, the host contracts to a cubic graph that
    // is not the pattern, so nothing embeds at all.
    let w = wall_prime(2, 2).unwrap();
    let (e1, e2) = w.select_far_edge_pair(0).unwrap();
    let build = |g: &gadgets::Gadget| {
        build_z_with_gadget(
            &w.graph,
            &WallDesignation::identity(w.clone()),
            e1,
            e2,
            1,
            0,
            g,
        )
        .unwrap()
    };
    let report = all_subdivisions_contain_linkage(&build(&double_path_gadget(2)), &cfg).unwrap();
    assert!(report.canonical_embeddings > 0);
    assert_eq!(report.violating, 0);
    let report = all_subdivisions_contain_linkage(&build(&crossed_path_gadget(2)), &cfg).unwrap();
    assert_eq!(report.canonical_embeddings, 0, "{report:?}");

    // Nothing embeds: vacuous pass.
    let mut empty = inst.clone();
    empty.pattern = Graph::complete(5);
    let report = all_subdivisions_contain_linkage(&empty, &cfg).unwrap();
    assert_eq!(report.canonical_embeddings, 0);
    assert!(report.all_conform());
}
