use super::*;
use crate::rng::Rng;

fn k4() -> Graph {
    Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap()
}

fn k33() -> Graph {
    let mut edges = Vec::new();
    for a in 0..3 {
        for b in 3..6 {
            edges.push((a, b));
        }
    }
    Graph::from_edges(6, &edges).unwrap()
}

fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
        edges.push((i, 5 + i));
    }
    Graph::from_edges(10, &edges).unwrap()
}

/// Random graph with all degrees <= 3.
fn random_subcubic(n: usize, tries: usize, seed: u64) -> Graph {
    let mut rng = Rng::new(seed);
    let mut g = Graph::new(n);
    for _ in 0..tries {
        let u = rng.below(n);
        let v = rng.below(n);
        if u != v && !g.has_edge(u, v) && g.degree(u) < 3 && g.degree(v) < 3 {
            g.add_edge(u, v).unwrap();
        }
    }
    g
}

#[test]
fn degree_four_is_unsat() {
    let star4 = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]).unwrap();
    let inst = EdgeInstance::from_graph(&star4);
    assert!(matches!(normalize(&inst), Normalized::Unsat));
    let (c, _) = solve_3edge(&star4);
    assert!(c.is_none());
}

#[test]
fn path_is_fully_pruned_and_reextended() {
    let path = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
    let inst = EdgeInstance::from_graph(&path);
    match normalize(&inst) {
        Normalized::Reduced { instance, pruned } => {
            assert_eq!(instance.class_count(), 0);
            assert_eq!(pruned.len(), 3);
        }
        Normalized::Unsat => panic!(),
    }
    let (c, stats) = solve_3edge(&path);
    let c = c.unwrap();
    assert!(inst.is_valid_coloring(&c));
    assert_eq!(stats.pruned, 3);
}

#[test]
fn normalization_keeps_constrained_edges() {
    let path = Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap();
    let mut inst = EdgeInstance::from_graph(&path);
    inst.add_difference((0, 1), (1, 2)).unwrap();
    match normalize(&inst) {
        Normalized::Reduced { instance, .. } => {
            assert_eq!(instance.class_count(), 2);
        }
        Normalized::Unsat => panic!(),
    }
}

#[test]
fn splice_shrinks_by_three_edges_two_vertices() {
    // A hexagon ring with one chord-free splice position in the middle:
    // use two triangles joined by an edge (the "bowtie bar" shape).
    let g = Graph::from_edges(
        6,
        &[(0, 1), (0, 2), (1, 2), (2, 3), (3, 4), (3, 5), (4, 5)],
    )
    .unwrap();
    let inst = EdgeInstance::from_graph(&g);
    let bar = inst.class_of((2, 3)).unwrap();
    let out = splice(&inst, bar).unwrap();
    for child in &out.children {
        assert_eq!(child.class_count(), inst.class_count() - 3);
        assert_eq!(child.vertex_alive_count(), inst.vertex_alive_count() - 2);
        assert_eq!(child.constraint_count(), 1);
    }
}

#[test]
fn splice_requires_degree_three_ends_and_no_constraints() {
    let path = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]).unwrap();
    let inst = EdgeInstance::from_graph(&path);
    let middle = inst.class_of((1, 2)).unwrap();
    assert!(matches!(
        splice(&inst, middle),
        Err(EdgeError::RuleNotApplicable(_))
    ));
}

#[test]
fn splice_on_k4_preserves_solvability() {
    let inst = EdgeInstance::from_graph(&k4());
    let id = inst.class_of((0, 1)).unwrap();
    let out = splice(&inst, id).unwrap();
    // K4 is 3-edge-colorable, so at least one child must be.
    let any = out
        .children
        .iter()
        .any(|c| brute_force_edge_coloring(c).is_some());
    assert!(any);
}

#[test]
fn splice_matches_oracle_on_random_cubicish_graphs() {
    let mut exercised = 0;
    for seed in 0..120 {
        let n = 6 + (seed as usize % 5);
        let g = random_subcubic(n, 3 * n, 90_000 + seed);
        let inst = EdgeInstance::from_graph(&g);
        let candidates = select_splices(&inst);
        let Some(&id) = candidates.first() else {
            continue;
        };
        let out = splice(&inst, id).unwrap();
        let parent = brute_force_edge_coloring(&inst).is_some();
        let child_any = out
            .children
            .iter()
            .any(|c| brute_force_edge_coloring(c).is_some());
        assert_eq!(parent, child_any, "seed {seed}");
        // Lifted colorings are valid on the parent.
        for (child, info) in out.children.iter().zip(out.info.iter()) {
            if let Some(mut col) = brute_force_edge_coloring(child) {
                let ca = col[&info.merged_first];
                let cb = col[&info.merged_second];
                assert_ne!(ca, cb);
                let third = (1..=3).find(|&x| x != ca && x != cb).unwrap();
                for e in &info.removed {
                    col.insert(*e, third);
                }
                assert!(inst.is_valid_coloring(&col), "seed {seed}");
            }
        }
        exercised += 1;
    }
    assert!(exercised >= 40, "only {exercised} splices exercised");
}

#[test]
fn selection_is_independent() {
    for seed in 0..60 {
        let n = 8 + (seed as usize % 13);
        let g = random_subcubic(n, 3 * n, 91_000 + seed);
        let inst = EdgeInstance::from_graph(&g);
        let picks = select_splices(&inst);
        for (i, &a) in picks.iter().enumerate() {
            for &b in &picks[i + 1..] {
                let ca = inst.class(a).unwrap();
                let cb = inst.class(b).unwrap();
                let va = [ca.ends.0, ca.ends.1];
                let vb = [cb.ends.0, cb.ends.1];
                assert!(va.iter().all(|x| !vb.contains(x)), "shared vertex");
                let ia: BTreeSet<ClassId> = inst
                    .incident(ca.ends.0)
                    .into_iter()
                    .chain(inst.incident(ca.ends.1))
                    .filter(|&x| x != a)
                    .collect();
                let ib: BTreeSet<ClassId> = inst
                    .incident(cb.ends.0)
                    .into_iter()
                    .chain(inst.incident(cb.ends.1))
                    .filter(|&x| x != b)
                    .collect();
                assert!(ia.intersection(&ib).count() == 0, "shared incident edge");
                assert!(!ia.contains(&b) && !ib.contains(&a));
            }
        }
    }
}

#[test]
fn k4_star_free_paths_have_no_selection() {
    let path = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4)]).unwrap();
    let inst = EdgeInstance::from_graph(&path);
    assert!(select_splices(&inst).is_empty());

    // K4 has positive m4 and at least one valid selection.
    let inst = EdgeInstance::from_graph(&k4());
    let (_, m4) = inst.neighbor_counts();
    assert_eq!(m4, 6); // every K4 edge has four neighbors
    assert!(!select_splices(&inst).is_empty());
}

#[test]
fn fixtures() {
    let (c, _) = solve_3edge(&k4());
    let c = c.expect("K4 is 3-edge-colorable");
    assert!(EdgeInstance::from_graph(&k4()).is_valid_coloring(&c));

    let (c, _) = solve_3edge(&k33());
    let c = c.expect("K33 is 3-edge-colorable");
    assert!(EdgeInstance::from_graph(&k33()).is_valid_coloring(&c));

    assert!(
        brute_force_edge_coloring(&EdgeInstance::from_graph(&petersen())).is_none(),
        "oracle: Petersen is not 3-edge-colorable"
    );
    let (c, _) = solve_3edge(&petersen());
    assert!(c.is_none());
}

#[test]
fn solver_matches_oracle_on_random_subcubic_graphs() {
    for seed in 0..150 {
        let n = 4 + (seed as usize % 7);
        let g = random_subcubic(n, 2 * n + (seed as usize % 9), 92_000 + seed);
        let inst = EdgeInstance::from_graph(&g);
        let want = brute_force_edge_coloring(&inst).is_some();
        let (got, _) = solve_3edge(&g);
        assert_eq!(got.is_some(), want, "seed {seed}");
        if let Some(c) = got {
            assert!(inst.is_valid_coloring(&c), "seed {seed}");
        }
    }
}

#[test]
fn solver_matches_oracle_with_difference_constraints() {
    for seed in 0..80 {
        let n = 5 + (seed as usize % 5);
        let g = random_subcubic(n, 2 * n, 93_000 + seed);
        let edges = g.edges();
        if edges.len() < 2 {
            continue;
        }
        let mut rng = Rng::new(700_000 + seed);
        let mut inst = EdgeInstance::from_graph(&g);
        for _ in 0..1 + rng.below(3) {
            let a = edges[rng.below(edges.len())];
            let b = edges[rng.below(edges.len())];
            if a != b {
                inst.add_difference(a, b).unwrap();
            }
        }
        let want = brute_force_edge_coloring(&inst).is_some();
        let (got, _) = solve_edge_instance(&inst);
        assert_eq!(got.is_some(), want, "seed {seed}");
        if let Some(c) = got {
            assert!(inst.is_valid_coloring(&c), "seed {seed}");
        }
    }
}

#[test]
fn instance_text_round_trip() {
    let g = random_subcubic(8, 16, 94_000);
    let mut inst = EdgeInstance::from_graph(&g);
    let edges = g.edges();
    if edges.len() >= 2 {
        inst.add_difference(edges[0], edges[1]).unwrap();
    }
    let s = write_edge_instance(&inst);
    let back = parse_edge_instance(&s).unwrap();
    assert_eq!(write_edge_instance(&back), s);
    assert_eq!(back.class_count(), inst.class_count());
    assert_eq!(back.constraint_count(), inst.constraint_count());
}
