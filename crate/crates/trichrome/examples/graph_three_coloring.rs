//! The structured 3-coloring pipeline on the Petersen graph and K4,
//! showing the forest phases and the cover accounting.
//!
//! ```bash
//! cargo run --example graph_three_coloring
//! ```

use std::collections::BTreeSet;
use trichrome::graph::Graph;
use trichrome::vertexcolor::{brute_force_3color, is_proper_coloring, three_color};

fn petersen() -> Graph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
        edges.push((i, 5 + i));
    }
    Graph::from_edges(10, &edges).unwrap()
}

fn main() {
    let g = petersen();
    println!("Petersen graph: {} vertices, {} edges", g.vertex_count(), g.edge_count());

    let (coloring, stats) = three_color(&g);
    let coloring = coloring.expect("Petersen is 3-colorable");
    let alive: BTreeSet<usize> = (0..g.vertex_count()).collect();
    assert!(is_proper_coloring(&g, &alive, &coloring));
    println!("coloring:");
    for (v, c) in &coloring {
        println!("  vertex {v} -> color {c}");
    }
    println!("degree-3 branchings taken: {}", stats.degree3_branchings);
    println!("set enumerations: {}", stats.enumerations);
    println!("CSP calls downstream: {}", stats.csp.calls);
    for (i, acc) in stats.covers.iter().enumerate() {
        println!(
            "cover {i}: roots={} inner={} leaves={} fringe={} remote={} predicted base {:.4}",
            acc.roots, acc.inner, acc.leaves, acc.fringe, acc.remote, acc.predicted_base
        );
    }
    assert!(brute_force_3color(&g).is_some());

    // K4 has no 3-coloring.
    let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
    let (none, _) = three_color(&k4);
    println!("\nK4 verdict: {}", if none.is_some() { "SAT" } else { "UNSAT" });
}
