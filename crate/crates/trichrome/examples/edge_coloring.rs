//! Constrained 3-edge-coloring: pruning, splice selection, and the line
//! handoff, on K4 (colorable) and the Petersen graph (not colorable).
//!
//! ```bash
//! cargo run --example edge_coloring
//! ```

use trichrome::edgecolor::{solve_3edge, solve_edge_instance, EdgeInstance};
use trichrome::graph::Graph;

fn main() {
    let k4 = Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
    let (coloring, stats) = solve_3edge(&k4);
    let coloring = coloring.expect("K4 splits into three perfect matchings");
    println!("K4 edge coloring:");
    for (&(u, v), &c) in &coloring {
        println!("  {u}-{v} -> color {c}");
    }
    println!(
        "m3={} m4={} splices selected={} (target m4/3 = {:.2}) residues={}",
        stats.m3, stats.m4, stats.splices_selected, stats.splice_target, stats.residues_solved
    );

    let mut pet = Vec::new();
    for i in 0..5 {
        pet.push((i, (i + 1) % 5));
        pet.push((5 + i, 5 + (i + 2) % 5));
        pet.push((i, 5 + i));
    }
    let petersen = Graph::from_edges(10, &pet).unwrap();
    let (none, _) = solve_3edge(&petersen);
    println!(
        "\nPetersen verdict: {}",
        if none.is_some() { "SAT" } else { "UNSAT" }
    );

    // Difference constraints narrow the space further: force two
    // non-adjacent K4 edges apart.
    let mut constrained = EdgeInstance::from_graph(&k4);
    constrained.add_difference((0, 1), (2, 3)).unwrap();
    let (c, _) = solve_edge_instance(&constrained);
    match c {
        Some(c) => {
            assert_ne!(c[&(0, 1)], c[&(2, 3)]);
            println!("\nwith 01 != 23 constraint: SAT, colors {} and {}", c[&(0, 1)], c[&(2, 3)]);
        }
        None => println!("\nwith 01 != 23 constraint: UNSAT"),
    }
}
