//! Branch-and-reduce on CSP instances, cross-checked against the
//! exhaustive oracle, with the per-rule telemetry printed.
//!
//! ```bash
//! cargo run --example csp_branch_and_reduce
//! ```

use trichrome::csp::from_graph_coloring;
use trichrome::gen::{random_csp, random_graph};
use trichrome::solver::solve;

fn main() {
    // A loose random instance: housekeeping alone usually dissolves it.
    let easy = random_csp(10, 4, 1.3, 2024);
    let (solution, stats) = solve(&easy);
    println!(
        "loose instance ({} vars, {} constraints): {} in {} call(s)",
        easy.var_count(),
        easy.constraint_count(),
        if solution.is_some() { "SAT" } else { "UNSAT" },
        stats.calls
    );
    if let Some(a) = &solution {
        assert_eq!(easy.is_solution(a), Ok(true));
    }

    // A 3-coloring translation makes the rules work for their living.
    let g = random_graph(14, 0.35, 3000);
    let lists = vec![vec![1u32, 2, 3]; g.vertex_count()];
    let hard = from_graph_coloring(&g, &lists, Default::default()).unwrap();
    println!(
        "\ntranslated coloring instance: {} vars, {} constraints, size {:.3}",
        hard.var_count(),
        hard.constraint_count(),
        hard.size()
    );
    let (solution, stats) = solve(&hard);
    println!(
        "verdict: {}",
        if solution.is_some() { "SAT" } else { "UNSAT" }
    );
    println!("search telemetry:");
    println!("  recursive calls: {}", stats.calls);
    println!("  matching base cases: {}", stats.base_case_count);
    println!(
        "  effective work factor: {:.5} (analysis worst case 1.36443)",
        stats.effective_work_factor()
    );
    for (rule, rs) in &stats.rules {
        println!(
            "  {rule}: {} triggers, min decrement {:.4}",
            rs.triggers, rs.min_decrement
        );
    }

    let oracle = hard.brute_force_solve();
    assert_eq!(solution.is_some(), oracle.is_some());
    println!("oracle agrees: verdict {}", if oracle.is_some() { "SAT" } else { "UNSAT" });
}
