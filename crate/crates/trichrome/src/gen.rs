//! Reproducible random instance generators.
//!
//! Every generator is a pure function of its parameters and seed, so the
//! same call produces the same instance byte for byte. The benchmark
//! harness and the verification suites both draw from here.

use crate::csp::{Color, CspInstance};
use crate::graph::Graph;
use crate::rng::Rng;
use crate::sat::{CnfFormula, Lit};
use crate::workfactor::SizeMeasure;

/// Random (dmax,2)-CSP: `n` variables with 3..=dmax colors each and about
/// `density * 3 * n` random binary constraints.
pub fn random_csp(n: usize, dmax: usize, density: f64, seed: u64) -> CspInstance {
    assert!(dmax >= 3, "domains need at least three colors");
    let mut rng = Rng::new(seed);
    let domains: Vec<Vec<Color>> = (0..n)
        .map(|_| {
            let k = 3 + rng.below(dmax - 2);
            (1..=k as Color).collect()
        })
        .collect();
    let mut constraints = Vec::new();
    let target = (density * 3.0 * n as f64).round() as usize;
    for _ in 0..target {
        if n < 2 {
            break;
        }
        let v = rng.below(n);
        let mut w = rng.below(n);
        while w == v {
            w = rng.below(n);
        }
        let cv = domains[v][rng.below(domains[v].len())];
        let cw = domains[w][rng.below(domains[w].len())];
        constraints.push(((v, cv), (w, cw)));
    }
    CspInstance::build(&domains, &constraints, SizeMeasure::default()).unwrap()
}

/// Random CSP with a planted solution: constraints never forbid the
/// planted assignment, so the instance is always satisfiable.
pub fn planted_csp(n: usize, d: usize, density: f64, seed: u64) -> CspInstance {
    assert!(d >= 2);
    let mut rng = Rng::new(seed);
    let domains: Vec<Vec<Color>> = (0..n).map(|_| (1..=d as Color).collect()).collect();
    let planted: Vec<Color> = (0..n).map(|_| 1 + rng.below(d) as Color).collect();
    let mut constraints = Vec::new();
    let target = (density * 3.0 * n as f64).round() as usize;
    let mut guard = 0;
    while constraints.len() < target && guard < 50 * target.max(1) {
        guard += 1;
        if n < 2 {
            break;
        }
        let v = rng.below(n);
        let mut w = rng.below(n);
        while w == v {
            w = rng.below(n);
        }
        let cv = domains[v][rng.below(d)];
        let cw = domains[w][rng.below(d)];
        if planted[v] == cv && planted[w] == cw {
            continue;
        }
        constraints.push(((v, cv), (w, cw)));
    }
    CspInstance::build(&domains, &constraints, SizeMeasure::default()).unwrap()
}

/// Planted instance thinned down to exactly one solution (requires small
/// `n`: the construction counts solutions exhaustively).
pub fn unique_solution_csp(n: usize, d: usize, seed: u64) -> CspInstance {
    assert!(d.pow(n as u32) <= 2_000_000, "too large for exhaustive uniqueness");
    let mut rng = Rng::new(seed);
    let domains: Vec<Vec<Color>> = (0..n).map(|_| (1..=d as Color).collect()).collect();
    let planted: Vec<Color> = (0..n).map(|_| 1 + rng.below(d) as Color).collect();
    let mut constraints: Vec<((usize, Color), (usize, Color))> = Vec::new();
    loop {
        let inst = CspInstance::build(&domains, &constraints, SizeMeasure::default()).unwrap();
        let mut other: Option<Vec<Color>> = None;
        let mut count = 0u64;
        inst_scan(&inst, n, &mut |assignment| {
            count += 1;
            if assignment != planted {
                other = Some(assignment.to_vec());
            }
        });
        debug_assert!(count >= 1);
        let Some(alt) = other else {
            return inst;
        };
        // Forbid the alternative without touching the planted solution:
        // pick a coordinate where they differ and any second coordinate.
        let v = (0..n).find(|&v| alt[v] != planted[v]).unwrap();
        let mut w = rng.below(n);
        while w == v {
            w = rng.below(n);
        }
        constraints.push(((v, alt[v]), (w, alt[w])));
    }
}

fn inst_scan(inst: &CspInstance, n: usize, visit: &mut dyn FnMut(&[Color])) {
    fn rec(
        inst: &CspInstance,
        n: usize,
        partial: &mut Vec<Color>,
        visit: &mut dyn FnMut(&[Color]),
    ) {
        use crate::csp::{Assignment, VarId};
        if partial.len() == n {
            let a = Assignment::from_pairs(
                partial
                    .iter()
                    .enumerate()
                    .map(|(i, &c)| (VarId(i), c)),
            );
            if inst.is_solution(&a) == Ok(true) {
                visit(partial);
            }
            return;
        }
        let v = VarId(partial.len());
        let colors: Vec<Color> = inst.domain(v).unwrap().iter().copied().collect();
        for c in colors {
            partial.push(c);
            rec(inst, n, partial, visit);
            partial.pop();
        }
    }
    let mut partial = Vec::with_capacity(n);
    rec(inst, n, &mut partial, visit);
}

/// Erdos-Renyi random graph.
pub fn random_graph(n: usize, edge_probability: f64, seed: u64) -> Graph {
    let mut rng = Rng::new(seed);
    let mut g = Graph::new(n);
    for u in 0..n {
        for v in u + 1..n {
            if rng.chance(edge_probability) {
                g.add_edge(u, v).unwrap();
            }
        }
    }
    g
}

/// Random k-regular graph by the pairing model with rejection. `n * k`
/// must be even; returns `None` when no simple pairing was found.
pub fn k_regular_graph(n: usize, k: usize, seed: u64) -> Option<Graph> {
    if !(n * k).is_multiple_of(2) || k >= n {
        return None;
    }
    let mut rng = Rng::new(seed);
    'attempt: for _ in 0..500 {
        let mut stubs: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, k)).collect();
        rng.shuffle(&mut stubs);
        let mut g = Graph::new(n);
        for pair in stubs.chunks(2) {
            let (u, v) = (pair[0], pair[1]);
            if u == v || g.has_edge(u, v) {
                continue 'attempt;
            }
            g.add_edge(u, v).unwrap();
        }
        return Some(g);
    }
    None
}

/// Random graph with all degrees at most three: `tries` random edge
/// attempts, each kept only when it respects the degree cap.
pub fn random_subcubic(n: usize, tries: usize, seed: u64) -> Graph {
    let mut rng = Rng::new(seed);
    let mut g = Graph::new(n);
    for _ in 0..tries {
        if n < 2 {
            break;
        }
        let u = rng.below(n);
        let v = rng.below(n);
        if u != v && !g.has_edge(u, v) && g.degree(u) < 3 && g.degree(v) < 3 {
            g.add_edge(u, v).unwrap();
        }
    }
    g
}

/// Random 3-CNF with `three` 3-clauses and `two` 2-clauses over `n >= 3`
/// variables.
pub fn random_3cnf(n: usize, three: usize, two: usize, seed: u64) -> CnfFormula {
    assert!(n >= 3);
    let mut rng = Rng::new(seed);
    let mut clauses = Vec::new();
    let emit = |rng: &mut Rng, width: usize, clauses: &mut Vec<Vec<Lit>>| {
        let vars = rng.subset(n, width);
        let clause: Vec<Lit> = vars
            .iter()
            .map(|&v| {
                let l = v as Lit + 1;
                if rng.chance(0.5) {
                    l
                } else {
                    -l
                }
            })
            .collect();
        clauses.push(clause);
    };
    for _ in 0..three {
        emit(&mut rng, 3, &mut clauses);
    }
    for _ in 0..two {
        emit(&mut rng, 2, &mut clauses);
    }
    CnfFormula::new(n, clauses).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::csp::write_instance;

    #[test]
    fn generators_are_deterministic() {
        let a = write_instance(&random_csp(6, 4, 1.0, 9));
        let b = write_instance(&random_csp(6, 4, 1.0, 9));
        assert_eq!(a, b);
        let c = write_instance(&random_csp(6, 4, 1.0, 10));
        assert_ne!(a, c);
    }

    #[test]
    fn planted_instances_are_satisfiable() {
        for seed in 0..40 {
            let i = planted_csp(5, 5, 1.2, seed);
            assert!(i.brute_force_solve().is_some(), "seed {seed}");
        }
    }

    #[test]
    fn unique_solution_instances_have_one_solution() {
        for seed in 0..20 {
            let i = unique_solution_csp(5, 4, seed);
            assert_eq!(i.brute_force_count(), 1, "seed {seed}");
        }
    }

    #[test]
    fn regular_graphs_are_regular() {
        let g = k_regular_graph(10, 3, 77).unwrap();
        assert!((0..10).all(|v| g.degree(v) == 3));
        assert!(k_regular_graph(5, 3, 1).is_none()); // odd degree sum
    }

    #[test]
    fn subcubic_graphs_respect_the_cap() {
        let g = random_subcubic(12, 40, 5);
        assert!((0..12).all(|v| g.degree(v) <= 3));
    }

    #[test]
    fn density_zero_is_constraint_free() {
        let i = random_csp(6, 3, 0.0, 3);
        assert_eq!(i.constraint_count(), 0);
        assert!(i.brute_force_solve().is_some());
    }
}
