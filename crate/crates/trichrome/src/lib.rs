//! Exact solvers for small-domain binary constraint satisfaction and its
//! graph incarnations: 3-coloring, 3-list-coloring, constrained
//! 3-edge-coloring, and 3-SAT.
//!
//! The core is a branch-and-reduce search over (3,2)/(4,2)-CSP instances
//! ([`solver`]) whose reduction catalog is analyzed by a work-factor
//! calculus ([`workfactor`]). Graph problems translate into that core:
//! plain 3-coloring through a structural pipeline of bushy and height-two
//! forests ([`vertexcolor`]), edge coloring through splice reductions on
//! the line structure ([`edgecolor`]), and 3-SAT through a clause-selection
//! translation whose size depends only on the number of 3-clauses
//! ([`sat`]). Wide-domain instances get Las-Vegas style randomized
//! restriction solvers ([`randsolver`]).
//!
//! Every reduction ships with an exhaustive oracle next to it
//! (`brute_force_*`), and the test suites check solvability-exactness of
//! each transformation against those oracles. The [`cli`] module exposes
//! the whole toolbox as a small command-line program; the `examples/`
//! directory shows each capability as a runnable program.

pub mod cli;
pub mod csp;
pub mod edgecolor;
pub mod gen;
pub mod graph;
pub mod randsolver;
pub mod rng;
pub mod sat;
pub mod solver;
pub mod vertexcolor;
pub mod workfactor;
