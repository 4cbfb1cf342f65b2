//! 3-SAT through the clause-selection translation: the search cost is
//! driven by the number of 3-clauses, not the variable count.
//!
//! ```bash
//! cargo run --example three_sat
//! ```

use trichrome::sat::{parse_dimacs_cnf, solve_3sat, translate_3sat};

const FORMULA: &str = "\
c three 3-clauses, two 2-clauses, one unit
p cnf 6 6
1 2 3 0
-1 4 5 0
-3 -5 6 0
-2 4 0
-4 -6 0
2 0
";

fn main() {
    let f = parse_dimacs_cnf(FORMULA).unwrap();
    println!(
        "formula: {} variables, {} clauses ({} with three literals)",
        f.num_vars(),
        f.clauses().len(),
        f.three_clause_count()
    );

    let csp = translate_3sat(&f).unwrap();
    println!(
        "selection CSP: {} variables (= number of 3-clauses), {} constraints",
        csp.var_count(),
        csp.constraint_count()
    );

    let (model, stats) = solve_3sat(&f);
    match model {
        Some(m) => {
            let lits: Vec<String> = m
                .iter()
                .enumerate()
                .map(|(i, &b)| format!("{}{}", if b { "" } else { "-" }, i + 1))
                .collect();
            println!("model: {}", lits.join(" "));
            assert!(f.is_satisfied_by(&m));
        }
        None => println!("unsatisfiable"),
    }
    println!(
        "units fixed in preprocessing: {}, CSP calls: {}",
        stats.units_fixed, stats.csp.calls
    );
}
