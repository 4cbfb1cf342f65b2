//! Work-factor calculus: roots of branching recurrences, the epsilon
//! optimization, and the derived constants.
//!
//! ```bash
//! cargo run --example work_factors
//! ```

use trichrome::workfactor::{derived_constants, optimize_epsilon, work_factor_of};

fn main() {
    println!("work factors of some branching patterns:");
    for rs in [
        vec![1.0, 1.0],
        vec![2.0, 2.0],
        vec![4.0, 4.0, 5.0, 5.0],
        vec![5.0, 6.0, 7.0, 8.0],
        vec![2.0, 5.0, 6.0],
        vec![3.0, 3.0, 5.0],
    ] {
        let wf = work_factor_of(&rs).unwrap();
        println!("  wf{rs:?} = {wf:.5}");
    }

    let (eps, lambda) = optimize_epsilon();
    println!("\nsize-measure balance point:");
    println!("  epsilon = {eps:.6}");
    println!("  wf(3-e, 4-e, 4-e) = wf(1+e, 4) = {lambda:.5}");

    println!("\nderived constants:");
    for (name, value) in derived_constants().rows() {
        println!("  {name} = {value:.5}");
    }
}
