//! Benchmark harness: generated corpora, oracle cross-checks where the
//! size permits, and effective work factors against the analytic bases.
//!
//! ```bash
//! cargo run --release --example benchmark
//! ```

use trichrome::cli::bench;

fn main() {
    println!("== CSP corpus, growing n ==");
    for n in [8, 15, 20, 25] {
        let report = bench("csp", n, 2.0, 20, 1234, false).unwrap();
        println!(
            "n={n:2}  effective factor mean {} (max {})  analytic base {}  oracle {}",
            report.get("effective_work_factor_mean").unwrap(),
            report.get("effective_work_factor_max").unwrap(),
            report.get("csp_base").unwrap(),
            match report.get("oracle_checked") {
                Some("0") => "skipped (n too large)".to_string(),
                Some(k) => format!(
                    "{}/{k} agree",
                    report.get("oracle_agreements").unwrap()
                ),
                None => "-".to_string(),
            }
        );
    }

    println!("\n== 3-coloring corpus ==");
    let report = bench("color", 9, 0.4, 25, 99, false).unwrap();
    print!("{}", report.render());

    println!("\n== 3-edge-coloring corpus ==");
    let report = bench("edgecolor", 9, 1.0, 25, 5, false).unwrap();
    print!("{}", report.render());

    println!("\n== 3-SAT corpus ==");
    let report = bench("sat", 6, 1.2, 25, 3, false).unwrap();
    print!("{}", report.render());
}
