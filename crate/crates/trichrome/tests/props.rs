//! Property tests over randomized inputs with shrinking.

use proptest::prelude::*;
use trichrome::csp::{parse_instance, write_instance, MapChain, Step};
use trichrome::gen;
use trichrome::solver::housekeep;
use trichrome::workfactor::{work_factor_of, ROOT_TOL};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    /// The returned root really is a zero of 1 - sum x^(-r_i).
    #[test]
    fn work_factor_root_certificate(
        rs in prop::collection::vec(0.2f64..8.0, 1..6)
    ) {
        let x = work_factor_of(&rs).unwrap();
        let residual: f64 = 1.0 - rs.iter().map(|&r| x.powf(-r)).sum::<f64>();
        prop_assert!(residual.abs() <= ROOT_TOL, "residual {residual}");
        prop_assert!(x >= 1.0);
    }

    /// Appending a decrement strictly increases the factor; growing one
    /// strictly decreases it (on multi-element lists).
    #[test]
    fn work_factor_monotonicity(
        rs in prop::collection::vec(0.3f64..6.0, 2..5),
        extra in 0.3f64..6.0,
        bump in 0.1f64..2.0,
        idx in 0usize..4
    ) {
        let base = work_factor_of(&rs).unwrap();
        let mut appended = rs.clone();
        appended.push(extra);
        prop_assert!(work_factor_of(&appended).unwrap() > base);
        let mut grown = rs.clone();
        let i = idx % rs.len();
        grown[i] += bump;
        prop_assert!(work_factor_of(&grown).unwrap() < base);
    }

    /// Canonical text form round-trips exactly.
    #[test]
    fn csp_text_round_trip(n in 1usize..7, dmax in 3usize..5, density in 0.0f64..1.5, seed in any::<u64>()) {
        let inst = gen::random_csp(n, dmax, density, seed);
        let text = write_instance(&inst);
        let back = parse_instance(&text).unwrap();
        prop_assert_eq!(&back, &inst);
        prop_assert_eq!(write_instance(&back), text);
    }

    /// Housekeeping never changes solvability and its lifted solutions
    /// satisfy the original instance.
    #[test]
    fn housekeeping_is_solvability_exact(n in 2usize..6, density in 0.2f64..1.6, seed in any::<u64>()) {
        let inst = gen::random_csp(n, 4, density, seed);
        let solvable = inst.brute_force_solve().is_some();
        match housekeep(&inst) {
            None => prop_assert!(!solvable),
            Some(hk) => {
                prop_assert_eq!(hk.instance.brute_force_solve().is_some(), solvable);
                if let Some(sol) = hk.instance.brute_force_solve() {
                    let lifted = hk.maps.lift(sol);
                    prop_assert_eq!(inst.is_solution(&lifted), Ok(true));
                }
            }
        }
    }

    /// Two-color elimination is solvability-exact with valid back-maps.
    #[test]
    fn two_color_elimination_is_exact(n in 2usize..6, density in 0.5f64..1.8, seed in any::<u64>()) {
        let inst = gen::random_csp(n, 4, density, seed);
        // Manufacture a two-color variable by deleting from the first.
        let v = inst.var_ids().next().unwrap();
        let dom: Vec<u32> = inst.domain(v).unwrap().iter().copied().collect();
        let mut cur = inst.clone();
        let mut chain = MapChain::new();
        for &c in dom.iter().skip(2) {
            match cur.delete_color(v, c).unwrap() {
                Step::Reduced(next, _) => cur = next,
                Step::Unsat => return Ok(()),
            }
        }
        let before = cur.clone();
        match cur.eliminate_two_color(v).unwrap() {
            Step::Unsat => prop_assert!(before.brute_force_solve().is_none()),
            Step::Reduced(after, map) => {
                chain.push(map);
                prop_assert_eq!(
                    after.brute_force_solve().is_some(),
                    before.brute_force_solve().is_some()
                );
                if let Some(sol) = after.brute_force_solve() {
                    let lifted = chain.lift(sol);
                    prop_assert_eq!(before.is_solution(&lifted), Ok(true));
                }
            }
        }
    }

    /// The solver agrees with brute force on arbitrary small instances.
    #[test]
    fn solver_matches_oracle(n in 1usize..6, density in 0.0f64..1.8, seed in any::<u64>()) {
        let inst = gen::random_csp(n, 4, density, seed);
        let (got, _) = trichrome::solver::solve(&inst);
        prop_assert_eq!(got.is_some(), inst.brute_force_solve().is_some());
        if let Some(a) = got {
            prop_assert_eq!(inst.is_solution(&a), Ok(true));
        }
    }
}
