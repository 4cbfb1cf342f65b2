//! Randomized solvers for (d,2)-CSP.
//!
//! Both algorithms repeat independent restriction trials: restrict every
//! variable to a random subset of its colors, solve the restricted
//! instance with an exact method, and accept any solution found (a
//! restriction only removes colors, so solutions always transfer to the
//! original instance). On a solvable instance a trial succeeds with
//! probability at least (4/d)^n (four-subsets) or (2/d)^n (pairs).
//!
//! The underlying algorithms never terminate on unsolvable input, so a
//! trial cap is imposed and the residual confidence (1 - p)^trials is
//! reported with the verdict.

use crate::csp::{solve_22csp, Assignment, Color, CspError, CspInstance, VarId};
use crate::rng::Rng;
use crate::solver::solve;
use std::collections::{BTreeMap, BTreeSet};

#[derive(Debug, Clone, PartialEq)]
pub struct TrialPolicy {
    pub max_trials: u64,
    pub seed: u64,
    /// Residual-confidence threshold: when (1-p)^trials falls at or below
    /// this value the verdict is "unsat, likely" instead of "unknown".
    pub confidence: f64,
}

impl TrialPolicy {
    pub fn new(max_trials: u64, seed: u64, confidence: f64) -> Self {
        assert!(max_trials >= 1, "need at least one trial");
        assert!(
            confidence > 0.0 && confidence < 1.0,
            "confidence must lie in (0,1)"
        );
        TrialPolicy {
            max_trials,
            seed,
            confidence,
        }
    }
}

impl Default for TrialPolicy {
    fn default() -> Self {
        TrialPolicy::new(1000, 0, 1e-3)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RandomVerdict {
    /// A solution of the original instance, verified before returning.
    Sat(Assignment),
    /// All trials failed and the residual solvability confidence dropped
    /// to or below the policy threshold.
    UnsatLikely { trials: u64, residual: f64 },
    /// All trials failed but the residual stayed above the threshold.
    Unknown { trials: u64, residual: f64 },
}

impl RandomVerdict {
    pub fn assignment(&self) -> Option<&Assignment> {
        match self {
            RandomVerdict::Sat(a) => Some(a),
            _ => None,
        }
    }
}

/// Per-trial success probability lower bound for keep-`keep` restriction:
/// the product over variables of keep/k (capped at 1).
fn success_bound(inst: &CspInstance, keep: usize) -> f64 {
    inst.var_ids()
        .map(|v| {
            let k = inst.domain(v).unwrap().len();
            if k <= keep {
                1.0
            } else {
                keep as f64 / k as f64
            }
        })
        .product()
}

fn random_restriction(inst: &CspInstance, keep: usize, rng: &mut Rng) -> CspInstance {
    let mut keep_map: BTreeMap<VarId, BTreeSet<Color>> = BTreeMap::new();
    for v in inst.var_ids() {
        let colors: Vec<Color> = inst.domain(v).unwrap().iter().copied().collect();
        if colors.len() <= keep {
            keep_map.insert(v, colors.into_iter().collect());
        } else {
            let picked = rng.subset(colors.len(), keep);
            keep_map.insert(v, picked.into_iter().map(|i| colors[i]).collect());
        }
    }
    inst.restrict_domains(&keep_map)
}

/// One four-subset restriction trial, solved exactly. Exposed so callers
/// can measure per-trial success rates; trials are independent across
/// `trial` indices and reproducible from `(seed, trial)`.
pub fn restrict4_trial(inst: &CspInstance, seed: u64, trial: u64) -> Option<Assignment> {
    let mut rng = Rng::stream(seed, trial);
    let restricted = random_restriction(inst, 4, &mut rng);
    let (solution, _) = solve(&restricted);
    solution
}

/// One random-pair trial, solved by the polynomial two-color solver.
pub fn pairs_trial(inst: &CspInstance, seed: u64, trial: u64) -> Option<Assignment> {
    let mut rng = Rng::stream(seed, trial);
    let restricted = random_restriction(inst, 2, &mut rng);
    solve_22csp(&restricted).expect("restriction leaves at most two colors")
}

/// Randomized (d,2)-CSP solver for d > 4: restrict every variable to a
/// uniform four-color subset and solve the (4,2) restriction exactly,
/// repeating up to the trial cap. d = 4 degenerates to one deterministic
/// run. Errors when the instance is already within three colors (use the
/// deterministic solver).
pub fn solve_random_restrict4(
    inst: &CspInstance,
    policy: &TrialPolicy,
) -> Result<RandomVerdict, CspError> {
    let d = inst.max_domain();
    if d <= 3 {
        return Err(CspError::Contract(format!(
            "randomized restriction expects domains above four colors, max is {d}"
        )));
    }
    if d == 4 {
        let (solution, _) = solve(inst);
        return Ok(match solution {
            Some(a) => {
                debug_assert_eq!(inst.is_solution(&a), Ok(true));
                RandomVerdict::Sat(a)
            }
            None => RandomVerdict::UnsatLikely {
                trials: 1,
                residual: 0.0,
            },
        });
    }
    let p = success_bound(inst, 4);
    run_trials(inst, policy, p, |trial| {
        restrict4_trial(inst, policy.seed, trial)
    })
}

/// Randomized (d,2)-CSP solver: restrict every variable to a random pair
/// of colors and solve the two-color instance in polynomial time.
pub fn solve_random_pairs(
    inst: &CspInstance,
    policy: &TrialPolicy,
) -> Result<RandomVerdict, CspError> {
    let d = inst.max_domain();
    if d <= 2 {
        let verdict = solve_22csp(inst)?;
        return Ok(match verdict {
            Some(a) => RandomVerdict::Sat(a),
            None => RandomVerdict::UnsatLikely {
                trials: 1,
                residual: 0.0,
            },
        });
    }
    let p = success_bound(inst, 2);
    run_trials(inst, policy, p, |trial| {
        pairs_trial(inst, policy.seed, trial)
    })
}

fn run_trials(
    inst: &CspInstance,
    policy: &TrialPolicy,
    success_p: f64,
    mut trial: impl FnMut(u64) -> Option<Assignment>,
) -> Result<RandomVerdict, CspError> {
    for t in 0..policy.max_trials {
        if let Some(a) = trial(t) {
            if inst.is_solution(&a)? {
                return Ok(RandomVerdict::Sat(a));
            }
            // A restriction solution always satisfies the original; treat
            // anything else as a bug.
            return Err(CspError::Contract(
                "restricted solution failed on the original instance".into(),
            ));
        }
    }
    let residual = (1.0 - success_p).powf(policy.max_trials as f64);
    Ok(if residual <= policy.confidence {
        RandomVerdict::UnsatLikely {
            trials: policy.max_trials,
            residual,
        }
    } else {
        RandomVerdict::Unknown {
            trials: policy.max_trials,
            residual,
        }
    })
}
