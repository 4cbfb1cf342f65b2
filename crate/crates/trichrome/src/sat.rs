//! 3-SAT front end.
//!
//! The cost driver is the number of 3-clauses, not the number of
//! variables: after unit propagation the 1- and 2-clauses form a
//! polynomial side condition, and the solver picks one designated-true
//! literal per 3-clause. Selections are encoded as a CSP with one
//! variable per 3-clause whose colors are the clause's literals, with a
//! constraint wherever two selections conflict under the 2-CNF part.
//! Pairwise-compatible selections are jointly consistent with a 2-CNF
//! (its solution set is closed under the majority operation), and a final
//! polynomial 2-SAT completion both fills in the remaining variables and
//! double-checks that argument at runtime.

use crate::csp::{solve_22csp, CspInstance, VarId};
use crate::solver::{solve, SearchStats};
use crate::workfactor::SizeMeasure;
use std::collections::BTreeMap;
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum SatError {
    Parse(String),
    Contract(String),
}

impl fmt::Display for SatError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SatError::Parse(m) => write!(f, "parse error: {m}"),
            SatError::Contract(m) => write!(f, "contract violation: {m}"),
        }
    }
}

impl std::error::Error for SatError {}

/// DIMACS-style literal: +v / -v, variables 1-indexed.
pub type Lit = i32;

/// CNF with clauses of one to three literals. Clauses are normalized at
/// build: duplicate literals collapse, tautologies drop, longer clauses
/// are rejected. An explicitly empty clause is remembered and makes the
/// formula unsatisfiable.
#[derive(Debug, Clone, PartialEq)]
pub struct CnfFormula {
    num_vars: usize,
    clauses: Vec<Vec<Lit>>,
    has_empty_clause: bool,
}

impl CnfFormula {
    pub fn new(num_vars: usize, raw_clauses: Vec<Vec<Lit>>) -> Result<Self, SatError> {
        let mut clauses = Vec::with_capacity(raw_clauses.len());
        let mut has_empty_clause = false;
        for mut clause in raw_clauses {
            for &l in &clause {
                if l == 0 || l.unsigned_abs() as usize > num_vars {
                    return Err(SatError::Parse(format!("literal {l} out of range")));
                }
            }
            clause.sort_unstable_by_key(|l| (l.abs(), *l));
            clause.dedup();
            if clause.is_empty() {
                has_empty_clause = true;
                continue;
            }
            if clause.windows(2).any(|w| w[0] == -w[1]) {
                continue; // tautology
            }
            if clause.len() > 3 {
                return Err(SatError::Parse(format!(
                    "clause with {} literals; at most three are supported",
                    clause.len()
                )));
            }
            clauses.push(clause);
        }
        Ok(CnfFormula {
            num_vars,
            clauses,
            has_empty_clause,
        })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn clauses(&self) -> &[Vec<Lit>] {
        &self.clauses
    }

    pub fn has_empty_clause(&self) -> bool {
        self.has_empty_clause
    }

    /// Number of 3-clauses after normalization; the translation produces
    /// exactly this many CSP variables.
    pub fn three_clause_count(&self) -> usize {
        self.clauses.iter().filter(|c| c.len() == 3).count()
    }

    pub fn is_satisfied_by(&self, model: &[bool]) -> bool {
        if self.has_empty_clause || model.len() < self.num_vars {
            return false;
        }
        self.clauses.iter().all(|clause| {
            clause
                .iter()
                .any(|&l| model[l.unsigned_abs() as usize - 1] == (l > 0))
        })
    }
}

pub fn parse_dimacs_cnf(textual: &str) -> Result<CnfFormula, SatError> {
    let mut header: Option<(usize, usize)> = None;
    let mut clauses: Vec<Vec<Lit>> = Vec::new();
    let mut current: Vec<Lit> = Vec::new();
    for (lineno, raw) in textual.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('p') {
            if header.is_some() {
                return Err(SatError::Parse(format!("line {lineno}: duplicate p line")));
            }
            let toks: Vec<&str> = line.split_whitespace().collect();
            if toks.len() != 4 || toks[1] != "cnf" {
                return Err(SatError::Parse(format!(
                    "line {lineno}: expected `p cnf <vars> <clauses>`"
                )));
            }
            let n = toks[2]
                .parse()
                .map_err(|_| SatError::Parse(format!("line {lineno}: bad variable count")))?;
            let m = toks[3]
                .parse()
                .map_err(|_| SatError::Parse(format!("line {lineno}: bad clause count")))?;
            header = Some((n, m));
            continue;
        }
        if header.is_none() {
            return Err(SatError::Parse(format!(
                "line {lineno}: clause before p line"
            )));
        }
        for tok in line.split_whitespace() {
            let l: Lit = tok
                .parse()
                .map_err(|_| SatError::Parse(format!("line {lineno}: bad literal `{tok}`")))?;
            if l == 0 {
                clauses.push(std::mem::take(&mut current));
            } else {
                current.push(l);
            }
        }
    }
    if !current.is_empty() {
        return Err(SatError::Parse("unterminated final clause".into()));
    }
    let (n, m) = header.ok_or_else(|| SatError::Parse("missing p line".into()))?;
    if clauses.len() != m {
        return Err(SatError::Parse(format!(
            "header declares {m} clauses, file has {}",
            clauses.len()
        )));
    }
    CnfFormula::new(n, clauses)
}

pub fn write_dimacs_cnf(f: &CnfFormula) -> String {
    let mut out = format!(
        "p cnf {} {}\n",
        f.num_vars,
        f.clauses.len() + usize::from(f.has_empty_clause)
    );
    if f.has_empty_clause {
        out.push_str("0\n");
    }
    for clause in &f.clauses {
        for l in clause {
            out.push_str(&format!("{l} "));
        }
        out.push_str("0\n");
    }
    out
}

/// Encodes a 1-/2-clause formula (plus forced literals) as a two-color
/// CSP over all `num_vars` variables: color 1 = true, 0 = false.
fn two_cnf_csp(
    num_vars: usize,
    two_cnf: &[Vec<Lit>],
    forced: &[Lit],
) -> Result<CspInstance, SatError> {
    let mut domains: Vec<Vec<u32>> = vec![vec![0, 1]; num_vars];
    for &l in forced {
        let v = l.unsigned_abs() as usize - 1;
        let want = u32::from(l > 0);
        domains[v].retain(|&c| c == want);
    }
    let mut constraints = Vec::new();
    let mut extra_units: Vec<Lit> = Vec::new();
    for clause in two_cnf {
        match clause.len() {
            1 => extra_units.push(clause[0]),
            2 => {
                let (a, b) = (clause[0], clause[1]);
                let (va, vb) = (a.unsigned_abs() as usize - 1, b.unsigned_abs() as usize - 1);
                if va == vb {
                    // Normalization leaves only (l or l) = a unit here.
                    extra_units.push(a);
                    continue;
                }
                // Forbid the one falsifying combination.
                let ca = u32::from(a < 0);
                let cb = u32::from(b < 0);
                if domains[va].contains(&ca) && domains[vb].contains(&cb) {
                    constraints.push(((va, ca), (vb, cb)));
                }
            }
            n => {
                return Err(SatError::Contract(format!(
                    "two-CNF part contains a {n}-clause"
                )))
            }
        }
    }
    for l in extra_units {
        let v = l.unsigned_abs() as usize - 1;
        let want = u32::from(l > 0);
        domains[v].retain(|&c| c == want);
    }
    // Rebuild constraints that may now reference pruned colors.
    let constraints: Vec<_> = constraints
        .into_iter()
        .filter(|&((va, ca), (vb, cb))| domains[va].contains(&ca) && domains[vb].contains(&cb))
        .collect();
    CspInstance::build(&domains, &constraints, SizeMeasure::default())
        .map_err(|e| SatError::Contract(e.to_string()))
}

/// True iff the 1-/2-clause part together with both literals is
/// unsatisfiable, decided by the polynomial two-color solver.
pub fn literal_conflict(
    num_vars: usize,
    two_cnf: &[Vec<Lit>],
    l1: Lit,
    l2: Lit,
) -> Result<bool, SatError> {
    let csp = two_cnf_csp(num_vars, two_cnf, &[l1, l2])?;
    let verdict = solve_22csp(&csp).map_err(|e| SatError::Contract(e.to_string()))?;
    Ok(verdict.is_none())
}

/// Translation to a selection CSP: one variable per 3-clause whose colors
/// are the indices of its literals. A color is dropped when its literal
/// already conflicts with the 2-CNF part alone, and two colors of
/// different clause variables are constrained when their literals
/// conflict jointly. The instance has exactly `three_clause_count`
/// variables, independent of the variable and 2-clause counts.
pub fn translate_3sat(f: &CnfFormula) -> Result<CspInstance, SatError> {
    if f.has_empty_clause {
        return Err(SatError::Contract(
            "formula carries an empty clause".into(),
        ));
    }
    let two_cnf: Vec<Vec<Lit>> = f
        .clauses
        .iter()
        .filter(|c| c.len() <= 2)
        .cloned()
        .collect();
    let threes: Vec<&Vec<Lit>> = f.clauses.iter().filter(|c| c.len() == 3).collect();

    let mut domains: Vec<Vec<u32>> = Vec::with_capacity(threes.len());
    for clause in &threes {
        let mut colors = Vec::new();
        for (j, &l) in clause.iter().enumerate() {
            if !literal_conflict(f.num_vars, &two_cnf, l, l)? {
                colors.push(j as u32);
            }
        }
        domains.push(colors);
    }
    let mut constraints = Vec::new();
    for i in 0..threes.len() {
        for j in i + 1..threes.len() {
            for &ci in &domains[i] {
                for &cj in &domains[j] {
                    let (li, lj) = (threes[i][ci as usize], threes[j][cj as usize]);
                    if literal_conflict(f.num_vars, &two_cnf, li, lj)? {
                        constraints.push(((i, ci), (j, cj)));
                    }
                }
            }
        }
    }
    CspInstance::build(&domains, &constraints, SizeMeasure::default())
        .map_err(|e| SatError::Contract(e.to_string()))
}

#[derive(Debug, Clone, Default)]
pub struct SatStats {
    pub three_clauses: usize,
    pub translated_vars: usize,
    pub units_fixed: usize,
    pub csp: SearchStats,
}

type PropagatedCnf = (Vec<Vec<Lit>>, BTreeMap<usize, bool>);

/// Unit-propagates to a fixpoint. Returns the simplified clause list and
/// the forced assignments, or `None` on a conflict.
fn unit_propagate(f: &CnfFormula) -> Option<PropagatedCnf> {
    let mut clauses: Vec<Vec<Lit>> = f.clauses.clone();
    let mut forced: BTreeMap<usize, bool> = BTreeMap::new();
    loop {
        let unit = clauses.iter().find(|c| c.len() == 1).map(|c| c[0]);
        let Some(l) = unit else {
            return Some((clauses, forced));
        };
        let v = l.unsigned_abs() as usize - 1;
        let value = l > 0;
        if let Some(&old) = forced.get(&v) {
            if old != value {
                return None;
            }
        }
        forced.insert(v, value);
        let mut next = Vec::with_capacity(clauses.len());
        for clause in &clauses {
            if clause.contains(&l) {
                continue; // satisfied
            }
            let reduced: Vec<Lit> = clause.iter().copied().filter(|&x| x != -l).collect();
            if reduced.is_empty() {
                return None;
            }
            next.push(reduced);
        }
        clauses = next;
    }
}

/// Decides the formula and produces a full model on success.
pub fn solve_3sat(f: &CnfFormula) -> (Option<Vec<bool>>, SatStats) {
    let mut stats = SatStats {
        three_clauses: f.three_clause_count(),
        ..SatStats::default()
    };
    if f.has_empty_clause {
        return (None, stats);
    }
    let Some((clauses, forced)) = unit_propagate(f) else {
        return (None, stats);
    };
    stats.units_fixed = forced.len();
    let simplified = CnfFormula::new(f.num_vars, clauses).expect("propagation keeps clauses legal");
    let translated = translate_3sat(&simplified).expect("no empty clause after propagation");
    stats.translated_vars = translated.var_count();

    let (selection, search) = solve(&translated);
    stats.csp.merge(&search);
    let Some(selection) = selection else {
        return (None, stats);
    };

    // Designated literals per 3-clause, then a polynomial completion over
    // the 2-CNF part. The completion must succeed; pairwise compatibility
    // plus majority-closure of 2-CNF solution sets guarantees it.
    let threes: Vec<&Vec<Lit>> = simplified.clauses.iter().filter(|c| c.len() == 3).collect();
    let two_cnf: Vec<Vec<Lit>> = simplified
        .clauses
        .iter()
        .filter(|c| c.len() <= 2)
        .cloned()
        .collect();
    let mut selected: Vec<Lit> = forced
        .iter()
        .map(|(&v, &b)| if b { v as Lit + 1 } else { -(v as Lit + 1) })
        .collect();
    for (i, clause) in threes.iter().enumerate() {
        let color = selection
            .get(VarId(i))
            .expect("selection CSP assigns every clause variable");
        selected.push(clause[color as usize]);
    }
    let completion_csp = two_cnf_csp(f.num_vars, &two_cnf, &selected)
        .expect("completion instance is well-formed");
    let completion = solve_22csp(&completion_csp)
        .expect("two-color domains")
        .expect("completion failed: compatible selections must extend to a model");
    let model: Vec<bool> = (0..f.num_vars)
        .map(|v| completion.get(VarId(v)) == Some(1))
        .collect();
    assert!(
        f.is_satisfied_by(&model),
        "internal error: completed model does not satisfy the formula"
    );
    (Some(model), stats)
}

/// Exhaustive oracle: scans assignments in ascending binary order
/// (variable 1 is the least significant bit).
pub fn brute_force_sat(f: &CnfFormula) -> Option<Vec<bool>> {
    if f.has_empty_clause {
        return None;
    }
    assert!(f.num_vars <= 26, "oracle is for small formulas");
    for mask in 0u64..(1u64 << f.num_vars) {
        let model: Vec<bool> = (0..f.num_vars).map(|v| mask & (1 << v) != 0).collect();
        if f.is_satisfied_by(&model) {
            return Some(model);
        }
    }
    None
}
