//! Branch-and-reduce solver for (3,2)- and (4,2)-CSP.
//!
//! The search keeps an instance in a housekept normal form (no empty or
//! singleton domains, no unconstrained colors, no two-color variables)
//! and repeatedly fires the first applicable rule of a fixed catalog,
//! R1 through R9. Each rule replaces the instance by one or more strictly
//! smaller child instances such that the parent is solvable iff some
//! child is. When no rule applies, every constraint lies in a good
//! three-component or a triangular two-component and a bipartite matching
//! decides the instance outright.
//!
//! Rule constructions here are verified stand-ins: each is
//! solvability-exact (oracle-tested), while the size decrement it
//! achieves is measured per branch and logged against the catalog's
//! claimed decrement rather than assumed.

use crate::csp::{
    Assignment, Color, CspError, CspInstance, MapChain, Pair, Propagated,
    SolutionMap, Step, VarId,
};
use crate::graph::max_bipartite_matching;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RuleId {
    /// R1: merge two three-color variables joined by an isolated constraint.
    MergeIsolated,
    /// R2: branch on the unique neighbor of a singly-constrained color.
    SingleConstraint,
    /// R3: a color with two or more constraints into the same variable.
    DoubleToSameVar,
    /// R4: a color constrained by four or more variables, or a four-color
    /// variable's color constrained by three.
    HighDegreeColor,
    /// R5: a three-constraint pair touching a four-color variable.
    TripleAtFourColor,
    /// R6: a three-constraint pair adjacent to a two-constraint pair.
    TripleNextToDouble,
    /// R7: a small three-component that is not good.
    SmallBadComponent,
    /// R8: a large three-component.
    LargeComponent,
    /// R9: a two-component that is not a triangle.
    NonTriangleCycle,
}

impl RuleId {
    pub const ALL: [RuleId; 9] = [
        RuleId::MergeIsolated,
        RuleId::SingleConstraint,
        RuleId::DoubleToSameVar,
        RuleId::HighDegreeColor,
        RuleId::TripleAtFourColor,
        RuleId::TripleNextToDouble,
        RuleId::SmallBadComponent,
        RuleId::LargeComponent,
        RuleId::NonTriangleCycle,
    ];

    pub fn code(&self) -> &'static str {
        match self {
            RuleId::MergeIsolated => "R1",
            RuleId::SingleConstraint => "R2",
            RuleId::DoubleToSameVar => "R3",
            RuleId::HighDegreeColor => "R4",
            RuleId::TripleAtFourColor => "R5",
            RuleId::TripleNextToDouble => "R6",
            RuleId::SmallBadComponent => "R7",
            RuleId::LargeComponent => "R8",
            RuleId::NonTriangleCycle => "R9",
        }
    }

    /// Claimed per-branch size decrements, largest first. These are the
    /// targets the telemetry compares against.
    pub fn claimed_decrements(&self, eps: f64) -> Vec<f64> {
        match self {
            RuleId::MergeIsolated => vec![eps],
            RuleId::SingleConstraint => vec![3.0 - eps, 2.0 - eps],
            RuleId::DoubleToSameVar => vec![3.0 - 2.0 * eps, 2.0 - eps],
            RuleId::HighDegreeColor => vec![5.0 - 4.0 * eps, 1.0 - eps],
            RuleId::TripleAtFourColor => vec![4.0 - eps, 4.0 - eps, 3.0 - eps],
            RuleId::TripleNextToDouble => vec![4.0, 1.0 + eps],
            RuleId::SmallBadComponent => vec![4.0, 4.0, 4.0],
            RuleId::LargeComponent => vec![5.0, 5.0, 4.0, 4.0],
            RuleId::NonTriangleCycle => vec![5.0, 3.0, 3.0],
        }
    }
}

impl fmt::Display for RuleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code())
    }
}

/// One branch of a reduction: a strictly smaller child and the map that
/// lifts any of its solutions back to the parent.
#[derive(Debug, Clone)]
pub struct Branch {
    pub child: CspInstance,
    pub maps: MapChain,
    pub decrement: f64,
}

/// A triggered rule. Branches are ordered largest decrement first, which
/// puts the "use the color" arm ahead of the "delete it" arm. Children
/// whose construction already refutes them (a domain emptied) are
/// dropped, so an empty branch list means the parent is unsatisfiable.
#[derive(Debug, Clone)]
pub struct ReductionStep {
    pub rule: RuleId,
    pub branches: Vec<Branch>,
    pub claimed: Vec<f64>,
}

#[derive(Debug, Clone, Default)]
pub struct RuleStats {
    pub triggers: u64,
    pub branches: u64,
    pub min_decrement: f64,
    pub sum_decrement: f64,
    /// Worst observed gap `claimed - achieved` over aligned branches;
    /// zero when every branch met its claim.
    pub worst_shortfall: f64,
}

#[derive(Debug, Clone, Default)]
pub struct SearchStats {
    pub calls: u64,
    pub base_case_count: u64,
    pub root_size: f64,
    pub rules: BTreeMap<RuleId, RuleStats>,
}

impl SearchStats {
    /// Observed growth base: (recursive calls)^(1/root size).
    pub fn effective_work_factor(&self) -> f64 {
        if self.root_size <= 0.0 || self.calls == 0 {
            return 1.0;
        }
        (self.calls as f64).powf(1.0 / self.root_size)
    }

    fn record(&mut self, step: &ReductionStep) {
        let entry = self.rules.entry(step.rule).or_default();
        entry.triggers += 1;
        for (i, b) in step.branches.iter().enumerate() {
            entry.branches += 1;
            if entry.branches == 1 || b.decrement < entry.min_decrement {
                entry.min_decrement = b.decrement;
            }
            entry.sum_decrement += b.decrement;
            if let Some(&claim) = step.claimed.get(i) {
                let gap = claim - b.decrement;
                if gap > entry.worst_shortfall {
                    entry.worst_shortfall = gap;
                }
            }
        }
    }

    pub fn merge(&mut self, other: &SearchStats) {
        self.calls += other.calls;
        self.base_case_count += other.base_case_count;
        for (rule, rs) in &other.rules {
            let entry = self.rules.entry(*rule).or_default();
            let fresh = entry.branches == 0;
            entry.triggers += rs.triggers;
            entry.branches += rs.branches;
            entry.sum_decrement += rs.sum_decrement;
            if fresh || rs.min_decrement < entry.min_decrement {
                entry.min_decrement = rs.min_decrement;
            }
            entry.worst_shortfall = entry.worst_shortfall.max(rs.worst_shortfall);
        }
    }
}

/// Instance after housekeeping, with the back-maps accumulated on the way.
#[derive(Debug, Clone)]
pub struct Housekept {
    pub instance: CspInstance,
    pub maps: MapChain,
}

/// Drives an instance to the solver's normal form: empty domains signal
/// unsatisfiability, singleton domains are propagated, a variable owning
/// an unconstrained color is assigned that color (it conflicts with
/// nothing), and two-color variables are eliminated by resolution.
/// Returns `None` on a wipeout.
pub fn housekeep(inst: &CspInstance) -> Option<Housekept> {
    let mut cur = inst.clone();
    let mut maps = MapChain::new();
    'outer: loop {
        let degrees = cur.pair_degrees();
        let ids: Vec<VarId> = cur.var_ids().collect();
        for &v in &ids {
            let dom = cur.domain(v).unwrap();
            if dom.is_empty() {
                return None;
            }
            if dom.len() == 1 {
                let c = *dom.iter().next().unwrap();
                match cur.assign_and_propagate(v, c).unwrap() {
                    Propagated::Unsat => return None,
                    Propagated::Reduced { instance, fixed } => {
                        cur = instance;
                        maps.push(SolutionMap::extend(fixed));
                        continue 'outer;
                    }
                }
            }
        }
        for &v in &ids {
            let dom = cur.domain(v).unwrap();
            if let Some(&c) = dom.iter().find(|&&c| degrees.count((v, c)) == 0) {
                match cur.assign_and_propagate(v, c).unwrap() {
                    Propagated::Unsat => return None,
                    Propagated::Reduced { instance, fixed } => {
                        cur = instance;
                        maps.push(SolutionMap::extend(fixed));
                        continue 'outer;
                    }
                }
            }
        }
        for &v in &ids {
            if cur.domain(v).unwrap().len() == 2 {
                match cur.eliminate_two_color(v).unwrap() {
                    Step::Unsat => return None,
                    Step::Reduced(instance, map) => {
                        cur = instance;
                        maps.push(map);
                        continue 'outer;
                    }
                }
            }
        }
        return Some(Housekept {
            instance: cur,
            maps,
        });
    }
}

/// One primitive move inside a branch construction.
#[derive(Debug, Clone, Copy)]
enum BranchOp {
    Assign(VarId, Color),
    Delete(VarId, Color),
}

/// Applies the ops in order, then housekeeps. Returns `None` when the
/// combination is contradictory (the branch refutes itself), otherwise
/// the child, its back-map chain, and the achieved size decrement.
fn build_child(parent: &CspInstance, ops: &[BranchOp]) -> Option<Branch> {
    let mut cur = parent.clone();
    let mut maps = MapChain::new();
    let mut fixed_so_far: BTreeMap<VarId, Color> = BTreeMap::new();
    for &op in ops {
        match op {
            BranchOp::Assign(v, c) => {
                if let Some(&x) = fixed_so_far.get(&v) {
                    if x == c {
                        continue;
                    }
                    return None;
                }
                let Some(dom) = cur.domain(v) else {
                    unreachable!("variable left the instance without being fixed")
                };
                if !dom.contains(&c) {
                    return None;
                }
                match cur.assign_and_propagate(v, c).unwrap() {
                    Propagated::Unsat => return None,
                    Propagated::Reduced { instance, fixed } => {
                        cur = instance;
                        for &(w, x) in &fixed {
                            fixed_so_far.insert(w, x);
                        }
                        maps.push(SolutionMap::extend(fixed));
                    }
                }
            }
            BranchOp::Delete(v, c) => {
                if let Some(&x) = fixed_so_far.get(&v) {
                    if x == c {
                        return None;
                    }
                    continue;
                }
                let Some(dom) = cur.domain(v) else {
                    unreachable!("variable left the instance without being fixed")
                };
                if !dom.contains(&c) {
                    continue;
                }
                match cur.delete_color(v, c).unwrap() {
                    Step::Unsat => return None,
                    Step::Reduced(instance, _) => cur = instance,
                }
            }
        }
    }
    let hk = housekeep(&cur)?;
    maps.append(hk.maps);
    Some(Branch {
        decrement: parent.size() - hk.instance.size(),
        child: hk.instance,
        maps,
    })
}

fn step_from_specs(
    parent: &CspInstance,
    rule: RuleId,
    specs: Vec<Vec<BranchOp>>,
    claimed: Vec<f64>,
) -> ReductionStep {
    let mut branches: Vec<Branch> = specs
        .into_iter()
        .filter_map(|ops| build_child(parent, &ops))
        .collect();
    branches.sort_by(|a, b| b.decrement.partial_cmp(&a.decrement).unwrap());
    let mut claimed = claimed;
    claimed.sort_by(|a, b| b.partial_cmp(a).unwrap());
    ReductionStep {
        rule,
        branches,
        claimed,
    }
}

/// Applies one rule directly, checking only that rule's own trigger.
/// Used by the priority scan and by the per-rule soundness harness.
pub fn apply_rule(rule: RuleId, inst: &CspInstance) -> Option<ReductionStep> {
    let degrees = inst.pair_degrees();
    let eps = inst.measure().epsilon;
    match rule {
        RuleId::MergeIsolated => {
            for c in inst.constraints() {
                let (a, b) = c.ends();
                if degrees.count(a) == 1
                    && degrees.count(b) == 1
                    && inst.domain(a.0).unwrap().len() == 3
                    && inst.domain(b.0).unwrap().len() == 3
                {
                    match inst.merge_isolated_pair(a.0, b.0).unwrap() {
                        Step::Unsat => unreachable!("merge never wipes out"),
                        Step::Reduced(child, map) => {
                            let mut maps = MapChain::new();
                            maps.push(map);
                            let branch = match housekeep(&child) {
                                None => None,
                                Some(hk) => {
                                    maps.append(hk.maps);
                                    Some(Branch {
                                        decrement: inst.size() - hk.instance.size(),
                                        child: hk.instance,
                                        maps,
                                    })
                                }
                            };
                            return Some(ReductionStep {
                                rule,
                                branches: branch.into_iter().collect(),
                                claimed: vec![eps],
                            });
                        }
                    }
                }
            }
            None
        }
        RuleId::SingleConstraint => {
            for (pair, neighbors) in degrees.pairs() {
                if neighbors.len() != 1 {
                    continue;
                }
                let _ = pair;
                let (w, s) = neighbors[0];
                let specs = vec![
                    vec![BranchOp::Assign(w, s)],
                    vec![BranchOp::Delete(w, s)],
                ];
                return Some(step_from_specs(
                    inst,
                    rule,
                    specs,
                    rule.claimed_decrements(eps),
                ));
            }
            None
        }
        RuleId::DoubleToSameVar => {
            for (pair, neighbors) in degrees.pairs() {
                let mut by_var: BTreeMap<VarId, Vec<Color>> = BTreeMap::new();
                for &(w, s) in neighbors {
                    by_var.entry(w).or_default().push(s);
                }
                let Some((&w, colors)) = by_var.iter().find(|(_, cs)| cs.len() >= 2) else {
                    continue;
                };
                let constrained: BTreeSet<Color> = colors.iter().copied().collect();
                let dom_w = inst.domain(w).unwrap();
                let rest: Vec<Color> = dom_w
                    .iter()
                    .copied()
                    .filter(|c| !constrained.contains(c))
                    .collect();
                if rest.is_empty() {
                    // Every color of w conflicts with this pair: using the
                    // pair would wipe w out, so its color goes outright.
                    let specs = vec![vec![BranchOp::Delete(pair.0, pair.1)]];
                    return Some(step_from_specs(inst, rule, specs, vec![1.0 - eps]));
                }
                let keep_rest: Vec<BranchOp> = constrained
                    .iter()
                    .map(|&c| BranchOp::Delete(w, c))
                    .collect();
                let keep_constrained: Vec<BranchOp> =
                    rest.iter().map(|&c| BranchOp::Delete(w, c)).collect();
                return Some(step_from_specs(
                    inst,
                    rule,
                    vec![keep_rest, keep_constrained],
                    rule.claimed_decrements(eps),
                ));
            }
            None
        }
        RuleId::HighDegreeColor => {
            for (pair, neighbors) in degrees.pairs() {
                let nvars: BTreeSet<VarId> = neighbors.iter().map(|&(w, _)| w).collect();
                let four_color = inst.domain(pair.0).unwrap().len() == 4;
                if nvars.len() >= 4 || (four_color && nvars.len() >= 3) {
                    let specs = vec![
                        vec![BranchOp::Assign(pair.0, pair.1)],
                        vec![BranchOp::Delete(pair.0, pair.1)],
                    ];
                    return Some(step_from_specs(
                        inst,
                        rule,
                        specs,
                        rule.claimed_decrements(eps),
                    ));
                }
            }
            None
        }
        RuleId::TripleAtFourColor => {
            for (pair, neighbors) in degrees.pairs() {
                if neighbors.len() != 3 || inst.domain(pair.0).unwrap().len() != 3 {
                    continue;
                }
                if neighbors
                    .iter()
                    .any(|&(w, _)| inst.domain(w).unwrap().len() == 4)
                {
                    let specs = inst
                        .domain(pair.0)
                        .unwrap()
                        .iter()
                        .map(|&c| vec![BranchOp::Assign(pair.0, c)])
                        .collect();
                    return Some(step_from_specs(
                        inst,
                        rule,
                        specs,
                        rule.claimed_decrements(eps),
                    ));
                }
            }
            None
        }
        RuleId::TripleNextToDouble => {
            for (pair, neighbors) in degrees.pairs() {
                if neighbors.len() != 3 || inst.domain(pair.0).unwrap().len() != 3 {
                    continue;
                }
                if neighbors.iter().any(|&p| degrees.count(p) == 2) {
                    let specs = vec![
                        vec![BranchOp::Assign(pair.0, pair.1)],
                        vec![BranchOp::Delete(pair.0, pair.1)],
                    ];
                    return Some(step_from_specs(
                        inst,
                        rule,
                        specs,
                        rule.claimed_decrements(eps),
                    ));
                }
            }
            None
        }
        RuleId::SmallBadComponent => {
            for comp in pair_components(&degrees, 3) {
                if comp.vars.len() <= 4 && comp.pairs.len() > 4 {
                    // Five or more pairs on at most four variables: some
                    // variable owns two of them; split it by color.
                    let mut owners: BTreeMap<VarId, usize> = BTreeMap::new();
                    for &(v, _) in &comp.pairs {
                        *owners.entry(v).or_default() += 1;
                    }
                    let (&v, _) = owners.iter().find(|(_, &k)| k >= 2)?;
                    let specs = inst
                        .domain(v)
                        .unwrap()
                        .iter()
                        .map(|&c| vec![BranchOp::Assign(v, c)])
                        .collect();
                    return Some(step_from_specs(
                        inst,
                        rule,
                        specs,
                        rule.claimed_decrements(eps),
                    ));
                }
            }
            None
        }
        RuleId::LargeComponent => {
            for comp in pair_components(&degrees, 3) {
                if comp.vars.len() >= 5 {
                    let (v, r) = comp.pairs[0];
                    let nb = degrees.neighbor_pairs((v, r));
                    let (w1, s1) = nb[0];
                    let (w2, s2) = nb[1];
                    let specs = vec![
                        vec![BranchOp::Assign(v, r)],
                        vec![BranchOp::Delete(v, r), BranchOp::Assign(w1, s1)],
                        vec![
                            BranchOp::Delete(v, r),
                            BranchOp::Delete(w1, s1),
                            BranchOp::Assign(w2, s2),
                        ],
                        vec![
                            BranchOp::Delete(v, r),
                            BranchOp::Delete(w1, s1),
                            BranchOp::Delete(w2, s2),
                        ],
                    ];
                    return Some(step_from_specs(
                        inst,
                        rule,
                        specs,
                        rule.claimed_decrements(eps),
                    ));
                }
            }
            None
        }
        RuleId::NonTriangleCycle => {
            for comp in pair_components(&degrees, 2) {
                if is_triangle(&comp, &degrees) {
                    continue;
                }
                // In the solver's normal form two-constraint pairs form
                // cycles: walk two steps from the lowest pair and branch on
                // the pairs at distance two. Outside that normal form the
                // walk may dead-end; branching on p1's other neighbor is
                // equally sound (the split below is complete for any pair).
                let p1 = comp.pairs[0];
                let p2 = degrees.neighbor_pairs(p1)[0];
                let p3 = *degrees
                    .neighbor_pairs(p2)
                    .iter()
                    .find(|&&q| q != p1)
                    .unwrap_or(&degrees.neighbor_pairs(p1)[1]);
                let specs = vec![
                    vec![BranchOp::Assign(p1.0, p1.1)],
                    vec![BranchOp::Assign(p3.0, p3.1)],
                    vec![
                        BranchOp::Delete(p1.0, p1.1),
                        BranchOp::Delete(p3.0, p3.1),
                    ],
                ];
                return Some(step_from_specs(
                    inst,
                    rule,
                    specs,
                    rule.claimed_decrements(eps),
                ));
            }
            None
        }
    }
}

/// First applicable rule in catalog order, or `None` when the instance is
/// in the matching base case. Expects a housekept instance.
pub fn find_reduction(inst: &CspInstance) -> Option<ReductionStep> {
    RuleId::ALL.iter().find_map(|&r| apply_rule(r, inst))
}

/// A connected set of equally-constrained (variable, color) pairs.
#[derive(Debug, Clone)]
pub struct Component {
    pub pairs: Vec<Pair>,
    pub vars: BTreeSet<VarId>,
    pub label: ComponentLabel,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ComponentLabel {
    SmallGood,
    SmallNotGood,
    Large,
    Triangle,
    NonTriangle,
}

/// Partition of constrained pairs into components over pairs with
/// exactly two and exactly three constraints.
#[derive(Debug, Clone)]
pub struct ComponentView {
    pub three_components: Vec<Component>,
    pub two_components: Vec<Component>,
}

/// Connected components of the constraint relation restricted to pairs
/// with exactly `count` constraints, each sorted, ordered by lowest pair.
/// Labels are placeholders (`Large`); `classify_components` sets them.
fn pair_components(degrees: &crate::csp::PairDegrees, count: usize) -> Vec<Component> {
    let member: BTreeSet<Pair> = degrees
        .pairs()
        .filter(|(_, n)| n.len() == count)
        .map(|(p, _)| p)
        .collect();
    let mut seen: BTreeSet<Pair> = BTreeSet::new();
    let mut out = Vec::new();
    for &start in &member {
        if seen.contains(&start) {
            continue;
        }
        let mut stack = vec![start];
        let mut pairs = Vec::new();
        seen.insert(start);
        while let Some(p) = stack.pop() {
            pairs.push(p);
            for &q in degrees.neighbor_pairs(p) {
                if member.contains(&q) && seen.insert(q) {
                    stack.push(q);
                }
            }
        }
        pairs.sort_unstable();
        let vars = pairs.iter().map(|&(v, _)| v).collect();
        out.push(Component {
            pairs,
            vars,
            label: ComponentLabel::Large,
        });
    }
    out.sort_by_key(|c| c.pairs[0]);
    out
}

fn is_triangle(comp: &Component, degrees: &crate::csp::PairDegrees) -> bool {
    comp.pairs.len() == 3
        && comp.pairs.iter().all(|&p| {
            let nb = degrees.neighbor_pairs(p);
            nb.len() == 2 && nb.iter().all(|q| comp.pairs.contains(q))
        })
}

/// Labels every component. Errors unless every constrained pair has
/// exactly two or three constraints (the normal form after R1-R4).
pub fn classify_components(inst: &CspInstance) -> Result<ComponentView, CspError> {
    let degrees = inst.pair_degrees();
    for (pair, neighbors) in degrees.pairs() {
        if neighbors.len() != 2 && neighbors.len() != 3 {
            return Err(CspError::Contract(format!(
                "pair ({}, {}) has {} constraints; classification needs exactly 2 or 3",
                pair.0,
                pair.1,
                neighbors.len()
            )));
        }
    }
    let mut three = pair_components(&degrees, 3);
    for c in &mut three {
        c.label = if c.vars.len() > 4 {
            ComponentLabel::Large
        } else if c.pairs.len() <= 4 {
            ComponentLabel::SmallGood
        } else {
            ComponentLabel::SmallNotGood
        };
    }
    let mut two = pair_components(&degrees, 2);
    for c in &mut two {
        c.label = if is_triangle(c, &degrees) {
            ComponentLabel::Triangle
        } else {
            ComponentLabel::NonTriangle
        };
    }
    Ok(ComponentView {
        three_components: three,
        two_components: two,
    })
}

/// Independent statement of the base-case precondition: every color of
/// every variable is a constrained pair, and every constraint joins two
/// pairs of the same good three-component or triangular two-component.
pub fn base_case_ready(inst: &CspInstance) -> bool {
    let degrees = inst.pair_degrees();
    for v in inst.var_ids() {
        for &c in inst.domain(v).unwrap() {
            if !matches!(degrees.count((v, c)), 2 | 3) {
                return false;
            }
        }
    }
    let Ok(view) = classify_components(inst) else {
        return false;
    };
    let mut home: BTreeMap<Pair, (usize, ComponentLabel)> = BTreeMap::new();
    for (i, comp) in view
        .three_components
        .iter()
        .chain(view.two_components.iter())
        .enumerate()
    {
        for &p in &comp.pairs {
            home.insert(p, (i, comp.label));
        }
    }
    inst.constraints().all(|c| {
        let (a, b) = c.ends();
        match (home.get(&a), home.get(&b)) {
            (Some(&(ia, la)), Some(&(ib, _))) => {
                ia == ib
                    && matches!(la, ComponentLabel::SmallGood | ComponentLabel::Triangle)
            }
            _ => false,
        }
    })
}

/// Decides a base-case instance by bipartite matching.
///
/// Variables sit on the left, components on the right, with an edge when
/// the variable owns a pair in the component. Each good component's pairs
/// are pairwise constrained, so a solution can use at most one pair per
/// component and must pick one pair per variable: solvable iff a matching
/// covers all variables. The matched pair's color is the assignment.
pub fn matching_base_case(inst: &CspInstance) -> Result<Option<Assignment>, CspError> {
    if inst.is_empty() {
        return Ok(Some(Assignment::new()));
    }
    if !base_case_ready(inst) {
        return Err(CspError::Contract(
            "matching base case called outside its precondition".into(),
        ));
    }
    let view = classify_components(inst)?;
    let comps: Vec<&Component> = view
        .three_components
        .iter()
        .chain(view.two_components.iter())
        .collect();
    let vars: Vec<VarId> = inst.var_ids().collect();
    let var_index: BTreeMap<VarId, usize> =
        vars.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut edges = Vec::new();
    for (ci, comp) in comps.iter().enumerate() {
        for &(v, _) in &comp.pairs {
            edges.push((var_index[&v], ci));
        }
    }
    let matching = max_bipartite_matching(vars.len(), comps.len(), &edges);
    if matching.iter().any(Option::is_none) {
        return Ok(None);
    }
    let mut out = Assignment::new();
    for (li, &v) in vars.iter().enumerate() {
        let comp = comps[matching[li].unwrap()];
        let &(_, color) = comp
            .pairs
            .iter()
            .find(|&&(w, _)| w == v)
            .expect("matched component contains a pair of the variable");
        out.set(v, color);
    }
    debug_assert_eq!(inst.is_solution(&out), Ok(true));
    Ok(Some(out))
}

#[derive(Debug, Clone, Default)]
pub struct SolveOptions {
    /// Collect every base-case instance the search decides (for auditing
    /// the matching lemma against an oracle).
    pub collect_base_cases: bool,
}

#[derive(Debug)]
pub struct SolveOutcome {
    pub assignment: Option<Assignment>,
    pub stats: SearchStats,
    pub base_cases: Vec<CspInstance>,
}

/// Depth-first branch-and-reduce search.
///
/// Housekeeping, then the first applicable rule, recursing on branches in
/// decreasing-decrement order; at `None` the matching base case decides.
/// Any returned assignment is lifted through every back-map and satisfies
/// the original instance. Only (3,2)/(4,2) instances are accepted.
pub fn solve(inst: &CspInstance) -> (Option<Assignment>, SearchStats) {
    let out = solve_with_options(inst, &SolveOptions::default());
    (out.assignment, out.stats)
}

pub fn solve_with_options(inst: &CspInstance, opts: &SolveOptions) -> SolveOutcome {
    assert!(
        inst.max_domain() <= 4,
        "deterministic solver requires domains of at most 4 colors; use the randomized front end"
    );
    let mut stats = SearchStats {
        root_size: inst.size(),
        ..SearchStats::default()
    };
    let mut base_cases = Vec::new();
    let assignment = solve_rec(inst, &mut stats, opts, &mut base_cases);
    if let Some(a) = &assignment {
        debug_assert_eq!(inst.is_solution(a), Ok(true));
    }
    SolveOutcome {
        assignment,
        stats,
        base_cases,
    }
}

fn solve_rec(
    inst: &CspInstance,
    stats: &mut SearchStats,
    opts: &SolveOptions,
    base_cases: &mut Vec<CspInstance>,
) -> Option<Assignment> {
    stats.calls += 1;
    let hk = housekeep(inst)?;
    if hk.instance.is_empty() {
        return Some(hk.maps.lift(Assignment::new()));
    }
    match find_reduction(&hk.instance) {
        Some(step) => {
            stats.record(&step);
            for branch in &step.branches {
                debug_assert!(branch.decrement > 0.0, "non-shrinking branch");
                if let Some(sol) = solve_rec(&branch.child, stats, opts, base_cases) {
                    return Some(hk.maps.lift(branch.maps.lift(sol)));
                }
            }
            None
        }
        None => {
            stats.base_case_count += 1;
            debug_assert!(base_case_ready(&hk.instance), "reduction catalog incomplete");
            if opts.collect_base_cases {
                base_cases.push(hk.instance.clone());
            }
            let verdict = matching_base_case(&hk.instance)
                .expect("base case precondition must hold when no rule fires");
            verdict.map(|sol| hk.maps.lift(sol))
        }
    }
}
