//! Shared helpers for the integration suites: independent re-statements
//! of solver predicates (kept free of the solver's own code paths) and
//! targeted generators for rule-trigger instances.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use trichrome::csp::{Color, CspInstance, Pair, VarId};
use trichrome::rng::Rng;
use trichrome::solver::RuleId;
use trichrome::workfactor::SizeMeasure;

/// Plain union-find, used to recompute component structure without the
/// solver's traversal.
pub struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    pub fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    pub fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    pub fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }
}

fn pair_neighbors(inst: &CspInstance) -> BTreeMap<Pair, Vec<Pair>> {
    let mut map: BTreeMap<Pair, Vec<Pair>> = BTreeMap::new();
    for c in inst.constraints() {
        let (a, b) = c.ends();
        map.entry(a).or_default().push(b);
        map.entry(b).or_default().push(a);
    }
    map
}

/// Components of equally-counted pairs via union-find; returns sorted
/// component pair-lists.
pub fn components_by_count(inst: &CspInstance, count: usize) -> Vec<Vec<Pair>> {
    let nbrs = pair_neighbors(inst);
    let member: Vec<Pair> = nbrs
        .iter()
        .filter(|(_, n)| n.len() == count)
        .map(|(&p, _)| p)
        .collect();
    let index: BTreeMap<Pair, usize> = member.iter().enumerate().map(|(i, &p)| (p, i)).collect();
    let mut uf = UnionFind::new(member.len());
    for (i, p) in member.iter().enumerate() {
        for q in &nbrs[p] {
            if let Some(&j) = index.get(q) {
                uf.union(i, j);
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<Pair>> = BTreeMap::new();
    for (i, &p) in member.iter().enumerate() {
        groups.entry(uf.find(i)).or_default().push(p);
    }
    let mut out: Vec<Vec<Pair>> = groups
        .into_values()
        .map(|mut g| {
            g.sort_unstable();
            g
        })
        .collect();
    out.sort();
    out
}

/// Independent statement of each rule's trigger predicate, written against
/// the raw constraint structure. Returns the first rule in catalog order
/// whose predicate holds.
pub fn independent_first_trigger(inst: &CspInstance) -> Option<RuleId> {
    let nbrs = pair_neighbors(inst);
    let count = |p: &Pair| nbrs.get(p).map_or(0, Vec::len);
    let dom = |v: VarId| inst.domain(v).unwrap().len();

    // R1: an isolated constraint between two three-color variables.
    let r1 = inst.constraints().any(|c| {
        let (a, b) = c.ends();
        count(&a) == 1 && count(&b) == 1 && dom(a.0) == 3 && dom(b.0) == 3
    });
    if r1 {
        return Some(RuleId::MergeIsolated);
    }
    // R2: any singly-constrained pair.
    if nbrs.values().any(|n| n.len() == 1) {
        return Some(RuleId::SingleConstraint);
    }
    // R3: a pair with two constraints into the same variable.
    let r3 = nbrs.iter().any(|(_, n)| {
        let vars: Vec<VarId> = n.iter().map(|&(v, _)| v).collect();
        let set: BTreeSet<VarId> = vars.iter().copied().collect();
        set.len() < vars.len()
    });
    if r3 {
        return Some(RuleId::DoubleToSameVar);
    }
    // R4: four distinct neighbor variables, or three on a 4-color variable.
    let r4 = nbrs.iter().any(|(p, n)| {
        let vars: BTreeSet<VarId> = n.iter().map(|&(v, _)| v).collect();
        vars.len() >= 4 || (dom(p.0) == 4 && vars.len() >= 3)
    });
    if r4 {
        return Some(RuleId::HighDegreeColor);
    }
    // R5: a three-constraint pair on a three-color variable with a
    // four-color neighbor.
    let r5 = nbrs.iter().any(|(p, n)| {
        n.len() == 3 && dom(p.0) == 3 && n.iter().any(|&(w, _)| dom(w) == 4)
    });
    if r5 {
        return Some(RuleId::TripleAtFourColor);
    }
    // R6: a three-constraint pair adjacent to a two-constraint pair.
    let r6 = nbrs.iter().any(|(p, n)| {
        n.len() == 3 && dom(p.0) == 3 && n.iter().any(|q| count(q) == 2)
    });
    if r6 {
        return Some(RuleId::TripleNextToDouble);
    }
    // R7 / R8 via components of three-constraint pairs.
    let threes = components_by_count(inst, 3);
    let small_bad = threes.iter().any(|comp| {
        let vars: BTreeSet<VarId> = comp.iter().map(|&(v, _)| v).collect();
        vars.len() <= 4 && comp.len() > 4
    });
    if small_bad {
        return Some(RuleId::SmallBadComponent);
    }
    let large = threes.iter().any(|comp| {
        let vars: BTreeSet<VarId> = comp.iter().map(|&(v, _)| v).collect();
        vars.len() >= 5
    });
    if large {
        return Some(RuleId::LargeComponent);
    }
    // R9: a two-component that is not a triangle.
    let twos = components_by_count(inst, 2);
    let non_triangle = twos.iter().any(|comp| {
        !(comp.len() == 3
            && comp.iter().all(|p| {
                nbrs[p].len() == 2 && nbrs[p].iter().all(|q| comp.contains(q))
            }))
    });
    if non_triangle {
        return Some(RuleId::NonTriangleCycle);
    }
    None
}

/// Independent statement of the matching lemma's precondition.
pub fn independent_base_case_ready(inst: &CspInstance) -> bool {
    let nbrs = pair_neighbors(inst);
    for v in inst.var_ids() {
        for &c in inst.domain(v).unwrap() {
            if !matches!(nbrs.get(&(v, c)).map_or(0, Vec::len), 2 | 3) {
                return false;
            }
        }
    }
    independent_first_trigger(inst).is_none()
}

fn measure() -> SizeMeasure {
    SizeMeasure::default()
}

/// Builds an instance from explicit parts plus noise constraints among
/// extra variables (never touching the pattern's pairs).
fn with_noise(
    pattern_domains: Vec<Vec<Color>>,
    pattern_constraints: Vec<((usize, Color), (usize, Color))>,
    extra_vars: usize,
    rng: &mut Rng,
) -> CspInstance {
    let mut domains = pattern_domains;
    let first_extra = domains.len();
    for _ in 0..extra_vars {
        let k = 3 + rng.below(2);
        domains.push((1..=k as Color).collect());
    }
    let mut constraints = pattern_constraints;
    if extra_vars >= 2 {
        for _ in 0..rng.below(3 * extra_vars) {
            let v = first_extra + rng.below(extra_vars);
            let mut w = first_extra + rng.below(extra_vars);
            while w == v {
                w = first_extra + rng.below(extra_vars);
            }
            let cv = domains[v][rng.below(domains[v].len())];
            let cw = domains[w][rng.below(domains[w].len())];
            constraints.push(((v, cv), (w, cw)));
        }
    }
    CspInstance::build(&domains, &constraints, measure()).unwrap()
}

/// Generates an instance (at most six variables) on which `rule`'s own
/// trigger predicate holds.
pub fn trigger_instance(rule: RuleId, seed: u64) -> CspInstance {
    let mut rng = Rng::new(seed);
    let three = vec![1u32, 2, 3];
    let four = vec![1u32, 2, 3, 4];
    match rule {
        RuleId::MergeIsolated => {
            // Isolated link between colors 1 of vars 0 and 1; extra
            // constraints may touch their other colors.
            let mut constraints = vec![((0usize, 1u32), (1usize, 1u32))];
            let extra = 2 + rng.below(3);
            let mut domains: Vec<Vec<Color>> = vec![three.clone(), three.clone()];
            for _ in 0..extra {
                domains.push(three.clone());
            }
            for _ in 0..rng.below(4) {
                let v = rng.below(2);
                let w = 2 + rng.below(extra);
                let cv = [2u32, 3][rng.below(2)];
                let cw = domains[w][rng.below(domains[w].len())];
                constraints.push(((v, cv), (w, cw)));
            }
            CspInstance::build(&domains, &constraints, measure()).unwrap()
        }
        RuleId::SingleConstraint => {
            // (0,1) has exactly one constraint, to (1,1); (1,1) gets a
            // second constraint so the isolated-merge pattern is absent.
            let constraints = vec![
                ((0usize, 1u32), (1usize, 1u32)),
                ((1usize, 1u32), (2usize, 1u32)),
            ];
            with_noise(
                vec![three.clone(), three.clone(), three.clone()],
                constraints,
                1 + rng.below(3),
                &mut rng,
            )
        }
        RuleId::DoubleToSameVar => {
            let target_dom = if rng.chance(0.5) { three.clone() } else { four.clone() };
            let constraints = vec![
                ((0usize, 1u32), (1usize, 1u32)),
                ((0usize, 1u32), (1usize, 2u32)),
            ];
            with_noise(
                vec![three.clone(), target_dom],
                constraints,
                2 + rng.below(3),
                &mut rng,
            )
        }
        RuleId::HighDegreeColor => {
            if rng.chance(0.5) {
                // Four distinct neighbor variables.
                let constraints = (1..=4usize)
                    .map(|w| ((0usize, 1u32), (w, 1u32)))
                    .collect();
                with_noise(
                    vec![three.clone(); 5],
                    constraints,
                    rng.below(2),
                    &mut rng,
                )
            } else {
                // Four-color variable's color with three neighbors.
                let constraints = (1..=3usize)
                    .map(|w| ((0usize, 1u32), (w, 1u32)))
                    .collect();
                let mut domains = vec![four.clone()];
                domains.extend(vec![three.clone(); 3]);
                with_noise(domains, constraints, rng.below(3), &mut rng)
            }
        }
        RuleId::TripleAtFourColor => {
            let constraints = (1..=3usize)
                .map(|w| ((0usize, 1u32), (w, 1u32)))
                .collect();
            let mut domains = vec![three.clone(), four.clone()];
            domains.extend(vec![three.clone(); 2]);
            with_noise(domains, constraints, rng.below(3), &mut rng)
        }
        RuleId::TripleNextToDouble => {
            let mut constraints: Vec<((usize, Color), (usize, Color))> = (1..=3usize)
                .map(|w| ((0usize, 1u32), (w, 1u32)))
                .collect();
            // (1,1) picks up a second constraint: now it has exactly two.
            constraints.push(((1usize, 1u32), (4usize, 1u32)));
            with_noise(vec![three.clone(); 5], constraints, rng.below(2), &mut rng)
        }
        RuleId::SmallBadComponent => {
            // Six pairs on four variables, complete bipartite between
            // {(0,1),(0,2),(2,1)} and {(1,1),(1,2),(3,1)}.
            let part_a = [(0usize, 1u32), (0, 2), (2, 1)];
            let part_b = [(1usize, 1u32), (1, 2), (3, 1)];
            let mut constraints = Vec::new();
            for &a in &part_a {
                for &b in &part_b {
                    constraints.push((a, b));
                }
            }
            with_noise(vec![three.clone(); 4], constraints, rng.below(3), &mut rng)
        }
        RuleId::LargeComponent => {
            // Complete bipartite pair structure over five variables:
            // {(0,1),(0,2),(4,1)} versus {(1,1),(2,1),(3,1)}.
            let part_a = [(0usize, 1u32), (0, 2), (4, 1)];
            let part_b = [(1usize, 1u32), (2, 1), (3, 1)];
            let mut constraints = Vec::new();
            for &a in &part_a {
                for &b in &part_b {
                    constraints.push((a, b));
                }
            }
            with_noise(vec![three.clone(); 5], constraints, rng.below(2), &mut rng)
        }
        RuleId::NonTriangleCycle => {
            let k = 4 + rng.below(2); // cycle of 4 or 5 pairs
            let constraints = (0..k)
                .map(|i| ((i, 1u32), ((i + 1) % k, 1u32)))
                .collect();
            with_noise(vec![three.clone(); k], constraints, rng.below(2), &mut rng)
        }
    }
}
