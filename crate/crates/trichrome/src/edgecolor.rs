//! Constrained 3-edge-coloring.
//!
//! An instance is a graph of maximum degree three plus difference
//! constraints between edge pairs. The solver prunes cheap edges, picks a
//! set of independent splice positions, replaces each by two smaller
//! instances (the splice merges the four surrounding edges in one of the
//! two possible pairings), and hands every resulting residue to the CSP
//! solver over its line structure.
//!
//! Edges are kept as *classes*: a splice identifies two edges, and the
//! identified bundle survives as one class carrying all member edges.
//! Classes make the degenerate outcomes of a merge (a bundle closing on
//! itself, or two bundles between the same endpoints) ordinary instances
//! instead of broken graphs.

use crate::csp::{Color, CspInstance, VarId};
use crate::graph::{parse_dimacs_with_extensions, Graph};
use crate::solver::{solve, SearchStats};
use crate::workfactor::SizeMeasure;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum EdgeError {
    Parse(String),
    Contract(String),
    RuleNotApplicable(String),
}

impl fmt::Display for EdgeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeError::Parse(m) => write!(f, "parse error: {m}"),
            EdgeError::Contract(m) => write!(f, "contract violation: {m}"),
            EdgeError::RuleNotApplicable(m) => write!(f, "rule not applicable: {m}"),
        }
    }
}

impl std::error::Error for EdgeError {}

/// Canonical original edge: endpoints ascending.
pub type OrigEdge = (usize, usize);

fn orig(u: usize, v: usize) -> OrigEdge {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// A bundle of original edges forced to share one color, with its current
/// live endpoints.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeClass {
    pub ends: (usize, usize),
    pub members: Vec<OrigEdge>,
}

pub type ClassId = usize;

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeInstance {
    vertex_count: usize,
    alive: BTreeSet<usize>,
    classes: BTreeMap<ClassId, EdgeClass>,
    constraints: BTreeSet<(ClassId, ClassId)>,
    next_class: ClassId,
    /// Set when a merge produced a class adjacent to itself or a
    /// constraint folded onto a single class; such an instance has no
    /// coloring.
    contradiction: bool,
}

/// Map original edge -> color in {1, 2, 3}.
pub type EdgeColoring = BTreeMap<OrigEdge, Color>;

impl EdgeInstance {
    pub fn from_graph(g: &Graph) -> Self {
        let classes: BTreeMap<ClassId, EdgeClass> = g
            .edges()
            .into_iter()
            .enumerate()
            .map(|(i, (u, v))| {
                (
                    i,
                    EdgeClass {
                        ends: (u, v),
                        members: vec![(u, v)],
                    },
                )
            })
            .collect();
        EdgeInstance {
            vertex_count: g.vertex_count(),
            alive: (0..g.vertex_count()).collect(),
            next_class: classes.len(),
            classes,
            constraints: BTreeSet::new(),
            contradiction: false,
        }
    }

    /// Adds a difference constraint between the classes holding the two
    /// original edges.
    pub fn add_difference(&mut self, e1: OrigEdge, e2: OrigEdge) -> Result<(), EdgeError> {
        let a = self
            .class_of(e1)
            .ok_or_else(|| EdgeError::Contract(format!("no edge {e1:?}")))?;
        let b = self
            .class_of(e2)
            .ok_or_else(|| EdgeError::Contract(format!("no edge {e2:?}")))?;
        if a == b {
            self.contradiction = true;
            return Ok(());
        }
        self.constraints.insert((a.min(b), a.max(b)));
        Ok(())
    }

    pub fn class_of(&self, e: OrigEdge) -> Option<ClassId> {
        self.classes
            .iter()
            .find(|(_, c)| c.members.contains(&e))
            .map(|(&id, _)| id)
    }

    pub fn class(&self, id: ClassId) -> Option<&EdgeClass> {
        self.classes.get(&id)
    }

    pub fn class_ids(&self) -> impl Iterator<Item = ClassId> + '_ {
        self.classes.keys().copied()
    }

    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn vertex_alive_count(&self) -> usize {
        self.alive.len()
    }

    pub fn constraint_count(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_contradicted(&self) -> bool {
        self.contradiction
    }

    pub fn is_constrained(&self, id: ClassId) -> bool {
        self.constraints.iter().any(|&(a, b)| a == id || b == id)
    }

    /// Classes incident to vertex `x`.
    pub fn incident(&self, x: usize) -> Vec<ClassId> {
        self.classes
            .iter()
            .filter(|(_, c)| c.ends.0 == x || c.ends.1 == x)
            .map(|(&id, _)| id)
            .collect()
    }

    pub fn degree(&self, x: usize) -> usize {
        self.incident(x).len()
    }

    /// Classes sharing a live endpoint with `id` (multiplicity-free).
    pub fn adjacent_classes(&self, id: ClassId) -> Vec<ClassId> {
        let c = &self.classes[&id];
        let mut out: BTreeSet<ClassId> = BTreeSet::new();
        for x in [c.ends.0, c.ends.1] {
            for other in self.incident(x) {
                if other != id {
                    out.insert(other);
                }
            }
        }
        out.into_iter().collect()
    }

    /// Number of classes with exactly three and exactly four neighbors.
    pub fn neighbor_counts(&self) -> (usize, usize) {
        let mut m3 = 0;
        let mut m4 = 0;
        for id in self.class_ids() {
            match self.adjacent_classes(id).len() {
                3 => m3 += 1,
                4 => m4 += 1,
                _ => {}
            }
        }
        (m3, m4)
    }

    /// True iff `coloring` assigns every member edge a color in {1,2,3},
    /// classes are consistent, adjacent classes differ, and every
    /// difference constraint holds.
    pub fn is_valid_coloring(&self, coloring: &EdgeColoring) -> bool {
        if self.contradiction {
            return false;
        }
        let mut class_color: BTreeMap<ClassId, Color> = BTreeMap::new();
        for (&id, class) in &self.classes {
            let mut colors = class.members.iter().map(|e| coloring.get(e));
            let Some(Some(&first)) = colors.next() else {
                return false;
            };
            if !(1..=3).contains(&first) || !colors.all(|c| c == Some(&first)) {
                return false;
            }
            class_color.insert(id, first);
        }
        for &id in self.classes.keys() {
            for other in self.adjacent_classes(id) {
                if class_color[&id] == class_color[&other] {
                    return false;
                }
            }
        }
        self.constraints
            .iter()
            .all(|&(a, b)| class_color[&a] != class_color[&b])
    }
}

/// Text format: DIMACS graph plus `d <e1u> <e1v> <e2u> <e2v>` lines for
/// difference constraints, 1-indexed.
pub fn parse_edge_instance(textual: &str) -> Result<EdgeInstance, EdgeError> {
    let (g, extra) = parse_dimacs_with_extensions(textual, &["d"])
        .map_err(|e| EdgeError::Parse(e.to_string()))?;
    let mut inst = EdgeInstance::from_graph(&g);
    for (tag, toks) in extra {
        debug_assert_eq!(tag, "d");
        if toks.len() != 4 {
            return Err(EdgeError::Parse(
                "expected `d <e1u> <e1v> <e2u> <e2v>`".into(),
            ));
        }
        let nums: Result<Vec<usize>, _> = toks.iter().map(|t| t.parse()).collect();
        let nums = nums.map_err(|_| EdgeError::Parse("bad vertex in d line".into()))?;
        if nums.iter().any(|&x| x == 0 || x > g.vertex_count()) {
            return Err(EdgeError::Parse("d line vertex out of range".into()));
        }
        inst.add_difference(orig(nums[0] - 1, nums[1] - 1), orig(nums[2] - 1, nums[3] - 1))?;
    }
    Ok(inst)
}

pub fn write_edge_instance(inst: &EdgeInstance) -> String {
    let member_count: usize = inst.classes.values().map(|c| c.members.len()).sum();
    let mut out = format!("p edge {} {}\n", inst.vertex_count, member_count);
    for class in inst.classes.values() {
        for &(u, v) in &class.members {
            out.push_str(&format!("e {} {}\n", u + 1, v + 1));
        }
    }
    for &(a, b) in &inst.constraints {
        let ea = inst.classes[&a].members[0];
        let eb = inst.classes[&b].members[0];
        out.push_str(&format!(
            "d {} {} {} {}\n",
            ea.0 + 1,
            ea.1 + 1,
            eb.0 + 1,
            eb.1 + 1
        ));
    }
    out
}

/// A pruned edge, remembered for greedy re-extension.
#[derive(Debug, Clone)]
pub struct PrunedEdge {
    pub class: EdgeClass,
    /// Member edges of the classes that were adjacent at removal time.
    pub blocked_by: Vec<OrigEdge>,
}

#[derive(Debug, Clone)]
pub enum Normalized {
    Reduced {
        instance: EdgeInstance,
        pruned: Vec<PrunedEdge>,
    },
    Unsat,
}

/// Unsatisfiable outright if some vertex has four or more incident
/// classes; otherwise repeatedly removes unconstrained classes with at
/// most two neighbors (their color can always be chosen afterwards),
/// recording them for re-extension.
pub fn normalize(inst: &EdgeInstance) -> Normalized {
    if inst.contradiction {
        return Normalized::Unsat;
    }
    if inst.alive.iter().any(|&x| inst.degree(x) >= 4) {
        return Normalized::Unsat;
    }
    let mut cur = inst.clone();
    let mut pruned = Vec::new();
    loop {
        let next = cur
            .class_ids()
            .find(|&id| !cur.is_constrained(id) && cur.adjacent_classes(id).len() <= 2);
        let Some(id) = next else {
            return Normalized::Reduced {
                instance: cur,
                pruned,
            };
        };
        let blocked_by = cur
            .adjacent_classes(id)
            .iter()
            .map(|n| cur.classes[n].members[0])
            .collect();
        let class = cur.classes.remove(&id).unwrap();
        pruned.push(PrunedEdge { class, blocked_by });
    }
}

/// Record of one splice, enough to color the removed edge afterwards.
#[derive(Debug, Clone)]
pub struct SpliceInfo {
    /// Members of the spliced-away class; they take the color unused by
    /// the two merged bundles.
    pub removed: Vec<OrigEdge>,
    pub merged_first: OrigEdge,
    pub merged_second: OrigEdge,
}

#[derive(Debug, Clone)]
pub struct SpliceChildren {
    pub children: [EdgeInstance; 2],
    pub info: [SpliceInfo; 2],
}

/// Splices away an unconstrained class between two degree-three vertices.
///
/// With u's other classes a, b and v's other classes c, d, child one
/// identifies a=c and b=d, child two identifies a=d and b=c; u, v and the
/// class itself disappear, merged bundles inherit all constraints of
/// their parts plus a mutual difference constraint. Each child has
/// exactly three fewer edges and two fewer vertices.
pub fn splice(inst: &EdgeInstance, id: ClassId) -> Result<SpliceChildren, EdgeError> {
    let class = inst
        .classes
        .get(&id)
        .ok_or_else(|| EdgeError::Contract(format!("unknown class {id}")))?;
    let (u, v) = class.ends;
    if u == v {
        return Err(EdgeError::RuleNotApplicable("class is self-closed".into()));
    }
    if inst.is_constrained(id) {
        return Err(EdgeError::RuleNotApplicable("edge carries constraints".into()));
    }
    if inst.degree(u) != 3 || inst.degree(v) != 3 {
        return Err(EdgeError::RuleNotApplicable(
            "both endpoints must have degree three".into(),
        ));
    }
    let at_u: Vec<ClassId> = inst.incident(u).into_iter().filter(|&x| x != id).collect();
    let at_v: Vec<ClassId> = inst.incident(v).into_iter().filter(|&x| x != id).collect();
    if at_u.iter().any(|x| at_v.contains(x)) {
        // A bundle spans u and v alongside the spliced edge; merging
        // would silently drop its adjacencies.
        return Err(EdgeError::RuleNotApplicable(
            "a parallel bundle joins the two endpoints".into(),
        ));
    }
    let (a, b) = (at_u[0], at_u[1]);
    let (c, d) = (at_v[0], at_v[1]);

    let build = |first: (ClassId, ClassId), second: (ClassId, ClassId)| -> (EdgeInstance, SpliceInfo) {
        let mut child = inst.clone();
        child.classes.remove(&id);
        child.alive.remove(&u);
        child.alive.remove(&v);
        let merge = |child: &mut EdgeInstance, (x, y): (ClassId, ClassId)| -> ClassId {
            let cx = child.classes.remove(&x).unwrap();
            let cy = child.classes.remove(&y).unwrap();
            let far = |c: &EdgeClass| {
                if c.ends.0 == u || c.ends.0 == v {
                    c.ends.1
                } else {
                    c.ends.0
                }
            };
            let ends = (far(&cx), far(&cy));
            let mut members = cx.members.clone();
            members.extend(cy.members.iter().copied());
            members.sort_unstable();
            let fresh = child.next_class;
            child.next_class += 1;
            child.classes.insert(
                fresh,
                EdgeClass {
                    ends: (ends.0.min(ends.1), ends.0.max(ends.1)),
                    members,
                },
            );
            if ends.0 == ends.1 {
                // The bundle closed on itself: it would have to differ
                // from its own color.
                child.contradiction = true;
            }
            let retarget = |t: ClassId| if t == x || t == y { fresh } else { t };
            let mut rewritten = BTreeSet::new();
            for &(p, q) in &child.constraints {
                let (p, q) = (retarget(p), retarget(q));
                if p == q {
                    child.contradiction = true;
                } else {
                    rewritten.insert((p.min(q), p.max(q)));
                }
            }
            child.constraints = rewritten;
            fresh
        };
        let fa = merge(&mut child, first);
        let fb = merge(&mut child, second);
        child.constraints.insert((fa.min(fb), fa.max(fb)));
        let info = SpliceInfo {
            removed: inst.classes[&id].members.clone(),
            merged_first: child.classes[&fa].members[0],
            merged_second: child.classes[&fb].members[0],
        };
        (child, info)
    };

    let (child1, info1) = build((a, c), (b, d));
    let (child2, info2) = build((a, d), (b, c));
    Ok(SpliceChildren {
        children: [child1, child2],
        info: [info1, info2],
    })
}

/// Greedily selects a maximal set of pairwise independent splice
/// positions: unconstrained classes between degree-three endpoints, no
/// two sharing a vertex or an incident class. The size is reported
/// against the m4/3 target by the caller; independence, not the count,
/// is what correctness uses.
pub fn select_splices(inst: &EdgeInstance) -> Vec<ClassId> {
    let mut chosen: Vec<ClassId> = Vec::new();
    let mut blocked_vertices: BTreeSet<usize> = BTreeSet::new();
    let mut blocked_classes: BTreeSet<ClassId> = BTreeSet::new();
    for id in inst.class_ids() {
        let class = &inst.classes[&id];
        let (u, v) = class.ends;
        if u == v || inst.is_constrained(id) {
            continue;
        }
        if inst.degree(u) != 3 || inst.degree(v) != 3 {
            continue;
        }
        if blocked_vertices.contains(&u) || blocked_vertices.contains(&v) || blocked_classes.contains(&id) {
            continue;
        }
        let incident: Vec<ClassId> = inst
            .incident(u)
            .into_iter()
            .chain(inst.incident(v))
            .filter(|&x| x != id)
            .collect();
        if incident.iter().any(|x| blocked_classes.contains(x)) {
            continue;
        }
        if incident.iter().any(|x| chosen.contains(x)) {
            continue;
        }
        // Parallel bundle across u-v: splice would not apply.
        let at_u: Vec<ClassId> = inst.incident(u).into_iter().filter(|&x| x != id).collect();
        let at_v: Vec<ClassId> = inst.incident(v).into_iter().filter(|&x| x != id).collect();
        if at_u.iter().any(|x| at_v.contains(x)) {
            continue;
        }
        chosen.push(id);
        blocked_vertices.insert(u);
        blocked_vertices.insert(v);
        blocked_classes.insert(id);
        for x in incident {
            blocked_classes.insert(x);
        }
    }
    chosen
}

#[derive(Debug, Clone, Default)]
pub struct EdgeStats {
    pub pruned: usize,
    pub splices_selected: usize,
    /// m4/3 target the selection is compared against.
    pub splice_target: f64,
    pub residues_solved: u64,
    pub csp: SearchStats,
    pub m3: usize,
    pub m4: usize,
}

/// Solves plain 3-edge-coloring of a graph.
pub fn solve_3edge(g: &Graph) -> (Option<EdgeColoring>, EdgeStats) {
    solve_edge_instance(&EdgeInstance::from_graph(g))
}

/// Solves a constrained instance: normalize, splice each selected
/// position (two children each, explored depth-first), translate every
/// residue over its line structure to a CSP, and lift the first solution
/// back through splices and pruning.
pub fn solve_edge_instance(inst: &EdgeInstance) -> (Option<EdgeColoring>, EdgeStats) {
    let mut stats = EdgeStats::default();
    let Normalized::Reduced { instance, pruned } = normalize(inst) else {
        return (None, stats);
    };
    stats.pruned = pruned.len();
    let (m3, m4) = instance.neighbor_counts();
    stats.m3 = m3;
    stats.m4 = m4;
    stats.splice_target = m4 as f64 / 3.0;
    let plan = select_splices(&instance);
    stats.splices_selected = plan.len();

    let mut coloring = splice_rec(&instance, &plan, 0, &mut stats);
    if let Some(c) = &mut coloring {
        for p in pruned.iter().rev() {
            let used: BTreeSet<Color> = p
                .blocked_by
                .iter()
                .filter_map(|e| c.get(e).copied())
                .collect();
            let free = (1..=3)
                .find(|x| !used.contains(x))
                .expect("pruned edges keep at most two colored neighbors");
            for e in &p.class.members {
                c.insert(*e, free);
            }
        }
        debug_assert!(inst.is_valid_coloring(c));
    }
    (coloring, stats)
}

fn splice_rec(
    inst: &EdgeInstance,
    plan: &[ClassId],
    depth: usize,
    stats: &mut EdgeStats,
) -> Option<EdgeColoring> {
    if inst.contradiction {
        return None;
    }
    if depth == plan.len() {
        return solve_residue(inst, stats);
    }
    let children = splice(inst, plan[depth]).expect("selected splice positions stay applicable");
    for (child, info) in children.children.iter().zip(children.info.iter()) {
        if let Some(mut coloring) = splice_rec(child, plan, depth + 1, stats) {
            let ca = coloring[&info.merged_first];
            let cb = coloring[&info.merged_second];
            debug_assert_ne!(ca, cb);
            let third = (1..=3).find(|&x| x != ca && x != cb).unwrap();
            for e in &info.removed {
                coloring.insert(*e, third);
            }
            return Some(coloring);
        }
    }
    None
}

/// Residual handoff: one CSP variable per class with colors {1,2,3}, and
/// for every adjacent pair and every difference constraint, one
/// forbidden-combination constraint per color.
fn solve_residue(inst: &EdgeInstance, stats: &mut EdgeStats) -> Option<EdgeColoring> {
    stats.residues_solved += 1;
    let ids: Vec<ClassId> = inst.class_ids().collect();
    let index: BTreeMap<ClassId, usize> = ids.iter().enumerate().map(|(i, &x)| (x, i)).collect();
    let mut pairs: BTreeSet<(usize, usize)> = BTreeSet::new();
    for &id in &ids {
        for other in inst.adjacent_classes(id) {
            let (a, b) = (index[&id], index[&other]);
            pairs.insert((a.min(b), a.max(b)));
        }
    }
    for &(a, b) in &inst.constraints {
        let (a, b) = (index[&a], index[&b]);
        pairs.insert((a.min(b), a.max(b)));
    }
    let domains = vec![vec![1u32, 2, 3]; ids.len()];
    let mut constraints = Vec::new();
    for &(a, b) in &pairs {
        for c in 1..=3u32 {
            constraints.push(((a, c), (b, c)));
        }
    }
    let csp = CspInstance::build(&domains, &constraints, SizeMeasure::default())
        .expect("line translation is well-formed");
    let (solution, search) = solve(&csp);
    stats.csp.merge(&search);
    let solution = solution?;
    let mut out = EdgeColoring::new();
    for (i, &id) in ids.iter().enumerate() {
        let color = solution.get(VarId(i)).unwrap();
        for e in &inst.classes[&id].members {
            out.insert(*e, color);
        }
    }
    Some(out)
}

/// Exhaustive oracle over the original edges: first valid coloring in
/// lexicographic edge/color order.
pub fn brute_force_edge_coloring(inst: &EdgeInstance) -> Option<EdgeColoring> {
    if inst.contradiction {
        return None;
    }
    let ids: Vec<ClassId> = inst.class_ids().collect();
    fn rec(
        inst: &EdgeInstance,
        ids: &[ClassId],
        i: usize,
        colors: &mut BTreeMap<ClassId, Color>,
    ) -> bool {
        if i == ids.len() {
            return true;
        }
        let id = ids[i];
        'next: for c in 1..=3u32 {
            for other in inst.adjacent_classes(id) {
                if colors.get(&other) == Some(&c) {
                    continue 'next;
                }
            }
            for &(a, b) in &inst.constraints {
                let partner = if a == id { b } else if b == id { a } else { continue };
                if colors.get(&partner) == Some(&c) {
                    continue 'next;
                }
            }
            colors.insert(id, c);
            if rec(inst, ids, i + 1, colors) {
                return true;
            }
            colors.remove(&id);
        }
        false
    }
    let mut colors = BTreeMap::new();
    if rec(inst, &ids, 0, &mut colors) {
        let mut out = EdgeColoring::new();
        for (id, c) in colors {
            for e in &inst.classes[&id].members {
                out.insert(*e, c);
            }
        }
        Some(out)
    } else {
        None
    }
}

#[cfg(test)]
mod tests;
