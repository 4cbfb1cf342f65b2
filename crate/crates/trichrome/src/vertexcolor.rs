//! Structured 3-coloring pipeline.
//!
//! Plain translation to a CSP already solves 3-coloring; this pipeline
//! first colors a carefully chosen vertex set S so the expensive search
//! only runs on what is left. The phases:
//!
//! 1. peel vertices of degree <= 2 (always re-extendable),
//! 2. branch away cycles of degree-3 vertices and large degree-3 trees,
//! 3. grow a maximal bushy forest (internal nodes of tree-degree >= 4),
//! 4. cover the far remainder with height-two trees found by claw packing
//!    plus an integral flow assignment of grandchildren,
//! 5. enumerate colorings of the forest internals and height-two roots,
//!    handing each residue to the CSP solver.
//!
//! Correctness never depends on the quality of the chosen set: the
//! enumeration is exhaustive over S-colorings and the CSP solver is exact.
//! The structural phases only shape the cost, which `accounting` reports.

use crate::csp::{from_graph_coloring, Color};
use crate::graph::{k13_packing, max_flow_integer, Claw, FlowNetwork, Graph};
use crate::solver::{solve, SearchStats};
use crate::workfactor::{derived_constants, SizeMeasure};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum ColorError {
    Contract(String),
}

impl fmt::Display for ColorError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ColorError::Contract(m) => write!(f, "contract violation: {m}"),
        }
    }
}

impl std::error::Error for ColorError {}

/// Colors 1..=3 for the alive vertices of a graph, indexed by vertex id.
pub type Coloring = BTreeMap<usize, Color>;

pub fn is_proper_coloring(g: &Graph, alive: &BTreeSet<usize>, colors: &Coloring) -> bool {
    for &v in alive {
        let Some(&cv) = colors.get(&v) else {
            return false;
        };
        if !(1..=3).contains(&cv) {
            return false;
        }
        for u in g.neighbors(v) {
            if alive.contains(&u) && colors.get(&u) == Some(&cv) {
                return false;
            }
        }
    }
    true
}

/// Exhaustive 3-coloring oracle: first proper coloring in lexicographic
/// vertex/color order, pruned.
pub fn brute_force_3color(g: &Graph) -> Option<Coloring> {
    fn rec(g: &Graph, colors: &mut Vec<Option<Color>>, v: usize) -> bool {
        if v == g.vertex_count() {
            return true;
        }
        'next: for c in 1..=3u32 {
            for u in g.neighbors(v) {
                if colors[u] == Some(c) {
                    continue 'next;
                }
            }
            colors[v] = Some(c);
            if rec(g, colors, v + 1) {
                return true;
            }
            colors[v] = None;
        }
        false
    }
    let mut colors = vec![None; g.vertex_count()];
    if rec(g, &mut colors, 0) {
        Some(
            colors
                .into_iter()
                .enumerate()
                .map(|(v, c)| (v, c.unwrap()))
                .collect(),
        )
    } else {
        None
    }
}

fn alive_degree(g: &Graph, alive: &BTreeSet<usize>, v: usize) -> usize {
    g.neighbors(v).filter(|u| alive.contains(u)).count()
}

fn alive_neighbors(g: &Graph, alive: &BTreeSet<usize>, v: usize) -> Vec<usize> {
    g.neighbors(v).filter(|u| alive.contains(u)).collect()
}

/// One branch produced by the degree-3 reduction: two neighbors of the
/// branch vertex are identified (kept absorbs absorbed) and the vertex
/// itself is removed.
#[derive(Debug, Clone)]
pub struct Degree3Branch {
    pub graph: Graph,
    pub alive: BTreeSet<usize>,
    pub kept: usize,
    pub absorbed: usize,
    pub removed: usize,
}

/// Detects a cycle of degree-3 vertices or a degree-3 tree of eight or
/// more vertices, and if present branches on which two neighbors of a
/// vertex in the structure share a color.
///
/// In a proper 3-coloring the three neighbors of a degree-3 vertex use at
/// most two colors, so two of them coincide; identifying each candidate
/// pair (skipping adjacent ones) and deleting the vertex covers every
/// case. `None` certifies that degree-3 vertices form trees of at most
/// seven vertices.
pub fn reduce_degree3_structures(
    g: &Graph,
    alive: &BTreeSet<usize>,
) -> Option<Vec<Degree3Branch>> {
    let d3: BTreeSet<usize> = alive
        .iter()
        .copied()
        .filter(|&v| alive_degree(g, alive, v) == 3)
        .collect();
    if d3.is_empty() {
        return None;
    }

    // 2-core of the induced degree-3 subgraph: nonempty iff it has a cycle.
    let mut core = d3.clone();
    loop {
        let low: Vec<usize> = core
            .iter()
            .copied()
            .filter(|&v| g.neighbors(v).filter(|u| core.contains(u)).count() <= 1)
            .collect();
        if low.is_empty() {
            break;
        }
        for v in low {
            core.remove(&v);
        }
    }
    let branch_vertex = if let Some(&v) = core.iter().next() {
        Some(v)
    } else {
        // All components are trees; a tree of >= 8 vertices triggers.
        let mut seen = BTreeSet::new();
        let mut pick = None;
        for &start in &d3 {
            if seen.contains(&start) {
                continue;
            }
            let mut comp = vec![start];
            let mut stack = vec![start];
            seen.insert(start);
            while let Some(v) = stack.pop() {
                for u in g.neighbors(v) {
                    if d3.contains(&u) && seen.insert(u) {
                        comp.push(u);
                        stack.push(u);
                    }
                }
            }
            if comp.len() >= 8 {
                pick = Some(*comp.iter().min().unwrap());
                break;
            }
        }
        pick
    };
    let v = branch_vertex?;

    let nbrs = alive_neighbors(g, alive, v);
    debug_assert_eq!(nbrs.len(), 3);
    let mut branches = Vec::new();
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        let (a, b) = (nbrs[i], nbrs[j]);
        if g.has_edge(a, b) {
            continue; // adjacent neighbors cannot share a color
        }
        let mut child = g.clone();
        let mut child_alive = alive.clone();
        for u in alive_neighbors(g, alive, b) {
            if u != a && u != v {
                child.add_edge(a, u).unwrap();
            }
        }
        child_alive.remove(&b);
        child_alive.remove(&v);
        branches.push(Degree3Branch {
            graph: child,
            alive: child_alive,
            kept: a,
            absorbed: b,
            removed: v,
        });
    }
    Some(branches)
}

#[derive(Debug, Clone)]
pub struct BushyTree {
    pub root: usize,
    /// Parent of every non-root tree vertex.
    pub parent: BTreeMap<usize, usize>,
    pub internal: BTreeSet<usize>,
    pub leaves: BTreeSet<usize>,
}

impl BushyTree {
    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.internal.iter().chain(self.leaves.iter()).copied()
    }
}

#[derive(Debug, Clone, Default)]
pub struct BushyForest {
    pub trees: Vec<BushyTree>,
}

impl BushyForest {
    pub fn vertices(&self) -> BTreeSet<usize> {
        self.trees.iter().flat_map(|t| t.vertices()).collect()
    }

    pub fn root_count(&self) -> usize {
        self.trees.len()
    }

    pub fn internal_count(&self) -> usize {
        self.trees.iter().map(|t| t.internal.len()).sum()
    }

    pub fn leaf_count(&self) -> usize {
        self.trees.iter().map(|t| t.leaves.len()).sum()
    }
}

/// Grows a maximal bushy forest: root a tree at any vertex with four or
/// more neighbors outside the forest (all of them become its leaves),
/// then promote any leaf with three or more outside neighbors to an
/// internal node (tree-degree 1 + 3 >= 4). Repeats to a fixpoint, so no
/// extension step applies to the result.
pub fn find_bushy_forest(g: &Graph, alive: &BTreeSet<usize>) -> BushyForest {
    let mut forest = BushyForest::default();
    let mut in_forest: BTreeSet<usize> = BTreeSet::new();
    loop {
        let outside =
            |v: usize, inf: &BTreeSet<usize>| g.neighbors(v).filter(|u| alive.contains(u) && !inf.contains(u)).collect::<Vec<_>>();

        let new_root = alive
            .iter()
            .copied()
            .find(|&v| !in_forest.contains(&v) && outside(v, &in_forest).len() >= 4);
        if let Some(root) = new_root {
            let outs = outside(root, &in_forest);
            in_forest.insert(root);
            let mut tree = BushyTree {
                root,
                parent: BTreeMap::new(),
                internal: [root].into_iter().collect(),
                leaves: BTreeSet::new(),
            };
            for u in outs {
                in_forest.insert(u);
                tree.parent.insert(u, root);
                tree.leaves.insert(u);
            }
            forest.trees.push(tree);
            continue;
        }

        let mut promoted = false;
        'promote: for tree in &mut forest.trees {
            let candidates: Vec<usize> = tree.leaves.iter().copied().collect();
            for leaf in candidates {
                let outs = outside(leaf, &in_forest);
                if outs.len() >= 3 {
                    tree.leaves.remove(&leaf);
                    tree.internal.insert(leaf);
                    for u in outs {
                        in_forest.insert(u);
                        tree.parent.insert(u, leaf);
                        tree.leaves.insert(u);
                    }
                    promoted = true;
                    break 'promote;
                }
            }
        }
        if !promoted {
            return forest;
        }
    }
}

/// Structural validity plus maximality of a bushy forest. Returns a
/// description of the first violation, if any.
pub fn check_bushy_forest(g: &Graph, alive: &BTreeSet<usize>, f: &BushyForest) -> Option<String> {
    let mut seen = BTreeSet::new();
    for tree in &f.trees {
        for v in tree.vertices() {
            if !alive.contains(&v) {
                return Some(format!("tree vertex {v} is not alive"));
            }
            if !seen.insert(v) {
                return Some(format!("vertex {v} appears in two trees"));
            }
        }
        for (&child, &par) in &tree.parent {
            if !g.has_edge(child, par) {
                return Some(format!("tree edge {child}-{par} missing from graph"));
            }
        }
        for &v in &tree.internal {
            let mut deg = tree.parent.values().filter(|&&p| p == v).count();
            if tree.parent.contains_key(&v) {
                deg += 1;
            }
            if deg < 4 {
                return Some(format!("internal vertex {v} has tree-degree {deg}"));
            }
            // Internal nodes absorbed all outside neighbors when created.
            if g.neighbors(v)
                .any(|u| alive.contains(&u) && !seen.contains(&u) && !f.vertices().contains(&u))
            {
                return Some(format!("internal vertex {v} kept a neighbor outside the forest"));
            }
        }
    }
    let in_forest = f.vertices();
    for &v in alive {
        let outside = g
            .neighbors(v)
            .filter(|u| alive.contains(u) && !in_forest.contains(u))
            .count();
        if !in_forest.contains(&v) && outside >= 4 {
            return Some(format!("vertex {v} could root a new tree"));
        }
    }
    for tree in &f.trees {
        for &leaf in &tree.leaves {
            let outside = g
                .neighbors(leaf)
                .filter(|u| alive.contains(u) && !in_forest.contains(u))
                .count();
            if outside >= 3 {
                return Some(format!("leaf {leaf} could be promoted"));
            }
        }
    }
    None
}

#[derive(Debug, Clone)]
pub struct H2Tree {
    /// Claw center.
    pub root: usize,
    /// Claw leaves.
    pub children: [usize; 3],
    /// Assigned grandchildren with the claw vertex they attach through.
    pub grandchildren: Vec<(usize, usize)>,
    /// 5 when the claw contains a vertex of alive degree >= 4, else 3.
    pub capacity: usize,
}

impl H2Tree {
    pub fn claw_vertices(&self) -> [usize; 4] {
        [self.root, self.children[0], self.children[1], self.children[2]]
    }

    pub fn vertices(&self) -> impl Iterator<Item = usize> + '_ {
        self.claw_vertices()
            .into_iter()
            .chain(self.grandchildren.iter().map(|&(v, _)| v))
    }
}

#[derive(Debug, Clone, Default)]
pub struct HeightTwoForest {
    pub trees: Vec<H2Tree>,
}

impl HeightTwoForest {
    pub fn vertices(&self) -> BTreeSet<usize> {
        self.trees.iter().flat_map(|t| t.vertices()).collect()
    }
}

/// Covers the vertices outside the forest that are not adjacent to its
/// leaves: a maximal claw packing gives height-one trees, and an integral
/// maximum flow assigns every remaining such vertex to an adjacent claw
/// within per-tree capacities.
pub fn build_height2_forest(
    g: &Graph,
    alive: &BTreeSet<usize>,
    forest: &BushyForest,
) -> Result<HeightTwoForest, ColorError> {
    let in_forest = forest.vertices();
    let outside: BTreeSet<usize> = alive.difference(&in_forest).copied().collect();
    let fringe: BTreeSet<usize> = outside
        .iter()
        .copied()
        .filter(|&v| {
            g.neighbors(v)
                .any(|u| forest.trees.iter().any(|t| t.leaves.contains(&u)))
        })
        .collect();

    let (sub, ids) = g.induced(&outside);
    let claws: Vec<Claw> = k13_packing(&sub)
        .into_iter()
        .map(|c| Claw {
            center: ids[c.center],
            leaves: [ids[c.leaves[0]], ids[c.leaves[1]], ids[c.leaves[2]]],
        })
        .collect();
    let claw_vertices: BTreeSet<usize> = claws.iter().flat_map(|c| c.vertices()).collect();
    let pool: Vec<usize> = outside
        .iter()
        .copied()
        .filter(|v| !claw_vertices.contains(v) && !fringe.contains(v))
        .collect();

    let mut trees: Vec<H2Tree> = claws
        .iter()
        .map(|c| {
            let capacity = if c
                .vertices()
                .iter()
                .any(|&v| alive_degree(g, alive, v) >= 4)
            {
                5
            } else {
                3
            };
            H2Tree {
                root: c.center,
                children: c.leaves,
                grandchildren: Vec::new(),
                capacity,
            }
        })
        .collect();

    if pool.is_empty() {
        return Ok(HeightTwoForest { trees });
    }

    // Flow network: source -> tree (capacity 3/5) -> candidate (unit,
    // when adjacent to the claw) -> sink.
    let t = trees.len();
    let source = t + pool.len();
    let sink = source + 1;
    let mut arcs: Vec<(usize, usize, i64)> = Vec::new();
    for (i, tree) in trees.iter().enumerate() {
        arcs.push((source, i, tree.capacity as i64));
    }
    for (j, &v) in pool.iter().enumerate() {
        arcs.push((t + j, sink, 1));
        for (i, tree) in trees.iter().enumerate() {
            if tree.claw_vertices().iter().any(|&c| g.has_edge(c, v)) {
                arcs.push((i, t + j, 1));
            }
        }
    }
    let net = FlowNetwork {
        nodes: sink + 1,
        arcs,
        source,
        sink,
    };
    let flow = max_flow_integer(&net);
    if flow.value != pool.len() as i64 {
        return Err(ColorError::Contract(format!(
            "height-two cover infeasible: {} of {} vertices assigned",
            flow.value,
            pool.len()
        )));
    }
    for (k, &(from, to, _)) in net.arcs.iter().enumerate() {
        if from < t && to >= t && to < t + pool.len() && flow.on_arc[k] == 1 {
            let v = pool[to - t];
            let via = trees[from]
                .claw_vertices()
                .into_iter()
                .filter(|&c| g.has_edge(c, v))
                .min_by_key(|&c| (c == trees[from].root, c))
                .expect("flow arc implies adjacency");
            trees[from].grandchildren.push((v, via));
        }
    }
    Ok(HeightTwoForest { trees })
}

/// Structural invariants of a produced height-two forest.
pub fn check_height2_forest(
    g: &Graph,
    alive: &BTreeSet<usize>,
    forest: &BushyForest,
    h2: &HeightTwoForest,
) -> Option<String> {
    let mut seen = BTreeSet::new();
    for tree in &h2.trees {
        for v in tree.vertices() {
            if !alive.contains(&v) {
                return Some(format!("height-two vertex {v} is not alive"));
            }
            if !seen.insert(v) {
                return Some(format!("vertex {v} used by two height-two trees"));
            }
        }
        for &c in &tree.children {
            if !g.has_edge(tree.root, c) {
                return Some(format!("claw edge {}-{c} missing", tree.root));
            }
        }
        if tree.grandchildren.len() > tree.capacity || tree.grandchildren.len() > 5 {
            return Some(format!(
                "tree at {} holds {} grandchildren (capacity {})",
                tree.root,
                tree.grandchildren.len(),
                tree.capacity
            ));
        }
        if tree.grandchildren.len() >= 4
            && !tree
                .claw_vertices()
                .iter()
                .any(|&v| alive_degree(g, alive, v) >= 4)
        {
            return Some(format!(
                "tree at {} has {} grandchildren but no degree-4 vertex",
                tree.root,
                tree.grandchildren.len()
            ));
        }
        for &(v, via) in &tree.grandchildren {
            if !tree.claw_vertices().contains(&via) || !g.has_edge(via, v) {
                return Some(format!("grandchild {v} not attached to its claw"));
            }
        }
    }
    // Coverage: every alive vertex outside the forest and not adjacent to
    // its leaves sits in some height-two tree.
    let in_forest = forest.vertices();
    let covered = h2.vertices();
    for &v in alive {
        if in_forest.contains(&v) {
            continue;
        }
        let near_leaf = g
            .neighbors(v)
            .any(|u| forest.trees.iter().any(|t| t.leaves.contains(&u)));
        if !near_leaf && !covered.contains(&v) {
            return Some(format!("vertex {v} left uncovered"));
        }
    }
    None
}

/// Vertex counts of a produced cover and the cost it predicts.
#[derive(Debug, Clone)]
pub struct ForestAccounting {
    /// Bushy-forest roots.
    pub roots: usize,
    /// Non-root internal vertices.
    pub inner: usize,
    /// Leaves of the bushy forest.
    pub leaves: usize,
    /// Vertices outside the forest adjacent to its leaves.
    pub fringe: usize,
    /// Everything else outside the forest.
    pub remote: usize,
    pub total: usize,
    /// Predicted enumeration cost 3^roots 2^inner B^fringe (3B^3)^(remote/7)
    /// where B is the CSP base, normalized per vertex.
    pub predicted_base: f64,
}

impl ForestAccounting {
    pub fn satisfies_cover_bounds(&self) -> bool {
        let (p, q, r, s, t) = (
            self.roots as f64,
            self.inner as f64,
            self.leaves as f64,
            self.fringe as f64,
            self.remote as f64,
        );
        4.0 * p + 2.0 * q <= r + 1e-9 && s <= 2.0 * r + 1e-9 && s + t <= 20.0 * r / 3.0 + 1e-9
    }
}

pub fn accounting(
    g: &Graph,
    alive: &BTreeSet<usize>,
    forest: &BushyForest,
    h2: &HeightTwoForest,
) -> ForestAccounting {
    let in_forest = forest.vertices();
    let roots = forest.root_count();
    let inner = forest.internal_count() - roots;
    let leaves = forest.leaf_count();
    let fringe = alive
        .iter()
        .filter(|&&v| {
            !in_forest.contains(&v)
                && g.neighbors(v)
                    .any(|u| forest.trees.iter().any(|t| t.leaves.contains(&u)))
        })
        .count();
    let total = alive.len();
    let remote = total - roots - inner - leaves - fringe;
    debug_assert!(h2
        .vertices()
        .iter()
        .all(|v| !in_forest.contains(v)));

    let base = derived_constants().csp_base;
    let cost = 3f64.powi(roots as i32)
        * 2f64.powi(inner as i32)
        * base.powi(fringe as i32)
        * (3.0 * base.powi(3)).powf(remote as f64 / 7.0);
    let predicted_base = if total == 0 {
        1.0
    } else {
        cost.powf(1.0 / total as f64)
    };
    ForestAccounting {
        roots,
        inner,
        leaves,
        fringe,
        remote,
        total,
        predicted_base,
    }
}

#[derive(Debug, Clone, Default)]
pub struct PipelineStats {
    /// Times the degree-3 branching fired.
    pub degree3_branchings: u64,
    /// Times a detected structure was skipped (construction unusable).
    pub degree3_skips: u64,
    pub peeled: u64,
    pub enumerations: u64,
    pub covers: Vec<ForestAccounting>,
    pub csp: SearchStats,
}

/// Enumerates the colorings of the selected set S (bushy-forest internals
/// plus one selected vertex per height-two tree) and solves each residue
/// as a list-coloring CSP. Exhaustive over S-colorings, so the verdict is
/// exact regardless of how S was chosen.
pub fn enumerate_and_solve(
    g: &Graph,
    alive: &BTreeSet<usize>,
    forest: &BushyForest,
    h2: &HeightTwoForest,
    stats: &mut PipelineStats,
) -> Option<Coloring> {
    // Selection per height-two tree: the root, unless enumerating the
    // children instead predicts a cheaper product (it never does at these
    // tree shapes, but the accounting decides, not an assumption).
    let base = derived_constants().csp_base;
    let mut selected: Vec<usize> = Vec::new();
    for tree in &h2.trees {
        let root_cost = 3.0 * base.powi(tree.grandchildren.len() as i32);
        let child_cost = 3.0 * 8.0;
        if root_cost <= child_cost {
            selected.push(tree.root);
        } else {
            selected.extend(tree.children);
        }
    }

    // S in enumeration order: tree internals root-first, then selections.
    let mut slots: Vec<Slot> = Vec::new();
    for tree in &forest.trees {
        slots.push(Slot::Free(tree.root));
        // Internal vertices in BFS order so parents precede children.
        let mut frontier = vec![tree.root];
        while let Some(u) = frontier.pop() {
            let mut kids: Vec<usize> = tree
                .parent
                .iter()
                .filter(|&(_, &p)| p == u)
                .map(|(&c, _)| c)
                .filter(|c| tree.internal.contains(c))
                .collect();
            kids.sort_unstable();
            for k in kids {
                slots.push(Slot::Child { v: k, parent: u });
                frontier.push(k);
            }
        }
    }
    for &v in &selected {
        slots.push(Slot::Free(v));
    }

    let s_vertices: Vec<usize> = slots
        .iter()
        .map(|s| match s {
            Slot::Free(v) | Slot::Child { v, .. } => *v,
        })
        .collect();
    let s_set: BTreeSet<usize> = s_vertices.iter().copied().collect();

    let mut chosen: BTreeMap<usize, Color> = BTreeMap::new();
    enumerate_rec(g, alive, &slots, 0, &mut chosen, &s_set, stats)
}

fn enumerate_rec(
    g: &Graph,
    alive: &BTreeSet<usize>,
    slots: &[Slot],
    i: usize,
    chosen: &mut BTreeMap<usize, Color>,
    s_set: &BTreeSet<usize>,
    stats: &mut PipelineStats,
) -> Option<Coloring> {
    if i == slots.len() {
        stats.enumerations += 1;
        return solve_residue(g, alive, chosen, s_set, stats);
    }
    let (v, options): (usize, Vec<Color>) = match slots[i] {
        Slot::Free(v) => (v, vec![1, 2, 3]),
        Slot::Child { v, parent } => {
            let pc = chosen[&parent];
            (v, (1..=3).filter(|&c| c != pc).collect())
        }
    };
    'options: for c in options {
        for u in g.neighbors(v) {
            if alive.contains(&u) && chosen.get(&u) == Some(&c) {
                continue 'options;
            }
        }
        chosen.insert(v, c);
        if let Some(full) = enumerate_rec(g, alive, slots, i + 1, chosen, s_set, stats) {
            return Some(full);
        }
        chosen.remove(&v);
    }
    None
}

/// One enumeration slot of S: a vertex free over {1,2,3} or an internal
/// tree vertex constrained away from its parent's color.
#[derive(Clone, Copy)]
enum Slot {
    Free(usize),
    Child { v: usize, parent: usize },
}

fn solve_residue(
    g: &Graph,
    alive: &BTreeSet<usize>,
    chosen: &BTreeMap<usize, Color>,
    s_set: &BTreeSet<usize>,
    stats: &mut PipelineStats,
) -> Option<Coloring> {
    let rest: BTreeSet<usize> = alive.difference(s_set).copied().collect();
    let mut lists: Vec<Vec<Color>> = Vec::new();
    let ids: Vec<usize> = rest.iter().copied().collect();
    for &v in &ids {
        let banned: BTreeSet<Color> = g
            .neighbors(v)
            .filter_map(|u| chosen.get(&u).copied())
            .collect();
        let list: Vec<Color> = (1..=3).filter(|c| !banned.contains(c)).collect();
        if list.is_empty() {
            return None;
        }
        lists.push(list);
    }
    let (sub, _) = g.induced(&rest);
    let csp = from_graph_coloring(&sub, &lists, SizeMeasure::default())
        .expect("residual lists are within bounds");
    let (solution, search) = solve(&csp);
    stats.csp.merge(&search);
    let solution = solution?;
    let mut full: Coloring = chosen.clone();
    for (i, &v) in ids.iter().enumerate() {
        let c = solution
            .get(crate::csp::VarId(i))
            .expect("CSP solution is total");
        full.insert(v, c);
    }
    debug_assert!(is_proper_coloring(g, alive, &full));
    Some(full)
}

/// Full pipeline for plain 3-coloring.
pub fn three_color(g: &Graph) -> (Option<Coloring>, PipelineStats) {
    let mut stats = PipelineStats::default();
    let alive: BTreeSet<usize> = (0..g.vertex_count()).collect();
    let coloring = color_rec(g, &alive, &mut stats);
    if let Some(c) = &coloring {
        debug_assert!(is_proper_coloring(g, &alive, c));
    }
    (coloring, stats)
}

fn color_rec(g: &Graph, alive: &BTreeSet<usize>, stats: &mut PipelineStats) -> Option<Coloring> {
    // Peel: vertices of degree <= 2 can always take a remaining color.
    let mut core = alive.clone();
    let mut peeled: Vec<usize> = Vec::new();
    while let Some(&v) = core.iter().find(|&&v| alive_degree(g, &core, v) <= 2) {
        core.remove(&v);
        peeled.push(v);
        stats.peeled += 1;
    }

    let mut coloring: Coloring = if core.is_empty() {
        BTreeMap::new()
    } else if let Some(branches) = reduce_degree3_structures(g, &core) {
        stats.degree3_branchings += 1;
        let mut result = None;
        for b in branches {
            if let Some(child_coloring) = color_rec(&b.graph, &b.alive, stats) {
                let mut c = child_coloring;
                let shared = c[&b.kept];
                c.insert(b.absorbed, shared);
                let used: BTreeSet<Color> = g
                    .neighbors(b.removed)
                    .filter(|u| core.contains(u))
                    .filter_map(|u| c.get(&u).copied())
                    .collect();
                let free = (1..=3).find(|x| !used.contains(x)).expect(
                    "a degree-3 vertex with two neighbors identified has a free color",
                );
                c.insert(b.removed, free);
                result = Some(c);
                break;
            }
        }
        result?
    } else {
        let forest = find_bushy_forest(g, &core);
        debug_assert!(check_bushy_forest(g, &core, &forest).is_none());
        let h2 = build_height2_forest(g, &core, &forest)
            .expect("height-two cover must be feasible for a maximal packing");
        debug_assert!(check_height2_forest(g, &core, &forest, &h2).is_none());
        stats.covers.push(accounting(g, &core, &forest, &h2));
        enumerate_and_solve(g, &core, &forest, &h2, stats)?
    };

    for &v in peeled.iter().rev() {
        let used: BTreeSet<Color> = g
            .neighbors(v)
            .filter_map(|u| coloring.get(&u).copied())
            .collect();
        let free = (1..=3)
            .find(|c| !used.contains(c))
            .expect("peeled vertices keep at most two colored neighbors");
        coloring.insert(v, free);
    }
    Some(coloring)
}
