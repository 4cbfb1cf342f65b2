//! Simple undirected graphs and the combinatorial subroutines the solvers
//! lean on: bipartite matching, integral maximum flow, and packing of
//! K_{1,3} subgraphs (claws).

use std::collections::BTreeSet;
use std::fmt;

#[derive(Debug, Clone, PartialEq)]
pub enum GraphError {
    Parse(String),
    SelfLoop(usize),
    OutOfRange(usize),
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::Parse(m) => write!(f, "parse error: {m}"),
            GraphError::SelfLoop(v) => write!(f, "self-loop at vertex {v}"),
            GraphError::OutOfRange(v) => write!(f, "vertex {v} out of range"),
        }
    }
}

impl std::error::Error for GraphError {}

/// Simple undirected graph over vertices `0..n`. No self-loops, no
/// parallel edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<BTreeSet<usize>>,
}

impl Graph {
    pub fn new(n: usize) -> Self {
        Graph {
            adj: vec![BTreeSet::new(); n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::new(n);
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        let n = self.adj.len();
        if u >= n {
            return Err(GraphError::OutOfRange(u));
        }
        if v >= n {
            return Err(GraphError::OutOfRange(v));
        }
        self.adj[u].insert(v);
        self.adj[v].insert(u);
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.adj[u].remove(&v);
        self.adj[v].remove(&u);
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(BTreeSet::len).sum::<usize>() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].contains(&v)
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.adj[v].iter().copied()
    }

    /// Edges as (u, v) with u < v, ascending.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, nbrs) in self.adj.iter().enumerate() {
            for &v in nbrs {
                if u < v {
                    out.push((u, v));
                }
            }
        }
        out
    }

    /// Subgraph induced by `keep`, with vertices renumbered to 0..k in
    /// ascending original order. Returns the graph and the original id of
    /// each new vertex.
    pub fn induced(&self, keep: &BTreeSet<usize>) -> (Graph, Vec<usize>) {
        let ids: Vec<usize> = keep.iter().copied().collect();
        let mut g = Graph::new(ids.len());
        for (i, &u) in ids.iter().enumerate() {
            for &v in &self.adj[u] {
                if v > u && keep.contains(&v) {
                    let j = ids.binary_search(&v).unwrap();
                    g.add_edge(i, j).unwrap();
                }
            }
        }
        (g, ids)
    }
}

/// DIMACS-like format: `p edge <n> <m>`, `e <u> <v>` 1-indexed, `c`
/// comments. The writer emits edges ascending; the reported edge count
/// must match.
pub fn write_dimacs(g: &Graph) -> String {
    let mut out = format!("p edge {} {}\n", g.vertex_count(), g.edge_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("e {} {}\n", u + 1, v + 1));
    }
    out
}

pub fn parse_dimacs(textual: &str) -> Result<Graph, GraphError> {
    let (g, extra) = parse_dimacs_with_extensions(textual, &[])?;
    debug_assert!(extra.is_empty());
    Ok(g)
}

/// An extension line: its type tag and unparsed payload tokens.
pub type ExtensionLine = (String, Vec<String>);

/// DIMACS parse that also collects extension lines whose type tag appears
/// in `extensions` (e.g. `l` list lines, `d` difference constraints).
pub fn parse_dimacs_with_extensions(
    textual: &str,
    extensions: &[&str],
) -> Result<(Graph, Vec<ExtensionLine>), GraphError> {
    let mut graph: Option<Graph> = None;
    let mut declared_m = 0usize;
    let mut extra = Vec::new();
    for (lineno, raw) in textual.lines().enumerate() {
        let lineno = lineno + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let toks: Vec<&str> = line.split_whitespace().collect();
        let fail = |msg: String| Err(GraphError::Parse(format!("line {lineno}: {msg}")));
        match toks[0] {
            "p" => {
                if graph.is_some() {
                    return fail("duplicate p line".into());
                }
                if toks.len() != 4 || toks[1] != "edge" {
                    return fail("expected `p edge <n> <m>`".into());
                }
                let n: usize = toks[2]
                    .parse()
                    .map_err(|_| GraphError::Parse(format!("line {lineno}: bad vertex count")))?;
                declared_m = toks[3]
                    .parse()
                    .map_err(|_| GraphError::Parse(format!("line {lineno}: bad edge count")))?;
                graph = Some(Graph::new(n));
            }
            "e" => {
                let g = match graph.as_mut() {
                    Some(g) => g,
                    None => return fail("e line before p line".into()),
                };
                if toks.len() != 3 {
                    return fail("expected `e <u> <v>`".into());
                }
                let u: usize = toks[1]
                    .parse()
                    .map_err(|_| GraphError::Parse(format!("line {lineno}: bad vertex")))?;
                let v: usize = toks[2]
                    .parse()
                    .map_err(|_| GraphError::Parse(format!("line {lineno}: bad vertex")))?;
                if u == 0 || v == 0 || u > g.vertex_count() || v > g.vertex_count() {
                    return fail(format!("vertex out of 1..={}", g.vertex_count()));
                }
                g.add_edge(u - 1, v - 1)
                    .map_err(|e| GraphError::Parse(format!("line {lineno}: {e}")))?;
            }
            tag if extensions.contains(&tag) => {
                if graph.is_none() {
                    return fail(format!("{tag} line before p line"));
                }
                extra.push((
                    tag.to_string(),
                    toks[1..].iter().map(|s| s.to_string()).collect(),
                ));
            }
            other => return fail(format!("unknown line type `{other}`")),
        }
    }
    let g = graph.ok_or_else(|| GraphError::Parse("missing p line".into()))?;
    if g.edge_count() != declared_m {
        return Err(GraphError::Parse(format!(
            "header declares {declared_m} edges, file has {}",
            g.edge_count()
        )));
    }
    Ok((g, extra))
}

/// Maximum-cardinality bipartite matching by augmenting paths.
///
/// `edges` connect left index -> right index. Returns for each left
/// vertex its matched right vertex, if any. Deterministic: left vertices
/// are processed in order and neighbors in sorted order.
pub fn max_bipartite_matching(
    left: usize,
    right: usize,
    edges: &[(usize, usize)],
) -> Vec<Option<usize>> {
    let mut adj = vec![Vec::new(); left];
    for &(l, r) in edges {
        assert!(l < left && r < right, "matching edge out of range");
        adj[l].push(r);
    }
    for a in &mut adj {
        a.sort_unstable();
        a.dedup();
    }
    let mut right_match: Vec<Option<usize>> = vec![None; right];
    let mut seen = vec![false; right];

    fn try_augment(
        l: usize,
        adj: &[Vec<usize>],
        seen: &mut [bool],
        right_match: &mut [Option<usize>],
    ) -> bool {
        for &r in &adj[l] {
            if seen[r] {
                continue;
            }
            seen[r] = true;
            if right_match[r].is_none()
                || try_augment(right_match[r].unwrap(), adj, seen, right_match)
            {
                right_match[r] = Some(l);
                return true;
            }
        }
        false
    }

    for l in 0..left {
        seen.fill(false);
        try_augment(l, &adj, &mut seen, &mut right_match);
    }
    let mut left_match = vec![None; left];
    for (r, lm) in right_match.iter().enumerate() {
        if let Some(l) = lm {
            left_match[*l] = Some(r);
        }
    }
    left_match
}

/// Directed flow network with integer capacities.
#[derive(Debug, Clone)]
pub struct FlowNetwork {
    pub nodes: usize,
    pub arcs: Vec<(usize, usize, i64)>,
    pub source: usize,
    pub sink: usize,
}

#[derive(Debug, Clone)]
pub struct Flow {
    pub value: i64,
    /// Flow on each arc, indexed like `FlowNetwork::arcs`.
    pub on_arc: Vec<i64>,
}

/// Integral maximum flow via shortest (BFS) augmenting paths.
pub fn max_flow_integer(net: &FlowNetwork) -> Flow {
    assert!(net.source < net.nodes && net.sink < net.nodes);
    // Residual arcs come in pairs: 2k is arcs[k], 2k+1 its reverse.
    let mut head = vec![Vec::new(); net.nodes];
    let mut to = Vec::with_capacity(net.arcs.len() * 2);
    let mut cap = Vec::with_capacity(net.arcs.len() * 2);
    for &(u, v, c) in &net.arcs {
        assert!(c >= 0, "negative capacity");
        head[u].push(to.len());
        to.push(v);
        cap.push(c);
        head[v].push(to.len());
        to.push(u);
        cap.push(0);
    }

    let mut value = 0i64;
    loop {
        let mut prev_arc = vec![usize::MAX; net.nodes];
        let mut queue = std::collections::VecDeque::new();
        queue.push_back(net.source);
        let mut reached = vec![false; net.nodes];
        reached[net.source] = true;
        while let Some(u) = queue.pop_front() {
            for &a in &head[u] {
                let v = to[a];
                if cap[a] > 0 && !reached[v] {
                    reached[v] = true;
                    prev_arc[v] = a;
                    queue.push_back(v);
                }
            }
        }
        if !reached[net.sink] {
            break;
        }
        let mut bottleneck = i64::MAX;
        let mut v = net.sink;
        while v != net.source {
            let a = prev_arc[v];
            bottleneck = bottleneck.min(cap[a]);
            v = to[a ^ 1];
        }
        let mut v = net.sink;
        while v != net.source {
            let a = prev_arc[v];
            cap[a] -= bottleneck;
            cap[a ^ 1] += bottleneck;
            v = to[a ^ 1];
        }
        value += bottleneck;
    }

    let on_arc = net
        .arcs
        .iter()
        .enumerate()
        .map(|(k, &(_, _, c))| c - cap[2 * k])
        .collect();
    Flow { value, on_arc }
}

/// Checks capacity and conservation of a returned flow exactly.
pub fn flow_is_feasible(net: &FlowNetwork, flow: &Flow) -> bool {
    let mut balance = vec![0i64; net.nodes];
    for (k, &(u, v, c)) in net.arcs.iter().enumerate() {
        let f = flow.on_arc[k];
        if f < 0 || f > c {
            return false;
        }
        balance[u] -= f;
        balance[v] += f;
    }
    for (node, b) in balance.iter().enumerate() {
        if node == net.source {
            if *b != -flow.value {
                return false;
            }
        } else if node == net.sink {
            if *b != flow.value {
                return false;
            }
        } else if *b != 0 {
            return false;
        }
    }
    true
}

/// A claw: center vertex plus three leaves, all distinct, with edges from
/// the center to each leaf.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Claw {
    pub center: usize,
    pub leaves: [usize; 3],
}

impl Claw {
    pub fn vertices(&self) -> [usize; 4] {
        [self.center, self.leaves[0], self.leaves[1], self.leaves[2]]
    }
}

/// Vertex-disjoint claws, maximal in two senses: no further claw fits in
/// the unused vertices, and no single claw can be removed and replaced by
/// two or more claws drawn from its freed vertices plus the unused ones.
pub fn k13_packing(g: &Graph) -> Vec<Claw> {
    let mut packing = Vec::new();
    let mut used = vec![false; g.vertex_count()];

    greedy_fill(g, &mut packing, &mut used);
    loop {
        let mut improved = false;
        for i in 0..packing.len() {
            let removed = packing[i].clone();
            for v in removed.vertices() {
                used[v] = false;
            }
            // The replacement search must be exhaustive, otherwise the
            // packing can end up weaker than the maximality the flow
            // assignment relies on.
            let mut trial_used = used.clone();
            if let Some(pair) = find_claw_combo(g, &mut trial_used, 2) {
                packing.swap_remove(i);
                packing.extend(pair);
                used = trial_used;
                greedy_fill(g, &mut packing, &mut used);
                improved = true;
                break;
            }
            for v in removed.vertices() {
                used[v] = true;
            }
        }
        if !improved {
            break;
        }
    }
    packing.sort_by_key(|c| c.center);
    packing
}

/// Exhaustively searches for `want` vertex-disjoint claws on unused
/// vertices, marking their vertices used on success.
fn find_claw_combo(g: &Graph, used: &mut [bool], want: usize) -> Option<Vec<Claw>> {
    if want == 0 {
        return Some(Vec::new());
    }
    for center in 0..g.vertex_count() {
        if used[center] {
            continue;
        }
        let free: Vec<usize> = g.neighbors(center).filter(|&v| !used[v]).collect();
        if free.len() < 3 {
            continue;
        }
        for i in 0..free.len() {
            for j in i + 1..free.len() {
                for k in j + 1..free.len() {
                    let claw = Claw {
                        center,
                        leaves: [free[i], free[j], free[k]],
                    };
                    for v in claw.vertices() {
                        used[v] = true;
                    }
                    if let Some(mut rest) = find_claw_combo(g, used, want - 1) {
                        rest.insert(0, claw);
                        return Some(rest);
                    }
                    for v in claw.vertices() {
                        used[v] = false;
                    }
                }
            }
        }
    }
    None
}

/// Adds claws greedily over unused vertices, trying every center and
/// every triple of its unused neighbors, lowest-first.
fn greedy_fill(g: &Graph, packing: &mut Vec<Claw>, used: &mut [bool]) {
    loop {
        let mut placed = false;
        'centers: for center in 0..g.vertex_count() {
            if used[center] {
                continue;
            }
            let free: Vec<usize> = g.neighbors(center).filter(|&v| !used[v]).collect();
            if free.len() < 3 {
                continue;
            }
            let leaves = [free[0], free[1], free[2]];
            packing.push(Claw { center, leaves });
            used[center] = true;
            for l in leaves {
                used[l] = true;
            }
            placed = true;
            break 'centers;
        }
        if !placed {
            return;
        }
    }
}

/// Exhaustive check of the exchange-maximality property: no claw can be
/// added outright, and removing any one claw never frees room for two.
pub fn is_exchange_maximal(g: &Graph, packing: &[Claw]) -> bool {
    let mut used = vec![false; g.vertex_count()];
    for claw in packing {
        for v in claw.vertices() {
            if used[v] {
                return false; // not vertex-disjoint
            }
            used[v] = true;
        }
        if !claw.leaves.iter().all(|&l| g.has_edge(claw.center, l)) {
            return false; // not a claw of g
        }
    }
    if can_place_claws(g, &used, 1) {
        return false;
    }
    for claw in packing {
        let mut trial = used.clone();
        for v in claw.vertices() {
            trial[v] = false;
        }
        if can_place_claws(g, &trial, 2) {
            return false;
        }
    }
    true
}

/// Can `want` vertex-disjoint claws be placed on unused vertices?
/// Exhaustive over centers and leaf triples.
fn can_place_claws(g: &Graph, used: &[bool], want: usize) -> bool {
    if want == 0 {
        return true;
    }
    for center in 0..g.vertex_count() {
        if used[center] {
            continue;
        }
        let free: Vec<usize> = g.neighbors(center).filter(|&v| !used[v]).collect();
        if free.len() < 3 {
            continue;
        }
        for i in 0..free.len() {
            for j in i + 1..free.len() {
                for k in j + 1..free.len() {
                    let mut trial = used.to_vec();
                    trial[center] = true;
                    trial[free[i]] = true;
                    trial[free[j]] = true;
                    trial[free[k]] = true;
                    if can_place_claws(g, &trial, want - 1) {
                        return true;
                    }
                }
            }
        }
    }
    false
}
