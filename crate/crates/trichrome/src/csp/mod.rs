//! The (d,2)-CSP data model and its safe local transformations.
//!
//! An instance is a set of variables, each with a small list of allowed
//! colors, plus binary constraints: a constraint names two
//! (variable, color) pairs and forbids the combination where both
//! variables take exactly those colors. A solution picks one allowed
//! color per variable violating no constraint.
//!
//! Every transformation in this module is solvability-exact and returns a
//! [`SolutionMap`] that rebuilds a parent solution from any child
//! solution. The brute-force solver at the bottom is the verification
//! oracle the rest of the crate is tested against.
//!
//! Domains may exceed four colors so that the randomized front ends can
//! hold (d,2) instances; the size measure and the deterministic solver
//! only accept domains of at most four colors.

mod text;
mod twosat;

pub use text::{parse_instance, write_instance};
pub use twosat::solve_22csp;

use crate::graph::Graph;
use crate::workfactor::SizeMeasure;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

pub type Color = u32;

/// Stable variable identity. Ids survive transformations: merged or
/// eliminated variables disappear from the instance but their ids are
/// never reused.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(pub usize);

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "x{}", self.0)
    }
}

/// One (variable, color) pair.
pub type Pair = (VarId, Color);

/// Constraint endpoints as raw indices, used when building instances.
pub type RawConstraint = ((usize, Color), (usize, Color));

/// A forbidden combination of two pairs on distinct variables, stored in
/// canonical order so duplicates collapse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Constraint {
    lo: Pair,
    hi: Pair,
}

impl Constraint {
    pub fn new(a: Pair, b: Pair) -> Self {
        debug_assert!(a.0 != b.0, "constraint endpoints must differ in variable");
        if a <= b {
            Constraint { lo: a, hi: b }
        } else {
            Constraint { lo: b, hi: a }
        }
    }

    pub fn ends(&self) -> (Pair, Pair) {
        (self.lo, self.hi)
    }

    pub fn touches(&self, p: Pair) -> bool {
        self.lo == p || self.hi == p
    }

    pub fn touches_var(&self, v: VarId) -> bool {
        self.lo.0 == v || self.hi.0 == v
    }

    /// The endpoint opposite to `p`; `p` must be one of the endpoints.
    pub fn other(&self, p: Pair) -> Pair {
        if self.lo == p {
            self.hi
        } else {
            debug_assert_eq!(self.hi, p);
            self.lo
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CspError {
    Build(String),
    Contract(String),
    RuleNotApplicable(String),
}

impl fmt::Display for CspError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CspError::Build(m) => write!(f, "build error: {m}"),
            CspError::Contract(m) => write!(f, "contract violation: {m}"),
            CspError::RuleNotApplicable(m) => write!(f, "rule not applicable: {m}"),
        }
    }
}

impl std::error::Error for CspError {}

/// A total choice of colors, one per variable.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Assignment {
    map: BTreeMap<VarId, Color>,
}

impl Assignment {
    pub fn new() -> Self {
        Assignment::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = Pair>) -> Self {
        Assignment {
            map: pairs.into_iter().collect(),
        }
    }

    pub fn get(&self, v: VarId) -> Option<Color> {
        self.map.get(&v).copied()
    }

    pub fn set(&mut self, v: VarId, c: Color) {
        self.map.insert(v, c);
    }

    pub fn remove(&mut self, v: VarId) -> Option<Color> {
        self.map.remove(&v)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (VarId, Color)> + '_ {
        self.map.iter().map(|(&v, &c)| (v, c))
    }
}

/// Rebuilds a parent solution from a child solution.
///
/// `consumed` child variables are removed, then the first case whose
/// pattern holds in the child solution fires and its `produce` pairs are
/// inserted. Transformations construct their cases so that some case
/// always matches on any valid child solution.
#[derive(Debug, Clone, Default)]
pub struct SolutionMap {
    consumed: Vec<VarId>,
    cases: Vec<MapCase>,
}

#[derive(Debug, Clone)]
pub struct MapCase {
    pub pattern: Vec<Pair>,
    pub produce: Vec<Pair>,
}

impl SolutionMap {
    pub fn identity() -> Self {
        SolutionMap::extend(Vec::new())
    }

    /// Adds fixed pairs to the child solution.
    pub fn extend(fixed: Vec<Pair>) -> Self {
        SolutionMap {
            consumed: Vec::new(),
            cases: vec![MapCase {
                pattern: Vec::new(),
                produce: fixed,
            }],
        }
    }

    pub fn with_cases(consumed: Vec<VarId>, cases: Vec<MapCase>) -> Self {
        SolutionMap { consumed, cases }
    }

    pub fn lift(&self, solution: &mut Assignment) {
        let case = self
            .cases
            .iter()
            .find(|c| {
                c.pattern
                    .iter()
                    .all(|&(v, col)| solution.get(v) == Some(col))
            })
            .unwrap_or_else(|| panic!("no solution-map case matched: {self:?}"));
        let produce = case.produce.clone();
        for &v in &self.consumed {
            solution.remove(v);
        }
        for (v, c) in produce {
            solution.set(v, c);
        }
    }
}

/// A stack of solution maps in the order the transformations were applied
/// to the instance. Lifting a child solution replays them backwards.
#[derive(Debug, Clone, Default)]
pub struct MapChain {
    maps: Vec<SolutionMap>,
}

impl MapChain {
    pub fn new() -> Self {
        MapChain::default()
    }

    pub fn push(&mut self, m: SolutionMap) {
        self.maps.push(m);
    }

    pub fn append(&mut self, mut other: MapChain) {
        self.maps.append(&mut other.maps);
    }

    pub fn lift(&self, mut solution: Assignment) -> Assignment {
        for m in self.maps.iter().rev() {
            m.lift(&mut solution);
        }
        solution
    }
}

/// Outcome of a propagating transformation: a reduced instance with its
/// back-map, or the signal that a domain emptied.
#[derive(Debug, Clone)]
pub enum Step {
    Reduced(CspInstance, SolutionMap),
    Unsat,
}

/// Outcome of an assignment: the reduced instance plus every assignment
/// the cascade fixed (the first entry is the requested one).
#[derive(Debug, Clone)]
pub enum Propagated {
    Reduced { instance: CspInstance, fixed: Vec<Pair> },
    Unsat,
}

impl Propagated {
    /// View as a [`Step`], packaging the fixed pairs as the back-map.
    pub fn into_step(self) -> Step {
        match self {
            Propagated::Reduced { instance, fixed } => {
                Step::Reduced(instance, SolutionMap::extend(fixed))
            }
            Propagated::Unsat => Step::Unsat,
        }
    }
}

/// Constraint counts and neighbor sets per (variable, color) pair,
/// recomputed from the constraint set on demand.
#[derive(Debug, Clone, Default)]
pub struct PairDegrees {
    neighbors: BTreeMap<Pair, Vec<Pair>>,
}

impl PairDegrees {
    pub fn count(&self, p: Pair) -> usize {
        self.neighbors.get(&p).map_or(0, Vec::len)
    }

    /// Neighboring pairs, sorted.
    pub fn neighbor_pairs(&self, p: Pair) -> &[Pair] {
        self.neighbors.get(&p).map_or(&[], Vec::as_slice)
    }

    pub fn neighbor_vars(&self, p: Pair) -> BTreeSet<VarId> {
        self.neighbor_pairs(p).iter().map(|&(v, _)| v).collect()
    }

    pub fn pairs(&self) -> impl Iterator<Item = (Pair, &[Pair])> {
        self.neighbors.iter().map(|(&p, n)| (p, n.as_slice()))
    }
}

#[derive(Debug, Clone)]
pub struct CspInstance {
    vars: BTreeMap<VarId, BTreeSet<Color>>,
    constraints: BTreeSet<Constraint>,
    measure: SizeMeasure,
    next_var: usize,
}

impl PartialEq for CspInstance {
    fn eq(&self, other: &Self) -> bool {
        self.vars == other.vars
            && self.constraints == other.constraints
            && self.measure.epsilon == other.measure.epsilon
    }
}

impl CspInstance {
    /// Builds an instance from explicit domains (variable `i` gets
    /// `domains[i]`) and constraints referencing variables by index.
    /// Duplicate constraints collapse; duplicate colors within a domain
    /// and dangling references are rejected.
    pub fn build(
        domains: &[Vec<Color>],
        constraints: &[RawConstraint],
        measure: SizeMeasure,
    ) -> Result<Self, CspError> {
        let mut vars = BTreeMap::new();
        for (i, dom) in domains.iter().enumerate() {
            let set: BTreeSet<Color> = dom.iter().copied().collect();
            if set.len() != dom.len() {
                return Err(CspError::Build(format!(
                    "variable {i} lists a duplicate color"
                )));
            }
            vars.insert(VarId(i), set);
        }
        let mut inst = CspInstance {
            vars,
            constraints: BTreeSet::new(),
            measure,
            next_var: domains.len(),
        };
        for &((v, cv), (w, cw)) in constraints {
            if v == w {
                return Err(CspError::Build(format!(
                    "constraint references variable {v} twice"
                )));
            }
            for (x, cx) in [(v, cv), (w, cw)] {
                match inst.vars.get(&VarId(x)) {
                    None => {
                        return Err(CspError::Build(format!(
                            "constraint references undeclared variable {x}"
                        )))
                    }
                    Some(dom) if !dom.contains(&cx) => {
                        return Err(CspError::Build(format!(
                            "constraint references color {cx} not allowed at variable {x}"
                        )))
                    }
                    _ => {}
                }
            }
            inst.constraints
                .insert(Constraint::new((VarId(v), cv), (VarId(w), cw)));
        }
        Ok(inst)
    }

    pub fn empty(measure: SizeMeasure) -> Self {
        CspInstance {
            vars: BTreeMap::new(),
            constraints: BTreeSet::new(),
            measure,
            next_var: 0,
        }
    }

    pub fn measure(&self) -> SizeMeasure {
        self.measure
    }

    pub fn var_count(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn var_ids(&self) -> impl Iterator<Item = VarId> + '_ {
        self.vars.keys().copied()
    }

    pub fn domain(&self, v: VarId) -> Option<&BTreeSet<Color>> {
        self.vars.get(&v)
    }

    pub fn constraints(&self) -> impl Iterator<Item = &Constraint> {
        self.constraints.iter()
    }

    pub fn constraint_count(&self) -> usize {
        self.constraints.len()
    }

    pub fn max_domain(&self) -> usize {
        self.vars.values().map(BTreeSet::len).max().unwrap_or(0)
    }

    /// Size under the epsilon measure: three-color (and two-color)
    /// variables weigh 1, four-color variables weigh `2 - epsilon`,
    /// single-color variables are about to be propagated away and weigh 0.
    pub fn size(&self) -> f64 {
        self.vars
            .values()
            .map(|d| self.measure.variable_weight(d.len()))
            .sum()
    }

    pub fn pair_degrees(&self) -> PairDegrees {
        let mut neighbors: BTreeMap<Pair, Vec<Pair>> = BTreeMap::new();
        for c in &self.constraints {
            let (a, b) = c.ends();
            neighbors.entry(a).or_default().push(b);
            neighbors.entry(b).or_default().push(a);
        }
        for list in neighbors.values_mut() {
            list.sort_unstable();
        }
        PairDegrees { neighbors }
    }

    pub fn constraints_touching(&self, p: Pair) -> Vec<Constraint> {
        self.constraints
            .iter()
            .filter(|c| c.touches(p))
            .copied()
            .collect()
    }

    /// True iff `a` assigns every variable an allowed color and violates
    /// no constraint. Errors if some variable of the instance is missing
    /// from `a`; entries for unknown variables are ignored.
    pub fn is_solution(&self, a: &Assignment) -> Result<bool, CspError> {
        for (&v, dom) in &self.vars {
            match a.get(v) {
                None => {
                    return Err(CspError::Contract(format!(
                        "assignment is missing variable {v}"
                    )))
                }
                Some(c) => {
                    if !dom.contains(&c) {
                        return Ok(false);
                    }
                }
            }
        }
        for c in &self.constraints {
            let ((v, cv), (w, cw)) = c.ends();
            if a.get(v) == Some(cv) && a.get(w) == Some(cw) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn fresh_var(&mut self, colors: BTreeSet<Color>) -> VarId {
        let id = VarId(self.next_var);
        self.next_var += 1;
        self.vars.insert(id, colors);
        id
    }

    /// Removes a variable together with every constraint that mentions it
    /// (on any of its colors).
    fn drop_var(&mut self, v: VarId) {
        self.vars.remove(&v);
        self.constraints.retain(|c| !c.touches_var(v));
    }

    /// Removes color `c` from `v` in place along with the constraints on
    /// (v, c). Returns false when the domain empties.
    fn remove_color(&mut self, v: VarId, c: Color) -> bool {
        let dom = self.vars.get_mut(&v).expect("remove_color: unknown variable");
        dom.remove(&c);
        let now_empty = dom.is_empty();
        self.constraints.retain(|x| !x.touches((v, c)));
        !now_empty
    }

    /// Fixes `v := c` and propagates: neighbors of (v, c) lose the
    /// conflicting color, and any variable cascading down to a single
    /// color is fixed in turn. Returns the reduced instance plus all
    /// assignments made, or `Unsat` when a domain empties.
    pub fn assign_and_propagate(&self, v: VarId, c: Color) -> Result<Propagated, CspError> {
        self.check_pair(v, c)?;
        let mut inst = self.clone();
        let mut fixed = Vec::new();
        let mut queue = vec![(v, c)];
        while let Some((v, c)) = queue.pop() {
            match inst.vars.get(&v) {
                None => {
                    // Already fixed by an earlier cascade step; consistent
                    // fixes are no-ops, conflicting ones are unsatisfiable.
                    if fixed.iter().any(|&(w, x)| w == v && x != c) {
                        return Ok(Propagated::Unsat);
                    }
                    continue;
                }
                Some(dom) => {
                    if !dom.contains(&c) {
                        return Ok(Propagated::Unsat);
                    }
                }
            }
            fixed.push((v, c));
            let hits: Vec<Pair> = inst
                .constraints_touching((v, c))
                .iter()
                .map(|x| x.other((v, c)))
                .collect();
            inst.drop_var(v);
            for (w, b) in hits {
                if !inst.vars.contains_key(&w) {
                    // w got fixed earlier in this cascade; conflict iff it
                    // was fixed to exactly the forbidden color.
                    if fixed.iter().any(|&(u, x)| u == w && x == b) {
                        return Ok(Propagated::Unsat);
                    }
                    continue;
                }
                if !inst.domain(w).unwrap().contains(&b) {
                    continue;
                }
                if !inst.remove_color(w, b) {
                    return Ok(Propagated::Unsat);
                }
                let dom = inst.domain(w).unwrap();
                if dom.len() == 1 {
                    let only = *dom.iter().next().unwrap();
                    queue.push((w, only));
                }
            }
        }
        Ok(Propagated::Reduced { instance: inst, fixed })
    }

    /// Removes color `c` from `v`'s list together with the constraints on
    /// (v, c). No propagation; `Unsat` when the domain empties.
    pub fn delete_color(&self, v: VarId, c: Color) -> Result<Step, CspError> {
        self.check_pair(v, c)?;
        let mut inst = self.clone();
        if !inst.remove_color(v, c) {
            return Ok(Step::Unsat);
        }
        Ok(Step::Reduced(inst, SolutionMap::identity()))
    }

    fn check_pair(&self, v: VarId, c: Color) -> Result<(), CspError> {
        match self.vars.get(&v) {
            None => Err(CspError::Contract(format!("unknown variable {v}"))),
            Some(dom) if !dom.contains(&c) => Err(CspError::Contract(format!(
                "color {c} is not allowed at {v}"
            ))),
            _ => Ok(()),
        }
    }

    /// Merges two three-color variables joined by a mutually isolated
    /// constraint into one four-color variable.
    ///
    /// Requires a constraint {(v,R),(w,R')} that is the only constraint on
    /// (v,R) and the only constraint on (w,R'). The merged variable's
    /// colors 0,1 stand for v's two other colors and 2,3 for w's; external
    /// constraints are retargeted accordingly.
    pub fn merge_isolated_pair(&self, v: VarId, w: VarId) -> Result<Step, CspError> {
        let degrees = self.pair_degrees();
        let dom_v = self
            .domain(v)
            .ok_or_else(|| CspError::Contract(format!("unknown variable {v}")))?;
        let dom_w = self
            .domain(w)
            .ok_or_else(|| CspError::Contract(format!("unknown variable {w}")))?;
        if dom_v.len() != 3 || dom_w.len() != 3 {
            return Err(CspError::RuleNotApplicable(
                "both variables must have exactly three colors".into(),
            ));
        }
        let candidate = self.constraints.iter().find(|c| {
            let ((a, ca), (b, cb)) = c.ends();
            let joins = (a == v && b == w) || (a == w && b == v);
            joins && degrees.count((a, ca)) == 1 && degrees.count((b, cb)) == 1
        });
        let Some(link) = candidate.copied() else {
            return Err(CspError::RuleNotApplicable(
                "no mutually isolated constraint between the two variables".into(),
            ));
        };
        let (pv, pw) = {
            let (a, b) = link.ends();
            if a.0 == v {
                (a, b)
            } else {
                (b, a)
            }
        };
        let (_, r_v) = pv;
        let (_, r_w) = pw;
        let v_rest: Vec<Color> = dom_v.iter().copied().filter(|&c| c != r_v).collect();
        let w_rest: Vec<Color> = dom_w.iter().copied().filter(|&c| c != r_w).collect();

        let mut inst = self.clone();
        let u = inst.fresh_var((0..4).collect());
        // Merged color -> the pair of original assignments it stands for.
        let decode: Vec<(Pair, Pair)> = vec![
            ((v, v_rest[0]), (w, r_w)),
            ((v, v_rest[1]), (w, r_w)),
            ((w, w_rest[0]), (v, r_v)),
            ((w, w_rest[1]), (v, r_v)),
        ];
        let old_pair_of = |merged: Color| -> Pair {
            match merged {
                0 => (v, v_rest[0]),
                1 => (v, v_rest[1]),
                2 => (w, w_rest[0]),
                _ => (w, w_rest[1]),
            }
        };
        let mut rewritten = BTreeSet::new();
        for c in &inst.constraints {
            let (a, b) = c.ends();
            let map_end = |p: Pair| -> Pair {
                for merged in 0..4u32 {
                    if old_pair_of(merged) == p {
                        return (u, merged);
                    }
                }
                p
            };
            let (na, nb) = (map_end(a), map_end(b));
            if na.0 == nb.0 {
                // Constraint folded onto the merged variable alone: the
                // combination "u is two colors at once" can never fire.
                continue;
            }
            rewritten.insert(Constraint::new(na, nb));
        }
        inst.constraints = rewritten;
        inst.vars.remove(&v);
        inst.vars.remove(&w);
        inst.constraints
            .retain(|c| !c.touches_var(v) && !c.touches_var(w));

        let cases = decode
            .iter()
            .enumerate()
            .map(|(merged, &(primary, secondary))| MapCase {
                pattern: vec![(u, merged as Color)],
                produce: vec![primary, secondary],
            })
            .collect();
        Ok(Step::Reduced(
            inst,
            SolutionMap::with_cases(vec![u], cases),
        ))
    }

    /// Inverse of [`merge_isolated_pair`]: expands a four-color variable
    /// `u` into two three-color variables joined by one fresh constraint.
    pub fn split_four_color(&self, u: VarId) -> Result<Step, CspError> {
        let dom = self
            .domain(u)
            .ok_or_else(|| CspError::Contract(format!("unknown variable {u}")))?;
        if dom.len() != 4 {
            return Err(CspError::RuleNotApplicable(
                "variable does not have exactly four colors".into(),
            ));
        }
        let colors: Vec<Color> = dom.iter().copied().collect();
        let fresh = colors.iter().max().unwrap() + 1;
        let (r_v, r_w) = (fresh, fresh);

        let mut inst = self.clone();
        let v = inst.fresh_var([r_v, colors[0], colors[1]].into_iter().collect());
        let w = inst.fresh_var([r_w, colors[2], colors[3]].into_iter().collect());
        let new_home = |c: Color| -> Pair {
            if c == colors[0] || c == colors[1] {
                (v, c)
            } else {
                (w, c)
            }
        };
        let mut rewritten = BTreeSet::new();
        for c in &inst.constraints {
            let (a, b) = c.ends();
            let map_end = |p: Pair| if p.0 == u { new_home(p.1) } else { p };
            rewritten.insert(Constraint::new(map_end(a), map_end(b)));
        }
        inst.constraints = rewritten;
        inst.vars.remove(&u);
        inst.constraints.insert(Constraint::new((v, r_v), (w, r_w)));

        // If v takes the reserve color, u's value came from w's side.
        let mut cases = Vec::new();
        for &cw in &[colors[2], colors[3]] {
            cases.push(MapCase {
                pattern: vec![(v, r_v), (w, cw)],
                produce: vec![(u, cw)],
            });
        }
        for &cv in &[colors[0], colors[1]] {
            cases.push(MapCase {
                pattern: vec![(v, cv)],
                produce: vec![(u, cv)],
            });
        }
        Ok(Step::Reduced(
            inst,
            SolutionMap::with_cases(vec![v, w], cases),
        ))
    }

    /// Eliminates a two-color variable by resolution.
    ///
    /// With colors {a, b}: any pair constrained against (v,a) and any pair
    /// constrained against (v,b) cannot both hold (v would have no color),
    /// so a direct constraint is added between them and `v` is removed. A
    /// pair constrained against both of v's colors loses that color
    /// outright. The back-map picks for `v` whichever color is compatible
    /// with the child solution.
    pub fn eliminate_two_color(&self, v: VarId) -> Result<Step, CspError> {
        let dom = self
            .domain(v)
            .ok_or_else(|| CspError::Contract(format!("unknown variable {v}")))?;
        if dom.len() != 2 {
            return Err(CspError::RuleNotApplicable(
                "variable does not have exactly two colors".into(),
            ));
        }
        let colors: Vec<Color> = dom.iter().copied().collect();
        let (a, b) = (colors[0], colors[1]);
        let on_a: Vec<Pair> = self
            .constraints_touching((v, a))
            .iter()
            .map(|c| c.other((v, a)))
            .collect();
        let on_b: Vec<Pair> = self
            .constraints_touching((v, b))
            .iter()
            .map(|c| c.other((v, b)))
            .collect();

        let mut inst = self.clone();
        inst.drop_var(v);
        let mut forced_deletions = BTreeSet::new();
        for &pa in &on_a {
            for &pb in &on_b {
                if pa == pb {
                    // Both of v's colors conflict with this pair: it can
                    // never be chosen.
                    forced_deletions.insert(pa);
                } else if pa.0 != pb.0 {
                    inst.constraints.insert(Constraint::new(pa, pb));
                }
                // Same variable, different colors: the combination is
                // already impossible, no constraint needed.
            }
        }
        for (w, c) in forced_deletions {
            if inst.domain(w).is_some_and(|d| d.contains(&c)) && !inst.remove_color(w, c) {
                return Ok(Step::Unsat);
            }
        }

        let mut cases: Vec<MapCase> = on_a
            .iter()
            .map(|&p| MapCase {
                pattern: vec![p],
                produce: vec![(v, b)],
            })
            .collect();
        cases.push(MapCase {
            pattern: Vec::new(),
            produce: vec![(v, a)],
        });
        Ok(Step::Reduced(inst, SolutionMap::with_cases(vec![v], cases)))
    }

    /// Structural self-check: every constraint must reference two distinct
    /// live variables on currently-allowed colors. Returns the first
    /// violation found.
    pub fn integrity_error(&self) -> Option<String> {
        for c in &self.constraints {
            let (a, b) = c.ends();
            if a.0 == b.0 {
                return Some(format!("constraint within variable {}", a.0));
            }
            for (v, col) in [a, b] {
                match self.vars.get(&v) {
                    None => return Some(format!("constraint references removed variable {v}")),
                    Some(dom) if !dom.contains(&col) => {
                        return Some(format!("constraint references removed color {col} of {v}"))
                    }
                    _ => {}
                }
            }
        }
        if let Some(v) = self.vars.keys().find(|v| v.0 >= self.next_var) {
            return Some(format!("variable {v} above the id watermark"));
        }
        None
    }

    /// Intersects every variable's domain with `keep` (variables missing
    /// from the map keep their full domain). Constraints touching removed
    /// colors are dropped. Variable identities are preserved, so solutions
    /// of the restriction are solutions of the original.
    pub fn restrict_domains(&self, keep: &BTreeMap<VarId, BTreeSet<Color>>) -> CspInstance {
        let mut inst = self.clone();
        for (v, allowed) in keep {
            if let Some(dom) = inst.vars.get_mut(v) {
                dom.retain(|c| allowed.contains(c));
            }
        }
        inst.constraints.retain(|c| {
            let (a, b) = c.ends();
            inst.vars.get(&a.0).is_some_and(|d| d.contains(&a.1))
                && inst.vars.get(&b.0).is_some_and(|d| d.contains(&b.1))
        });
        inst
    }

    /// Exhaustive product-space search in ascending variable and color
    /// order; deterministic. Only sensible for small instances.
    pub fn brute_force_solve(&self) -> Option<Assignment> {
        let mut found = None;
        self.brute_force_scan(&mut |a| {
            found = Some(a.clone());
            true
        });
        found
    }

    /// Number of solutions, by the same exhaustive scan.
    pub fn brute_force_count(&self) -> u64 {
        let mut n = 0;
        self.brute_force_scan(&mut |_| {
            n += 1;
            false
        });
        n
    }

    fn brute_force_scan(&self, visit: &mut dyn FnMut(&Assignment) -> bool) {
        let order: Vec<VarId> = self.vars.keys().copied().collect();
        let mut partial = Assignment::new();
        self.brute_rec(&order, 0, &mut partial, visit);
    }

    fn brute_rec(
        &self,
        order: &[VarId],
        depth: usize,
        partial: &mut Assignment,
        visit: &mut dyn FnMut(&Assignment) -> bool,
    ) -> bool {
        if depth == order.len() {
            return visit(partial);
        }
        let v = order[depth];
        let colors: Vec<Color> = self.vars[&v].iter().copied().collect();
        'colors: for c in colors {
            for x in self.constraints_touching((v, c)) {
                let (w, cw) = x.other((v, c));
                if partial.get(w) == Some(cw) {
                    continue 'colors;
                }
            }
            partial.set(v, c);
            if self.brute_rec(order, depth + 1, partial, visit) {
                return true;
            }
            partial.remove(v);
        }
        false
    }
}

/// Translates list coloring into a CSP: one variable per graph vertex with
/// its list as domain, and for every edge and every color present in both
/// endpoint lists a constraint forbidding that shared color.
///
/// Plain 3-coloring is the special case where every list is {1, 2, 3}.
/// Lists longer than three colors are rejected.
pub fn from_graph_coloring(
    g: &Graph,
    lists: &[Vec<Color>],
    measure: SizeMeasure,
) -> Result<CspInstance, CspError> {
    if lists.len() != g.vertex_count() {
        return Err(CspError::Contract(format!(
            "expected {} color lists, got {}",
            g.vertex_count(),
            lists.len()
        )));
    }
    if let Some(i) = lists.iter().position(|l| l.len() > 3) {
        return Err(CspError::Contract(format!(
            "vertex {i} has a list of more than three colors"
        )));
    }
    let mut constraints = Vec::new();
    for (u, v) in g.edges() {
        for &c in &lists[u] {
            if lists[v].contains(&c) {
                constraints.push(((u, c), (v, c)));
            }
        }
    }
    CspInstance::build(lists, &constraints, measure)
}
