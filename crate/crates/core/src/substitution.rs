//! The 3-substitution method.
//!
//! Starting from a vertex `x0` and a 3-kernel `K` of `D - x0`, the method
//! removes from `K` the members that are too close to the vertices being
//! added (`N_{3k+1}` at distance one, `N_{3k+2}` at distance two) and adds,
//! round by round, a 3-kernel `N_{3k+3}` of the vertices `M_{3k+3}` that the
//! surviving part of `K` no longer 2-absorbs. The result
//!
//! ```text
//! N = (K \ U_k (N_{3k+1} u N_{3k+2})) u U_k N_{3k}
//! ```
//!
//! is the pre-3-kernel. It is always 2-absorbent; whether it is
//! 3-independent depends on the digraph.
//!
//! Conventions fixed here:
//! - `M_{3k+3}` never contains vertices of `K`.
//! - A vertex at distance one from some member of `N_{3k}` and distance two
//!   from another is placed in `N_{3k+1}` only.
//! - The 2-cone of `x` is `{v : 0 < d(x,v) <= 2}`.
//! - `N_{3k+3}` is the lexicographically least 3-kernel of `D[M_{3k+3}]`.

use serde::{Deserialize, Serialize};

use crate::digraph::{Digraph, Distance, Vertex, VertexSet};
use crate::error::{Error, Result};
use crate::kernels::{find_kl_kernel, is_kl_kernel, KernelQuery};

/// One round `k` of a substitution sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Round {
    /// `M_{3k}`; `{x0}` in round zero.
    pub eligible: VertexSet,
    /// `N_{3k}`, added to the pre-3-kernel.
    pub added: VertexSet,
    /// `N_{3k+1}`, removed from `K`.
    pub removed_near: VertexSet,
    /// `N_{3k+2}`, removed from `K`.
    pub removed_far: VertexSet,
}

/// `N'_{3k+1}` and `N'_{3k+2}` for one round `k < p`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Intermediate {
    pub near: VertexSet,
    pub far: VertexSet,
}

/// A complete 3-substitution run. Rounds are indexed `0..=p`; round `p` is the
/// first whose removed sets are both empty.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubstitutionTrace {
    #[serde(skip)]
    digraph: Digraph,
    pub x0: Vertex,
    pub base_kernel: VertexSet,
    pub rounds: Vec<Round>,
    pub p: usize,
    pub intermediates: Vec<Intermediate>,
}

static EMPTY: VertexSet = VertexSet::new();

impl SubstitutionTrace {
    pub fn digraph(&self) -> &Digraph {
        &self.digraph
    }

    /// `N_i`; empty for indices past the end of the sequence.
    pub fn set(&self, index: usize) -> &VertexSet {
        let Some(round) = self.rounds.get(index / 3) else { return &EMPTY };
        match index % 3 {
            0 => &round.added,
            1 => &round.removed_near,
            _ => &round.removed_far,
        }
    }

    /// `N'_i` for `i mod 3` in `{1, 2}`; empty otherwise.
    pub fn intermediate(&self, index: usize) -> &VertexSet {
        let Some(inter) = self.intermediates.get(index / 3) else { return &EMPTY };
        match index % 3 {
            1 => &inter.near,
            2 => &inter.far,
            _ => &EMPTY,
        }
    }

    /// Index `i` with `v` in `N_i`, if any. The sets are disjoint.
    pub fn index_of(&self, v: Vertex) -> Option<usize> {
        (0..=3 * self.p + 2).find(|&i| self.set(i).contains(v))
    }

    /// `U_k (N_{3k+1} u N_{3k+2})`.
    pub fn removed(&self) -> VertexSet {
        self.rounds.iter().flat_map(|r| r.removed_near.iter().chain(r.removed_far.iter())).collect()
    }

    /// `U_k N_{3k}`.
    pub fn added(&self) -> VertexSet {
        self.rounds.iter().flat_map(|r| r.added.iter()).collect()
    }

    /// Members of `N_s` for every `s <= 3p`, with their index.
    pub fn indexed_members(&self) -> impl Iterator<Item = (usize, Vertex)> + '_ {
        (0..=3 * self.p).flat_map(move |s| self.set(s).iter().map(move |v| (s, v)))
    }

    /// Checks the structural invariants every trace must satisfy.
    pub fn check_invariants(&self) -> std::result::Result<(), String> {
        let mut seen = VertexSet::new();
        for i in 0..=3 * self.p + 2 {
            let s = self.set(i);
            if !s.is_disjoint(&seen) {
                return Err(format!("N_{i} = {s} meets an earlier set"));
            }
            seen = seen.union(s);
            if i % 3 != 0 && !s.is_subset(&self.base_kernel) {
                return Err(format!("N_{i} = {s} is not inside K"));
            }
            if i % 3 == 0 && i > 0 && !s.is_disjoint(&self.base_kernel) {
                return Err(format!("N_{i} = {s} meets K"));
            }
        }
        if self.rounds[0].added != VertexSet::singleton(self.x0) || self.rounds[0].eligible != self.rounds[0].added {
            return Err("N_0 = M_0 = {x0} fails".into());
        }
        if !assemble_pre_3_kernel(self).contains(self.x0) {
            return Err("x0 is missing from the pre-3-kernel".into());
        }
        if !self.set(3 * self.p + 1).is_empty() || !self.set(3 * self.p + 2).is_empty() {
            return Err("round p still removes vertices".into());
        }
        if let Some(k) = (0..self.p).find(|&k| self.set(3 * k + 1).is_empty() && self.set(3 * k + 2).is_empty()) {
            return Err(format!("round {k} < p removes nothing"));
        }
        Ok(())
    }
}

fn lex_least_three_kernel(d: &Digraph, within: &VertexSet) -> Result<Option<VertexSet>> {
    let sub = d.induced(within)?;
    Ok(find_kl_kernel(&sub.digraph, KernelQuery::THREE_KERNEL)?.witness.map(|w| sub.lift(&w)))
}

/// Lexicographically least 3-kernel of `D - x0`, in `D`'s labels.
pub fn base_kernel(d: &Digraph, x0: Vertex) -> Result<Option<VertexSet>> {
    d.check_vertex(x0)?;
    let others: VertexSet = d.vertices().filter(|&v| v != x0).collect();
    lex_least_three_kernel(d, &others)
}

/// `N^{l-}(S)`, treating an empty `S` as having no in-neighbourhood.
fn in_ring(d: &Digraph, s: &VertexSet, l: usize) -> Result<VertexSet> {
    if s.is_empty() {
        Ok(VertexSet::new())
    } else {
        d.in_neighborhood_at_distance(s, l)
    }
}

/// Builds the 3-substitution sequence from `x0` and a 3-kernel `k` of `D - x0`.
pub fn build_substitution_sequence(d: &Digraph, x0: Vertex, k: &VertexSet) -> Result<SubstitutionTrace> {
    d.check_vertex(x0)?;
    d.check_set(k)?;
    let rest = d.without_vertex(x0)?;
    match rest.project(k) {
        Some(local) if is_kl_kernel(&rest.digraph, &local, KernelQuery::THREE_KERNEL) => {}
        _ => return Err(Error::NotAKernel),
    }

    let dm = d.distances();
    let start = VertexSet::singleton(x0);
    let mut rounds = vec![Round {
        eligible: start.clone(),
        added: start,
        removed_near: VertexSet::new(),
        removed_far: VertexSet::new(),
    }];
    let mut removed = VertexSet::new();
    let mut added = VertexSet::new();
    let mut assigned = VertexSet::new();

    loop {
        let kk = rounds.len() - 1;
        let current = rounds[kk].added.clone();
        let near = in_ring(d, &current, 1)?.intersection(k).difference(&removed);
        let far = in_ring(d, &current, 2)?.intersection(k).difference(&removed).difference(&near);
        let round = rounds.last_mut().unwrap();
        round.removed_near = near;
        round.removed_far = far;
        if round.removed_near.is_empty() && round.removed_far.is_empty() {
            break;
        }
        removed = removed.union(&round.removed_near).union(&round.removed_far);
        added = added.union(&round.added);
        assigned = assigned.union(&round.eligible);

        let eligible: VertexSet = d
            .vertices()
            .filter(|&x| !assigned.contains(x) && !k.contains(x))
            .filter(|&x| {
                d.vertices()
                    .filter(|&v| dm.get(x, v).is_positive_within(2))
                    .all(|v| (!k.contains(v) || removed.contains(v)) && !added.contains(v))
            })
            .collect();
        let next = lex_least_three_kernel(d, &eligible)?.ok_or(Error::SubkernelMissing { index: 3 * kk + 3 })?;
        rounds.push(Round { eligible, added: next, removed_near: VertexSet::new(), removed_far: VertexSet::new() });
    }

    let p = rounds.len() - 1;
    let mut trace =
        SubstitutionTrace { digraph: d.clone(), x0, base_kernel: k.clone(), rounds, p, intermediates: Vec::new() };
    trace.intermediates = intermediate_sets(&trace)?;
    Ok(trace)
}

/// `N'_{3k+1} = N^-(N_{3k}) \ N_{3k+1}` and `N'_{3k+2} = N^{2-}(N_{3k}) \ N_{3k+2}`
/// for every `k < p`.
pub fn intermediate_sets(trace: &SubstitutionTrace) -> Result<Vec<Intermediate>> {
    let d = trace.digraph();
    (0..trace.p)
        .map(|k| {
            let base = trace.set(3 * k);
            Ok(Intermediate {
                near: in_ring(d, base, 1)?.difference(trace.set(3 * k + 1)),
                far: in_ring(d, base, 2)?.difference(trace.set(3 * k + 2)),
            })
        })
        .collect()
}

pub fn assemble_pre_3_kernel(trace: &SubstitutionTrace) -> VertexSet {
    trace.base_kernel.difference(&trace.removed()).union(&trace.added())
}

/// Which set a road vertex belongs to, relative to its position `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "index")]
pub enum Label {
    /// `t_j` is in `N_j`.
    Sequence(usize),
    /// `t_j` is in `N'_j`.
    Intermediate(usize),
    /// Neither.
    Outside,
}

impl std::fmt::Display for Label {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Label::Sequence(i) => write!(f, "N_{i}"),
            Label::Intermediate(i) => write!(f, "N'_{i}"),
            Label::Outside => f.write_str("-"),
        }
    }
}

/// A `(v, x0)`-path `(t_s, ..., t_0)` with a label per position.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Road {
    pub path: Vec<Vertex>,
    pub labels: Vec<Label>,
}

impl Road {
    /// Labels an arbitrary path without validating it.
    pub fn labelled(trace: &SubstitutionTrace, path: Vec<Vertex>) -> Road {
        let s = path.len().saturating_sub(1);
        let labels = path
            .iter()
            .enumerate()
            .map(|(i, &v)| {
                let j = s - i;
                if trace.set(j).contains(v) {
                    Label::Sequence(j)
                } else if trace.intermediate(j).contains(v) {
                    Label::Intermediate(j)
                } else {
                    Label::Outside
                }
            })
            .collect();
        Road { path, labels }
    }

    /// `s`, the number of arcs.
    pub fn length(&self) -> usize {
        self.path.len().saturating_sub(1)
    }

    /// `t_j`.
    pub fn at(&self, j: usize) -> Vertex {
        self.path[self.length() - j]
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub holds: bool,
    pub failures: Vec<String>,
}

impl ConditionCheck {
    fn from_failures(failures: Vec<String>) -> Self {
        ConditionCheck { holds: failures.is_empty(), failures }
    }
}

/// Per-condition evaluation of a candidate road.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoadReport {
    /// A simple directed path ending at `x0`.
    pub well_formed: ConditionCheck,
    /// `t_s` in `N_s` with `s <= 3p`.
    pub start: ConditionCheck,
    /// `t_{3i+1} in N_{3i+1}` iff `t_{3i+2} in N'_{3i+2}`, for `3i + 2 <= s`.
    pub pairing: ConditionCheck,
    /// `t_{3i} in N_{3i}` for `3i <= s`.
    pub anchors: ConditionCheck,
    /// Every arc `(t_i, t_{i-2})` has `t_i in N'_{3j+1}` and
    /// `t_{i-2} in N'_{3(j-1)+2}` for some `j >= 1` with `3j < s`.
    pub skip_arcs: ConditionCheck,
}

impl RoadReport {
    pub fn holds(&self) -> bool {
        [&self.well_formed, &self.start, &self.pairing, &self.anchors, &self.skip_arcs].iter().all(|c| c.holds)
    }
}

fn skip_arc_allowed(trace: &SubstitutionTrace, s: usize, tail: Vertex, head: Vertex) -> bool {
    (1..)
        .take_while(|j| 3 * j < s)
        .any(|j| trace.intermediate(3 * j + 1).contains(tail) && trace.intermediate(3 * (j - 1) + 2).contains(head))
}

fn pairing_holds(trace: &SubstitutionTrace, near: Vertex, far: Vertex, i: usize) -> bool {
    trace.set(3 * i + 1).contains(near) == trace.intermediate(3 * i + 2).contains(far)
}

/// Evaluates each road condition independently. `path` is `(t_s, ..., t_0)`.
pub fn validate_road(trace: &SubstitutionTrace, path: &[Vertex]) -> RoadReport {
    let d = trace.digraph();
    let mut shape = Vec::new();
    if path.is_empty() {
        shape.push("empty path".to_string());
    } else {
        if path.last() != Some(&trace.x0) {
            shape.push(format!("path ends at {} instead of x0 = {}", path.last().unwrap(), trace.x0));
        }
        for w in path.windows(2) {
            if !d.has_arc(w[0], w[1]) {
                shape.push(format!("({}, {}) is not an arc", w[0], w[1]));
            }
        }
        let distinct: VertexSet = path.iter().copied().collect();
        if distinct.len() != path.len() {
            shape.push("path repeats a vertex".into());
        }
    }
    if !shape.is_empty() {
        let skipped = || ConditionCheck::from_failures(vec!["not evaluated".into()]);
        return RoadReport {
            well_formed: ConditionCheck::from_failures(shape),
            start: skipped(),
            pairing: skipped(),
            anchors: skipped(),
            skip_arcs: skipped(),
        };
    }

    let s = path.len() - 1;
    let t = |j: usize| path[s - j];

    let mut start = Vec::new();
    if s > 3 * trace.p {
        start.push(format!("s = {s} exceeds 3p = {}", 3 * trace.p));
    }
    if !trace.set(s).contains(t(s)) {
        start.push(format!("t_{s} = {} is not in N_{s} = {}", t(s), trace.set(s)));
    }

    let pairing = (0..)
        .take_while(|i| 3 * i + 2 <= s)
        .filter(|&i| !pairing_holds(trace, t(3 * i + 1), t(3 * i + 2), i))
        .map(|i| {
            format!(
                "t_{} = {} in N_{}: {} but t_{} = {} in N'_{}: {}",
                3 * i + 1,
                t(3 * i + 1),
                3 * i + 1,
                trace.set(3 * i + 1).contains(t(3 * i + 1)),
                3 * i + 2,
                t(3 * i + 2),
                3 * i + 2,
                trace.intermediate(3 * i + 2).contains(t(3 * i + 2)),
            )
        })
        .collect();

    let anchors = (0..)
        .take_while(|i| 3 * i <= s)
        .filter(|&i| !trace.set(3 * i).contains(t(3 * i)))
        .map(|i| format!("t_{} = {} is not in N_{}", 3 * i, t(3 * i), 3 * i))
        .collect();

    let skip_arcs = (2..=s)
        .filter(|&i| d.has_arc(t(i), t(i - 2)) && !skip_arc_allowed(trace, s, t(i), t(i - 2)))
        .map(|i| format!("arc (t_{i}, t_{}) = ({}, {}) has the wrong labels", i - 2, t(i), t(i - 2)))
        .collect();

    RoadReport {
        well_formed: ConditionCheck::from_failures(Vec::new()),
        start: ConditionCheck::from_failures(start),
        pairing: ConditionCheck::from_failures(pairing),
        anchors: ConditionCheck::from_failures(anchors),
        skip_arcs: ConditionCheck::from_failures(skip_arcs),
    }
}

/// Finds a road of length `s` from `v` in `N_s` by label-constrained
/// backtracking; candidates are tried in ascending order.
pub fn find_road(trace: &SubstitutionTrace, v: Vertex, s: usize) -> Result<Road> {
    let d = trace.digraph();
    d.check_vertex(v)?;
    let none = Error::NoRoadFound { vertex: v, length: s };
    if s > 3 * trace.p || !trace.set(s).contains(v) {
        return Err(none);
    }
    let mut search = RoadSearch { trace, s, path: vec![v], on_path: vec![false; d.vertex_count()] };
    search.on_path[v] = true;
    if search.extend() {
        let road = Road::labelled(trace, search.path);
        debug_assert!(validate_road(trace, &road.path).holds());
        Ok(road)
    } else {
        Err(none)
    }
}

/// Every road of length `s` starting at `v`, in lexicographic order of paths.
pub fn find_all_roads(trace: &SubstitutionTrace, v: Vertex, s: usize) -> Result<Vec<Road>> {
    let d = trace.digraph();
    d.check_vertex(v)?;
    if s > 3 * trace.p || !trace.set(s).contains(v) {
        return Ok(Vec::new());
    }
    let mut search = RoadSearch { trace, s, path: vec![v], on_path: vec![false; d.vertex_count()] };
    search.on_path[v] = true;
    let mut found = Vec::new();
    search.extend_all(&mut found);
    Ok(found.into_iter().map(|path| Road::labelled(trace, path)).collect())
}

struct RoadSearch<'a> {
    trace: &'a SubstitutionTrace,
    s: usize,
    path: Vec<Vertex>,
    on_path: Vec<bool>,
}

impl RoadSearch<'_> {
    /// Position of the vertex most recently pushed.
    fn position(&self) -> usize {
        self.s + 1 - self.path.len()
    }

    fn at(&self, j: usize) -> Vertex {
        self.path[self.s - j]
    }

    /// Conditions that became decidable once `t_j` was placed.
    fn admissible(&self, j: usize) -> bool {
        let trace = self.trace;
        let tj = self.at(j);
        if j % 3 == 0 && !trace.set(j).contains(tj) {
            return false;
        }
        if j % 3 == 1 && j < self.s && !pairing_holds(trace, tj, self.at(j + 1), j / 3) {
            return false;
        }
        if j + 2 <= self.s {
            let tail = self.at(j + 2);
            if trace.digraph().has_arc(tail, tj) && !skip_arc_allowed(trace, self.s, tail, tj) {
                return false;
            }
        }
        true
    }

    /// Next-vertex candidates at the current position that can still reach x0 in time.
    fn candidates(&self) -> Vec<Vertex> {
        let j = self.position();
        let d = self.trace.digraph();
        let x0 = self.trace.x0;
        let last = *self.path.last().unwrap();
        d.out_neighbors(last)
            .iter()
            .copied()
            .filter(|&w| !self.on_path[w] && d.distances().get(w, x0).is_within(j - 1))
            .collect()
    }

    fn push(&mut self, w: Vertex) {
        self.path.push(w);
        self.on_path[w] = true;
    }

    fn pop(&mut self) {
        let w = self.path.pop().unwrap();
        self.on_path[w] = false;
    }

    fn extend(&mut self) -> bool {
        let j = self.position();
        if j == 0 {
            return true;
        }
        for w in self.candidates() {
            self.push(w);
            if self.admissible(j - 1) && self.extend() {
                return true;
            }
            self.pop();
        }
        false
    }

    fn extend_all(&mut self, found: &mut Vec<Vec<Vertex>>) {
        let j = self.position();
        if j == 0 {
            found.push(self.path.clone());
            return;
        }
        for w in self.candidates() {
            self.push(w);
            if self.admissible(j - 1) {
                self.extend_all(found);
            }
            self.pop();
        }
    }
}

/// A short path between two members of the pre-3-kernel, with the indices
/// of the sets its ends were added in.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InternalPath {
    pub path: Vec<Vertex>,
    pub from_index: Option<usize>,
    pub to_index: Option<usize>,
    /// `from` in `N_{3k'}` and `to` in `N_{3k}` with `k' <= k`.
    pub allowed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreKernelReport {
    pub pre_kernel: VertexSet,
    pub absorbent: bool,
    pub unabsorbed: Vec<Vertex>,
    pub internal_paths: Vec<InternalPath>,
}

impl PreKernelReport {
    pub fn holds(&self) -> bool {
        self.absorbent && self.internal_paths.iter().all(|p| p.allowed)
    }

    pub fn violations(&self) -> impl Iterator<Item = &InternalPath> {
        self.internal_paths.iter().filter(|p| !p.allowed)
    }
}

/// A shortest `(a,b)`-path, lexicographically least among shortest ones.
fn shortest_path(d: &Digraph, a: Vertex, b: Vertex) -> Option<Vec<Vertex>> {
    let dm = d.distances();
    let mut len = dm.get(a, b).finite()?;
    let mut path = vec![a];
    let mut cur = a;
    while len > 0 {
        cur = *d.out_neighbors(cur).iter().find(|&&w| dm.get(w, b) == Distance::Finite(len - 1))?;
        path.push(cur);
        len -= 1;
    }
    Some(path)
}

/// The pre-3-kernel is 2-absorbent, and any path of length at most two
/// between two of its members runs from some `N_{3k'}` to some `N_{3k}` with
/// `k' <= k`.
pub fn check_pre_kernel_properties(trace: &SubstitutionTrace) -> PreKernelReport {
    let d = trace.digraph();
    let dm = d.distances();
    let pre_kernel = assemble_pre_3_kernel(trace);
    let unabsorbed: Vec<Vertex> = d
        .vertices()
        .filter(|&u| !pre_kernel.contains(u) && !pre_kernel.iter().any(|v| dm.get(u, v).is_within(2)))
        .collect();
    let mut internal_paths = Vec::new();
    for a in pre_kernel.iter() {
        for b in pre_kernel.iter() {
            if a == b || !dm.get(a, b).is_within(2) {
                continue;
            }
            let from_index = trace.index_of(a);
            let to_index = trace.index_of(b);
            let allowed = match (from_index, to_index) {
                (Some(i), Some(j)) => i % 3 == 0 && j % 3 == 0 && i <= j,
                _ => false,
            };
            internal_paths.push(InternalPath {
                path: shortest_path(d, a, b).expect("reachable"),
                from_index,
                to_index,
                allowed,
            });
        }
    }
    PreKernelReport { absorbent: unabsorbed.is_empty(), unabsorbed, pre_kernel, internal_paths }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct UniqueChordReport {
    /// Positions `i` with `(t_i, t_{i-2})` an arc.
    pub skip_positions: Vec<usize>,
    /// Least skip position with `2 < i < s`, which triggers the checks.
    pub trigger: Option<usize>,
    pub unique: bool,
    /// Positions `q = 3k'+2 > trigger` whose vertex is not in `N_q`.
    pub label_failures: Vec<usize>,
}

impl UniqueChordReport {
    pub fn holds(&self) -> bool {
        self.unique && self.label_failures.is_empty()
    }
}

/// If a road has a skip arc `(t_i, t_{i-2})` with `2 < i < s`, it has no
/// other skip arc, and every `t_q` with `q = 3k'+2 > i` lies in `N_q`.
pub fn check_unique_short_chord(trace: &SubstitutionTrace, road: &Road) -> UniqueChordReport {
    let d = trace.digraph();
    let s = road.length();
    let skip_positions: Vec<usize> = (2..=s).filter(|&i| d.has_arc(road.at(i), road.at(i - 2))).collect();
    let trigger = skip_positions.iter().copied().find(|&i| 2 < i && i < s);
    let (unique, label_failures) = match trigger {
        None => (true, Vec::new()),
        Some(i) => (
            skip_positions.len() == 1,
            ((i + 1)..=s).filter(|q| q % 3 == 2 && !trace.set(*q).contains(road.at(*q))).collect(),
        ),
    };
    UniqueChordReport { skip_positions, trigger, unique, label_failures }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResidueCheck {
    pub position: usize,
    pub vertex: Vertex,
    pub distance: Option<usize>,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdditiveInverseReport {
    pub checks: Vec<ResidueCheck>,
}

impl AdditiveInverseReport {
    pub fn holds(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

/// `d(x0, t_j) = -j (mod 3)` for every position `j != 1` of the road.
pub fn check_additive_inverse_property(trace: &SubstitutionTrace, road: &Road) -> AdditiveInverseReport {
    let dm = trace.digraph().distances();
    let checks = (0..=road.length())
        .filter(|&j| j != 1)
        .map(|j| {
            let vertex = road.at(j);
            let distance = dm.get(trace.x0, vertex).finite();
            ResidueCheck { position: j, vertex, distance, holds: distance.is_some_and(|dist| (dist + j) % 3 == 0) }
        })
        .collect();
    AdditiveInverseReport { checks }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MethodOutcome {
    pub pre_3_kernel: VertexSet,
    pub is_3_kernel: bool,
    pub absorbent: bool,
    pub trace: SubstitutionTrace,
    /// A path of length at most two between two pre-kernel members.
    pub failure_witness: Option<Vec<Vertex>>,
}

/// Runs the method from `x0` with the lexicographically least 3-kernel of
/// `D - x0`.
pub fn run_substitution_method(d: &Digraph, x0: Vertex) -> Result<MethodOutcome> {
    let k = base_kernel(d, x0)?.ok_or(Error::NoBaseKernel { x0 })?;
    let trace = build_substitution_sequence(d, x0, &k)?;
    let pre = assemble_pre_3_kernel(&trace);
    let dm = d.distances();
    let failure_witness = pre
        .iter()
        .flat_map(|a| pre.iter().map(move |b| (a, b)))
        .find(|&(a, b)| a != b && dm.get(a, b).is_within(2))
        .and_then(|(a, b)| shortest_path(d, a, b));
    let absorbent = crate::kernels::is_l_absorbent(d, &pre, 2);
    let is_3_kernel = is_kl_kernel(d, &pre, KernelQuery::THREE_KERNEL);
    debug_assert_eq!(is_3_kernel, absorbent && failure_witness.is_none());
    Ok(MethodOutcome { pre_3_kernel: pre, is_3_kernel, absorbent, trace, failure_witness })
}
