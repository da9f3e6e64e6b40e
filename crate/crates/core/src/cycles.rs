//! Cycle and circuit enumeration, chords, and the short-chord conditions
//! that define the hypothesis classes.
//!
//! A *cycle* is a directed cycle with distinct vertices. A *circuit* is a
//! closed trail: arcs are pairwise distinct but vertices may repeat. Both are
//! stored as vertex sequences `(c_0, ..., c_{n-1})` with the closing arc
//! `(c_{n-1}, c_0)` implied, rotated to their lexicographically least form.
//! Chords are indexed by position, so a repeated vertex of a circuit
//! contributes once per occurrence.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::digraph::{Digraph, Vertex};
use crate::error::{Error, Result};

/// Default cap on circuit search steps.
pub const DEFAULT_BUDGET: usize = 1_000_000;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cycle(Vec<Vertex>);

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Circuit(Vec<Vertex>);

macro_rules! closed_walk_accessors {
    ($t:ty) => {
        impl $t {
            pub fn vertices(&self) -> &[Vertex] {
                &self.0
            }

            pub fn len(&self) -> usize {
                self.0.len()
            }

            pub fn is_empty(&self) -> bool {
                self.0.is_empty()
            }

            /// Arcs `(c_i, c_{i+1 mod n})` in position order.
            pub fn arcs(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
                closed_arcs(&self.0)
            }
        }

        impl AsRef<[Vertex]> for $t {
            fn as_ref(&self) -> &[Vertex] {
                &self.0
            }
        }
    };
}

closed_walk_accessors!(Cycle);
closed_walk_accessors!(Circuit);

impl Cycle {
    /// Validates a vertex sequence as a cycle of `d` and canonicalizes it.
    pub fn new(d: &Digraph, vertices: Vec<Vertex>) -> Result<Self> {
        let distinct: HashSet<_> = vertices.iter().collect();
        if vertices.len() < 2 || distinct.len() != vertices.len() {
            return Err(Error::InvalidParameter(format!("{vertices:?} is not a cycle")));
        }
        check_closed_walk(d, &vertices)?;
        Ok(Cycle(canonical_rotation(&vertices)))
    }
}

impl Circuit {
    /// Validates a vertex sequence as a closed trail of `d` and canonicalizes it.
    pub fn new(d: &Digraph, vertices: Vec<Vertex>) -> Result<Self> {
        let arcs: HashSet<_> = closed_arcs(&vertices).collect();
        if vertices.len() < 2 || arcs.len() != vertices.len() {
            return Err(Error::InvalidParameter(format!("{vertices:?} is not a circuit")));
        }
        check_closed_walk(d, &vertices)?;
        Ok(Circuit(canonical_rotation(&vertices)))
    }
}

impl From<Cycle> for Circuit {
    fn from(c: Cycle) -> Self {
        Circuit(c.0)
    }
}

fn check_closed_walk(d: &Digraph, vertices: &[Vertex]) -> Result<()> {
    for &v in vertices {
        d.check_vertex(v)?;
    }
    match closed_arcs(vertices).find(|&(u, v)| !d.has_arc(u, v)) {
        Some((u, v)) => Err(Error::InvalidParameter(format!("({u}, {v}) is not an arc"))),
        None => Ok(()),
    }
}

fn closed_arcs(vertices: &[Vertex]) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
    let n = vertices.len();
    (0..n).map(move |i| (vertices[i], vertices[(i + 1) % n]))
}

/// Lexicographically least rotation.
pub fn canonical_rotation(vertices: &[Vertex]) -> Vec<Vertex> {
    let n = vertices.len();
    (0..n).map(|r| vertices[r..].iter().chain(&vertices[..r]).copied().collect::<Vec<_>>()).min().unwrap_or_default()
}

/// Every directed cycle with `min_len <= length <= max_len`, sorted by length
/// then lexicographically.
pub fn enumerate_cycles(d: &Digraph, min_len: usize, max_len: usize) -> Vec<Cycle> {
    let mut found = Vec::new();
    let n = d.vertex_count();
    let max_len = max_len.min(n);
    if min_len > max_len {
        return found;
    }
    let mut on_path = vec![false; n];
    let mut path = Vec::with_capacity(max_len);
    // Each cycle is discovered once, from its least vertex, through
    // strictly larger vertices.
    for start in 0..n {
        path.push(start);
        on_path[start] = true;
        extend_cycle(d, start, min_len, max_len, &mut path, &mut on_path, &mut found);
        on_path[start] = false;
        path.pop();
    }
    found.sort_by(|a: &Cycle, b| a.len().cmp(&b.len()).then_with(|| a.0.cmp(&b.0)));
    found
}

fn extend_cycle(
    d: &Digraph,
    start: Vertex,
    min_len: usize,
    max_len: usize,
    path: &mut Vec<Vertex>,
    on_path: &mut [bool],
    found: &mut Vec<Cycle>,
) {
    let last = *path.last().unwrap();
    for &w in d.out_neighbors(last) {
        if w == start {
            if path.len() >= min_len {
                found.push(Cycle(path.clone()));
            }
        } else if w > start && !on_path[w] && path.len() < max_len {
            path.push(w);
            on_path[w] = true;
            extend_cycle(d, start, min_len, max_len, path, on_path, found);
            on_path[w] = false;
            path.pop();
        }
    }
}

/// Every closed trail with `min_len <= length <= max_len`, once per
/// canonical rotation, sorted by length then lexicographically.
///
/// `budget` caps the number of search steps (partial trails extended); the
/// search fails with [`Error::BudgetExceeded`] rather than truncating.
pub fn enumerate_circuits(d: &Digraph, min_len: usize, max_len: usize, budget: usize) -> Result<Vec<Circuit>> {
    let mut found = Vec::new();
    let mut search = TrailSearch::new(d, budget);
    search.run(min_len, max_len, |trail| {
        found.push(Circuit(trail.to_vec()));
        true
    })?;
    found.sort_by(|a: &Circuit, b| a.len().cmp(&b.len()).then_with(|| a.0.cmp(&b.0)));
    Ok(found)
}

struct TrailSearch<'a> {
    d: &'a Digraph,
    budget: usize,
    steps: usize,
    used: HashSet<(Vertex, Vertex)>,
    trail: Vec<Vertex>,
}

impl<'a> TrailSearch<'a> {
    fn new(d: &'a Digraph, budget: usize) -> Self {
        TrailSearch { d, budget, steps: 0, used: HashSet::new(), trail: Vec::new() }
    }

    /// Calls `visit` on each canonical closed trail; `visit` returns `false`
    /// to stop early. Returns whether the search ran to completion.
    fn run(&mut self, min_len: usize, max_len: usize, mut visit: impl FnMut(&[Vertex]) -> bool) -> Result<bool> {
        let max_len = max_len.min(self.d.arc_count());
        for start in self.d.vertices() {
            self.trail.push(start);
            let done = self.extend(start, min_len, max_len, &mut visit)?;
            self.trail.pop();
            if !done {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn extend(
        &mut self,
        start: Vertex,
        min_len: usize,
        max_len: usize,
        visit: &mut impl FnMut(&[Vertex]) -> bool,
    ) -> Result<bool> {
        self.steps += 1;
        if self.steps > self.budget {
            return Err(Error::BudgetExceeded { limit: self.budget });
        }
        let last = *self.trail.last().unwrap();
        for &w in self.d.out_neighbors(last) {
            // The least vertex of the trail is its first entry.
            if w < start || self.used.contains(&(last, w)) {
                continue;
            }
            if w == start
                && self.trail.len() >= min_len
                && self.trail.len() <= max_len
                && canonical_rotation(&self.trail) == self.trail
                && !visit(&self.trail)
            {
                return Ok(false);
            }
            if self.trail.len() < max_len {
                self.used.insert((last, w));
                self.trail.push(w);
                let done = self.extend(start, min_len, max_len, visit)?;
                self.trail.pop();
                self.used.remove(&(last, w));
                if !done {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// An arc `(c_i, c_j)` of the host digraph that is not an arc of the closed
/// walk. `length` is `(j - i) mod n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Chord {
    pub tail_pos: usize,
    pub head_pos: usize,
    pub length: usize,
}

impl Chord {
    pub fn is_short(&self) -> bool {
        self.length == 2
    }
}

/// All chords of a cycle or circuit, ordered by `(tail_pos, head_pos)`.
pub fn chords_of(d: &Digraph, walk: &[Vertex]) -> Vec<Chord> {
    let n = walk.len();
    let own: HashSet<_> = closed_arcs(walk).collect();
    let mut chords = Vec::new();
    for i in 0..n {
        for j in 0..n {
            let (u, v) = (walk[i], walk[j]);
            if i != j && d.has_arc(u, v) && !own.contains(&(u, v)) {
                chords.push(Chord { tail_pos: i, head_pos: j, length: (j + n - i) % n });
            }
        }
    }
    chords
}

/// Chords of length two, i.e. from position `i` to position `i + 2`.
pub fn short_chords_of(d: &Digraph, walk: &[Vertex]) -> Vec<Chord> {
    let n = walk.len();
    if n < 3 {
        return Vec::new();
    }
    let mut distinct = walk.to_vec();
    distinct.sort_unstable();
    distinct.dedup();
    // A simple cycle of length >= 3 never uses an arc (c_i, c_{i+2}).
    let own: Option<HashSet<_>> = (distinct.len() < n).then(|| closed_arcs(walk).collect());
    (0..n)
        .filter(|&i| {
            let (u, v) = (walk[i], walk[(i + 2) % n]);
            u != v && d.has_arc(u, v) && own.as_ref().map_or(true, |own| !own.contains(&(u, v)))
        })
        .map(|i| Chord { tail_pos: i, head_pos: (i + 2) % n, length: 2 })
        .collect()
}

/// `b` is consecutive to `a`: the head of `a` is the tail of `b`.
pub fn are_consecutive(a: &Chord, b: &Chord) -> bool {
    a.head_pos == b.tail_pos
}

/// `a = (j, j+k)` crosses `b = (j', j'+k')` when some lift of the positions
/// satisfies `j < j' < j + k < j' + k'`. Positions are taken modulo `n`.
pub fn are_crossed(a: &Chord, b: &Chord, n: usize) -> bool {
    let offset = (b.tail_pos + n - a.tail_pos) % n;
    if offset == 0 {
        return false;
    }
    // The only lift of j' in (j, j + n).
    let lifted = a.tail_pos + offset;
    let a_end = a.tail_pos + a.length;
    lifted < a_end && a_end < lifted + b.length
}

/// Crossing in either argument order.
pub fn cross_each_other(a: &Chord, b: &Chord, n: usize) -> bool {
    are_crossed(a, b, n) || are_crossed(b, a, n)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CycleCondition {
    /// Cycles of length not divisible by three carry a short chord `a` and
    /// a short chord consecutive to it.
    TwoConsecutive,
    /// As `TwoConsecutive`, plus a third short chord crossing one of the two.
    ThreeWithCrossing,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub walk: Vec<Vertex>,
    pub reason: String,
    pub chords: Vec<Chord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HypothesisReport {
    pub satisfied: bool,
    pub violations: Vec<Violation>,
    pub examined: usize,
}

impl HypothesisReport {
    fn from_violations(violations: Vec<Violation>, examined: usize) -> Self {
        HypothesisReport { satisfied: violations.is_empty(), violations, examined }
    }
}

/// Checks the short-chord requirement on a single cycle.
pub fn cycle_condition_violation(d: &Digraph, cycle: &[Vertex], condition: CycleCondition) -> Option<Violation> {
    let n = cycle.len();
    let short = short_chords_of(d, cycle);
    if n % 3 == 0 {
        if short.is_empty() {
            return Some(Violation {
                walk: cycle.to_vec(),
                reason: format!("length {n} is divisible by 3 but the cycle has no short chord"),
                chords: short,
            });
        }
        return None;
    }
    let pairs = short.iter().flat_map(|a| short.iter().map(move |b| (a, b)));
    let ok = match condition {
        CycleCondition::TwoConsecutive => pairs.clone().any(|(a, b)| a != b && are_consecutive(a, b)),
        CycleCondition::ThreeWithCrossing => pairs.clone().any(|(a, b)| {
            a != b
                && are_consecutive(a, b)
                && short.iter().any(|c| c != a && c != b && (cross_each_other(c, a, n) || cross_each_other(c, b, n)))
        }),
    };
    if ok {
        return None;
    }
    let wanted = match condition {
        CycleCondition::TwoConsecutive => "two consecutive short chords",
        CycleCondition::ThreeWithCrossing => "two consecutive short chords and a third crossing one of them",
    };
    Some(Violation {
        walk: cycle.to_vec(),
        reason: format!("length {n} is not divisible by 3 and the cycle lacks {wanted}"),
        chords: short,
    })
}

/// The chord condition on every cycle of length at least `min_cycle_len`.
pub fn check_cycle_hypothesis(d: &Digraph, condition: CycleCondition, min_cycle_len: usize) -> HypothesisReport {
    let cycles = enumerate_cycles(d, min_cycle_len.max(2), d.vertex_count());
    let violations = cycles.iter().filter_map(|c| cycle_condition_violation(d, c.vertices(), condition)).collect();
    HypothesisReport::from_violations(violations, cycles.len())
}

/// Options for [`check_circuit_hypothesis_with`].
#[derive(Clone, Copy, Debug)]
pub struct CircuitCheck {
    pub max_len: usize,
    pub min_len: usize,
    pub budget: usize,
    /// Stop after the first violation.
    pub stop_at_first: bool,
}

impl CircuitCheck {
    pub fn new(max_len: usize) -> Self {
        CircuitCheck { max_len, min_len: 2, budget: DEFAULT_BUDGET, stop_at_first: false }
    }
}

fn circuit_violation(d: &Digraph, walk: &[Vertex], min_len: usize) -> Option<Violation> {
    let n = walk.len();
    if n < min_len || n % 3 == 0 {
        return None;
    }
    let short = short_chords_of(d, walk);
    (short.len() < 4).then(|| Violation {
        walk: walk.to_vec(),
        reason: format!("length {n} is not divisible by 3 and the circuit has {} short chords", short.len()),
        chords: short,
    })
}

/// Every circuit with length in `min_len..=max_len` not divisible by three
/// has at least four short chords.
pub fn check_circuit_hypothesis(d: &Digraph, max_len: usize, min_len: usize) -> Result<HypothesisReport> {
    check_circuit_hypothesis_with(d, CircuitCheck { min_len, ..CircuitCheck::new(max_len) })
}

/// `examined` counts the circuits whose length is not divisible by three,
/// i.e. those subject to the chord requirement.
pub fn check_circuit_hypothesis_with(d: &Digraph, opts: CircuitCheck) -> Result<HypothesisReport> {
    // A closed trail splits into arc-disjoint cycles, so when every cycle
    // has length divisible by three so does every circuit.
    if enumerate_cycles(d, 2, d.vertex_count()).iter().all(|c| c.len() % 3 == 0) {
        return Ok(HypothesisReport::from_violations(Vec::new(), 0));
    }
    let mut violations = Vec::new();
    let mut examined = 0;
    let mut search = TrailSearch::new(d, opts.budget);
    search.run(opts.min_len.max(2), opts.max_len, |trail| {
        if trail.len() % 3 != 0 {
            examined += 1;
        }
        if let Some(v) = circuit_violation(d, trail, opts.min_len) {
            violations.push(v);
            return !opts.stop_at_first;
        }
        true
    })?;
    violations.sort_by(|a, b| a.walk.len().cmp(&b.walk.len()).then_with(|| a.walk.cmp(&b.walk)));
    Ok(HypothesisReport::from_violations(violations, examined))
}

/// Every cycle has an arc whose reverse is also an arc.
pub fn every_cycle_has_symmetric_arc(d: &Digraph) -> HypothesisReport {
    let cycles = enumerate_cycles(d, 2, d.vertex_count());
    let violations = cycles
        .iter()
        .filter(|c| !c.arcs().any(|(u, v)| d.has_arc(v, u)))
        .map(|c| Violation {
            walk: c.vertices().to_vec(),
            reason: "cycle has no symmetric arc".into(),
            chords: Vec::new(),
        })
        .collect();
    HypothesisReport::from_violations(violations, cycles.len())
}
