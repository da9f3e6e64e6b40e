//! Loopless simple digraphs on dense vertex ids, directed distances and the
//! neighbourhood operators used by the substitution method.

use std::collections::VecDeque;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Vertex = usize;

/// A sorted set of distinct vertex ids.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexSet(Vec<Vertex>);

impl VertexSet {
    pub const fn new() -> Self {
        VertexSet(Vec::new())
    }

    pub fn singleton(v: Vertex) -> Self {
        VertexSet(vec![v])
    }

    /// Builds a set from already sorted, distinct ids.
    ///
    /// Panics in debug builds when the input is not strictly increasing.
    pub fn from_sorted(vertices: Vec<Vertex>) -> Self {
        debug_assert!(vertices.windows(2).all(|w| w[0] < w[1]));
        VertexSet(vertices)
    }

    pub fn from_mask(mask: u64) -> Self {
        VertexSet((0..64).filter(|&v| mask >> v & 1 == 1).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.0.binary_search(&v).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[Vertex] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<Vertex> {
        self.0
    }

    pub fn max(&self) -> Option<Vertex> {
        self.0.last().copied()
    }

    pub fn union(&self, other: &VertexSet) -> VertexSet {
        self.iter().chain(other.iter()).collect()
    }

    pub fn intersection(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.iter().filter(|&v| other.contains(v)).collect())
    }

    pub fn difference(&self, other: &VertexSet) -> VertexSet {
        VertexSet(self.iter().filter(|&v| !other.contains(v)).collect())
    }

    pub fn is_subset(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| other.contains(v))
    }

    pub fn is_disjoint(&self, other: &VertexSet) -> bool {
        self.iter().all(|v| !other.contains(v))
    }

    /// Bitmask form; only valid while every member is below 64.
    pub fn mask(&self) -> u64 {
        self.iter().fold(0, |m, v| m | 1 << v)
    }
}

impl FromIterator<Vertex> for VertexSet {
    fn from_iter<I: IntoIterator<Item = Vertex>>(iter: I) -> Self {
        let mut v: Vec<Vertex> = iter.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        VertexSet(v)
    }
}

impl<const N: usize> From<[Vertex; N]> for VertexSet {
    fn from(a: [Vertex; N]) -> Self {
        a.into_iter().collect()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str("}")
    }
}

/// Length of a shortest directed path. `Unreachable` orders after every
/// finite value.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Distance {
    Finite(usize),
    Unreachable,
}

impl Distance {
    pub fn finite(self) -> Option<usize> {
        match self {
            Distance::Finite(d) => Some(d),
            Distance::Unreachable => None,
        }
    }

    /// `0 < d <= bound`.
    pub fn is_positive_within(self, bound: usize) -> bool {
        matches!(self, Distance::Finite(d) if d > 0 && d <= bound)
    }

    pub fn is_within(self, bound: usize) -> bool {
        matches!(self, Distance::Finite(d) if d <= bound)
    }

    pub fn is_reachable(self) -> bool {
        self != Distance::Unreachable
    }
}

impl fmt::Display for Distance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distance::Finite(d) => write!(f, "{d}"),
            Distance::Unreachable => f.write_str("U"),
        }
    }
}

/// All-pairs distances, row-major.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceMatrix {
    n: usize,
    entries: Vec<Distance>,
}

impl DistanceMatrix {
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn get(&self, u: Vertex, v: Vertex) -> Distance {
        self.entries[u * self.n + v]
    }

    pub fn row(&self, u: Vertex) -> &[Distance] {
        &self.entries[u * self.n..(u + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Distance]> {
        (0..self.n).map(|u| self.row(u))
    }
}

#[derive(Debug)]
pub struct Digraph {
    n: usize,
    arcs: Vec<(Vertex, Vertex)>,
    out: Vec<Vec<Vertex>>,
    inn: Vec<Vec<Vertex>>,
    distances: OnceLock<DistanceMatrix>,
}

impl Clone for Digraph {
    fn clone(&self) -> Self {
        Digraph {
            n: self.n,
            arcs: self.arcs.clone(),
            out: self.out.clone(),
            inn: self.inn.clone(),
            distances: self.distances.clone(),
        }
    }
}

impl PartialEq for Digraph {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.arcs == other.arcs
    }
}

impl Eq for Digraph {}

impl std::hash::Hash for Digraph {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.n.hash(state);
        self.arcs.hash(state);
    }
}

impl Digraph {
    /// Validates and canonicalizes an arc list.
    pub fn new(vertex_count: usize, arcs: impl IntoIterator<Item = (Vertex, Vertex)>) -> Result<Self> {
        let mut list = Vec::new();
        for (u, v) in arcs {
            for w in [u, v] {
                if w >= vertex_count {
                    return Err(Error::VertexOutOfRange { vertex: w, vertex_count });
                }
            }
            if u == v {
                return Err(Error::LoopArc(u));
            }
            list.push((u, v));
        }
        list.sort_unstable();
        if let Some(w) = list.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateArc(w[0].0, w[0].1));
        }
        Ok(Self::from_canonical(vertex_count, list))
    }

    fn from_canonical(n: usize, arcs: Vec<(Vertex, Vertex)>) -> Self {
        let mut out = vec![Vec::new(); n];
        let mut inn = vec![Vec::new(); n];
        for &(u, v) in &arcs {
            out[u].push(v);
            inn[v].push(u);
        }
        for list in &mut inn {
            list.sort_unstable();
        }
        Digraph { n, arcs, out, inn, distances: OnceLock::new() }
    }

    pub fn edgeless(n: usize) -> Self {
        Self::from_canonical(n, Vec::new())
    }

    /// The directed cycle `0 -> 1 -> ... -> n-1 -> 0` (no arcs for `n < 2`).
    pub fn cycle(n: usize) -> Self {
        let arcs = if n < 2 { Vec::new() } else { (0..n).map(|i| (i, (i + 1) % n)).collect() };
        Self::new(n, arcs).expect("cycle arcs are valid")
    }

    /// The directed path `0 -> 1 -> ... -> n-1`.
    pub fn path(n: usize) -> Self {
        Self::from_canonical(n, (1..n).map(|i| (i - 1, i)).collect())
    }

    /// Every ordered pair of distinct vertices is an arc.
    pub fn complete(n: usize) -> Self {
        let arcs = (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)));
        Self::from_canonical(n, arcs.collect())
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.n
    }

    /// Arcs in lexicographic order.
    pub fn arcs(&self) -> &[(Vertex, Vertex)] {
        &self.arcs
    }

    pub fn out_neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.out[v]
    }

    pub fn in_neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.inn[v]
    }

    pub fn has_arc(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n && self.out[u].binary_search(&v).is_ok()
    }

    pub fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, vertex_count: self.n })
        }
    }

    pub fn check_set(&self, s: &VertexSet) -> Result<()> {
        match s.max() {
            Some(v) => self.check_vertex(v),
            None => Ok(()),
        }
    }

    pub fn all_vertices(&self) -> VertexSet {
        VertexSet((0..self.n).collect())
    }

    pub fn distance(&self, u: Vertex, v: Vertex) -> Result<Distance> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        Ok(self.distances().get(u, v))
    }

    /// All-pairs distances by one breadth-first search per vertex. Computed
    /// on first use and cached.
    pub fn distances(&self) -> &DistanceMatrix {
        self.distances.get_or_init(|| {
            let mut entries = Vec::with_capacity(self.n * self.n);
            for s in 0..self.n {
                entries.extend(self.bfs(s));
            }
            DistanceMatrix { n: self.n, entries }
        })
    }

    fn bfs(&self, source: Vertex) -> Vec<Distance> {
        let mut dist = vec![Distance::Unreachable; self.n];
        dist[source] = Distance::Finite(0);
        let mut queue = VecDeque::from([source]);
        while let Some(u) = queue.pop_front() {
            let next = Distance::Finite(dist[u].finite().unwrap() + 1);
            for &w in &self.out[u] {
                if dist[w] == Distance::Unreachable {
                    dist[w] = next;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn is_strongly_connected(&self) -> bool {
        if self.n <= 1 {
            return true;
        }
        let reach = |adj: &Vec<Vec<Vertex>>| {
            let mut seen = vec![false; self.n];
            seen[0] = true;
            let mut stack = vec![0];
            let mut count = 1;
            while let Some(u) = stack.pop() {
                for &w in &adj[u] {
                    if !seen[w] {
                        seen[w] = true;
                        count += 1;
                        stack.push(w);
                    }
                }
            }
            count
        };
        reach(&self.out) == self.n && reach(&self.inn) == self.n
    }

    /// `D[S]`, relabeled `0..|S|` in ascending order of original id.
    pub fn induced(&self, s: &VertexSet) -> Result<InducedSubdigraph> {
        self.check_set(s)?;
        let mut to_new = vec![None; self.n];
        for (i, v) in s.iter().enumerate() {
            to_new[v] = Some(i);
        }
        let arcs = self.arcs.iter().filter_map(|&(u, v)| Some((to_new[u]?, to_new[v]?))).collect();
        Ok(InducedSubdigraph { digraph: Self::from_canonical(s.len(), arcs), to_old: s.as_slice().to_vec(), to_new })
    }

    /// `D - x`.
    pub fn without_vertex(&self, x: Vertex) -> Result<InducedSubdigraph> {
        self.check_vertex(x)?;
        self.induced(&self.vertices().filter(|&v| v != x).collect())
    }

    /// `N^{l-}(S)`: vertices outside `S` at distance exactly `l` from some
    /// member of `S`.
    pub fn in_neighborhood_at_distance(&self, s: &VertexSet, l: usize) -> Result<VertexSet> {
        if s.is_empty() {
            return Err(Error::EmptySet);
        }
        self.check_set(s)?;
        let dm = self.distances();
        Ok(self
            .vertices()
            .filter(|&u| !s.contains(u) && s.iter().any(|v| dm.get(u, v) == Distance::Finite(l)))
            .collect())
    }

    /// `Delta^{l+}(S)`: vertices at distance in `1..=l` from some member of `S`.
    pub fn out_cone(&self, s: &VertexSet, l: usize) -> Result<VertexSet> {
        if s.is_empty() {
            return Err(Error::EmptySet);
        }
        self.check_set(s)?;
        let dm = self.distances();
        Ok(self.vertices().filter(|&v| s.iter().any(|u| dm.get(u, v).is_positive_within(l))).collect())
    }
}

/// An induced subdigraph together with its vertex relabeling.
#[derive(Clone, Debug)]
pub struct InducedSubdigraph {
    pub digraph: Digraph,
    /// `to_old[new] = old`.
    pub to_old: Vec<Vertex>,
    /// `to_new[old]`, `None` for vertices outside the subset.
    pub to_new: Vec<Option<Vertex>>,
}

impl InducedSubdigraph {
    pub fn lift(&self, s: &VertexSet) -> VertexSet {
        s.iter().map(|v| self.to_old[v]).collect()
    }

    /// Maps a set of original ids into the subdigraph; `None` if some member
    /// lies outside.
    pub fn project(&self, s: &VertexSet) -> Option<VertexSet> {
        s.iter().map(|v| self.to_new.get(v).copied().flatten()).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Distance::{Finite, Unreachable};

    fn c6() -> Digraph {
        Digraph::cycle(6)
    }

    #[test]
    fn build_rejects_invalid_arcs() {
        let c3 = Digraph::new(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(c3, Digraph::cycle(3));
        assert_eq!(Digraph::new(2, [(0, 0)]).unwrap_err(), Error::LoopArc(0));
        assert_eq!(Digraph::new(2, [(0, 1), (0, 1)]).unwrap_err(), Error::DuplicateArc(0, 1));
        assert!(matches!(Digraph::new(2, [(0, 2)]), Err(Error::VertexOutOfRange { vertex: 2, .. })));
    }

    #[test]
    fn build_is_order_independent() {
        let a = Digraph::new(3, [(2, 0), (0, 1), (1, 2)]).unwrap();
        assert_eq!(a.arcs(), &[(0, 1), (1, 2), (2, 0)]);
        assert_eq!(a, Digraph::cycle(3));
    }

    #[test]
    fn distances() {
        let c4 = Digraph::cycle(4);
        assert_eq!(c4.distance(0, 3).unwrap(), Finite(3));
        assert_eq!(c4.distance(2, 2).unwrap(), Finite(0));
        let p = Digraph::path(3);
        assert_eq!(p.distance(2, 0).unwrap(), Unreachable);
        assert!(p.distance(0, 3).is_err());
    }

    #[test]
    fn distance_matrices() {
        let rows = |d: &Digraph| d.distances().rows().map(|r| r.to_vec()).collect::<Vec<_>>();
        assert_eq!(
            rows(&Digraph::cycle(3)),
            vec![
                vec![Finite(0), Finite(1), Finite(2)],
                vec![Finite(2), Finite(0), Finite(1)],
                vec![Finite(1), Finite(2), Finite(0)],
            ]
        );
        assert_eq!(rows(&Digraph::edgeless(2)), vec![vec![Finite(0), Unreachable], vec![Unreachable, Finite(0)]]);
        assert_eq!(rows(&Digraph::complete(2)), vec![vec![Finite(0), Finite(1)], vec![Finite(1), Finite(0)]]);
    }

    #[test]
    fn strong_connectivity() {
        assert!(Digraph::cycle(4).is_strongly_connected());
        assert!(!Digraph::path(3).is_strongly_connected());
        assert!(Digraph::edgeless(1).is_strongly_connected());
        assert!(Digraph::edgeless(0).is_strongly_connected());
        assert!(!Digraph::edgeless(2).is_strongly_connected());
    }

    #[test]
    fn induced_subdigraphs() {
        let sub = c6().induced(&VertexSet::from([1, 2, 3, 4, 5])).unwrap();
        assert_eq!(sub.digraph, Digraph::path(5));
        assert_eq!(sub.to_old, vec![1, 2, 3, 4, 5]);
        assert_eq!(sub.to_new[0], None);

        let whole = c6().induced(&c6().all_vertices()).unwrap();
        assert_eq!(whole.digraph, c6());
        assert_eq!(whole.to_old, (0..6).collect::<Vec<_>>());

        let empty = c6().induced(&VertexSet::new()).unwrap();
        assert_eq!(empty.digraph.vertex_count(), 0);
        assert!(c6().induced(&VertexSet::from([6])).is_err());
    }

    #[test]
    fn in_neighborhoods() {
        let d = c6();
        let s = VertexSet::singleton(0);
        assert_eq!(d.in_neighborhood_at_distance(&s, 1).unwrap(), VertexSet::from([5]));
        assert_eq!(d.in_neighborhood_at_distance(&s, 2).unwrap(), VertexSet::from([4]));
        assert!(d.in_neighborhood_at_distance(&s, 0).unwrap().is_empty());
        assert_eq!(d.in_neighborhood_at_distance(&VertexSet::new(), 1), Err(Error::EmptySet));
    }

    #[test]
    fn out_cones() {
        let d = c6();
        assert_eq!(d.out_cone(&VertexSet::singleton(0), 2).unwrap(), VertexSet::from([1, 2]));
        assert!(d.out_cone(&VertexSet::singleton(0), 0).unwrap().is_empty());
        assert_eq!(d.out_cone(&VertexSet::from([0, 3]), 1).unwrap(), VertexSet::from([1, 4]));
        // members reached from another member appear
        assert_eq!(d.out_cone(&VertexSet::from([0, 1]), 1).unwrap(), VertexSet::from([1, 2]));
    }

    #[test]
    fn vertex_set_algebra() {
        let a = VertexSet::from([3, 1, 2, 3]);
        assert_eq!(a.as_slice(), &[1, 2, 3]);
        let b = VertexSet::from([2, 5]);
        assert_eq!(a.union(&b), VertexSet::from([1, 2, 3, 5]));
        assert_eq!(a.intersection(&b), VertexSet::from([2]));
        assert_eq!(a.difference(&b), VertexSet::from([1, 3]));
        assert_eq!(VertexSet::from_mask(a.mask()), a);
        assert_eq!(a.to_string(), "{1,2,3}");
    }
}
