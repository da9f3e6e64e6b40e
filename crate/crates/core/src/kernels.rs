//! k-closures, (k,l)-kernel predicates and an exhaustive kernel solver.
//!
//! Distances are directed. `Unreachable` counts as at least `k` for
//! independence and as more than `l` for absorption.

use serde::{Deserialize, Serialize};

use crate::digraph::{Digraph, DistanceMatrix, Vertex, VertexSet};
use crate::error::{Error, Result};

/// Largest instance the subset solver accepts by default.
pub const DEFAULT_SEARCH_BOUND: usize = 24;
/// Largest instance the perfectness checkers accept (they visit all `2^n`
/// induced subdigraphs).
pub const PERFECTION_BOUND: usize = 16;

/// Independence radius `k` and absorption radius `l`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct KernelQuery {
    pub k: usize,
    pub l: usize,
}

impl KernelQuery {
    /// A classic kernel: independent and absorbent in one step.
    pub const KERNEL: KernelQuery = KernelQuery { k: 2, l: 1 };
    pub const THREE_KERNEL: KernelQuery = KernelQuery { k: 3, l: 2 };

    pub fn new(k: usize, l: usize) -> Result<Self> {
        if k < 2 || l < 1 {
            return Err(Error::InvalidParameter(format!("({k},{l})-kernel needs k >= 2 and l >= 1")));
        }
        Ok(KernelQuery { k, l })
    }

    /// A `k`-kernel is a `(k, k-1)`-kernel.
    pub fn k_kernel(k: usize) -> Result<Self> {
        Self::new(k, k.saturating_sub(1))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct KernelResult {
    pub witness: Option<VertexSet>,
    pub subsets_examined: u64,
}

impl KernelResult {
    pub fn found(&self) -> bool {
        self.witness.is_some()
    }
}

/// `C^k(D)`: same vertices, an arc wherever `1 <= d_D(u,v) <= k`.
pub fn k_closure(d: &Digraph, k: usize) -> Result<Digraph> {
    if k == 0 {
        return Err(Error::InvalidParameter("closure radius must be at least 1".into()));
    }
    if k == 1 {
        return Ok(d.clone());
    }
    let dm = d.distances();
    let arcs = d
        .vertices()
        .flat_map(|u| d.vertices().map(move |v| (u, v)))
        .filter(|&(u, v)| dm.get(u, v).is_positive_within(k));
    Digraph::new(d.vertex_count(), arcs)
}

fn independent_in(dm: &DistanceMatrix, s: &VertexSet, k: usize) -> bool {
    s.iter().all(|u| s.iter().all(|v| u == v || !dm.get(u, v).is_within(k.saturating_sub(1))))
}

fn absorbent_in(dm: &DistanceMatrix, s: &VertexSet, l: usize) -> bool {
    (0..dm.vertex_count()).all(|u| s.contains(u) || s.iter().any(|v| dm.get(u, v).is_within(l)))
}

/// Every ordered pair of distinct members is at distance at least `k`.
pub fn is_k_independent(d: &Digraph, s: &VertexSet, k: usize) -> bool {
    independent_in(d.distances(), s, k)
}

/// Every vertex outside `s` reaches `s` within `l` steps.
pub fn is_l_absorbent(d: &Digraph, s: &VertexSet, l: usize) -> bool {
    absorbent_in(d.distances(), s, l)
}

pub fn is_kl_kernel(d: &Digraph, s: &VertexSet, q: KernelQuery) -> bool {
    let dm = d.distances();
    s.max().map_or(true, |v| v < d.vertex_count()) && independent_in(dm, s, q.k) && absorbent_in(dm, s, q.l)
}

/// Lexicographically least `(k,l)`-kernel, by depth-first search over
/// `k`-independent sets in lexicographic order.
pub fn find_kl_kernel(d: &Digraph, q: KernelQuery) -> Result<KernelResult> {
    find_kl_kernel_bounded(d, q, DEFAULT_SEARCH_BOUND)
}

pub fn find_kl_kernel_bounded(d: &Digraph, q: KernelQuery, bound: usize) -> Result<KernelResult> {
    let n = d.vertex_count();
    if n > bound.min(64) {
        return Err(Error::SizeBound { vertex_count: n, bound: bound.min(64) });
    }
    let solver = MaskSolver::new(d, q);
    let mut examined = 0;
    let witness = solver.search(0, 0, 0, &mut examined).map(VertexSet::from_mask);
    Ok(KernelResult { witness, subsets_examined: examined })
}

struct MaskSolver {
    n: usize,
    full: u64,
    /// Vertices too close to `v` in either direction.
    conflicts: Vec<u64>,
    /// Vertices within absorption distance of `v`, `v` included.
    absorbs: Vec<u64>,
}

impl MaskSolver {
    fn new(d: &Digraph, q: KernelQuery) -> Self {
        let n = d.vertex_count();
        let dm = d.distances();
        let mut conflicts = vec![0u64; n];
        let mut absorbs = vec![0u64; n];
        for u in 0..n {
            for v in 0..n {
                if u != v && dm.get(u, v).is_within(q.k.saturating_sub(1)) {
                    conflicts[u] |= 1 << v;
                    conflicts[v] |= 1 << u;
                }
                if dm.get(u, v).is_within(q.l) {
                    absorbs[v] |= 1 << u;
                }
            }
        }
        let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        MaskSolver { n, full, conflicts, absorbs }
    }

    /// Preorder over independent sets extending `set` with vertices `>= from`.
    fn search(&self, set: u64, covered: u64, from: Vertex, examined: &mut u64) -> Option<u64> {
        *examined += 1;
        if covered == self.full {
            return Some(set);
        }
        let blocked = (0..self.n).filter(|&v| set >> v & 1 == 1).fold(0, |m, v| m | self.conflicts[v]);
        for v in from..self.n {
            if blocked >> v & 1 == 0 {
                if let Some(found) = self.search(set | 1 << v, covered | self.absorbs[v], v + 1, examined) {
                    return Some(found);
                }
            }
        }
        None
    }
}

/// Finds a `k`-kernel of `D` as a classic kernel of `C^{k-1}(D)`.
pub fn find_kernel_via_closure(d: &Digraph, k: usize) -> Result<KernelResult> {
    if k < 3 {
        return Err(Error::InvalidParameter("the closure reduction needs k >= 3".into()));
    }
    find_kl_kernel(&k_closure(d, k - 1)?, KernelQuery::KERNEL)
}

/// Outcome of a perfectness check: the first induced subdigraph (in
/// lexicographic order of vertex sets) without the required kernel.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Perfection {
    pub holds: bool,
    pub counterexample: Option<VertexSet>,
}

fn first_kernelless_subset(d: &Digraph, q: KernelQuery, proper_only: bool) -> Result<Perfection> {
    let n = d.vertex_count();
    if n > PERFECTION_BOUND {
        return Err(Error::SizeBound { vertex_count: n, bound: PERFECTION_BOUND });
    }
    let mut current = Vec::with_capacity(n);
    let counterexample = lex_subsets(n, &mut current, 0, &mut |s: &[Vertex]| -> Result<bool> {
        if proper_only && s.len() == n {
            return Ok(false);
        }
        let sub = d.induced(&VertexSet::from_sorted(s.to_vec()))?;
        Ok(!find_kl_kernel(&sub.digraph, q)?.found())
    })?;
    Ok(Perfection { holds: counterexample.is_none(), counterexample })
}

/// Visits nonempty subsets of `0..n` in lexicographic order until `stop`
/// returns true.
fn lex_subsets(
    n: usize,
    current: &mut Vec<Vertex>,
    from: Vertex,
    stop: &mut impl FnMut(&[Vertex]) -> Result<bool>,
) -> Result<Option<VertexSet>> {
    for v in from..n {
        current.push(v);
        if stop(current)? {
            return Ok(Some(VertexSet::from_sorted(current.clone())));
        }
        let hit = lex_subsets(n, current, v + 1, stop)?;
        current.pop();
        if hit.is_some() {
            return Ok(hit);
        }
    }
    Ok(None)
}

/// Every nonempty induced subdigraph has a kernel.
pub fn is_kernel_perfect(d: &Digraph) -> Result<Perfection> {
    first_kernelless_subset(d, KernelQuery::KERNEL, false)
}

/// Every proper nonempty induced subdigraph has a 3-kernel.
pub fn is_quasi_3_kernel_perfect(d: &Digraph) -> Result<Perfection> {
    first_kernelless_subset(d, KernelQuery::THREE_KERNEL, true)
}

/// Every nonempty induced subdigraph, `D` included, has a 3-kernel.
pub fn is_3_kernel_perfect(d: &Digraph) -> Result<Perfection> {
    first_kernelless_subset(d, KernelQuery::THREE_KERNEL, false)
}
