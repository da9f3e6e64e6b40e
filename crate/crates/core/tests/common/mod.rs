//! Slow, independent reference implementations used to cross-check the
//! library. Nothing here calls into the library's algorithms; only the
//! `Digraph` container is shared.

#![allow(dead_code)]

use std::collections::BTreeSet;

use trikernel::Digraph;

pub type Dist = Vec<Vec<Option<usize>>>;

/// All-pairs shortest path lengths by Floyd-Warshall.
pub fn floyd_warshall(d: &Digraph) -> Dist {
    let n = d.vertex_count();
    let mut dist = vec![vec![None; n]; n];
    for (v, row) in dist.iter_mut().enumerate() {
        row[v] = Some(0);
    }
    for &(u, v) in d.arcs() {
        dist[u][v] = Some(1);
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if let (Some(a), Some(b)) = (dist[i][k], dist[k][j]) {
                    if dist[i][j].map_or(true, |c| a + b < c) {
                        dist[i][j] = Some(a + b);
                    }
                }
            }
        }
    }
    dist
}

pub fn members(mask: u64, n: usize) -> Vec<usize> {
    (0..n).filter(|v| mask >> v & 1 == 1).collect()
}

pub fn is_kl_kernel(dist: &Dist, set: &[usize], k: usize, l: usize) -> bool {
    let n = dist.len();
    let independent = set.iter().all(|&u| set.iter().all(|&v| u == v || dist[u][v].map_or(true, |x| x >= k)));
    let absorbent =
        (0..n).filter(|v| !set.contains(v)).all(|u| set.iter().any(|&v| dist[u][v].is_some_and(|x| x <= l)));
    independent && absorbent
}

/// Every `(k,l)`-kernel, sorted lexicographically as vertex lists.
pub fn all_kl_kernels(d: &Digraph, k: usize, l: usize) -> Vec<Vec<usize>> {
    let n = d.vertex_count();
    let dist = floyd_warshall(d);
    let mut found: Vec<Vec<usize>> =
        (0..1u64 << n).map(|m| members(m, n)).filter(|s| is_kl_kernel(&dist, s, k, l)).collect();
    found.sort();
    found
}

pub fn least_kl_kernel(d: &Digraph, k: usize, l: usize) -> Option<Vec<usize>> {
    all_kl_kernels(d, k, l).into_iter().next()
}

/// Subdigraph induced by `keep`, relabelled in increasing order.
pub fn induced(d: &Digraph, keep: &[usize]) -> Digraph {
    let index = |v: usize| keep.iter().position(|&w| w == v);
    let arcs = d.arcs().iter().filter_map(|&(u, v)| Some((index(u)?, index(v)?)));
    Digraph::new(keep.len(), arcs).unwrap()
}

/// Brute-force closed trails up to `max_len` arcs, as the set of their
/// lexicographically least rotations.
pub fn closed_trails(d: &Digraph, max_len: usize) -> BTreeSet<Vec<usize>> {
    fn walk(
        d: &Digraph,
        max_len: usize,
        seq: &mut Vec<usize>,
        used: &mut Vec<(usize, usize)>,
        out: &mut BTreeSet<Vec<usize>>,
    ) {
        let last = *seq.last().unwrap();
        for &(u, v) in d.arcs() {
            if u != last || used.contains(&(u, v)) {
                continue;
            }
            if v == seq[0] {
                let n = seq.len();
                let best = (0..n).map(|r| (0..n).map(|i| seq[(r + i) % n]).collect::<Vec<_>>()).min().unwrap();
                out.insert(best);
            }
            if used.len() + 1 < max_len {
                seq.push(v);
                used.push((u, v));
                walk(d, max_len, seq, used, out);
                used.pop();
                seq.pop();
            }
        }
    }
    let mut out = BTreeSet::new();
    for v in d.vertices() {
        walk(d, max_len, &mut vec![v], &mut Vec::new(), &mut out);
    }
    out
}

/// Simple cycles as canonical rotations (least vertex first).
pub fn simple_cycles(d: &Digraph) -> BTreeSet<Vec<usize>> {
    closed_trails(d, d.vertex_count())
        .into_iter()
        .filter(|c| {
            let mut s = c.clone();
            s.sort();
            s.dedup();
            s.len() == c.len()
        })
        .collect()
}

/// A 3-substitution sequence recomputed set by set from the displayed
/// equations, using Floyd-Warshall distances.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RefTrace {
    /// `N_0, N_1, ..., N_{3p+2}`.
    pub sets: Vec<Vec<usize>>,
    pub eligible: Vec<Vec<usize>>,
    pub p: usize,
    /// `(N'_{3k+1}, N'_{3k+2})` for `k < p`.
    pub intermediates: Vec<(Vec<usize>, Vec<usize>)>,
}

impl RefTrace {
    pub fn set(&self, i: usize) -> &[usize] {
        self.sets.get(i).map_or(&[], |s| s.as_slice())
    }

    pub fn inter(&self, i: usize) -> &[usize] {
        match (self.intermediates.get(i / 3), i % 3) {
            (Some(pair), 1) => &pair.0,
            (Some(pair), 2) => &pair.1,
            _ => &[],
        }
    }

    pub fn pre_kernel(&self, k: &[usize]) -> Vec<usize> {
        let removed: Vec<usize> =
            (0..self.sets.len()).filter(|i| i % 3 != 0).flat_map(|i| self.sets[i].clone()).collect();
        let mut out: Vec<usize> = k.iter().copied().filter(|v| !removed.contains(v)).collect();
        for i in (0..self.sets.len()).step_by(3) {
            out.extend(&self.sets[i]);
        }
        out.sort();
        out
    }
}

/// `{u not in S : d(u, v) = l for some v in S}`.
fn ring(dist: &Dist, s: &[usize], l: usize) -> Vec<usize> {
    (0..dist.len()).filter(|u| !s.contains(u) && s.iter().any(|&v| dist[*u][v] == Some(l))).collect()
}

/// Returns `None` when some `D[M_{3k+3}]` has no 3-kernel.
pub fn reference_trace(d: &Digraph, x0: usize, k: &[usize]) -> Option<RefTrace> {
    let n = d.vertex_count();
    let dist = floyd_warshall(d);
    let mut sets: Vec<Vec<usize>> = vec![vec![x0]];
    let mut eligible = vec![vec![x0]];
    let mut round = 0;
    loop {
        let base = sets[3 * round].clone();
        let earlier_removed: Vec<usize> =
            (0..round).flat_map(|r| [sets[3 * r + 1].clone(), sets[3 * r + 2].clone()]).flatten().collect();
        let near: Vec<usize> =
            ring(&dist, &base, 1).into_iter().filter(|v| k.contains(v) && !earlier_removed.contains(v)).collect();
        let far: Vec<usize> = ring(&dist, &base, 2)
            .into_iter()
            .filter(|v| k.contains(v) && !earlier_removed.contains(v) && !near.contains(v))
            .collect();
        let stop = near.is_empty() && far.is_empty();
        sets.push(near);
        sets.push(far);
        if stop {
            break;
        }
        let removed: Vec<usize> =
            (0..=round).flat_map(|r| [sets[3 * r + 1].clone(), sets[3 * r + 2].clone()]).flatten().collect();
        let added: Vec<usize> = (0..=round).flat_map(|r| sets[3 * r].clone()).collect();
        let assigned: Vec<usize> = eligible.concat();
        let m: Vec<usize> = (0..n)
            .filter(|x| !assigned.contains(x) && !k.contains(x))
            .filter(|&x| {
                (0..n)
                    .filter(|&v| v != x && dist[x][v].is_some_and(|t| t <= 2))
                    .all(|v| (!k.contains(&v) || removed.contains(&v)) && !added.contains(&v))
            })
            .collect();
        let sub = induced(d, &m);
        let local = least_kl_kernel(&sub, 3, 2)?;
        sets.push(local.into_iter().map(|i| m[i]).collect());
        eligible.push(m);
        round += 1;
    }
    let p = round;
    let intermediates = (0..p)
        .map(|r| {
            let base = &sets[3 * r];
            let near = ring(&dist, base, 1).into_iter().filter(|v| !sets[3 * r + 1].contains(v)).collect();
            let far = ring(&dist, base, 2).into_iter().filter(|v| !sets[3 * r + 2].contains(v)).collect();
            (near, far)
        })
        .collect();
    Some(RefTrace { sets, eligible, p, intermediates })
}

/// Least 3-kernel of `D - x0`, in `D`'s labels.
pub fn reference_base_kernel(d: &Digraph, x0: usize) -> Option<Vec<usize>> {
    let keep: Vec<usize> = d.vertices().filter(|&v| v != x0).collect();
    let local = least_kl_kernel(&induced(d, &keep), 3, 2)?;
    Some(local.into_iter().map(|i| keep[i]).collect())
}

/// Checks conditions (9)-(12) on `path = (t_s, ..., t_0)`, written out
/// directly from the definitions.
pub fn is_road(d: &Digraph, t: &RefTrace, x0: usize, path: &[usize]) -> bool {
    let s = path.len() - 1;
    let at = |j: usize| path[s - j];
    if at(0) != x0 || s > 3 * t.p || !t.set(s).contains(&at(s)) {
        return false;
    }
    for i in 0..=s {
        if 3 * i + 2 <= s && t.set(3 * i + 1).contains(&at(3 * i + 1)) != t.inter(3 * i + 2).contains(&at(3 * i + 2)) {
            return false;
        }
        if 3 * i <= s && !t.set(3 * i).contains(&at(3 * i)) {
            return false;
        }
    }
    for i in 2..=s {
        if d.has_arc(at(i), at(i - 2)) {
            let ok = (1..=s)
                .filter(|j| 3 * j < s)
                .any(|j| t.inter(3 * j + 1).contains(&at(i)) && t.inter(3 * (j - 1) + 2).contains(&at(i - 2)));
            if !ok {
                return false;
            }
        }
    }
    true
}

/// Every simple path with exactly `s` arcs from `v` to `x0`.
pub fn simple_paths(d: &Digraph, v: usize, x0: usize, s: usize) -> Vec<Vec<usize>> {
    fn go(d: &Digraph, x0: usize, left: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        let last = *path.last().unwrap();
        if left == 0 {
            if last == x0 {
                out.push(path.clone());
            }
            return;
        }
        for w in d.vertices() {
            if d.has_arc(last, w) && !path.contains(&w) {
                path.push(w);
                go(d, x0, left - 1, path, out);
                path.pop();
            }
        }
    }
    let mut out = Vec::new();
    go(d, x0, s, &mut vec![v], &mut out);
    out
}

/// Every road of length `s` from `v`, by filtering all simple paths.
pub fn all_roads(d: &Digraph, t: &RefTrace, x0: usize, v: usize, s: usize) -> Vec<Vec<usize>> {
    simple_paths(d, v, x0, s).into_iter().filter(|p| is_road(d, t, x0, p)).collect()
}
