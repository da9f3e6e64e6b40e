//! Seeded and exhaustive digraph generation, plus rejection sampling of the
//! hypothesis classes the verification campaigns draw from.
//!
//! All randomness comes from splitmix64 so that a `(kind, n, p, seed)` tuple
//! names the same digraph on every platform.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cycles::{
    check_circuit_hypothesis_with, check_cycle_hypothesis, every_cycle_has_symmetric_arc, CircuitCheck, CycleCondition,
    DEFAULT_BUDGET,
};
use crate::digraph::{Digraph, Vertex};
use crate::error::{Error, Result};
use crate::kernels::is_quasi_3_kernel_perfect;

/// Largest `n` for exhaustive enumeration (`2^{n(n-1)}` digraphs).
pub const EXHAUSTIVE_BOUND: usize = 4;

/// splitmix64 (Steele, Lea and Flood).
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)` from the top 53 bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// `next_u64() % bound`.
    pub fn below(&mut self, bound: u64) -> u64 {
        self.next_u64() % bound
    }
}

/// Seed for trial `index` of a campaign seeded with `seed`.
pub fn trial_seed(seed: u64, index: u64) -> u64 {
    seed ^ index
}

fn check_probability(p: f64) -> Result<()> {
    if (0.0..=1.0).contains(&p) {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("arc probability {p} outside [0, 1]")))
    }
}

fn ordered_pairs(n: usize) -> impl Iterator<Item = (Vertex, Vertex)> {
    (0..n).flat_map(move |u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
}

/// Each ordered pair `(u, v)`, `u != v`, visited in lexicographic order, is an
/// arc when the next draw is below `arc_prob`.
pub fn random_digraph(n: usize, arc_prob: f64, seed: u64) -> Result<Digraph> {
    check_probability(arc_prob)?;
    let mut rng = SplitMix64::new(seed);
    let arcs: Vec<_> = ordered_pairs(n).filter(|_| rng.next_f64() < arc_prob).collect();
    Digraph::new(n, arcs)
}

/// A Hamiltonian cycle through a seeded random permutation, plus each other
/// ordered pair with probability `extra_arc_prob`.
///
/// The permutation is a Fisher-Yates shuffle of `0..n` (swap `i` with
/// `below(i + 1)` for `i = n-1 down to 1`); the extra-arc draws continue the
/// same stream in lexicographic pair order.
pub fn random_strongly_connected(n: usize, extra_arc_prob: f64, seed: u64) -> Result<Digraph> {
    check_probability(extra_arc_prob)?;
    if n == 0 {
        return Err(Error::InvalidParameter("strongly connected generator needs n >= 1".into()));
    }
    let mut rng = SplitMix64::new(seed);
    let mut perm: Vec<Vertex> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.below(i as u64 + 1) as usize;
        perm.swap(i, j);
    }
    let mut arcs: Vec<_> = if n >= 2 { (0..n).map(|i| (perm[i], perm[(i + 1) % n])).collect() } else { Vec::new() };
    let backbone: std::collections::HashSet<_> = arcs.iter().copied().collect();
    for (u, v) in ordered_pairs(n) {
        if !backbone.contains(&(u, v)) && rng.next_f64() < extra_arc_prob {
            arcs.push((u, v));
        }
    }
    Digraph::new(n, arcs)
}

/// Every labeled loopless digraph on `n` vertices; bit `i` of the index
/// selects the `i`-th ordered pair in lexicographic order.
pub fn enumerate_labeled_digraphs(n: usize) -> Result<impl Iterator<Item = Digraph>> {
    if n > EXHAUSTIVE_BOUND {
        return Err(Error::SizeBound { vertex_count: n, bound: EXHAUSTIVE_BOUND });
    }
    let pairs: Vec<_> = ordered_pairs(n).collect();
    let count = 1u64 << pairs.len();
    Ok((0..count).map(move |mask| {
        let arcs = pairs.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &a)| a);
        Digraph::new(n, arcs).expect("pairs are valid arcs")
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GeneratorKind {
    Cycle,
    Random,
    RandomStronglyConnected,
    ExhaustiveLabeled,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub n: usize,
    pub arc_prob: f64,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn generate(&self) -> Result<Vec<Digraph>> {
        match self.kind {
            GeneratorKind::Cycle => Ok(vec![Digraph::cycle(self.n)]),
            GeneratorKind::Random => Ok(vec![random_digraph(self.n, self.arc_prob, self.seed)?]),
            GeneratorKind::RandomStronglyConnected => {
                Ok(vec![random_strongly_connected(self.n, self.arc_prob, self.seed)?])
            }
            GeneratorKind::ExhaustiveLabeled => Ok(enumerate_labeled_digraphs(self.n)?.collect()),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "class")]
pub enum ClassId {
    /// Every cycle of length at least `min_cycle_len` meets the chord condition.
    CycleHypothesis { condition: CycleCondition, min_cycle_len: usize },
    /// Every circuit of length not divisible by three has four short chords,
    /// and every proper induced subdigraph has a 3-kernel.
    CircuitHypothesisPlusQuasi,
    /// Every cycle has a symmetric arc.
    Duchet,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Membership {
    In,
    Out,
    /// The class predicate hit a resource bound.
    Undecided,
}

impl ClassId {
    pub fn membership(&self, d: &Digraph, budget: usize) -> Result<Membership> {
        let yes = match *self {
            ClassId::CycleHypothesis { condition, min_cycle_len } => {
                check_cycle_hypothesis(d, condition, min_cycle_len).satisfied
            }
            ClassId::Duchet => every_cycle_has_symmetric_arc(d).satisfied,
            ClassId::CircuitHypothesisPlusQuasi => {
                let opts = CircuitCheck { budget, stop_at_first: true, ..CircuitCheck::new(d.arc_count()) };
                match check_circuit_hypothesis_with(d, opts) {
                    Ok(r) => r.satisfied && is_quasi_3_kernel_perfect(d)?.holds,
                    Err(e) if e.is_resource_bound() => return Ok(Membership::Undecided),
                    Err(e) => return Err(e),
                }
            }
        };
        Ok(if yes { Membership::In } else { Membership::Out })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClassSample {
    pub class_id: ClassId,
    /// Accepted instances with the index of the trial that produced them.
    pub instances: Vec<(u64, Digraph)>,
    pub tried: usize,
    pub accepted: usize,
    pub undecided: usize,
}

/// Draws `trials` digraphs from [`random_strongly_connected`] with per-trial
/// seeds and keeps the members of `class_id`.
pub fn sample_hypothesis_class(
    class_id: ClassId,
    n: usize,
    trials: u64,
    seed: u64,
    extra_arc_prob: f64,
) -> Result<ClassSample> {
    let verdicts: Vec<(u64, Digraph, Membership)> = (0..trials)
        .into_par_iter()
        .map(|t| {
            let d = random_strongly_connected(n, extra_arc_prob, trial_seed(seed, t))?;
            let m = class_id.membership(&d, DEFAULT_BUDGET)?;
            Ok((t, d, m))
        })
        .collect::<Result<_>>()?;
    let undecided = verdicts.iter().filter(|v| v.2 == Membership::Undecided).count();
    let instances: Vec<_> = verdicts.into_iter().filter(|v| v.2 == Membership::In).map(|(t, d, _)| (t, d)).collect();
    Ok(ClassSample { class_id, accepted: instances.len(), instances, tried: trials as usize, undecided })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn splitmix_reference_values() {
        // First outputs for seed 1234567, from the reference C implementation.
        let mut rng = SplitMix64::new(1234567);
        let got: Vec<u64> = (0..5).map(|_| rng.next_u64()).collect();
        assert_eq!(
            got,
            vec![
                6457827717110365317,
                3203168211198807973,
                9817491932198370423,
                4593380528125082431,
                16408922859458223821,
            ]
        );
    }

    #[test]
    fn random_digraph_extremes() {
        assert_eq!(random_digraph(5, 0.0, 9).unwrap().arc_count(), 0);
        assert_eq!(random_digraph(5, 1.0, 9).unwrap(), Digraph::complete(5));
        assert!(random_digraph(5, 1.5, 9).is_err());
    }

    #[test]
    fn random_digraph_is_deterministic() {
        let a = random_digraph(9, 0.3, 42).unwrap();
        assert_eq!(a, random_digraph(9, 0.3, 42).unwrap());
        assert_ne!(a, random_digraph(9, 0.3, 43).unwrap());
    }

    #[test]
    fn strongly_connected_generator() {
        let h = random_strongly_connected(7, 0.0, 5).unwrap();
        assert_eq!(h.arc_count(), 7);
        assert!(h.is_strongly_connected());
        assert!(h.vertices().all(|v| h.out_neighbors(v).len() == 1 && h.in_neighbors(v).len() == 1));
        for seed in 0..50 {
            let d = random_strongly_connected(6, 0.2, seed).unwrap();
            assert!(d.is_strongly_connected());
            assert_eq!(d, random_strongly_connected(6, 0.2, seed).unwrap());
        }
        assert_eq!(random_strongly_connected(1, 0.5, 0).unwrap(), Digraph::edgeless(1));
    }

    #[test]
    fn exhaustive_counts() {
        assert_eq!(enumerate_labeled_digraphs(1).unwrap().count(), 1);
        assert_eq!(enumerate_labeled_digraphs(2).unwrap().count(), 4);
        assert_eq!(enumerate_labeled_digraphs(3).unwrap().count(), 64);
        assert!(enumerate_labeled_digraphs(5).is_err());
    }

    #[test]
    fn exhaustive_digraphs_are_distinct() {
        let all: std::collections::HashSet<_> =
            enumerate_labeled_digraphs(3).unwrap().map(|d| d.arcs().to_vec()).collect();
        assert_eq!(all.len(), 64);
    }

    #[test]
    fn class_membership_examples() {
        assert_eq!(ClassId::Duchet.membership(&Digraph::complete(3), DEFAULT_BUDGET).unwrap(), Membership::In);
        assert_eq!(
            ClassId::CircuitHypothesisPlusQuasi.membership(&Digraph::cycle(6), DEFAULT_BUDGET).unwrap(),
            Membership::In
        );
        assert_eq!(
            ClassId::CircuitHypothesisPlusQuasi.membership(&Digraph::cycle(4), DEFAULT_BUDGET).unwrap(),
            Membership::Out
        );
    }

    #[test]
    fn samples_repass_their_predicate() {
        let class = ClassId::CycleHypothesis { condition: CycleCondition::TwoConsecutive, min_cycle_len: 3 };
        let sample = sample_hypothesis_class(class, 4, 200, 17, 0.6).unwrap();
        assert_eq!(sample.accepted, sample.instances.len());
        assert!(sample.accepted > 0);
        for (_, d) in &sample.instances {
            assert_eq!(class.membership(d, DEFAULT_BUDGET).unwrap(), Membership::In);
        }
        assert_eq!(sample, sample_hypothesis_class(class, 4, 200, 17, 0.6).unwrap());
    }
}
