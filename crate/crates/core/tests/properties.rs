use proptest::prelude::*;

use trikernel::cycles::{
    are_consecutive, are_crossed, check_cycle_hypothesis, chords_of, enumerate_circuits, enumerate_cycles,
    every_cycle_has_symmetric_arc, short_chords_of, Circuit, CycleCondition, DEFAULT_BUDGET,
};
use trikernel::generators::{random_strongly_connected, sample_hypothesis_class, ClassId, Membership};
use trikernel::kernels::{
    find_kernel_via_closure, find_kl_kernel, is_k_independent, is_kernel_perfect, is_kl_kernel, is_l_absorbent,
    k_closure, KernelQuery,
};
use trikernel::substitution::{assemble_pre_3_kernel, check_pre_kernel_properties, run_substitution_method};
use trikernel::textfmt::{format_digraph, parse_digraph_text};
use trikernel::{Digraph, Distance, Error, VertexSet};

fn digraph(max_n: usize) -> impl Strategy<Value = Digraph> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n * (n - 1)).prop_map(move |bits| {
            let pairs = (0..n).flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)));
            Digraph::new(n, pairs.zip(bits).filter(|(_, b)| *b).map(|(a, _)| a)).unwrap()
        })
    })
}

fn strongly_connected(max_n: usize) -> impl Strategy<Value = Digraph> {
    (1..=max_n, 0.0..0.6f64, any::<u64>()).prop_map(|(n, p, seed)| random_strongly_connected(n, p, seed).unwrap())
}

fn with_subset(max_n: usize) -> impl Strategy<Value = (Digraph, VertexSet)> {
    digraph(max_n).prop_flat_map(|d| {
        let n = d.vertex_count();
        (Just(d), 0..1u64 << n).prop_map(|(d, m)| (d, VertexSet::from_mask(m)))
    })
}

fn add(a: Distance, b: Distance) -> Distance {
    match (a, b) {
        (Distance::Finite(x), Distance::Finite(y)) => Distance::Finite(x + y),
        _ => Distance::Unreachable,
    }
}

fn le(a: Distance, b: Distance) -> bool {
    match (a, b) {
        (_, Distance::Unreachable) => true,
        (Distance::Unreachable, _) => false,
        (Distance::Finite(x), Distance::Finite(y)) => x <= y,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn triangle_inequality(d in digraph(7)) {
        let dm = d.distances();
        for u in d.vertices() {
            prop_assert_eq!(dm.get(u, u), Distance::Finite(0));
            for v in d.vertices() {
                for w in d.vertices() {
                    prop_assert!(le(dm.get(u, w), add(dm.get(u, v), dm.get(v, w))));
                }
            }
        }
    }

    #[test]
    fn cones_grow_with_radius((d, s) in with_subset(7)) {
        prop_assume!(!s.is_empty());
        for l in 0..4 {
            prop_assert!(d.out_cone(&s, l).unwrap().is_subset(&d.out_cone(&s, l + 1).unwrap()));
        }
    }

    #[test]
    fn closures_nest_and_follow_the_distance_law(d in digraph(8)) {
        prop_assert_eq!(&k_closure(&d, 1).unwrap(), &d);
        let mut previous = d.clone();
        for k in 2..5 {
            let ck = k_closure(&d, k).unwrap();
            prop_assert!(previous.arcs().iter().all(|&(u, v)| ck.has_arc(u, v)));
            for u in d.vertices() {
                for v in d.vertices() {
                    let expected = match d.distance(u, v).unwrap() {
                        Distance::Finite(x) => Distance::Finite(x.div_ceil(k)),
                        Distance::Unreachable => Distance::Unreachable,
                    };
                    prop_assert_eq!(ck.distance(u, v).unwrap(), expected);
                }
            }
            previous = ck;
        }
    }

    #[test]
    fn three_kernels_are_kernels_of_the_square((d, s) in with_subset(8)) {
        let c2 = k_closure(&d, 2).unwrap();
        prop_assert_eq!(
            is_kl_kernel(&d, &s, KernelQuery::THREE_KERNEL),
            is_kl_kernel(&c2, &s, KernelQuery::KERNEL)
        );
    }

    #[test]
    fn independence_and_absorbence_are_monotone((d, s) in with_subset(7)) {
        for k in 1..5 {
            prop_assert!(!is_k_independent(&d, &s, k + 1) || is_k_independent(&d, &s, k));
            prop_assert!(!is_l_absorbent(&d, &s, k) || is_l_absorbent(&d, &s, k + 1));
        }
    }

    #[test]
    fn closure_route_agrees_with_direct_search(d in digraph(8)) {
        let direct = find_kl_kernel(&d, KernelQuery::THREE_KERNEL).unwrap();
        let via = find_kernel_via_closure(&d, 3).unwrap();
        prop_assert_eq!(direct.found(), via.found());
        if let Some(w) = &via.witness {
            prop_assert!(is_kl_kernel(&d, w, KernelQuery::THREE_KERNEL));
        }
        if let Some(w) = &direct.witness {
            prop_assert!(is_kl_kernel(&d, w, KernelQuery::THREE_KERNEL));
        }
    }

    #[test]
    fn symmetric_arc_on_every_cycle_gives_kernel_perfect(d in digraph(7)) {
        if every_cycle_has_symmetric_arc(&d).satisfied {
            prop_assert!(is_kernel_perfect(&d).unwrap().holds);
        }
    }

    #[test]
    fn crossing_condition_implies_consecutive_condition(d in digraph(6), min_len in 2usize..4) {
        if check_cycle_hypothesis(&d, CycleCondition::ThreeWithCrossing, min_len).satisfied {
            prop_assert!(check_cycle_hypothesis(&d, CycleCondition::TwoConsecutive, min_len).satisfied);
        }
    }

    #[test]
    fn chords_are_never_cycle_arcs(d in digraph(6)) {
        for c in enumerate_cycles(&d, 2, d.vertex_count()) {
            let n = c.len();
            let own: Vec<_> = c.arcs().collect();
            let chords = chords_of(&d, c.vertices());
            for ch in &chords {
                prop_assert!(!own.contains(&(c.vertices()[ch.tail_pos], c.vertices()[ch.head_pos])));
                prop_assert!((2..n).contains(&ch.length));
            }
            let short = short_chords_of(&d, c.vertices());
            prop_assert_eq!(short, chords.into_iter().filter(|ch| ch.is_short()).collect::<Vec<_>>());
        }
    }

    #[test]
    fn crossed_and_consecutive_exclude_each_other(d in digraph(7)) {
        for c in enumerate_cycles(&d, 5, d.vertex_count()) {
            let short = short_chords_of(&d, c.vertices());
            for a in &short {
                for b in &short {
                    prop_assert!(!(are_crossed(a, b, c.len()) && are_consecutive(a, b)));
                }
            }
        }
    }

    #[test]
    fn every_cycle_is_a_circuit(d in digraph(5)) {
        let circuits = enumerate_circuits(&d, 2, d.arc_count().max(2), DEFAULT_BUDGET).unwrap();
        for c in enumerate_cycles(&d, 2, d.vertex_count()) {
            prop_assert!(circuits.contains(&Circuit::from(c)));
        }
    }

    #[test]
    fn traces_keep_their_invariants(d in strongly_connected(8), pick in any::<prop::sample::Index>()) {
        let x0 = pick.index(d.vertex_count());
        match run_substitution_method(&d, x0) {
            Ok(out) => {
                prop_assert_eq!(out.trace.check_invariants(), Ok(()));
                prop_assert!(out.pre_3_kernel.contains(x0));
                prop_assert_eq!(&out.pre_3_kernel, &assemble_pre_3_kernel(&out.trace));
                prop_assert!(check_pre_kernel_properties(&out.trace).absorbent);
                prop_assert_eq!(out.is_3_kernel, out.absorbent && out.failure_witness.is_none());
                let again = run_substitution_method(&d, x0).unwrap();
                prop_assert_eq!(out, again);
            }
            Err(Error::NoBaseKernel { .. } | Error::SubkernelMissing { .. }) => {}
            Err(e) => return Err(TestCaseError::fail(format!("{e}"))),
        }
    }

    #[test]
    fn text_form_round_trips(d in digraph(8)) {
        let text = format_digraph(&d);
        let back = parse_digraph_text(&text).unwrap();
        prop_assert_eq!(&back, &d);
        prop_assert_eq!(format_digraph(&back), text);
    }

    #[test]
    fn strongly_connected_generator_is_strongly_connected(d in strongly_connected(12)) {
        prop_assert!(d.is_strongly_connected());
    }
}

#[test]
fn class_samples_repass_their_predicates() {
    let classes = [
        ClassId::Duchet,
        ClassId::CycleHypothesis { condition: CycleCondition::ThreeWithCrossing, min_cycle_len: 3 },
        ClassId::CircuitHypothesisPlusQuasi,
    ];
    for class in classes {
        let sample = sample_hypothesis_class(class, 5, 300, 99, 0.4).unwrap();
        assert_eq!(sample.accepted, sample.instances.len());
        for (_, d) in &sample.instances {
            assert_eq!(class.membership(d, DEFAULT_BUDGET).unwrap(), Membership::In);
        }
    }
}

#[test]
fn triangle_is_drawn_into_the_duchet_class() {
    let sample = sample_hypothesis_class(ClassId::Duchet, 3, 200, 5, 1.0).unwrap();
    assert_eq!(sample.accepted, 200);
    assert!(sample.instances.iter().all(|(_, d)| *d == Digraph::complete(3)));
}
