#![allow(clippy::needless_range_loop)]

mod common;

use std::collections::VecDeque;

use common::random_circuit;
use proptest::prelude::*;
use qroute::architecture::Architecture;
use qroute::bench::{apply_schedule, compile, odd_even_sort_schedule, random_mapping};
use qroute::circuit::{slice_timesteps, Circuit, GateKind, Timestep};
use qroute::placement::{build_interaction_graph, place, Mapping};
use qroute::router::{
    candidate_swaps, distance_vector, route, select_swap, strictly_improves, DistanceVector,
    RoutingConfig, SwapChoice,
};
use qroute::verify::{check_conformance, check_routed_equivalence, check_trace_equivalence};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn architectures() -> Vec<Architecture> {
    vec![
        Architecture::ring(6).unwrap(),
        Architecture::ring(7).unwrap().oriented(),
        Architecture::square_grid(3).unwrap(),
        Architecture::cyclic_butterfly(2).unwrap(),
        Architecture::complete(5).unwrap(),
        Architecture::ibmqx5(),
        Architecture::ibm_tokyo(),
        Architecture::undirected("path", 6, vec![(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]).unwrap(),
    ]
}

/// All-pairs shortest paths by Floyd-Warshall over the undirected skeleton.
fn floyd_warshall(arch: &Architecture) -> Vec<Vec<usize>> {
    let n = arch.num_nodes();
    let inf = usize::MAX / 4;
    let mut d = vec![vec![inf; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0;
    }
    for (a, b) in arch.skeleton_edges() {
        d[a][b] = 1;
        d[b][a] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                d[i][j] = d[i][j].min(d[i][k] + d[k][j]);
            }
        }
    }
    d
}

/// Connected random graph: a random spanning tree plus extra edges.
fn random_graph(n: usize, extra: usize, seed: u64) -> Architecture {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::new();
    for v in 1..n {
        let u = rng.gen_range(0..v);
        edges.push((u, v));
    }
    for _ in 0..extra {
        let (a, b) = (rng.gen_range(0..n), rng.gen_range(0..n));
        if a != b && !edges.contains(&(a.min(b), a.max(b))) {
            edges.push((a.min(b), a.max(b)));
        }
    }
    Architecture::undirected("random", n, edges).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn routed_circuits_conform_and_are_equivalent(
        arch_index in 0usize..8,
        qubits in 2usize..7,
        layers in 1usize..12,
        seed in any::<u64>(),
        lookahead in 0usize..5,
        tie_seed in prop_oneof![Just(0u64), any::<u64>()],
        placed in any::<bool>(),
    ) {
        let arch = &architectures()[arch_index];
        let n = qubits.min(arch.num_nodes());
        let c = random_circuit(n, layers, seed);
        let cfg = RoutingConfig { lookahead, seed: tie_seed, ..RoutingConfig::default() };
        let initial = random_mapping(n, arch.num_nodes(), seed ^ 1);
        let compiled = compile(&c, arch, (!placed).then_some(&initial), &cfg, false).unwrap();
        let r = &compiled.result;

        prop_assert!(check_conformance(&r.routed, arch, false).is_pass());
        prop_assert!(check_conformance(&compiled.synthesized, arch, true).is_pass());
        prop_assert!(check_trace_equivalence(&c, r));
        prop_assert_eq!(r.routed.count_kind(GateKind::Swap), r.swap_count);
        prop_assert!(r.initial_mapping.is_consistent() && r.final_mapping.is_consistent());
        if !placed {
            prop_assert_eq!(&r.initial_mapping, &initial);
        }
        let e = check_routed_equivalence(&c, r, &compiled.synthesized, seed, 16).unwrap();
        prop_assert!(e.equivalent, "fidelity {}", e.fidelity);
    }

    #[test]
    fn routing_is_reproducible(arch_index in 0usize..8, layers in 1usize..10, seed in any::<u64>(), tie_seed in any::<u64>()) {
        let arch = &architectures()[arch_index];
        let c = random_circuit(arch.num_nodes().min(6), layers, seed);
        let cfg = RoutingConfig { seed: tie_seed, ..RoutingConfig::default() };
        prop_assert_eq!(route(&c, arch, None, &cfg).unwrap(), route(&c, arch, None, &cfg).unwrap());
    }

    #[test]
    fn complete_graph_needs_no_swaps(n in 2usize..9, layers in 1usize..12, seed in any::<u64>()) {
        let arch = Architecture::complete(n).unwrap();
        let r = route(&random_circuit(n, layers, seed), &arch, None, &RoutingConfig::default()).unwrap();
        prop_assert_eq!(r.swap_count, 0);
    }

    /// Single and pair choices shrink the frontier's diameter key; a pair is
    /// only chosen when no single candidate does; a path brings the most
    /// distant pair together.
    #[test]
    fn selection_shrinks_the_frontier(arch_index in 0usize..8, seed in any::<u64>(), pairs in 1usize..5) {
        let arch = &architectures()[arch_index];
        let n = arch.num_nodes();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut qubits: Vec<usize> = (0..n).collect();
        qubits.shuffle(&mut rng);
        let mut front = Timestep::default();
        for k in 0..pairs.min(n / 2) {
            front.push(k, qubits[2 * k], qubits[2 * k + 1]);
        }
        let m = random_mapping(n, n, seed ^ 7);
        let before = distance_vector(&front, &m, arch);
        // Only unresolved pairs (distance at least two) are counted.
        prop_assume!(!before.is_empty());

        let after = |swaps: &[(usize, usize)]| {
            let mut m2 = m.clone();
            for &(a, b) in swaps {
                m2.swap_nodes(a, b);
            }
            distance_vector(&front, &m2, arch)
        };
        let candidates = candidate_swaps(&front, &m, arch);
        prop_assert!(candidates.iter().all(|&(a, b)| arch.adjacent(a, b)));
        let single_helps = candidates.iter().any(|&s| strictly_improves(&before, &after(&[s])));

        match select_swap(std::slice::from_ref(&front), &m, arch, &RoutingConfig::default()) {
            SwapChoice::Single(s) => {
                prop_assert!(candidates.contains(&s));
                prop_assert!(strictly_improves(&before, &after(&[s])));
            }
            SwapChoice::Pair(s, t) => {
                prop_assert!(!single_helps);
                prop_assert!(s.0 != t.0 && s.0 != t.1 && s.1 != t.0 && s.1 != t.1);
                prop_assert!(strictly_improves(&before, &after(&[s, t])));
            }
            SwapChoice::Path(path) => {
                prop_assert!(!single_helps);
                let top = before.max_distance().unwrap();
                prop_assert_eq!(path.len(), top - 1);
                let mut m2 = m.clone();
                for &(a, b) in &path {
                    m2.swap_nodes(a, b);
                }
                let dist = |m: &Mapping, (a, b): (usize, usize)| arch.distance(m.node(a).unwrap(), m.node(b).unwrap());
                prop_assert!(front.pairs.iter().any(|&p| dist(&m, p) == top && dist(&m2, p) == 1));
            }
        }
    }

    #[test]
    fn distance_vectors_order_like_sorted_lists(
        a in prop::collection::vec(0usize..8, 0..8),
        b in prop::collection::vec(0usize..8, 0..8),
    ) {
        prop_assume!(a.iter().filter(|&&d| d >= 2).count() == b.iter().filter(|&&d| d >= 2).count());
        // Adjacent pairs need no swap and are left out.
        let desc = |v: &[usize]| {
            let mut v: Vec<usize> = v.iter().copied().filter(|&d| d >= 2).collect();
            v.sort_unstable_by(|x, y| y.cmp(x));
            v
        };
        let (va, vb) = (DistanceVector::from_distances(a.clone()), DistanceVector::from_distances(b.clone()));
        prop_assert_eq!(va.cmp(&vb), desc(&a).cmp(&desc(&b)));
        prop_assert_eq!(va.entries(), desc(&a));
    }

    #[test]
    fn placement_is_injective_and_follows_degree_two_graph(n in 2usize..9, layers in 1usize..10, seed in any::<u64>(), arch_index in 0usize..8) {
        let arch = &architectures()[arch_index];
        let n = n.min(arch.num_nodes());
        let c = random_circuit(n, layers, seed);
        let slices = slice_timesteps(&c);
        let graph = build_interaction_graph(&slices, n);
        for q in 0..n {
            prop_assert!(graph.degree(q) <= 2);
        }
        for &(a, b) in graph.edges() {
            prop_assert!(slices.iter().any(|s| s.contains_pair(a, b)));
        }
        let m = place(&c, arch).unwrap();
        prop_assert!(m.is_consistent());
        prop_assert_eq!(m.num_nodes(), arch.num_nodes());
    }

    #[test]
    fn bfs_distances_match_floyd_warshall(n in 2usize..14, extra in 0usize..10, seed in any::<u64>()) {
        let arch = random_graph(n, extra, seed);
        let d = floyd_warshall(&arch);
        for a in 0..n {
            for b in 0..n {
                prop_assert_eq!(arch.distance(a, b), d[a][b]);
            }
        }
        prop_assert_eq!(arch.diameter(), d.iter().flatten().copied().max().unwrap());
        let (a, b) = (seed as usize % n, (seed >> 32) as usize % n);
        let path = arch.shortest_path(a, b);
        prop_assert_eq!(path.len(), d[a][b] + 1);
        prop_assert!(path.windows(2).all(|w| arch.adjacent(w[0], w[1])));
    }

    #[test]
    fn odd_even_schedule_sorts_rings(n in 2usize..14, seed in any::<u64>()) {
        let schedule = odd_even_sort_schedule(n);
        let ring = Architecture::ring(n.max(3)).unwrap();
        prop_assert_eq!(schedule.len(), if n % 2 == 0 { n - 1 } else { n });
        for round in &schedule {
            let mut used = vec![false; n];
            for &(a, b) in round {
                prop_assert!(n < 3 || ring.adjacent(a, b));
                prop_assert!(!used[a] && !used[b]);
                used[a] = true;
                used[b] = true;
            }
        }
        let mut values: Vec<usize> = (0..n).collect();
        values.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        apply_schedule(&schedule, &mut values);
        prop_assert!(values.windows(2).all(|w| w[0] <= w[1]));
    }
}

#[test]
fn mapping_swaps_stay_bijective() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut m = Mapping::from_pairs(5, 8, [(0, 3), (1, 0), (2, 7), (3, 4), (4, 1)]).unwrap();
    let mut reference: Vec<Option<usize>> = (0..8).map(|p| m.qubit(p)).collect();
    for _ in 0..500 {
        let (a, b) = (rng.gen_range(0..8), rng.gen_range(0..8));
        m.swap_nodes(a, b);
        reference.swap(a, b);
        assert!(m.is_consistent());
        assert!((0..8).all(|p| m.qubit(p) == reference[p]));
    }
}

#[test]
fn unused_qubits_keep_a_consistent_mapping() {
    // Qubit 2 has no gates; routing must still report a valid layout.
    let mut c = Circuit::new(4);
    c.push(qroute::circuit::Gate::cx(0, 3))
        .push(qroute::circuit::Gate::cx(1, 3));
    let arch = Architecture::ring(6).unwrap();
    let r = route(&c, &arch, None, &RoutingConfig::default()).unwrap();
    assert!(r.initial_mapping.is_consistent() && r.final_mapping.is_consistent());
    assert!(check_trace_equivalence(&c, &r));
    let mut seen = VecDeque::new();
    seen.extend(r.final_mapping.pairs().map(|(_, p)| p));
    let mut sorted: Vec<usize> = seen.into_iter().collect();
    sorted.sort_unstable();
    sorted.dedup();
    assert_eq!(sorted.len(), r.final_mapping.mapped_count());
}
