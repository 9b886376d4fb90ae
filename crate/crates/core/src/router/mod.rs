//! Swap insertion.
//!
//! The router walks the circuit's dependency frontier. Gates whose operands
//! are adjacent under the current mapping are emitted straight away; when
//! the frontier is blocked, swaps are chosen by comparing distance vectors of
//! the frontier and the next few slices, and the frontier is recomputed.

mod distance;
mod select;

pub use distance::{distance_vector, strictly_improves, DistanceVector};
pub use select::{candidate_swaps, select_swap, Swap, SwapChoice};

use thiserror::Error;

use crate::architecture::Architecture;
use crate::circuit::{asap_order, Circuit, Gate, GateKind, Timestep};
use crate::placement::{place, Mapping, PlacementError};
use select::Selector;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RoutingConfig {
    /// Number of slices after the frontier consulted to rank swaps.
    pub lookahead: usize,
    /// Zero breaks final ties by lowest edge; any other value picks among
    /// them with a generator seeded from it.
    pub seed: u64,
    /// Try pairs of disjoint swaps before the brute-force fallback.
    pub allow_pair_swaps: bool,
    /// Drive swap selection with every blocked frontier gate instead of only
    /// those in the earliest two-qubit layer. Gates are emitted as soon as
    /// they become executable either way.
    pub full_frontier: bool,
    /// Among admissible swaps, keep those that can start in the earliest
    /// layer before ranking by lookahead, rather than only using start
    /// time to break the final ties. Favours parallel swap layers.
    pub earliest_first: bool,
}

impl Default for RoutingConfig {
    fn default() -> Self {
        RoutingConfig {
            lookahead: 4,
            seed: 0,
            allow_pair_swaps: true,
            full_frontier: false,
            earliest_first: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RoutingError {
    #[error("circuit has {qubits} qubits but the architecture only {nodes} nodes")]
    TooManyQubits { qubits: usize, nodes: usize },
    #[error("initial mapping covers {qubits} qubits and {nodes} nodes, expected {want_qubits} and {want_nodes}")]
    MappingShape {
        qubits: usize,
        nodes: usize,
        want_qubits: usize,
        want_nodes: usize,
    },
    #[error(transparent)]
    Placement(#[from] PlacementError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct RoutingResult {
    /// The routed circuit, over the architecture's nodes.
    pub routed: Circuit,
    /// Node of each logical qubit before the first routed gate. Qubits that
    /// were placed during routing appear at the node they would have
    /// occupied had they been present from the start.
    pub initial_mapping: Mapping,
    pub final_mapping: Mapping,
    pub swap_count: usize,
    pub fallback_count: usize,
}

/// Routes `circuit` onto `arch`.
///
/// With `initial` absent the circuit is placed first; qubits left unmapped
/// by the initial mapping are placed when first needed.
pub fn route(
    circuit: &Circuit,
    arch: &Architecture,
    initial: Option<&Mapping>,
    cfg: &RoutingConfig,
) -> Result<RoutingResult, RoutingError> {
    let (nq, nn) = (circuit.num_qubits(), arch.num_nodes());
    if nq > nn {
        return Err(RoutingError::TooManyQubits {
            qubits: nq,
            nodes: nn,
        });
    }
    let mapping = match initial {
        Some(m) => {
            if m.num_qubits() != nq || m.num_nodes() != nn {
                return Err(RoutingError::MappingShape {
                    qubits: m.num_qubits(),
                    nodes: m.num_nodes(),
                    want_qubits: nq,
                    want_nodes: nn,
                });
            }
            m.clone()
        }
        None => place(circuit, arch)?,
    };
    Ok(Router::new(circuit, arch, mapping, cfg).run())
}

/// Earliest unemitted two-qubit gates whose predecessors on both wires have
/// all been emitted.
pub fn frontier_slice(circuit: &Circuit, emitted: &[bool]) -> Timestep {
    let mut blocked = vec![false; circuit.num_qubits()];
    let mut step = Timestep::default();
    for (i, gate) in circuit.gates().iter().enumerate() {
        if emitted[i] {
            continue;
        }
        let free = gate.qubits.iter().all(|&q| !blocked[q]);
        if let (true, Some((a, b))) = (free, gate.pair()) {
            step.push(i, a, b);
        }
        for &q in &gate.qubits {
            blocked[q] = true;
        }
    }
    step
}

struct Router<'a> {
    circuit: &'a Circuit,
    arch: &'a Architecture,
    cfg: &'a RoutingConfig,
    wires: Vec<Vec<usize>>,
    front: Vec<usize>,
    /// Two-qubit gates per wire, and how many of them were emitted.
    pairs_on: Vec<Vec<usize>>,
    pairs_done: Vec<usize>,
    remaining: usize,
    mapping: Mapping,
    initial: Mapping,
    /// `origin[p]` is the node whose initial contents now sit on `p`.
    origin: Vec<usize>,
    out: Vec<Gate>,
    node_time: Vec<usize>,
    swaps: usize,
    fallbacks: usize,
    /// Two-qubit dependency layer of each input gate, from 1.
    layer: Vec<usize>,
}

fn two_qubit_layers(circuit: &Circuit) -> Vec<usize> {
    let mut time = vec![0usize; circuit.num_qubits()];
    circuit
        .gates()
        .iter()
        .map(|g| match g.pair() {
            Some((a, b)) => {
                let t = time[a].max(time[b]) + 1;
                time[a] = t;
                time[b] = t;
                t
            }
            None => 0,
        })
        .collect()
}

impl<'a> Router<'a> {
    fn new(
        circuit: &'a Circuit,
        arch: &'a Architecture,
        mapping: Mapping,
        cfg: &'a RoutingConfig,
    ) -> Self {
        let wires = circuit.wires();
        let pairs_on = wires
            .iter()
            .map(|w| {
                w.iter()
                    .copied()
                    .filter(|&g| circuit.gates()[g].is_two_qubit())
                    .collect()
            })
            .collect();
        let nq = circuit.num_qubits();
        Router {
            circuit,
            arch,
            cfg,
            wires,
            front: vec![0; nq],
            pairs_on,
            pairs_done: vec![0; nq],
            remaining: circuit.len(),
            initial: mapping.clone(),
            mapping,
            origin: (0..arch.num_nodes()).collect(),
            out: Vec::with_capacity(circuit.len()),
            node_time: vec![0; arch.num_nodes()],
            swaps: 0,
            fallbacks: 0,
            layer: two_qubit_layers(circuit),
        }
    }

    fn run(mut self) -> RoutingResult {
        let mut selector = Selector::new(self.arch, self.cfg);
        // Each swap strictly shrinks the frontier, each fallback emits a gate
        // and mapping steps place a qubit, so this bound is never reached.
        let budget =
            4 * (self.circuit.len() + 1) * (self.arch.diameter() + 1) * (self.arch.num_nodes() + 1);
        let mut iterations = 0;
        loop {
            self.drain();
            if self.remaining == 0 {
                break;
            }
            iterations += 1;
            assert!(iterations <= budget, "router failed to make progress");

            let frontier = self.frontier();
            if frontier.is_empty() {
                self.place_stranded();
                continue;
            }
            if self.place_frontier(&frontier) {
                continue;
            }
            let target = self.swap_target(frontier);
            let slices = self.lookahead(&target);
            let choice = selector.select(&slices, &self.mapping, Some(&self.node_time));
            if choice.is_fallback() {
                self.fallbacks += 1;
            }
            for (a, b) in choice.swaps() {
                self.apply_swap(a, b);
            }
        }

        let mut routed = Circuit::with_clbits(self.arch.num_nodes(), self.circuit.num_clbits());
        routed.set_register(self.circuit.register());
        for gate in self.out {
            routed.push(gate);
        }
        RoutingResult {
            routed: asap_order(&routed),
            initial_mapping: self.initial,
            final_mapping: self.mapping,
            swap_count: self.swaps,
            fallback_count: self.fallbacks,
        }
    }

    fn front_gate(&self, q: usize) -> Option<usize> {
        self.wires[q].get(self.front[q]).copied()
    }

    /// The gate wire `q` waits on. For an unmapped qubit, pending
    /// single-qubit gates are looked past since they wait for placement.
    fn lead_gate(&self, q: usize) -> Option<usize> {
        if self.mapping.is_mapped(q) {
            return self.front_gate(q);
        }
        self.wires[q][self.front[q]..]
            .iter()
            .copied()
            .find(|&g| self.circuit.gates()[g].kind.arity() != Some(1))
    }

    fn is_ready(&self, g: usize) -> bool {
        self.circuit.gates()[g]
            .qubits
            .iter()
            .all(|&q| self.front_gate(q) == Some(g))
    }

    fn try_emit(&mut self, g: usize) -> bool {
        if !self.is_ready(g) {
            return false;
        }
        let circuit = self.circuit;
        let gate = &circuit.gates()[g];
        let m = &self.mapping;
        let emitted = match gate.kind {
            GateKind::Barrier => {
                let nodes: Vec<usize> = gate.qubits.iter().filter_map(|&q| m.node(q)).collect();
                let top = self.node_time.iter().copied().max().unwrap_or(0);
                self.node_time.fill(top);
                if !nodes.is_empty() {
                    self.out.push(Gate::barrier(nodes));
                }
                true
            }
            _ if gate.is_two_qubit() => {
                let (a, b) = (gate.qubits[0], gate.qubits[1]);
                match (m.node(a), m.node(b)) {
                    (Some(x), Some(y)) if self.arch.adjacent(x, y) => {
                        self.out.push(gate.remapped(|q| m.node(q).unwrap()));
                        let t = self.node_time[x].max(self.node_time[y]) + 1;
                        self.node_time[x] = t;
                        self.node_time[y] = t;
                        self.pairs_done[a] += 1;
                        self.pairs_done[b] += 1;
                        true
                    }
                    _ => false,
                }
            }
            _ => match m.node(gate.qubits[0]) {
                Some(x) => {
                    self.out.push(gate.remapped(|_| x));
                    true
                }
                None => false,
            },
        };
        if emitted {
            for &q in &gate.qubits {
                self.front[q] += 1;
            }
            self.remaining -= 1;
        }
        emitted
    }

    fn drain(&mut self) {
        loop {
            let mut progressed = false;
            for q in 0..self.circuit.num_qubits() {
                while let Some(g) = self.front_gate(q) {
                    if !self.try_emit(g) {
                        break;
                    }
                    progressed = true;
                }
            }
            if !progressed {
                break;
            }
        }
    }

    fn frontier(&self) -> Vec<usize> {
        let mut gates = Vec::new();
        for q in 0..self.circuit.num_qubits() {
            let Some(g) = self.lead_gate(q) else { continue };
            let gate = &self.circuit.gates()[g];
            let Some((a, b)) = gate.pair() else { continue };
            let other = if a == q { b } else { a };
            if other > q && self.lead_gate(other) == Some(g) {
                gates.push(g);
            }
        }
        gates.sort_unstable();
        gates
    }

    /// Frontier gates that swap selection works towards.
    fn swap_target(&self, mut frontier: Vec<usize>) -> Vec<usize> {
        if !self.cfg.full_frontier {
            let first = frontier.iter().map(|&g| self.layer[g]).min().unwrap();
            frontier.retain(|&g| self.layer[g] == first);
        }
        frontier
    }

    fn assign(&mut self, q: usize, node: usize) {
        self.mapping.assign(q, node);
        self.initial.assign(q, self.origin[node]);
    }

    fn nearest_free(&self, anchor: usize) -> usize {
        (0..self.arch.num_nodes())
            .filter(|&v| self.mapping.is_free(v))
            .min_by_key(|&v| (self.arch.distance(anchor, v), v))
            .expect("a free node remains for every unmapped qubit")
    }

    /// Places unmapped qubits of frontier gates: next to the partner if it is
    /// mapped, otherwise both on the lowest free edge. Returns whether any
    /// qubit was placed.
    fn place_frontier(&mut self, frontier: &[usize]) -> bool {
        let mut placed = false;
        for &g in frontier {
            let (a, b) = self.circuit.gates()[g].pair().unwrap();
            match (self.mapping.node(a), self.mapping.node(b)) {
                (Some(_), Some(_)) => continue,
                (Some(x), None) => {
                    let v = self.nearest_free(x);
                    self.assign(b, v);
                }
                (None, Some(y)) => {
                    let v = self.nearest_free(y);
                    self.assign(a, v);
                }
                (None, None) => {
                    let free_edge = (0..self.arch.num_nodes()).find_map(|p| {
                        let r = *self.arch.neighbors(p).iter().find(|&&r| {
                            r > p && self.mapping.is_free(p) && self.mapping.is_free(r)
                        })?;
                        Some((p, r))
                    });
                    let (p, r) = match free_edge {
                        Some(e) => e,
                        None => {
                            let p = self.nearest_free(0);
                            self.assign(a, p);
                            (p, self.nearest_free(p))
                        }
                    };
                    if !self.mapping.is_mapped(a) {
                        self.assign(a, p);
                    }
                    self.assign(b, r);
                }
            }
            placed = true;
        }
        placed
    }

    /// Nothing two-qubit is pending, yet gates remain: they are single-qubit
    /// gates on a qubit that never interacts. Put it on the lowest free node.
    fn place_stranded(&mut self) {
        let q = (0..self.circuit.num_qubits())
            .find(|&q| !self.mapping.is_mapped(q) && self.front_gate(q).is_some())
            .expect("stalled router with every pending qubit mapped");
        let v = (0..self.arch.num_nodes())
            .find(|&v| self.mapping.is_free(v))
            .expect("a free node remains for every unmapped qubit");
        self.assign(q, v);
    }

    /// The frontier followed by up to `lookahead` further layers of
    /// two-qubit gates, taken from the unemitted remainder.
    fn lookahead(&self, frontier: &[usize]) -> Vec<Timestep> {
        let gates = self.circuit.gates();
        let mut pos = self.pairs_done.clone();
        let mut slices = Vec::with_capacity(self.cfg.lookahead + 1);
        let mut layer = frontier.to_vec();
        for _ in 0..=self.cfg.lookahead {
            if layer.is_empty() {
                break;
            }
            let mut step = Timestep::default();
            for &g in &layer {
                let (a, b) = gates[g].pair().unwrap();
                step.push(g, a, b);
                pos[a] += 1;
                pos[b] += 1;
            }
            slices.push(step);
            layer.clear();
            for q in 0..self.circuit.num_qubits() {
                let Some(&g) = self.pairs_on[q].get(pos[q]) else {
                    continue;
                };
                let (a, b) = gates[g].pair().unwrap();
                let other = if a == q { b } else { a };
                if other > q && self.pairs_on[other].get(pos[other]) == Some(&g) {
                    layer.push(g);
                }
            }
            layer.sort_unstable();
        }
        slices
    }

    fn apply_swap(&mut self, a: usize, b: usize) {
        self.out.push(Gate::swap(a, b));
        self.mapping.swap_nodes(a, b);
        self.origin.swap(a, b);
        let t = self.node_time[a].max(self.node_time[b]) + 1;
        self.node_time[a] = t;
        self.node_time[b] = t;
        self.swaps += 1;
    }
}
