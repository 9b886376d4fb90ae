//! Checks on routed circuits: architecture conformance, a symbolic replay
//! against the input, and statevector equivalence for small circuits.

mod sim;

pub use sim::{
    check_mapped_equivalence, check_routed_equivalence, equivalent_up_to_permutation,
    equivalent_with_layout, simulate, Equivalence, SimError, StateVector, DEFAULT_MAX_QUBITS,
    DEFAULT_TRIALS,
};

use std::fmt;

use crate::architecture::Architecture;
use crate::circuit::{Circuit, GateKind};
use crate::router::RoutingResult;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    /// A two-qubit gate on nodes that share no edge.
    NotAnEdge { gate: usize, a: usize, b: usize },
    /// A CX against the edge orientation of a directed architecture.
    AgainstOrientation {
        gate: usize,
        control: usize,
        target: usize,
    },
    /// An operand beyond the architecture's nodes.
    NodeOutOfRange { gate: usize, node: usize },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotAnEdge { gate, a, b } => {
                write!(f, "gate {gate}: nodes {a} and {b} are not adjacent")
            }
            Violation::AgainstOrientation {
                gate,
                control,
                target,
            } => {
                write!(
                    f,
                    "gate {gate}: cx {control} -> {target} runs against the edge orientation"
                )
            }
            Violation::NodeOutOfRange { gate, node } => {
                write!(f, "gate {gate}: node {node} does not exist")
            }
        }
    }
}

/// Result of a conformance check; empty means the circuit conforms.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConformanceReport {
    pub violations: Vec<Violation>,
}

impl ConformanceReport {
    pub fn is_pass(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Lists every gate of `c` (whose qubits are read as nodes) that `arch`
/// cannot run. With `directed_strict`, CX gates must also follow the edge
/// orientation of a directed architecture.
pub fn check_conformance(
    c: &Circuit,
    arch: &Architecture,
    directed_strict: bool,
) -> ConformanceReport {
    let mut violations = Vec::new();
    for (i, gate) in c.gates().iter().enumerate() {
        if let Some(&node) = gate.qubits.iter().find(|&&q| q >= arch.num_nodes()) {
            violations.push(Violation::NodeOutOfRange { gate: i, node });
            continue;
        }
        let Some((a, b)) = gate.pair() else { continue };
        if !arch.adjacent(a, b) {
            violations.push(Violation::NotAnEdge { gate: i, a, b });
        } else if directed_strict && gate.kind == GateKind::Cx && !arch.allows_cx(a, b) {
            violations.push(Violation::AgainstOrientation {
                gate: i,
                control: a,
                target: b,
            });
        }
    }
    ConformanceReport { violations }
}

/// Replays `result.routed` symbolically. SWAP gates move logical qubits
/// between nodes, unless they are the next pending input SWAP on both
/// qubits; every other gate, read through the current placement, must be
/// the next pending input gate on each of its qubits. Barriers are ignored.
/// Passes when all input gates are matched and the placement ends at
/// `result.final_mapping`.
pub fn check_trace_equivalence(input: &Circuit, result: &RoutingResult) -> bool {
    let gates = input.gates();
    let mut wires = vec![Vec::new(); input.num_qubits()];
    for (i, g) in gates.iter().enumerate() {
        if g.kind != GateKind::Barrier {
            for &q in &g.qubits {
                wires[q].push(i);
            }
        }
    }
    let mut next = vec![0usize; input.num_qubits()];
    let nn = result.routed.num_qubits();
    if result.initial_mapping.num_nodes() != nn
        || result.initial_mapping.num_qubits() != input.num_qubits()
    {
        return false;
    }
    let mut on: Vec<Option<usize>> = (0..nn).map(|p| result.initial_mapping.qubit(p)).collect();

    for g in result.routed.gates() {
        if g.kind == GateKind::Barrier {
            continue;
        }
        if g.kind == GateKind::Swap
            && !is_pending_swap(g.qubits[0], g.qubits[1], &on, &wires, &next, gates)
        {
            on.swap(g.qubits[0], g.qubits[1]);
            continue;
        }
        let Some(logical) = g
            .qubits
            .iter()
            .map(|&p| on[p])
            .collect::<Option<Vec<usize>>>()
        else {
            return false;
        };
        let Some(&expected) = wires[logical[0]].get(next[logical[0]]) else {
            return false;
        };
        let want = &gates[expected];
        let same = want.kind == g.kind
            && want.qubits == logical
            && want.params == g.params
            && want.clbit == g.clbit;
        if !same
            || logical
                .iter()
                .any(|&q| wires[q].get(next[q]) != Some(&expected))
        {
            return false;
        }
        for &q in &logical {
            next[q] += 1;
        }
    }

    let consumed = next.iter().zip(&wires).all(|(&n, w)| n == w.len());
    let ended = (0..nn).all(|p| on[p] == result.final_mapping.qubit(p));
    consumed && ended
}

/// A routed SWAP on nodes `a`, `b` is an input gate when it is the next
/// pending gate on both qubits: the router emits such a gate as soon as the
/// qubits are adjacent, so it never inserts a routing swap there instead.
fn is_pending_swap(
    a: usize,
    b: usize,
    on: &[Option<usize>],
    wires: &[Vec<usize>],
    next: &[usize],
    gates: &[crate::circuit::Gate],
) -> bool {
    let (Some(qa), Some(qb)) = (on[a], on[b]) else {
        return false;
    };
    match (wires[qa].get(next[qa]), wires[qb].get(next[qb])) {
        (Some(&x), Some(&y)) => x == y && gates[x].kind == GateKind::Swap,
        _ => false,
    }
}
