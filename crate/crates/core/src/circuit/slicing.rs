use super::{Circuit, GateKind};

/// A set of two-qubit interactions on pairwise disjoint qubits.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Timestep {
    /// Unordered pairs stored as `(min, max)`, in circuit order.
    pub pairs: Vec<(usize, usize)>,
    /// Index into the source circuit of the gate behind each pair.
    pub gates: Vec<usize>,
}

impl Timestep {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn push(&mut self, gate: usize, a: usize, b: usize) {
        debug_assert!(!self.contains_qubit(a) && !self.contains_qubit(b));
        self.pairs.push((a.min(b), a.max(b)));
        self.gates.push(gate);
    }

    pub fn contains_qubit(&self, q: usize) -> bool {
        self.pairs.iter().any(|&(a, b)| a == q || b == q)
    }

    pub fn contains_pair(&self, a: usize, b: usize) -> bool {
        self.pairs.contains(&(a.min(b), a.max(b)))
    }
}

/// Greedy slicing of the two-qubit gates into timesteps.
///
/// Gates are visited in order. Single-qubit gates and measurements are
/// skipped; a two-qubit gate joins the open timestep unless one of its qubits
/// is already used there, in which case a new timestep is opened. A barrier
/// closes the open timestep.
pub fn slice_timesteps(circuit: &Circuit) -> Vec<Timestep> {
    let mut slices = Vec::new();
    let mut current = Timestep::default();
    let mut used = vec![false; circuit.num_qubits()];

    let mut close = |current: &mut Timestep, used: &mut Vec<bool>| {
        if !current.is_empty() {
            for &(a, b) in &current.pairs {
                used[a] = false;
                used[b] = false;
            }
            slices.push(std::mem::take(current));
        }
    };

    for (i, gate) in circuit.gates().iter().enumerate() {
        if gate.kind == GateKind::Barrier {
            close(&mut current, &mut used);
            continue;
        }
        let Some((a, b)) = gate.pair() else { continue };
        if used[a] || used[b] {
            close(&mut current, &mut used);
        }
        current.push(i, a, b);
        used[a] = true;
        used[b] = true;
    }
    close(&mut current, &mut used);
    slices
}

/// Reorders `circuit` so that two-qubit gates appear layer by layer, each
/// as early as its dependencies allow. Per-qubit gate order is kept, and
/// greedy slicing of the result yields exactly the two-qubit depth. Barriers
/// stay in place and split the reordering into independent segments.
pub fn asap_order(circuit: &Circuit) -> Circuit {
    let gates = circuit.gates();
    let mut order: Vec<usize> = Vec::with_capacity(gates.len());
    let mut layer = vec![0usize; gates.len()];
    let mut time = vec![0usize; circuit.num_qubits()];
    let mut start = 0;
    for (i, gate) in gates.iter().enumerate() {
        if gate.kind == GateKind::Barrier {
            let mut segment: Vec<usize> = (start..i).collect();
            segment.sort_by_key(|&g| layer[g]);
            order.extend(segment);
            order.push(i);
            time.fill(0);
            start = i + 1;
            continue;
        }
        let t = gate.qubits.iter().map(|&q| time[q]).max().unwrap_or(0);
        if gate.is_two_qubit() {
            layer[i] = t + 1;
            for &q in &gate.qubits {
                time[q] = t + 1;
            }
        } else {
            layer[i] = t;
        }
    }
    let mut segment: Vec<usize> = (start..gates.len()).collect();
    segment.sort_by_key(|&g| layer[g]);
    order.extend(segment);
    circuit.with_gates_unchecked(order.into_iter().map(|g| gates[g].clone()).collect())
}

/// Fraction of an `n`-qubit device's two-qubit capacity used by `step`:
/// `|pairs| / floor(n / 2)`.
///
/// Panics if `n < 2`.
pub fn density(step: &Timestep, n: usize) -> f64 {
    assert!(n >= 2, "density needs at least two qubits");
    step.len() as f64 / (n / 2) as f64
}
