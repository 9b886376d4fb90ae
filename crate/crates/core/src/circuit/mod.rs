//! Circuit intermediate representation, OpenQASM 2.0 subset I/O and
//! timestep slicing.

mod gate;
mod qasm;
mod slicing;

pub use gate::{Axis, Gate, GateKind};
pub use qasm::{emit_qasm, parse_qasm, QasmError};
pub use slicing::{asap_order, density, slice_timesteps, Timestep};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CircuitError {
    #[error("gate {kind} expects {expected} operand(s), got {got}")]
    Arity {
        kind: GateKind,
        expected: usize,
        got: usize,
    },
    #[error("gate {kind} expects {expected} parameter(s), got {got}")]
    Params {
        kind: GateKind,
        expected: usize,
        got: usize,
    },
    #[error("operand {qubit} out of range for {num_qubits}-qubit circuit")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },
    #[error("classical bit {clbit} out of range for {num_clbits} classical bits")]
    ClbitOutOfRange { clbit: usize, num_clbits: usize },
    #[error("gate {kind} repeats operand {qubit}")]
    RepeatedOperand { kind: GateKind, qubit: usize },
    #[error("measurement on qubit {0} has no classical target")]
    MissingClbit(usize),
}

/// An ordered gate list over `num_qubits` qubits of a single register.
#[derive(Debug, Clone, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    num_clbits: usize,
    register: String,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Circuit::with_clbits(num_qubits, 0)
    }

    pub fn with_clbits(num_qubits: usize, num_clbits: usize) -> Self {
        Circuit {
            num_qubits,
            num_clbits,
            register: "q".to_string(),
            gates: Vec::new(),
        }
    }

    pub fn from_gates(
        num_qubits: usize,
        num_clbits: usize,
        gates: impl IntoIterator<Item = Gate>,
    ) -> Result<Self, CircuitError> {
        let mut circuit = Circuit::with_clbits(num_qubits, num_clbits);
        for gate in gates {
            circuit.try_push(gate)?;
        }
        Ok(circuit)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn num_clbits(&self) -> usize {
        self.num_clbits
    }

    pub fn register(&self) -> &str {
        &self.register
    }

    pub fn set_register(&mut self, name: impl Into<String>) {
        self.register = name.into();
    }

    pub fn qubit_name(&self, qubit: usize) -> String {
        format!("{}[{}]", self.register, qubit)
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn into_gates(self) -> Vec<Gate> {
        self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn validate(&self, gate: &Gate) -> Result<(), CircuitError> {
        if let Some(expected) = gate.kind.arity() {
            if gate.qubits.len() != expected {
                return Err(CircuitError::Arity {
                    kind: gate.kind,
                    expected,
                    got: gate.qubits.len(),
                });
            }
        }
        let expected = gate.kind.param_count();
        if gate.params.len() != expected {
            return Err(CircuitError::Params {
                kind: gate.kind,
                expected,
                got: gate.params.len(),
            });
        }
        for (i, &q) in gate.qubits.iter().enumerate() {
            if q >= self.num_qubits {
                return Err(CircuitError::QubitOutOfRange {
                    qubit: q,
                    num_qubits: self.num_qubits,
                });
            }
            if gate.qubits[..i].contains(&q) {
                return Err(CircuitError::RepeatedOperand {
                    kind: gate.kind,
                    qubit: q,
                });
            }
        }
        if gate.kind == GateKind::Measure {
            match gate.clbit {
                None => return Err(CircuitError::MissingClbit(gate.qubits[0])),
                Some(c) if c >= self.num_clbits => {
                    return Err(CircuitError::ClbitOutOfRange {
                        clbit: c,
                        num_clbits: self.num_clbits,
                    })
                }
                Some(_) => {}
            }
        }
        Ok(())
    }

    pub fn try_push(&mut self, gate: Gate) -> Result<(), CircuitError> {
        self.validate(&gate)?;
        self.gates.push(gate);
        Ok(())
    }

    /// Appends a gate, panicking if it is malformed for this circuit.
    pub fn push(&mut self, gate: Gate) -> &mut Self {
        if let Err(e) = self.try_push(gate) {
            panic!("invalid gate: {e}");
        }
        self
    }

    pub fn count_kind(&self, kind: GateKind) -> usize {
        self.gates.iter().filter(|g| g.kind == kind).count()
    }

    pub fn two_qubit_count(&self) -> usize {
        self.gates.iter().filter(|g| g.is_two_qubit()).count()
    }

    /// Length of the longest dependency chain made of gates selected by
    /// `counts`. Unselected gates are transparent: they neither add depth nor
    /// order anything.
    pub fn depth_where(&self, counts: impl Fn(&Gate) -> bool) -> usize {
        let mut level = vec![0usize; self.num_qubits];
        let mut depth = 0;
        for gate in &self.gates {
            if !counts(gate) {
                continue;
            }
            let next = gate.qubits.iter().map(|&q| level[q]).max().unwrap_or(0) + 1;
            for &q in &gate.qubits {
                level[q] = next;
            }
            depth = depth.max(next);
        }
        depth
    }

    /// Depth counting only CNOT gates.
    pub fn cx_depth(&self) -> usize {
        self.depth_where(|g| g.kind == GateKind::Cx)
    }

    /// Depth counting every gate except barriers.
    pub fn depth(&self) -> usize {
        self.depth_where(|g| g.kind != GateKind::Barrier)
    }

    /// Qubits touched by at least one gate, in ascending order.
    pub fn active_qubits(&self) -> Vec<usize> {
        let mut used = vec![false; self.num_qubits];
        for gate in &self.gates {
            for &q in &gate.qubits {
                used[q] = true;
            }
        }
        (0..self.num_qubits).filter(|&q| used[q]).collect()
    }

    /// A copy of this circuit with a new gate list, keeping registers.
    pub(crate) fn with_gates_unchecked(&self, gates: Vec<Gate>) -> Circuit {
        Circuit {
            num_qubits: self.num_qubits,
            num_clbits: self.num_clbits,
            register: self.register.clone(),
            gates,
        }
    }

    /// Per-qubit gate index lists, in circuit order.
    pub fn wires(&self) -> Vec<Vec<usize>> {
        let mut wires = vec![Vec::new(); self.num_qubits];
        for (i, gate) in self.gates.iter().enumerate() {
            for &q in &gate.qubits {
                wires[q].push(i);
            }
        }
        wires
    }
}
