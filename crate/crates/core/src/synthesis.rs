//! Hardware gate-set synthesis for routed circuits: SWAP decomposition,
//! CNOT reorientation on directed devices, and a small peephole clean-up.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use thiserror::Error;

use crate::architecture::Architecture;
use crate::circuit::{Axis, Circuit, Gate, GateKind};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthesisError {
    #[error("cx {control},{target} is not on an architecture edge")]
    NotAnEdge { control: usize, target: usize },
}

/// Replaces every `swap a,b` by three CNOTs. On a directed architecture the
/// outer two follow the native orientation of the edge.
pub fn decompose_swaps(c: &Circuit, arch: Option<&Architecture>) -> Circuit {
    let mut gates = Vec::with_capacity(c.len());
    for gate in c.gates() {
        if gate.kind != GateKind::Swap {
            gates.push(gate.clone());
            continue;
        }
        let (mut a, mut b) = (gate.qubits[0], gate.qubits[1]);
        if let Some(arch) = arch {
            if !arch.allows_cx(a, b) && arch.allows_cx(b, a) {
                std::mem::swap(&mut a, &mut b);
            }
        }
        gates.extend([Gate::cx(a, b), Gate::cx(b, a), Gate::cx(a, b)]);
    }
    c.with_gates_unchecked(gates)
}

/// Rewrites each CNOT that runs against the edge orientation of `arch` as
/// the reversed CNOT conjugated by Hadamards on both qubits.
pub fn redirect_cnots(c: &Circuit, arch: &Architecture) -> Result<Circuit, SynthesisError> {
    let mut gates = Vec::with_capacity(c.len());
    for gate in c.gates() {
        if gate.kind != GateKind::Cx {
            gates.push(gate.clone());
            continue;
        }
        let (ctrl, tgt) = (gate.qubits[0], gate.qubits[1]);
        if arch.allows_cx(ctrl, tgt) {
            gates.push(gate.clone());
        } else if arch.allows_cx(tgt, ctrl) {
            gates.extend([
                Gate::h(ctrl),
                Gate::h(tgt),
                Gate::cx(tgt, ctrl),
                Gate::h(ctrl),
                Gate::h(tgt),
            ]);
        } else {
            return Err(SynthesisError::NotAnEdge {
                control: ctrl,
                target: tgt,
            });
        }
    }
    Ok(c.with_gates_unchecked(gates))
}

/// Rotation axis and angle of a single-qubit gate equal, up to global phase,
/// to a rotation about a Pauli axis.
fn axis_angle(gate: &Gate) -> Option<(Axis, f64)> {
    let axis = gate.kind.rotation_axis()?;
    let angle = match gate.kind {
        GateKind::Z | GateKind::X | GateKind::Y => PI,
        GateKind::T => FRAC_PI_4,
        GateKind::Tdg => -FRAC_PI_4,
        GateKind::S => FRAC_PI_2,
        GateKind::Sdg => -FRAC_PI_2,
        _ => gate.params[0],
    };
    Some((axis, angle))
}

/// Angle reduced to `(-pi, pi]`.
fn wrap(angle: f64) -> f64 {
    let a = angle.rem_euclid(TAU);
    if a > PI {
        a - TAU
    } else {
        a
    }
}

fn is_zero_angle(angle: f64) -> bool {
    wrap(angle).abs() < 1e-12
}

fn rotation(axis: Axis, angle: f64, qubit: usize) -> Gate {
    let kind = match axis {
        Axis::X => GateKind::Rx,
        Axis::Y => GateKind::Ry,
        Axis::Z => GateKind::Rz,
    };
    Gate::rotation(kind, wrap(angle), qubit)
}

/// Whether single-qubit gate `g` on `q` commutes with the two-qubit gate
/// `other` (which acts on `q`).
fn commutes_through(g: &Gate, q: usize, other: &Gate) -> bool {
    let Some((axis, _)) = axis_angle(g) else {
        return false;
    };
    match other.kind {
        GateKind::Cx if other.qubits[0] == q => axis == Axis::Z,
        GateKind::Cx => axis == Axis::X,
        GateKind::Cz => axis == Axis::Z,
        _ => false,
    }
}

/// One left-to-right pass. Each gate looks back along its wires for a
/// partner it can cancel or fuse with, stepping over gates it commutes
/// with. Returns whether anything changed.
fn cleanup_pass(gates: &mut [Option<Gate>], num_qubits: usize) -> bool {
    let mut changed = false;
    // Live gate indices per wire, in order.
    let mut wires: Vec<Vec<usize>> = vec![Vec::new(); num_qubits];
    for i in 0..gates.len() {
        let Some(gate) = gates[i].clone() else {
            continue;
        };

        if gate.kind.is_single_qubit_unitary() {
            let q = gate.qubits[0];
            if let Some((_, angle)) = axis_angle(&gate) {
                if is_zero_angle(angle) {
                    gates[i] = None;
                    changed = true;
                    continue;
                }
            }
            let mut merged = false;
            for pos in (0..wires[q].len()).rev() {
                let j = wires[q][pos];
                let prev = gates[j].as_ref().unwrap();
                if prev.kind.is_single_qubit_unitary() {
                    if gate.kind == GateKind::H && prev.kind == GateKind::H {
                        gates[j] = None;
                        gates[i] = None;
                        wires[q].remove(pos);
                        merged = true;
                    } else if let (Some((a1, t1)), Some((a2, t2))) =
                        (axis_angle(prev), axis_angle(&gate))
                    {
                        if a1 == a2 {
                            gates[i] = None;
                            if is_zero_angle(t1 + t2) {
                                gates[j] = None;
                                wires[q].remove(pos);
                            } else {
                                gates[j] = Some(rotation(a1, t1 + t2, q));
                            }
                            merged = true;
                        }
                    }
                    break;
                }
                if !(prev.is_two_qubit() && commutes_through(&gate, q, prev)) {
                    break;
                }
            }
            if merged {
                changed = true;
            } else {
                wires[q].push(i);
            }
            continue;
        }

        if matches!(gate.kind, GateKind::Cx | GateKind::Cz) {
            let (a, b) = (gate.qubits[0], gate.qubits[1]);
            // Walk back on wire `a` to the nearest two-qubit gate, checking
            // that everything passed over commutes with `gate`.
            let partner = |q: usize| -> Option<usize> {
                for &j in wires[q].iter().rev() {
                    let prev = gates[j].as_ref().unwrap();
                    if prev.is_two_qubit() {
                        return Some(j);
                    }
                    if !commutes_through(prev, q, &gate) {
                        return None;
                    }
                }
                None
            };
            let same = |prev: &Gate| {
                prev.kind == gate.kind
                    && (prev.qubits == gate.qubits
                        || (gate.kind == GateKind::Cz
                            && prev.qubits[0] == b
                            && prev.qubits[1] == a))
            };
            if let (Some(j), Some(k)) = (partner(a), partner(b)) {
                if j == k && same(gates[j].as_ref().unwrap()) {
                    gates[i] = None;
                    gates[j] = None;
                    wires[a].retain(|&x| x != j);
                    wires[b].retain(|&x| x != j);
                    changed = true;
                    continue;
                }
            }
        }
        for &q in &gate.qubits {
            wires[q].push(i);
        }
    }
    changed
}

/// Peephole clean-up to a fixpoint:
///
/// * identical adjacent CNOTs (or CZs) cancel;
/// * adjacent Hadamards on a wire cancel;
/// * adjacent rotations about the same axis fuse, and rotations by a
///   multiple of a full turn are dropped;
/// * Z rotations are moved past CNOT controls and CZ, and X rotations past
///   CNOT targets, when that brings partners together.
///
/// Only removes gates or merges single-qubit gates, so conformance to an
/// architecture is preserved. Results are equal up to global phase.
pub fn cleanup(c: &Circuit) -> Circuit {
    let mut gates: Vec<Option<Gate>> = c.gates().iter().cloned().map(Some).collect();
    for _ in 0..1000 {
        if !cleanup_pass(&mut gates, c.num_qubits()) {
            break;
        }
        gates.retain(Option::is_some);
    }
    c.with_gates_unchecked(gates.into_iter().flatten().collect())
}

/// Decomposes swaps, reorients CNOTs on directed devices, then cleans up.
pub fn synthesize(routed: &Circuit, arch: &Architecture) -> Result<Circuit, SynthesisError> {
    let mut c = decompose_swaps(routed, Some(arch));
    if arch.is_directed() {
        c = redirect_cnots(&c, arch)?;
    }
    Ok(cleanup(&c))
}
