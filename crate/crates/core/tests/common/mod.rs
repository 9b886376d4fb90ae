//! Helpers shared by the integration tests: a dense-matrix oracle written
//! independently of the library's simulator, seeded random circuits, and the
//! four-qubit worked example.

#![allow(dead_code, clippy::needless_range_loop)]

use std::f64::consts::PI;

use num_complex::Complex64 as C;
use qroute::circuit::{parse_qasm, Circuit, Gate, GateKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Matrix = Vec<Vec<C>>;

pub fn identity(dim: usize) -> Matrix {
    (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| {
                    if i == j {
                        C::new(1.0, 0.0)
                    } else {
                        C::new(0.0, 0.0)
                    }
                })
                .collect()
        })
        .collect()
}

pub fn matmul(a: &Matrix, b: &Matrix) -> Matrix {
    let n = a.len();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

/// 2x2 matrix of a single-qubit gate, built from Euler-angle formulas.
fn one_qubit(kind: GateKind, p: &[f64]) -> [[C; 2]; 2] {
    let e = |t: f64| C::new(t.cos(), t.sin());
    let r = |x: f64| C::new(x, 0.0);
    // Every gate below is expressed as U(theta, phi, lambda) up to phase.
    let u = |theta: f64, phi: f64, lambda: f64| {
        let (ct, st) = ((theta / 2.0).cos(), (theta / 2.0).sin());
        [
            [r(ct), -e(lambda) * st],
            [e(phi) * st, e(phi + lambda) * ct],
        ]
    };
    match kind {
        GateKind::H => u(PI / 2.0, 0.0, PI),
        GateKind::X => u(PI, 0.0, PI),
        GateKind::Y => u(PI, PI / 2.0, PI / 2.0),
        GateKind::Z => u(0.0, 0.0, PI),
        GateKind::S => u(0.0, 0.0, PI / 2.0),
        GateKind::Sdg => u(0.0, 0.0, -PI / 2.0),
        GateKind::T => u(0.0, 0.0, PI / 4.0),
        GateKind::Tdg => u(0.0, 0.0, -PI / 4.0),
        GateKind::Rx => u(p[0], -PI / 2.0, PI / 2.0),
        GateKind::Ry => u(p[0], 0.0, 0.0),
        GateKind::Rz | GateKind::U1 => u(0.0, 0.0, p[0]),
        GateKind::U2 => u(PI / 2.0, p[0], p[1]),
        GateKind::U3 => u(p[0], p[1], p[2]),
        k => panic!("{k} is not a single-qubit gate"),
    }
}

/// Full unitary of `gate` on `n` qubits, by explicit action on each basis
/// state (qubit `i` is bit `i` of the index).
pub fn gate_matrix(gate: &Gate, n: usize) -> Matrix {
    let dim = 1 << n;
    let mut m = vec![vec![C::new(0.0, 0.0); dim]; dim];
    let bit = |i: usize, q: usize| (i >> q) & 1;
    for col in 0..dim {
        match gate.kind {
            GateKind::Barrier => m[col][col] = C::new(1.0, 0.0),
            GateKind::Cx => {
                let (c, t) = (gate.qubits[0], gate.qubits[1]);
                let row = if bit(col, c) == 1 {
                    col ^ (1 << t)
                } else {
                    col
                };
                m[row][col] = C::new(1.0, 0.0);
            }
            GateKind::Cz => {
                let (a, b) = (gate.qubits[0], gate.qubits[1]);
                let sign = if bit(col, a) & bit(col, b) == 1 {
                    -1.0
                } else {
                    1.0
                };
                m[col][col] = C::new(sign, 0.0);
            }
            GateKind::Swap => {
                let (a, b) = (gate.qubits[0], gate.qubits[1]);
                let mut row = col & !(1 << a) & !(1 << b);
                row |= bit(col, a) << b;
                row |= bit(col, b) << a;
                m[row][col] = C::new(1.0, 0.0);
            }
            k => {
                let q = gate.qubits[0];
                let u = one_qubit(k, &gate.params);
                let b = bit(col, q);
                for out in 0..2 {
                    let row = (col & !(1 << q)) | (out << q);
                    m[row][col] += u[out][b];
                }
            }
        }
    }
    m
}

/// Unitary of a whole circuit.
pub fn unitary(c: &Circuit) -> Matrix {
    let n = c.num_qubits();
    c.gates()
        .iter()
        .fold(identity(1 << n), |acc, g| matmul(&gate_matrix(g, n), &acc))
}

/// |tr(A^dagger B)| / dim, which is 1 exactly when A and B agree up to a
/// global phase.
pub fn phase_overlap(a: &Matrix, b: &Matrix) -> f64 {
    let dim = a.len();
    let tr: C = (0..dim)
        .flat_map(|i| (0..dim).map(move |j| (i, j)))
        .map(|(i, j)| a[i][j].conj() * b[i][j])
        .sum();
    tr.norm() / dim as f64
}

pub fn same_up_to_phase(a: &Matrix, b: &Matrix) -> bool {
    phase_overlap(a, b) > 1.0 - 1e-9
}

const ONE_QUBIT: [GateKind; 13] = [
    GateKind::H,
    GateKind::X,
    GateKind::Y,
    GateKind::Z,
    GateKind::Rx,
    GateKind::Ry,
    GateKind::Rz,
    GateKind::T,
    GateKind::Tdg,
    GateKind::S,
    GateKind::Sdg,
    GateKind::U1,
    GateKind::U3,
];

/// Random circuit over `n` qubits with `layers` layers. Each layer pairs
/// off a random subset of qubits into CX/CZ gates and gives some of the
/// rest a random single-qubit gate, so the circuit has at most `layers`
/// two-qubit layers.
pub fn random_circuit(n: usize, layers: usize, seed: u64) -> Circuit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut c = Circuit::new(n);
    for _ in 0..layers {
        let mut qubits: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            qubits.swap(i, rng.gen_range(0..=i));
        }
        let pairs = rng.gen_range(1..=n / 2);
        for k in 0..pairs {
            let (a, b) = (qubits[2 * k], qubits[2 * k + 1]);
            c.push(if rng.gen_bool(0.8) {
                Gate::cx(a, b)
            } else {
                Gate::cz(a, b)
            });
        }
        for &q in &qubits[2 * pairs..] {
            if rng.gen_bool(0.5) {
                c.push(random_one_qubit(&mut rng, q));
            }
        }
    }
    c
}

pub fn random_one_qubit(rng: &mut impl Rng, q: usize) -> Gate {
    let kind = ONE_QUBIT[rng.gen_range(0..ONE_QUBIT.len())];
    let params = (0..kind.param_count())
        .map(|_| rng.gen_range(-PI..PI))
        .collect();
    Gate::new(kind, vec![q], params)
}

pub fn worked_example() -> Circuit {
    parse_qasm(include_str!("../data/worked_example.qasm")).expect("fixture parses")
}
