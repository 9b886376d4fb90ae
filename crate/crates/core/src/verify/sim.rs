use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::circuit::{Circuit, Gate, GateKind};
use crate::placement::Mapping;
use crate::router::RoutingResult;

/// Largest register simulated unless a caller asks for more.
pub const DEFAULT_MAX_QUBITS: usize = 12;
/// Random product states tried per equivalence check.
pub const DEFAULT_TRIALS: usize = 8;
const TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("{qubits} qubits exceed the simulation limit of {limit}")]
    TooManyQubits { qubits: usize, limit: usize },
    #[error("measurement on qubit {0} cannot be simulated as a unitary")]
    Measurement(usize),
    #[error("layouts must map {expected} qubits onto distinct wires below {wires}")]
    Layout { expected: usize, wires: usize },
}

type Mat2 = [[Complex64; 2]; 2];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn phase(theta: f64) -> Complex64 {
    Complex64::from_polar(1.0, theta)
}

fn u3(theta: f64, phi: f64, lambda: f64) -> Mat2 {
    let (s, co) = (theta / 2.0).sin_cos();
    [
        [c(co, 0.0), -phase(lambda) * s],
        [phase(phi) * s, phase(phi + lambda) * co],
    ]
}

fn diag(a: Complex64, b: Complex64) -> Mat2 {
    let z = c(0.0, 0.0);
    [[a, z], [z, b]]
}

/// Matrix of a single-qubit unitary, basis order |0>, |1>.
fn matrix(gate: &Gate) -> Mat2 {
    let p = &gate.params;
    let (one, zero) = (c(1.0, 0.0), c(0.0, 0.0));
    let quarter = std::f64::consts::FRAC_PI_4;
    match gate.kind {
        GateKind::H => {
            let h = c(FRAC_1_SQRT_2, 0.0);
            [[h, h], [h, -h]]
        }
        GateKind::X => [[zero, one], [one, zero]],
        GateKind::Y => [[zero, c(0.0, -1.0)], [c(0.0, 1.0), zero]],
        GateKind::Z => diag(one, -one),
        GateKind::Rx => {
            let (s, co) = (p[0] / 2.0).sin_cos();
            [[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]]
        }
        GateKind::Ry => {
            let (s, co) = (p[0] / 2.0).sin_cos();
            [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]]
        }
        GateKind::Rz => diag(phase(-p[0] / 2.0), phase(p[0] / 2.0)),
        GateKind::T => diag(one, phase(quarter)),
        GateKind::Tdg => diag(one, phase(-quarter)),
        GateKind::S => diag(one, c(0.0, 1.0)),
        GateKind::Sdg => diag(one, c(0.0, -1.0)),
        GateKind::U1 => diag(one, phase(p[0])),
        GateKind::U2 => u3(std::f64::consts::FRAC_PI_2, p[0], p[1]),
        GateKind::U3 => u3(p[0], p[1], p[2]),
        k => unreachable!("{k} is not a single-qubit unitary"),
    }
}

/// Dense state of `n` qubits; qubit `i` is bit `i` of the basis index.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex64>,
}

impl StateVector {
    /// |0...0> on `num_qubits` qubits, up to [`DEFAULT_MAX_QUBITS`].
    pub fn zero(num_qubits: usize) -> Result<Self, SimError> {
        Self::zero_with_limit(num_qubits, DEFAULT_MAX_QUBITS)
    }

    pub fn zero_with_limit(num_qubits: usize, limit: usize) -> Result<Self, SimError> {
        if num_qubits > limit {
            return Err(SimError::TooManyQubits {
                qubits: num_qubits,
                limit,
            });
        }
        let mut amps = vec![c(0.0, 0.0); 1 << num_qubits];
        amps[0] = c(1.0, 0.0);
        Ok(StateVector { num_qubits, amps })
    }

    /// Tensor product of single-qubit states, `qubits[i]` on qubit `i`.
    pub fn product(qubits: &[[Complex64; 2]], limit: usize) -> Result<Self, SimError> {
        let mut s = Self::zero_with_limit(qubits.len(), limit)?;
        for (i, amp) in s.amps.iter_mut().enumerate() {
            *amp = qubits
                .iter()
                .enumerate()
                .map(|(q, v)| v[(i >> q) & 1])
                .product();
        }
        Ok(s)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    fn apply_1q(&mut self, q: usize, m: &Mat2) {
        let bit = 1 << q;
        for i in 0..self.amps.len() {
            if i & bit == 0 {
                let (a, b) = (self.amps[i], self.amps[i | bit]);
                self.amps[i] = m[0][0] * a + m[0][1] * b;
                self.amps[i | bit] = m[1][0] * a + m[1][1] * b;
            }
        }
    }

    /// Applies `gate`, whose operands index this state's qubits.
    pub fn apply(&mut self, gate: &Gate) -> Result<(), SimError> {
        match gate.kind {
            GateKind::Barrier => {}
            GateKind::Measure => return Err(SimError::Measurement(gate.qubits[0])),
            GateKind::Cx => {
                let (cb, tb) = (1 << gate.qubits[0], 1 << gate.qubits[1]);
                for i in 0..self.amps.len() {
                    if i & cb != 0 && i & tb == 0 {
                        self.amps.swap(i, i | tb);
                    }
                }
            }
            GateKind::Cz => {
                let both = (1 << gate.qubits[0]) | (1 << gate.qubits[1]);
                for (i, amp) in self.amps.iter_mut().enumerate() {
                    if i & both == both {
                        *amp = -*amp;
                    }
                }
            }
            GateKind::Swap => {
                let (ab, bb) = (1 << gate.qubits[0], 1 << gate.qubits[1]);
                for i in 0..self.amps.len() {
                    if i & ab != 0 && i & bb == 0 {
                        self.amps.swap(i, i ^ ab ^ bb);
                    }
                }
            }
            _ => self.apply_1q(gate.qubits[0], &matrix(gate)),
        }
        Ok(())
    }

    pub fn run(&mut self, c: &Circuit) -> Result<(), SimError> {
        c.gates().iter().try_for_each(|g| self.apply(g))
    }
}

/// State `c` produces from |0...0>. Fails beyond [`DEFAULT_MAX_QUBITS`]
/// qubits or on measurement.
pub fn simulate(c: &Circuit) -> Result<StateVector, SimError> {
    let mut s = StateVector::zero(c.num_qubits())?;
    s.run(c)?;
    Ok(s)
}

/// Outcome of an equivalence check: the smallest overlap seen over the
/// trial states.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Equivalence {
    pub equivalent: bool,
    pub fidelity: f64,
}

fn random_qubit(rng: &mut ChaCha8Rng) -> [Complex64; 2] {
    let cos_theta: f64 = rng.gen_range(-1.0..=1.0);
    let theta = cos_theta.acos();
    let phi = rng.gen_range(0.0..std::f64::consts::TAU);
    [
        c((theta / 2.0).cos(), 0.0),
        phase(phi) * (theta / 2.0).sin(),
    ]
}

/// Compares `reference` with `other` on `trials` random product inputs.
/// Reference qubit `q` enters `other` on wire `initial[q]` and leaves on
/// wire `final_[q]`; wires of `other` outside these layouts start in |0>
/// and must end in |0>. `other` may have at most `limit` wires.
pub fn equivalent_with_layout(
    reference: &Circuit,
    other: &Circuit,
    initial: &[usize],
    final_: &[usize],
    trials: usize,
    seed: u64,
    limit: usize,
) -> Result<Equivalence, SimError> {
    let (n, w) = (reference.num_qubits(), other.num_qubits());
    let distinct = |l: &[usize]| {
        let mut seen = vec![false; w];
        l.len() == n
            && l.iter()
                .all(|&x| x < w && !std::mem::replace(&mut seen[x], true))
    };
    if !distinct(initial) || !distinct(final_) {
        return Err(SimError::Layout {
            expected: n,
            wires: w,
        });
    }
    if w > limit {
        return Err(SimError::TooManyQubits { qubits: w, limit });
    }
    let zero = [c(1.0, 0.0), c(0.0, 0.0)];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut fidelity = f64::INFINITY;
    for _ in 0..trials.max(1) {
        let input: Vec<_> = (0..n).map(|_| random_qubit(&mut rng)).collect();
        let mut expected = StateVector::product(&input, limit)?;
        expected.run(reference)?;

        let mut wires = vec![zero; w];
        for (q, &x) in initial.iter().enumerate() {
            wires[x] = input[q];
        }
        let mut actual = StateVector::product(&wires, limit)?;
        actual.run(other)?;

        let embedded = embed(&expected, final_, w);
        fidelity = fidelity.min(embedded.inner(&actual).norm());
    }
    Ok(Equivalence {
        equivalent: fidelity > 1.0 - TOLERANCE,
        fidelity,
    })
}

/// Spreads the qubits of `s` over `w` wires, qubit `q` onto `layout[q]`,
/// with the remaining wires in |0>.
fn embed(s: &StateVector, layout: &[usize], w: usize) -> StateVector {
    let mut amps = vec![c(0.0, 0.0); 1 << w];
    for (i, &a) in s.amps.iter().enumerate() {
        let j = layout
            .iter()
            .enumerate()
            .fold(0, |acc, (q, &x)| acc | (((i >> q) & 1) << x));
        amps[j] = a;
    }
    StateVector {
        num_qubits: w,
        amps,
    }
}

/// Whether `c2` followed by relabelling its wires matches `c1`: qubit `q`
/// of `c1` is compared with wire `perm[q]` of `c2`, both starting from the
/// same random product states.
pub fn equivalent_up_to_permutation(
    c1: &Circuit,
    c2: &Circuit,
    perm: &[usize],
) -> Result<Equivalence, SimError> {
    let identity: Vec<usize> = (0..c1.num_qubits()).collect();
    equivalent_with_layout(
        c1,
        c2,
        &identity,
        perm,
        DEFAULT_TRIALS,
        0x5eed,
        DEFAULT_MAX_QUBITS,
    )
}

/// Statevector check of a routed (and possibly synthesized) circuit
/// `hardware` against `input`, using the mappings in `result`. Only nodes
/// that `hardware` touches or that hold a logical qubit are simulated, at
/// most `limit` of them.
pub fn check_routed_equivalence(
    input: &Circuit,
    result: &RoutingResult,
    hardware: &Circuit,
    seed: u64,
    limit: usize,
) -> Result<Equivalence, SimError> {
    check_mapped_equivalence(
        input,
        hardware,
        &result.initial_mapping,
        &result.final_mapping,
        seed,
        limit,
    )
}

/// As [`check_routed_equivalence`], with the placement given directly:
/// qubit `q` starts on node `initial.node(q)` and ends on `final_.node(q)`.
/// Qubits absent from both mappings get an idle wire of their own.
pub fn check_mapped_equivalence(
    input: &Circuit,
    hardware: &Circuit,
    initial_mapping: &Mapping,
    final_mapping: &Mapping,
    seed: u64,
    limit: usize,
) -> Result<Equivalence, SimError> {
    let nn = hardware.num_qubits();
    let fits = |m: &Mapping| m.num_nodes() == nn && m.num_qubits() == input.num_qubits();
    if !fits(initial_mapping) || !fits(final_mapping) {
        return Err(SimError::Layout {
            expected: input.num_qubits(),
            wires: nn,
        });
    }
    let mut used = vec![false; nn];
    for g in hardware.gates() {
        for &p in &g.qubits {
            used[p] = true;
        }
    }
    for (_, p) in initial_mapping.pairs().chain(final_mapping.pairs()) {
        used[p] = true;
    }
    let mut compact = vec![usize::MAX; nn];
    let mut wires = 0;
    for p in 0..nn {
        if used[p] {
            compact[p] = wires;
            wires += 1;
        }
    }
    // Qubits without gates are never placed; give each an idle wire.
    let mut idle = wires;
    let mut initial = Vec::with_capacity(input.num_qubits());
    let mut final_ = Vec::with_capacity(input.num_qubits());
    for q in 0..input.num_qubits() {
        match (initial_mapping.node(q), final_mapping.node(q)) {
            (Some(a), Some(b)) => {
                initial.push(compact[a]);
                final_.push(compact[b]);
            }
            _ => {
                initial.push(idle);
                final_.push(idle);
                idle += 1;
            }
        }
    }
    if idle > limit {
        return Err(SimError::TooManyQubits {
            qubits: idle,
            limit,
        });
    }
    let mut small = Circuit::new(idle);
    for g in hardware.gates() {
        small.push(g.remapped(|p| compact[p]));
    }
    equivalent_with_layout(
        input,
        &small,
        &initial,
        &final_,
        DEFAULT_TRIALS,
        seed,
        limit,
    )
}
