use std::fmt;

/// The gate set understood by the parser, router and simulator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum GateKind {
    H,
    X,
    Y,
    Z,
    Rx,
    Ry,
    Rz,
    T,
    Tdg,
    S,
    Sdg,
    U1,
    U2,
    U3,
    Cx,
    Cz,
    Swap,
    Measure,
    Barrier,
}

/// Rotation axis of a single-qubit gate that is diagonal in some Pauli basis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    X,
    Y,
    Z,
}

impl GateKind {
    pub const ALL: [GateKind; 19] = [
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
        GateKind::U2,
        GateKind::U3,
        GateKind::Cx,
        GateKind::Cz,
        GateKind::Swap,
        GateKind::Measure,
        GateKind::Barrier,
    ];

    pub fn mnemonic(self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::Rx => "rx",
            GateKind::Ry => "ry",
            GateKind::Rz => "rz",
            GateKind::T => "t",
            GateKind::Tdg => "tdg",
            GateKind::S => "s",
            GateKind::Sdg => "sdg",
            GateKind::U1 => "u1",
            GateKind::U2 => "u2",
            GateKind::U3 => "u3",
            GateKind::Cx => "cx",
            GateKind::Cz => "cz",
            GateKind::Swap => "swap",
            GateKind::Measure => "measure",
            GateKind::Barrier => "barrier",
        }
    }

    /// Looks up a unitary gate by its OpenQASM name. `measure` and `barrier`
    /// are statements rather than gate applications and are not returned here.
    pub fn from_mnemonic(name: &str) -> Option<GateKind> {
        let kind = match name {
            "h" => GateKind::H,
            "x" => GateKind::X,
            "y" => GateKind::Y,
            "z" => GateKind::Z,
            "rx" => GateKind::Rx,
            "ry" => GateKind::Ry,
            "rz" => GateKind::Rz,
            "t" => GateKind::T,
            "tdg" => GateKind::Tdg,
            "s" => GateKind::S,
            "sdg" => GateKind::Sdg,
            "u1" => GateKind::U1,
            "u2" => GateKind::U2,
            "u3" | "U" => GateKind::U3,
            "cx" | "CX" => GateKind::Cx,
            "cz" => GateKind::Cz,
            "swap" => GateKind::Swap,
            _ => return None,
        };
        Some(kind)
    }

    pub fn param_count(self) -> usize {
        match self {
            GateKind::Rx | GateKind::Ry | GateKind::Rz | GateKind::U1 => 1,
            GateKind::U2 => 2,
            GateKind::U3 => 3,
            _ => 0,
        }
    }

    pub fn is_two_qubit(self) -> bool {
        matches!(self, GateKind::Cx | GateKind::Cz | GateKind::Swap)
    }

    /// Number of operands, or `None` for the variadic barrier.
    pub fn arity(self) -> Option<usize> {
        match self {
            GateKind::Barrier => None,
            k if k.is_two_qubit() => Some(2),
            _ => Some(1),
        }
    }

    /// Single-qubit unitary (excludes measurement and barrier).
    pub fn is_single_qubit_unitary(self) -> bool {
        self.arity() == Some(1) && self != GateKind::Measure
    }

    /// The Pauli axis the gate rotates about, when it is a pure rotation up
    /// to global phase.
    pub fn rotation_axis(self) -> Option<Axis> {
        match self {
            GateKind::Z
            | GateKind::Rz
            | GateKind::T
            | GateKind::Tdg
            | GateKind::S
            | GateKind::Sdg
            | GateKind::U1 => Some(Axis::Z),
            GateKind::X | GateKind::Rx => Some(Axis::X),
            GateKind::Y | GateKind::Ry => Some(Axis::Y),
            _ => None,
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.mnemonic())
    }
}

/// One gate application. Operands index the owning circuit's qubits; for
/// `cx` the first operand is the control.
#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub qubits: Vec<usize>,
    pub params: Vec<f64>,
    /// Classical bit written by a measurement.
    pub clbit: Option<usize>,
}

impl Gate {
    pub fn new(kind: GateKind, qubits: Vec<usize>, params: Vec<f64>) -> Self {
        Gate {
            kind,
            qubits,
            params,
            clbit: None,
        }
    }

    pub fn single(kind: GateKind, qubit: usize) -> Self {
        Gate::new(kind, vec![qubit], Vec::new())
    }

    pub fn rotation(kind: GateKind, angle: f64, qubit: usize) -> Self {
        Gate::new(kind, vec![qubit], vec![angle])
    }

    pub fn h(qubit: usize) -> Self {
        Gate::single(GateKind::H, qubit)
    }

    pub fn rz(angle: f64, qubit: usize) -> Self {
        Gate::rotation(GateKind::Rz, angle, qubit)
    }

    pub fn rx(angle: f64, qubit: usize) -> Self {
        Gate::rotation(GateKind::Rx, angle, qubit)
    }

    pub fn cx(control: usize, target: usize) -> Self {
        Gate::new(GateKind::Cx, vec![control, target], Vec::new())
    }

    pub fn cz(a: usize, b: usize) -> Self {
        Gate::new(GateKind::Cz, vec![a, b], Vec::new())
    }

    pub fn swap(a: usize, b: usize) -> Self {
        Gate::new(GateKind::Swap, vec![a, b], Vec::new())
    }

    pub fn measure(qubit: usize, clbit: usize) -> Self {
        Gate {
            kind: GateKind::Measure,
            qubits: vec![qubit],
            params: Vec::new(),
            clbit: Some(clbit),
        }
    }

    pub fn barrier(qubits: Vec<usize>) -> Self {
        Gate::new(GateKind::Barrier, qubits, Vec::new())
    }

    pub fn is_two_qubit(&self) -> bool {
        self.kind.is_two_qubit()
    }

    /// Operand pair of a two-qubit gate.
    pub fn pair(&self) -> Option<(usize, usize)> {
        if self.is_two_qubit() {
            Some((self.qubits[0], self.qubits[1]))
        } else {
            None
        }
    }

    /// Same gate with every operand passed through `f`.
    pub fn remapped(&self, mut f: impl FnMut(usize) -> usize) -> Gate {
        Gate {
            kind: self.kind,
            qubits: self.qubits.iter().map(|&q| f(q)).collect(),
            params: self.params.clone(),
            clbit: self.clbit,
        }
    }
}
