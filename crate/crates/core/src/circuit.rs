//! Gates, circuits and the two problem instances built from them.
//!
//! Wire 0 is the most significant bit of a basis index, so the bitstring of an
//! index read left to right lists wires `0, 1, ..., wires - 1`. The measured prefix
//! of a DQC1 instance is therefore the top `m` bits.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GateKind {
    H,
    X,
    Y,
    Z,
    S,
    Sdg,
    T,
    Tdg,
    CX,
    CZ,
    Swap,
    CCX,
    /// X on the target when every control reads 1.
    MCX,
    /// X on the target when every control reads 0.
    MCX0,
}

impl GateKind {
    pub const ALL: [GateKind; 14] = [
        GateKind::H,
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::S,
        GateKind::Sdg,
        GateKind::T,
        GateKind::Tdg,
        GateKind::CX,
        GateKind::CZ,
        GateKind::Swap,
        GateKind::CCX,
        GateKind::MCX,
        GateKind::MCX0,
    ];

    pub fn mnemonic(self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::Y => "y",
            GateKind::Z => "z",
            GateKind::S => "s",
            GateKind::Sdg => "sdg",
            GateKind::T => "t",
            GateKind::Tdg => "tdg",
            GateKind::CX => "cx",
            GateKind::CZ => "cz",
            GateKind::Swap => "swap",
            GateKind::CCX => "ccx",
            GateKind::MCX => "mcx",
            GateKind::MCX0 => "mcx0",
        }
    }

    pub fn from_mnemonic(s: &str) -> Option<GateKind> {
        let lower = s.to_ascii_lowercase();
        GateKind::ALL.into_iter().find(|k| k.mnemonic() == lower)
    }

    pub fn adjoint(self) -> GateKind {
        match self {
            GateKind::S => GateKind::Sdg,
            GateKind::Sdg => GateKind::S,
            GateKind::T => GateKind::Tdg,
            GateKind::Tdg => GateKind::T,
            k => k,
        }
    }

    /// Allowed control counts as `(min, max)`.
    fn control_arity(self) -> (usize, usize) {
        match self {
            GateKind::H
            | GateKind::X
            | GateKind::Y
            | GateKind::Z
            | GateKind::S
            | GateKind::Sdg
            | GateKind::T
            | GateKind::Tdg
            | GateKind::Swap => (0, 0),
            GateKind::CX | GateKind::CZ => (1, 1),
            GateKind::CCX => (2, 2),
            GateKind::MCX | GateKind::MCX0 => (1, usize::MAX),
        }
    }

    fn target_arity(self) -> usize {
        match self {
            GateKind::Swap => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.mnemonic())
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CircuitError {
    #[error("{kind} expects {expected} control wire(s), got {got}")]
    ControlArity {
        kind: GateKind,
        expected: String,
        got: usize,
    },
    #[error("{kind} expects {expected} target wire(s), got {got}")]
    TargetArity {
        kind: GateKind,
        expected: usize,
        got: usize,
    },
    #[error("wire {wire} used more than once in a single gate")]
    DuplicateWire { wire: usize },
    #[error("wire {wire} out of range for a {wires}-wire circuit")]
    WireOutOfRange { wire: usize, wires: usize },
    #[error("a circuit needs at least one wire")]
    NoWires,
    #[error("mixed register width {mixed} does not match {wires} wires (expected wires = 1 + mixed)")]
    MixedWidth { mixed: usize, wires: usize },
    #[error("measured width {measured} must lie in 1..={max}")]
    MeasuredWidth { measured: usize, max: usize },
    #[error("output wire {wire} out of range for {wires} wires")]
    OutputWire { wire: usize, wires: usize },
    #[error("error tolerance delta = {delta} must lie strictly between 0 and 1/2")]
    Delta { delta: f64 },
}

/// A named elementary operation on specific wires.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Gate {
    kind: GateKind,
    controls: Vec<usize>,
    targets: Vec<usize>,
}

impl Gate {
    pub fn new(kind: GateKind, controls: Vec<usize>, targets: Vec<usize>) -> Result<Self, CircuitError> {
        let (lo, hi) = kind.control_arity();
        if controls.len() < lo || controls.len() > hi {
            let expected = if lo == hi {
                lo.to_string()
            } else {
                format!("at least {lo}")
            };
            return Err(CircuitError::ControlArity {
                kind,
                expected,
                got: controls.len(),
            });
        }
        if targets.len() != kind.target_arity() {
            return Err(CircuitError::TargetArity {
                kind,
                expected: kind.target_arity(),
                got: targets.len(),
            });
        }
        let mut seen: Vec<usize> = Vec::with_capacity(controls.len() + targets.len());
        for &w in controls.iter().chain(targets.iter()) {
            if seen.contains(&w) {
                return Err(CircuitError::DuplicateWire { wire: w });
            }
            seen.push(w);
        }
        Ok(Gate {
            kind,
            controls,
            targets,
        })
    }

    fn single(kind: GateKind, q: usize) -> Gate {
        Gate {
            kind,
            controls: vec![],
            targets: vec![q],
        }
    }

    pub fn h(q: usize) -> Gate {
        Gate::single(GateKind::H, q)
    }
    pub fn x(q: usize) -> Gate {
        Gate::single(GateKind::X, q)
    }
    pub fn y(q: usize) -> Gate {
        Gate::single(GateKind::Y, q)
    }
    pub fn z(q: usize) -> Gate {
        Gate::single(GateKind::Z, q)
    }
    pub fn s(q: usize) -> Gate {
        Gate::single(GateKind::S, q)
    }
    pub fn sdg(q: usize) -> Gate {
        Gate::single(GateKind::Sdg, q)
    }
    pub fn t(q: usize) -> Gate {
        Gate::single(GateKind::T, q)
    }
    pub fn tdg(q: usize) -> Gate {
        Gate::single(GateKind::Tdg, q)
    }

    pub fn cx(control: usize, target: usize) -> Result<Gate, CircuitError> {
        Gate::new(GateKind::CX, vec![control], vec![target])
    }
    pub fn cz(control: usize, target: usize) -> Result<Gate, CircuitError> {
        Gate::new(GateKind::CZ, vec![control], vec![target])
    }
    pub fn swap(a: usize, b: usize) -> Result<Gate, CircuitError> {
        Gate::new(GateKind::Swap, vec![], vec![a, b])
    }
    pub fn ccx(c1: usize, c2: usize, target: usize) -> Result<Gate, CircuitError> {
        Gate::new(GateKind::CCX, vec![c1, c2], vec![target])
    }
    pub fn mcx(controls: Vec<usize>, target: usize) -> Result<Gate, CircuitError> {
        Gate::new(GateKind::MCX, controls, vec![target])
    }
    pub fn mcx0(controls: Vec<usize>, target: usize) -> Result<Gate, CircuitError> {
        Gate::new(GateKind::MCX0, controls, vec![target])
    }

    pub fn kind(&self) -> GateKind {
        self.kind
    }

    pub fn controls(&self) -> &[usize] {
        &self.controls
    }

    pub fn targets(&self) -> &[usize] {
        &self.targets
    }

    /// Controls followed by targets; this is the local qubit order of [`gate_matrix`](crate::sim::gate_matrix).
    pub fn wires(&self) -> impl Iterator<Item = usize> + '_ {
        self.controls.iter().chain(self.targets.iter()).copied()
    }

    pub fn adjoint(&self) -> Gate {
        Gate {
            kind: self.kind.adjoint(),
            controls: self.controls.clone(),
            targets: self.targets.clone(),
        }
    }

    /// Same gate with every wire index passed through `f`.
    pub fn remap(&self, f: impl Fn(usize) -> usize) -> Gate {
        Gate {
            kind: self.kind,
            controls: self.controls.iter().map(|&w| f(w)).collect(),
            targets: self.targets.iter().map(|&w| f(w)).collect(),
        }
    }

    fn check_range(&self, wires: usize) -> Result<(), CircuitError> {
        match self.wires().find(|&w| w >= wires) {
            Some(wire) => Err(CircuitError::WireOutOfRange { wire, wires }),
            None => Ok(()),
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.kind.mnemonic())?;
        for w in self.wires() {
            write!(f, " {w}")?;
        }
        Ok(())
    }
}

/// Zero-controlled multi-qubit Toffoli: flips `target` exactly when every control reads 0.
pub fn build_zero_controlled_toffoli(
    n_controls: usize,
    target: usize,
    controls: &[usize],
) -> Result<Gate, CircuitError> {
    if n_controls != controls.len() {
        return Err(CircuitError::ControlArity {
            kind: GateKind::MCX0,
            expected: n_controls.to_string(),
            got: controls.len(),
        });
    }
    Gate::mcx0(controls.to_vec(), target)
}

/// Ordered gate list over a fixed number of wires.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Circuit {
    wires: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(wires: usize, gates: Vec<Gate>) -> Result<Self, CircuitError> {
        if wires == 0 {
            return Err(CircuitError::NoWires);
        }
        for g in &gates {
            g.check_range(wires)?;
        }
        Ok(Circuit { wires, gates })
    }

    pub fn empty(wires: usize) -> Result<Self, CircuitError> {
        Circuit::new(wires, Vec::new())
    }

    pub fn push(&mut self, gate: Gate) -> Result<(), CircuitError> {
        gate.check_range(self.wires)?;
        self.gates.push(gate);
        Ok(())
    }

    pub fn wires(&self) -> usize {
        self.wires
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    /// Appends every gate of `other`, whose wire `j` lands on wire `j + offset`.
    pub fn append_shifted(&mut self, other: &Circuit, offset: usize) -> Result<(), CircuitError> {
        for g in other.gates() {
            self.push(g.remap(|w| w + offset))?;
        }
        Ok(())
    }
}

/// Reverses the gate list and replaces every gate by its adjoint.
pub fn invert(circuit: &Circuit) -> Circuit {
    Circuit {
        wires: circuit.wires,
        gates: circuit.gates.iter().rev().map(Gate::adjoint).collect(),
    }
}

/// A circuit on `1 + n` wires: wire 0 starts in |0>, wires `1..=n` are maximally
/// mixed, and wires `0..m` are measured in the computational basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Dqc1Instance {
    circuit: Circuit,
    mixed_width: usize,
    measured_width: usize,
}

impl Dqc1Instance {
    pub fn new(circuit: Circuit, mixed_width: usize, measured_width: usize) -> Result<Self, CircuitError> {
        if circuit.wires() != 1 + mixed_width {
            return Err(CircuitError::MixedWidth {
                mixed: mixed_width,
                wires: circuit.wires(),
            });
        }
        if measured_width == 0 || measured_width > circuit.wires() {
            return Err(CircuitError::MeasuredWidth {
                measured: measured_width,
                max: circuit.wires(),
            });
        }
        Ok(Dqc1Instance {
            circuit,
            mixed_width,
            measured_width,
        })
    }

    /// Original one-clean-qubit model: every wire but the first is mixed, one wire measured.
    pub fn single_output(circuit: Circuit) -> Result<Self, CircuitError> {
        let n = circuit.wires() - 1;
        Dqc1Instance::new(circuit, n, 1)
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn mixed_width(&self) -> usize {
        self.mixed_width
    }

    pub fn measured_width(&self) -> usize {
        self.measured_width
    }

    pub fn wires(&self) -> usize {
        self.circuit.wires()
    }
}

/// A bounded-error decision circuit run on |0...0>, deciding on its output wire.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BqpCircuit {
    circuit: Circuit,
    output_wire: usize,
    delta: f64,
}

impl BqpCircuit {
    pub fn new(circuit: Circuit, output_wire: usize, delta: f64) -> Result<Self, CircuitError> {
        if output_wire >= circuit.wires() {
            return Err(CircuitError::OutputWire {
                wire: output_wire,
                wires: circuit.wires(),
            });
        }
        if !(delta > 0.0 && delta < 0.5) {
            return Err(CircuitError::Delta { delta });
        }
        Ok(BqpCircuit {
            circuit,
            output_wire,
            delta,
        })
    }

    pub fn circuit(&self) -> &Circuit {
        &self.circuit
    }

    pub fn output_wire(&self) -> usize {
        self.output_wire
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn width(&self) -> usize {
        self.circuit.wires()
    }

    /// Equivalent circuit whose decision qubit is wire 0, swapping it in if needed.
    pub fn normalized(&self) -> BqpCircuit {
        if self.output_wire == 0 {
            return self.clone();
        }
        let mut circuit = self.circuit.clone();
        circuit
            .push(Gate::swap(0, self.output_wire).expect("distinct wires"))
            .expect("wires in range");
        BqpCircuit {
            circuit,
            output_wire: 0,
            delta: self.delta,
        }
    }
}
