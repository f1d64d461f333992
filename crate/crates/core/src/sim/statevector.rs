use num_complex::Complex;

use super::{check_cap, single_qubit_matrix, wire_mask, Caps, SimError};
use crate::circuit::{Circuit, Gate, GateKind};
use crate::num::{compensated_sum, Scalar};

/// Dense pure state over `wires` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector<T> {
    wires: usize,
    amps: Vec<Complex<T>>,
}

impl<T: Scalar> StateVector<T> {
    /// Computational basis state with the given index (wire 0 is the MSB).
    pub fn basis(wires: usize, index: usize) -> Self {
        let mut amps = vec![Complex::new(T::zero(), T::zero()); 1 << wires];
        amps[index] = Complex::new(T::one(), T::zero());
        StateVector { wires, amps }
    }

    /// Basis state from one bit per wire.
    pub fn from_bits(bits: &[bool]) -> Self {
        let index = bits.iter().fold(0usize, |acc, &b| (acc << 1) | usize::from(b));
        StateVector::basis(bits.len(), index)
    }

    pub fn wires(&self) -> usize {
        self.wires
    }

    pub fn amplitudes(&self) -> &[Complex<T>] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> T {
        compensated_sum(self.amps.iter().map(|a| a.norm_sqr()))
    }

    pub fn run(&mut self, circuit: &Circuit) {
        for g in circuit.gates() {
            self.apply(g);
        }
    }

    pub fn apply(&mut self, gate: &Gate) {
        let wires = self.wires;
        if let Some(u) = single_qubit_matrix::<T>(gate.kind()) {
            let m = wire_mask(wires, gate.targets()[0]);
            for i in 0..self.amps.len() {
                if i & m == 0 {
                    let j = i | m;
                    let (a, b) = (self.amps[i], self.amps[j]);
                    self.amps[i] = u[0][0] * a + u[0][1] * b;
                    self.amps[j] = u[1][0] * a + u[1][1] * b;
                }
            }
            return;
        }
        let cmask = gate.controls().iter().fold(0, |acc, &c| acc | wire_mask(wires, c));
        match gate.kind() {
            GateKind::CX | GateKind::CCX | GateKind::MCX | GateKind::MCX0 => {
                let t = wire_mask(wires, gate.targets()[0]);
                let fire = if gate.kind() == GateKind::MCX0 { 0 } else { cmask };
                for i in 0..self.amps.len() {
                    if i & t == 0 && i & cmask == fire {
                        self.amps.swap(i, i | t);
                    }
                }
            }
            GateKind::CZ => {
                let both = cmask | wire_mask(wires, gate.targets()[0]);
                for (i, a) in self.amps.iter_mut().enumerate() {
                    if i & both == both {
                        *a = -*a;
                    }
                }
            }
            GateKind::Swap => {
                let a = wire_mask(wires, gate.targets()[0]);
                let b = wire_mask(wires, gate.targets()[1]);
                for i in 0..self.amps.len() {
                    if i & a != 0 && i & b == 0 {
                        self.amps.swap(i, i ^ a ^ b);
                    }
                }
            }
            _ => unreachable!("single-qubit kinds handled above"),
        }
    }

    /// Probability of each outcome on wires `0..m`, indexed by the outcome bits.
    pub fn prefix_marginal(&self, m: usize) -> Vec<T> {
        let shift = self.wires - m;
        let mut buckets: Vec<Vec<T>> = vec![Vec::new(); 1 << m];
        for (i, a) in self.amps.iter().enumerate() {
            buckets[i >> shift].push(a.norm_sqr());
        }
        buckets.into_iter().map(compensated_sum).collect()
    }

    /// Probability that measuring `wire` yields 0.
    pub fn prob_zero(&self, wire: usize) -> T {
        let m = wire_mask(self.wires, wire);
        compensated_sum(
            self.amps
                .iter()
                .enumerate()
                .filter(|(i, _)| i & m == 0)
                .map(|(_, a)| a.norm_sqr()),
        )
    }
}

/// Runs `circuit` on the computational basis state given by `basis_input`.
pub fn run_statevector<T: Scalar>(circuit: &Circuit, basis_input: &[bool]) -> Result<StateVector<T>, SimError> {
    if basis_input.len() != circuit.wires() {
        return Err(SimError::InputWidth {
            got: basis_input.len(),
            wires: circuit.wires(),
        });
    }
    check_cap("state vector wires", circuit.wires(), Caps::default().statevector_wires)?;
    let mut sv = StateVector::from_bits(basis_input);
    sv.run(circuit);
    Ok(sv)
}
