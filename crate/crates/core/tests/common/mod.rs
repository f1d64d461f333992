//! Reference simulator for tests: dense unitaries assembled with nalgebra from
//! gate definitions written out here, independent of the library kernels.
#![allow(dead_code)]

use dqc1::{BqpCircuit, Circuit, Dqc1Instance, Gate, GateKind};
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C;

const S2: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn bit(width: usize, index: usize, wire: usize) -> bool {
    (index >> (width - 1 - wire)) & 1 == 1
}

fn flip(width: usize, index: usize, wire: usize) -> usize {
    index ^ (1 << (width - 1 - wire))
}

fn one_qubit(kind: GateKind) -> [[C; 2]; 2] {
    let z = C::new(0.0, 0.0);
    let o = C::new(1.0, 0.0);
    let i = C::new(0.0, 1.0);
    let w = C::from_polar(1.0, std::f64::consts::FRAC_PI_4);
    match kind {
        GateKind::H => [[o * S2, o * S2], [o * S2, -o * S2]],
        GateKind::X => [[z, o], [o, z]],
        GateKind::Y => [[z, -i], [i, z]],
        GateKind::Z => [[o, z], [z, -o]],
        GateKind::S => [[o, z], [z, i]],
        GateKind::Sdg => [[o, z], [z, -i]],
        GateKind::T => [[o, z], [z, w]],
        GateKind::Tdg => [[o, z], [z, w.conj()]],
        other => panic!("{other:?} is not a one-qubit gate"),
    }
}

/// Full `2^w x 2^w` matrix of one gate; wire 0 is the most significant bit.
pub fn full_gate(width: usize, gate: &Gate) -> DMatrix<C> {
    let dim = 1 << width;
    let mut u = DMatrix::<C>::zeros(dim, dim);
    let ctl = gate.controls();
    let tgt = gate.targets();
    for col in 0..dim {
        match gate.kind() {
            GateKind::CX | GateKind::CCX | GateKind::MCX => {
                let fire = ctl.iter().all(|&c| bit(width, col, c));
                let row = if fire { flip(width, col, tgt[0]) } else { col };
                u[(row, col)] = C::new(1.0, 0.0);
            }
            GateKind::MCX0 => {
                let fire = ctl.iter().all(|&c| !bit(width, col, c));
                let row = if fire { flip(width, col, tgt[0]) } else { col };
                u[(row, col)] = C::new(1.0, 0.0);
            }
            GateKind::CZ => {
                let both = bit(width, col, ctl[0]) && bit(width, col, tgt[0]);
                u[(col, col)] = C::new(if both { -1.0 } else { 1.0 }, 0.0);
            }
            GateKind::Swap => {
                let (a, b) = (tgt[0], tgt[1]);
                let row = if bit(width, col, a) != bit(width, col, b) {
                    flip(width, flip(width, col, a), b)
                } else {
                    col
                };
                u[(row, col)] = C::new(1.0, 0.0);
            }
            kind => {
                let m = one_qubit(kind);
                let t = tgt[0];
                let b = usize::from(bit(width, col, t));
                let base = if b == 1 { flip(width, col, t) } else { col };
                u[(base, col)] += m[0][b];
                u[(flip(width, base, t), col)] += m[1][b];
            }
        }
    }
    u
}

pub fn unitary(circuit: &Circuit) -> DMatrix<C> {
    let dim = 1 << circuit.wires();
    circuit.gates().iter().fold(DMatrix::identity(dim, dim), |acc, g| {
        full_gate(circuit.wires(), g) * acc
    })
}

/// Output density matrix of the instance with the clean wire pure or maximally mixed.
pub fn output_density(instance: &Dqc1Instance, clean_mixed: bool) -> DMatrix<C> {
    let w = instance.wires();
    let dim = 1 << w;
    let weight = 1.0 / (1u64 << if clean_mixed { w } else { w - 1 }) as f64;
    let mut rho = DMatrix::<C>::zeros(dim, dim);
    for i in 0..dim {
        if clean_mixed || !bit(w, i, 0) {
            rho[(i, i)] = C::new(weight, 0.0);
        }
    }
    let u = unitary(instance.circuit());
    &u * rho * u.adjoint()
}

/// Marginal over the first `m` wires.
pub fn prefix_distribution(rho: &DMatrix<C>, width: usize, m: usize) -> Vec<f64> {
    let mut p = vec![0.0; 1 << m];
    for i in 0..1 << width {
        p[i >> (width - m)] += rho[(i, i)].re;
    }
    p
}

pub fn dqc1_distribution(instance: &Dqc1Instance) -> Vec<f64> {
    let rho = output_density(instance, false);
    prefix_distribution(&rho, instance.wires(), instance.measured_width())
}

/// Probability that the output wire reads 0 when the circuit acts on `|0...0>`.
pub fn accept_probability(bqp: &BqpCircuit) -> f64 {
    let w = bqp.circuit().wires();
    let mut e0 = DVector::<C>::zeros(1 << w);
    e0[0] = C::new(1.0, 0.0);
    let psi = unitary(bqp.circuit()) * e0;
    psi.iter()
        .enumerate()
        .filter(|(i, _)| !bit(w, *i, bqp.output_wire()))
        .map(|(_, a)| a.norm_sqr())
        .sum()
}
