use num_complex::Complex;

use crate::circuit::{Gate, GateKind};
use crate::num::Scalar;

/// 2x2 matrix of an uncontrolled single-qubit gate, or `None` for multi-qubit kinds.
pub fn single_qubit_matrix<T: Scalar>(kind: GateKind) -> Option<[[Complex<T>; 2]; 2]> {
    let z = Complex::new(T::zero(), T::zero());
    let o = Complex::new(T::one(), T::zero());
    let i = Complex::new(T::zero(), T::one());
    let r = T::FRAC_1_SQRT_2();
    let m = match kind {
        GateKind::H => [
            [Complex::new(r, T::zero()), Complex::new(r, T::zero())],
            [Complex::new(r, T::zero()), Complex::new(-r, T::zero())],
        ],
        GateKind::X => [[z, o], [o, z]],
        GateKind::Y => [[z, -i], [i, z]],
        GateKind::Z => [[o, z], [z, -o]],
        GateKind::S => [[o, z], [z, i]],
        GateKind::Sdg => [[o, z], [z, -i]],
        GateKind::T => [[o, z], [z, Complex::new(r, r)]],
        GateKind::Tdg => [[o, z], [z, Complex::new(r, -r)]],
        _ => return None,
    };
    Some(m)
}

/// Dense unitary of `gate` on its own wires, in the order controls then targets,
/// first listed wire as the most significant local bit. Row-major, `2^k x 2^k`.
pub fn gate_matrix<T: Scalar>(gate: &Gate) -> Vec<Complex<T>> {
    let k = gate.controls().len() + gate.targets().len();
    let dim = 1usize << k;
    let mut m = vec![Complex::new(T::zero(), T::zero()); dim * dim];
    if let Some(u) = single_qubit_matrix::<T>(gate.kind()) {
        for (r, row) in u.iter().enumerate() {
            for (c, v) in row.iter().enumerate() {
                m[r * 2 + c] = *v;
            }
        }
        return m;
    }
    let nc = gate.controls().len();
    let one = Complex::new(T::one(), T::zero());
    for col in 0..dim {
        let ctrl = col >> (k - nc);
        let all_ones = ctrl == (1 << nc) - 1;
        let row = match gate.kind() {
            GateKind::CX | GateKind::CCX | GateKind::MCX if all_ones => col ^ 1,
            GateKind::MCX0 if ctrl == 0 => col ^ 1,
            GateKind::Swap => ((col & 1) << 1) | (col >> 1),
            _ => col,
        };
        let phase = if gate.kind() == GateKind::CZ && col == 3 {
            -one
        } else {
            one
        };
        m[row * dim + col] = phase;
    }
    m
}
