use num_complex::Complex;

use super::{gate_matrix, wire_mask};
use crate::circuit::{Circuit, Gate};
use crate::num::{compensated_sum, Scalar};

/// Dense `2^wires x 2^wires` density operator, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix<T> {
    wires: usize,
    dim: usize,
    data: Vec<Complex<T>>,
}

impl<T: Scalar> DensityMatrix<T> {
    /// Diagonal state: `clean_pure` selects `|0><0|` on wire 0 (otherwise `I/2`),
    /// every other wire is `I/2`.
    pub fn one_clean_qubit(wires: usize, clean_pure: bool) -> Self {
        let dim = 1usize << wires;
        let mut data = vec![Complex::new(T::zero(), T::zero()); dim * dim];
        let mixed = if clean_pure { wires - 1 } else { wires };
        let weight = T::one() / T::lit((1u64 << mixed) as f64);
        let clean = wire_mask(wires, 0);
        for i in 0..dim {
            if !clean_pure || i & clean == 0 {
                data[i * dim + i] = Complex::new(weight, T::zero());
            }
        }
        DensityMatrix { wires, dim, data }
    }

    pub fn wires(&self) -> usize {
        self.wires
    }

    pub fn get(&self, row: usize, col: usize) -> Complex<T> {
        self.data[row * self.dim + col]
    }

    pub fn trace(&self) -> T {
        compensated_sum((0..self.dim).map(|i| self.get(i, i).re))
    }

    /// Largest `|rho - rho^dagger|` entry.
    pub fn hermiticity_error(&self) -> T {
        let mut worst = T::zero();
        for r in 0..self.dim {
            for c in r..self.dim {
                worst = worst.max((self.get(r, c) - self.get(c, r).conj()).norm());
            }
        }
        worst
    }

    /// `rho <- U rho U^dagger` with `U` the gate's unitary embedded on the full register.
    pub fn apply(&mut self, gate: &Gate) {
        let local = gate_matrix::<T>(gate);
        let wires: Vec<usize> = gate.wires().collect();
        let k = wires.len();
        let ldim = 1usize << k;
        let masks: Vec<usize> = wires.iter().map(|&w| wire_mask(self.wires, w)).collect();
        let support = masks.iter().fold(0, |a, &m| a | m);
        let local_index = |i: usize| -> usize {
            masks
                .iter()
                .fold(0usize, |acc, &m| (acc << 1) | usize::from(i & m != 0))
        };
        let scatter = |l: usize| -> usize {
            masks.iter().enumerate().fold(
                0usize,
                |acc, (pos, &m)| if l >> (k - 1 - pos) & 1 == 1 { acc | m } else { acc },
            )
        };
        // Row i of U has nonzeros only at columns sharing i's bits outside the support.
        let row_entries = |i: usize| -> Vec<(usize, Complex<T>)> {
            let li = local_index(i);
            let base = i & !support;
            (0..ldim)
                .map(|lj| (base | scatter(lj), local[li * ldim + lj]))
                .filter(|(_, v)| *v != Complex::new(T::zero(), T::zero()))
                .collect()
        };
        let rows: Vec<Vec<(usize, Complex<T>)>> = (0..self.dim).map(row_entries).collect();

        let dim = self.dim;
        let zero = Complex::new(T::zero(), T::zero());
        // left = U rho
        let mut left = vec![zero; dim * dim];
        for (i, entries) in rows.iter().enumerate() {
            for c in 0..dim {
                let mut acc = zero;
                for &(j, u) in entries {
                    acc = acc + u * self.data[j * dim + c];
                }
                left[i * dim + c] = acc;
            }
        }
        // out = left U^dagger, (U^dagger)[j][c] = conj(U[c][j])
        for r in 0..dim {
            for (c, entries) in rows.iter().enumerate() {
                let mut acc = zero;
                for &(j, u) in entries {
                    acc = acc + left[r * dim + j] * u.conj();
                }
                self.data[r * dim + c] = acc;
            }
        }
    }

    pub fn evolve(&mut self, circuit: &Circuit) {
        for g in circuit.gates() {
            self.apply(g);
        }
    }

    /// Outcome probabilities of wires `0..m`, read from the diagonal.
    pub fn prefix_marginal(&self, m: usize) -> Vec<T> {
        let shift = self.wires - m;
        let mut buckets: Vec<Vec<T>> = vec![Vec::new(); 1 << m];
        for i in 0..self.dim {
            buckets[i >> shift].push(self.get(i, i).re);
        }
        buckets.into_iter().map(compensated_sum).collect()
    }
}
