mod common;

use dqc1::random::random_circuit;
use dqc1::sim::gate_matrix;
use dqc1::{format_circuit, invert, parse_circuit, Circuit, Gate, GateKind};
use dqc1::{StateVector, StateVector32};
use nalgebra::DMatrix;
use num_complex::Complex64;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn arbitrary(seed: u64, wires: usize, depth: usize) -> Circuit {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    random_circuit(&mut rng, wires, depth, &GateKind::ALL)
}

fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn format_then_parse_is_identity(seed in any::<u64>(), wires in 1usize..7, depth in 0usize..30) {
        let c = arbitrary(seed, wires, depth);
        prop_assert_eq!(parse_circuit(&format_circuit(&c)).unwrap(), c);
    }

    #[test]
    fn inverse_is_an_involution(seed in any::<u64>(), wires in 1usize..7, depth in 0usize..30) {
        let c = arbitrary(seed, wires, depth);
        prop_assert_eq!(invert(&invert(&c)), c);
    }

    #[test]
    fn circuit_then_inverse_returns_basis_state(seed in any::<u64>(), wires in 1usize..6, depth in 0usize..25) {
        let c = arbitrary(seed, wires, depth);
        let inv = invert(&c);
        for x in 0..1usize << wires {
            let mut sv = StateVector::basis(wires, x);
            sv.run(&c);
            sv.run(&inv);
            for (i, a) in sv.amplitudes().iter().enumerate() {
                let want = if i == x { 1.0 } else { 0.0 };
                prop_assert!((a - Complex64::new(want, 0.0)).norm() <= 1e-10);
            }
        }
        let product = common::unitary(&inv) * common::unitary(&c);
        let dim = 1 << wires;
        prop_assert!(max_abs(&(product - DMatrix::identity(dim, dim))) <= 1e-10);
    }

    #[test]
    fn norm_preserved_after_every_gate(seed in any::<u64>(), wires in 1usize..7, depth in 1usize..30, x in any::<usize>()) {
        let c = arbitrary(seed, wires, depth);
        let mut sv = StateVector::basis(wires, x % (1 << wires));
        for g in c.gates() {
            sv.apply(g);
            prop_assert!((sv.norm_sqr() - 1.0).abs() <= 1e-12);
        }
    }

    #[test]
    fn state_vector_matches_reference_columns(seed in any::<u64>(), wires in 1usize..6, depth in 0usize..25) {
        let c = arbitrary(seed, wires, depth);
        let u = common::unitary(&c);
        for x in 0..1usize << wires {
            let mut sv = StateVector::basis(wires, x);
            sv.run(&c);
            for (i, a) in sv.amplitudes().iter().enumerate() {
                prop_assert!((a - u[(i, x)]).norm() <= 1e-10);
            }
        }
    }
}

fn sample_gates() -> Vec<Gate> {
    let mut gates: Vec<Gate> = [
        GateKind::H,
        GateKind::X,
        GateKind::Y,
        GateKind::Z,
        GateKind::S,
        GateKind::Sdg,
        GateKind::T,
        GateKind::Tdg,
    ]
    .into_iter()
    .map(|k| Gate::new(k, vec![], vec![1]).unwrap())
    .collect();
    gates.extend([
        Gate::cx(2, 0).unwrap(),
        Gate::cz(0, 3).unwrap(),
        Gate::swap(3, 1).unwrap(),
        Gate::ccx(3, 0, 2).unwrap(),
        Gate::mcx(vec![0, 2, 1], 3).unwrap(),
        Gate::mcx0(vec![3, 1], 0).unwrap(),
        Gate::mcx0(vec![2], 1).unwrap(),
    ]);
    gates
}

#[test]
fn gate_matrices_are_unitary() {
    for g in sample_gates() {
        let k = g.wires().count();
        let dim = 1 << k;
        let u = DMatrix::from_row_slice(dim, dim, &gate_matrix::<f64>(&g));
        let err = max_abs(&(&u * u.adjoint() - DMatrix::identity(dim, dim)));
        assert!(err <= 1e-12, "{g}: {err}");
    }
}

#[test]
fn gate_matrices_match_reference_definitions() {
    for g in sample_gates() {
        let order: Vec<usize> = g.wires().collect();
        let local = g.remap(|w| order.iter().position(|&o| o == w).unwrap());
        let dim = 1 << order.len();
        let u = DMatrix::from_row_slice(dim, dim, &gate_matrix::<f64>(&g));
        let reference = common::full_gate(order.len(), &local);
        assert!(max_abs(&(u - reference)) <= 1e-12, "{g}");
    }
}

#[test]
fn single_precision_tracks_double() {
    let c = arbitrary(11, 5, 40);
    for x in [0, 7, 31] {
        let mut a = StateVector32::basis(5, x);
        let mut b = StateVector::basis(5, x);
        a.run(&c);
        b.run(&c);
        for (p, q) in a.amplitudes().iter().zip(b.amplitudes()) {
            assert!((f64::from(p.re) - q.re).abs() < 1e-5 && (f64::from(p.im) - q.im).abs() < 1e-5);
        }
    }
}
