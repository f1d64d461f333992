//! Random circuits and instances for property checks and benchmarks.

use rand::seq::IndexedRandom;
use rand::Rng;

use crate::circuit::{Circuit, Dqc1Instance, Gate, GateKind};

/// The `{H, T, CX}` gate set.
pub const H_T_CX: [GateKind; 3] = [GateKind::H, GateKind::T, GateKind::CX];

/// A circuit of `depth` gates drawn uniformly from `palette`, with uniformly
/// chosen distinct wires. Kinds that do not fit on `wires` wires are skipped.
pub fn random_circuit<R: Rng + ?Sized>(rng: &mut R, wires: usize, depth: usize, palette: &[GateKind]) -> Circuit {
    let usable: Vec<GateKind> = palette.iter().copied().filter(|k| min_wires(*k) <= wires).collect();
    assert!(!usable.is_empty(), "no gate in the palette fits on {wires} wires");
    let gates = (0..depth)
        .map(|_| {
            let kind = *usable.choose(rng).expect("non-empty");
            let arity = match kind {
                GateKind::MCX | GateKind::MCX0 => rng.random_range(2..=wires),
                k => min_wires(k),
            };
            let mut ws = rand::seq::index::sample(rng, wires, arity).into_vec();
            let (controls, targets) = match kind {
                GateKind::Swap => (Vec::new(), ws),
                _ => {
                    let t = ws.pop().expect("arity >= 1");
                    (ws, vec![t])
                }
            };
            Gate::new(kind, controls, targets).expect("distinct in-range wires")
        })
        .collect();
    Circuit::new(wires, gates).expect("gates fit")
}

fn min_wires(kind: GateKind) -> usize {
    match kind {
        GateKind::CX | GateKind::CZ | GateKind::Swap | GateKind::MCX | GateKind::MCX0 => 2,
        GateKind::CCX => 3,
        _ => 1,
    }
}

/// A DQC1_m instance on `2..=max_wires` wires over every gate kind, with `m`
/// drawn from `measured` (values that do not fit are clipped to the width).
pub fn random_instance<R: Rng + ?Sized>(rng: &mut R, max_wires: usize, measured: &[usize]) -> Dqc1Instance {
    let wires = rng.random_range(2..=max_wires);
    let depth = rng.random_range(1..=4 * wires);
    let circuit = random_circuit(rng, wires, depth, &GateKind::ALL);
    let m = (*measured.choose(rng).expect("non-empty")).min(wires);
    Dqc1Instance::new(circuit, wires - 1, m).expect("valid widths")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    #[test]
    fn respects_palette_and_width() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for wires in 1..6 {
            let c = random_circuit(&mut rng, wires, 30, &H_T_CX);
            assert_eq!(c.wires(), wires);
            assert!(c.gates().iter().all(|g| H_T_CX.contains(&g.kind())));
            if wires == 1 {
                assert!(c.gates().iter().all(|g| g.kind() != GateKind::CX));
            }
        }
        for _ in 0..50 {
            let inst = random_instance(&mut rng, 6, &[1, 2, 3]);
            assert!(inst.wires() <= 6 && inst.measured_width() <= 3);
        }
    }
}
