//! Compiling a bounded-error circuit into a one-clean-qubit instance.
//!
//! For `V` on `n` wires with acceptance probability `q`, the emitted instance on
//! `1 + n` wires is
//!
//! ```text
//! mcx0 1 .. n 0     flip the clean wire iff the mixed register is |0...0>
//! V on 1..=n        wire j of V is wire j + 1 here
//! cx 1 0            copy V's decision wire onto the clean wire
//! x 0
//! ```
//!
//! The branch `x = 0^n` leaves the clean wire equal to V's decision bit, every
//! other branch leaves its complement, which gives
//! `P(a=0) = q / 2^(n-1) + 1/2 - 1/2^n`.

use serde::{Deserialize, Serialize};

use crate::circuit::{build_zero_controlled_toffoli, BqpCircuit, Circuit, Dqc1Instance, Gate};
use crate::num::{half, pow2, Field, Scalar};
use crate::sim::{bqp_accept_prob_capped, check_cap, dqc1_exact_capped, Caps, StateVector};
use crate::Error;

/// Gates the reduction adds around `V`.
pub const REDUCTION_OVERHEAD: usize = 3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReductionArtifact {
    pub source: BqpCircuit,
    pub instance: Dqc1Instance,
    pub q: f64,
    pub predicted_p0: f64,
}

/// `q / 2^(n-1) + 1/2 - 1/2^n`.
pub fn predicted_p0<T: Field>(q: T, n: u32) -> T {
    let n = i64::from(n);
    q * pow2::<T>(1 - n) + half::<T>() - pow2::<T>(-n)
}

/// Inverse of [`predicted_p0`]: the acceptance probability implied by `P(a=0)`.
pub fn implied_q<T: Field>(p0: T, n: u32) -> T {
    let n = i64::from(n);
    (p0 - half::<T>() + pow2::<T>(-n)) * pow2::<T>(n - 1)
}

/// Bias `P(a=0) - 1/2 = (2q - 1) / 2^n`.
pub fn predicted_bias<T: Field>(q: T, n: u32) -> T {
    let two = T::one() + T::one();
    (two * q - T::one()) * pow2::<T>(-i64::from(n))
}

/// The DQC1 circuit for `bqp` (decision wire first normalized to wire 0).
pub fn reduction_circuit(bqp: &BqpCircuit) -> Result<Circuit, Error> {
    let bqp = bqp.normalized();
    let n = bqp.width();
    let controls: Vec<usize> = (1..=n).collect();
    let mut circuit = Circuit::new(1 + n, vec![build_zero_controlled_toffoli(n, 0, &controls)?])?;
    circuit.append_shifted(bqp.circuit(), 1)?;
    circuit.push(Gate::cx(1, 0)?)?;
    circuit.push(Gate::x(0))?;
    Ok(circuit)
}

pub fn reduce_bqp_to_dqc1(bqp: &BqpCircuit) -> Result<ReductionArtifact, Error> {
    reduce_bqp_to_dqc1_capped(bqp, &Caps::default())
}

pub fn reduce_bqp_to_dqc1_capped(bqp: &BqpCircuit, caps: &Caps) -> Result<ReductionArtifact, Error> {
    let n = bqp.width();
    check_cap("mixed register width", n, caps.enumeration_mixed)?;
    let instance = Dqc1Instance::new(reduction_circuit(bqp)?, n, 1)?;
    let q = bqp_accept_prob_capped::<f64>(bqp, caps)?;
    Ok(ReductionArtifact {
        source: bqp.clone(),
        instance,
        q,
        predicted_p0: predicted_p0(q, n as u32),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub n: usize,
    pub q: f64,
    #[serde(rename = "predictedP0")]
    pub predicted_p0: f64,
    #[serde(rename = "simulatedP0")]
    pub simulated_p0: f64,
    pub residual: f64,
}

/// `|P(a=0)| of the simulated reduction minus the closed form`, with the pieces.
pub fn check_identity(bqp: &BqpCircuit, caps: &Caps) -> Result<IdentityCheck, Error> {
    let art = reduce_bqp_to_dqc1_capped(bqp, caps)?;
    let dist = dqc1_exact_capped::<f64>(&art.instance, caps)?;
    let simulated = dist.probability(0);
    Ok(IdentityCheck {
        n: bqp.width(),
        q: art.q,
        predicted_p0: art.predicted_p0,
        simulated_p0: simulated,
        residual: (simulated - art.predicted_p0).abs(),
    })
}

pub fn verify_identity(bqp: &BqpCircuit) -> Result<f64, Error> {
    check_identity(bqp, &Caps::default()).map(|c| c.residual)
}

/// Per-branch view of the reduction.
#[derive(Debug, Clone, PartialEq)]
pub struct BranchProfile<T> {
    /// `P(a=0 | x)` of the reduced instance for every mixed basis state `x`.
    pub conditional_p0: Vec<T>,
    /// `f(x)`: probability that `V|x>` has its decision wire at 0.
    pub source_accept: Vec<T>,
}

/// Conditional outcome probabilities per mixed-register branch, alongside the
/// source circuit's acceptance probability from each basis input.
pub fn branch_profile<T: Scalar>(bqp: &BqpCircuit, caps: &Caps) -> Result<BranchProfile<T>, Error> {
    let art = reduce_bqp_to_dqc1_capped(bqp, caps)?;
    let bqp = bqp.normalized();
    let n = bqp.width();
    let mut conditional_p0 = Vec::with_capacity(1 << n);
    let mut source_accept = Vec::with_capacity(1 << n);
    for x in 0..1usize << n {
        conditional_p0.push(crate::sim::branch_marginal::<T>(&art.instance, false, x)[0]);
        let mut sv = StateVector::<T>::basis(n, x);
        sv.run(bqp.circuit());
        source_accept.push(sv.prob_zero(0));
    }
    Ok(BranchProfile {
        conditional_p0,
        source_accept,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::GateKind;
    use num_rational::Ratio;

    fn bqp(n: usize, gates: Vec<Gate>) -> BqpCircuit {
        BqpCircuit::new(Circuit::new(n, gates).unwrap(), 0, 0.125).unwrap()
    }

    #[test]
    fn predicted_values() {
        assert_eq!(predicted_p0(1.0, 3), 0.625);
        assert_eq!(predicted_p0(0.0, 3), 0.375);
        for n in 1..10 {
            assert_eq!(predicted_p0(0.5, n), 0.5);
        }
        assert_eq!(predicted_p0(Ratio::new(1i64, 1), 2), Ratio::new(3, 4));
        assert_eq!(predicted_p0(Ratio::new(0i64, 1), 2), Ratio::new(1, 4));
        assert_eq!(implied_q(0.5625, 3), 0.75);
    }

    #[test]
    fn artifacts_for_closed_form_sources() {
        let a = reduce_bqp_to_dqc1(&bqp(2, vec![])).unwrap();
        assert_eq!(a.predicted_p0, 0.75);
        let b = reduce_bqp_to_dqc1(&bqp(2, vec![Gate::x(0)])).unwrap();
        assert_eq!(b.predicted_p0, 0.25);
        let c = reduce_bqp_to_dqc1(&bqp(1, vec![Gate::h(0)])).unwrap();
        assert!((c.predicted_p0 - 0.5).abs() < 1e-15);
    }

    #[test]
    fn canonical_layout() {
        let src = bqp(3, vec![Gate::h(0), Gate::cx(0, 2).unwrap()]);
        let a = reduce_bqp_to_dqc1(&src).unwrap();
        let gates = a.instance.circuit().gates();
        assert_eq!(gates.len(), src.circuit().len() + REDUCTION_OVERHEAD);
        assert_eq!(gates[0], Gate::mcx0(vec![1, 2, 3], 0).unwrap());
        assert_eq!(gates[1], Gate::h(1));
        assert_eq!(gates[2], Gate::cx(1, 3).unwrap());
        assert_eq!(gates[3], Gate::cx(1, 0).unwrap());
        assert_eq!(gates[4].kind(), GateKind::X);
        assert_eq!((a.instance.mixed_width(), a.instance.measured_width()), (3, 1));
    }

    #[test]
    fn identity_on_simple_sources() {
        assert!(verify_identity(&bqp(2, vec![])).unwrap() <= 1e-12);
        let bell = bqp(2, vec![Gate::h(0), Gate::cx(0, 1).unwrap()]);
        let check = check_identity(&bell, &Caps::default()).unwrap();
        assert!((check.q - 0.5).abs() < 1e-15);
        assert!((check.simulated_p0 - 0.5).abs() < 1e-15);
        assert!(check.residual <= 1e-12);
    }

    #[test]
    fn output_wire_is_normalized() {
        let src = BqpCircuit::new(Circuit::new(3, vec![Gate::x(2)]).unwrap(), 2, 0.1).unwrap();
        let a = reduce_bqp_to_dqc1(&src).unwrap();
        assert_eq!(a.q, 0.0);
        assert_eq!(a.instance.circuit().len(), 1 + 1 + REDUCTION_OVERHEAD);
        assert!(verify_identity(&src).unwrap() <= 1e-12);
    }

    #[test]
    fn branch_structure() {
        let src = bqp(
            3,
            vec![Gate::h(0), Gate::t(0), Gate::h(0), Gate::cx(0, 1).unwrap(), Gate::h(2)],
        );
        let q = bqp_accept_prob_capped::<f64>(&src, &Caps::default()).unwrap();
        let prof = branch_profile::<f64>(&src, &Caps::default()).unwrap();
        assert!((prof.conditional_p0[0] - q).abs() < 1e-12);
        for x in 1..8 {
            assert!((prof.conditional_p0[x] - (1.0 - prof.source_accept[x])).abs() < 1e-12);
        }
        let total: f64 = prof.source_accept.iter().sum();
        assert!((total - 4.0).abs() < 1e-12);
    }

    #[test]
    fn cap_on_width() {
        let caps = Caps {
            enumeration_mixed: 2,
            ..Caps::default()
        };
        assert!(matches!(
            reduce_bqp_to_dqc1_capped(&bqp(3, vec![]), &caps),
            Err(Error::Sim(crate::sim::SimError::CapExceeded { .. }))
        ));
    }
}
