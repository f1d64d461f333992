//! Simulation of the one-clean-qubit model (DQC1 and DQC1_m), the Toffoli-based
//! compilation of bounded-error circuits into it, and executable versions of the
//! two classical deciders that would follow from efficient classical estimation of
//! its output probabilities.
//!
//! Simulation is generic over the float type ([`num::Scalar`]); the closed-form
//! identities and bounds are generic over any ordered field ([`num::Field`]), so
//! they can be checked exactly with [`Rational`]. The aliases below fix `f64`.
//!
//! ```
//! use dqc1::{reduction, BqpCircuit, Circuit, Gate};
//!
//! let v = Circuit::new(2, vec![Gate::h(0), Gate::cx(0, 1).unwrap()]).unwrap();
//! let bqp = BqpCircuit::new(v, 0, 0.125).unwrap();
//! let residual = reduction::verify_identity(&bqp).unwrap();
//! assert!(residual <= 1e-10);
//! ```

pub mod circuit;
pub mod decider;
pub mod estimators;
pub mod format;
pub mod num;
pub mod random;
pub mod reduction;
pub mod rng;
pub mod selftest;
pub mod sim;

use thiserror::Error;

pub use circuit::{
    build_zero_controlled_toffoli, invert, BqpCircuit, Circuit, CircuitError, Dqc1Instance, Gate, GateKind,
};
pub use format::{format_circuit, format_instance, parse_circuit, parse_instance, ParseError};
pub use sim::{Caps, SimError};

pub type StateVector = sim::StateVector<f64>;
pub type StateVector32 = sim::StateVector<f32>;
pub type DensityMatrix = sim::DensityMatrix<f64>;
pub type DensityMatrix32 = sim::DensityMatrix<f32>;
pub type OutputDistribution = sim::OutputDistribution<f64>;
pub type OutputDistribution32 = sim::OutputDistribution<f32>;
pub type OneSidedEstimate = estimators::OneSidedEstimate<f64>;
pub type FprasEstimator = estimators::FprasEstimator<f64>;
pub type MedianAmplified = estimators::MedianAmplified<f64>;
/// Exact arithmetic for the closed-form identities and bounds.
pub type Rational = num_rational::BigRational;
pub type SmallRational = num_rational::Rational64;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Circuit(#[from] CircuitError),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Estimator(#[from] estimators::EstimatorError),
    #[error(transparent)]
    Decide(#[from] decider::DecideError),
}
