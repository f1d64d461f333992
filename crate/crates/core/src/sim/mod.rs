//! Exact and sampled evaluation of circuits.
//!
//! Two exact DQC1 backends exist: [`dqc1_exact`] enumerates the mixed register and
//! runs a state vector per basis state, [`dqc1_density`] evolves the full density
//! matrix with explicitly embedded gate unitaries. They share only the gate
//! definitions in [`gate_matrix`].

mod density;
mod dqc1;
mod gates;
mod statevector;

use thiserror::Error;

pub use density::DensityMatrix;
pub use dqc1::{
    bqp_accept_prob, bqp_accept_prob_capped, branch_marginal, dqc1_density, dqc1_density_capped, dqc1_exact,
    dqc1_exact_capped, dqc1_exact_with_clean_input, dqc1_sample, dqc1_sample_capped, CleanInput, DistributionKind,
    DistributionRecord, OutputDistribution,
};
pub use gates::{gate_matrix, single_qubit_matrix};
pub use statevector::{run_statevector, StateVector};

/// Feasibility guards for the exponential-cost routines.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Largest mixed-register width enumerated by [`dqc1_exact`].
    pub enumeration_mixed: usize,
    /// Largest total wire count evolved by [`dqc1_density`].
    pub density_wires: usize,
    /// Largest wire count for a single state vector.
    pub statevector_wires: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps {
            enumeration_mixed: 20,
            density_wires: 8,
            statevector_wires: 26,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("{what}: {size} exceeds the configured cap of {cap}")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },
    #[error("basis input has {got} bits, circuit has {wires} wires")]
    InputWidth { got: usize, wires: usize },
    #[error("shot count must be positive")]
    NoShots,
}

pub(crate) fn check_cap(what: &'static str, size: usize, cap: usize) -> Result<(), SimError> {
    if size > cap {
        Err(SimError::CapExceeded { what, size, cap })
    } else {
        Ok(())
    }
}

/// Bit of wire `w` inside a basis index over `wires` wires (wire 0 is the MSB).
#[inline]
pub(crate) fn wire_mask(wires: usize, w: usize) -> usize {
    1usize << (wires - 1 - w)
}

/// Renders the low `width` bits of `value`, most significant first.
pub fn bitstring(value: usize, width: usize) -> String {
    (0..width)
        .map(|i| if value >> (width - 1 - i) & 1 == 1 { '1' } else { '0' })
        .collect()
}
