use std::collections::BTreeMap;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{bitstring, check_cap, Caps, DensityMatrix, SimError, StateVector};
use crate::circuit::{BqpCircuit, Dqc1Instance};
use crate::num::{compensated_sum, Scalar};
use crate::rng;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DistributionKind {
    Exact,
    /// Rational counts over `shots`.
    Empirical {
        shots: u64,
        seed: u64,
        counts: Vec<u64>,
    },
}

/// Probabilities of the `2^m` outcomes on the measured prefix, indexed by outcome bits.
#[derive(Debug, Clone, PartialEq)]
pub struct OutputDistribution<T> {
    measured: usize,
    probabilities: Vec<T>,
    kind: DistributionKind,
}

/// Serialized form: `{"m", "kind", "shots"?, "seed"?, "p": {bitstring: probability}}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistributionRecord {
    pub m: usize,
    pub kind: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub shots: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    pub p: BTreeMap<String, f64>,
}

impl<T: Scalar> OutputDistribution<T> {
    pub fn exact(measured: usize, probabilities: Vec<T>) -> Self {
        debug_assert_eq!(probabilities.len(), 1 << measured);
        OutputDistribution {
            measured,
            probabilities,
            kind: DistributionKind::Exact,
        }
    }

    pub fn empirical(measured: usize, counts: Vec<u64>, shots: u64, seed: u64) -> Self {
        let denom = T::lit(shots as f64);
        let probabilities = counts.iter().map(|&c| T::lit(c as f64) / denom).collect();
        OutputDistribution {
            measured,
            probabilities,
            kind: DistributionKind::Empirical { shots, seed, counts },
        }
    }

    pub fn measured_width(&self) -> usize {
        self.measured
    }

    pub fn kind(&self) -> &DistributionKind {
        &self.kind
    }

    pub fn probabilities(&self) -> &[T] {
        &self.probabilities
    }

    /// Probability of outcome `a`, an `m`-bit integer (wire 0 is the MSB).
    pub fn probability(&self, outcome: usize) -> T {
        self.probabilities[outcome]
    }

    pub fn total(&self) -> T {
        compensated_sum(self.probabilities.iter().copied())
    }

    pub fn max_deviation(&self, other: &OutputDistribution<T>) -> T {
        self.probabilities
            .iter()
            .zip(&other.probabilities)
            .fold(T::zero(), |acc, (a, b)| acc.max((*a - *b).abs()))
    }

    pub fn to_record(&self) -> DistributionRecord {
        let p = self
            .probabilities
            .iter()
            .enumerate()
            .map(|(a, v)| (bitstring(a, self.measured), v.to_f64().unwrap_or(f64::NAN)))
            .collect();
        let (kind, shots, seed) = match &self.kind {
            DistributionKind::Exact => ("exact", None, None),
            DistributionKind::Empirical { shots, seed, .. } => ("empirical", Some(*shots), Some(*seed)),
        };
        DistributionRecord {
            m: self.measured,
            kind: kind.to_string(),
            shots,
            seed,
            p,
        }
    }
}

/// State of the clean wire at the input.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CleanInput {
    /// `|0><0|`, the one-clean-qubit model proper.
    Pure,
    /// `I/2`, simulated by averaging both basis states of wire 0.
    MaximallyMixed,
}

/// Prefix marginal of `U|c, x>` for clean bit `c` and mixed-register basis state `x`.
pub fn branch_marginal<T: Scalar>(instance: &Dqc1Instance, clean: bool, x: usize) -> Vec<T> {
    let n = instance.mixed_width();
    let index = (usize::from(clean) << n) | x;
    let mut sv = StateVector::<T>::basis(instance.wires(), index);
    sv.run(instance.circuit());
    sv.prefix_marginal(instance.measured_width())
}

pub fn dqc1_exact<T: Scalar>(instance: &Dqc1Instance) -> Result<OutputDistribution<T>, SimError> {
    dqc1_exact_capped(instance, &Caps::default())
}

/// Exact output distribution by enumerating all `2^n` mixed-register basis states.
///
/// Branches run in parallel; the reduction is a compensated sum in ascending `x`
/// order, so the result does not depend on the thread count.
pub fn dqc1_exact_capped<T: Scalar>(instance: &Dqc1Instance, caps: &Caps) -> Result<OutputDistribution<T>, SimError> {
    dqc1_exact_with_clean_input(instance, CleanInput::Pure, caps)
}

pub fn dqc1_exact_with_clean_input<T: Scalar>(
    instance: &Dqc1Instance,
    clean: CleanInput,
    caps: &Caps,
) -> Result<OutputDistribution<T>, SimError> {
    let n = instance.mixed_width();
    check_cap("mixed register width", n, caps.enumeration_mixed)?;
    check_cap("state vector wires", instance.wires(), caps.statevector_wires)?;
    let m = instance.measured_width();
    let clean_bits: &[bool] = match clean {
        CleanInput::Pure => &[false],
        CleanInput::MaximallyMixed => &[false, true],
    };
    let branches: Vec<(bool, usize)> = clean_bits
        .iter()
        .flat_map(|&c| (0..1usize << n).map(move |x| (c, x)))
        .collect();
    let marginals: Vec<Vec<T>> = branches
        .par_iter()
        .map(|&(c, x)| branch_marginal::<T>(instance, c, x))
        .collect();
    let weight = T::one() / T::lit(branches.len() as f64);
    let probabilities = (0..1usize << m)
        .map(|a| compensated_sum(marginals.iter().map(|mg| mg[a])) * weight)
        .collect();
    Ok(OutputDistribution::exact(m, probabilities))
}

pub fn dqc1_density<T: Scalar>(instance: &Dqc1Instance) -> Result<OutputDistribution<T>, SimError> {
    dqc1_density_capped(instance, &Caps::default())
}

/// Exact output distribution by evolving the full density matrix of the mixed input.
pub fn dqc1_density_capped<T: Scalar>(instance: &Dqc1Instance, caps: &Caps) -> Result<OutputDistribution<T>, SimError> {
    check_cap("density matrix wires", instance.wires(), caps.density_wires)?;
    let mut rho = DensityMatrix::<T>::one_clean_qubit(instance.wires(), true);
    rho.evolve(instance.circuit());
    let m = instance.measured_width();
    Ok(OutputDistribution::exact(m, rho.prefix_marginal(m)))
}

pub fn dqc1_sample<T: Scalar>(
    instance: &Dqc1Instance,
    shots: u64,
    seed: u64,
) -> Result<OutputDistribution<T>, SimError> {
    dqc1_sample_capped(instance, shots, seed, &Caps::default())
}

/// Per shot: draw `x` uniformly, run the circuit on `|0, x>`, sample the measured prefix.
///
/// Shot `i` draws from stream `i` of the seed, and counts are integers, so the
/// result is independent of how shots are scheduled. Branch marginals are cached
/// when there are no more branches than shots.
pub fn dqc1_sample_capped<T: Scalar>(
    instance: &Dqc1Instance,
    shots: u64,
    seed: u64,
    caps: &Caps,
) -> Result<OutputDistribution<T>, SimError> {
    if shots == 0 {
        return Err(SimError::NoShots);
    }
    let n = instance.mixed_width();
    check_cap("state vector wires", instance.wires(), caps.statevector_wires)?;
    let m = instance.measured_width();
    let outcomes = 1usize << m;
    let to_f64 = |v: Vec<T>| -> Vec<f64> { v.into_iter().map(|p| p.to_f64().unwrap_or(0.0)).collect() };

    let cache: Option<Vec<Vec<f64>>> = if n < 63 && (1u64 << n) <= shots && n <= caps.enumeration_mixed {
        Some(
            (0..1usize << n)
                .into_par_iter()
                .map(|x| to_f64(branch_marginal::<T>(instance, false, x)))
                .collect(),
        )
    } else {
        None
    };
    let x_mask = if n >= 64 { u64::MAX } else { (1u64 << n) - 1 };

    let counts = (0..shots)
        .into_par_iter()
        .fold(
            || vec![0u64; outcomes],
            |mut acc, shot| {
                let mut r = rng::stream(seed, "dqc1_sample", shot);
                let x = (r.random::<u64>() & x_mask) as usize;
                let u: f64 = r.random();
                let owned;
                let marginal: &[f64] = match &cache {
                    Some(c) => &c[x],
                    None => {
                        owned = to_f64(branch_marginal::<T>(instance, false, x));
                        &owned
                    }
                };
                acc[pick(marginal, u)] += 1;
                acc
            },
        )
        .reduce(
            || vec![0u64; outcomes],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );
    Ok(OutputDistribution::empirical(m, counts, shots, seed))
}

/// Inverse-CDF draw; falls back to the last outcome with positive mass.
fn pick(marginal: &[f64], u: f64) -> usize {
    let mut cum = 0.0;
    let mut last = 0;
    for (a, &p) in marginal.iter().enumerate() {
        if p > 0.0 {
            last = a;
        }
        cum += p;
        if u < cum {
            return a;
        }
    }
    last
}

pub fn bqp_accept_prob<T: Scalar>(bqp: &BqpCircuit) -> Result<T, SimError> {
    bqp_accept_prob_capped(bqp, &Caps::default())
}

/// Probability that the decision wire reads 0 after running the circuit on `|0...0>`.
pub fn bqp_accept_prob_capped<T: Scalar>(bqp: &BqpCircuit, caps: &Caps) -> Result<T, SimError> {
    check_cap("state vector wires", bqp.width(), caps.statevector_wires)?;
    let mut sv = StateVector::<T>::basis(bqp.width(), 0);
    sv.run(bqp.circuit());
    Ok(sv.prob_zero(bqp.output_wire()))
}
