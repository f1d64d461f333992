//! Classical estimators of outcome probabilities with explicit error models.
//!
//! * [`exact_rounded`]: one-sided `r`-bit truncation, `0 <= P - P' <= 2^-r`.
//! * [`FprasEstimator`]: relative error `eps * |Q|` on the bias `Q = P - 1/2`,
//!   failing with probability `eta`. It wraps the exact oracle and injects noise.
//! * [`additive_mc`]: shot-noise frequency, additive error `O(1/sqrt(shots))`.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error as ThisError;

use crate::circuit::Dqc1Instance;
use crate::num::Scalar;
use crate::rng;
use crate::sim::{dqc1_exact_capped, dqc1_sample_capped, Caps, OutputDistribution};
use crate::Error;

/// Out-of-band multiplier used for the failure branch of the mock FPRAS.
pub const FAILURE_SPREAD: f64 = 10.0;

#[derive(Debug, Clone, PartialEq, ThisError)]
pub enum EstimatorError {
    #[error("bit budget r must be at least 1")]
    NoBits,
    #[error("epsilon = {0} must lie in [0, 1/2)")]
    Epsilon(f64),
    #[error("eta = {0} must lie in [0, 1/2)")]
    Eta(f64),
    #[error("median amplification needs eta <= 1/4, got {0}")]
    EtaTooLarge(f64),
    #[error("repetition count must be odd, got {0}")]
    EvenRepetitions(u32),
    #[error("outcome {outcome} out of range for {measured} measured wire(s)")]
    Outcome { outcome: usize, measured: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Rounding {
    Floor,
    /// Rounds up, which breaks the one-sided contract. Used for fault injection.
    Ceil,
}

/// `P'(a)` from an `r`-bit computation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OneSidedEstimate<T> {
    pub value: T,
    pub bits: u32,
}

impl<T: Scalar> OneSidedEstimate<T> {
    /// `P - P'` against the exact value.
    pub fn gap(&self, exact: T) -> T {
        exact - self.value
    }

    /// `0 <= P - P' <= 2^-r`, with no tolerance.
    pub fn contract_holds(&self, exact: T) -> bool {
        let gap = self.gap(exact);
        gap >= T::zero() && gap <= T::lit(2f64.powi(-(self.bits as i32)))
    }
}

/// `floor(p * 2^r) / 2^r` (or the ceiling). Scaling by a power of two is exact,
/// so the only rounding is the one requested.
pub fn round_to_bits<T: Scalar>(p: T, r: u32, rounding: Rounding) -> T {
    let scale = T::lit(2f64.powi(r as i32));
    let scaled = p * scale;
    let whole = match rounding {
        Rounding::Floor => scaled.floor(),
        Rounding::Ceil => scaled.ceil(),
    };
    whole / scale
}

fn check_outcome<T: Scalar>(dist: &OutputDistribution<T>, outcome: usize) -> Result<(), EstimatorError> {
    let measured = dist.measured_width();
    if outcome >= 1 << measured {
        Err(EstimatorError::Outcome { outcome, measured })
    } else {
        Ok(())
    }
}

pub fn exact_rounded<T: Scalar>(instance: &Dqc1Instance, outcome: usize, r: u32) -> Result<OneSidedEstimate<T>, Error> {
    exact_rounded_with(instance, outcome, r, Rounding::Floor, &Caps::default())
}

pub fn exact_rounded_with<T: Scalar>(
    instance: &Dqc1Instance,
    outcome: usize,
    r: u32,
    rounding: Rounding,
    caps: &Caps,
) -> Result<OneSidedEstimate<T>, Error> {
    if r == 0 {
        return Err(EstimatorError::NoBits.into());
    }
    let dist = dqc1_exact_capped::<T>(instance, caps)?;
    check_outcome(&dist, outcome)?;
    Ok(OneSidedEstimate {
        value: round_to_bits(dist.probability(outcome), r, rounding),
        bits: r,
    })
}

/// `Q(a) = P(a) - 1/2`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Bias<T>(pub T);

impl<T: Scalar> Bias<T> {
    pub fn of(dist: &OutputDistribution<T>, outcome: usize) -> Self {
        Bias(dist.probability(outcome) - T::lit(0.5))
    }
}

/// Mock FPRAS for `Q(a)`: with probability `1 - eta` it returns `Q (1 + u)` with
/// `u` uniform on `[-eps, eps]`, otherwise `Q (1 +/- 10 eps)`.
///
/// Every call index draws from its own stream, so `sample(i)` is a pure function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FprasEstimator<T> {
    bias: T,
    epsilon: f64,
    eta: f64,
    seed: u64,
}

impl<T: Scalar> FprasEstimator<T> {
    pub fn new(bias: Bias<T>, epsilon: f64, eta: f64, seed: u64) -> Result<Self, EstimatorError> {
        if !(0.0..0.5).contains(&epsilon) {
            return Err(EstimatorError::Epsilon(epsilon));
        }
        if !(0.0..0.5).contains(&eta) {
            return Err(EstimatorError::Eta(eta));
        }
        Ok(FprasEstimator {
            bias: bias.0,
            epsilon,
            eta,
            seed,
        })
    }

    pub fn for_instance(
        instance: &Dqc1Instance,
        outcome: usize,
        epsilon: f64,
        eta: f64,
        seed: u64,
        caps: &Caps,
    ) -> Result<Self, Error> {
        let dist = dqc1_exact_capped::<T>(instance, caps)?;
        check_outcome(&dist, outcome)?;
        Ok(FprasEstimator::new(Bias::of(&dist, outcome), epsilon, eta, seed)?)
    }

    pub fn bias(&self) -> T {
        self.bias
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn eta(&self) -> f64 {
        self.eta
    }

    pub fn sample(&self, call: u64) -> T {
        let mut r = rng::stream(self.seed, "mock_fpras", call);
        let fail = r.random::<f64>() < self.eta;
        let factor = if fail {
            let sign = if r.random::<bool>() { 1.0 } else { -1.0 };
            1.0 + sign * FAILURE_SPREAD * self.epsilon
        } else if self.epsilon > 0.0 {
            1.0 + r.random_range(-self.epsilon..=self.epsilon)
        } else {
            1.0
        };
        self.bias * T::lit(factor)
    }

    /// `|Q - Q'| <= eps |Q|`.
    pub fn in_band(&self, estimate: T) -> bool {
        (self.bias - estimate).abs() <= T::lit(self.epsilon) * self.bias.abs()
    }
}

/// One draw of the mock FPRAS for outcome `a` of `instance`.
pub fn mock_fpras<T: Scalar>(
    instance: &Dqc1Instance,
    outcome: usize,
    epsilon: f64,
    eta: f64,
    seed: u64,
) -> Result<T, Error> {
    Ok(FprasEstimator::<T>::for_instance(instance, outcome, epsilon, eta, seed, &Caps::default())?.sample(0))
}

/// Median of `repetitions` independent FPRAS calls.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MedianAmplified<T> {
    base: FprasEstimator<T>,
    repetitions: u32,
}

impl<T: Scalar> MedianAmplified<T> {
    pub fn new(base: FprasEstimator<T>, repetitions: u32) -> Result<Self, EstimatorError> {
        if repetitions.is_multiple_of(2) {
            return Err(EstimatorError::EvenRepetitions(repetitions));
        }
        if base.eta > 0.25 {
            return Err(EstimatorError::EtaTooLarge(base.eta));
        }
        Ok(MedianAmplified { base, repetitions })
    }

    pub fn base(&self) -> &FprasEstimator<T> {
        &self.base
    }

    pub fn repetitions(&self) -> u32 {
        self.repetitions
    }

    /// Median of base calls `call * reps .. (call + 1) * reps`.
    pub fn sample(&self, call: u64) -> T {
        let reps = u64::from(self.repetitions);
        let mut draws: Vec<T> = (0..reps).map(|j| self.base.sample(call * reps + j)).collect();
        draws.sort_by(|a, b| a.partial_cmp(b).expect("finite estimates"));
        draws[draws.len() / 2]
    }

    pub fn failure_bound(&self) -> f64 {
        median_failure_bound(self.base.eta, self.repetitions)
    }
}

/// Hoeffding bound on the median leaving the band: `exp(-2 k (1/2 - eta)^2)`.
pub fn median_failure_bound(eta: f64, repetitions: u32) -> f64 {
    (-2.0 * f64::from(repetitions) * (0.5 - eta).powi(2)).exp()
}

/// Empirical frequency of outcome `a` over `shots` samples.
pub fn additive_mc<T: Scalar>(instance: &Dqc1Instance, outcome: usize, shots: u64, seed: u64) -> Result<T, Error> {
    let dist = dqc1_sample_capped::<T>(instance, shots, seed, &Caps::default())?;
    check_outcome(&dist, outcome)?;
    Ok(dist.probability(outcome))
}
