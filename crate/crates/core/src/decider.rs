//! Probabilistic deciders built from classical estimates of a reduced instance,
//! their analytic case bounds, amplification, and trial harnesses that measure
//! the deciders' accept rates against those bounds.
//!
//! A decider "accepts" when it outputs `o = 0`.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error as ThisError;

use crate::circuit::BqpCircuit;
use crate::estimators::{self, Bias, FprasEstimator, MedianAmplified, OneSidedEstimate, Rounding};
use crate::num::{clamp_unit, half, pow2, Field};
use crate::reduction::{self, ReductionArtifact};
use crate::rng;
use crate::sim::{self, Caps};
use crate::Error;

#[derive(Debug, Clone, PartialEq, ThisError)]
pub enum DecideError {
    #[error("promise violated: q = {q} lies strictly between delta = {delta} and 1 - delta")]
    PromiseViolation { q: f64, delta: f64 },
    #[error("bound is vacuous unless r > n - 1 (r = {r}, n = {n})")]
    VacuousBound { r: u32, n: u32 },
    #[error("majority vote needs an odd number of rounds, got {0}")]
    EvenMajority(u32),
    #[error("trial count must be positive")]
    NoTrials,
}

/// Which side of the promise an instance falls on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Promise {
    /// `q >= 1 - delta`
    Yes,
    /// `q <= delta`
    No,
}

pub fn classify_promise(q: f64, delta: f64) -> Result<Promise, DecideError> {
    if q >= 1.0 - delta {
        Ok(Promise::Yes)
    } else if q <= delta {
        Ok(Promise::No)
    } else {
        Err(DecideError::PromiseViolation { q, delta })
    }
}

/// `2^(n-1) (P' - 1/2 + 1/2^n)`, clamped to `[0, 1]`; the flag reports clamping.
pub fn accept_probability_first<T: Field>(p_prime: T, n: u32) -> (T, bool) {
    let n = i64::from(n);
    clamp_unit(pow2::<T>(n - 1) * (p_prime - half::<T>() + pow2::<T>(-n)))
}

/// `2^(n-1) (Q' + 1/2^n)`, clamped to `[0, 1]`; the flag reports clamping.
pub fn accept_probability_second<T: Field>(q_prime: T, n: u32) -> (T, bool) {
    let n = i64::from(n);
    clamp_unit(pow2::<T>(n - 1) * (q_prime + pow2::<T>(-n)))
}

fn bernoulli_zero<R: Rng + ?Sized>(accept: f64, rng: &mut R) -> u8 {
    if rng.random::<f64>() < accept {
        0
    } else {
        1
    }
}

pub fn decide_first<R: Rng + ?Sized>(p_prime: &OneSidedEstimate<f64>, n: u32, rng: &mut R) -> u8 {
    bernoulli_zero(accept_probability_first(p_prime.value, n).0, rng)
}

pub fn decide_second<R: Rng + ?Sized>(q_prime: f64, n: u32, rng: &mut R) -> u8 {
    bernoulli_zero(accept_probability_second(q_prime, n).0, rng)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FirstBounds<T> {
    /// Accept probability lower bound for yes-instances: `(1 - delta) - 2^-(r - (n-1))`.
    pub yes_lower: T,
    /// Accept probability upper bound for no-instances: `delta`.
    pub no_upper: T,
}

pub fn bounds_first<T: Field>(delta: T, n: u32, r: u32) -> Result<FirstBounds<T>, DecideError> {
    if r < n {
        return Err(DecideError::VacuousBound { r, n });
    }
    let slack = pow2::<T>(-(i64::from(r) - (i64::from(n) - 1)));
    Ok(FirstBounds {
        yes_lower: T::one() - delta.clone() - slack,
        no_upper: delta,
    })
}

/// Final lines of the four case chains of the relative-error decider.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SecondBounds<T> {
    /// yes, `Q' >= Q`: lower bound `1 - delta`
    pub case1: T,
    /// yes, `Q' <= Q`: lower bound `(1 - eps)(1 - delta)`
    pub case2: T,
    /// no, `Q' <= Q`: upper bound `delta`
    pub case3: T,
    /// no, `Q' >= Q`: upper bound `(1 + eps) delta`
    pub case4: T,
}

pub fn bounds_second<T: Field>(delta: T, epsilon: T) -> SecondBounds<T> {
    let one = T::one();
    SecondBounds {
        case1: one.clone() - delta.clone(),
        case2: (one.clone() - epsilon.clone()) * (one.clone() - delta.clone()),
        case3: delta.clone(),
        case4: (one + epsilon) * delta,
    }
}

/// Case-4 upper bound when the bias is negative, where `Q' <= (1 - eps) Q` replaces
/// `Q' <= (1 + eps) Q`: `(1 - eps) delta + eps/2`.
pub fn case4_negative_bias_bound<T: Field>(delta: T, epsilon: T) -> T {
    (T::one() - epsilon.clone()) * delta + epsilon * half::<T>()
}

/// Majority of `k` draws of `sampler`, ties impossible since `k` is odd.
pub fn amplify_majority<F: FnMut() -> u8>(mut sampler: F, k: u32) -> Result<u8, DecideError> {
    if k.is_multiple_of(2) {
        return Err(DecideError::EvenMajority(k));
    }
    let zeros = (0..k).filter(|_| sampler() == 0).count() as u32;
    Ok(if 2 * zeros > k { 0 } else { 1 })
}

/// Hoeffding bound on a wrong majority: `exp(-2 k (p - 1/2)^2)` for per-draw success `p`.
pub fn majority_error_bound(p: f64, k: u32) -> f64 {
    (-2.0 * f64::from(k) * (p - 0.5).powi(2)).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BoundKind {
    #[serde(rename = "lower")]
    Lower,
    #[serde(rename = "upper")]
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CaseLabel {
    #[serde(rename = "First-yes")]
    FirstYes,
    #[serde(rename = "First-no")]
    FirstNo,
    #[serde(rename = "Second-case1")]
    SecondCase1,
    #[serde(rename = "Second-case2")]
    SecondCase2,
    #[serde(rename = "Second-case3")]
    SecondCase3,
    #[serde(rename = "Second-case4")]
    SecondCase4,
    #[serde(rename = "Second-yes")]
    SecondYes,
    #[serde(rename = "Second-no")]
    SecondNo,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DeciderParameters {
    pub n: u32,
    pub delta: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub eta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub r: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub median_reps: Option<u32>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub majority_k: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DeciderReport {
    pub trials: u64,
    pub accepts: u64,
    pub empirical_accept_rate: f64,
    pub analytic_bound: f64,
    pub bound_kind: BoundKind,
    pub case_label: CaseLabel,
    pub parameters: DeciderParameters,
    pub clamp_activations: u64,
}

impl DeciderReport {
    fn new(
        accepts: u64,
        trials: u64,
        bound: f64,
        bound_kind: BoundKind,
        case_label: CaseLabel,
        parameters: DeciderParameters,
        clamp_activations: u64,
    ) -> Self {
        let rate = if trials == 0 {
            0.0
        } else {
            accepts as f64 / trials as f64
        };
        DeciderReport {
            trials,
            accepts,
            empirical_accept_rate: rate,
            analytic_bound: bound,
            bound_kind,
            case_label,
            parameters,
            clamp_activations,
        }
    }

    /// Binomial standard deviation of the rate at the bound, `sqrt(p (1 - p) / trials)`.
    pub fn sigma(&self) -> f64 {
        binomial_sigma(self.analytic_bound, self.trials)
    }

    /// Whether the rate sits on the correct side of `bound` up to `sigmas` deviations.
    pub fn respects(&self, bound: f64, sigmas: f64) -> bool {
        if self.trials == 0 {
            return true;
        }
        let tol = sigmas * binomial_sigma(bound, self.trials);
        match self.bound_kind {
            BoundKind::Lower => self.empirical_accept_rate >= bound - tol,
            BoundKind::Upper => self.empirical_accept_rate <= bound + tol,
        }
    }

    pub fn respects_bound(&self, sigmas: f64) -> bool {
        self.respects(self.analytic_bound, sigmas)
    }
}

pub fn binomial_sigma(p: f64, trials: u64) -> f64 {
    let p = p.clamp(0.0, 1.0);
    (p * (1.0 - p) / trials.max(1) as f64).sqrt()
}

/// Bernoulli trials at a fixed accept probability; returns the number of `o = 0`.
fn count_accepts(accept: f64, trials: u64, seed: u64, label: &str) -> u64 {
    (0..trials)
        .into_par_iter()
        .filter(|&i| bernoulli_zero(accept, &mut rng::stream(seed, label, i)) == 0)
        .count() as u64
}

/// Single-shot trials of the one-sided-estimate decider on the reduction of `bqp`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FirstProofRun {
    pub q: f64,
    pub p0: f64,
    pub p_prime: f64,
    pub accept_probability: f64,
    pub report: DeciderReport,
}

pub fn run_first_proof(bqp: &BqpCircuit, r: u32, trials: u64, seed: u64, caps: &Caps) -> Result<FirstProofRun, Error> {
    run_first_proof_with(bqp, r, Rounding::Floor, trials, seed, caps)
}

pub fn run_first_proof_with(
    bqp: &BqpCircuit,
    r: u32,
    rounding: Rounding,
    trials: u64,
    seed: u64,
    caps: &Caps,
) -> Result<FirstProofRun, Error> {
    if trials == 0 {
        return Err(DecideError::NoTrials.into());
    }
    let art = reduction::reduce_bqp_to_dqc1_capped(bqp, caps)?;
    let promise = classify_promise(art.q, bqp.delta())?;
    let n = bqp.width() as u32;
    let bounds = bounds_first(bqp.delta(), n, r)?;
    let p0 = sim::dqc1_exact_capped::<f64>(&art.instance, caps)?.probability(0);
    let est = estimators::exact_rounded_with::<f64>(&art.instance, 0, r, rounding, caps)?;
    let (accept, clamped) = accept_probability_first(est.value, n);
    let accepts = count_accepts(accept, trials, seed, "decide_first");
    let (bound, kind, label) = match promise {
        Promise::Yes => (bounds.yes_lower, BoundKind::Lower, CaseLabel::FirstYes),
        Promise::No => (bounds.no_upper, BoundKind::Upper, CaseLabel::FirstNo),
    };
    let params = DeciderParameters {
        n,
        delta: bqp.delta(),
        epsilon: None,
        eta: None,
        r: Some(r),
        median_reps: None,
        majority_k: None,
    };
    Ok(FirstProofRun {
        q: art.q,
        p0,
        p_prime: est.value,
        accept_probability: accept,
        report: DeciderReport::new(
            accepts,
            trials,
            bound,
            kind,
            label,
            params,
            if clamped { trials } else { 0 },
        ),
    })
}

/// Single-shot trials of the relative-error decider, split by case.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SecondProofRun {
    pub q: f64,
    /// Exact `Q(a=0)` of the reduced instance.
    pub bias: f64,
    /// Trials whose estimate fell outside `|Q - Q'| <= eps |Q|`.
    pub out_of_band: u64,
    /// Aggregate over all trials, against the weakest bound of its promise side.
    pub overall: DeciderReport,
    /// Cases 1 to 4, conditioned on the estimate being in band.
    pub cases: Vec<DeciderReport>,
    /// Case-4 bound valid for the sign of `bias` (the printed one needs `bias >= 0`).
    pub case4_regime_bound: f64,
}

pub fn run_second_proof(
    bqp: &BqpCircuit,
    epsilon: f64,
    eta: f64,
    median_reps: u32,
    trials: u64,
    seed: u64,
    caps: &Caps,
) -> Result<SecondProofRun, Error> {
    if trials == 0 {
        return Err(DecideError::NoTrials.into());
    }
    let art = reduction::reduce_bqp_to_dqc1_capped(bqp, caps)?;
    let promise = classify_promise(art.q, bqp.delta())?;
    let n = bqp.width() as u32;
    let bias = Bias::of(&sim::dqc1_exact_capped::<f64>(&art.instance, caps)?, 0);
    let base = FprasEstimator::new(bias, epsilon, eta, rng::derive_seed(seed, "fpras"))?;
    let amp = MedianAmplified::new(base, median_reps)?;

    // per trial: (case index 0..4 or None when out of band, accepted, clamped)
    let outcomes: Vec<(Option<usize>, bool, bool)> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let q_prime = amp.sample(i);
            let (accept, clamped) = accept_probability_second(q_prime, n);
            let accepted = bernoulli_zero(accept, &mut rng::stream(seed, "decide_second", i)) == 0;
            let case = base.in_band(q_prime).then_some(match (promise, q_prime >= bias.0) {
                (Promise::Yes, true) => 0,
                (Promise::Yes, false) => 1,
                (Promise::No, false) => 2,
                (Promise::No, true) => 3,
            });
            (case, accepted, clamped)
        })
        .collect();

    let b = bounds_second(bqp.delta(), epsilon);
    let params = DeciderParameters {
        n,
        delta: bqp.delta(),
        epsilon: Some(epsilon),
        eta: Some(eta),
        r: None,
        median_reps: Some(median_reps),
        majority_k: None,
    };
    let tally = |filter: &dyn Fn(&Option<usize>) -> bool| -> (u64, u64, u64) {
        outcomes
            .iter()
            .filter(|(c, _, _)| filter(c))
            .fold((0, 0, 0), |(t, a, cl), (_, acc, clamp)| {
                (t + 1, a + u64::from(*acc), cl + u64::from(*clamp))
            })
    };

    let case_meta = [
        (b.case1, BoundKind::Lower, CaseLabel::SecondCase1),
        (b.case2, BoundKind::Lower, CaseLabel::SecondCase2),
        (b.case3, BoundKind::Upper, CaseLabel::SecondCase3),
        (b.case4, BoundKind::Upper, CaseLabel::SecondCase4),
    ];
    let cases = case_meta
        .iter()
        .enumerate()
        .map(|(idx, &(bound, kind, label))| {
            let (t, a, cl) = tally(&|c| *c == Some(idx));
            DeciderReport::new(a, t, bound, kind, label, params.clone(), cl)
        })
        .collect();

    let (t, a, cl) = tally(&|_| true);
    let overall = match promise {
        Promise::Yes => DeciderReport::new(a, t, b.case2, BoundKind::Lower, CaseLabel::SecondYes, params, cl),
        Promise::No => DeciderReport::new(a, t, b.case4, BoundKind::Upper, CaseLabel::SecondNo, params, cl),
    };
    let out_of_band = outcomes.iter().filter(|(c, _, _)| c.is_none()).count() as u64;
    let case4_regime_bound = if bias.0 >= 0.0 {
        b.case4
    } else {
        case4_negative_bias_bound(bqp.delta(), epsilon)
    };
    Ok(SecondProofRun {
        q: art.q,
        bias: bias.0,
        out_of_band,
        overall,
        cases,
        case4_regime_bound,
    })
}

/// Source of the estimate fed to the decider.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "estimator")]
pub enum EstimatorConfig {
    /// One-sided `r`-bit truncation of the exact value; drives the first decider.
    ExactRounded { r: u32 },
    /// Median-amplified mock FPRAS on the bias; drives the second decider.
    MockFpras { epsilon: f64, eta: f64, median_reps: u32 },
    /// Shot-noise frequency used in place of `P'`; drives the first decider without its guarantee.
    MonteCarlo { shots: u64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EndToEnd {
    pub decision: u8,
    pub promise: Promise,
    pub q: f64,
    #[serde(rename = "predictedP0")]
    pub predicted_p0: f64,
    pub estimator: EstimatorConfig,
    pub report: DeciderReport,
}

/// Reduce, estimate, decide, and take the majority of `majority_k` decisions.
pub fn end_to_end_decide(
    bqp: &BqpCircuit,
    estimator: EstimatorConfig,
    majority_k: u32,
    seed: u64,
    caps: &Caps,
) -> Result<EndToEnd, Error> {
    if majority_k.is_multiple_of(2) {
        return Err(DecideError::EvenMajority(majority_k).into());
    }
    let q = sim::bqp_accept_prob_capped::<f64>(bqp, caps)?;
    let promise = classify_promise(q, bqp.delta())?;
    let art: ReductionArtifact = reduction::reduce_bqp_to_dqc1_capped(bqp, caps)?;
    let n = bqp.width() as u32;
    let delta = bqp.delta();
    let mut params = DeciderParameters {
        n,
        delta,
        epsilon: None,
        eta: None,
        r: None,
        median_reps: None,
        majority_k: Some(majority_k),
    };

    let mut clamps = 0u64;
    let mut zeros = 0u64;
    let mut round = 0u64;
    let (bound, kind, label, decision);
    match estimator {
        EstimatorConfig::ExactRounded { .. } | EstimatorConfig::MonteCarlo { .. } => {
            let p_prime = match estimator {
                EstimatorConfig::ExactRounded { r } => {
                    params.r = Some(r);
                    estimators::exact_rounded_with::<f64>(&art.instance, 0, r, Rounding::Floor, caps)?.value
                }
                EstimatorConfig::MonteCarlo { shots } => {
                    estimators::additive_mc::<f64>(&art.instance, 0, shots, rng::derive_seed(seed, "estimate"))?
                }
                EstimatorConfig::MockFpras { .. } => unreachable!(),
            };
            let (accept, clamped) = accept_probability_first(p_prime, n);
            decision = amplify_majority(
                || {
                    clamps += u64::from(clamped);
                    let o = bernoulli_zero(accept, &mut rng::stream(seed, "end_to_end", round));
                    zeros += u64::from(o == 0);
                    round += 1;
                    o
                },
                majority_k,
            )?;
            // without a bit budget (shot noise) only the r -> infinity limit applies
            let yes_lower = match params.r {
                Some(r) => bounds_first(delta, n, r)?.yes_lower,
                None => 1.0 - delta,
            };
            (bound, kind, label) = match promise {
                Promise::Yes => (yes_lower, BoundKind::Lower, CaseLabel::FirstYes),
                Promise::No => (delta, BoundKind::Upper, CaseLabel::FirstNo),
            };
        }
        EstimatorConfig::MockFpras {
            epsilon,
            eta,
            median_reps,
        } => {
            params.epsilon = Some(epsilon);
            params.eta = Some(eta);
            params.median_reps = Some(median_reps);
            let bias = Bias::of(&sim::dqc1_exact_capped::<f64>(&art.instance, caps)?, 0);
            let base = FprasEstimator::new(bias, epsilon, eta, rng::derive_seed(seed, "fpras"))?;
            let amp = MedianAmplified::new(base, median_reps)?;
            decision = amplify_majority(
                || {
                    let (accept, clamped) = accept_probability_second(amp.sample(round), n);
                    clamps += u64::from(clamped);
                    let o = bernoulli_zero(accept, &mut rng::stream(seed, "end_to_end", round));
                    zeros += u64::from(o == 0);
                    round += 1;
                    o
                },
                majority_k,
            )?;
            let b = bounds_second(delta, epsilon);
            (bound, kind, label) = match promise {
                Promise::Yes => (b.case2, BoundKind::Lower, CaseLabel::SecondYes),
                Promise::No => (b.case4, BoundKind::Upper, CaseLabel::SecondNo),
            };
        }
    }
    Ok(EndToEnd {
        decision,
        promise,
        q,
        predicted_p0: art.predicted_p0,
        estimator,
        report: DeciderReport::new(zeros, round, bound, kind, label, params, clamps),
    })
}
