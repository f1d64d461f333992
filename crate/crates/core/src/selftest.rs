//! Built-in self check: the acceptance properties at reduced trial counts.

use std::fmt;

use serde::Serialize;

use crate::circuit::{BqpCircuit, Circuit, Dqc1Instance, Gate};
use crate::decider::{self, amplify_majority, binomial_sigma, majority_error_bound};
use crate::estimators::{self, Rounding};
use crate::random::{random_circuit, random_instance, H_T_CX};
use crate::reduction;
use crate::rng;
use crate::sim::{self, Caps, CleanInput};
use crate::Error;

/// Deliberate defects used to confirm that the checks can fail.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Round the one-sided estimate up instead of down.
    FlipRounding,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct SelftestOptions {
    pub quick: bool,
    pub fault: Option<Fault>,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = if self.passed { "PASS" } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.name, self.detail)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelftestReport {
    pub checks: Vec<Check>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }
}

type CheckFn<'a> = Box<dyn Fn() -> Result<(bool, String), Error> + 'a>;

struct Scale {
    circuits: usize,
    instances: usize,
    trials: u64,
    majority_runs: u64,
    shots: u64,
}

impl Scale {
    fn of(quick: bool) -> Self {
        if quick {
            Scale {
                circuits: 20,
                instances: 10,
                trials: 2_000,
                majority_runs: 200,
                shots: 20_000,
            }
        } else {
            Scale {
                circuits: 100,
                instances: 50,
                trials: 20_000,
                majority_runs: 2_000,
                shots: 200_000,
            }
        }
    }
}

/// Runs every check. A check that errors is reported as failed with the error text.
pub fn run(opts: &SelftestOptions) -> SelftestReport {
    let scale = Scale::of(opts.quick);
    let rounding = match opts.fault {
        Some(Fault::FlipRounding) => Rounding::Ceil,
        None => Rounding::Floor,
    };
    let seed = opts.seed;
    let checks: [(&'static str, CheckFn<'_>); 8] = [
        ("identity", Box::new(|| identity(&scale, seed))),
        ("backends", Box::new(|| backends(&scale, seed))),
        ("one-sided", Box::new(|| one_sided(&scale, seed, rounding))),
        ("first-proof", Box::new(|| first_proof(&scale, seed, rounding))),
        ("second-proof", Box::new(|| second_proof(&scale, seed))),
        ("majority", Box::new(|| majority(&scale, seed))),
        ("sampling", Box::new(|| sampling(&scale, seed))),
        ("degeneracy", Box::new(|| degeneracy(&scale, seed))),
    ];
    let checks = checks
        .iter()
        .map(|(name, f)| {
            let (passed, detail) = f().unwrap_or_else(|e| (false, format!("error: {e}")));
            Check { name, passed, detail }
        })
        .collect();
    SelftestReport { checks }
}

fn promise(circuit: Circuit) -> BqpCircuit {
    BqpCircuit::new(circuit, 0, 0.125).expect("valid delta")
}

/// Yes- and no-instances on three wires: the identity, a Toffoli-based circuit
/// with `q` near 0.98, and both with the decision wire flipped.
pub(crate) fn promise_instances() -> (Vec<BqpCircuit>, Vec<BqpCircuit>) {
    let body = || {
        vec![
            Gate::h(1),
            Gate::t(1),
            Gate::h(1),
            Gate::h(2),
            Gate::t(2),
            Gate::h(2),
            Gate::ccx(1, 2, 0).expect("distinct"),
        ]
    };
    let flipped = {
        let mut g = vec![Gate::x(0)];
        g.extend(body());
        g
    };
    let yes = vec![
        promise(Circuit::empty(3).expect("positive width")),
        promise(Circuit::new(3, body()).expect("fits")),
    ];
    let no = vec![
        promise(Circuit::new(3, vec![Gate::x(0)]).expect("fits")),
        promise(Circuit::new(3, flipped).expect("fits")),
    ];
    (yes, no)
}

fn identity(scale: &Scale, seed: u64) -> Result<(bool, String), Error> {
    let mut r = rng::stream(seed, "selftest/identity", 0);
    let mut worst = 0f64;
    for i in 0..scale.circuits {
        let n = 1 + i % 5;
        let c = random_circuit(&mut r, n, 2 + 3 * n, &H_T_CX);
        worst = worst.max(reduction::verify_identity(&promise(c))?);
    }
    Ok((
        worst <= 1e-10,
        format!("{} circuits, max residual {worst:.3e}", scale.circuits),
    ))
}

fn backends(scale: &Scale, seed: u64) -> Result<(bool, String), Error> {
    let mut r = rng::stream(seed, "selftest/backends", 0);
    let mut worst = 0f64;
    for _ in 0..scale.instances {
        let inst = random_instance(&mut r, 6, &[1, 2, 3]);
        let a = sim::dqc1_exact::<f64>(&inst)?;
        let b = sim::dqc1_density::<f64>(&inst)?;
        worst = worst.max(a.max_deviation(&b));
    }
    Ok((
        worst <= 1e-10,
        format!("{} instances, max deviation {worst:.3e}", scale.instances),
    ))
}

fn one_sided(scale: &Scale, seed: u64, rounding: Rounding) -> Result<(bool, String), Error> {
    let mut r = rng::stream(seed, "selftest/one-sided", 0);
    let mut violations = 0;
    for _ in 0..scale.instances {
        let inst: Dqc1Instance = random_instance(&mut r, 6, &[1]);
        let p = sim::dqc1_exact::<f64>(&inst)?.probability(0);
        for bits in [4, 10, 20] {
            let est = estimators::exact_rounded_with::<f64>(&inst, 0, bits, rounding, &Caps::default())?;
            violations += usize::from(!est.contract_holds(p));
        }
    }
    Ok((
        violations == 0,
        format!("{} estimates, {violations} violations", 3 * scale.instances),
    ))
}

fn first_proof(scale: &Scale, seed: u64, rounding: Rounding) -> Result<(bool, String), Error> {
    let (yes, no) = promise_instances();
    let mut ok = true;
    let mut rates = Vec::new();
    for bqp in yes.iter().chain(&no) {
        let run = decider::run_first_proof_with(bqp, 11, rounding, scale.trials, seed, &Caps::default())?;
        ok &= run.report.respects_bound(3.0);
        rates.push(format!("{:.4}", run.report.empirical_accept_rate));
    }
    Ok((
        ok,
        format!("accept rates yes/no [{}] at {} trials", rates.join(", "), scale.trials),
    ))
}

fn second_proof(scale: &Scale, seed: u64) -> Result<(bool, String), Error> {
    let (yes, no) = promise_instances();
    let mut ok = true;
    let mut rates = Vec::new();
    for (is_yes, bqp) in yes.iter().map(|b| (true, b)).chain(no.iter().map(|b| (false, b))) {
        let run = decider::run_second_proof(bqp, 0.25, 0.25, 55, scale.trials, seed, &Caps::default())?;
        let overall = &run.overall;
        ok &= if is_yes {
            overall.respects(0.99 * overall.analytic_bound, 3.0)
        } else {
            overall.respects(overall.analytic_bound + 0.001, 3.0)
        };
        for case in &run.cases[..3] {
            ok &= case.respects_bound(3.0);
        }
        ok &= run.cases[3].respects(run.case4_regime_bound, 3.0);
        rates.push(format!("{:.4}", overall.empirical_accept_rate));
    }
    Ok((
        ok,
        format!("accept rates yes/no [{}] at {} trials", rates.join(", "), scale.trials),
    ))
}

fn majority(scale: &Scale, seed: u64) -> Result<(bool, String), Error> {
    let k = 101;
    let mut errors = 0u64;
    for run in 0..scale.majority_runs {
        let mut r = rng::stream(seed, "selftest/majority", run);
        let vote = amplify_majority(|| u8::from(rand::Rng::random::<f64>(&mut r) >= 2.0 / 3.0), k)?;
        errors += u64::from(vote != 0);
    }
    let rate = errors as f64 / scale.majority_runs as f64;
    Ok((
        rate <= 0.01,
        format!(
            "error rate {rate:.4} over {} runs (bound {:.4})",
            scale.majority_runs,
            majority_error_bound(2.0 / 3.0, k)
        ),
    ))
}

fn sampling(scale: &Scale, seed: u64) -> Result<(bool, String), Error> {
    let mut r = rng::stream(seed, "selftest/sampling", 0);
    let circuit = random_circuit(&mut r, 4, 12, &H_T_CX);
    let inst = Dqc1Instance::single_output(circuit)?;
    let p = sim::dqc1_exact::<f64>(&inst)?.probability(0);
    let hat = sim::dqc1_sample::<f64>(&inst, scale.shots, seed)?.probability(0);
    let tol = 4.0 * binomial_sigma(p, scale.shots);
    Ok((
        (hat - p).abs() <= tol,
        format!("|{hat:.5} - {p:.5}| vs 4 sigma {tol:.5} at {} shots", scale.shots),
    ))
}

fn degeneracy(scale: &Scale, seed: u64) -> Result<(bool, String), Error> {
    let mut r = rng::stream(seed, "selftest/degeneracy", 0);
    let mut worst = 0f64;
    for i in 0..scale.instances {
        let c = random_circuit(&mut r, 1 + i % 5, 10, &H_T_CX);
        let art = reduction::reduce_bqp_to_dqc1(&promise(c))?;
        let p = sim::dqc1_exact_with_clean_input::<f64>(&art.instance, CleanInput::MaximallyMixed, &Caps::default())?
            .probability(0);
        worst = worst.max((p - 0.5).abs());
    }
    Ok((
        worst <= 1e-12,
        format!("{} instances, max |P - 1/2| {worst:.3e}", scale.instances),
    ))
}
