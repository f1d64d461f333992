//! Acceptance suite. Runs as a plain binary and prints one line per criterion.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use dqc1::decider::{self, amplify_majority};
use dqc1::estimators::{exact_rounded, OneSidedEstimate};
use dqc1::random::{random_circuit, random_instance, H_T_CX};
use dqc1::sim::{self, CleanInput};
use dqc1::{reduction, rng, BqpCircuit, Caps, Circuit, Dqc1Instance, Gate, Rational};
use num_bigint::BigInt;
use num_traits::{FromPrimitive, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20_240_601;

const IDENTITY_TOL: f64 = 1e-10;
const IDENTITY_BUDGET: Duration = Duration::from_secs(10);
const BACKEND_TOL: f64 = 1e-10;
const ONE_SIDED_BITS: [u32; 3] = [4, 10, 20];
const DECIDER_TRIALS: u64 = 100_000;
const DECIDER_BUDGET: Duration = Duration::from_secs(30);
const SIGMAS: f64 = 3.0;
const DELTA: (i64, i64) = (1, 8);
const EPSILON: (i64, i64) = (1, 4);
const ETA: f64 = 0.25;
const MEDIAN_REPS: u32 = 55;
const MEDIAN_RESIDUAL: f64 = 0.001;
const YES_SLACK: f64 = 0.99;
const MAJORITY_K: u32 = 101;
const MAJORITY_RUNS: u64 = 10_000;
const MAJORITY_MAX_ERROR: f64 = 0.01;
const SAMPLING_SHOTS: u64 = 1_000_000;
const SAMPLING_SIGMAS: f64 = 4.0;
const DEGENERACY_TOL: f64 = 1e-12;

fn rat(a: i64, b: i64) -> Rational {
    Rational::new(BigInt::from(a), BigInt::from(b))
}

fn f(r: &Rational) -> f64 {
    r.to_f64().unwrap()
}

fn sigma(p: f64, trials: u64) -> f64 {
    (p * (1.0 - p) / trials as f64).sqrt()
}

fn delta() -> f64 {
    DELTA.0 as f64 / DELTA.1 as f64
}

fn promise(c: Circuit) -> BqpCircuit {
    BqpCircuit::new(c, 0, delta()).unwrap()
}

/// Three-wire promise instances. The Toffoli circuit accepts with probability
/// `1 - ((2 - sqrt 2) / 4)^2`; prefixing `X(0)` mirrors it into a no-instance.
fn promise_instances() -> (Vec<BqpCircuit>, Vec<BqpCircuit>) {
    let toffoli = vec![
        Gate::h(1),
        Gate::t(1),
        Gate::h(1),
        Gate::h(2),
        Gate::t(2),
        Gate::h(2),
        Gate::ccx(1, 2, 0).unwrap(),
    ];
    let mut flipped = vec![Gate::x(0)];
    flipped.extend(toffoli.iter().cloned());
    let yes = vec![
        promise(Circuit::empty(3).unwrap()),
        promise(Circuit::new(3, toffoli).unwrap()),
    ];
    let no = vec![
        promise(Circuit::new(3, vec![Gate::x(0)]).unwrap()),
        promise(Circuit::new(3, flipped).unwrap()),
    ];
    for b in &yes {
        assert!(common::accept_probability(b) >= 1.0 - delta());
    }
    for b in &no {
        assert!(common::accept_probability(b) <= delta());
    }
    (yes, no)
}

fn criterion_1() -> (bool, String) {
    let mut gen = ChaCha8Rng::seed_from_u64(SEED);
    let circuits: Vec<BqpCircuit> = (0..100)
        .map(|i| {
            let n = 1 + i % 5;
            let depth = gen.random_range(1..=6 * n);
            promise(random_circuit(&mut gen, n, depth, &H_T_CX))
        })
        .collect();
    let qs: Vec<f64> = circuits.iter().map(common::accept_probability).collect();
    let start = Instant::now();
    let simulated: Vec<f64> = circuits
        .iter()
        .map(|b| {
            let art = reduction::reduce_bqp_to_dqc1(b).unwrap();
            sim::dqc1_exact::<f64>(&art.instance).unwrap().probability(0)
        })
        .collect();
    let elapsed = start.elapsed();
    let worst = circuits
        .iter()
        .zip(&qs)
        .zip(&simulated)
        .map(|((b, q), p)| {
            let n = b.width() as i32;
            (p - (q / 2f64.powi(n - 1) + 0.5 - 1.0 / 2f64.powi(n))).abs()
        })
        .fold(0.0, f64::max);
    (
        worst <= IDENTITY_TOL && elapsed < IDENTITY_BUDGET,
        format!("100 circuits, max residual {worst:.2e} (tol {IDENTITY_TOL:e}), {elapsed:.2?}"),
    )
}

fn criterion_2() -> (bool, String) {
    let mut gen = ChaCha8Rng::seed_from_u64(SEED + 2);
    let mut worst = 0f64;
    let mut worst_reference = 0f64;
    for _ in 0..50 {
        let inst = random_instance(&mut gen, 6, &[1, 2, 3]);
        let a = sim::dqc1_exact::<f64>(&inst).unwrap();
        let b = sim::dqc1_density::<f64>(&inst).unwrap();
        worst = worst.max(a.max_deviation(&b));
        for (k, p) in common::dqc1_distribution(&inst).iter().enumerate() {
            worst_reference = worst_reference.max((a.probability(k) - p).abs());
        }
    }
    (
        worst <= BACKEND_TOL && worst_reference <= BACKEND_TOL,
        format!("50 instances, enumeration vs density {worst:.2e}, vs reference {worst_reference:.2e}"),
    )
}

fn criterion_3() -> (bool, String) {
    let mut gen = ChaCha8Rng::seed_from_u64(SEED + 3);
    let mut checked = 0;
    let mut violations = 0;
    for _ in 0..50 {
        let inst: Dqc1Instance = random_instance(&mut gen, 6, &[1, 2, 3]);
        let p = sim::dqc1_exact::<f64>(&inst).unwrap().probability(0);
        let exact_p = Rational::from_f64(p).unwrap();
        for r in ONE_SIDED_BITS {
            let est: OneSidedEstimate<f64> = exact_rounded(&inst, 0, r).unwrap();
            let gap = exact_p.clone() - Rational::from_f64(est.value).unwrap();
            let ulp = Rational::new(BigInt::from(1), BigInt::from(1) << r);
            checked += 1;
            violations += usize::from(!(gap >= Rational::zero() && gap <= ulp));
        }
    }
    (
        violations == 0,
        format!("{checked} estimates, {violations} violations of 0 <= P - P' <= 2^-r"),
    )
}

fn criterion_4() -> (bool, String) {
    let (yes, no) = promise_instances();
    let n = 3;
    let r = 11;
    let yes_bound = f(&(rat(1, 1) - rat(DELTA.0, DELTA.1) - rat(1, 1) / rat(1 << (r - n + 1), 1)));
    let no_bound = f(&rat(DELTA.0, DELTA.1));
    let start = Instant::now();
    let mut ok = true;
    let mut rates = Vec::new();
    for (is_yes, b) in yes.iter().map(|b| (true, b)).chain(no.iter().map(|b| (false, b))) {
        let run = decider::run_first_proof(b, r, DECIDER_TRIALS, SEED, &Caps::default()).unwrap();
        let rate = run.report.empirical_accept_rate;
        ok &= if is_yes {
            rate >= yes_bound - SIGMAS * sigma(yes_bound, DECIDER_TRIALS)
        } else {
            rate <= no_bound + SIGMAS * sigma(no_bound, DECIDER_TRIALS)
        };
        ok &= (run.report.analytic_bound - if is_yes { yes_bound } else { no_bound }).abs() < 1e-15;
        rates.push(format!("{rate:.4}"));
    }
    let elapsed = start.elapsed();
    (
        ok && elapsed < DECIDER_BUDGET,
        format!(
            "yes rates {} >= {yes_bound}, no rates {} <= {no_bound} (3 sigma), {elapsed:.2?}",
            rates[..2].join("/"),
            rates[2..].join("/")
        ),
    )
}

fn criterion_5() -> (bool, String) {
    let (yes, no) = promise_instances();
    let d = rat(DELTA.0, DELTA.1);
    let e = rat(EPSILON.0, EPSILON.1);
    let one = rat(1, 1);
    let case_bounds = [
        f(&(one.clone() - d.clone())),
        f(&((one.clone() - e.clone()) * (one.clone() - d.clone()))),
        f(&d),
        f(&((one.clone() + e.clone()) * d.clone())),
    ];
    let negative_bias_case4 = f(&((one.clone() - e.clone()) * d.clone() + e.clone() / rat(2, 1)));
    let yes_bound = YES_SLACK * case_bounds[1];
    let no_bound = case_bounds[3] + MEDIAN_RESIDUAL;
    let eps = f(&e);
    let mut ok = true;
    let mut overall = Vec::new();
    let mut case_rates = [(0u64, 0u64); 4];
    for (is_yes, b) in yes.iter().map(|b| (true, b)).chain(no.iter().map(|b| (false, b))) {
        let run = decider::run_second_proof(b, eps, ETA, MEDIAN_REPS, DECIDER_TRIALS, SEED, &Caps::default()).unwrap();
        let rate = run.overall.empirical_accept_rate;
        ok &= if is_yes {
            rate >= yes_bound - SIGMAS * sigma(yes_bound, DECIDER_TRIALS)
        } else {
            rate <= no_bound + SIGMAS * sigma(no_bound, DECIDER_TRIALS)
        };
        for (i, case) in run.cases.iter().enumerate() {
            ok &= (case.analytic_bound - case_bounds[i]).abs() < 1e-15;
            ok &= case.respects(case_bounds[i], SIGMAS);
            case_rates[i].0 += case.trials;
            case_rates[i].1 += case.accepts;
        }
        ok &= run.cases[3].respects(negative_bias_case4, SIGMAS);
        overall.push(format!("{rate:.4}"));
    }
    let cases: Vec<String> = case_rates
        .iter()
        .zip(case_bounds)
        .map(|(&(t, a), bound)| {
            let rate = if t == 0 { f64::NAN } else { a as f64 / t as f64 };
            format!("{rate:.4}/{bound:.4} n={t}")
        })
        .collect();
    (
        ok,
        format!(
            "yes {} >= {yes_bound:.4}, no {} <= {no_bound:.4}; cases [{}]",
            overall[..2].join("/"),
            overall[2..].join("/"),
            cases.join(", ")
        ),
    )
}

fn criterion_6() -> (bool, String) {
    let mut wrong = 0u64;
    for run in 0..MAJORITY_RUNS {
        let mut r = rng::stream(SEED, "acceptance/majority", run);
        // base decision: correct answer 0 with probability 2/3
        let vote = amplify_majority(|| u8::from(r.random::<f64>() >= 2.0 / 3.0), MAJORITY_K).unwrap();
        wrong += u64::from(vote != 0);
    }
    let rate = wrong as f64 / MAJORITY_RUNS as f64;
    let hoeffding = (-2.0 * f64::from(MAJORITY_K) * (2.0f64 / 3.0 - 0.5).powi(2)).exp();
    (
        rate <= MAJORITY_MAX_ERROR,
        format!("error {rate:.4} over {MAJORITY_RUNS} runs (Hoeffding {hoeffding:.4}, limit {MAJORITY_MAX_ERROR})"),
    )
}

fn criterion_7() -> (bool, String) {
    let c = Circuit::new(
        4,
        vec![
            Gate::h(0),
            Gate::t(0),
            Gate::h(0),
            Gate::ccx(1, 2, 0).unwrap(),
            Gate::cz(3, 0).unwrap(),
        ],
    )
    .unwrap();
    let inst = Dqc1Instance::single_output(c).unwrap();
    let p = common::dqc1_distribution(&inst)[0];
    // HTH leaves 0 with probability (2 + sqrt 2) / 4; the Toffoli swaps it on a quarter of the branches
    let c = (2.0 + std::f64::consts::SQRT_2) / 4.0;
    assert!((p - (0.75 * c + 0.25 * (1.0 - c))).abs() < 1e-12);
    let hat = sim::dqc1_sample::<f64>(&inst, SAMPLING_SHOTS, SEED)
        .unwrap()
        .probability(0);
    let tol = SAMPLING_SIGMAS * sigma(p, SAMPLING_SHOTS);
    (
        (hat - p).abs() <= tol,
        format!(
            "|{hat:.6} - {p:.6}| = {:.2e} <= {tol:.2e} at {SAMPLING_SHOTS} shots",
            (hat - p).abs()
        ),
    )
}

fn criterion_8() -> (bool, String) {
    let mut gen = ChaCha8Rng::seed_from_u64(SEED + 8);
    let mut worst = 0f64;
    let mut pure_spread = 0f64;
    let (yes, no) = promise_instances();
    let mut sources: Vec<BqpCircuit> = yes.into_iter().chain(no).collect();
    sources.extend((0..20).map(|i| promise(random_circuit(&mut gen, 1 + i % 5, 12, &H_T_CX))));
    for b in &sources {
        let art = reduction::reduce_bqp_to_dqc1(b).unwrap();
        let mixed =
            sim::dqc1_exact_with_clean_input::<f64>(&art.instance, CleanInput::MaximallyMixed, &Caps::default())
                .unwrap()
                .probability(0);
        worst = worst.max((mixed - 0.5).abs());
        let pure = sim::dqc1_exact::<f64>(&art.instance).unwrap().probability(0);
        pure_spread = pure_spread.max((pure - 0.5).abs());
    }
    (
        worst <= DEGENERACY_TOL,
        format!(
            "{} reduced instances, max |P - 1/2| {worst:.2e} with mixed clean input ({pure_spread:.4} with pure)",
            sources.len()
        ),
    )
}

type Criterion = fn() -> (bool, String);

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 8] = [
        ("identity reproduction", criterion_1),
        ("backend equivalence", criterion_2),
        ("one-sided estimator contract", criterion_3),
        ("first decider bounds", criterion_4),
        ("second decider bounds", criterion_5),
        ("majority amplification", criterion_6),
        ("sampling convergence", criterion_7),
        ("degeneracy", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let (ok, detail) = check();
        failed += usize::from(!ok);
        println!(
            "criterion {} {name}: {} ({detail})",
            i + 1,
            if ok { "PASS" } else { "FAIL" }
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
