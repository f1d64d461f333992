use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use dqc1::circuit::BqpCircuit;
use dqc1::decider::{self, DecideError, EstimatorConfig};
use dqc1::format::parse_document;
use dqc1::selftest::{self, Fault, SelftestOptions};
use dqc1::{format_instance, reduction, sim, Caps, Error, SimError};

#[derive(Parser)]
#[command(
    name = "dqc1",
    version,
    about = "One-clean-qubit simulation, reduction and decider harness"
)]
struct Cli {
    /// Global seed; every randomized step derives its own labeled stream from it.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Largest mixed register enumerated by the exact backend.
    #[arg(long, global = true, default_value_t = Caps::default().enumeration_mixed)]
    max_mixed: usize,

    /// Largest wire count accepted by the density-matrix backend.
    #[arg(long, global = true, default_value_t = Caps::default().density_wires)]
    max_density_wires: usize,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Output distribution of a DQC1 instance file.
    Simulate(SimulateArgs),
    /// Compile a promise circuit into a DQC1 instance.
    Reduce(ReduceArgs),
    /// Compare the simulated reduction against the closed-form P(a=0).
    VerifyIdentity(SourceArgs),
    /// Run a decider on a promise circuit.
    Decide(DecideArgs),
    /// Run the built-in property checks.
    Selftest(SelftestArgs),
}

#[derive(Args)]
struct SimulateArgs {
    #[arg(long = "in")]
    input: PathBuf,
    #[arg(long, conflicts_with_all = ["density", "shots"])]
    exact: bool,
    #[arg(long, conflicts_with = "shots")]
    density: bool,
    /// Sample this many shots instead of computing exactly.
    #[arg(long)]
    shots: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SourceArgs {
    #[arg(long = "in")]
    input: PathBuf,
    /// Wire whose |0> outcome means accept.
    #[arg(long, default_value_t = 0)]
    output_wire: usize,
    #[arg(long, default_value = "1/8", value_parser = fraction)]
    delta: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ReduceArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Write the report here instead of stdout (the instance goes to --out).
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Proof {
    First,
    Second,
}

#[derive(Clone, Copy, ValueEnum)]
enum EstimatorKind {
    ExactRounded,
    MockFpras,
    Mc,
}

#[derive(Args)]
struct DecideArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, value_enum, default_value = "first")]
    proof: Proof,
    /// Defaults to exact-rounded for the first proof and mock-fpras for the second.
    #[arg(long, value_enum)]
    estimator: Option<EstimatorKind>,
    #[arg(long, default_value = "1/4", value_parser = fraction)]
    epsilon: f64,
    #[arg(long, default_value = "1/4", value_parser = fraction)]
    eta: f64,
    /// Bits of the one-sided estimate; defaults to n + 8.
    #[arg(long)]
    r: Option<u32>,
    #[arg(long, default_value_t = 100_000)]
    shots: u64,
    /// Run this many single-shot trials and report rates instead of one amplified decision.
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long, default_value_t = 101)]
    majority_k: u32,
    #[arg(long, default_value_t = 55)]
    median_reps: u32,
}

#[derive(Args)]
struct SelftestArgs {
    #[arg(long)]
    quick: bool,
    /// Introduce a known defect; the affected checks must fail.
    #[arg(long, value_enum)]
    inject_fault: Option<FaultArg>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    Rounding,
}

/// Accepts decimals and `a/b` fractions.
fn fraction(s: &str) -> Result<f64, String> {
    let value = match s.split_once('/') {
        Some((a, b)) => {
            let a: f64 = a.trim().parse().map_err(|_| format!("bad numerator in `{s}`"))?;
            let b: f64 = b.trim().parse().map_err(|_| format!("bad denominator in `{s}`"))?;
            a / b
        }
        None => s.parse().map_err(|_| format!("`{s}` is not a number"))?,
    };
    if value.is_finite() {
        Ok(value)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

enum Failure {
    Usage(String),
    Lib(Error),
    Check(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Lib(Error::Sim(SimError::CapExceeded { .. })) => 2,
            Failure::Lib(Error::Decide(DecideError::PromiseViolation { .. })) => 3,
            _ => 1,
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) | Failure::Check(m) => m.clone(),
            Failure::Lib(e) => e.to_string(),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => {
            fs::write(path, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
        }
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json_line<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("records serialize");
    s.push('\n');
    s
}

fn load_source(args: &SourceArgs) -> Result<BqpCircuit, Failure> {
    let text = read(&args.input)?;
    let doc = parse_document(&text).map_err(|e| Failure::Lib(e.into()))?;
    Ok(BqpCircuit::new(doc.circuit, args.output_wire, args.delta).map_err(Error::from)?)
}

fn simulate(args: &SimulateArgs, seed: u64, caps: &Caps) -> Result<(), Failure> {
    let text = read(&args.input)?;
    let inst = parse_document(&text)
        .map_err(Error::from)?
        .into_instance()
        .map_err(Error::from)?;
    let dist = if let Some(shots) = args.shots {
        sim::dqc1_sample_capped::<f64>(&inst, shots, seed, caps)
    } else if args.density {
        sim::dqc1_density_capped::<f64>(&inst, caps)
    } else {
        sim::dqc1_exact_capped::<f64>(&inst, caps)
    }
    .map_err(Error::from)?;
    emit(args.out.as_deref(), &json_line(&dist.to_record()))
}

fn reduce(args: &ReduceArgs, caps: &Caps) -> Result<(), Failure> {
    let bqp = load_source(&args.source)?;
    let art = reduction::reduce_bqp_to_dqc1_capped(&bqp, caps)?;
    let check = reduction::check_identity(&bqp, caps)?;
    let instance_text = format_instance(&art.instance);
    let mut report = json!({
        "n": check.n,
        "wires": art.instance.wires(),
        "gates": art.instance.circuit().len(),
        "q": check.q,
        "predictedP0": check.predicted_p0,
        "simulatedP0": check.simulated_p0,
        "residual": check.residual,
    });
    match &args.source.out {
        Some(path) => emit(Some(path), &instance_text)?,
        None => {
            report["instance"] = json!(instance_text);
        }
    }
    emit(args.report.as_deref(), &json_line(&report))
}

fn verify_identity(args: &SourceArgs, caps: &Caps) -> Result<(), Failure> {
    let bqp = load_source(args)?;
    let check = reduction::check_identity(&bqp, caps)?;
    emit(args.out.as_deref(), &json_line(&check))?;
    if check.residual <= 1e-10 {
        Ok(())
    } else {
        Err(Failure::Check(format!(
            "identity residual {:e} exceeds 1e-10",
            check.residual
        )))
    }
}

fn decide(args: &DecideArgs, seed: u64, caps: &Caps) -> Result<(), Failure> {
    let bqp = load_source(&args.source)?;
    let n = bqp.width() as u32;
    let r = args.r.unwrap_or(n + 8);
    let estimator = match (args.proof, args.estimator) {
        (Proof::First, None | Some(EstimatorKind::ExactRounded)) => EstimatorConfig::ExactRounded { r },
        (Proof::First, Some(EstimatorKind::Mc)) => EstimatorConfig::MonteCarlo { shots: args.shots },
        (Proof::Second, None | Some(EstimatorKind::MockFpras)) => EstimatorConfig::MockFpras {
            epsilon: args.epsilon,
            eta: args.eta,
            median_reps: args.median_reps,
        },
        (Proof::First, Some(EstimatorKind::MockFpras)) => {
            return Err(Failure::Usage(
                "the first proof takes a one-sided estimate (exact-rounded or mc)".into(),
            ))
        }
        (Proof::Second, Some(_)) => {
            return Err(Failure::Usage(
                "the second proof takes a relative-error estimate (mock-fpras)".into(),
            ))
        }
    };
    let out = args.source.out.as_deref();
    match (args.trials, estimator) {
        (Some(trials), EstimatorConfig::ExactRounded { r }) => {
            let run = decider::run_first_proof(&bqp, r, trials, seed, caps)?;
            emit(out, &json_line(&run))
        }
        (
            Some(trials),
            EstimatorConfig::MockFpras {
                epsilon,
                eta,
                median_reps,
            },
        ) => {
            let run = decider::run_second_proof(&bqp, epsilon, eta, median_reps, trials, seed, caps)?;
            emit(out, &json_line(&run))
        }
        (Some(_), EstimatorConfig::MonteCarlo { .. }) => {
            Err(Failure::Usage("--trials is not supported with the mc estimator".into()))
        }
        (None, cfg) => {
            let result = decider::end_to_end_decide(&bqp, cfg, args.majority_k, seed, caps)?;
            emit(out, &json_line(&result))
        }
    }
}

fn selftest_cmd(args: &SelftestArgs, seed: u64) -> Result<(), Failure> {
    let report = selftest::run(&SelftestOptions {
        quick: args.quick,
        fault: args.inject_fault.map(|FaultArg::Rounding| Fault::FlipRounding),
        seed,
    });
    for check in &report.checks {
        println!("{check}");
    }
    if report.passed() {
        Ok(())
    } else {
        let names: Vec<_> = report.failures().map(|c| c.name).collect();
        Err(Failure::Check(format!("failed checks: {}", names.join(", "))))
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let caps = Caps {
        enumeration_mixed: cli.max_mixed,
        density_wires: cli.max_density_wires,
        ..Caps::default()
    };
    match &cli.command {
        Command::Simulate(a) => simulate(a, cli.seed, &caps),
        Command::Reduce(a) => reduce(a, &caps),
        Command::VerifyIdentity(a) => verify_identity(a, &caps),
        Command::Decide(a) => decide(a, cli.seed, &caps),
        Command::Selftest(a) => selftest_cmd(a, cli.seed),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message());
            ExitCode::from(f.exit_code())
        }
    }
}
