//! Command-line surface: entropy evaluation, bound lookup and certification,
//! single steering checks, noise-threshold bisection, parameter sweeps,
//! measurement optimization, the random-state survey, and `reproduce`
//! targets that emit the data behind the published figures as CSV.
//!
//! Exit codes: 0 success, 1 computation error, 2 configuration error.

mod reproduce;

use clap::{Args, Parser, Subcommand, ValueEnum};
use entrosteer::bounds::{
    bound_composite, bound_for_single, verify_bound_numeric_with, BoundScenario, BoundValue,
    DEFAULT_BUDGET, DEFAULT_RESTARTS,
};
use entrosteer::criteria::{
    closed_form_isotropic, closed_form_two_qubit_q2, guhne_global, linear_criterion,
    CriterionReport,
};
use entrosteer::entropy::{entropy, EntropyKind, ProbDist};
use entrosteer::linalg::RngSeed;
use entrosteer::measurements::{
    bes_measurements, mub_complete, mub_dim4, mub_fourier_pair, pauli_observable, pauli_set,
    MeasurementSet, MeasurementSetJson, PauliAxis,
};
use entrosteer::presets::{tripartite_config, TriScenario};
use entrosteer::solvers::{
    optimize_measurements, survey_random, sweep_parameter, threshold_bisect, CriterionConfig,
    SolverError, SweepAxis, SURVEY_CRITERIA,
};
use entrosteer::states::{bound_entangled, BlochParams, StateFamily};
use std::fmt::Write as _;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "entrosteer",
    version,
    about = "Entropic steering detection toolkit"
)]
struct Cli {
    /// RNG seed; overrides the ENTROSTEER_SEED environment variable (default 0)
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Cap on worker threads; results are identical for any value
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an entropy of a probability distribution
    Entropy(EntropyCmd),
    /// Look up (and optionally certify) an uncertainty bound
    Bound(BoundCmd),
    /// Run one steering criterion on one state
    Check(CheckCmd),
    /// Bisect the critical noise parameter of a family
    Threshold(ThresholdCmd),
    /// Threshold sweep over the entropy parameter
    Sweep(SweepCmd),
    /// Optimize measurement rotations for stronger violation
    Optimize(OptimizeCmd),
    /// Monte-Carlo survey of the two-qubit criteria over random states
    Survey(SurveyCmd),
    /// Emit the data behind a named figure or table as CSV
    Reproduce(ReproduceCmd),
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum KindArg {
    Shannon,
    Tsallis,
    Renyi,
}

#[derive(Args)]
struct EntropyCmd {
    /// Comma-separated outcome probabilities, e.g. 0.5,0.25,0.25
    #[arg(long)]
    probs: String,
    #[arg(long, value_enum, default_value = "shannon")]
    kind: KindArg,
    /// Tsallis parameter (q > 0, q ≠ 1)
    #[arg(long)]
    q: Option<f64>,
    /// Rényi parameter (r > 0, r ≠ 1)
    #[arg(long)]
    r: Option<f64>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum ScenarioArg {
    Single,
    CompositeSeparable,
    CompositeAny,
}

#[derive(Args)]
struct BoundCmd {
    /// Local dimension (single scenario) or of party A (composite)
    #[arg(long)]
    d: usize,
    /// Number of measurement settings
    #[arg(long)]
    m: usize,
    #[arg(long, value_enum, default_value = "shannon")]
    kind: KindArg,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long, value_enum, default_value = "single")]
    scenario: ScenarioArg,
    /// Dimension of party B for composite scenarios (defaults to --d)
    #[arg(long)]
    db: Option<usize>,
    /// Certify the value with the pure-state minimizer
    #[arg(long)]
    certify: bool,
    /// Objective evaluations per minimizer restart
    #[arg(long, default_value_t = DEFAULT_BUDGET)]
    budget: usize,
    /// Minimizer restarts
    #[arg(long, default_value_t = DEFAULT_RESTARTS)]
    restarts: usize,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Werner,
    Example2,
    Example3,
    QutritPair,
    Isotropic,
    OneWay,
    Ghz,
    W,
    Bes,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum CriterionArg {
    Shannon,
    Tsallis,
    Renyi,
    Guhne,
    Linear,
    ClosedTwoQubit,
    ClosedIsotropic,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum MeasArg {
    Pauli2,
    Pauli3,
    MubPair,
    MubComplete,
    Mub4,
    Bes,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum TriArg {
    /// Alice steers Bob and Charlie
    ABc,
    /// Alice and Bob steer Charlie with local measurements
    AbC,
    /// Alice and Bob steer Charlie with global dimension-4 measurements
    AbCGlobal,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum BoundChoiceArg {
    Separable,
    Any,
}

#[derive(Args)]
struct FamilySpec {
    #[arg(long, value_enum)]
    family: Option<FamilyArg>,
    /// Local dimension for the isotropic family
    #[arg(long)]
    d: Option<usize>,
    /// Schmidt weight x of the two-qutrit family
    #[arg(long)]
    x: Option<f64>,
    /// Angle θ of the one-way family
    #[arg(long)]
    theta: Option<f64>,
    /// Bound-entangled family parameters
    #[arg(long)]
    m1: Option<f64>,
    #[arg(long)]
    m2: Option<f64>,
}

#[derive(Args)]
struct ParamSpec {
    /// Family parameter (visibility / noise weight), generic spelling
    #[arg(long)]
    param: Option<f64>,
    /// Visibility w (noise families)
    #[arg(long)]
    w: Option<f64>,
    /// Isotropic α
    #[arg(long)]
    alpha: Option<f64>,
    /// One-way β
    #[arg(long)]
    beta: Option<f64>,
    /// GHZ visibility γ
    #[arg(long)]
    gamma: Option<f64>,
    /// W visibility δ
    #[arg(long)]
    delta: Option<f64>,
}

impl ParamSpec {
    fn get(&self) -> Option<f64> {
        self.param
            .or(self.w)
            .or(self.alpha)
            .or(self.beta)
            .or(self.gamma)
            .or(self.delta)
    }
}

#[derive(Args)]
struct CriterionSpec {
    #[arg(long, value_enum)]
    criterion: CriterionArg,
    #[arg(long)]
    q: Option<f64>,
    #[arg(long)]
    r: Option<f64>,
    #[arg(long, value_enum)]
    meas: Option<MeasArg>,
    /// Tripartite split (GHZ/W families only)
    #[arg(long, value_enum)]
    scenario: Option<TriArg>,
    /// Setting count for tripartite presets
    #[arg(long)]
    m: Option<usize>,
    /// Composite-bound choice for the A→BC split
    #[arg(long, value_enum, default_value = "separable")]
    bound: BoundChoiceArg,
}

#[derive(Args)]
struct CheckCmd {
    #[command(flatten)]
    family: FamilySpec,
    #[command(flatten)]
    param: ParamSpec,
    #[command(flatten)]
    criterion: CriterionSpec,
    /// Load the state from a JSON file ({"dim":d,"re":[[..]],"im":[[..]]})
    /// instead of a named family; invariants are verified on load
    #[arg(long, conflicts_with = "family")]
    state_json: Option<std::path::PathBuf>,
    /// Party dimensions of a JSON state, e.g. 2,2
    #[arg(long)]
    dims: Option<String>,
    /// Measure conjugated bases on the trusted side of a JSON state
    #[arg(long, default_value_t = false)]
    conjugate_bob: bool,
}

#[derive(Args)]
struct ThresholdCmd {
    #[command(flatten)]
    family: FamilySpec,
    #[command(flatten)]
    criterion: CriterionSpec,
    #[arg(long, default_value_t = 1e-4)]
    resolution: f64,
    #[arg(long, value_enum, default_value = "json")]
    format: FormatArg,
    #[arg(long)]
    output: Option<std::path::PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum AxisArg {
    Q,
    R,
}

#[derive(Args)]
struct SweepCmd {
    #[command(flatten)]
    family: FamilySpec,
    #[arg(long, value_enum)]
    axis: AxisArg,
    /// Comma-separated strictly increasing parameter grid
    #[arg(long)]
    grid: String,
    #[arg(long, value_enum)]
    meas: Option<MeasArg>,
    #[arg(long, default_value_t = 1e-4)]
    resolution: f64,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    #[arg(long)]
    output: Option<std::path::PathBuf>,
}

#[derive(Args)]
struct OptimizeCmd {
    #[command(flatten)]
    family: FamilySpec,
    #[command(flatten)]
    param: ParamSpec,
    #[command(flatten)]
    criterion: CriterionSpec,
    #[arg(long, default_value_t = 32)]
    restarts: usize,
}

#[derive(Args)]
struct SurveyCmd {
    /// Number of Hilbert-Schmidt random two-qubit samples
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum, default_value = "csv")]
    format: FormatArg,
    #[arg(long)]
    output: Option<std::path::PathBuf>,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum FormatArg {
    Csv,
    Json,
}

#[derive(Args)]
struct ReproduceCmd {
    /// fig2 | fig3 | fig4 | fig5 | fig6 | fig7 | oneway | tripartite-table
    target: String,
    #[arg(long)]
    output: Option<std::path::PathBuf>,
}

enum CliError {
    Config(String),
    Compute(String),
}

impl CliError {
    fn config(msg: impl Into<String>) -> Self {
        CliError::Config(msg.into())
    }
    fn compute(msg: impl Into<String>) -> Self {
        CliError::Compute(msg.into())
    }
}

type CliResult<T = ()> = Result<T, CliError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if n > 0 {
            // ignore failure if a pool already exists; results do not depend on it
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global();
        }
    }
    let seed = RngSeed(cli.seed.unwrap_or_else(|| {
        std::env::var("ENTROSTEER_SEED")
            .ok()
            .and_then(|s| s.parse().ok())
            .unwrap_or(0)
    }));
    let result = match cli.command {
        Command::Entropy(cmd) => run_entropy(cmd),
        Command::Bound(cmd) => run_bound(cmd, seed),
        Command::Check(cmd) => run_check(cmd),
        Command::Threshold(cmd) => run_threshold(cmd),
        Command::Sweep(cmd) => run_sweep(cmd, seed),
        Command::Optimize(cmd) => run_optimize(cmd, seed),
        Command::Survey(cmd) => run_survey(cmd, seed),
        Command::Reproduce(cmd) => {
            reproduce::run(&cmd.target, cmd.output.as_deref(), seed).map_err(CliError::Compute)
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Config(msg)) => {
            eprintln!("configuration error: {msg}");
            ExitCode::from(2)
        }
        Err(CliError::Compute(msg)) => {
            eprintln!("computation error: {msg}");
            ExitCode::from(1)
        }
    }
}

fn parse_kind(kind: KindArg, q: Option<f64>, r: Option<f64>) -> CliResult<EntropyKind> {
    match kind {
        KindArg::Shannon => Ok(EntropyKind::Shannon),
        KindArg::Tsallis => {
            let q = q.ok_or_else(|| CliError::config("--kind tsallis requires --q"))?;
            EntropyKind::tsallis(q).map_err(|e| CliError::config(e.to_string()))
        }
        KindArg::Renyi => {
            let r = r.ok_or_else(|| CliError::config("--kind renyi requires --r"))?;
            EntropyKind::renyi(r).map_err(|e| CliError::config(e.to_string()))
        }
    }
}

fn run_entropy(cmd: EntropyCmd) -> CliResult {
    let probs: Vec<f64> = cmd
        .probs
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::config(format!("--probs: {e}")))?;
    let dist = ProbDist::new(probs).map_err(|e| CliError::config(e.to_string()))?;
    let kind = parse_kind(cmd.kind, cmd.q, cmd.r)?;
    let value = entropy(&dist, kind);
    let out = serde_json::json!({ "probs": dist.probs(), "kind": kind, "value": value });
    println!("{}", serde_json::to_string_pretty(&out).unwrap());
    Ok(())
}

/// Canonical measurement set used to certify a catalog bound.
fn certification_set(d: usize, m: usize) -> CliResult<MeasurementSet> {
    let full = match d {
        2 => entrosteer::measurements::pauli_triple(),
        4 => mub_dim4(),
        _ => mub_complete(d).map_err(|e| CliError::config(e.to_string()))?,
    };
    if m > full.len() {
        return Err(CliError::config(format!(
            "no canonical set with {m} bases in dimension {d}"
        )));
    }
    full.take(m).map_err(|e| CliError::config(e.to_string()))
}

fn run_bound(cmd: BoundCmd, seed: RngSeed) -> CliResult {
    let kind = parse_kind(cmd.kind, cmd.q, cmd.r)?;
    let scenario = match cmd.scenario {
        ScenarioArg::Single => BoundScenario::Single,
        ScenarioArg::CompositeSeparable => BoundScenario::CompositeSeparable,
        ScenarioArg::CompositeAny => BoundScenario::CompositeAny,
    };
    let db = cmd.db.unwrap_or(cmd.d);
    let catalog: BoundValue = match scenario {
        BoundScenario::Single => bound_for_single(kind, cmd.d, cmd.m),
        _ => bound_composite(cmd.d, db, cmd.m, kind, scenario),
    }
    .map_err(|e| CliError::config(e.to_string()))?;
    let mut out = serde_json::json!({
        "d": cmd.d, "m": cmd.m, "kind": kind, "scenario": scenario, "catalog": catalog,
    });
    if cmd.certify {
        let set_a = certification_set(cmd.d, cmd.m)?;
        let sets: Vec<&MeasurementSet>;
        let set_b;
        match scenario {
            BoundScenario::Single => sets = vec![&set_a],
            _ => {
                set_b = certification_set(db, cmd.m)?;
                sets = vec![&set_a, &set_b];
            }
        }
        let nb = verify_bound_numeric_with(&sets, kind, scenario, cmd.restarts, cmd.budget, seed)
            .map_err(|e| CliError::compute(e.to_string()))?;
        let gap = nb.bound.value - catalog.value;
        out["certificate"] = serde_json::json!({ "bound": nb.bound, "gap": gap });
    }
    println!("{}", serde_json::to_string_pretty(&out).unwrap());
    Ok(())
}

fn build_family(spec: &FamilySpec) -> CliResult<StateFamily> {
    let family = spec
        .family
        .ok_or_else(|| CliError::config("--family is required"))?;
    Ok(match family {
        FamilyArg::Werner => StateFamily::Werner,
        FamilyArg::Example2 => StateFamily::NoisyExampleTwo,
        FamilyArg::Example3 => StateFamily::NoisyExampleThree,
        FamilyArg::QutritPair => StateFamily::NoisyQutritPair {
            x: spec.x.unwrap_or(1.0),
        },
        FamilyArg::Isotropic => StateFamily::Isotropic {
            d: spec
                .d
                .ok_or_else(|| CliError::config("--family isotropic requires --d"))?,
        },
        FamilyArg::OneWay => StateFamily::OneWay {
            theta: spec
                .theta
                .ok_or_else(|| CliError::config("--family one-way requires --theta"))?,
        },
        FamilyArg::Ghz => StateFamily::NoisyGhz,
        FamilyArg::W => StateFamily::NoisyW,
        FamilyArg::Bes => {
            return Err(CliError::config(
                "the bound-entangled family is a two-parameter state; use check with --m1/--m2",
            ))
        }
    })
}

/// Measurement set for one party of the given local dimension.
fn build_meas(meas: MeasArg, d: usize) -> CliResult<MeasurementSet> {
    let err = |m: &str| CliError::config(format!("{m} needs local dimension match, got d={d}"));
    match meas {
        MeasArg::Pauli2 => {
            if d != 2 {
                return Err(err("pauli2"));
            }
            pauli_set(&[PauliAxis::X, PauliAxis::Z]).map_err(|e| CliError::config(e.to_string()))
        }
        MeasArg::Pauli3 => {
            if d != 2 {
                return Err(err("pauli3"));
            }
            Ok(entrosteer::measurements::pauli_triple())
        }
        MeasArg::MubPair => mub_fourier_pair(d).map_err(|e| CliError::config(e.to_string())),
        MeasArg::MubComplete => {
            if d == 4 {
                Ok(mub_dim4())
            } else {
                mub_complete(d).map_err(|e| CliError::config(e.to_string()))
            }
        }
        MeasArg::Mub4 => {
            if d != 4 {
                return Err(err("mub4"));
            }
            Ok(mub_dim4())
        }
        MeasArg::Bes => {
            if d != 3 {
                return Err(err("bes"));
            }
            Ok(bes_measurements())
        }
    }
}

fn default_meas(family: &StateFamily) -> MeasArg {
    match family {
        StateFamily::Isotropic { .. } | StateFamily::NoisyQutritPair { .. } => MeasArg::MubComplete,
        _ => MeasArg::Pauli3,
    }
}

/// Conjugate Bob bases are the convention for the twirl-invariant families.
fn conjugate_bob(family: &StateFamily) -> bool {
    matches!(
        family,
        StateFamily::Isotropic { .. } | StateFamily::NoisyQutritPair { .. }
    )
}

fn bipartite_sets(
    family: &StateFamily,
    meas: Option<MeasArg>,
) -> CliResult<(MeasurementSet, MeasurementSet)> {
    let d = family.party_dims()[0];
    let alice = build_meas(meas.unwrap_or_else(|| default_meas(family)), d)?;
    let bob = if conjugate_bob(family) {
        alice.conjugate()
    } else {
        alice.clone()
    };
    Ok((alice, bob))
}

fn tri_scenario(arg: TriArg, bound: BoundChoiceArg) -> TriScenario {
    match arg {
        TriArg::ABc => TriScenario::AToBc {
            separable_bound: matches!(bound, BoundChoiceArg::Separable),
        },
        TriArg::AbC => TriScenario::AbToCLocal,
        TriArg::AbCGlobal => TriScenario::AbToCGlobal,
    }
}

fn build_config(family: &StateFamily, spec: &CriterionSpec) -> CliResult<CriterionConfig> {
    let kind = match spec.criterion {
        CriterionArg::Shannon => EntropyKind::Shannon,
        CriterionArg::Tsallis => parse_kind(KindArg::Tsallis, spec.q, spec.r)?,
        CriterionArg::Renyi => parse_kind(KindArg::Renyi, spec.q, spec.r)?,
        other => {
            return Err(CliError::config(format!(
                "criterion {:?} is not a threshold/conditional criterion",
                other as u8
            )))
        }
    };
    if family.party_dims().len() == 3 {
        let scenario = spec
            .scenario
            .ok_or_else(|| CliError::config("tripartite families need --scenario"))?;
        let m = spec.m.unwrap_or(3);
        tripartite_config(family, tri_scenario(scenario, spec.bound), m, kind)
            .map_err(|e| CliError::config(e.to_string()))
    } else {
        let (alice, bob) = bipartite_sets(family, spec.meas)?;
        CriterionConfig::bipartite(kind, alice, bob).map_err(|e| CliError::config(e.to_string()))
    }
}

fn print_report(report: &CriterionReport) {
    println!("{}", serde_json::to_string_pretty(report).unwrap());
}

fn run_check(cmd: CheckCmd) -> CliResult {
    // an explicit JSON state runs the bipartite conditional criteria
    if let Some(path) = &cmd.state_json {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("reading {}: {e}", path.display())))?;
        let rho = entrosteer::DensityMatrix::from_json(&text)
            .map_err(|e| CliError::config(format!("invalid state: {e}")))?;
        let dims_str = cmd
            .dims
            .as_deref()
            .ok_or_else(|| CliError::config("--state-json requires --dims"))?;
        let dims: Vec<usize> = dims_str
            .split(',')
            .map(|s| s.trim().parse::<usize>())
            .collect::<Result<_, _>>()
            .map_err(|e| CliError::config(format!("--dims: {e}")))?;
        if dims.len() != 2 || dims.iter().product::<usize>() != rho.dim() {
            return Err(CliError::config(format!(
                "--dims must name two factors of the state dimension {}",
                rho.dim()
            )));
        }
        let kind = match cmd.criterion.criterion {
            CriterionArg::Shannon => EntropyKind::Shannon,
            CriterionArg::Tsallis => {
                parse_kind(KindArg::Tsallis, cmd.criterion.q, cmd.criterion.r)?
            }
            CriterionArg::Renyi => parse_kind(KindArg::Renyi, cmd.criterion.q, cmd.criterion.r)?,
            _ => {
                return Err(CliError::config(
                    "JSON states support shannon/tsallis/renyi checks",
                ))
            }
        };
        let meas = cmd
            .criterion
            .meas
            .ok_or_else(|| CliError::config("--state-json requires --meas"))?;
        if dims[0] != dims[1] {
            return Err(CliError::config("JSON checks need equal party dimensions"));
        }
        let alice = build_meas(meas, dims[0])?;
        let bob = if cmd.conjugate_bob {
            alice.conjugate()
        } else {
            alice.clone()
        };
        let config = CriterionConfig::bipartite(kind, alice, bob)
            .map_err(|e| CliError::config(e.to_string()))?;
        let report = config
            .evaluate(&rho)
            .map_err(|e| CliError::compute(e.to_string()))?;
        print_report(&report);
        return Ok(());
    }

    // the bound-entangled family is checked directly from its two parameters
    if cmd.family.family == Some(FamilyArg::Bes) {
        let (m1, m2) = (
            cmd.family
                .m1
                .ok_or_else(|| CliError::config("--family bes requires --m1"))?,
            cmd.family
                .m2
                .ok_or_else(|| CliError::config("--family bes requires --m2"))?,
        );
        let rho = bound_entangled(m1, m2).map_err(|e| CliError::config(e.to_string()))?;
        let set = bes_measurements();
        let kind = match cmd.criterion.criterion {
            CriterionArg::Shannon => EntropyKind::Shannon,
            CriterionArg::Tsallis => {
                parse_kind(KindArg::Tsallis, cmd.criterion.q, cmd.criterion.r)?
            }
            CriterionArg::Renyi => parse_kind(KindArg::Renyi, cmd.criterion.q, cmd.criterion.r)?,
            _ => {
                return Err(CliError::config(
                    "bes family supports shannon/tsallis/renyi checks",
                ))
            }
        };
        let config = CriterionConfig::bipartite(kind, set.clone(), set)
            .map_err(|e| CliError::config(e.to_string()))?;
        let report = config
            .evaluate(&rho)
            .map_err(|e| CliError::compute(e.to_string()))?;
        print_report(&report);
        return Ok(());
    }

    let family = build_family(&cmd.family)?;
    let t = cmd
        .param
        .get()
        .ok_or_else(|| CliError::config("check needs the family parameter (e.g. --w, --alpha)"))?;
    let rho = family
        .state(t)
        .map_err(|e| CliError::config(e.to_string()))?;

    match cmd.criterion.criterion {
        CriterionArg::Shannon | CriterionArg::Tsallis | CriterionArg::Renyi => {
            let config = build_config(&family, &cmd.criterion)?;
            let report = config
                .evaluate(&rho)
                .map_err(|e| CliError::compute(e.to_string()))?;
            print_report(&report);
        }
        CriterionArg::Guhne => {
            if rho.dim() != 4 {
                return Err(CliError::config("guhne check expects a two-qubit family"));
            }
            let q = cmd.criterion.q.unwrap_or(2.0);
            let pairs = vec![
                (
                    pauli_observable(PauliAxis::X),
                    pauli_observable(PauliAxis::X),
                ),
                (
                    pauli_observable(PauliAxis::Y),
                    pauli_observable(PauliAxis::Y),
                ),
                (
                    pauli_observable(PauliAxis::Z),
                    pauli_observable(PauliAxis::Z),
                ),
            ];
            let bound = bound_for_single(EntropyKind::Tsallis { q }, 2, 3)
                .map_err(|e| CliError::config(e.to_string()))?;
            let report = guhne_global(&rho, &pairs, EntropyKind::Tsallis { q }, &bound)
                .map_err(|e| CliError::compute(e.to_string()))?;
            print_report(&report);
        }
        CriterionArg::Linear => {
            if rho.dim() != 4 {
                return Err(CliError::config("linear check expects a two-qubit family"));
            }
            let (_, _, c) = entrosteer::solvers::canonical_bloch(&rho);
            print_report(&linear_criterion(&c));
        }
        CriterionArg::ClosedTwoQubit => {
            if rho.dim() != 4 {
                return Err(CliError::config(
                    "closed-two-qubit check expects a two-qubit family",
                ));
            }
            let (a, b, c) = entrosteer::solvers::canonical_bloch(&rho);
            let report = closed_form_two_qubit_q2(&BlochParams { a, b, c })
                .map_err(|e| CliError::compute(e.to_string()))?;
            print_report(&report);
        }
        CriterionArg::ClosedIsotropic => {
            let StateFamily::Isotropic { d } = family else {
                return Err(CliError::config(
                    "closed-isotropic requires --family isotropic",
                ));
            };
            let q = cmd.criterion.q.unwrap_or(2.0);
            let m = cmd.criterion.m.unwrap_or(d + 1);
            let report =
                closed_form_isotropic(d, m, q, t).map_err(|e| CliError::compute(e.to_string()))?;
            print_report(&report);
        }
    }
    Ok(())
}

fn write_out(path: Option<&std::path::Path>, content: &str) -> CliResult {
    match path {
        Some(p) => std::fs::write(p, content)
            .map_err(|e| CliError::compute(format!("writing {}: {e}", p.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn run_threshold(cmd: ThresholdCmd) -> CliResult {
    let family = build_family(&cmd.family)?;
    let config = build_config(&family, &cmd.criterion)?;
    let result = threshold_bisect(&family, &config, cmd.resolution);
    let content = match (&result, cmd.format) {
        (Ok(r), FormatArg::Json) => format!("{}\n", serde_json::to_string_pretty(r).unwrap()),
        (Ok(r), FormatArg::Csv) => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "# criterion={} bound={:.6} family={}",
                r.criterion,
                config.bound().value,
                r.family
            );
            let _ = writeln!(s, "family,criterion,threshold,resolution,evaluations");
            let _ = writeln!(
                s,
                "{},{},{:.4},{:.0e},{}",
                r.family, r.criterion, r.critical, r.resolution, r.evaluations
            );
            s
        }
        (Err(SolverError::NoViolation), FormatArg::Json) => format!(
            "{}\n",
            serde_json::json!({
                "family": family.label(),
                "criterion": config.label(),
                "threshold": null,
                "status": "no-violation",
            })
        ),
        (Err(SolverError::NoViolation), FormatArg::Csv) => {
            let mut s = String::new();
            let _ = writeln!(s, "family,criterion,threshold,resolution,evaluations");
            let _ = writeln!(s, "{},{},none,,", family.label(), config.label());
            s
        }
        (Err(e), _) => return Err(CliError::compute(e.to_string())),
    };
    write_out(cmd.output.as_deref(), &content)
}

fn run_sweep(cmd: SweepCmd, seed: RngSeed) -> CliResult {
    let family = build_family(&cmd.family)?;
    if family.party_dims().len() != 2 {
        return Err(CliError::config("sweep supports bipartite families"));
    }
    let grid: Vec<f64> = cmd
        .grid
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::config(format!("--grid: {e}")))?;
    let axis = match cmd.axis {
        AxisArg::Q => SweepAxis::TsallisQ,
        AxisArg::R => SweepAxis::RenyiR,
    };
    let (alice, bob) = bipartite_sets(&family, cmd.meas)?;
    let curve = sweep_parameter(&family, &alice, &bob, axis, &grid, cmd.resolution)
        .map_err(|e| CliError::compute(e.to_string()))?;
    let content = match cmd.format {
        FormatArg::Json => format!("{}\n", serde_json::to_string_pretty(&curve).unwrap()),
        FormatArg::Csv => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "# threshold sweep: family={} axis={:?} seed={}",
                curve.family, curve.axis, seed.0
            );
            let _ = writeln!(s, "# columns: param, critical visibility (none = no violation), bound value, bound provenance");
            let _ = writeln!(s, "param,threshold,bound,provenance");
            for p in &curve.points {
                let thr = p
                    .threshold
                    .map_or("none".to_string(), |t| format!("{t:.4}"));
                let (bv, prov) = match &p.bound {
                    Some(b) => (format!("{:.6}", b.value), provenance_label(b)),
                    None => (String::new(), String::new()),
                };
                let _ = writeln!(s, "{},{},{},{}", fmt_param(p.param), thr, bv, prov);
            }
            s
        }
    };
    write_out(cmd.output.as_deref(), &content)
}

fn provenance_label(b: &BoundValue) -> String {
    match &b.provenance {
        entrosteer::bounds::Provenance::Analytic { rule } => format!("analytic:{rule}"),
        entrosteer::bounds::Provenance::Conjectured { rule, .. } => format!("conjectured:{rule}"),
        entrosteer::bounds::Provenance::Numerical { .. } => "numerical".into(),
    }
}

fn fmt_param(x: f64) -> String {
    format!("{x:.4}")
}

fn run_optimize(cmd: OptimizeCmd, seed: RngSeed) -> CliResult {
    let family = build_family(&cmd.family)?;
    let t = cmd
        .param
        .get()
        .ok_or_else(|| CliError::config("optimize needs the family parameter"))?;
    let rho = family
        .state(t)
        .map_err(|e| CliError::config(e.to_string()))?;
    let config = build_config(&family, &cmd.criterion)?;
    let base = config
        .evaluate(&rho)
        .map_err(|e| CliError::compute(e.to_string()))?;
    let opt = optimize_measurements(&rho, &config, cmd.restarts, seed)
        .map_err(|e| CliError::compute(e.to_string()))?;
    let sets: Vec<MeasurementSetJson> = opt.sets.iter().map(MeasurementSetJson::from_set).collect();
    let out = serde_json::json!({
        "family": family.label(),
        "parameter": t,
        "base": base,
        "optimized": opt.report,
        "improvement": base.margin() - opt.report.margin(),
        "restarts": opt.restarts,
        "sets": sets,
    });
    println!("{}", serde_json::to_string_pretty(&out).unwrap());
    Ok(())
}

fn run_survey(cmd: SurveyCmd, seed: RngSeed) -> CliResult {
    if cmd.n == 0 {
        return Err(CliError::config("--n must be at least 1"));
    }
    let table = survey_random(cmd.n, seed, &SURVEY_CRITERIA);
    let content = match cmd.format {
        FormatArg::Json => {
            let summary = serde_json::json!({
                "table": table,
                "none": survey_row_json(&table, table.none_violated()),
                "all": survey_row_json(&table, table.all_violated()),
                "only_closed_form": survey_row_json(&table, table.only_closed_form()),
                "linear_without_closed_form":
                    survey_row_json(&table, table.linear_without_closed_form()),
            });
            format!("{}\n", serde_json::to_string_pretty(&summary).unwrap())
        }
        FormatArg::Csv => {
            let mut s = String::new();
            let _ = writeln!(
                s,
                "# random-state survey: n={} seed={} criteria=closed-form-q2,global-q2,linear",
                table.n, table.seed
            );
            let _ = writeln!(
                s,
                "# columns: subset of criteria violated, count, fraction, Wilson 95% interval"
            );
            let _ = writeln!(s, "subset,count,fraction,wilson_lo,wilson_hi");
            let names = ["closed-form-q2", "global-q2", "linear"];
            for (pattern, &count) in table.pattern_counts.iter().enumerate() {
                let mut subset: Vec<&str> = Vec::new();
                for (k, name) in names.iter().enumerate() {
                    if pattern & (1 << k) != 0 {
                        subset.push(name);
                    }
                }
                let label = if subset.is_empty() {
                    "none".to_string()
                } else {
                    subset.join("+")
                };
                let (lo, hi) = table.wilson(count);
                let _ = writeln!(
                    s,
                    "{label},{count},{:.6},{:.6},{:.6}",
                    table.fraction(count),
                    lo,
                    hi
                );
            }
            for (label, count) in [
                ("summary:none", table.none_violated()),
                ("summary:all-three", table.all_violated()),
                ("summary:only-closed-form", table.only_closed_form()),
                (
                    "summary:linear-without-closed-form",
                    table.linear_without_closed_form(),
                ),
            ] {
                let (lo, hi) = table.wilson(count);
                let _ = writeln!(
                    s,
                    "{label},{count},{:.6},{:.6},{:.6}",
                    table.fraction(count),
                    lo,
                    hi
                );
            }
            s
        }
    };
    write_out(cmd.output.as_deref(), &content)
}

fn survey_row_json(table: &entrosteer::solvers::SurveyTable, count: usize) -> serde_json::Value {
    let (lo, hi) = table.wilson(count);
    serde_json::json!({
        "count": count,
        "fraction": table.fraction(count),
        "wilson95": [lo, hi],
    })
}
