//! The `weightlat` command line.
//!
//! Exit codes: 0 success (or the property holds), 1 the property fails or a
//! repair guarantee is unmet, 2 usage error, 3 input error, 4 a size guard or
//! oracle budget was exceeded.

pub mod io;
pub mod report;

use std::ffi::OsString;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use crate::convex::{self, ConvexMode};
use crate::error::Error;
use crate::guard::Guards;
use crate::lattice::{build_family, Family, FamilyKind};
use crate::oracle::{brute_defect, OracleBudget};
use crate::report::{DefectReport, Property, RepairResult};
use crate::weights::{gen_param_weights, perturb, random_weights, ParamKind, WeightFn};
use crate::{monotone, subadditive};

use io::InputError;
use report::{oracle_agrees, Row, CSV_HEADER};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;
pub const EXIT_GUARD: i32 = 4;

#[derive(Parser)]
#[command(
    name = "weightlat",
    version,
    about = "Defects and repairs of weight functions on subgraph lattices"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the weights satisfy a property with slack --epsilon.
    Check(CheckArgs),
    /// Compute the defect of a property and a witness attaining it.
    Defect(DefectArgs),
    /// Build a nearby weight function with the exact property.
    Repair(RepairArgs),
    /// Generate a weight file from a graph parameter or random values.
    Gen(GenArgs),
    /// Defects of every property (convex in both modes).
    Report(ReportArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    VertexInduced,
    EdgeSubsets,
    Explicit,
}

#[derive(Clone, Copy, ValueEnum)]
enum PropertyArg {
    Monotone,
    Subadditive,
    Convex,
}

impl From<PropertyArg> for Property {
    fn from(p: PropertyArg) -> Self {
        match p {
            PropertyArg::Monotone => Property::Monotone,
            PropertyArg::Subadditive => Property::Subadditive,
            PropertyArg::Convex => Property::Convex,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Strict,
    Literal,
}

impl From<ModeArg> for ConvexMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Strict => ConvexMode::StrictChain,
            ModeArg::Literal => ConvexMode::PaperLiteral,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ParamArg {
    MaxDegree,
    CliqueNumber,
    IndependenceNumber,
    ChromaticNumber,
    ComponentCount,
    Order,
    Size,
}

impl From<ParamArg> for ParamKind {
    fn from(p: ParamArg) -> Self {
        match p {
            ParamArg::MaxDegree => ParamKind::MaxDegree,
            ParamArg::CliqueNumber => ParamKind::CliqueNumber,
            ParamArg::IndependenceNumber => ParamKind::IndependenceNumber,
            ParamArg::ChromaticNumber => ParamKind::ChromaticNumber,
            ParamArg::ComponentCount => ParamKind::ComponentCount,
            ParamArg::Order => ParamKind::Order,
            ParamArg::Size => ParamKind::Size,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct FamilyArgs {
    /// Graph file, {"n": .., "edges": [[u, v], ..]}.
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "vertex-induced")]
    family: FamilyArg,
    /// Explicit family file, {"elements": [..], "leq": [[i, j], ..], "top": k}.
    #[arg(long)]
    explicit: Option<PathBuf>,
    /// Raise every size guard to N, or lift them with any non-numeric value.
    /// Overrides the WEIGHTLAT_GUARD environment variable.
    #[arg(long, value_name = "N")]
    guard_override: Option<String>,
}

#[derive(Args)]
struct EvalArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long)]
    weights: PathBuf,
    #[arg(long, value_enum)]
    property: PropertyArg,
    /// Convex triples with strict (chain) or non-strict containment.
    #[arg(long, value_enum, default_value = "strict")]
    mode: ModeArg,
    /// Also compute the defect by brute force and compare.
    #[arg(long)]
    oracle: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Include wall-clock timings (makes reports differ between runs).
    #[arg(long)]
    timings: bool,
}

#[derive(Args)]
struct CheckArgs {
    #[command(flatten)]
    eval: EvalArgs,
    #[arg(long)]
    epsilon: f64,
}

#[derive(Args)]
struct DefectArgs {
    #[command(flatten)]
    eval: EvalArgs,
}

#[derive(Args)]
struct RepairArgs {
    #[command(flatten)]
    eval: EvalArgs,
    #[arg(long)]
    epsilon: f64,
    /// Convergence threshold on the sup-norm change of one convex step.
    #[arg(long, default_value_t = convex::DEFAULT_TOL)]
    tol: f64,
    #[arg(long, default_value_t = convex::DEFAULT_MAX_ITER)]
    max_iter: usize,
    /// Write the repaired weights to this file.
    #[arg(long)]
    weights_out: Option<PathBuf>,
}

#[derive(Args)]
struct ReportArgs {
    #[command(flatten)]
    family: FamilyArgs,
    #[arg(long)]
    weights: PathBuf,
    #[arg(long)]
    oracle: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
#[command(group = clap::ArgGroup::new("source").required(true).args(["param", "random"]))]
struct GenArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Exact graph parameter of each subgraph.
    #[arg(long, value_enum)]
    param: Option<ParamArg>,
    /// Added to every parameter value.
    #[arg(long, default_value_t = 0.0, requires = "param")]
    offset: f64,
    /// Uniform random weights on [--lo, --hi].
    #[arg(long)]
    random: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.0)]
    lo: f64,
    #[arg(long, default_value_t = 10.0)]
    hi: f64,
    /// Add uniform noise of at most this size (seeded by --seed + 1).
    #[arg(long, value_name = "DELTA")]
    perturb: Option<f64>,
    /// Output weight file (standard output if omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Input(String),
    Guard(String),
    Output(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Input(_) | Failure::Output(_) => EXIT_INPUT,
            Failure::Guard(_) => EXIT_GUARD,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Input(m) | Failure::Guard(m) | Failure::Output(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::GuardExceeded { .. } | Error::BudgetExceeded { .. } => {
                Failure::Guard(e.to_string())
            }
            Error::InvalidArgument(_) | Error::NeedsSubgraphFamily => Failure::Usage(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        match &e {
            InputError::Lib(_, Error::GuardExceeded { .. }) => Failure::Guard(e.to_string()),
            _ => Failure::Input(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<i32, Failure>;

/// Runs one command. `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let echo: Vec<String> = argv
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    let result = match cli.command {
        Command::Check(a) => check(&echo, a),
        Command::Defect(a) => defect(&echo, a),
        Command::Repair(a) => repair(&echo, a),
        Command::Gen(a) => gen(a),
        Command::Report(a) => full_report(&echo, a),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("weightlat: {}", f.message());
            f.code()
        }
    }
}

fn guards(args: &FamilyArgs) -> std::result::Result<Guards, Failure> {
    match &args.guard_override {
        Some(v) => Guards::from_env_value(v)
            .ok_or_else(|| Failure::Usage("--guard-override needs a value".into())),
        None => Ok(Guards::from_env().unwrap_or_default()),
    }
}

struct Loaded {
    graph: Option<crate::lattice::Graph>,
    family: Family,
}

fn load_family(args: &FamilyArgs) -> std::result::Result<Loaded, Failure> {
    let guards = guards(args)?;
    match (args.family, &args.explicit) {
        (FamilyArg::Explicit, Some(path)) => {
            let poset = io::parse_explicit(path)?;
            let family = Family::explicit(poset, guards)
                .map_err(|e| Failure::from(InputError::Lib(path.clone(), e)))?;
            Ok(Loaded {
                graph: None,
                family,
            })
        }
        (FamilyArg::Explicit, None) => Err(Failure::Usage(
            "--family explicit needs --explicit FILE".into(),
        )),
        (_, Some(_)) => Err(Failure::Usage("--explicit needs --family explicit".into())),
        (kind, None) => {
            let path = args
                .graph
                .as_ref()
                .ok_or_else(|| Failure::Usage("--graph FILE is required".into()))?;
            let graph = io::parse_graph(path)?;
            let kind = match kind {
                FamilyArg::EdgeSubsets => FamilyKind::EdgeSubsets,
                _ => FamilyKind::VertexInduced,
            };
            let family = build_family(&graph, kind, guards)?;
            Ok(Loaded {
                graph: Some(graph),
                family,
            })
        }
    }
}

fn compute_defect(
    family: &Family,
    w: &WeightFn,
    property: Property,
    mode: ConvexMode,
) -> crate::Result<DefectReport> {
    match property {
        Property::Monotone => monotone::monotone_defect(family, w),
        Property::Subadditive => subadditive::subadditive_defect(family, w),
        Property::Convex => convex::convex_defect(family, w, mode),
    }
}

fn mode_label(property: Property, mode: ConvexMode) -> Option<&'static str> {
    (property == Property::Convex).then(|| mode.name())
}

fn run_oracle(
    family: &Family,
    w: &WeightFn,
    property: Property,
    mode: ConvexMode,
    enabled: bool,
) -> std::result::Result<Option<f64>, Failure> {
    if !enabled {
        return Ok(None);
    }
    Ok(Some(
        brute_defect(family, w, property, mode, OracleBudget::default())?.epsilon_star,
    ))
}

fn oracle_failed(rows: &[Row]) -> bool {
    rows.iter().any(|r| {
        r.oracle.is_some_and(|o| {
            let bad = !oracle_agrees(r.defect.epsilon_star, o);
            if bad {
                eprintln!(
                    "weightlat: {} defect {} disagrees with brute force {}",
                    r.property, r.defect.epsilon_star, o
                );
            }
            bad
        })
    })
}

fn emit(
    output: &OutputArgs,
    echo: &[String],
    subcommand: &str,
    family: &Family,
    rows: &[Row],
    started: Instant,
) -> std::result::Result<(), Failure> {
    let text = match output.format {
        Format::Csv => {
            let mut s = String::from(CSV_HEADER);
            s.push('\n');
            for r in rows {
                s.push_str(&r.to_csv());
                s.push('\n');
            }
            s
        }
        Format::Json => {
            let mut m = Map::new();
            m.insert("command".into(), echo.into());
            m.insert("subcommand".into(), subcommand.into());
            m.insert(
                "family".into(),
                json!({ "kind": family.kind().name(), "elements": family.len() }),
            );
            let mut rows: Vec<Value> = rows
                .iter()
                .map(|r| Value::Object(r.to_json(family)))
                .collect();
            if rows.len() == 1 {
                if let Value::Object(row) = rows.remove(0) {
                    m.extend(row);
                }
            } else {
                m.insert("results".into(), rows.into());
            }
            if output.timings {
                m.insert(
                    "timings".into(),
                    json!({ "total_seconds": started.elapsed().as_secs_f64() }),
                );
            }
            let mut s = serde_json::to_string_pretty(&Value::Object(m)).expect("report serializes");
            s.push('\n');
            s
        }
    };
    write_text(output.out.as_ref(), &text)
}

fn write_text(path: Option<&PathBuf>, text: &str) -> std::result::Result<(), Failure> {
    match path {
        Some(p) => io::write_atomic(p, text.as_bytes())
            .map_err(|e| Failure::Output(format!("{}: {e}", p.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| Failure::Output(format!("standard output: {e}")))
        }
    }
}

fn load_weights(family: &Family, path: &Path) -> std::result::Result<WeightFn, Failure> {
    Ok(io::parse_weights(path, family)?)
}

fn check_epsilon_arg(epsilon: f64) -> std::result::Result<(), Failure> {
    if epsilon.is_finite() && epsilon >= 0.0 {
        Ok(())
    } else {
        Err(Failure::Usage(format!(
            "--epsilon {epsilon} must be finite and ≥ 0"
        )))
    }
}

fn evaluate(
    eval: &EvalArgs,
    epsilon: Option<f64>,
) -> std::result::Result<(Family, WeightFn, Row), Failure> {
    let loaded = load_family(&eval.family)?;
    let w = load_weights(&loaded.family, &eval.weights)?;
    let property = Property::from(eval.property);
    let mode = ConvexMode::from(eval.mode);
    let defect = compute_defect(&loaded.family, &w, property, mode)?;
    let oracle = run_oracle(&loaded.family, &w, property, mode, eval.oracle)?;
    let guarantee_met = epsilon.map(|e| defect.holds_with(e));
    let row = Row {
        property: property.name(),
        mode: mode_label(property, mode),
        epsilon,
        defect,
        norm_distance: None,
        guarantee_met,
        repair: None,
        oracle,
    };
    Ok((loaded.family, w, row))
}

fn check(echo: &[String], a: CheckArgs) -> Outcome {
    let started = Instant::now();
    check_epsilon_arg(a.epsilon)?;
    let (family, _, row) = evaluate(&a.eval, Some(a.epsilon))?;
    let rows = [row];
    emit(&a.eval.output, echo, "check", &family, &rows, started)?;
    let holds = rows[0].guarantee_met == Some(true);
    Ok(if holds && !oracle_failed(&rows) {
        EXIT_OK
    } else {
        EXIT_FAIL
    })
}

fn defect(echo: &[String], a: DefectArgs) -> Outcome {
    let started = Instant::now();
    let (family, _, row) = evaluate(&a.eval, None)?;
    let rows = [row];
    emit(&a.eval.output, echo, "defect", &family, &rows, started)?;
    Ok(if oracle_failed(&rows) {
        EXIT_FAIL
    } else {
        EXIT_OK
    })
}

fn compute_repair(family: &Family, w: &WeightFn, a: &RepairArgs) -> crate::Result<RepairResult> {
    match Property::from(a.eval.property) {
        Property::Monotone => monotone::monotone_repair(family, w, a.epsilon),
        Property::Subadditive => subadditive::subadditive_repair(family, w, a.epsilon),
        Property::Convex => {
            convex::convex_repair(family, w, a.epsilon, a.eval.mode.into(), a.tol, a.max_iter)
        }
    }
}

fn repair(echo: &[String], a: RepairArgs) -> Outcome {
    let started = Instant::now();
    check_epsilon_arg(a.epsilon)?;
    let (family, w, mut row) = evaluate(&a.eval, Some(a.epsilon))?;
    let result = compute_repair(&family, &w, &a)?;
    if let Some(path) = &a.weights_out {
        io::write_weights(path, &family, &result.repaired)
            .map_err(|e| Failure::Output(format!("{}: {e}", path.display())))?;
    }
    row.norm_distance = Some(result.distance);
    row.guarantee_met = Some(result.guarantee_met);
    row.repair = Some(result);
    let rows = [row];
    emit(&a.eval.output, echo, "repair", &family, &rows, started)?;
    let met = rows[0].guarantee_met == Some(true);
    Ok(if met && !oracle_failed(&rows) {
        EXIT_OK
    } else {
        EXIT_FAIL
    })
}

fn full_report(echo: &[String], a: ReportArgs) -> Outcome {
    let started = Instant::now();
    let loaded = load_family(&a.family)?;
    let family = loaded.family;
    let w = load_weights(&family, &a.weights)?;
    let cases = [
        (Property::Monotone, ConvexMode::StrictChain),
        (Property::Subadditive, ConvexMode::StrictChain),
        (Property::Convex, ConvexMode::StrictChain),
        (Property::Convex, ConvexMode::PaperLiteral),
    ];
    let mut rows = Vec::new();
    for (property, mode) in cases {
        rows.push(Row {
            property: property.name(),
            mode: mode_label(property, mode),
            epsilon: None,
            defect: compute_defect(&family, &w, property, mode)?,
            norm_distance: None,
            guarantee_met: None,
            repair: None,
            oracle: run_oracle(&family, &w, property, mode, a.oracle)?,
        });
    }
    emit(&a.output, echo, "report", &family, &rows, started)?;
    Ok(if oracle_failed(&rows) {
        EXIT_FAIL
    } else {
        EXIT_OK
    })
}

fn gen(a: GenArgs) -> Outcome {
    let loaded = load_family(&a.family)?;
    let family = &loaded.family;
    let mut w = match (a.param, &loaded.graph) {
        (Some(p), Some(g)) => gen_param_weights(g, family, p.into(), a.offset)?,
        (Some(_), None) => return Err(Error::NeedsSubgraphFamily.into()),
        (None, _) => random_weights(family, a.seed, a.lo, a.hi)?,
    };
    if let Some(delta) = a.perturb {
        w = perturb(&w, delta, a.seed.wrapping_add(1))?;
    }
    write_text(a.out.as_ref(), &io::weights_json(family, &w))?;
    Ok(EXIT_OK)
}
