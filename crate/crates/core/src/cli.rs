//! The `ptsym` command line. Each subcommand is a thin adapter over the
//! library; the `*_command` functions are public so the same code path can
//! be exercised without spawning a process.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, CommandFactory, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::eigen::{eigenvalues, Spectrum};
use crate::error::Error;
use crate::numerics::DenseMatrix;
use crate::report::{self, Component, Metadata, ReportBundle, VerdictRecord};
use crate::sweep::{
    find_exceptional_points, preset_case_with_family, run_sweep, Binding, FamilySource,
    OutputQuantity, SweepSpec, DEFAULT_STEPS,
};
use crate::symmetry::{
    build_c, build_c_pt, check_anti_pt_symmetry, check_linear_symmetry, check_pt_symmetry,
    search_parity, SymmetryOperator, DEFAULT_TOL, PARITY_SEARCH_MAX_DIM,
};
use crate::template::load_template_file;
use crate::transform::{discrepancy_report, FamilyId, HamiltonianParams};

pub const EXIT_OK: u8 = 0;
pub const EXIT_USAGE: u8 = 1;
pub const EXIT_COMPUTE: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "ptsym", version, about = "PT / anti-PT symmetry analysis of non-Hermitian matrix families")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Symmetry verdicts (PT, anti-PT, C commutation) at one parameter point
    Classify(ClassifyArgs),
    /// Sweep one parameter and write CSV, JSON and SVG
    Sweep(SweepArgs),
    /// Run one of the four preset sweeps
    Case(CaseArgs),
    /// Print exceptional points along a sweep
    Ep(EpArgs),
    /// Compare the exact similarity image with the printed h^PT form
    Transform(TransformArgs),
}

#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct FamilyArg {
    /// Template file (.ham)
    #[arg(long)]
    pub template: Option<PathBuf>,
    /// Built-in family: h_original, h_pt_printed, h1_pt, h_similarity_exact
    #[arg(long, value_parser = parse_family)]
    pub family: Option<FamilyId>,
}

#[derive(Debug, Args)]
pub struct ClassifyArgs {
    #[command(flatten)]
    pub family: FamilyArg,
    /// Parameter values, e.g. a=8,b=2,c=-3
    #[arg(long = "set", value_parser = parse_assignments, allow_hyphen_values = true)]
    pub set: Vec<Vec<(String, f64)>>,
    /// Parity operator: diag(±1,...) or "search"
    #[arg(long, value_parser = parse_parity, default_value = "search")]
    pub parity: ParityMode,
    /// Relative tolerance for verdicts
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub family: FamilyArg,
    /// Swept parameter
    #[arg(long)]
    pub param: String,
    /// Sweep range lo:hi
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    pub range: (f64, f64),
    #[arg(long, default_value_t = DEFAULT_STEPS)]
    pub steps: usize,
    /// Constant parameters, e.g. a=20
    #[arg(long = "set", value_parser = parse_assignments, allow_hyphen_values = true)]
    pub set: Vec<Vec<(String, f64)>>,
    /// Parameters following the swept one, e.g. c=b
    #[arg(long, value_parser = parse_aliases)]
    pub alias: Vec<Vec<(String, String)>>,
    /// eig, eig2 (λ²), abs2 (|λ|²) or re2 ((Re λ)²)
    #[arg(long, value_parser = parse_quantity, default_value = "eig")]
    pub quantity: OutputQuantity,
    /// Output directory
    #[arg(long)]
    pub out: PathBuf,
    /// File stem for the outputs
    #[arg(long, default_value = "sweep")]
    pub name: String,
    /// Components drawn in the SVG: re, im or both
    #[arg(long, value_parser = parse_component, default_value = "both")]
    pub svg: Component,
}

#[derive(Debug, Args)]
pub struct CaseArgs {
    /// Case number, 1 to 4
    #[arg(value_parser = clap::value_parser!(u32).range(1..=4))]
    pub case: u32,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long, default_value_t = DEFAULT_STEPS)]
    pub steps: usize,
    /// Family to sweep instead of h1_pt
    #[arg(long, value_parser = parse_family, default_value = "h1_pt")]
    pub family: FamilyId,
    #[arg(long, value_parser = parse_component, default_value = "both")]
    pub svg: Component,
}

#[derive(Debug, Args)]
pub struct EpArgs {
    #[command(flatten)]
    pub family: FamilyArg,
    #[arg(long)]
    pub param: String,
    #[arg(long, value_parser = parse_range, allow_hyphen_values = true)]
    pub range: (f64, f64),
    #[arg(long, default_value_t = DEFAULT_STEPS)]
    pub steps: usize,
    #[arg(long = "set", value_parser = parse_assignments, allow_hyphen_values = true)]
    pub set: Vec<Vec<(String, f64)>>,
    #[arg(long, value_parser = parse_aliases)]
    pub alias: Vec<Vec<(String, String)>>,
    /// Refinement width for each exceptional point
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    /// Values for a, b and c, e.g. a=8,b=2,c=-3
    #[arg(long = "set", value_parser = parse_assignments, allow_hyphen_values = true, required = true)]
    pub set: Vec<Vec<(String, f64)>>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ParityMode {
    Diag(Vec<f64>),
    Search,
}

fn parse_family(s: &str) -> Result<FamilyId, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_quantity(s: &str) -> Result<OutputQuantity, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_component(s: &str) -> Result<Component, String> {
    match s {
        "re" => Ok(Component::Re),
        "im" => Ok(Component::Im),
        "both" => Ok(Component::Both),
        _ => Err(format!("expected re, im or both, got '{s}'")),
    }
}

fn parse_number(s: &str) -> Result<f64, String> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("'{s}' is not a number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("'{s}' is not finite"))
    }
}

pub fn parse_assignments(s: &str) -> Result<Vec<(String, f64)>, String> {
    s.split(',')
        .map(|item| {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| format!("expected name=value, got '{item}'"))?;
            let k = k.trim();
            if k.is_empty() {
                return Err(format!("missing name in '{item}'"));
            }
            Ok((k.to_string(), parse_number(v)?))
        })
        .collect()
}

pub fn parse_aliases(s: &str) -> Result<Vec<(String, String)>, String> {
    s.split(',')
        .map(|item| {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| format!("expected name=param, got '{item}'"))?;
            let (k, v) = (k.trim(), v.trim());
            if k.is_empty() || v.is_empty() {
                return Err(format!("malformed alias '{item}'"));
            }
            Ok((k.to_string(), v.to_string()))
        })
        .collect()
}

pub fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("expected lo:hi, got '{s}'"))?;
    let (lo, hi) = (parse_number(lo)?, parse_number(hi)?);
    if lo >= hi {
        return Err(format!("range {lo}:{hi} must have lo < hi"));
    }
    Ok((lo, hi))
}

pub fn parse_parity(s: &str) -> Result<ParityMode, String> {
    let s = s.trim();
    if s == "search" {
        return Ok(ParityMode::Search);
    }
    let inner = s
        .strip_prefix("diag(")
        .and_then(|r| r.strip_suffix(')'))
        .ok_or_else(|| format!("expected diag(±1,...) or search, got '{s}'"))?;
    let signs = inner
        .split(',')
        .map(|t| match parse_number(t)? {
            v if v == 1.0 || v == -1.0 => Ok(v),
            v => Err(format!("parity entries must be ±1, got {v}")),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ParityMode::Diag(signs))
}

/// Failure of a CLI command, split by exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Compute(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Compute(_) => EXIT_COMPUTE,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidSweep(_)
            | Error::InvalidArgument(_)
            | Error::Template(_)
            | Error::Parse(_)
            | Error::UnknownCase(_)
            | Error::SizeLimit { .. } => CliError::Usage(e.to_string()),
            other => CliError::Compute(other.to_string()),
        }
    }
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Compute(format!("{}: {e}", path.display()))
}

pub fn resolve_family(arg: &FamilyArg) -> Result<FamilySource, CliError> {
    match (&arg.template, arg.family) {
        (Some(path), None) => Ok(FamilySource::Template(Arc::new(
            load_template_file(path).map_err(|e| CliError::Usage(e.to_string()))?,
        ))),
        (None, Some(id)) => Ok(FamilySource::Builtin(id)),
        _ => Err(CliError::Usage("give exactly one of --template or --family".into())),
    }
}

fn collect_values(groups: &[Vec<(String, f64)>]) -> Result<BTreeMap<String, f64>, CliError> {
    let mut out = BTreeMap::new();
    for (k, v) in groups.iter().flatten() {
        if out.insert(k.clone(), *v).is_some() {
            return Err(CliError::Usage(format!("parameter '{k}' set twice")));
        }
    }
    Ok(out)
}

pub fn build_sweep_spec(
    family: FamilySource,
    param: &str,
    range: (f64, f64),
    steps: usize,
    set: &[Vec<(String, f64)>],
    alias: &[Vec<(String, String)>],
    quantity: OutputQuantity,
) -> Result<SweepSpec, CliError> {
    let mut bindings: BTreeMap<String, Binding> = collect_values(set)?
        .into_iter()
        .map(|(k, v)| (k, Binding::Const(v)))
        .collect();
    for (k, target) in alias.iter().flatten() {
        if bindings.insert(k.clone(), Binding::Alias(target.clone())).is_some() {
            return Err(CliError::Usage(format!("parameter '{k}' bound twice")));
        }
    }
    let spec = SweepSpec {
        family,
        sweep_param: param.to_string(),
        range,
        steps,
        bindings,
        quantity,
    };
    spec.validate()?;
    Ok(spec)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorInfo {
    pub name: String,
    pub matrix: DenseMatrix,
    pub involutive: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub metadata: Metadata,
    pub matrix: DenseMatrix,
    pub spectrum: Spectrum,
    pub verdicts: Vec<VerdictRecord>,
    pub operators: Vec<OperatorInfo>,
    pub notes: Vec<String>,
}

/// PT and anti-PT verdicts for the requested parity (or every signed
/// permutation parity that works), plus commutation with `C(a, b)` and
/// `C^PT(a, b)` when the point has `a` and `b` and is 2x2.
pub fn classify(
    family: &FamilySource,
    values: &BTreeMap<String, f64>,
    parity: &ParityMode,
    tol: f64,
) -> Result<ClassifyReport, Error> {
    let h = family.instantiate(values)?;
    let spectrum = eigenvalues(&h)?;
    let mut verdicts = Vec::new();
    let mut operators = Vec::new();
    let mut notes = Vec::new();

    match parity {
        ParityMode::Diag(signs) => {
            let p = SymmetryOperator::parity(signs)?;
            if p.dim() != h.rows() {
                return Err(Error::InvalidArgument(format!(
                    "parity {} is {}x{}, matrix is {}x{}",
                    p.name,
                    p.dim(),
                    p.dim(),
                    h.rows(),
                    h.cols()
                )));
            }
            verdicts.push(VerdictRecord::new("pt", &p.name, &check_pt_symmetry(&h, &p, tol)?));
            verdicts.push(VerdictRecord::new(
                "anti_pt",
                &p.name,
                &check_anti_pt_symmetry(&h, &p, tol)?,
            ));
        }
        ParityMode::Search => {
            if h.rows() > PARITY_SEARCH_MAX_DIM {
                return Err(Error::SizeLimit {
                    op: "parity search",
                    dim: h.rows(),
                    limit: PARITY_SEARCH_MAX_DIM,
                });
            }
            let hits = search_parity(&h, tol)?;
            if hits.is_empty() {
                notes.push("parity search: no signed permutation parity gives PT or anti-PT symmetry".into());
            }
            for (op, v) in hits {
                let check = match v.kind {
                    crate::symmetry::SymmetryKind::PTSymmetric => "pt",
                    _ => "anti_pt",
                };
                verdicts.push(VerdictRecord::new(check, &op.name, &v));
            }
        }
    }

    match (values.get("a"), values.get("b")) {
        (Some(&a), Some(&b)) if h.rows() == 2 => {
            for built in [build_c(a, b), build_c_pt(a, b)] {
                match built {
                    Ok(op) => {
                        let v = check_linear_symmetry(&h, &op, tol)?;
                        verdicts.push(VerdictRecord::new("commutes", &op.name, &v));
                        operators.push(OperatorInfo {
                            involutive: op.is_involution(),
                            name: op.name,
                            matrix: op.matrix,
                        });
                    }
                    Err(e @ Error::ExceptionalPoint { .. }) => {
                        notes.push(format!("C operators undefined: {e}"));
                        break;
                    }
                    Err(e) => return Err(e),
                }
            }
        }
        _ => notes.push("C operators need a 2x2 matrix and parameters a and b".into()),
    }

    Ok(ClassifyReport {
        metadata: Metadata::for_point(family, values),
        matrix: h,
        spectrum,
        verdicts,
        operators,
        notes,
    })
}

fn to_json_string<T: Serialize>(value: &T) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(value).map_err(|e| CliError::Compute(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

pub fn classify_command(args: &ClassifyArgs) -> Result<String, CliError> {
    let family = resolve_family(&args.family)?;
    let values = collect_values(&args.set)?;
    let report = classify(&family, &values, &args.parity, args.tol)?;
    to_json_string(&report)
}

/// Writes `<stem>.csv`, `<stem>.json` and `<stem>.svg` into `dir`.
pub fn write_outputs(
    dir: &Path,
    stem: &str,
    bundle: &ReportBundle,
    which: Component,
) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
    let files = [
        ("csv", report::to_csv(bundle)?),
        ("json", report::to_json(bundle)?),
        ("svg", report::to_svg(bundle, which)?),
    ];
    let mut written = Vec::new();
    for (ext, body) in files {
        let path = dir.join(format!("{stem}.{ext}"));
        fs::write(&path, body).map_err(|e| io_error(&path, e))?;
        written.push(path);
    }
    Ok(written)
}

fn manifest(paths: &[PathBuf]) -> String {
    paths
        .iter()
        .map(|p| format!("wrote {}\n", p.display()))
        .collect()
}

pub fn sweep_command(args: &SweepArgs) -> Result<String, CliError> {
    let spec = build_sweep_spec(
        resolve_family(&args.family)?,
        &args.param,
        args.range,
        args.steps,
        &args.set,
        &args.alias,
        args.quantity,
    )?;
    let result = run_sweep(&spec)?;
    let bundle = ReportBundle::from_sweep(&spec, result);
    Ok(manifest(&write_outputs(&args.out, &args.name, &bundle, args.svg)?))
}

pub fn case_command(args: &CaseArgs) -> Result<String, CliError> {
    let mut spec = preset_case_with_family(args.case, args.family)?;
    spec.steps = args.steps;
    spec.validate()?;
    let result = run_sweep(&spec)?;
    let bundle = ReportBundle::from_sweep(&spec, result);
    let stem = format!("case{}", args.case);
    Ok(manifest(&write_outputs(&args.out, &stem, &bundle, args.svg)?))
}

pub fn ep_command(args: &EpArgs) -> Result<String, CliError> {
    if !(args.tol > 0.0) {
        return Err(CliError::Usage(format!("--tol must be positive, got {}", args.tol)));
    }
    let spec = build_sweep_spec(
        resolve_family(&args.family)?,
        &args.param,
        args.range,
        args.steps,
        &args.set,
        &args.alias,
        OutputQuantity::Eigenvalue,
    )?;
    let eps = find_exceptional_points(&spec, args.tol)?;
    Ok(eps.iter().map(|t| format!("{t:.6}\n")).collect())
}

pub fn transform_command(args: &TransformArgs) -> Result<String, CliError> {
    let values = collect_values(&args.set)?;
    let get = |k: &str| {
        values
            .get(k)
            .copied()
            .ok_or_else(|| CliError::Usage(format!("transform needs a value for '{k}'")))
    };
    let p = HamiltonianParams::new(get("a")?, get("b")?, get("c")?)?;
    to_json_string(&discrepancy_report(p))
}

pub fn run(cli: &Cli) -> Result<String, CliError> {
    match &cli.command {
        Command::Classify(a) => classify_command(a),
        Command::Sweep(a) => sweep_command(a),
        Command::Case(a) => case_command(a),
        Command::Ep(a) => ep_command(a),
        Command::Transform(a) => transform_command(a),
    }
}

/// Parses `args`, runs the command, writes its output to `stdout` and
/// diagnostics to stderr. Returns the process exit code.
pub fn main_with_args<I, T>(args: I, stdout: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{e}");
                    EXIT_OK
                }
                ErrorKind::DisplayHelpOnMissingArgumentOrSubcommand => {
                    usage_error("missing subcommand", None)
                }
                _ => {
                    let text = e.to_string();
                    let line = text.lines().next().unwrap_or("invalid arguments");
                    usage_error(line.trim_start_matches("error: "), None)
                }
            };
        }
    };
    match run(&cli) {
        Ok(out) => {
            let _ = stdout.write_all(out.as_bytes());
            EXIT_OK
        }
        Err(CliError::Usage(msg)) => usage_error(&msg, Some(cli.command.name())),
        Err(CliError::Compute(msg)) => {
            eprintln!("error: {msg}");
            EXIT_COMPUTE
        }
    }
}

/// One-line diagnostic plus usage synopsis on stderr.
fn usage_error(msg: &str, subcommand: Option<&str>) -> u8 {
    let mut cmd = Cli::command();
    cmd.build();
    let usage = match subcommand.and_then(|name| cmd.find_subcommand_mut(name)) {
        Some(sub) => sub.render_usage(),
        None => cmd.render_usage(),
    };
    eprintln!("error: {msg}");
    eprintln!("{usage}");
    eprintln!("For more information, try '--help'.");
    EXIT_USAGE
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Classify(_) => "classify",
            Command::Sweep(_) => "sweep",
            Command::Case(_) => "case",
            Command::Ep(_) => "ep",
            Command::Transform(_) => "transform",
        }
    }
}
