//! `flatspot`: build surfaces and curves whose gradient vanishes at
//! prescribed points, export them as CSV, and check the claims they come
//! with.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use flatspot::geometry::{sample_curve, sample_heightfield, Mode, StationarySpec};
use flatspot::io::{
    self, config_metadata, parse_model_config, parse_spec_json, CellCurvatures, CurvatureChoice,
    FreeBlockChoice, ModelConfig, Sidecar,
};
use flatspot::quartic1d::CurvatureStrategy;
use flatspot::quartic2d::{c1_certificate, generic_edge_data, EdgeData, Verdict};
use flatspot::superpose::{Fill, TensorFamily};
use flatspot::verify::{scan_stationary, verify_problem, ProblemReport, ScanConfig};
use flatspot::SurfaceModel;

const SCHEMA_HELP: &str = "\
Point-spec JSON (--in):
  {\"dimension\": 1|2,
   \"mode\": \"A\"|\"B\"|\"C\",          A: flat points, B: + values, C: flat only there
   \"points\": [[x], ...] | [[x, y], ...],
   \"values\": [z, ...],              required for mode B
   \"region\": {\"bounds\": [a, b] | [[a, b], [c, d]]}}   optional

Model-config JSON (--model-config), also written as the .meta.json sidecar:
  {\"method\": \"bump\"|\"quartic\"|\"quartic-c2\"|\"quartic2d\"|\"trig\"|
             \"trig-c2\"|\"trig2d\"|\"trig2d-c2\"|\"superpose\",
   ...method parameters with the same names as the flags below...}
  Random choices store their seed in the config, so replaying a sidecar
  reproduces the output byte for byte.

Grid methods (quartic2d, trig2d, trig2d-c2) expect the points to tile a
full cartesian grid. Value methods on a value-free spec substitute
alternating +-1 targets.

Exit codes: 0 success / all checks pass, 1 a requested check failed,
2 bad input or usage.";

#[derive(Parser)]
#[command(
    name = "flatspot",
    version,
    about = "Surfaces with stationary points exactly where you ask",
    after_long_help = SCHEMA_HELP
)]
struct Cli {
    /// Seed for any `random` parameter given without `:<seed>`.
    #[arg(long, global = true, env = "FLATSPOT_SEED", default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a model over a point spec and export curve/heightfield CSV.
    Generate(GenerateArgs),
    /// Check problem A/B/C compliance; exit 1 when a requested check fails.
    Verify(VerifyArgs),
    /// Hunt stationary points over the model's whole region.
    Scan(ScanArgs),
    /// Rank evidence that no quartic tensor patch can join C1-smoothly.
    Certificate(CertificateArgs),
    /// Resample the model described by an existing sidecar.
    Export(ExportArgs),
}

#[derive(Args, Default)]
struct MethodFlags {
    /// Construction method (see --help for the list).
    #[arg(long)]
    method: Option<String>,
    /// Stored model config; explicit flags override its fields.
    #[arg(long)]
    model_config: Option<PathBuf>,
    /// bump: cutoff base (> 1). superpose: frame family, trig|quartic.
    #[arg(long)]
    base: Option<String>,
    /// bump: fraction of the automatic support radius, in (0, 1].
    #[arg(long)]
    radius_scale: Option<f64>,
    /// bump: constant-one | quadratic:<q11,q12,...> | linear:<g1,...>.
    #[arg(long)]
    shape: Option<String>,
    /// quartic: cell curvatures, zero | random[:<seed>] | list:<csv> | <real>.
    #[arg(long)]
    c: Option<String>,
    /// quartic-c2: first-knot curvature, <real> | min | max | mean.
    #[arg(long)]
    c0: Option<String>,
    /// quartic2d: start of the x-boundary curvature chain.
    #[arg(long)]
    c0x: Option<f64>,
    /// quartic2d: start of the y-boundary curvature chain.
    #[arg(long)]
    c0y: Option<f64>,
    /// quartic2d: zero | random[:<seed>].
    #[arg(long)]
    free_block: Option<String>,
    /// trig-c2: value at the first knot.
    #[arg(long)]
    z0: Option<f64>,
    /// trig-c2: amplitude of the generated value increments.
    #[arg(long)]
    mu: Option<f64>,
    /// trig2d-c2: value at the grid origin.
    #[arg(long)]
    z00: Option<f64>,
    /// trig2d-c2: x-axis increment coefficient.
    #[arg(long)]
    nu0: Option<f64>,
    /// trig2d-c2: y-axis increment coefficient.
    #[arg(long)]
    mu0: Option<f64>,
    /// trig2d-c2: product-term coefficient.
    #[arg(long)]
    lambda: Option<f64>,
    /// superpose: number of rotated frames.
    #[arg(long)]
    rotations: Option<usize>,
    /// superpose: zero | nearest | random[:<seed>].
    #[arg(long)]
    fill: Option<String>,
}

#[derive(Args)]
struct GenerateArgs {
    /// Point-spec JSON file.
    #[arg(long = "in")]
    input: PathBuf,
    /// Output CSV path; a <out>.meta.json sidecar is written next to it.
    #[arg(long)]
    out: PathBuf,
    #[command(flatten)]
    method: MethodFlags,
    /// Samples per axis.
    #[arg(long, default_value_t = 256)]
    n: usize,
    /// Override samples along x (2D only).
    #[arg(long)]
    nx: Option<usize>,
    /// Override samples along y (2D only).
    #[arg(long)]
    ny: Option<usize>,
}

#[derive(Args)]
struct VerifyArgs {
    /// Point-spec JSON file.
    #[arg(long = "in")]
    input: PathBuf,
    #[command(flatten)]
    method: MethodFlags,
    /// Which guarantees to check, any subset of the letters ABC.
    #[arg(long, default_value = "A")]
    problems: String,
    /// Report JSON path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Scan lattice nodes per axis (problem C).
    #[arg(long, default_value_t = 256)]
    resolution: usize,
    /// Stationarity tolerance on the gradient norm.
    #[arg(long, default_value_t = 1e-8)]
    grad_tol: f64,
    /// Interpolation tolerance on |F - z| (problem B).
    #[arg(long, default_value_t = 1e-9)]
    value_tol: f64,
}

#[derive(Args)]
struct ScanArgs {
    /// Point-spec JSON file.
    #[arg(long = "in")]
    input: PathBuf,
    #[command(flatten)]
    method: MethodFlags,
    /// Report JSON path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    /// Scan lattice nodes per axis.
    #[arg(long, default_value_t = 256)]
    resolution: usize,
    /// Stationarity tolerance on the gradient norm.
    #[arg(long, default_value_t = 1e-8)]
    grad_tol: f64,
}

#[derive(Args)]
struct CertificateArgs {
    /// Cell width along x.
    #[arg(long)]
    dx: f64,
    /// Cell width along y.
    #[arg(long)]
    dy: f64,
    /// Boundary data: random[:<seed>] (generic) or zero.
    #[arg(long, default_value = "random")]
    data: String,
    /// Report JSON path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExportArgs {
    /// Sidecar JSON from an earlier generate run (spec + model config).
    #[arg(long)]
    model: PathBuf,
    /// Output CSV path; a fresh sidecar is written next to it.
    #[arg(long)]
    out: PathBuf,
    /// Samples per axis.
    #[arg(long, default_value_t = 256)]
    n: usize,
    /// Override samples along x (2D only).
    #[arg(long)]
    nx: Option<usize>,
    /// Override samples along y (2D only).
    #[arg(long)]
    ny: Option<usize>,
}

/// Error carrying the process exit code: 2 for bad input, 1 for failed
/// checks.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure { code: 2, message: message.into() }
    }

    fn check(message: impl Into<String>) -> Self {
        Failure { code: 1, message: message.into() }
    }
}

impl From<flatspot::Error> for Failure {
    fn from(e: flatspot::Error) -> Self {
        Failure::usage(e.to_string())
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Result<(), Failure> {
    match &cli.command {
        Command::Generate(args) => generate(args, cli.seed),
        Command::Verify(args) => verify(args, cli.seed),
        Command::Scan(args) => scan(args, cli.seed),
        Command::Certificate(args) => certificate(args, cli.seed),
        Command::Export(args) => export(args),
    }
}

fn read_to_string(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn load_spec(path: &Path) -> Result<StationarySpec, Failure> {
    Ok(parse_spec_json(&read_to_string(path)?)?)
}

fn parse_f64(flag: &str, s: &str) -> Result<f64, Failure> {
    s.parse::<f64>()
        .map_err(|_| Failure::usage(format!("--{flag}: expected a number, got {s:?}")))
}

fn parse_csv_numbers(flag: &str, s: &str) -> Result<Vec<f64>, Failure> {
    s.split(',').map(|p| parse_f64(flag, p.trim())).collect()
}

/// `random` -> default seed, `random:<n>` -> n.
fn parse_seed_suffix(flag: &str, s: &str, default_seed: u64) -> Result<u64, Failure> {
    match s.strip_prefix("random") {
        Some("") => Ok(default_seed),
        Some(rest) => match rest.strip_prefix(':') {
            Some(n) => n
                .parse::<u64>()
                .map_err(|_| Failure::usage(format!("--{flag}: bad seed in {s:?}"))),
            None => Err(Failure::usage(format!("--{flag}: expected random[:<seed>], got {s:?}"))),
        },
        None => Err(Failure::usage(format!("--{flag}: expected random[:<seed>], got {s:?}"))),
    }
}

fn parse_fill(s: &str, default_seed: u64) -> Result<Fill, Failure> {
    match s {
        "zero" => Ok(Fill::Zero),
        "nearest" => Ok(Fill::NearestValue),
        _ => Ok(Fill::Random { seed: parse_seed_suffix("fill", s, default_seed)?, lo: -1.0, hi: 1.0 }),
    }
}

fn parse_shape(s: &str) -> Result<flatspot::bump::Shape, Failure> {
    use flatspot::bump::Shape;
    if s == "constant-one" {
        return Ok(Shape::ConstantOne);
    }
    if let Some(rest) = s.strip_prefix("quadratic:") {
        return Ok(Shape::Quadratic { q: parse_csv_numbers("shape", rest)? });
    }
    if let Some(rest) = s.strip_prefix("linear:") {
        return Ok(Shape::LinearSlope { g: parse_csv_numbers("shape", rest)? });
    }
    Err(Failure::usage(format!(
        "--shape: expected constant-one | quadratic:<csv> | linear:<csv>, got {s:?}"
    )))
}

fn parse_cell_curvatures(s: &str, default_seed: u64) -> Result<CellCurvatures, Failure> {
    if s == "zero" {
        return Ok(CellCurvatures::Uniform(0.0));
    }
    if s.starts_with("random") {
        return Ok(CellCurvatures::Random { seed: parse_seed_suffix("c", s, default_seed)? });
    }
    if let Some(rest) = s.strip_prefix("list:") {
        return Ok(CellCurvatures::List(parse_csv_numbers("c", rest)?));
    }
    Ok(CellCurvatures::Uniform(parse_f64("c", s)?))
}

fn parse_c0(s: &str) -> Result<CurvatureChoice, Failure> {
    match s {
        "min" => Ok(CurvatureChoice::Strategy(CurvatureStrategy::AllMinima)),
        "max" => Ok(CurvatureChoice::Strategy(CurvatureStrategy::AllMaxima)),
        "mean" => Ok(CurvatureChoice::Strategy(CurvatureStrategy::MeanCurvatureZero)),
        _ => Ok(CurvatureChoice::Explicit(parse_f64("c0", s)?)),
    }
}

fn parse_free_block(s: &str, default_seed: u64) -> Result<FreeBlockChoice, Failure> {
    if s == "zero" {
        return Ok(FreeBlockChoice::Zero);
    }
    Ok(FreeBlockChoice::Random { seed: parse_seed_suffix("free-block", s, default_seed)? })
}

/// Which of the method flags were given on the command line.
fn provided_flags(f: &MethodFlags) -> Vec<&'static str> {
    let mut out = Vec::new();
    macro_rules! note {
        ($field:ident, $name:literal) => {
            if f.$field.is_some() {
                out.push($name);
            }
        };
    }
    note!(base, "base");
    note!(radius_scale, "radius-scale");
    note!(shape, "shape");
    note!(c, "c");
    note!(c0, "c0");
    note!(c0x, "c0x");
    note!(c0y, "c0y");
    note!(free_block, "free-block");
    note!(z0, "z0");
    note!(mu, "mu");
    note!(z00, "z00");
    note!(nu0, "nu0");
    note!(mu0, "mu0");
    note!(lambda, "lambda");
    note!(rotations, "rotations");
    note!(fill, "fill");
    out
}

fn reject_foreign_flags(
    method: &str,
    allowed: &[&str],
    f: &MethodFlags,
) -> Result<(), Failure> {
    for flag in provided_flags(f) {
        if !allowed.contains(&flag) {
            return Err(Failure::usage(format!("--{flag} does not apply to method {method}")));
        }
    }
    Ok(())
}

/// Assemble the effective model config: defaults, then the stored config
/// (when its method matches), then explicit flags.
fn effective_config(f: &MethodFlags, default_seed: u64) -> Result<ModelConfig, Failure> {
    let stored = match &f.model_config {
        Some(path) => Some(parse_model_config(&read_to_string(path)?)?),
        None => None,
    };
    let method: String = match (&f.method, &stored) {
        (Some(m), _) => m.clone(),
        (None, Some(c)) => c.method_name().to_string(),
        (None, None) => {
            return Err(Failure::usage("give --method or --model-config"));
        }
    };
    let base = stored.filter(|c| c.method_name() == method);

    let config = match method.as_str() {
        "bump" => {
            reject_foreign_flags("bump", &["base", "radius-scale", "shape"], f)?;
            // Radii and coefficient lists are config-file only; flags cover
            // the scalar knobs.
            let (mut cutoff, mut radius_scale, radii, coefficients, mut shape) = match base {
                Some(ModelConfig::Bump { base, radius_scale, radii, coefficients, shape }) => {
                    (base, radius_scale, radii, coefficients, shape)
                }
                _ => (
                    std::f64::consts::E,
                    1.0,
                    None,
                    None,
                    flatspot::bump::Shape::ConstantOne,
                ),
            };
            if let Some(s) = &f.base {
                cutoff = parse_f64("base", s)?;
            }
            if let Some(v) = f.radius_scale {
                radius_scale = v;
            }
            if let Some(s) = &f.shape {
                shape = parse_shape(s)?;
            }
            ModelConfig::Bump { base: cutoff, radius_scale, radii, coefficients, shape }
        }
        "quartic" => {
            reject_foreign_flags("quartic", &["c"], f)?;
            let mut c = match base {
                Some(ModelConfig::Quartic { c }) => c,
                _ => CellCurvatures::default(),
            };
            if let Some(s) = &f.c {
                c = parse_cell_curvatures(s, default_seed)?;
            }
            ModelConfig::Quartic { c }
        }
        "quartic-c2" => {
            reject_foreign_flags("quartic-c2", &["c0"], f)?;
            let mut c0 = match base {
                Some(ModelConfig::QuarticC2 { c0 }) => c0,
                _ => CurvatureChoice::default(),
            };
            if let Some(s) = &f.c0 {
                c0 = parse_c0(s)?;
            }
            if let CurvatureChoice::Strategy(s) = c0 {
                eprintln!(
                    "note: {s:?} counts the first knot toward its extremum target"
                );
            }
            ModelConfig::QuarticC2 { c0 }
        }
        "quartic2d" => {
            reject_foreign_flags("quartic2d", &["c0x", "c0y", "free-block"], f)?;
            let (mut c0x, mut c0y, mut free_block) = match base {
                Some(ModelConfig::Quartic2d { c0x, c0y, free_block }) => (c0x, c0y, free_block),
                _ => (0.0, 0.0, FreeBlockChoice::Zero),
            };
            if let Some(v) = f.c0x {
                c0x = v;
            }
            if let Some(v) = f.c0y {
                c0y = v;
            }
            if let Some(s) = &f.free_block {
                free_block = parse_free_block(s, default_seed)?;
            }
            ModelConfig::Quartic2d { c0x, c0y, free_block }
        }
        "trig" => {
            reject_foreign_flags("trig", &[], f)?;
            ModelConfig::Trig
        }
        "trig-c2" => {
            reject_foreign_flags("trig-c2", &["z0", "mu"], f)?;
            let (mut z0, mut mu) = match base {
                Some(ModelConfig::TrigC2 { z0, mu }) => (Some(z0), Some(mu)),
                _ => (None, None),
            };
            if let Some(v) = f.z0 {
                z0 = Some(v);
            }
            if let Some(v) = f.mu {
                mu = Some(v);
            }
            match (z0, mu) {
                (Some(z0), Some(mu)) => ModelConfig::TrigC2 { z0, mu },
                _ => return Err(Failure::usage("trig-c2 needs --z0 and --mu")),
            }
        }
        "trig2d" => {
            reject_foreign_flags("trig2d", &[], f)?;
            ModelConfig::Trig2d
        }
        "trig2d-c2" => {
            reject_foreign_flags("trig2d-c2", &["z00", "nu0", "mu0", "lambda"], f)?;
            let (mut z00, mut nu0, mut mu0, mut lambda) = match base {
                Some(ModelConfig::Trig2dC2 { z00, nu0, mu0, lambda }) => {
                    (Some(z00), Some(nu0), Some(mu0), Some(lambda))
                }
                _ => (None, None, None, None),
            };
            if let Some(v) = f.z00 {
                z00 = Some(v);
            }
            if let Some(v) = f.nu0 {
                nu0 = Some(v);
            }
            if let Some(v) = f.mu0 {
                mu0 = Some(v);
            }
            if let Some(v) = f.lambda {
                lambda = Some(v);
            }
            match (z00, nu0, mu0, lambda) {
                (Some(z00), Some(nu0), Some(mu0), Some(lambda)) => {
                    ModelConfig::Trig2dC2 { z00, nu0, mu0, lambda }
                }
                _ => {
                    return Err(Failure::usage(
                        "trig2d-c2 needs --z00, --nu0, --mu0 and --lambda",
                    ))
                }
            }
        }
        "superpose" => {
            reject_foreign_flags("superpose", &["rotations", "base", "fill"], f)?;
            let (mut rotations, mut family, mut fill) = match base {
                Some(ModelConfig::Superpose { rotations, base, fill }) => {
                    (rotations, base, fill)
                }
                _ => (1, TensorFamily::default(), Fill::default()),
            };
            if let Some(v) = f.rotations {
                rotations = v;
            }
            if let Some(s) = &f.base {
                family = match s.as_str() {
                    "trig" => TensorFamily::Trig,
                    "quartic" => TensorFamily::Quartic,
                    _ => {
                        return Err(Failure::usage(format!(
                            "--base: expected trig or quartic, got {s:?}"
                        )))
                    }
                };
            }
            if let Some(s) = &f.fill {
                fill = parse_fill(s, default_seed)?;
            }
            ModelConfig::Superpose { rotations, base: family, fill }
        }
        other => {
            return Err(Failure::usage(format!(
                "unknown method {other:?}; see --help for the list"
            )))
        }
    };
    Ok(config)
}

fn write_json(out: Option<&Path>, value: &impl Serialize) -> Result<(), Failure> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Failure::usage(format!("report serialization: {e}")))?;
    text.push('\n');
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn build(spec: &StationarySpec, config: &ModelConfig) -> Result<Box<dyn SurfaceModel>, Failure> {
    let model = io::build_model(spec, config)?;
    for d in model.diagnostics() {
        eprintln!("note: {d:?}");
    }
    Ok(model)
}

fn generate(args: &GenerateArgs, seed: u64) -> Result<(), Failure> {
    let spec = load_spec(&args.input)?;
    let config = effective_config(&args.method, seed)?;
    let model = build(&spec, &config)?;
    let mut csv: Vec<u8> = Vec::new();
    let samples: Vec<usize> = match model.dim() {
        1 => {
            let pts = sample_curve(model.as_ref(), None, args.n)?;
            io::write_curve_csv(&mut csv, &pts)?;
            vec![args.n]
        }
        _ => {
            let nx = args.nx.unwrap_or(args.n);
            let ny = args.ny.unwrap_or(args.n);
            let field =
                sample_heightfield(model.as_ref(), None, nx, ny, config_metadata(&config))?;
            io::write_heightfield_csv(&mut csv, &field)?;
            vec![nx, ny]
        }
    };
    fs::write(&args.out, csv)
        .map_err(|e| Failure::usage(format!("{}: {e}", args.out.display())))?;
    let sidecar = Sidecar::new(&spec, &config, &samples);
    let meta_path = sidecar_path(&args.out);
    write_json(Some(&meta_path), &sidecar)?;
    eprintln!("wrote {} and {}", args.out.display(), meta_path.display());
    Ok(())
}

fn sidecar_path(out: &Path) -> PathBuf {
    let mut name = out.file_name().unwrap_or_default().to_os_string();
    name.push(".meta.json");
    out.with_file_name(name)
}

#[derive(Serialize)]
struct VerifyOutput {
    spec: serde_json::Value,
    model: ModelConfig,
    resolution: usize,
    grad_tol: f64,
    value_tol: f64,
    problems: Vec<ProblemReport>,
}

fn verify(args: &VerifyArgs, seed: u64) -> Result<(), Failure> {
    let spec = load_spec(&args.input)?;
    let config = effective_config(&args.method, seed)?;
    let model = build(&spec, &config)?;
    let cfg = ScanConfig {
        resolution: args.resolution,
        grad_tol: args.grad_tol,
        value_tol: args.value_tol,
        ..ScanConfig::default()
    };
    let mut problems = Vec::new();
    for letter in args.problems.chars() {
        let problem = match letter {
            'A' | 'a' => Mode::A,
            'B' | 'b' => Mode::B,
            'C' | 'c' => Mode::C,
            other => {
                return Err(Failure::usage(format!(
                    "--problems: unknown problem {other:?}, use letters from ABC"
                )))
            }
        };
        problems.push(verify_problem(model.as_ref(), &spec, problem, &cfg)?);
    }
    let all_pass = problems.iter().all(|r| r.pass);
    let output = VerifyOutput {
        spec: io::spec_to_json(&spec),
        model: config,
        resolution: args.resolution,
        grad_tol: args.grad_tol,
        value_tol: args.value_tol,
        problems,
    };
    write_json(args.out.as_deref(), &output)?;
    if all_pass {
        Ok(())
    } else {
        Err(Failure::check("one or more requested problems failed; see the report"))
    }
}

#[derive(Serialize)]
struct ScanOutput {
    spec: serde_json::Value,
    model: ModelConfig,
    report: flatspot::ScanReport,
}

fn scan(args: &ScanArgs, seed: u64) -> Result<(), Failure> {
    let spec = load_spec(&args.input)?;
    let config = effective_config(&args.method, seed)?;
    let model = build(&spec, &config)?;
    let cfg = ScanConfig {
        resolution: args.resolution,
        grad_tol: args.grad_tol,
        ..ScanConfig::default()
    };
    let report = scan_stationary(model.as_ref(), &spec.points, None, &cfg)?;
    let output = ScanOutput { spec: io::spec_to_json(&spec), model: config, report };
    write_json(args.out.as_deref(), &output)
}

#[derive(Serialize)]
struct CertificateOutput {
    data: EdgeData,
    #[serde(flatten)]
    certificate: flatspot::quartic2d::SmoothnessCertificate,
}

fn certificate(args: &CertificateArgs, seed: u64) -> Result<(), Failure> {
    let data = match args.data.as_str() {
        "zero" => EdgeData { dgamma: [0.0; 3], dbeta: [0.0; 2] },
        s => generic_edge_data(parse_seed_suffix("data", s, seed)?),
    };
    let certificate = c1_certificate(args.dx, args.dy, &data)?;
    let infeasible = certificate.verdict == Verdict::Infeasible;
    let output = CertificateOutput { data, certificate };
    write_json(args.out.as_deref(), &output)?;
    eprintln!(
        "note: first-derivative matching across patch edges is {}",
        if infeasible { "infeasible for this data" } else { "feasible for this data" }
    );
    Ok(())
}

fn export(args: &ExportArgs) -> Result<(), Failure> {
    let text = read_to_string(&args.model)?;
    let sidecar: Sidecar = serde_json::from_str(&text)
        .map_err(|e| Failure::usage(format!("{}: {e}", args.model.display())))?;
    let spec = parse_spec_json(&sidecar.spec.to_string())?;
    let config = sidecar.model.clone();
    let model = build(&spec, &config)?;
    let mut csv: Vec<u8> = Vec::new();
    let samples: Vec<usize> = match model.dim() {
        1 => {
            let pts = sample_curve(model.as_ref(), None, args.n)?;
            io::write_curve_csv(&mut csv, &pts)?;
            vec![args.n]
        }
        _ => {
            let nx = args.nx.unwrap_or(args.n);
            let ny = args.ny.unwrap_or(args.n);
            let field =
                sample_heightfield(model.as_ref(), None, nx, ny, config_metadata(&config))?;
            io::write_heightfield_csv(&mut csv, &field)?;
            vec![nx, ny]
        }
    };
    fs::write(&args.out, csv)
        .map_err(|e| Failure::usage(format!("{}: {e}", args.out.display())))?;
    let fresh = Sidecar::new(&spec, &config, &samples);
    write_json(Some(&sidecar_path(&args.out)), &fresh)?;
    Ok(())
}
