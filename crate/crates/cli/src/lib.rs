//! Command-line front end for the `degenspace` kernel.
//!
//! Exit codes: 0 success, 1 usage, 2 domain error, 3 verification failure.

mod output;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use degenspace::bundle::{self, AdaptedCoords, Chart};
use degenspace::conformal::{self, PlanePoint};
use degenspace::numerics::Tolerances;
use degenspace::projective::{self, ChartPoint, GeodesicCoeffs};
use degenspace::{verify, AlgebraElement};
use serde_json::Value;

pub use output::{json_real, real, Format, Table};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_VERIFY: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "degenspace",
    version,
    about = "Geometry of the degenerate plane algebra"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Evaluate an algebra operation.
    Eval(EvalArgs),
    /// Apply a model map to a point.
    Map(MapArgs),
    /// Sample a geodesic of the normalized plane.
    Geodesic(GeodesicArgs),
    /// Sample a fiber in one of the models.
    Fiber(FiberArgs),
    /// Metric, connection and curvature at a chart point.
    Tensors(TensorArgs),
    /// Run the seeded verification suites.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EvalOp {
    Mul,
    Inv,
    Conj,
    Bilinear,
    Norm,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    pub op: EvalOp,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_reals)]
    pub lhs: Reals,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_reals)]
    pub rhs: Option<Reals>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MapKind {
    Stereo,
    StereoInv,
    Adapted,
    ProjStereo,
    Weierstrass,
}

#[derive(Debug, Args)]
pub struct MapArgs {
    pub kind: MapKind,
    #[arg(long, allow_hyphen_values = true, value_parser = parse_reals)]
    pub point: Reals,
    /// Print homogeneous coordinates without normalizing.
    #[arg(long)]
    pub raw: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GeodesicModel {
    Projective,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("curve").required(true).args(["a", "vertical", "through"])))]
pub struct GeodesicArgs {
    #[arg(long, value_enum, default_value = "projective")]
    pub model: GeodesicModel,
    /// Coefficient of `x1^2 - 1`.
    #[arg(long = "A", id = "a", allow_hyphen_values = true, requires = "b")]
    pub a: Option<f64>,
    /// Coefficient of `x1`.
    #[arg(long = "B", id = "b", allow_hyphen_values = true, requires = "a")]
    pub b: Option<f64>,
    /// Abscissa of a vertical line; the range is then over `x2`.
    #[arg(long, allow_hyphen_values = true)]
    pub vertical: Option<f64>,
    /// Two points `x1,x2,x1',x2'`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_reals)]
    pub through: Option<Reals>,
    #[command(flatten)]
    pub sampling: Sampling,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FiberModel {
    Group,
    Conformal,
    Projective,
}

#[derive(Debug, Args)]
pub struct FiberArgs {
    #[arg(long, value_enum)]
    pub model: FiberModel,
    /// Base coordinate of the fiber.
    #[arg(long, allow_hyphen_values = true)]
    pub param: f64,
    /// Fixed `λ` for the group model; the range is then over `φ`.
    #[arg(long, allow_hyphen_values = true, default_value_t = 1.0)]
    pub lambda: f64,
    #[command(flatten)]
    pub sampling: Sampling,
}

#[derive(Debug, Args)]
pub struct Sampling {
    /// Sample interval `lo:hi`.
    #[arg(long, allow_hyphen_values = true, value_parser = parse_range)]
    pub range: (f64, f64),
    #[arg(long, default_value_t = 101, value_parser = clap::value_parser!(u32).range(1..=10_000_000))]
    pub samples: u32,
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct TensorArgs {
    #[arg(long, allow_hyphen_values = true)]
    pub x1: f64,
    #[arg(long, allow_hyphen_values = true)]
    pub x2: f64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, env = "DEGENSPACE_SEED", default_value_t = 42)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000, value_parser = clap::value_parser!(u32).range(1..))]
    pub trials: u32,
    #[arg(long, value_parser = parse_positive)]
    pub exact_rel: Option<f64>,
    #[arg(long, value_parser = parse_positive)]
    pub algebraic_rel: Option<f64>,
    #[arg(long, value_parser = parse_positive)]
    pub fd_abs: Option<f64>,
    #[arg(long, value_parser = parse_positive)]
    pub fd_step: Option<f64>,
    #[arg(long, value_parser = parse_positive)]
    pub ode_abs: Option<f64>,
    #[arg(long, value_parser = parse_positive)]
    pub ode_residual_rel: Option<f64>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

impl VerifyArgs {
    pub fn tolerances(&self) -> Tolerances {
        let d = Tolerances::default();
        Tolerances {
            exact_rel: self.exact_rel.unwrap_or(d.exact_rel),
            algebraic_rel: self.algebraic_rel.unwrap_or(d.algebraic_rel),
            fd_abs: self.fd_abs.unwrap_or(d.fd_abs),
            fd_step: self.fd_step.unwrap_or(d.fd_step),
            ode_abs: self.ode_abs.unwrap_or(d.ode_abs),
            ode_residual_rel: self.ode_residual_rel.unwrap_or(d.ode_residual_rel),
        }
    }
}

/// Comma-separated reals.
#[derive(Debug, Clone, PartialEq)]
pub struct Reals(pub Vec<f64>);

fn parse_real(s: &str) -> Result<f64, String> {
    let v: f64 = s
        .trim()
        .parse()
        .map_err(|_| format!("`{s}` is not a real number"))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(format!("`{s}` is not finite"))
    }
}

pub fn parse_reals(s: &str) -> Result<Reals, String> {
    s.split(',')
        .map(parse_real)
        .collect::<Result<_, _>>()
        .map(Reals)
}

pub fn parse_range(s: &str) -> Result<(f64, f64), String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("`{s}` is not of the form lo:hi"))?;
    Ok((parse_real(lo)?, parse_real(hi)?))
}

fn parse_positive(s: &str) -> Result<f64, String> {
    let v = parse_real(s)?;
    if v > 0.0 {
        Ok(v)
    } else {
        Err(format!("`{s}` must be positive"))
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Domain(#[from] degenspace::Error),
    #[error("cannot write {path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("verification failed")]
    Verify,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Domain(_) | CliError::Io { .. } => EXIT_DOMAIN,
            CliError::Verify => EXIT_VERIFY,
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn arity(values: &Reals, n: usize, what: &str) -> Result<(), CliError> {
    if values.0.len() == n {
        Ok(())
    } else {
        Err(usage(format!(
            "{what} expects {n} values, got {}",
            values.0.len()
        )))
    }
}

fn element(values: &Reals, what: &str) -> Result<AlgebraElement, CliError> {
    arity(values, 3, what)?;
    Ok(AlgebraElement::new(values.0[0], values.0[1], values.0[2])?)
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json serializes");
    s.push('\n');
    s
}

fn element_json(x: AlgebraElement) -> Value {
    output::json_object([
        ("x0", json_real(x.x0())),
        ("x1", json_real(x.x1())),
        ("x2", json_real(x.x2())),
    ])
}

fn reals_json(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|x| json_real(*x)).collect())
}

pub fn cmd_eval(args: &EvalArgs) -> Result<String, CliError> {
    let x = element(&args.lhs, "--lhs")?;
    let binary = matches!(args.op, EvalOp::Mul | EvalOp::Bilinear);
    let y = match (&args.rhs, binary) {
        (Some(r), true) => Some(element(r, "--rhs")?),
        (None, true) => return Err(usage("this operation needs --rhs")),
        (Some(_), false) => return Err(usage("this operation takes only --lhs")),
        (None, false) => None,
    };
    let v = match args.op {
        EvalOp::Mul => element_json(x * y.unwrap()),
        EvalOp::Inv => element_json(x.inverse()?),
        EvalOp::Conj => element_json(x.conj()),
        EvalOp::Bilinear => json_real(x.bilinear(y.unwrap())),
        EvalOp::Norm => json_real(x.norm_sq()),
    };
    Ok(pretty(&v))
}

fn plane_json(p: PlanePoint) -> Value {
    match p {
        PlanePoint::Finite { x, y } => {
            output::json_object([("x", json_real(x)), ("y", json_real(y))])
        }
        PlanePoint::Ideal { line } => output::json_object([
            ("ideal", Value::Bool(true)),
            ("line", line.map_or(Value::Null, json_real)),
        ]),
    }
}

pub fn cmd_map(args: &MapArgs) -> Result<String, CliError> {
    let p = &args.point;
    let chart = |p: &Reals| -> Result<ChartPoint, CliError> {
        arity(p, 2, "--point")?;
        Ok(ChartPoint::new(p.0[0], p.0[1])?)
    };
    let v = match args.kind {
        MapKind::Stereo => plane_json(conformal::stereo_to_plane(element(p, "--point")?)?),
        MapKind::StereoInv => {
            arity(p, 2, "--point")?;
            let q = PlanePoint::finite(p.0[0], p.0[1])?;
            element_json(conformal::stereo_from_plane(&q)?)
        }
        MapKind::Adapted => match p.0.len() {
            2 => {
                let a = conformal::adapted_from_plane(&PlanePoint::finite(p.0[0], p.0[1])?)?;
                output::json_object([
                    ("eps", json_real(a.eps)),
                    ("u", json_real(a.u)),
                    ("phi", json_real(a.phi)),
                ])
            }
            3 => {
                let a = bundle::to_adapted(element(p, "--point")?)?;
                let chart = match a.chart {
                    Chart::Timelike => "timelike",
                    Chart::Spacelike => "spacelike",
                };
                output::json_object([
                    ("chart", Value::String(chart.into())),
                    ("u", json_real(a.u)),
                    ("lambda", json_real(a.lambda)),
                    ("phi", json_real(a.phi)),
                ])
            }
            n => return Err(usage(format!("--point expects 2 or 3 values, got {n}"))),
        },
        MapKind::ProjStereo => {
            let h = projective::proj_stereo(chart(p)?);
            reals_json(&if args.raw { h.coords() } else { h.normalized() })
        }
        // The representative with B(X, X) = -1, printed as is.
        MapKind::Weierstrass => reals_json(&projective::weierstrass(chart(p)?).coords()),
    };
    Ok(pretty(&v))
}

fn sample_points(range: (f64, f64), samples: u32) -> Vec<f64> {
    let (lo, hi) = range;
    if samples == 1 {
        return vec![lo];
    }
    let n = f64::from(samples - 1);
    (0..samples)
        .map(|i| lo + (hi - lo) * f64::from(i) / n)
        .collect()
}

pub fn geodesic_table(args: &GeodesicArgs) -> Result<Table, CliError> {
    let coeffs = match (args.a, args.b, args.vertical, &args.through) {
        (Some(a), Some(b), None, None) => GeodesicCoeffs::Graph { a, b },
        (None, None, Some(x1), None) => GeodesicCoeffs::Vertical { x1 },
        (None, None, None, Some(t)) => {
            arity(t, 4, "--through")?;
            let p = ChartPoint::new(t.0[0], t.0[1])?;
            let q = ChartPoint::new(t.0[2], t.0[3])?;
            projective::geodesic_through(p, q)?
        }
        _ => return Err(usage("give exactly one of --A/--B, --vertical, --through")),
    };
    let mut table = Table::new(vec!["x1", "x2"]);
    for s in sample_points(args.sampling.range, args.sampling.samples) {
        match coeffs {
            GeodesicCoeffs::Graph { .. } => table.push(vec![s, coeffs.eval(s).unwrap()]),
            GeodesicCoeffs::Vertical { x1 } => table.push(vec![x1, s]),
        }
    }
    Ok(table)
}

pub fn fiber_table(args: &FiberArgs) -> Result<Table, CliError> {
    let ts = sample_points(args.sampling.range, args.sampling.samples);
    let c = args.param;
    let table = match args.model {
        FiberModel::Group => {
            if args.lambda == 0.0 || !args.lambda.is_finite() {
                return Err(usage("--lambda must be finite and nonzero"));
            }
            let mut t = Table::new(vec!["x0", "x1", "x2"]);
            for phi in ts {
                let x = bundle::from_adapted(&AdaptedCoords {
                    chart: Chart::Timelike,
                    u: c,
                    lambda: args.lambda,
                    phi,
                });
                t.push(x.to_array().to_vec());
            }
            t
        }
        FiberModel::Conformal => {
            let mut t = Table::new(vec!["x", "y"]);
            for x in ts {
                t.push(vec![x, conformal::fiber_image(c, x)]);
            }
            t
        }
        FiberModel::Projective => {
            let mut t = Table::new(vec!["x1", "x2"]);
            for x1 in ts {
                t.push(vec![x1, projective::projective_fiber_image(c, x1)]);
            }
            t
        }
    };
    if table.rows.iter().flatten().any(|v| !v.is_finite()) {
        return Err(degenspace::Error::NonFinite("fiber sample").into());
    }
    Ok(table)
}

pub fn cmd_tensors(args: &TensorArgs) -> Result<String, CliError> {
    let c = ChartPoint::new(args.x1, args.x2)?;
    let g = projective::christoffel(c);
    let k = projective::curvature(c);
    let v = output::json_object([
        ("g11", json_real(g.g11)),
        (
            "christoffel",
            output::json_object([
                ("G111", json_real(g.g1_11)),
                ("G212", json_real(g.g2_12)),
                ("G211", json_real(g.g2_11)),
            ]),
        ),
        (
            "curvature",
            output::json_object([("R2_121", json_real(k.r2_121))]),
        ),
        (
            "ricci",
            output::json_object([("R11", json_real(k.ricci_11))]),
        ),
    ]);
    Ok(pretty(&v))
}

pub fn cmd_verify(args: &VerifyArgs) -> (String, bool) {
    let report = verify::run_all(args.seed, args.trials as usize, &args.tolerances());
    let mut s = serde_json::to_string_pretty(&report).expect("report serializes");
    s.push('\n');
    (s, report.passed)
}

fn emit(payload: &str, out: Option<&PathBuf>, stdout: &mut dyn Write) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, payload).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => stdout
            .write_all(payload.as_bytes())
            .map_err(|source| CliError::Io {
                path: "stdout".into(),
                source,
            }),
    }
}

pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Eval(a) => emit(&cmd_eval(a)?, None, stdout),
        Command::Map(a) => emit(&cmd_map(a)?, None, stdout),
        Command::Geodesic(a) => {
            let t = geodesic_table(a)?;
            emit(
                &t.render(a.sampling.format),
                a.sampling.out.as_ref(),
                stdout,
            )
        }
        Command::Fiber(a) => {
            let t = fiber_table(a)?;
            emit(
                &t.render(a.sampling.format),
                a.sampling.out.as_ref(),
                stdout,
            )
        }
        Command::Tensors(a) => emit(&cmd_tensors(a)?, None, stdout),
        Command::Verify(a) => {
            let (report, passed) = cmd_verify(a);
            emit(&report, a.out.as_ref(), stdout)?;
            if passed {
                Ok(())
            } else {
                Err(CliError::Verify)
            }
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
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
                    let _ = write!(stdout, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    match execute(&cli, stdout) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = match &e {
                CliError::Domain(d) => writeln!(stderr, "error: {}: {d}", d.kind()),
                CliError::Verify => writeln!(stderr, "error: verification failed; see the report"),
                other => writeln!(stderr, "error: {other}"),
            };
            e.exit_code()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let mut full = vec!["degenspace"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn parses_reals_and_ranges() {
        assert_eq!(
            parse_reals("1,-2.5,3e2").unwrap(),
            Reals(vec![1.0, -2.5, 300.0])
        );
        assert!(parse_reals("1,,2").is_err());
        assert!(parse_reals("nan").is_err());
        assert_eq!(parse_range("-3:-1").unwrap(), (-3.0, -1.0));
        assert!(parse_range("3").is_err());
    }

    #[test]
    fn sample_grid_hits_endpoints() {
        assert_eq!(
            sample_points((-2.0, 2.0), 5),
            vec![-2.0, -1.0, 0.0, 1.0, 2.0]
        );
        assert_eq!(sample_points((0.0, 1.0), 1), vec![0.0]);
    }

    #[test]
    fn operand_count_is_checked() {
        assert_eq!(run_args(&["eval", "mul", "--lhs", "1,2,3"]).0, EXIT_USAGE);
        assert_eq!(
            run_args(&["eval", "norm", "--lhs", "1,2,3", "--rhs", "1,1,1"]).0,
            EXIT_USAGE
        );
        assert_eq!(run_args(&["eval", "norm", "--lhs", "1,2"]).0, EXIT_USAGE);
        assert_eq!(
            run_args(&["map", "proj-stereo", "--point", "1,2,3"]).0,
            EXIT_USAGE
        );
    }

    #[test]
    fn help_is_not_an_error() {
        let (code, out, _) = run_args(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("verify"));
    }

    #[test]
    fn geodesic_forms_are_exclusive() {
        assert_eq!(
            run_args(&[
                "geodesic",
                "--A",
                "1",
                "--B",
                "0",
                "--vertical",
                "2",
                "--range",
                "0:1"
            ])
            .0,
            EXIT_USAGE
        );
        assert_eq!(
            run_args(&["geodesic", "--A", "1", "--range", "0:1"]).0,
            EXIT_USAGE
        );
        assert_eq!(run_args(&["geodesic", "--range", "0:1"]).0, EXIT_USAGE);
    }

    #[test]
    fn group_fiber_lies_in_its_plane() {
        let (code, out, _) = run_args(&[
            "fiber",
            "--model",
            "group",
            "--param",
            "1.5",
            "--range",
            "-1:1",
            "--samples",
            "4",
        ]);
        assert_eq!(code, EXIT_OK);
        for line in out.lines().skip(1) {
            let v: Vec<f64> = line.split(',').map(|s| s.parse().unwrap()).collect();
            assert!((1.5 * (v[0] + v[1]) - v[2]).abs() < 1e-12, "{line}");
            assert!((v[0] * v[0] - v[1] * v[1] - 1.0).abs() < 1e-12, "{line}");
        }
    }
}
