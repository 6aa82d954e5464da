//! `genhyp`: law verification, triangle solving, Penner coordinates,
//! circle packings and circle patterns from the command line.
//!
//! Results go to stdout as a JSON report with sorted keys, so identical
//! invocations print identical bytes. Wall time is written to stderr.
//!
//! Exit codes: 0 success, 1 bad flags or unreadable input (and failed
//! checks for `verify-laws`), 2 domain, realizability or infeasibility
//! errors, 3 non-convergence.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

use genhyp::complex::{read_value_map, values_for, CellularSurface, TriangulatedSurface};
use genhyp::flow::{FlowOptions, FlowTrace, Orientation};
use genhyp::newton::NewtonOptions;
use genhyp::packing::{self, PackingConfig};
use genhyp::pattern::{self, PatternConfig};
use genhyp::penner::{self, PsiSolveOptions};
use genhyp::trig::law_sas;
use genhyp::verify::{verify_laws, LawSuiteOptions};
use genhyp::{Error, GeneralizedTriangle, TriangleType, VertexType};

#[derive(Parser, Debug)]
#[command(name = "genhyp", version, about = "Generalized hyperbolic triangles, packings and patterns")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Seeded consistency checks of the triangle laws.
    VerifyLaws(VerifyArgs),
    /// Solve one generalized triangle.
    Triangle(TriangleArgs),
    /// Penner coordinates on a decorated ideal triangulation.
    Penner {
        #[command(subcommand)]
        action: PennerAction,
    },
    /// Generalized circle packings on a triangulated surface.
    Packing(GeometryArgs),
    /// Generalized circle patterns on a cellular surface.
    Pattern(GeometryArgs),
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// `all`, or ordered types like `1,1,1` separated by `;`.
    #[arg(long, default_value = "all", allow_hyphen_values = true)]
    types: String,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Tolerance for the exact identities.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Also write the report to this file.
    #[arg(long)]
    json: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Given {
    Angles,
    Lengths,
    Sas,
}

#[derive(Args, Debug)]
struct TriangleArgs {
    /// Vertex types e1,e2,e3 with each e in {-1,0,1}.
    #[arg(long = "type", allow_hyphen_values = true)]
    ttype: String,
    #[arg(long, value_enum)]
    given: Given,
    /// Three numbers; for `sas` the two sides and the included angle.
    #[arg(long, allow_hyphen_values = true)]
    values: String,
}

#[derive(Args, Debug)]
struct PennerCommon {
    #[arg(long)]
    mesh: PathBuf,
    /// Write the resulting edge values to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum PennerAction {
    /// Edge invariants z = Ψ(l).
    Map {
        #[command(flatten)]
        common: PennerCommon,
        /// A number (same on every edge) or an `edge_weights` file.
        #[arg(long, allow_hyphen_values = true)]
        lengths: String,
    },
    /// Lengths l with Ψ(l) = z.
    Solve {
        #[command(flatten)]
        common: PennerCommon,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, default_value_t = 50)]
        max_iter: usize,
    },
    /// Tests z against every edge-cycle inequality.
    CheckPolytope {
        #[command(flatten)]
        common: PennerCommon,
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Action {
    Curvature,
    Solve,
    Flow,
}

#[derive(Args, Debug)]
struct GeometryArgs {
    #[arg(value_enum)]
    action: Action,
    #[arg(long)]
    mesh: PathBuf,
    #[arg(long, allow_negative_numbers = true)]
    eps: i64,
    #[arg(long, allow_negative_numbers = true)]
    delta: i64,
    /// Curvature parameter (patterns only).
    #[arg(long, allow_negative_numbers = true)]
    h: Option<f64>,
    /// Edge weights Φ (packings): a number or an `edge_weights` file.
    #[arg(long, allow_hyphen_values = true)]
    phi: Option<String>,
    /// Edge angles θ (patterns): a number or an `edge_weights` file.
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<String>,
    /// Radii: a number or a `vertex_values` / `face_values` file.
    #[arg(long, allow_hyphen_values = true)]
    r: Option<String>,
    /// Prescribed curvature, same forms as `--r`.
    #[arg(long, allow_hyphen_values = true)]
    target: Option<String>,
    #[arg(long, default_value_t = 0.01)]
    dt: f64,
    #[arg(long, default_value_t = 1000)]
    steps: usize,
    /// Stop the flow once ‖K − K̂‖∞ reaches this value.
    #[arg(long)]
    stop_tol: Option<f64>,
    /// Integrate with the sign −(K − K̂) instead of the converging ascent sign.
    #[arg(long)]
    literal: bool,
    /// Write the flow trace as CSV to this file.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Report the classical curvature 2π − K̃ (packing type (1,1,1) only).
    #[arg(long)]
    classic: bool,
    #[arg(long, default_value_t = 1e-12)]
    tol: f64,
    #[arg(long, default_value_t = 100)]
    max_iter: usize,
    /// Write radii (solve, flow) or curvature (curvature) to this file.
    #[arg(long)]
    out: Option<PathBuf>,
}

/// A failed command: message and exit code.
struct Failure {
    code: u8,
    message: String,
    /// Extra JSON printed to stdout before exiting (e.g. a witness).
    report: Option<Value>,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
            report: None,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Domain { .. }
            | Error::Degenerate(_)
            | Error::Realizability { .. }
            | Error::Unsupported(_)
            | Error::Infeasible { .. }
            | Error::DomainExit { .. } => 2,
            Error::Convergence { .. } | Error::Quadrature(_) | Error::Overflow(_) => 3,
            Error::Input(_) | Error::Parse(_) | Error::Validation(_) | Error::Size(_) => 1,
        };
        let report = match &e {
            Error::Infeasible {
                witness: Some(w), ..
            } => Some(json!({ "outcome": "infeasible", "witness": w })),
            _ => None,
        };
        Failure {
            code,
            message: e.to_string(),
            report,
        }
    }
}

type CliResult<T> = std::result::Result<T, Failure>;

/// Collects the command line and every input file read, hashed into the report digest.
struct Inputs {
    hasher: Sha256,
}

impl Inputs {
    fn new() -> Self {
        let mut hasher = Sha256::new();
        for a in std::env::args().skip(1) {
            hasher.update(a.as_bytes());
            hasher.update([0u8]);
        }
        Inputs { hasher }
    }

    fn read(&mut self, path: &Path) -> CliResult<String> {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
        self.hasher.update(text.as_bytes());
        self.hasher.update([0u8]);
        Ok(text)
    }

    fn digest(self) -> String {
        self.hasher
            .finalize()
            .iter()
            .map(|b| format!("{b:02x}"))
            .collect()
    }
}

fn write_file(path: &Path, text: &str) -> CliResult<()> {
    fs::write(path, text).map_err(|e| Failure::usage(format!("cannot write {}: {e}", path.display())))
}

fn parse_f64(s: &str) -> CliResult<f64> {
    let x: f64 = s
        .trim()
        .parse()
        .map_err(|_| Failure::usage(format!("not a number: {s:?}")))?;
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Failure::usage(format!("not a finite number: {s:?}")))
    }
}

fn parse_triple(s: &str) -> CliResult<[f64; 3]> {
    let v = s.split(',').map(parse_f64).collect::<CliResult<Vec<_>>>()?;
    v.try_into()
        .map_err(|_| Failure::usage(format!("expected three comma-separated numbers, got {s:?}")))
}

fn parse_type(s: &str) -> CliResult<TriangleType> {
    let v = s
        .split(',')
        .map(|x| {
            x.trim()
                .parse::<i64>()
                .map_err(|_| Failure::usage(format!("bad vertex type {x:?} in {s:?}")))
        })
        .collect::<CliResult<Vec<_>>>()?;
    let e: [i64; 3] = v
        .try_into()
        .map_err(|_| Failure::usage(format!("expected three vertex types, got {s:?}")))?;
    Ok(TriangleType::from_eps(e)?)
}

/// `arg` is either one number, used for every id, or a file holding the map `key`.
fn read_values(inputs: &mut Inputs, arg: &str, ids: &[String], key: &str, kind: &str) -> CliResult<Vec<f64>> {
    if let Ok(x) = arg.trim().parse::<f64>() {
        if !x.is_finite() {
            return Err(Failure::usage(format!("{kind} value {arg:?} is not finite")));
        }
        return Ok(vec![x; ids.len()]);
    }
    let text = inputs.read(Path::new(arg))?;
    let map = read_value_map(&text, key)?;
    Ok(values_for(ids, &map, kind)?)
}

fn value_map(ids: &[String], values: &[f64]) -> Value {
    let m: Map<String, Value> = ids
        .iter()
        .zip(values)
        .map(|(id, &x)| (id.clone(), json!(x)))
        .collect();
    Value::Object(m)
}

fn value_file(key: &str, ids: &[String], values: &[f64]) -> String {
    let mut s = serde_json::to_string_pretty(&json!({ key: value_map(ids, values) })).expect("JSON values serialize");
    s.push('\n');
    s
}

fn cmd_verify_laws(a: &VerifyArgs) -> CliResult<(Value, bool)> {
    if a.samples == 0 {
        return Err(Failure::usage("--samples must be at least 1"));
    }
    if !(a.tol > 0.0) {
        return Err(Failure::usage("--tol must be positive"));
    }
    let mut opts = LawSuiteOptions {
        samples: a.samples,
        seed: a.seed,
        tol: a.tol,
        ..Default::default()
    };
    if a.types.trim() != "all" {
        opts.types = a
            .types
            .split(';')
            .filter(|t| !t.trim().is_empty())
            .map(parse_type)
            .collect::<CliResult<_>>()?;
        if opts.types.is_empty() {
            return Err(Failure::usage("--types lists no type"));
        }
    }
    let report = verify_laws(&opts)?;
    let text = report.to_json();
    if let Some(path) = &a.json {
        write_file(path, &format!("{text}\n"))?;
    }
    let value: Value = serde_json::from_str(&text).expect("report is valid JSON");
    Ok((value, report.pass))
}

fn triangle_json(t: &GeneralizedTriangle) -> Value {
    json!({
        "type": [t.ttype.eps(0), t.ttype.eps(1), t.ttype.eps(2)],
        "angles": t.angles,
        "lengths": t.lengths,
    })
}

fn cmd_triangle(a: &TriangleArgs) -> CliResult<Value> {
    let ttype = parse_type(&a.ttype)?;
    let v = parse_triple(&a.values)?;
    let tri = match a.given {
        Given::Angles => triangle_json(&GeneralizedTriangle::from_angles(ttype, v)?),
        Given::Lengths => triangle_json(&GeneralizedTriangle::from_lengths(ttype, v)?),
        Given::Sas => {
            if ttype.vertex(0) != ttype.vertex(1) {
                return Err(Failure::usage(format!(
                    "sas needs a type (e,e,d) with the included corner last, got {ttype}"
                )));
            }
            let sol = law_sas(ttype.vertex(0), ttype.vertex(2), v[0], v[1], v[2])?;
            match sol.triangle {
                Some(t) => triangle_json(&t),
                None => json!({
                    "type": [ttype.eps(0), ttype.eps(1), ttype.eps(2)],
                    "degenerate": "straight included angle",
                    "lengths": [v[0], v[1], sol.third],
                    "angles": [sol.base_angles[0], sol.base_angles[1], v[2]],
                }),
            }
        }
    };
    Ok(json!({ "outcome": "ok", "triangle": tri }))
}

fn cmd_penner(action: &PennerAction, inputs: &mut Inputs) -> CliResult<Value> {
    let common = match action {
        PennerAction::Map { common, .. } | PennerAction::Solve { common, .. } | PennerAction::CheckPolytope { common, .. } => common,
    };
    let text = inputs.read(&common.mesh)?;
    let surface = TriangulatedSurface::from_json_str(&text)?;
    penner::check_surface(&surface)?;
    let ids = surface.edge_ids().to_vec();
    match action {
        PennerAction::Map { lengths, .. } => {
            let l = read_values(inputs, lengths, &ids, "edge_weights", "edge")?;
            let z = penner::psi_map(&surface, &l)?;
            if let Some(path) = &common.out {
                write_file(path, &value_file("edge_weights", &ids, &z))?;
            }
            Ok(json!({ "outcome": "ok", "z": value_map(&ids, &z) }))
        }
        PennerAction::Solve { z, tol, max_iter, .. } => {
            if !(*tol > 0.0) || *max_iter == 0 {
                return Err(Failure::usage("--tol must be positive and --max-iter at least 1"));
            }
            let zv = read_values(inputs, z, &ids, "edge_weights", "edge")?;
            let opts = PsiSolveOptions {
                tol: *tol,
                max_iter: *max_iter,
                ..Default::default()
            };
            let sol = penner::psi_solve(&surface, &zv, opts)?;
            if let Some(path) = &common.out {
                write_file(path, &value_file("edge_weights", &ids, &sol.lengths))?;
            }
            Ok(json!({
                "outcome": "ok",
                "lengths": value_map(&ids, &sol.lengths),
                "iterations": sol.iterations,
                "residual": sol.residual,
            }))
        }
        PennerAction::CheckPolytope { z, .. } => {
            let zv = read_values(inputs, z, &ids, "edge_weights", "edge")?;
            let check = penner::polytope_check(&surface, &zv, genhyp::complex::DEFAULT_CYCLE_CAP)?;
            let mut rep = json!({
                "outcome": if check.feasible { "feasible" } else { "infeasible" },
                "cycles_checked": check.cycles_checked,
                "min_cycle_sum": check.min_sum,
            });
            if let Some(w) = &check.witness {
                rep["witness"] = json!(w.describe(&surface));
            }
            if check.feasible {
                Ok(rep)
            } else {
                Err(Failure {
                    code: 2,
                    message: format!("edge-cycle sum {} is not positive", check.min_sum),
                    report: Some(rep),
                })
            }
        }
    }
}

fn vertex_type(e: i64, flag: &str) -> CliResult<VertexType> {
    VertexType::from_eps(e).map_err(|err| Failure::usage(format!("--{flag}: {err}")))
}

fn need<'a>(v: &'a Option<String>, flag: &str, action: Action) -> CliResult<&'a str> {
    v.as_deref()
        .ok_or_else(|| Failure::usage(format!("{action:?} needs --{flag}").to_lowercase()))
}

fn flow_options(a: &GeometryArgs) -> CliResult<FlowOptions> {
    if !(a.dt > 0.0 && a.dt.is_finite()) {
        return Err(Failure::usage("--dt must be positive"));
    }
    if matches!(a.stop_tol, Some(t) if !(t >= 0.0)) {
        return Err(Failure::usage("--stop-tol must be non-negative"));
    }
    Ok(FlowOptions {
        dt: a.dt,
        steps: a.steps,
        stop_tol: a.stop_tol,
        orientation: if a.literal { Orientation::Literal } else { Orientation::Ascent },
        ..Default::default()
    })
}

fn newton_options(a: &GeometryArgs) -> CliResult<NewtonOptions> {
    if !(a.tol > 0.0) || a.max_iter == 0 {
        return Err(Failure::usage("--tol must be positive and --max-iter at least 1"));
    }
    Ok(NewtonOptions {
        tol: a.tol,
        max_iter: a.max_iter,
    })
}

fn flow_report(trace: &FlowTrace, ids: &[String], a: &GeometryArgs) -> CliResult<Value> {
    if let Some(path) = &a.trace {
        write_file(path, &trace.to_csv())?;
    }
    let last = trace.last();
    Ok(json!({
        "outcome": "ok",
        "steps": trace.rows.len() - 1,
        "t": last.t,
        "radii": value_map(ids, &last.r),
        "curvature": value_map(ids, &last.k),
        "gradnorm": last.gradnorm,
        "initial_gradnorm": trace.rows[0].gradnorm,
        "lyapunov": last.lyapunov,
        "monotone": trace.monotone,
        "min_increment": trace.min_increment,
        "halvings": trace.halvings,
    }))
}

fn cmd_packing(a: &GeometryArgs, inputs: &mut Inputs) -> CliResult<Value> {
    if a.theta.is_some() || a.h.is_some() {
        return Err(Failure::usage("packings take --phi; --theta and --h belong to patterns"));
    }
    let (eps, delta) = (vertex_type(a.eps, "eps")?, vertex_type(a.delta, "delta")?);
    if a.classic && (eps, delta) != (VertexType::Interior, VertexType::Interior) {
        return Err(Failure::usage("--classic is only valid for packing type (1,1,1)"));
    }
    let text = inputs.read(&a.mesh)?;
    let surface = TriangulatedSurface::from_json_str(&text)?;
    let (vids, eids) = (surface.vertex_ids().to_vec(), surface.edge_ids().to_vec());
    let phi = read_values(inputs, need(&a.phi, "phi", a.action)?, &eids, "edge_weights", "edge")?;
    let cfg = PackingConfig::new(&surface, eps, delta, phi)?;
    match a.action {
        Action::Curvature => {
            let r = read_values(inputs, need(&a.r, "r", a.action)?, &vids, "vertex_values", "vertex")?;
            let mut k = packing::curvature_tilde(&cfg, &surface, &r)?;
            if a.classic {
                k = packing::classic_curvature(&cfg, &k)?;
            }
            if let Some(path) = &a.out {
                write_file(path, &value_file("vertex_values", &vids, &k))?;
            }
            Ok(json!({
                "outcome": "ok",
                "classic": a.classic,
                "curvature": value_map(&vids, &k),
            }))
        }
        Action::Solve => {
            let target = read_values(inputs, need(&a.target, "target", a.action)?, &vids, "vertex_values", "vertex")?;
            let sol = packing::packing_solve(&cfg, &surface, &target, newton_options(a)?)?;
            if let Some(path) = &a.out {
                write_file(path, &value_file("vertex_values", &vids, &sol.radii))?;
            }
            Ok(json!({
                "outcome": "ok",
                "radii": value_map(&vids, &sol.radii),
                "iterations": sol.iterations,
                "residual": sol.residual,
            }))
        }
        Action::Flow => {
            let r0 = read_values(inputs, need(&a.r, "r", a.action)?, &vids, "vertex_values", "vertex")?;
            let target = read_values(inputs, need(&a.target, "target", a.action)?, &vids, "vertex_values", "vertex")?;
            let trace = packing::packing_flow(&cfg, &surface, &r0, &target, flow_options(a)?)?;
            if let Some(path) = &a.out {
                write_file(path, &value_file("vertex_values", &vids, &trace.last().r))?;
            }
            flow_report(&trace, &vids, a)
        }
    }
}

fn cmd_pattern(a: &GeometryArgs, inputs: &mut Inputs) -> CliResult<Value> {
    if a.phi.is_some() {
        return Err(Failure::usage("patterns take --theta; --phi belongs to packings"));
    }
    if a.classic {
        return Err(Failure::usage("--classic is only valid for packing type (1,1,1)"));
    }
    let (eps, delta) = (vertex_type(a.eps, "eps")?, vertex_type(a.delta, "delta")?);
    let h = a.h.ok_or_else(|| Failure::usage("patterns need --h"))?;
    let text = inputs.read(&a.mesh)?;
    let surface = CellularSurface::from_json_str(&text)?;
    let (fids, eids) = (surface.face_ids().to_vec(), surface.edge_ids().to_vec());
    let theta = read_values(inputs, need(&a.theta, "theta", a.action)?, &eids, "edge_weights", "edge")?;
    let cfg = PatternConfig::new(&surface, eps, delta, h, theta)?;
    match a.action {
        Action::Curvature => {
            let r = read_values(inputs, need(&a.r, "r", a.action)?, &fids, "face_values", "face")?;
            let k = pattern::kh_curvature(&cfg, &surface, &r)?;
            if let Some(path) = &a.out {
                write_file(path, &value_file("face_values", &fids, &k))?;
            }
            Ok(json!({ "outcome": "ok", "curvature": value_map(&fids, &k) }))
        }
        Action::Solve => {
            let target = read_values(inputs, need(&a.target, "target", a.action)?, &fids, "face_values", "face")?;
            let sol = match &a.r {
                Some(arg) => {
                    let r0 = read_values(inputs, arg, &fids, "face_values", "face")?;
                    pattern::pattern_solve_from(&cfg, &surface, &target, &r0, newton_options(a)?)?
                }
                None => pattern::pattern_solve(&cfg, &surface, &target, newton_options(a)?)?,
            };
            if let Some(path) = &a.out {
                write_file(path, &value_file("face_values", &fids, &sol.radii))?;
            }
            Ok(json!({
                "outcome": "ok",
                "radii": value_map(&fids, &sol.radii),
                "iterations": sol.iterations,
                "residual": sol.residual,
            }))
        }
        Action::Flow => {
            let r0 = match &a.r {
                Some(arg) => read_values(inputs, arg, &fids, "face_values", "face")?,
                None => pattern::default_start(&cfg, &surface)?,
            };
            let target = read_values(inputs, need(&a.target, "target", a.action)?, &fids, "face_values", "face")?;
            let trace = pattern::pattern_flow(&cfg, &surface, &r0, &target, flow_options(a)?)?;
            if let Some(path) = &a.out {
                write_file(path, &value_file("face_values", &fids, &trace.last().r))?;
            }
            flow_report(&trace, &fids, a)
        }
    }
}

fn command_name(c: &Command) -> String {
    match c {
        Command::VerifyLaws(_) => "verify-laws".into(),
        Command::Triangle(_) => "triangle".into(),
        Command::Penner { action } => match action {
            PennerAction::Map { .. } => "penner map".into(),
            PennerAction::Solve { .. } => "penner solve".into(),
            PennerAction::CheckPolytope { .. } => "penner check-polytope".into(),
        },
        Command::Packing(a) => format!("packing {:?}", a.action).to_lowercase(),
        Command::Pattern(a) => format!("pattern {:?}", a.action).to_lowercase(),
    }
}

/// Runs the command; returns the report body and whether every check passed.
fn dispatch(cli: &Cli, inputs: &mut Inputs) -> CliResult<(Value, bool)> {
    match &cli.command {
        Command::VerifyLaws(a) => cmd_verify_laws(a),
        Command::Triangle(a) => cmd_triangle(a).map(|v| (v, true)),
        Command::Penner { action } => cmd_penner(action, inputs).map(|v| (v, true)),
        Command::Packing(a) => cmd_packing(a, inputs).map(|v| (v, true)),
        Command::Pattern(a) => cmd_pattern(a, inputs).map(|v| (v, true)),
    }
}

fn print_report(command: &str, digest: String, body: Value) {
    let mut report = json!({ "command": command, "inputs_digest": digest });
    if let (Value::Object(dst), Value::Object(src)) = (&mut report, body) {
        for (k, v) in src {
            dst.entry(k).or_insert(v);
        }
    }
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
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
    let start = Instant::now();
    let name = command_name(&cli.command);
    let mut inputs = Inputs::new();
    let result = dispatch(&cli, &mut inputs);
    let digest = inputs.digest();
    let code = match result {
        Ok((body, pass)) => {
            print_report(&name, digest, body);
            if pass {
                0
            } else {
                eprintln!("genhyp: some checks failed");
                1
            }
        }
        Err(f) => {
            if let Some(body) = f.report {
                print_report(&name, digest, body);
            }
            eprintln!("genhyp: {}", f.message);
            f.code
        }
    };
    eprintln!("wall time: {:.3} s", start.elapsed().as_secs_f64());
    ExitCode::from(code)
}
