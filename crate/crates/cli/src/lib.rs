//! Command-line front end for `junction-core`.
//!
//! Exit codes: 0 success, 1 a verification check failed, 2 invalid input,
//! 3 internal inconsistency.

pub mod payload;

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use junction_core::{
    alpha_to_bd, alpha_to_u2, bd_to_alpha, classify, compare_printed_inverse, compose, decompose_u2_with_branch,
    diagonal_u2_to_rho, inverse_identity_residuals, oracle_alpha_from_u2, oracle_rho_from_diagonal, plane_spinors,
    random_alpha, random_rho, scatter_rho, Island, rho_to_diagonal_u2, switch_demo, sweep, u2_to_alpha, validate_class,
    verify_selfadjoint_domain, AlphaBc64, BdForm, ClassReport, Error, ExtendedReal, ExtensionClass, Mass, Mass64,
    QuaternionForm, RhoBc64, ScatteringResult64, SweepRow,
};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};

use payload::*;

pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INVALID_INPUT: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

pub const DEFAULT_SEED: u64 = 0x5EED_2024;

#[derive(Debug, Parser)]
#[command(name = "junction", version, about = "Boundary conditions of the 1-D Dirac operator with a junction")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Split a unitary 2x2 matrix into gamma3 * [[gamma1, -gamma2*], [gamma2, gamma1*]]
    Decompose {
        /// JSON matrix [[[re,im],[re,im]],[[re,im],[re,im]]]
        #[arg(long)]
        matrix: String,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Convert between U(2) parameters and boundary conditions
    Convert(ConvertArgs),
    /// Check a boundary condition, or random ones with --fuzz
    Verify(VerifyArgs),
    /// Plane-wave scattering sweep over an energy grid
    Scatter(ScatterArgs),
    /// Spin switch built from a no-flip unit and a spin-flip unit
    DemoSwitch(DemoArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Direction {
    U2ToBc,
    BcToU2,
    AlphaToBd,
    BdToAlpha,
    RhoToU2,
}

#[derive(Debug, Args)]
pub struct ConvertArgs {
    #[arg(value_enum)]
    pub direction: Direction,
    /// gamma1,gamma2,gamma3 (u2-to-bc)
    #[arg(long, allow_hyphen_values = true)]
    pub gamma: Option<String>,
    /// JSON unitary matrix (u2-to-bc)
    #[arg(long, allow_hyphen_values = true)]
    pub matrix: Option<String>,
    /// gammaL,gammaR of a diagonal unitary (u2-to-bc)
    #[arg(long, allow_hyphen_values = true)]
    pub diag: Option<String>,
    /// a1,a2,a3,a4 (bc-to-u2, alpha-to-bd)
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    /// rho_plus,rho_minus with `inf` allowed (rho-to-u2)
    #[arg(long, allow_hyphen_values = true)]
    pub rho: Option<String>,
    /// b1,b2,b3,b4 (bd-to-alpha)
    #[arg(long, allow_hyphen_values = true)]
    pub bd: Option<String>,
    /// overall phase, e.g. `pi/2` (bd-to-alpha)
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<String>,
    #[arg(long, default_value_t = 0.0)]
    pub mass: f64,
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// a1,a2,a3,a4 of a transmitting condition
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    /// rho_plus,rho_minus of a separating condition (`inf` allowed)
    #[arg(long, allow_hyphen_values = true)]
    pub rho: Option<String>,
    /// Number of random transmitting and separating conditions to check
    #[arg(long)]
    pub fuzz: Option<usize>,
    #[arg(long, default_value_t = 0.0)]
    pub mass: f64,
    /// Junction half-length used by the boundary-value oracle
    #[arg(long, default_value_t = 0.0)]
    pub lambda: f64,
    /// Random boundary-value pairs per symmetry check
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    /// Membership tolerance for the class constraints
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Args)]
pub struct ScatterArgs {
    /// a1,a2,a3,a4 of a transmitting condition
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<String>,
    /// rho_plus,rho_minus of a separating condition (`inf` allowed)
    #[arg(long, allow_hyphen_values = true)]
    pub rho: Option<String>,
    /// Island the wave comes from, for separating conditions
    #[arg(long, value_enum, default_value_t = Side::Left)]
    pub from: Side,
    #[arg(long, default_value_t = 0.0)]
    pub mass: f64,
    #[arg(long)]
    pub emin: f64,
    #[arg(long)]
    pub emax: f64,
    #[arg(long, default_value_t = 11)]
    pub steps: usize,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; stdout when absent
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DemoFormat {
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct DemoArgs {
    /// Phase-shift variants to include, e.g. `pi/2` (repeatable)
    #[arg(long, allow_hyphen_values = true)]
    pub phase: Vec<String>,
    #[arg(long, value_enum, default_value_t = DemoFormat::Text)]
    pub format: DemoFormat,
}

/// Failure with its exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    pub fn invalid(message: impl Into<String>) -> Self {
        Self { code: EXIT_INVALID_INPUT, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InternalInconsistency { .. } | Error::SingularSystem | Error::QuadratureFailure { .. } => EXIT_INTERNAL,
            _ => EXIT_INVALID_INPUT,
        };
        Self { code, message: e.to_string() }
    }
}

/// What a command writes: stdout text, stderr text, exit code.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Report {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Report {
    fn ok(stdout: String) -> Self {
        Self { stdout, stderr: String::new(), code: 0 }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn mass(m: f64) -> CliResult<Mass64> {
    Ok(Mass::new(m)?)
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string(v).expect("json values serialize");
    s.push('\n');
    s
}

fn need<'a>(opt: &'a Option<String>, flag: &str, direction: &str) -> CliResult<&'a str> {
    opt.as_deref().ok_or_else(|| CliError::invalid(format!("{direction} needs --{flag}")))
}

fn parse_alpha(s: &str) -> CliResult<AlphaBc64> {
    let v = parse_complex_list(s, 4).map_err(CliError::invalid)?;
    Ok(AlphaBc64::new(v[0], v[1], v[2], v[3]))
}

fn parse_rho(s: &str) -> CliResult<RhoBc64> {
    let (p, m) = parse_rho_pair(s).map_err(CliError::invalid)?;
    Ok(RhoBc64::new(p, m))
}

fn gamma_json(q: &QuaternionForm<f64>) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("gamma1".into(), complex_json(q.g1));
    m.insert("gamma2".into(), complex_json(q.g2));
    m.insert("gamma3".into(), complex_json(q.g3));
    m
}

fn alpha_json(a: &AlphaBc64) -> Value {
    complex_list_json(&a.to_array())
}

fn class_json(c: &ExtensionClass<f64>) -> Value {
    match c {
        ExtensionClass::Separating(r) => json!({
            "type": "separating",
            "rho_plus": extended_json(r.rho_plus),
            "rho_minus": extended_json(r.rho_minus),
        }),
        ExtensionClass::Transmitting(a) => json!({ "type": "transmitting", "alpha": alpha_json(a) }),
    }
}

pub fn cmd_decompose(matrix: &str, tol: f64) -> CliResult<Report> {
    let m = parse_matrix(matrix).map_err(CliError::invalid)?;
    let (q, branch) = decompose_u2_with_branch(&m, tol)?;
    let mut out = gamma_json(&q);
    out.insert("branch".into(), Value::String(branch.as_str().into()));
    Ok(Report::ok(pretty(&Value::Object(out))))
}

pub fn cmd_convert(args: &ConvertArgs) -> CliResult<Report> {
    let m = mass(args.mass)?;
    let value = match args.direction {
        Direction::U2ToBc => {
            let given = [args.gamma.is_some(), args.matrix.is_some(), args.diag.is_some()];
            if given.iter().filter(|&&g| g).count() != 1 {
                return Err(CliError::invalid("u2-to-bc needs exactly one of --gamma, --matrix, --diag"));
            }
            if let Some(g) = &args.gamma {
                let v = parse_complex_list(g, 3).map_err(CliError::invalid)?;
                let q = QuaternionForm::new(v[0], v[1], v[2])?;
                classify(&compose(&q)?, m, args.tol).map(|c| class_json(&c))?
            } else if let Some(s) = &args.matrix {
                let u = parse_matrix(s).map_err(CliError::invalid)?;
                class_json(&classify(&u, m, args.tol)?)
            } else {
                let v = parse_complex_list(args.diag.as_deref().unwrap_or_default(), 2).map_err(CliError::invalid)?;
                class_json(&ExtensionClass::Separating(diagonal_u2_to_rho(v[0], v[1], m)?))
            }
        }
        Direction::BcToU2 => {
            let a = parse_alpha(need(&args.alpha, "alpha", "bc-to-u2")?)?;
            let cmp = compare_printed_inverse(&a, m, 1e3 * args.tol)?;
            let mut out = gamma_json(&cmp.primary);
            out.insert("matrix".into(), matrix_json(&compose(&cmp.primary)?));
            let mut printed = gamma_json(&cmp.printed);
            printed.insert("agreement".into(), Value::String(cmp.agreement.as_str().into()));
            printed.insert("agrees_exactly".into(), Value::Bool(cmp.agreement == junction_core::Agreement::Exact));
            printed.insert(
                "agrees_up_to_sign_pair".into(),
                Value::Bool(cmp.agreement == junction_core::Agreement::SignPair),
            );
            printed.insert("disagrees".into(), Value::Bool(cmp.agreement == junction_core::Agreement::Mismatch));
            out.insert("printed_formula".into(), Value::Object(printed));
            Value::Object(out)
        }
        Direction::AlphaToBd => {
            let a = parse_alpha(need(&args.alpha, "alpha", "alpha-to-bd")?)?;
            let f = alpha_to_bd(&a, args.tol)?;
            json!({ "theta": real_json(f.theta), "a": [real_json(f.b1), real_json(f.b2), real_json(f.b3), real_json(f.b4)] })
        }
        Direction::BdToAlpha => {
            let b = parse_real_list(need(&args.bd, "bd", "bd-to-alpha")?, 4).map_err(CliError::invalid)?;
            let theta = parse_angle(need(&args.theta, "theta", "bd-to-alpha")?).map_err(CliError::invalid)?;
            let a = bd_to_alpha(&BdForm::new(theta, b[0], b[1], b[2], b[3]), args.tol)?;
            json!({ "alpha": alpha_json(&a) })
        }
        Direction::RhoToU2 => {
            let r = parse_rho(need(&args.rho, "rho", "rho-to-u2")?)?;
            let (gl, gr) = rho_to_diagonal_u2(&r, m);
            json!({
                "gamma_l": complex_json(gl),
                "gamma_r": complex_json(gr),
                "matrix": matrix_json(&junction_core::C2Matrix64::diag(gl, gr)),
            })
        }
    };
    Ok(Report::ok(pretty(&value)))
}

/// One named check with its worst residual over all instances.
#[derive(Debug, Clone, PartialEq)]
struct Check {
    name: String,
    residual: f64,
    tol: f64,
}

impl Check {
    fn pass(&self) -> bool {
        self.residual <= self.tol
    }
}

#[derive(Default)]
struct Checks {
    items: Vec<Check>,
    first_failure: Option<String>,
}

impl Checks {
    fn record(&mut self, name: &str, residual: f64, tol: f64, context: impl FnOnce() -> String) {
        let residual = if residual.is_nan() { f64::INFINITY } else { residual };
        if residual > tol && self.first_failure.is_none() {
            self.first_failure = Some(format!("{name}: residual {residual:.3e} > {tol:.1e} for {}", context()));
        }
        match self.items.iter_mut().find(|c| c.name == name) {
            Some(c) => c.residual = c.residual.max(residual),
            None => self.items.push(Check { name: name.into(), residual, tol }),
        }
    }

    fn passed(&self) -> bool {
        self.items.iter().all(Check::pass)
    }

    fn render(&self, header: &str) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{header}");
        let _ = writeln!(s, "{:<34} {:>12} {:>9}  status", "check", "max residual", "tol");
        for c in &self.items {
            let _ = writeln!(s, "{:<34} {:>12.3e} {:>9.1e}  {}", c.name, c.residual, c.tol, if c.pass() { "PASS" } else { "FAIL" });
        }
        let _ = writeln!(s, "{}", if self.passed() { "PASS" } else { "FAIL" });
        s
    }
}

fn describe_alpha(a: &AlphaBc64) -> String {
    let parts: Vec<String> = a.to_array().iter().map(|&z| format_complex(z)).collect();
    format!("alpha = {}", parts.join(","))
}

fn describe_rho(r: &RhoBc64) -> String {
    format!("rho = {},{}", r.rho_plus, r.rho_minus)
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / 1f64.max(a.abs()).max(b.abs())
}

fn check_alpha(
    checks: &mut Checks,
    a: &AlphaBc64,
    m: Mass64,
    lambda: f64,
    samples: usize,
    tol: f64,
    rng: &mut ChaCha8Rng,
) -> CliResult<()> {
    let ctx = || describe_alpha(a);
    let report = validate_class(a, tol);
    for (label, r) in ClassReport::<f64>::LABELS.iter().zip(report.residuals) {
        checks.record(&format!("class {label}"), r / report.scale, tol, || {
            format!("{} (unscaled {label} = {r:.6e}, scale {:.3e})", describe_alpha(a), report.scale)
        });
    }
    if !report.valid {
        return Ok(());
    }
    let size = 1f64.max(a.matrix().max_abs());

    let sa = verify_selfadjoint_domain(&ExtensionClass::Transmitting(*a), samples, rng, 1e-12);
    checks.record("boundary form on domain", sa.max_scaled_residual, 1e-12, ctx);
    let weakest = sa.witnesses.iter().map(|w| w.1).fold(f64::INFINITY, f64::min);
    checks.record("maximality witness (1/|form|)", 1.0 / weakest, 1e12, ctx);

    let b = a.matrix();
    let sx = junction_core::C2Matrix64::new(0.0.into(), 1.0.into(), 1.0.into(), 0.0.into());
    checks.record("current form B^+ sx B = sx", (b.adjoint() * sx * b).max_abs_diff(&sx) / (size * size), 1e-12, ctx);

    let q = alpha_to_u2(a, m)?;
    let back = u2_to_alpha(&q, m)?;
    checks.record("round trip alpha -> U -> alpha", back.max_abs_diff(a) / size, 1e-10, ctx);
    let oracle = oracle_alpha_from_u2(&compose(&q)?, m, lambda)?;
    checks.record("boundary-value oracle", oracle.max_abs_diff(&b) / size, 1e-10, ctx);
    let ident = inverse_identity_residuals(a, &q, m).into_iter().fold(0.0, f64::max);
    checks.record("inverse identities", ident / size, 1e-12, ctx);
    Ok(())
}

fn check_rho(
    checks: &mut Checks,
    r: &RhoBc64,
    m: Mass64,
    lambda: f64,
    samples: usize,
    rng: &mut ChaCha8Rng,
) -> CliResult<()> {
    let ctx = || describe_rho(r);
    let sa = verify_selfadjoint_domain(&ExtensionClass::Separating(*r), samples, rng, 1e-12);
    checks.record("boundary form on domain", sa.max_scaled_residual, 1e-12, ctx);
    let weakest = sa.witnesses.iter().map(|w| w.1).fold(f64::INFINITY, f64::min);
    checks.record("maximality witness (1/|form|)", 1.0 / weakest, 1e12, ctx);

    let (gl, gr) = rho_to_diagonal_u2(r, m);
    let back = diagonal_u2_to_rho(gl, gr, m)?;
    let oracle = oracle_rho_from_diagonal(gl, gr, m, lambda)?;
    let mut rt = 0.0f64;
    let mut or = 0.0f64;
    for (x, y, z) in [(r.rho_plus, back.rho_plus, oracle.rho_plus), (r.rho_minus, back.rho_minus, oracle.rho_minus)] {
        match (x, y, z) {
            (ExtendedReal::Finite(x), ExtendedReal::Finite(y), ExtendedReal::Finite(z)) => {
                rt = rt.max(rel(x, y));
                or = or.max(rel(x, z));
            }
            (ExtendedReal::PlusInfinity, ExtendedReal::PlusInfinity, ExtendedReal::PlusInfinity) => {}
            _ => {
                rt = f64::INFINITY;
                or = f64::INFINITY;
            }
        }
    }
    checks.record("round trip rho -> gamma -> rho", rt, 1e-12, ctx);
    checks.record("boundary-ratio oracle", or, 1e-12, ctx);
    Ok(())
}

pub fn cmd_verify(args: &VerifyArgs) -> CliResult<Report> {
    let m = mass(args.mass)?;
    if !(args.lambda >= 0.0 && args.lambda.is_finite()) {
        return Err(CliError::invalid("--lambda must be finite and non-negative"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut checks = Checks::default();
    let header = match (&args.alpha, &args.rho, args.fuzz) {
        (Some(s), None, None) => {
            let a = parse_alpha(s)?;
            check_alpha(&mut checks, &a, m, args.lambda, args.samples, args.tol, &mut rng)?;
            format!("verify transmitting {} (m = {})", describe_alpha(&a), args.mass)
        }
        (None, Some(s), None) => {
            let r = parse_rho(s)?;
            check_rho(&mut checks, &r, m, args.lambda, args.samples, &mut rng)?;
            format!("verify separating {} (m = {})", describe_rho(&r), args.mass)
        }
        (None, None, Some(n)) => {
            let per = args.samples.clamp(2, 10);
            for _ in 0..n {
                let a = random_alpha::<f64, _>(&mut rng);
                check_alpha(&mut checks, &a, m, args.lambda, per, args.tol, &mut rng)?;
                let r = random_rho::<f64, _>(&mut rng);
                check_rho(&mut checks, &r, m, args.lambda, per, &mut rng)?;
            }
            format!("verify fuzz: {n} transmitting + {n} separating conditions (m = {}, seed = {})", args.mass, args.seed)
        }
        _ => return Err(CliError::invalid("verify needs exactly one of --alpha, --rho, --fuzz")),
    };
    let stdout = checks.render(&header);
    if checks.passed() {
        Ok(Report::ok(stdout))
    } else {
        let stderr = format!("FAIL {}\n", checks.first_failure.unwrap_or_default());
        Ok(Report { stdout, stderr, code: EXIT_CHECK_FAILED })
    }
}

pub const CSV_HEADER: [&str; 11] = ["E", "k", "lambda", "re_r", "im_r", "re_t", "im_t", "R", "T", "phase_t", "flag"];

fn sci(x: f64) -> String {
    format!("{x:.16e}")
}

fn row_fields(row: &SweepRow<f64>, m: Mass64) -> (Vec<f64>, &'static str) {
    match &row.outcome {
        Ok(s) => (row_values(s), row.flag()),
        Err(_) => {
            let (k, lambda) = plane_spinors(row.energy, m).map_or((f64::NAN, f64::NAN), |b| (b.k, b.lambda));
            let mut v = vec![row.energy, k, lambda];
            v.extend([f64::NAN; 7]);
            (v, row.flag())
        }
    }
}

fn row_values(s: &ScatteringResult64) -> Vec<f64> {
    vec![s.energy, s.k, s.lambda, s.r.re, s.r.im, s.t.re, s.t.im, s.reflectance, s.transmittance, s.transmission_phase]
}

pub fn render_csv(rows: &[SweepRow<f64>], m: Mass64) -> CliResult<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    let io = |e: csv::Error| CliError { code: EXIT_INTERNAL, message: e.to_string() };
    w.write_record(CSV_HEADER).map_err(io)?;
    for row in rows {
        let (values, flag) = row_fields(row, m);
        let mut rec: Vec<String> = values.into_iter().map(sci).collect();
        rec.push(flag.to_string());
        w.write_record(&rec).map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError { code: EXIT_INTERNAL, message: e.to_string() })?;
    Ok(String::from_utf8(bytes).expect("ascii csv"))
}

pub fn render_json(rows: &[SweepRow<f64>], m: Mass64) -> String {
    let records: Vec<Value> = rows
        .iter()
        .map(|row| {
            let (values, flag) = row_fields(row, m);
            let mut obj = Map::new();
            for (name, v) in CSV_HEADER.iter().zip(values) {
                obj.insert((*name).into(), real_json(v));
            }
            obj.insert("flag".into(), Value::String(flag.into()));
            Value::Object(obj)
        })
        .collect();
    pretty(&Value::Array(records))
}

pub fn cmd_scatter(args: &ScatterArgs) -> CliResult<Report> {
    let m = mass(args.mass)?;
    let bc = match (&args.alpha, &args.rho) {
        (Some(s), None) => {
            let a = parse_alpha(s)?;
            let rep = validate_class(&a, 1e-10);
            if !rep.valid {
                return Err(Error::NotInClass { residual: rep.max_scaled_residual() }.into());
            }
            ExtensionClass::Transmitting(a)
        }
        (None, Some(s)) => ExtensionClass::Separating(parse_rho(s)?),
        _ => return Err(CliError::invalid("scatter needs exactly one of --alpha, --rho")),
    };
    let mut rows = sweep(&bc, args.emin, args.emax, args.steps, m)?;
    if let (ExtensionClass::Separating(r), Side::Right) = (&bc, args.from) {
        for row in &mut rows {
            row.outcome = scatter_rho(r, row.energy, m, Island::Right);
        }
    }
    let text = match args.format {
        Format::Csv => render_csv(&rows, m)?,
        Format::Json => render_json(&rows, m),
    };
    match &args.out {
        Some(path) => {
            std::fs::write(path, &text)
                .map_err(|e| CliError::invalid(format!("cannot write {}: {e}", path.display())))?;
            Ok(Report::ok(format!("wrote {} rows to {}\n", rows.len(), path.display())))
        }
        None => Ok(Report::ok(text)),
    }
}

fn spin_json(v: &junction_core::C2Vector64) -> Value {
    complex_list_json(&[v.up, v.down])
}

fn scatter_json(s: &ScatteringResult64) -> Value {
    json!({
        "E": real_json(s.energy),
        "r": complex_json(s.r),
        "t": complex_json(s.t),
        "R": real_json(s.reflectance),
        "T": real_json(s.transmittance),
        "phase_t": real_json(s.transmission_phase),
    })
}

pub fn cmd_demo_switch(args: &DemoArgs) -> CliResult<Report> {
    let phases = if args.phase.is_empty() {
        vec![std::f64::consts::FRAC_PI_4, std::f64::consts::FRAC_PI_2]
    } else {
        args.phase.iter().map(|p| parse_angle(p)).collect::<ParseResult<Vec<_>>>().map_err(CliError::invalid)?
    };
    let rep = switch_demo(&phases)?;
    let unit = |u: &junction_core::SwitchUnit<f64>| {
        json!({
            "name": u.name,
            "alpha": alpha_json(&u.alpha),
            "input_spin": spin_json(&u.input_spin),
            "output_spin": spin_json(&u.output_spin),
            "preserves_spin": u.preserves_spin,
            "swaps_spin": u.swaps_spin,
            "scattering": scatter_json(&u.scattering),
        })
    };
    let doc = json!({
        "mass": real_json(rep.mass),
        "energy": real_json(rep.energy),
        "unit0": unit(&rep.unit0),
        "unit1": unit(&rep.unit1),
        "phase_variants": rep.phase_variants.iter().map(|(theta, s)| json!({
            "theta": real_json(*theta),
            "scattering": scatter_json(s),
        })).collect::<Vec<_>>(),
        "passed": rep.passed,
    });
    let stdout = if args.format == DemoFormat::Json {
        pretty(&doc)
    } else {
        let mut s = String::new();
        let _ = writeln!(s, "spin switch at m = {}, E = {}", rep.mass, rep.energy);
        for u in [&rep.unit0, &rep.unit1] {
            let verdict = if u.preserves_spin {
                "preserves spin"
            } else if u.swaps_spin {
                "swaps spin up and down"
            } else {
                "mixes spin"
            };
            let _ = writeln!(
                s,
                "{}: alpha = {}  in {} -> out {}  {verdict}, T = {:.15}",
                u.name,
                u.alpha.to_array().iter().map(|&z| format_complex(z)).collect::<Vec<_>>().join(","),
                format_spin(&u.input_spin),
                format_spin(&u.output_spin),
                u.scattering.transmittance
            );
        }
        for (theta, sc) in &rep.phase_variants {
            let _ = writeln!(
                s,
                "phase shift theta = {theta:.15}: t = {}, T = {:.15}, phase = {:.15}",
                format_complex(sc.t),
                sc.transmittance,
                sc.transmission_phase
            );
        }
        let _ = writeln!(s, "{}", if rep.passed { "PASS" } else { "FAIL" });
        s
    };
    let code = if rep.passed { 0 } else { EXIT_CHECK_FAILED };
    Ok(Report { stdout, stderr: String::new(), code })
}

fn format_spin(v: &junction_core::C2Vector64) -> String {
    format!("({}, {})", fmt_short(v.up), fmt_short(v.down))
}

fn fmt_short(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{:.6}", z.re)
    } else {
        format!("{:.6}{:+.6}i", z.re, z.im)
    }
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> Report {
    let result = match &cli.command {
        Command::Decompose { matrix, tol } => cmd_decompose(matrix, *tol),
        Command::Convert(a) => cmd_convert(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Scatter(a) => cmd_scatter(a),
        Command::DemoSwitch(a) => cmd_demo_switch(a),
    };
    result.unwrap_or_else(|e| Report { stdout: String::new(), stderr: format!("error: {}\n", e.message), code: e.code })
}

/// Parses `argv` and runs it; usage errors exit with code 2.
pub fn run_args<I, S>(argv: I) -> Report
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(argv) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID_INPUT } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                Report::ok(text)
            } else {
                Report { stdout: String::new(), stderr: text, code }
            }
        }
    }
}
