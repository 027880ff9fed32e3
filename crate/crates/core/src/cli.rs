//! The `gns-bounds` command line.
//!
//! Exit codes: 0 success, 1 an inequality was violated (or no certificate
//! could be produced), 2 bad input, 3 a quadrature missed its accuracy
//! target.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::GnsError;
use crate::exponents::{validate, GnsProblem, LebesgueExponent};
use crate::feasible::sample_sigma;
use crate::optimizer::{minimize, objective, BoundCertificate, OptimizerConfig};
use crate::oracle::{
    check_gns, check_parabolic, standard_exponent_pairs, standard_parabolic_grid, ParabolicGridPoint,
    SweepReport, STANDARD_ORDERS, STANDARD_TIMES, STANDARD_WIDTHS,
};
use crate::parabolic::{a_par, bound_at_time, ParabolicParams};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_BAD_INPUT: i32 = 2;
pub const EXIT_ACCURACY: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "gns-bounds", version, about = "Explicit bounds on fractional Gagliardo-Nirenberg-Sobolev constants")]
#[command(args_conflicts_with_subcommands = true)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Minimize the interpolation constant and write a certificate.
    Bound(BoundArgs),
    /// Evaluate the smoothing constant of |∇|^s e^{tΔ} from L^r to L^p.
    Parabolic(ParabolicArgs),
    /// Check inequalities numerically on Gaussians.
    #[command(subcommand)]
    Verify(VerifyCommand),
    /// Draw feasible points and their objective values.
    Sample(SampleArgs),
}

#[derive(Debug, Args)]
struct ProblemArgs {
    #[arg(long)]
    d: u32,
    #[arg(long, allow_negative_numbers = true)]
    s: f64,
    #[arg(long)]
    p: LebesgueExponent,
    #[arg(long, allow_negative_numbers = true)]
    s1: f64,
    #[arg(long)]
    p1: LebesgueExponent,
    #[arg(long, allow_negative_numbers = true)]
    s2: f64,
    #[arg(long)]
    p2: LebesgueExponent,
}

impl ProblemArgs {
    fn problem(&self) -> GnsProblem {
        GnsProblem { d: self.d, s: self.s, s1: self.s1, s2: self.s2, p: self.p, p1: self.p1, p2: self.p2 }
    }
}

#[derive(Debug, Args)]
struct BoundArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long, default_value_t = 16)]
    starts: usize,
    #[arg(long, default_value_t = 16)]
    sample_per_start: usize,
    #[arg(long, default_value_t = 2000)]
    max_iters: usize,
    #[arg(long, env = "GNS_SEED", default_value_t = 0)]
    seed: u64,
    /// Certificate path.
    #[arg(long)]
    json_out: Option<PathBuf>,
    /// Run manifest path; defaults to `<json-out>.manifest.json`.
    #[arg(long)]
    manifest_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ParabolicArgs {
    #[arg(long)]
    d: u32,
    #[arg(long, allow_negative_numbers = true)]
    s: f64,
    /// Input exponent.
    #[arg(long)]
    r: LebesgueExponent,
    /// Output exponent.
    #[arg(long)]
    p: LebesgueExponent,
    #[arg(long)]
    t: Option<f64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum GridChoice {
    Default,
}

#[derive(Debug, Subcommand)]
enum VerifyCommand {
    /// Smoothing estimates on a grid of orders, exponents and times.
    Parabolic(VerifyParabolicArgs),
    /// A certificate on dilated Gaussians.
    Gns(VerifyGnsArgs),
}

#[derive(Debug, Args)]
struct VerifyParabolicArgs {
    /// Dimensions to sweep (comma separated).
    #[arg(long, value_delimiter = ',', default_values_t = [1, 2, 3])]
    d: Vec<u32>,
    #[arg(long, value_enum, default_value_t = GridChoice::Default)]
    grid: GridChoice,
    /// Replace the standard derivative orders.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    orders: Option<Vec<f64>>,
    /// Replace the standard times.
    #[arg(long, value_delimiter = ',')]
    times: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', default_values_t = STANDARD_WIDTHS)]
    widths: Vec<f64>,
    #[arg(long)]
    csv_out: Option<PathBuf>,
    #[arg(long)]
    manifest_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyGnsArgs {
    #[arg(long)]
    cert: PathBuf,
    #[arg(long, value_delimiter = ',', default_values_t = STANDARD_WIDTHS)]
    widths: Vec<f64>,
    /// Dilations 2^k for k = -N..=N.
    #[arg(long, default_value_t = 5)]
    dilations: u32,
    #[arg(long)]
    csv_out: Option<PathBuf>,
    #[arg(long)]
    manifest_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long, env = "GNS_SEED", default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    csv_out: Option<PathBuf>,
}

/// Provenance of one run. Everything but the timestamp is reproducible.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub arguments: Vec<String>,
    pub seed: Option<u64>,
    pub artifact_version: String,
    pub timestamp_unix: u64,
    pub outputs: Vec<String>,
}

impl RunManifest {
    fn new(command: &str, arguments: &[String], seed: Option<u64>, outputs: Vec<String>) -> Self {
        let timestamp_unix = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self {
            command: command.to_string(),
            arguments: arguments.to_vec(),
            seed,
            artifact_version: crate::ARTIFACT_VERSION.to_string(),
            timestamp_unix,
            outputs,
        }
    }

    fn write(&self, path: &Path) -> std::io::Result<()> {
        let text = serde_json::to_string_pretty(self).expect("manifest serializes");
        fs::write(path, text + "\n")
    }
}

fn exit_code(err: &GnsError) -> i32 {
    match err {
        GnsError::Accuracy { .. } => EXIT_ACCURACY,
        GnsError::EmptyFeasible { .. } | GnsError::Infeasible(_) => EXIT_VIOLATION,
        _ => EXIT_BAD_INPUT,
    }
}

fn io_failure(err: &mut dyn Write, path: &Path, e: std::io::Error) -> i32 {
    let _ = writeln!(err, "error: cannot write {}: {e}", path.display());
    EXIT_BAD_INPUT
}

fn manifest_path(explicit: &Option<PathBuf>, primary: &Option<PathBuf>) -> Option<PathBuf> {
    explicit.clone().or_else(|| {
        primary.as_ref().map(|p| {
            let mut s = p.clone().into_os_string();
            s.push(".manifest.json");
            PathBuf::from(s)
        })
    })
}

/// Runs the command line with process stdout/stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

/// Runs the command line, writing human-readable output to `out` and `err`.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let echo: Vec<String> = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_BAD_INPUT } else { EXIT_OK };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            return code;
        }
    };
    match cli.command {
        Command::Bound(a) => cmd_bound(&a, &echo, out, err),
        Command::Parabolic(a) => cmd_parabolic(&a, out, err),
        Command::Verify(VerifyCommand::Parabolic(a)) => cmd_verify_parabolic(&a, &echo, out, err),
        Command::Verify(VerifyCommand::Gns(a)) => cmd_verify_gns(&a, &echo, out, err),
        Command::Sample(a) => cmd_sample(&a, out, err),
    }
}

fn cmd_bound(a: &BoundArgs, echo: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let problem = a.problem.problem();
    let report = validate(&problem);
    if !report.admissible {
        let _ = writeln!(err, "error: inadmissible parameters: {report}");
        return EXIT_BAD_INPUT;
    }
    let config = OptimizerConfig {
        starts: a.starts,
        sample_per_start: a.sample_per_start,
        max_iters: a.max_iters,
        seed: a.seed,
        ..OptimizerConfig::default()
    };
    let cert = match minimize(&problem, &config) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit_code(&e);
        }
    };
    let _ = writeln!(out, "value = {}", cert.value);
    let _ = writeln!(out, "theta = {}", cert.theta.value());
    let mut outputs = Vec::new();
    if let Some(path) = &a.json_out {
        if let Err(e) = fs::write(path, cert.to_json_string()) {
            return io_failure(err, path, e);
        }
        outputs.push(path.display().to_string());
    }
    if let Some(path) = manifest_path(&a.manifest_out, &a.json_out) {
        let manifest = RunManifest::new("bound", echo, Some(a.seed), outputs);
        if let Err(e) = manifest.write(&path) {
            return io_failure(err, &path, e);
        }
    }
    EXIT_OK
}

fn cmd_parabolic(a: &ParabolicArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let params = ParabolicParams { p: a.p, r: a.r, s: a.s, d: a.d };
    let value = match a_par(&params) {
        Ok(v) => v,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit_code(&e);
        }
    };
    let _ = writeln!(out, "a_par = {value}");
    if let Some(t) = a.t {
        match bound_at_time(&params, t) {
            Ok(b) => {
                let _ = writeln!(out, "bound_at_time = {b}");
            }
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                return exit_code(&e);
            }
        }
    }
    EXIT_OK
}

fn finish_sweep(
    report: &SweepReport,
    command: &str,
    echo: &[String],
    csv_out: &Option<PathBuf>,
    manifest_out: &Option<PathBuf>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let mut outputs = Vec::new();
    if let Some(path) = csv_out {
        let text = match report.to_csv_string() {
            Ok(t) => t,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                return EXIT_BAD_INPUT;
            }
        };
        if let Err(e) = fs::write(path, text) {
            return io_failure(err, path, e);
        }
        outputs.push(path.display().to_string());
    }
    if let Some(path) = manifest_path(manifest_out, csv_out) {
        if let Err(e) = RunManifest::new(command, echo, None, outputs).write(&path) {
            return io_failure(err, &path, e);
        }
    }
    let _ = writeln!(out, "rows = {}", report.rows.len());
    let _ = writeln!(out, "worst_slack = {}", report.worst_slack());
    if let Some(spread) = report.dilation_spread {
        let _ = writeln!(out, "dilation_spread = {spread}");
    }
    let violations = report.violations();
    for row in &violations {
        let _ = writeln!(
            err,
            "violation: d={} s={} r={} p={} t={} width={} dilation={} measured={} bound={}",
            row.d,
            row.s,
            row.r.as_deref().unwrap_or("-"),
            row.p,
            row.t.map_or("-".to_string(), |t| t.to_string()),
            row.width,
            row.dilation.map_or("-".to_string(), |l| l.to_string()),
            row.measured,
            row.bound
        );
    }
    if !report.dilation_invariant() {
        let _ = writeln!(err, "violation: ratio is not dilation invariant");
    }
    if report.passed() {
        EXIT_OK
    } else {
        EXIT_VIOLATION
    }
}

fn cmd_verify_parabolic(a: &VerifyParabolicArgs, echo: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let GridChoice::Default = a.grid;
    let grid: Vec<ParabolicGridPoint> = if a.orders.is_none() && a.times.is_none() {
        standard_parabolic_grid(&a.d)
    } else {
        let orders = a.orders.clone().unwrap_or_else(|| STANDARD_ORDERS.to_vec());
        let times = a.times.clone().unwrap_or_else(|| STANDARD_TIMES.to_vec());
        let mut pts = Vec::new();
        for &d in &a.d {
            for &s in &orders {
                for (r, p) in standard_exponent_pairs() {
                    for &t in &times {
                        let pt = ParabolicGridPoint { d, s, r, p, t };
                        if pt.params().check().is_ok() {
                            pts.push(pt);
                        }
                    }
                }
            }
        }
        pts
    };
    if grid.is_empty() {
        let _ = writeln!(err, "error: the grid has no admissible points");
        return EXIT_BAD_INPUT;
    }
    match check_parabolic(&grid, &a.widths) {
        Ok(report) => finish_sweep(&report, "verify parabolic", echo, &a.csv_out, &a.manifest_out, out, err),
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn cmd_verify_gns(a: &VerifyGnsArgs, echo: &[String], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let text = match fs::read_to_string(&a.cert) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "error: cannot read {}: {e}", a.cert.display());
            return EXIT_BAD_INPUT;
        }
    };
    let cert = match BoundCertificate::from_json_str(&text) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: invalid certificate: {e}");
            return EXIT_BAD_INPUT;
        }
    };
    let n = a.dilations as i32;
    let dilations: Vec<f64> = (-n..=n).map(|k| 2f64.powi(k)).collect();
    match check_gns(&cert, &a.widths, &dilations) {
        Ok(report) => finish_sweep(&report, "verify gns", echo, &a.csv_out, &a.manifest_out, out, err),
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

#[derive(Serialize)]
struct SampleRow {
    beta1: f64,
    beta2: f64,
    sigma: f64,
    r1: String,
    r2: String,
    q1: String,
    q2: String,
    value: f64,
}

fn cmd_sample(a: &SampleArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let problem = a.problem.problem();
    let points = match sample_sigma(&problem, a.n, a.seed) {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return exit_code(&e);
        }
    };
    let mut w = csv::Writer::from_writer(Vec::new());
    for pt in &points {
        let value = match objective(&problem, pt) {
            Ok(v) => v,
            Err(e) => {
                let _ = writeln!(err, "error: {e}");
                return exit_code(&e);
            }
        };
        let row = SampleRow {
            beta1: pt.beta1,
            beta2: pt.beta2,
            sigma: pt.sigma,
            r1: pt.r1.to_string(),
            r2: pt.r2.to_string(),
            q1: pt.q1.to_string(),
            q2: pt.q2.to_string(),
            value,
        };
        if let Err(e) = w.serialize(row) {
            let _ = writeln!(err, "error: {e}");
            return EXIT_BAD_INPUT;
        }
    }
    let bytes = match w.into_inner() {
        Ok(b) => b,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_BAD_INPUT;
        }
    };
    match &a.csv_out {
        Some(path) => {
            if let Err(e) = fs::write(path, &bytes) {
                return io_failure(err, path, e);
            }
            let _ = writeln!(out, "points = {}", points.len());
        }
        None => {
            let _ = out.write_all(&bytes);
        }
    }
    EXIT_OK
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["gns-bounds"];
        full.extend_from_slice(args);
        let code = run_with(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn parabolic_command() {
        let (code, out, _) = run_capture(&["parabolic", "--d", "1", "--s", "0", "--r", "2", "--p", "2"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), "a_par = 1");
        let (code, out, _) = run_capture(&["parabolic", "--d", "3", "--s", "2", "--r", "2", "--p", "2", "--t", "1"]);
        assert_eq!(code, 0);
        let v: f64 = out.lines().next().unwrap().trim_start_matches("a_par = ").parse().unwrap();
        assert!((v - 3.0).abs() < 1e-12);
        assert!(out.contains("bound_at_time"));
        let (code, _, err) = run_capture(&["parabolic", "--d", "2", "--s", "-1", "--r", "1", "--p", "1"]);
        assert_eq!(code, EXIT_BAD_INPUT);
        assert!(err.contains("Sobolev endpoint"), "{err}");
    }

    #[test]
    fn bad_input_exits_two() {
        let base = ["bound", "--d", "1", "--s", "0", "--s1", "1", "--p1", "2", "--s2", "0", "--p2", "2"];
        let mut args = base.to_vec();
        args.extend(["--p", "0.5"]);
        assert_eq!(run_capture(&args).0, EXIT_BAD_INPUT);
        // 1/p - s/d must lie strictly between the outer levels.
        let mut args = base.to_vec();
        args.extend(["--p", "1"]);
        let (code, _, err) = run_capture(&args);
        assert_eq!(code, EXIT_BAD_INPUT);
        assert!(err.contains("admissible=false"), "{err}");
        assert_eq!(run_capture(&["bound"]).0, EXIT_BAD_INPUT);
        assert_eq!(run_capture(&["--help"]).0, EXIT_OK);
    }

    #[test]
    fn bound_writes_certificate_and_manifest() {
        let dir = tempfile::tempdir().unwrap();
        let cert = dir.path().join("cert.json");
        let cert_s = cert.to_str().unwrap();
        let (code, out, err) = run_capture(&[
            "bound", "--d", "1", "--s", "0", "--p", "inf", "--s1", "1", "--p1", "2", "--s2", "0", "--p2", "2",
            "--starts", "2", "--seed", "42", "--json-out", cert_s,
        ]);
        assert_eq!(code, 0, "{err}");
        assert!(out.contains("theta = 0.5"), "{out}");
        let parsed = BoundCertificate::from_json_str(&fs::read_to_string(&cert).unwrap()).unwrap();
        assert!(parsed.value >= 1.0);
        let manifest: serde_json::Value =
            serde_json::from_str(&fs::read_to_string(format!("{cert_s}.manifest.json")).unwrap()).unwrap();
        assert_eq!(manifest["command"], "bound");
        assert_eq!(manifest["seed"], 42);
        assert!(manifest["timestamp_unix"].as_u64().unwrap() > 0);

        let bad = dir.path().join("bad.json");
        fs::write(&bad, "{\"value\": 1}").unwrap();
        let (code, _, _) = run_capture(&["verify", "gns", "--cert", bad.to_str().unwrap()]);
        assert_eq!(code, EXIT_BAD_INPUT);
    }

    #[test]
    fn sample_command_is_reproducible() {
        let args = [
            "sample", "--d", "1", "--s", "0.5", "--p", "4", "--s1", "1", "--p1", "2", "--s2", "0", "--p2", "2",
            "--n", "5", "--seed", "3",
        ];
        let (code, a, _) = run_capture(&args);
        assert_eq!(code, 0);
        assert_eq!(a.lines().count(), 6);
        assert_eq!(run_capture(&args).1, a);
    }
}
