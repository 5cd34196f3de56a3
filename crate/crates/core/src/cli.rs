//! Command-line surface: `generate`, `verify`, `enumerate`, `pipeline`.
//!
//! Exit codes: 0 pass, 1 verification failure, 2 inadmissible parameters,
//! 3 I/O error, 4 parse or precondition error.

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;

use crate::admissible::{check_k, enumerate, Admissible};
use crate::conference::{
    build_conference, critical_omega, is_critical, verify_conference_exact, verify_conference_numeric, ConferenceMatrix,
};
use crate::export::{generate, ExportRecord, Kind, Scaling};
use crate::gf::FieldCtx;
use crate::hadamard::{double, verify_hadamard, HadamardMatrix};
use crate::linalg::{max_abs2, max_abs_complex, max_abs_real};
use crate::planes::{
    build_gram, check_ls_bound, extract_bases, plane_parameter, verify_isoclinic, PlaneTuple, Rational,
};
use crate::seidel::{build_seidel, eigen_structure, verify_seidel_square, SeidelMatrix};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INADMISSIBLE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_PARSE: i32 = 4;

#[derive(Parser, Debug)]
#[command(
    name = "isoclinic",
    version,
    about = "Odd-order complex conference matrices and equi-isoclinic planes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    #[value(alias = "json-like")]
    Json,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build one object and write it as an export record.
    Generate {
        #[arg(long, value_enum, default_value = "conference")]
        kind: Kind,
        #[arg(long)]
        k: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Scale row/column INDEX by e^{i ANGLE} (conference and seidel only).
        #[arg(long, requires = "scale_angle")]
        scale_index: Option<usize>,
        #[arg(long, requires = "scale_index", allow_hyphen_values = true)]
        scale_angle: Option<f64>,
    },
    /// Check a record with the verifier for its kind.
    Verify {
        /// Record file (text or JSON).
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Use the exact exponent-count verification (conference records only).
        #[arg(long)]
        exact: bool,
    },
    /// Classify k as ADMISSIBLE (with p, alpha) or OPEN.
    Enumerate {
        #[arg(long, default_value_t = 3)]
        k_min: usize,
        #[arg(long, default_value_t = 51)]
        k_max: usize,
        #[arg(long)]
        odd_only: bool,
    },
    /// Run every construction and verifier for one k.
    Pipeline {
        #[arg(long)]
        k: usize,
    },
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INADMISSIBLE } else { EXIT_OK };
            let _ = if e.use_stderr() {
                write!(err, "{e}")
            } else {
                write!(out, "{e}")
            };
            return code;
        }
    };
    match cli.command {
        Command::Generate {
            kind,
            k,
            format,
            out: path,
            scale_index,
            scale_angle,
        } => {
            let scaling = scale_index.zip(scale_angle).map(|(index, eta)| Scaling { index, eta });
            cmd_generate(kind, k, format, path.as_deref(), scaling, out, err)
        }
        Command::Verify { input, tol, exact } => cmd_verify(&input, tol, exact, out, err),
        Command::Enumerate { k_min, k_max, odd_only } => cmd_enumerate(k_min, k_max, odd_only, out, err),
        Command::Pipeline { k } => cmd_pipeline(k, out, err),
    }
}

fn admissible_or_report(k: usize, err: &mut dyn Write) -> Result<Admissible, i32> {
    check_k(k).map_err(|e| {
        let _ = writeln!(err, "inadmissible k = {k}: {e}");
        EXIT_INADMISSIBLE
    })
}

pub fn cmd_generate(
    kind: Kind,
    k: usize,
    format: Format,
    path: Option<&std::path::Path>,
    scaling: Option<Scaling>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let adm = match admissible_or_report(k, err) {
        Ok(a) => a,
        Err(code) => return code,
    };
    if scaling.is_some() && !matches!(kind, Kind::Conference | Kind::Seidel) {
        let _ = writeln!(err, "scaling applies to conference and seidel records only");
        return EXIT_PARSE;
    }
    let record = match generate(kind, &adm, scaling) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "generation failed: {e}");
            return EXIT_PARSE;
        }
    };
    let body = match format {
        Format::Text => record.to_text(),
        Format::Json => record.to_json(),
    };
    let written = match path {
        Some(p) => std::fs::write(p, body),
        None => out.write_all(body.as_bytes()),
    };
    match written {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "I/O error: {e}");
            EXIT_IO
        }
    }
}

/// One named check and its outcome.
#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub value: f64,
    pub pass: bool,
}

impl Check {
    fn residual(name: &'static str, value: f64, tol: f64) -> Self {
        Self {
            name,
            value,
            pass: value <= tol,
        }
    }

    fn flag(name: &'static str, pass: bool) -> Self {
        Self {
            name,
            value: if pass { 0.0 } else { 1.0 },
            pass,
        }
    }
}

/// Why a record could not be verified at all.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
#[error("{0}")]
pub struct Precondition(pub String);

fn pre<E: std::fmt::Display>(e: E) -> Precondition {
    Precondition(e.to_string())
}

/// Runs the kind-appropriate verifiers on a record.
pub fn verify_record(rec: &ExportRecord, tol: f64, exact: bool) -> Result<Vec<Check>, Precondition> {
    if exact && (rec.kind != Kind::Conference || rec.exponents.is_none()) {
        return Err(Precondition("exact layer unavailable".into()));
    }
    let lambda = Rational::new(rec.metadata.lambda[0], rec.metadata.lambda[1].max(1));
    match rec.kind {
        Kind::Conference => {
            let c = rec.to_conference().map_err(pre)?;
            let mut checks = conference_shape_checks(&c, tol);
            checks.push(Check::residual("C C^* = (q-1) I", verify_conference_numeric(&c), tol));
            if exact {
                let counts_ok = verify_conference_exact(&c).map_err(pre)?;
                checks.push(Check::flag("exponent counts (k-2, (k-1)/2, (k-1)/2)", counts_ok));
                checks.push(Check::flag(
                    "Re(omega^2) = (2-k)/(k-1)",
                    is_critical(c.k(), c.omega(), 1e-12),
                ));
                let rebuilt = c.with_omega(c.omega()).map_err(pre)?;
                let drift = max_abs_complex(&(rebuilt.values() - c.values()));
                checks.push(Check::residual("values = omega^exponent", drift, tol));
            }
            Ok(checks)
        }
        Kind::Seidel => {
            let s = SeidelMatrix::from_dense(rec.real_matrix().map_err(pre)?, rec.theta).map_err(pre)?;
            Ok(vec![
                Check::residual("symmetry", max_abs_real(&(s.dense() - s.dense().transpose())), tol),
                Check::residual("zero/orthogonal blocks", s.structure_defect(), tol),
                Check::residual("trace", s.trace().abs(), tol),
                Check::residual("S^2 = (2k-2) I", verify_seidel_square(&s), tol),
            ])
        }
        Kind::Gram => {
            let a = rec.real_matrix().map_err(pre)?;
            if a.nrows() != a.ncols() || a.nrows() % 2 != 0 {
                return Err(Precondition("Gram matrix must be square of even order".into()));
            }
            let n = a.nrows() / 2;
            let diag_dev = (0..n)
                .map(|i| max_abs2(&(a.fixed_view::<2, 2>(2 * i, 2 * i).into_owned() - Matrix2::identity())))
                .fold(0.0, f64::max);
            Ok(vec![
                Check::residual("symmetry", max_abs_real(&(&a - a.transpose())), tol),
                Check::residual("identity diagonal blocks", diag_dev, tol),
                Check::residual("A^2 = 2A", max_abs_real(&(&a * &a - &a * 2.0)), tol),
                Check::residual(
                    "rank = trace(A)/2 = 2k-1",
                    (a.trace() / 2.0 - rec.order as f64).abs(),
                    tol,
                ),
            ])
        }
        Kind::Planes => {
            let basis = rec.real_matrix().map_err(pre)?;
            if basis.ncols() % 2 != 0 {
                return Err(Precondition("plane basis needs an even number of columns".into()));
            }
            let pt = PlaneTuple {
                r: basis.nrows(),
                n: basis.ncols() / 2,
                lambda,
                gram: basis.transpose() * &basis,
                basis,
            };
            Ok(vec![
                Check::residual("orthonormal plane bases", pt.orthonormality_deviation(), tol),
                Check::residual("B^T B = lambda I", verify_isoclinic(&pt), tol),
            ])
        }
        Kind::Hadamard => {
            let h = HadamardMatrix::from_values(rec.complex_matrix().map_err(pre)?).map_err(pre)?;
            Ok(vec![Check::residual(
                "unimodular, H H^* = 2n I",
                verify_hadamard(&h),
                tol,
            )])
        }
    }
}

fn conference_shape_checks(c: &ConferenceMatrix, tol: f64) -> Vec<Check> {
    let v = c.values();
    let diag = v.diagonal().iter().map(|z| z.norm()).fold(0.0, f64::max);
    let unimodular = (0..c.order())
        .flat_map(|a| (0..c.order()).map(move |b| (a, b)))
        .filter(|(a, b)| a != b)
        .map(|(a, b)| (v[(a, b)].norm() - 1.0).abs())
        .fold(0.0, f64::max);
    let asym: DMatrix<Complex64> = v - v.transpose();
    vec![
        Check::residual("zero diagonal", diag, tol),
        Check::residual("unimodular off-diagonal", unimodular, tol),
        Check::residual("symmetry", max_abs_complex(&asym), tol),
    ]
}

pub fn cmd_verify(path: &std::path::Path, tol: f64, exact: bool, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            let _ = writeln!(err, "I/O error reading {}: {e}", path.display());
            return EXIT_IO;
        }
    };
    let rec = match ExportRecord::parse(&text) {
        Ok(r) => r,
        Err(e) => {
            let _ = writeln!(err, "parse error: {e}");
            return EXIT_PARSE;
        }
    };
    let checks = match verify_record(&rec, tol, exact) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "{e}");
            return EXIT_PARSE;
        }
    };
    let _ = writeln!(out, "{} record, order {}, k = {}", rec.kind.as_str(), rec.order, rec.k);
    for c in &checks {
        let status = if c.pass { "PASS" } else { "FAIL" };
        let _ = writeln!(out, "  {status}  {:<40} {:.3e}", c.name, c.value);
    }
    if checks.iter().all(|c| c.pass) {
        EXIT_OK
    } else {
        EXIT_FAIL
    }
}

pub fn cmd_enumerate(k_min: usize, k_max: usize, odd_only: bool, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    if k_min < 3 || k_min > k_max {
        let _ = writeln!(err, "need 3 <= k-min <= k-max");
        return EXIT_INADMISSIBLE;
    }
    let mut open = Vec::new();
    let mut admissible = 0;
    for (k, status) in enumerate(k_min, k_max, odd_only) {
        let q = 2 * k - 1;
        match status {
            Ok(a) => {
                admissible += 1;
                let _ = writeln!(out, "k={k:<4} q={q:<5} ADMISSIBLE  p={} alpha={}", a.p, a.alpha);
            }
            Err(e) => {
                open.push(k);
                let _ = writeln!(out, "k={k:<4} q={q:<5} OPEN        {e}");
            }
        }
    }
    let list = open.iter().map(usize::to_string).collect::<Vec<_>>().join(", ");
    let _ = writeln!(out, "admissible: {admissible}, open: {} [{list}]", open.len());
    EXIT_OK
}

/// Stage name and outcome of one pipeline step.
pub type StageResult = (&'static str, Result<f64, String>);

/// The whole chain for one admissible k, each stage with its residual.
pub fn pipeline_stages(adm: &Admissible, tol: f64) -> Vec<StageResult> {
    let mut stages: Vec<StageResult> = Vec::new();
    let k = adm.k;
    macro_rules! stage {
        ($name:expr, $body:expr) => {{
            let r: Result<f64, String> = $body;
            let failed = match &r {
                Ok(v) => v.is_nan() || *v > tol,
                Err(_) => true,
            };
            stages.push(($name, r));
            if failed {
                return stages;
            }
        }};
    }

    let ctx = match FieldCtx::new(adm.p, adm.alpha) {
        Ok(c) => c,
        Err(e) => {
            stages.push(("field", Err(e.to_string())));
            return stages;
        }
    };
    let omega = critical_omega(k as i64).expect("admissible k is at least 3");
    let c = match build_conference(&ctx, omega) {
        Ok(c) => c,
        Err(e) => {
            stages.push(("conference", Err(e.to_string())));
            return stages;
        }
    };
    stage!(
        "conference exact counts",
        match verify_conference_exact(&c) {
            Ok(true) if is_critical(k, omega, 1e-12) => Ok(0.0),
            Ok(_) => Err("exponent counts or omega off the critical value".into()),
            Err(e) => Err(e.to_string()),
        }
    );
    stage!("conference C C^* = (q-1) I", Ok(verify_conference_numeric(&c)));

    let s = match build_seidel(&ctx, k) {
        Ok(s) => s,
        Err(e) => {
            stages.push(("seidel", Err(e.to_string())));
            return stages;
        }
    };
    stage!("seidel S^2 = (2k-2) I", Ok(verify_seidel_square(&s)));
    stage!(
        "seidel multiplicities",
        match eigen_structure(&s) {
            Ok(e) if e.pairs[0].1 == adm.q && e.pairs[1].1 == adm.q => {
                Ok((e.traces[0] - adm.q as f64)
                    .abs()
                    .max((e.traces[1] - adm.q as f64).abs()))
            }
            Ok(e) => Err(format!("multiplicities {} and {}", e.pairs[0].1, e.pairs[1].1)),
            Err(e) => Err(e.to_string()),
        }
    );

    let lambda = plane_parameter(k);
    let planes = match extract_bases(&build_gram(&s), adm.q, lambda) {
        Ok(p) => p,
        Err(e) => {
            stages.push(("planes", Err(e.to_string())));
            return stages;
        }
    };
    stage!("planes orthonormal", Ok(planes.orthonormality_deviation()));
    stage!("planes isoclinic", Ok(verify_isoclinic(&planes)));
    stage!("bound tight", {
        let b = check_ls_bound(adm.q as i64, lambda, adm.q as i64);
        if b.tight {
            Ok(0.0)
        } else {
            Err(format!("bound {} not attained", b.bound))
        }
    });
    stage!(
        "hadamard",
        match double(&c) {
            Ok(h) => Ok(verify_hadamard(&h)),
            Err(e) => Err(e.to_string()),
        }
    );
    stages
}

pub fn cmd_pipeline(k: usize, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let adm = match admissible_or_report(k, err) {
        Ok(a) => a,
        Err(code) => return code,
    };
    let _ = writeln!(
        out,
        "k = {k}, q = {} = {}^{}, lambda = {}",
        adm.q,
        adm.p,
        adm.alpha,
        plane_parameter(k)
    );
    let stages = pipeline_stages(&adm, 1e-9);
    let mut failed = None;
    for (name, r) in &stages {
        match r {
            Ok(v) if *v <= 1e-9 => {
                let _ = writeln!(out, "  PASS  {name:<30} {v:.3e}");
            }
            Ok(v) => {
                let _ = writeln!(out, "  FAIL  {name:<30} {v:.3e}");
                failed.get_or_insert(*name);
            }
            Err(e) => {
                let _ = writeln!(out, "  FAIL  {name:<30} {e}");
                failed.get_or_insert(*name);
            }
        }
    }
    match failed {
        Some(stage) => {
            let _ = writeln!(err, "pipeline failed at stage: {stage}");
            EXIT_FAIL
        }
        None => EXIT_OK,
    }
}
