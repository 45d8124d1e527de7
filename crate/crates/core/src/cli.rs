//! Command-line front end. Exit codes: 0 pass, 1 a relation failed,
//! 2 the inputs could not be read or processed.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};

use crate::alpha::{AlgebraObject, CouplingMatrix};
use crate::bundle::{format_matrix, read_algebra, read_category, read_matrix};
use crate::checks::verify_category;
use crate::ctps::{build_ctps, check_normality, Extension};
use crate::error::{Error, Result};
use crate::modular::{check_modular_invariant, compute_st, enumerate_commutant};
use crate::qsystem::{check_commutativity, lr_qsystem, theta_braiding, validate_qsystem};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "ctps",
    version,
    about = "Q-systems, alpha-induction and canonical tensor product subfactors over fusion categories"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check fusion rules, pentagon and (if braided) hexagon.
    VerifyCategory {
        bundle: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Build and validate the Longo-Rehren Q-system in C ⊠ C̄.
    LrQsystem {
        bundle: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Build the tensor product Q-system from α-induction of an algebra.
    BuildCtps {
        bundle: PathBuf,
        /// Algebra bundle, or `trivial` for Θ = id.
        #[arg(long)]
        alg: String,
        #[arg(long, default_value = "plus")]
        ext1: String,
        #[arg(long, default_value = "minus")]
        ext2: String,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Check that a coupling matrix commutes with S and T.
    CheckInvariant {
        bundle: PathBuf,
        #[arg(long)]
        matrix: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// List all coupling matrices with entries up to a bound.
    EnumerateInvariants {
        bundle: PathBuf,
        #[arg(long)]
        bound: u32,
        #[arg(long)]
        report: Option<PathBuf>,
    },
}

struct Outcome {
    command: &'static str,
    inputs: Value,
    tolerance: Option<f64>,
    body: Value,
    pass: bool,
    summary: Vec<String>,
}

fn path_str(p: &Path) -> String {
    p.display().to_string()
}

fn verify(bundle: &Path, tol: f64) -> Result<Outcome> {
    let model = read_category(bundle)?;
    let rep = verify_category(&model, tol)?;
    let pass = rep.passes(tol);
    let mut summary = vec![
        format!(
            "category {} (rank {}, braided: {})",
            model.name,
            model.rank(),
            model.is_braided()
        ),
        format!("fusion violations: {}", rep.fusion.violations.len()),
        format!("pentagon residual: {:.3e}", rep.pentagon),
    ];
    if let Some(h) = rep.hexagon {
        summary.push(format!("hexagon residual: {h:.3e}"));
    }
    Ok(Outcome {
        command: "verify-category",
        inputs: json!({ "bundle": path_str(bundle) }),
        tolerance: Some(tol),
        body: json!({ "category": model.name, "residuals": rep }),
        pass,
        summary,
    })
}

fn lr(bundle: &Path, tol: f64) -> Result<Outcome> {
    let model = read_category(bundle)?;
    let lr = lr_qsystem(&model)?;
    let rep = validate_qsystem(&lr.product, &lr.q, tol)?;
    let commutativity = if model.is_braided() {
        let eps = theta_braiding(&lr.product, &lr.q)?;
        Some(check_commutativity(&lr.product, &lr.q, &eps)?)
    } else {
        None
    };
    let z = CouplingMatrix::identity(model.rank());
    let normality = check_normality(&z, &model.fusion, &model.fusion);
    let pass = rep.passed && commutativity.is_none_or(|r| r < tol);
    let mut summary = vec![
        format!("d(theta) = {:.10}", rep.d_theta),
        format!("max Q-system residual: {:.3e}", rep.max_residual()),
    ];
    if let Some(r) = commutativity {
        summary.push(format!("commutativity residual: {r:.3e}"));
    }
    Ok(Outcome {
        command: "lr-qsystem",
        inputs: json!({ "bundle": path_str(bundle) }),
        tolerance: Some(tol),
        body: json!({
            "category": model.name,
            "d_theta": rep.d_theta,
            "z": z.z,
            "residuals": rep,
            "commutativity": commutativity,
            "normality": normality,
        }),
        pass,
        summary,
    })
}

fn ctps(bundle: &Path, alg: &str, ext1: &str, ext2: &str, tol: f64) -> Result<Outcome> {
    let model = read_category(bundle)?;
    let (e1, e2): (Extension, Extension) = (ext1.parse()?, ext2.parse()?);
    let algebra = if alg == "trivial" {
        AlgebraObject::trivial(&model)?
    } else {
        read_algebra(Path::new(alg), &model)?
    };
    let (_, rep) = build_ctps(&model, Some(&algebra), e1, e2, tol)?;
    let z = CouplingMatrix { z: rep.z.clone() };
    let mut summary = vec![
        format!("Z =\n{}", format_matrix(&z).trim_end()),
        format!("d(theta) = {:.10}", rep.d_theta),
    ];
    summary.push(format!("max Q-system residual: {:.3e}", rep.qsystem.max_residual()));
    summary.push(format!("E3 residual: {:.3e}", rep.e3));
    match rep.commutativity {
        Some(r) => summary.push(format!("commutativity residual: {r:.3e}")),
        None => summary.push("commutativity: skipped (E3 fails)".into()),
    }
    match &rep.modular {
        Some(m) => summary.push(format!(
            "modular invariance: |ZS-SZ| = {:.3e}, |ZT-TZ| = {:.3e}",
            m.zs, m.zt
        )),
        None => summary.push("modular invariance: skipped (degenerate braiding)".into()),
    }
    summary.push(format!(
        "normality: n2 = {}, n3 = {}",
        rep.normality.n2, rep.normality.n3
    ));
    let pass = rep.passed;
    Ok(Outcome {
        command: "build-ctps",
        inputs: json!({ "bundle": path_str(bundle), "alg": alg, "ext1": ext1, "ext2": ext2 }),
        tolerance: Some(tol),
        body: serde_json::to_value(&rep)?,
        pass,
        summary,
    })
}

fn check_invariant(bundle: &Path, matrix: &Path, tol: f64) -> Result<Outcome> {
    let model = read_category(bundle)?;
    let z = read_matrix(matrix)?;
    let n = model.rank();
    if z.rows() != n || z.cols() != n {
        return Err(Error::InvalidInput(format!(
            "matrix is {}x{}, category has rank {n}",
            z.rows(),
            z.cols()
        )));
    }
    let st = compute_st(&model)?;
    let residuals = st.as_ref().map(|st| check_modular_invariant(&z, st));
    let mut summary = Vec::new();
    let pass = match &residuals {
        Some(r) => {
            summary.push(format!("|ZS-SZ| = {:.3e}, |ZT-TZ| = {:.3e}", r.zs, r.zt));
            r.zs < tol && r.zt < tol
        }
        None => {
            eprintln!(
                "warning: {} has a degenerate braiding; modular checks skipped",
                model.name
            );
            summary.push("modular checks skipped (degenerate braiding)".into());
            true
        }
    };
    Ok(Outcome {
        command: "check-invariant",
        inputs: json!({ "bundle": path_str(bundle), "matrix": path_str(matrix) }),
        tolerance: Some(tol),
        body: json!({ "category": model.name, "z": z.z, "residuals": residuals }),
        pass,
        summary,
    })
}

fn enumerate(bundle: &Path, bound: u32) -> Result<Outcome> {
    let model = read_category(bundle)?;
    let st =
        compute_st(&model)?.ok_or_else(|| Error::Unsupported(format!("{} has a degenerate braiding", model.name)))?;
    let found = enumerate_commutant(&st, bound)?;
    let mut summary = vec![format!("{} invariants with entries <= {bound}", found.len())];
    let entries: Vec<Value> = found
        .iter()
        .map(|z| {
            summary.push(format_matrix(z).trim_end().to_string());
            let normality = check_normality(z, &model.fusion, &model.fusion);
            json!({ "z": z.z, "normality": normality })
        })
        .collect();
    Ok(Outcome {
        command: "enumerate-invariants",
        inputs: json!({ "bundle": path_str(bundle), "bound": bound }),
        tolerance: None,
        body: json!({ "category": model.name, "invariants": entries }),
        pass: true,
        summary,
    })
}

fn dispatch(cmd: &Command) -> Result<Outcome> {
    match cmd {
        Command::VerifyCategory { bundle, tol, .. } => verify(bundle, *tol),
        Command::LrQsystem { bundle, tol, .. } => lr(bundle, *tol),
        Command::BuildCtps {
            bundle,
            alg,
            ext1,
            ext2,
            tol,
            ..
        } => ctps(bundle, alg, ext1, ext2, *tol),
        Command::CheckInvariant {
            bundle, matrix, tol, ..
        } => check_invariant(bundle, matrix, *tol),
        Command::EnumerateInvariants { bundle, bound, .. } => enumerate(bundle, *bound),
    }
}

fn report_path(cmd: &Command) -> Option<&Path> {
    match cmd {
        Command::VerifyCategory { report, .. }
        | Command::LrQsystem { report, .. }
        | Command::BuildCtps { report, .. }
        | Command::CheckInvariant { report, .. }
        | Command::EnumerateInvariants { report, .. } => report.as_deref(),
    }
}

/// Runs one command and returns the exit code.
pub fn execute(cli: &Cli) -> i32 {
    let start = Instant::now();
    let out = match dispatch(&cli.command) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_ERROR;
        }
    };
    // A closed stdout (e.g. piped into `head`) is not an error.
    let mut stdout = std::io::stdout().lock();
    for line in &out.summary {
        let _ = writeln!(stdout, "{line}");
    }
    let _ = writeln!(stdout, "{}", if out.pass { "PASS" } else { "FAIL" });
    if let Some(path) = report_path(&cli.command) {
        let report = json!({
            "command": out.command,
            "inputs": out.inputs,
            "tolerance": out.tolerance,
            "result": out.body,
            "pass": out.pass,
            "wall_time_s": start.elapsed().as_secs_f64(),
        });
        let text = serde_json::to_string_pretty(&report).expect("report serialises") + "\n";
        if let Err(e) = std::fs::write(path, text) {
            eprintln!("error: cannot write {}: {e}", path.display());
            return EXIT_ERROR;
        }
    }
    if out.pass {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

/// Parses arguments (including the program name) and runs.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                EXIT_ERROR
            } else {
                EXIT_PASS
            }
        }
    }
}
