//! The `cohcfg` command line: validation, case analysis, constructions,
//! closures, and the decomposition certificate, all over scheme files.
//!
//! Everything routes through [`run_command`] so tests can drive the binary
//! in-process with captured output. Exit codes are part of the contract:
//! `0` success, `1` a mathematical failure (a certificate that does not
//! hold, or one that cannot be produced), `2` bad input (unreadable or
//! malformed files, axiom violations, out-of-range points, usage errors).

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use crate::closure::{one_point_extension, terwilliger_coherent};
use crate::construct::{direct_product, direct_sum, wreath};
use crate::error::{Error, Result};
use crate::fileio::{file_digest, read_scheme, write_scheme_to};
use crate::wreathidem::{verify_decomposition, DecompositionReport};

#[derive(Parser)]
#[command(
    name = "cohcfg",
    version,
    about = "Coherent configurations: validation, constructions, closures, and \
             central idempotent certificates for wreath-product Terwilliger algebras."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse a scheme file and check the coherence axioms.
    Validate { file: PathBuf },
    /// Classify a scheme's quasi-thin structure at a base point.
    Analyze {
        file: PathBuf,
        /// Base point.
        #[arg(long, default_value_t = 0)]
        y0: usize,
    },
    /// Combine two schemes and write the result.
    Construct {
        #[arg(value_enum)]
        op: ConstructOp,
        file1: PathBuf,
        file2: PathBuf,
        /// Output scheme file.
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Isolate a point and re-run coherent closure (the one-point extension).
    Closure {
        file: PathBuf,
        /// Point to isolate.
        #[arg(long, default_value_t = 0)]
        point: usize,
        /// Output scheme file.
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Compute the Terwilliger algebra dimension at a base point and compare
    /// it with the adjacency algebra of the one-point extension.
    Terwilliger {
        file: PathBuf,
        /// Base point.
        #[arg(long, default_value_t = 0)]
        x0: usize,
    },
    /// Certify the central primitive idempotent decomposition of the
    /// Terwilliger algebra of a wreath product at (x0, y0).
    Verify {
        file_x: PathBuf,
        file_y: PathBuf,
        /// Base point in the first factor.
        #[arg(long, default_value_t = 0)]
        x0: usize,
        /// Base point in the second factor.
        #[arg(long, default_value_t = 0)]
        y0: usize,
        /// Tolerance for the numerically checked members and the oracle.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
        /// Write the report here instead of stdout.
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ConstructOp {
    Wreath,
    Product,
    Sum,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

/// The input half of a verification report: which files went in, pinned by
/// digest, and which base points were used.
#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ReportInputs {
    x_file: String,
    x_digest: String,
    y_file: String,
    y_digest: String,
    x0: usize,
    y0: usize,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct TheoremReport {
    inputs: ReportInputs,
    #[serde(flatten)]
    report: DecompositionReport,
}

/// Runs one invocation. `args` includes the program name, as `std::env::args`
/// would; reports go to `out`, diagnostics to `err`.
pub fn run_command<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{rendered}");
            } else {
                let _ = write!(out, "{rendered}");
            }
            return e.exit_code();
        }
    };
    match dispatch(cli.command, out) {
        Ok(code) => code,
        Err(Error::Io(io)) if io.kind() == std::io::ErrorKind::BrokenPipe => 141,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::AxiomViolation { .. }
        | Error::Parse { .. }
        | Error::ColorOutOfRange { .. }
        | Error::PointOutOfRange { .. }
        | Error::NotHomogeneous(_)
        | Error::NotClosed(_)
        | Error::NotFiberUnion(_)
        | Error::Precondition(_)
        | Error::Io(_) => 2,
        Error::DimensionMismatch(_)
        | Error::NotInAlgebra(_)
        | Error::SpectralAmbiguity { .. }
        | Error::Internal(_) => 1,
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<i32> {
    match command {
        Command::Validate { file } => {
            let (_, config) = read_scheme(&file)?;
            let summary = json!({
                "file": file.display().to_string(),
                "order": config.order(),
                "rank": config.rank(),
                "homogeneous": config.is_homogeneous(),
                "fiberSizes": config.fibers().iter().map(Vec::len).collect::<Vec<_>>(),
            });
            emit_json(out, &summary)?;
            Ok(0)
        }
        Command::Analyze { file, y0 } => {
            let (_, config) = read_scheme(&file)?;
            let profile = config.quasi_thin_profile(y0)?;
            emit_json(out, &profile)?;
            Ok(0)
        }
        Command::Construct { op, file1, file2, out: target } => {
            let (_, a) = read_scheme(&file1)?;
            let (_, b) = read_scheme(&file2)?;
            let built = match op {
                ConstructOp::Wreath => wreath(&a, &b)?.0,
                ConstructOp::Product => direct_product(&a, &b)?,
                ConstructOp::Sum => direct_sum(&a, &b)?,
            };
            write_scheme_to(&target, &built)?;
            let summary = json!({
                "out": target.display().to_string(),
                "order": built.order(),
                "rank": built.rank(),
            });
            emit_json(out, &summary)?;
            Ok(0)
        }
        Command::Closure { file, point, out: target } => {
            let (_, config) = read_scheme(&file)?;
            let ext = one_point_extension(&config, point)?;
            write_scheme_to(&target, &ext)?;
            let summary = json!({
                "out": target.display().to_string(),
                "order": ext.order(),
                "rank": ext.rank(),
            });
            emit_json(out, &summary)?;
            Ok(0)
        }
        Command::Terwilliger { file, x0 } => {
            let (_, config) = read_scheme(&file)?;
            let basis = terwilliger_coherent(&config, x0)?;
            let ext = one_point_extension(&config, x0)?;
            let summary = json!({
                "order": config.order(),
                "x0": x0,
                "terwilligerDimension": basis.dimension(),
                "extensionRank": ext.rank(),
                "coincide": basis.dimension() == ext.rank(),
            });
            emit_json(out, &summary)?;
            Ok(0)
        }
        Command::Verify { file_x, file_y, x0, y0, tol, format, out: target } => {
            let (_, cx) = read_scheme(&file_x)?;
            let (_, cy) = read_scheme(&file_y)?;
            let report = verify_decomposition(&cx, &cy, x0, y0, tol)?;
            let pass = report.pass;
            let full = TheoremReport {
                inputs: ReportInputs {
                    x_file: file_x.display().to_string(),
                    x_digest: file_digest(&file_x)?,
                    y_file: file_y.display().to_string(),
                    y_digest: file_digest(&file_y)?,
                    x0,
                    y0,
                },
                report,
            };
            let rendered = match format {
                Format::Json => {
                    let mut s = serde_json::to_string_pretty(&full)
                        .map_err(|e| Error::Internal(format!("report serialization: {e}")))?;
                    s.push('\n');
                    s
                }
                Format::Text => render_text(&full),
            };
            match target {
                Some(path) => std::fs::write(path, rendered)?,
                None => out.write_all(rendered.as_bytes())?,
            }
            Ok(if pass { 0 } else { 1 })
        }
    }
}

fn emit_json<S: Serialize>(out: &mut dyn Write, value: &S) -> Result<()> {
    let s = serde_json::to_string_pretty(value)
        .map_err(|e| Error::Internal(format!("serialization: {e}")))?;
    out.write_all(s.as_bytes())?;
    out.write_all(b"\n")?;
    Ok(())
}

fn render_text(full: &TheoremReport) -> String {
    let r = &full.report;
    let mut s = String::new();
    let line = |s: &mut String, text: String| {
        s.push_str(&text);
        s.push('\n');
    };
    line(&mut s, format!("inputs: {} ≀ {}", full.inputs.x_file, full.inputs.y_file));
    line(&mut s, format!("base point: ({}, {})", full.inputs.x0, full.inputs.y0));
    line(
        &mut s,
        format!("wreath product: order {}, rank {}, case {:?}", r.order, r.rank, r.case_tag),
    );
    line(
        &mut s,
        format!(
            "dimensions: terwilliger {}, center {}",
            r.terwilliger_dimension, r.center_dimension
        ),
    );
    let l = &r.count_ledger;
    line(
        &mut s,
        format!(
            "ledger: {} trivial + {} tilde + {} bar + {} hat + {} eta = {} ({})",
            l.trivial,
            l.tilde,
            l.bar,
            l.hat,
            l.eta,
            l.total,
            if l.matches { "matches the center" } else { "MISMATCH" }
        ),
    );
    for m in &r.family {
        let trace = m.trace.as_deref().unwrap_or("-");
        line(
            &mut s,
            format!(
                "  {}: {} idempotent={} central={} primitive={} oracle={} (distance {:.3e}) trace={}",
                m.label,
                if m.exact { "exact" } else { "numeric" },
                m.idempotent,
                m.central,
                m.primitive,
                m.oracle_match,
                m.oracle_distance,
                trace
            ),
        );
    }
    line(
        &mut s,
        format!(
            "partition identity: {}{}",
            if r.partition_pass { "holds" } else { "FAILS" },
            if r.partition_exact { " (exact)" } else { "" }
        ),
    );
    if let Some(w) = &r.partition_witness {
        line(&mut s, format!("  witness: {w}"));
    }
    if let Some(cross) = r.cross_path_agreement {
        line(
            &mut s,
            format!("cross-path agreement ({}): {}", r.paths.join(" vs "), cross),
        );
    }
    line(&mut s, format!("oracle agreement: {}", r.oracle_agreement));
    if let Some(f) = &r.failure {
        line(&mut s, format!("failure: {f}"));
    }
    line(
        &mut s,
        format!("pass: {} ({} ms)", if r.pass { "true" } else { "false" }, r.runtime_ms),
    );
    s
}

/// Convenience for `Path` arguments in tests.
pub fn run_strs(args: &[&str], out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    run_command(args.iter().copied(), out, err)
}
