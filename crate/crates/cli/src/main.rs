use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use pseudoarith::classify::{classify_batch, classify_with, ClassificationReport, ClassifyOptions, Verdict, TSV_HEADER};
use pseudoarith::coxeter::{ambient_form, gram_matrix, parse_diagram_named, trace_field};
use pseudoarith::localarith::{audit_form, PlaceAudit};
use pseudoarith::lvalues::{volume_check_with, MAX_DIGITS};
use pseudoarith::par::{self, Execution};
use pseudoarith::qspace::{transfer, QuadraticForm};
use pseudoarith::Error;

/// Exit codes shared by all subcommands.
mod code {
    pub const OK: u8 = 0;
    pub const PARSE: u8 = 1;
    pub const SIGNATURE: u8 = 2;
    pub const UNSUPPORTED: u8 = 3;
    pub const UNDETERMINED: u8 = 4;
}

#[derive(Parser)]
#[command(name = "pseudoarith", version, about = "Classify hyperbolic Coxeter groups and check the Δ₅ volume identity")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify one diagram file.
    Classify {
        path: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        /// Dump places, splitting data and Hasse invariants of f and its transfers to stderr.
        #[arg(long)]
        audit_local: bool,
    },
    /// Classify every `.cox` file of a directory, in filename order.
    Batch {
        dir: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        /// Keep per-diagram timings; off by default so output is reproducible.
        #[arg(long)]
        timing: bool,
    },
    /// Evaluate the Δ₅ volume with certified error and compare with the published value.
    Volume {
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u32).range(5..=MAX_DIGITS as i64))]
        digits: u32,
        /// Numerator of the ζ(3) coefficient; anything but 73 is a negative control.
        #[arg(long, default_value_t = 73)]
        coefficient: i64,
    },
}

#[derive(Args)]
struct RunArgs {
    /// JSON report.
    #[arg(long, group = "format")]
    json: bool,
    /// Tab-separated table row.
    #[arg(long, group = "format")]
    tsv: bool,
    /// Human-readable summary.
    #[arg(long, group = "format")]
    pretty: bool,
    /// Scan model parameters `a = 1..=A` after the determinant-guided ones.
    #[arg(long, default_value_t = pseudoarith::classify::DEFAULT_BOUND, value_parser = clap::value_parser!(u64).range(1..))]
    bound: u64,
    /// Worker threads; 1 runs sequentially.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Format {
    Json,
    Tsv,
    Pretty,
}

impl RunArgs {
    fn format(&self, default: Format) -> Format {
        match (self.json, self.tsv, self.pretty) {
            (true, _, _) => Format::Json,
            (_, true, _) => Format::Tsv,
            (_, _, true) => Format::Pretty,
            _ => default,
        }
    }

    fn options(&self) -> Result<ClassifyOptions> {
        let exec = match self.jobs {
            Some(0) => anyhow::bail!("--jobs must be at least 1"),
            Some(1) => Execution::Sequential,
            Some(n) => {
                par::set_threads(n).map_err(anyhow::Error::msg)?;
                Execution::Parallel
            }
            None => Execution::Parallel,
        };
        Ok(ClassifyOptions {
            bound: self.bound,
            exec,
            ..ClassifyOptions::default()
        })
    }
}

fn error_code(e: &Error) -> u8 {
    match e {
        Error::NotHyperbolic { .. } => code::SIGNATURE,
        Error::UnsupportedLabel { .. } => code::UNSUPPORTED,
        _ => code::PARSE,
    }
}

fn verdict_code(v: Verdict) -> u8 {
    if v.is_definite() {
        code::OK
    } else {
        code::UNDETERMINED
    }
}

/// Writes to stdout; a closed pipe (`| head`) is not an error.
fn emit(text: &str) -> Result<()> {
    let mut out = std::io::stdout().lock();
    match out.write_all(text.as_bytes()).and_then(|()| out.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn diagram_name(path: &Path) -> String {
    path.file_stem()
        .map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned())
}

fn cmd_classify(path: &Path, run: &RunArgs, audit: bool) -> Result<u8> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let opts = run.options()?;
    let result = parse_diagram_named(&text, &diagram_name(path)).and_then(|d| {
        let report = classify_with(&d, &opts)?;
        if audit {
            eprint!("{}", audit_text(&d)?);
        }
        Ok(report)
    });
    let report = match result {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {}: {e}", path.display());
            return Ok(error_code(&e));
        }
    };
    let text = match run.format(Format::Pretty) {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&report)?),
        Format::Tsv => format!("{TSV_HEADER}\n{}\n", report.tsv_row()),
        Format::Pretty => report.pretty(),
    };
    emit(&text)?;
    Ok(verdict_code(report.verdict))
}

fn audit_text(d: &pseudoarith::coxeter::CoxeterDiagram) -> pseudoarith::Result<String> {
    let g = gram_matrix(d)?;
    let big = trace_field(&g);
    let f = ambient_form(&g, &big)?.form;
    let mut out = audit_block(&format!("f over {big}"), &f);
    for sub in big.subfields_index2() {
        let t = transfer(&f, &sub)?;
        out.push_str(&audit_block(&format!("transfer to {sub}"), &t));
    }
    Ok(out)
}

fn audit_block(title: &str, f: &QuadraticForm) -> String {
    let mut s = format!("audit {title}: {f}\n");
    for PlaceAudit {
        p,
        signs,
        e,
        f: res,
        g,
        hasse,
        signature,
    } in audit_form(f)
    {
        match (p, signature) {
            (None, Some((pos, neg))) => {
                s.push_str(&format!("  real {signs:?}  signature ({pos},{neg})  hasse {hasse:+}\n"))
            }
            (Some(p), _) => s.push_str(&format!(
                "  p = {p}  e = {e}  f = {res}  g = {g}  signs {signs:?}  hasse {hasse:+}\n"
            )),
            (None, None) => unreachable!("real places carry a signature"),
        }
    }
    s
}

enum Row {
    Report(Box<ClassificationReport>),
    Failed { name: String, code: u8, msg: String },
}

fn cmd_batch(dir: &Path, run: &RunArgs, timing: bool) -> Result<u8> {
    let mut paths: Vec<PathBuf> = fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<_>>()?;
    paths.retain(|p| p.is_file() && p.extension().is_some_and(|x| x == "cox"));
    paths.sort_by(|a, b| a.file_name().cmp(&b.file_name()));
    let inputs: Vec<(String, String)> = paths
        .iter()
        .map(|p| Ok((diagram_name(p), fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?)))
        .collect::<Result<_>>()?;
    let opts = run.options()?;
    let rows: Vec<Row> = classify_batch(&inputs, &opts)
        .into_iter()
        .zip(&inputs)
        .map(|(r, (name, _))| match r {
            Ok(mut rep) => {
                if !timing {
                    rep.ms = 0;
                }
                Row::Report(Box::new(rep))
            }
            Err(e) => Row::Failed {
                name: name.clone(),
                code: error_code(&e),
                msg: e.to_string(),
            },
        })
        .collect();

    let mut text = String::new();
    match run.format(Format::Tsv) {
        Format::Tsv => {
            text.push_str(&format!("{TSV_HEADER}\terror\n"));
            for row in &rows {
                match row {
                    Row::Report(r) => text.push_str(&format!("{}\t-\n", r.tsv_row())),
                    Row::Failed { name, msg, .. } => {
                        text.push_str(&format!("{name}\t-\t-\t-\terror\t-\t-\t{msg}\n"))
                    }
                }
            }
        }
        Format::Json => {
            let values: Vec<serde_json::Value> = rows
                .iter()
                .map(|row| match row {
                    Row::Report(r) => serde_json::to_value(r),
                    Row::Failed { name, code, msg } => Ok(serde_json::json!({
                        "diagram": name,
                        "error": msg,
                        "exit": code,
                    })),
                })
                .collect::<serde_json::Result<_>>()?;
            text.push_str(&format!("{}\n", serde_json::to_string_pretty(&values)?));
        }
        Format::Pretty => {
            for row in &rows {
                match row {
                    Row::Report(r) => text.push_str(&format!("{}\n", r.pretty())),
                    Row::Failed { name, msg, .. } => {
                        text.push_str(&format!("diagram      {name}\nerror        {msg}\n\n"))
                    }
                }
            }
        }
    }

    emit(&text)?;

    let first_error = rows.iter().find_map(|r| match r {
        Row::Failed { code, .. } => Some(*code),
        Row::Report(_) => None,
    });
    let undetermined = rows
        .iter()
        .any(|r| matches!(r, Row::Report(rep) if !rep.verdict.is_definite()));
    Ok(match (first_error, undetermined) {
        (Some(c), _) => c,
        (None, true) => code::UNDETERMINED,
        (None, false) => code::OK,
    })
}

fn cmd_volume(digits: u32, coefficient: i64) -> Result<u8> {
    let check = volume_check_with(coefficient, digits);
    emit(&format!("{}\n", serde_json::to_string_pretty(&check)?))?;
    Ok(if check.matches { code::OK } else { code::UNDETERMINED })
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Classify { path, run, audit_local } => cmd_classify(&path, &run, audit_local),
        Command::Batch { dir, run, timing } => cmd_batch(&dir, &run, timing),
        Command::Volume { digits, coefficient } => cmd_volume(digits, coefficient),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => e.exit(),
        Err(e) => {
            // usage errors share the exit code of malformed input
            let _ = e.print();
            return ExitCode::from(code::PARSE);
        }
    };
    match run(cli) {
        Ok(c) => ExitCode::from(c),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(code::PARSE)
        }
    }
}
