//! Command-line front end.
//!
//! Exit codes: 0 when every input is well typed, 1 when any is not, 2 on
//! any lex, parse, I/O or solver failure (failures win over verdicts).

use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Duration;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;

use crate::diagnostics::{format_json, format_text};
use crate::pipeline::{check_file, PipelineError};
use crate::smtlib::{render, write_script};
use crate::solver::{Backend, ExternalCommand, SolverConfig, Verdict};
use crate::syntax::parse_file;
use crate::typing::check_program;

pub const EXIT_OK: i32 = 0;
pub const EXIT_ILL_TYPED: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "jstc",
    version,
    about = "Static type checker for Jolie behaviours"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Type-check one or more programs.
    Check(CheckArgs),
    /// Check every program listed in a manifest against its expected verdict.
    Corpus(CorpusArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum OutputFormat {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Args)]
pub struct SolverArgs {
    #[arg(long, value_enum, default_value_t = Backend::Builtin)]
    pub backend: Backend,
    /// External solver command; the script path is appended or replaces `{}`.
    #[arg(long, env = "JSTC_SOLVER_CMD")]
    pub solver_cmd: Option<String>,
    /// Per-file solver timeout in seconds.
    #[arg(long, default_value_t = 10.0)]
    pub timeout: f64,
}

impl SolverArgs {
    pub fn config(&self) -> Result<SolverConfig, String> {
        if !(self.timeout.is_finite() && self.timeout > 0.0) {
            return Err(format!("invalid timeout {}", self.timeout));
        }
        let external_cmd = match (&self.solver_cmd, self.backend) {
            (Some(cmd), _) => Some(cmd.parse::<ExternalCommand>()?),
            (None, Backend::Builtin) => None,
            (None, _) => Some(ExternalCommand {
                program: "z3".into(),
                args: Vec::new(),
            }),
        };
        Ok(SolverConfig {
            backend: self.backend,
            external_cmd,
            timeout: Duration::from_secs_f64(self.timeout),
        })
    }
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(required = true)]
    pub inputs: Vec<PathBuf>,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Write the SMT-LIB script to PATH (`-` for standard output). With
    /// several inputs PATH is a directory receiving `<stem>.smt2` files.
    #[arg(long, value_name = "PATH")]
    pub emit_smt: Option<String>,
    /// With --emit-smt, also solve and report.
    #[arg(long, requires = "emit_smt")]
    pub solve: bool,
}

#[derive(Debug, Args)]
pub struct CorpusArgs {
    /// Tab-separated `<path>\t<sat|unsat>` lines; `#` starts a comment.
    pub manifest: PathBuf,
    #[command(flatten)]
    pub solver: SolverArgs,
}

/// Result of processing one file: output destined for each stream plus
/// the exit class it contributes.
#[derive(Debug, Default)]
struct FileOutcome {
    stdout: String,
    stderr: String,
    code: i32,
}

pub fn run(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    match cli.command {
        Command::Check(args) => run_check(&args, out, err),
        Command::Corpus(args) => run_corpus(&args, out, err),
    }
}

/// Parses `argv` and runs; usage errors map to exit code 2.
pub fn run_from_args<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(argv) {
        Ok(cli) => run(cli, out, err),
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
                EXIT_ERROR
            } else {
                let _ = write!(out, "{text}");
                EXIT_OK
            }
        }
    }
}

fn worst(codes: impl IntoIterator<Item = i32>) -> i32 {
    codes.into_iter().max().unwrap_or(EXIT_OK)
}

fn run_check(args: &CheckArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let config = match args.solver.config() {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_ERROR;
        }
    };
    let outcomes: Vec<FileOutcome> = if args.emit_smt.is_some() {
        args.inputs
            .par_iter()
            .map(|path| emit_one(path, args, &config))
            .collect()
    } else {
        args.inputs
            .par_iter()
            .map(|path| check_one(path, args.format, &config))
            .collect()
    };
    for o in &outcomes {
        let _ = out.write_all(o.stdout.as_bytes());
        let _ = err.write_all(o.stderr.as_bytes());
    }
    worst(outcomes.iter().map(|o| o.code))
}

fn check_one(path: &Path, format: OutputFormat, config: &SolverConfig) -> FileOutcome {
    match check_file(path, config) {
        Ok(checked) => {
            let report = &checked.report;
            let stdout = match format {
                OutputFormat::Text => format_text(report),
                OutputFormat::Json => format_json(report) + "\n",
            };
            let (code, stderr) = match &report.verdict {
                Verdict::Sat => (EXIT_OK, String::new()),
                Verdict::Unsat { .. } => (EXIT_ILL_TYPED, String::new()),
                Verdict::Unknown(reason) => (
                    EXIT_ERROR,
                    format!(
                        "{}: error: solver could not decide: {reason}\n",
                        path.display()
                    ),
                ),
            };
            FileOutcome {
                stdout,
                stderr,
                code,
            }
        }
        Err(e) => failure(path, &e),
    }
}

fn failure(path: &Path, e: &PipelineError) -> FileOutcome {
    let stderr = match e {
        PipelineError::Solver(e) => format!("{}: error: {e}\n", path.display()),
        other => format!("error: {other}\n"),
    };
    FileOutcome {
        stdout: String::new(),
        stderr,
        code: EXIT_ERROR,
    }
}

fn emit_one(path: &Path, args: &CheckArgs, config: &SolverConfig) -> FileOutcome {
    let dest = args.emit_smt.as_deref().expect("emit mode");
    let program = match parse_file(path) {
        Ok(p) => p,
        Err(e) => return failure(path, &PipelineError::Syntax(e)),
    };
    let store = match check_program(&program) {
        Ok(s) => s,
        Err(e) => return failure(path, &PipelineError::Gen(e)),
    };
    let script = render(&store);
    let mut outcome = FileOutcome::default();
    if dest == "-" {
        outcome.stdout.push_str(&script.text());
    } else {
        let target = if args.inputs.len() > 1 {
            let stem = path
                .file_stem()
                .map(|s| s.to_os_string())
                .unwrap_or_default();
            Path::new(dest).join(stem).with_extension("smt2")
        } else {
            PathBuf::from(dest)
        };
        if let Err(e) = write_script(&script, &target) {
            outcome.stderr = format!("error: {}: {e}\n", target.display());
            outcome.code = EXIT_ERROR;
            return outcome;
        }
    }
    if args.solve {
        let checked = check_one(path, args.format, config);
        outcome.stdout.push_str(&checked.stdout);
        outcome.stderr.push_str(&checked.stderr);
        outcome.code = checked.code;
    }
    outcome
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub path: PathBuf,
    pub expect_sat: bool,
}

/// Parses manifest text; relative paths are resolved against `base`.
pub fn parse_manifest(text: &str, base: &Path) -> Result<Vec<ManifestEntry>, String> {
    let mut entries = Vec::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim_end();
        if line.trim().is_empty() {
            continue;
        }
        let mut fields = line.split('\t');
        let (Some(path), Some(expected), None) = (fields.next(), fields.next(), fields.next())
        else {
            return Err(format!("line {}: expected `<path>\\t<sat|unsat>`", n + 1));
        };
        let expect_sat = match expected.trim() {
            "sat" => true,
            "unsat" => false,
            other => return Err(format!("line {}: unknown verdict `{other}`", n + 1)),
        };
        let path = Path::new(path.trim());
        entries.push(ManifestEntry {
            path: if path.is_absolute() {
                path.to_path_buf()
            } else {
                base.join(path)
            },
            expect_sat,
        });
    }
    Ok(entries)
}

fn run_corpus(args: &CorpusArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let config = match args.solver.config() {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_ERROR;
        }
    };
    let manifest = &args.manifest;
    let entries = std::fs::read_to_string(manifest)
        .map_err(|e| e.to_string())
        .and_then(|text| parse_manifest(&text, manifest.parent().unwrap_or(Path::new(""))));
    let entries = match entries {
        Ok(e) => e,
        Err(e) => {
            let _ = writeln!(err, "error: {}: {e}", manifest.display());
            return EXIT_ERROR;
        }
    };

    let rows: Vec<(i32, String, String)> = entries
        .par_iter()
        .map(|entry| {
            let expected = if entry.expect_sat { "sat" } else { "unsat" };
            let (code, actual, note) = match check_file(&entry.path, &config) {
                Ok(c) => {
                    let actual = c.report.verdict.name();
                    let code = if actual == expected {
                        EXIT_OK
                    } else {
                        EXIT_ILL_TYPED
                    };
                    (code, actual.to_string(), String::new())
                }
                Err(e) => (
                    EXIT_ERROR,
                    "error".to_string(),
                    failure(&entry.path, &e).stderr,
                ),
            };
            let status = if code == EXIT_OK { "PASS" } else { "FAIL" };
            let row = format!("{status}\t{expected}\t{actual}\t{}\n", entry.path.display());
            (code, row, note)
        })
        .collect();

    let passed = rows.iter().filter(|r| r.0 == EXIT_OK).count();
    for (_, row, note) in &rows {
        let _ = out.write_all(row.as_bytes());
        let _ = err.write_all(note.as_bytes());
    }
    let _ = writeln!(out, "{passed}/{} passed", rows.len());
    worst(rows.iter().map(|r| r.0))
}
