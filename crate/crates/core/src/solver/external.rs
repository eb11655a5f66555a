use std::io::Read;
use std::process::{Command, Stdio};
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::smtlib::SmtScript;
use crate::typing::ConstraintStore;

use super::{consistent, shrink_core, SolverConfig, SolverError, Verdict};

/// Solver command line. The script path replaces a `{}` argument if one is
/// present and is appended otherwise.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExternalCommand {
    pub program: String,
    pub args: Vec<String>,
}

impl FromStr for ExternalCommand {
    type Err = String;

    fn from_str(template: &str) -> Result<Self, Self::Err> {
        let mut words = template.split_whitespace().map(str::to_string);
        let program = words
            .next()
            .ok_or_else(|| "empty solver command".to_string())?;
        Ok(ExternalCommand {
            program,
            args: words.collect(),
        })
    }
}

impl std::fmt::Display for ExternalCommand {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.program)?;
        for a in &self.args {
            write!(f, " {a}")?;
        }
        Ok(())
    }
}

impl ExternalCommand {
    fn build(&self, script: &std::path::Path) -> Command {
        let path = script.display().to_string();
        let mut cmd = Command::new(&self.program);
        let mut substituted = false;
        for a in &self.args {
            if a.contains("{}") {
                cmd.arg(a.replace("{}", &path));
                substituted = true;
            } else {
                cmd.arg(a);
            }
        }
        if !substituted {
            cmd.arg(&path);
        }
        cmd
    }
}

/// Runs the configured solver on `script` and maps its first output token
/// to a verdict. On `unsat` the core is computed from `store` with the
/// builtin checker.
pub fn solve_external(
    store: &ConstraintStore,
    script: &SmtScript,
    config: &SolverConfig,
) -> Result<Verdict, SolverError> {
    let command = config
        .external_cmd
        .as_ref()
        .ok_or(SolverError::MissingCommand)?;
    let file = tempfile::Builder::new()
        .prefix("jstc-")
        .suffix(".smt2")
        .tempfile()?;
    std::fs::write(file.path(), script.text())?;

    let output = run_with_timeout(command.build(file.path()), command, config.timeout)?;
    match output.split_whitespace().next() {
        Some("sat") => Ok(Verdict::Sat),
        Some("unsat") => {
            if consistent(store.items()) {
                return Err(SolverError::BackendMismatch {
                    builtin: "sat",
                    external: "unsat",
                });
            }
            Ok(Verdict::Unsat {
                core: shrink_core(store)?,
            })
        }
        Some("unknown") => Ok(Verdict::Unknown("solver answered unknown".into())),
        _ => {
            let excerpt: String = output.trim().lines().take(3).collect::<Vec<_>>().join(" ");
            Err(SolverError::MalformedOutput(excerpt))
        }
    }
}

fn run_with_timeout(
    mut cmd: Command,
    command: &ExternalCommand,
    timeout: Duration,
) -> Result<String, SolverError> {
    let mut child = cmd
        .stdin(Stdio::null())
        .stdout(Stdio::piped())
        .stderr(Stdio::null())
        .spawn()
        .map_err(|source| SolverError::Spawn {
            command: command.to_string(),
            source,
        })?;
    let mut stdout = child.stdout.take().expect("stdout is piped");
    let reader = std::thread::spawn(move || {
        let mut buf = String::new();
        stdout.read_to_string(&mut buf).map(|_| buf)
    });

    let deadline = Instant::now() + timeout;
    loop {
        if child.try_wait()?.is_some() {
            break;
        }
        if Instant::now() >= deadline {
            let _ = child.kill();
            let _ = child.wait();
            return Err(SolverError::Timeout(timeout));
        }
        std::thread::sleep(Duration::from_millis(2));
    }
    let out = reader.join().expect("reader thread panicked")?;
    Ok(out)
}
