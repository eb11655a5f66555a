use std::path::Path;
use std::time::Instant;

use crate::diagnostics::{report, CheckReport};
use crate::smtlib::{render, SmtScript};
use crate::solver::{solve, SolverConfig, SolverError};
use crate::syntax::{parse_file, parse_str, SourceProgram, SyntaxError};
use crate::typing::{check_program, ConstraintStore, GenError};

#[derive(Debug, thiserror::Error)]
pub enum PipelineError {
    #[error(transparent)]
    Syntax(#[from] SyntaxError),
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Solver(#[from] SolverError),
}

/// Everything produced for one checked program.
#[derive(Debug)]
pub struct Checked {
    pub program: SourceProgram,
    pub store: ConstraintStore,
    pub script: SmtScript,
    pub report: CheckReport,
}

fn finish(program: SourceProgram, config: &SolverConfig) -> Result<Checked, PipelineError> {
    let store = check_program(&program)?;
    let script = render(&store);
    let started = Instant::now();
    let verdict = solve(&store, config)?;
    let elapsed = started.elapsed();
    let mut report = report(&store, &verdict, &program);
    report.stats.solve_millis = elapsed.as_millis() as u64;
    Ok(Checked {
        program,
        store,
        script,
        report,
    })
}

pub fn check_source(
    source: &str,
    file: &str,
    config: &SolverConfig,
) -> Result<Checked, PipelineError> {
    finish(parse_str(source, file)?, config)
}

pub fn check_file(path: impl AsRef<Path>, config: &SolverConfig) -> Result<Checked, PipelineError> {
    finish(parse_file(path)?, config)
}
