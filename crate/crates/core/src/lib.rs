//! Static type checking for a Jolie-like behavioural language.
//!
//! Programs are parsed ([`syntax`]), translated into `hasType`/`sameType`
//! assertions ([`typing`]), rendered as SMT-LIB2 ([`smtlib`]) and decided
//! by a solver backend ([`solver`]). Unsatisfiable stores are turned into
//! source-located type errors by [`diagnostics`].

pub mod cli;
pub mod diagnostics;
pub mod pipeline;
pub mod smtlib;
pub mod solver;
pub mod span;
pub mod syntax;
pub mod typing;

pub use pipeline::{check_file, check_source, Checked, PipelineError};
