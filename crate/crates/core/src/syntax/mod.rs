//! Lexing and parsing of the behavioural mini-language.

pub mod ast;
mod lexer;
mod parser;

use std::path::Path;

pub use ast::*;
pub use lexer::{tokenize, LexError, Token, TokenKind};
pub use parser::{parse, ParseError};

#[derive(Debug, thiserror::Error)]
pub enum SyntaxError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    Lex(#[from] LexError),
    #[error("{0}")]
    Parse(#[from] ParseError),
}

/// `parse ∘ tokenize` over an in-memory source.
pub fn parse_str(source: &str, file: &str) -> Result<SourceProgram, SyntaxError> {
    let tokens = tokenize(source, file)?;
    Ok(parse(&tokens, file)?)
}

pub fn parse_file(path: impl AsRef<Path>) -> Result<SourceProgram, SyntaxError> {
    let path = path.as_ref();
    let name = path.display().to_string();
    let source = std::fs::read_to_string(path).map_err(|source| SyntaxError::Io {
        path: name.clone(),
        source,
    })?;
    parse_str(&source, &name)
}
