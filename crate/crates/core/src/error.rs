//! Error types shared across the crate.

use thiserror::Error;

/// Errors raised while reading a presentation from text.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("line {line}: unknown vertex `{id}`")]
    DanglingEndpoint { line: usize, id: String },
    #[error("line {line}: duplicate identifier `{id}`")]
    DuplicateId { line: usize, id: String },
    #[error("line {line}: {msg}")]
    Structure { line: usize, msg: String },
    #[error("cannot read `{path}`: {msg}")]
    Io { path: String, msg: String },
}

impl ParseError {
    pub fn syntax(line: usize, msg: impl Into<String>) -> Self {
        ParseError::Syntax { line, msg: msg.into() }
    }

    pub fn structure(line: usize, msg: impl Into<String>) -> Self {
        ParseError::Structure { line, msg: msg.into() }
    }
}

/// Errors raised by analyses on well-formed presentations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("unknown vertex `{0}`")]
    UnknownVertex(String),
    #[error("{0}")]
    Unsupported(String),
    #[error("oracle violation: {0}")]
    OracleViolation(String),
}
