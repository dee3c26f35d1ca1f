//! Frontend and abstract interpreter for a small imperative language.
//!
//! Programs assign expressions over interval inputs, constrain them with
//! `assume`, and branch or loop on comparisons. [`analyze`] runs the whole
//! pipeline: parse, statically check, abstractly interpret under a chosen
//! backend (interval / affine / quad) and concretization (mt / sdp), and
//! return per-variable bounds with warnings.

pub mod interp;
pub mod lexer;
pub mod parser;
pub mod report;

pub use interp::{interpret, AnalysisConfig, AnalysisResult, ConfigError};
pub use lexer::{tokenize, LexError, Token, TokenKind};
pub use parser::{parse_program, ParseError, Program, Stmt};
pub use report::{report, Format};

use thiserror::Error;

/// Everything that can stop an analysis, keyed to process exit codes.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalyzerError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("internal analysis failure: {0}")]
    Internal(#[from] qz_domain::DomainError),
}

impl AnalyzerError {
    /// Exit code for command-line front ends: 1 parse, 2 config, 3 internal.
    pub fn exit_code(&self) -> i32 {
        match self {
            AnalyzerError::Parse(_) => 1,
            AnalyzerError::Config(_) => 2,
            AnalyzerError::Internal(_) => 3,
        }
    }
}

/// Parses, checks, and interprets `src` in one call.
pub fn analyze(src: &str, cfg: &AnalysisConfig) -> Result<AnalysisResult, AnalyzerError> {
    let program = parser::parse_program(src)?;
    interp::interpret(&program, cfg)
}
