//! The model file language.
//!
//! ```text
//! model "poisson"
//! parameter n > 2
//! parameter p > 0
//! independent x[n]
//! dependent u
//! lagrangian: grad2(u, u, x)/2 - powe(u, p + 1)/(p + 1)
//! dilation: x -> 1, u -> ?
//! critical p
//! equation u: lap(u, x, 1) + powo(u, p)
//! ```
//!
//! Statements end at a newline; an expression continues across lines inside
//! brackets or after a binary operator. `#` starts a comment.

use thiserror::Error;

mod lexer;
mod parser;
mod render;

pub use parser::Scope;
pub use render::render_model;

use crate::expr::Expr;
use crate::model::ModelSpec;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DslError {
    #[error("{line}:{col}: {message}")]
    Parse { line: usize, col: usize, message: String },
    #[error("{line}:{col}: {name} expects {expected} argument(s), got {found}")]
    Arity { line: usize, col: usize, name: String, expected: String, found: usize },
    #[error("{line}:{col}: unknown symbol {name}")]
    UnknownSymbol { line: usize, col: usize, name: String },
}

impl DslError {
    pub(crate) fn parse(line: usize, col: usize, message: &str) -> DslError {
        DslError::Parse { line, col, message: message.to_string() }
    }

    /// Line and column of the offending token.
    pub fn position(&self) -> (usize, usize) {
        match self {
            DslError::Parse { line, col, .. }
            | DslError::Arity { line, col, .. }
            | DslError::UnknownSymbol { line, col, .. } => (*line, *col),
        }
    }
}

/// Parse a complete model file.
pub fn parse_model(src: &str) -> Result<ModelSpec, DslError> {
    parser::Parser::new(src)?.model()
}

/// Parse a single expression against the symbols of `scope`.
pub fn parse_expr(src: &str, scope: &Scope) -> Result<Expr, DslError> {
    parser::Parser::new(src)?.standalone_expr(scope)
}

#[cfg(test)]
mod tests;
