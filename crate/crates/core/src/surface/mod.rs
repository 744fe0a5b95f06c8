//! Concrete syntax for terms and types.

mod lexer;
mod parser;
mod printer;

use thiserror::Error;

pub use crate::syntax::SourceSpan;
pub use parser::{parse_term, parse_type, Decl, Program, Session};
pub use printer::{print_inferred, print_term, print_type, residual_names, Names};

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{message} at {span}")]
pub struct ParseError {
    pub span: SourceSpan,
    pub message: String,
    pub expected: Vec<String>,
}

impl ParseError {
    pub fn new(span: SourceSpan, message: &str, expected: Vec<String>) -> ParseError {
        ParseError { span, message: message.to_string(), expected }
    }
}
