//! Concrete syntax: lexing, parsing and canonical printing of model and type files.

pub mod ast;
pub mod lexer;
mod parser;
mod printer;

pub use ast::*;
pub use parser::{parse_component_file, parse_types_file, parse_value};
pub use printer::{expr_text, pretty_print, quote, value_text};
