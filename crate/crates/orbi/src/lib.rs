//! Parsing, checking, linting and translation of ORBI specifications.

pub mod check;
pub mod cli;
pub mod context;
pub mod diag;
pub mod directives;
pub mod lf;
pub mod lint;
pub mod parser;
pub mod syntax;
pub mod translate;
