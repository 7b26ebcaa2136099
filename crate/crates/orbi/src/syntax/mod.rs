//! Shared abstract syntax, substitution and printing.

mod ast;
pub mod pretty;
pub mod subst;

pub use ast::*;
pub use pretty::Pretty;
pub use subst::{alpha_equal, subst};
