//! The checking pipeline: parse, signature, contexts, directives.

use crate::context::{check_contexts, ContextTables};
use crate::diag::Diagnostic;
use crate::directives::check_directives;
use crate::lf::{check_signature, Signature};
use crate::parser::parse_spec_recovering;
use crate::syntax::OrbiSpec;

/// A specification that passed every check.
#[derive(Debug, Clone)]
pub struct Checked {
    pub spec: OrbiSpec,
    pub sig: Signature,
    pub tables: ContextTables,
}

/// Checks `source`, stopping after the first stage that reports errors.
pub fn check_source(source: &str) -> Result<Checked, Vec<Diagnostic>> {
    let (spec, errors) = parse_spec_recovering(source);
    if !errors.is_empty() {
        return Err(errors);
    }
    check_spec(spec)
}

pub fn check_spec(spec: OrbiSpec) -> Result<Checked, Vec<Diagnostic>> {
    let sig = check_signature(&spec)?;
    let (tables, mut errors) = check_contexts(&sig, &spec);
    errors.extend(check_directives(&spec));
    if errors.is_empty() {
        Ok(Checked { spec, sig, tables })
    } else {
        Err(errors)
    }
}
