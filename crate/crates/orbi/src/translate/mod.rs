//! Generation of target-dialect documents from checked specifications.
//!
//! `ab` and `hy` get wf predicates, rule clauses, context predicates and
//! theorem statements. `bel` and `tw` mostly pass the signature through.

pub mod clause;
pub mod contexts;
pub mod names;
pub mod term;
pub mod theorem;

pub use clause::{gen_wf_predicates, render_clause_ab, render_clause_hy, translate_rule, Clause, Goal};
pub use contexts::{translate_relation, translate_schema};
pub use names::Names;
pub use theorem::translate_theorem;

use crate::check::Checked;
use crate::diag::Diagnostic;
use crate::directives::resolve;
use crate::syntax::pretty::sections;
use crate::syntax::{Pretty, Section, SystemId};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockKind {
    Clause,
    Definition,
    Theorem,
    Passthrough,
}

/// A rendered piece of output and the ORBI item it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DocBlock {
    pub kind: BlockKind,
    pub source: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TargetDoc {
    pub target: SystemId,
    pub blocks: Vec<DocBlock>,
    pub warnings: Vec<Diagnostic>,
}

impl TargetDoc {
    /// Clauses and theorems run together line by line; anything else is
    /// separated by a blank line.
    pub fn render(&self) -> String {
        let mut out = String::new();
        let mut prev: Option<BlockKind> = None;
        for b in &self.blocks {
            if let Some(p) = prev {
                let tight = p == b.kind && matches!(p, BlockKind::Clause | BlockKind::Theorem);
                out.push_str(if tight { "\n" } else { "\n\n" });
            }
            out.push_str(&b.text);
            prev = Some(b.kind);
        }
        if !out.is_empty() {
            out.push('\n');
        }
        out
    }

    pub fn block(&self, source: &str) -> Option<&DocBlock> {
        self.blocks.iter().find(|b| b.source == source)
    }
}

fn block(kind: BlockKind, source: &str, text: String) -> DocBlock {
    DocBlock { kind, source: source.to_string(), text }
}

fn comment(text: &str) -> String {
    text.lines().map(|l| format!("% {l}")).collect::<Vec<_>>().join("\n")
}

/// Renders a checked specification for `target`, collecting every error.
pub fn translate_spec(checked: &Checked, target: SystemId) -> Result<TargetDoc, Vec<Diagnostic>> {
    let Checked { spec, sig, tables } = checked;
    let ann = resolve(spec, target)?;
    let names = Names::for_spec(sig, spec);
    let mut blocks = Vec::new();
    let mut errors = Vec::new();
    let mut warnings = Vec::new();
    match target {
        SystemId::Ab | SystemId::Hy => {
            let mut clauses = Vec::new();
            match gen_wf_predicates(sig, &ann.wf_families, &names) {
                Ok(cs) => clauses.extend(cs),
                Err(e) => errors.push(e),
            }
            for e in sig.rules() {
                match translate_rule(sig, &e.decl, &ann, &names) {
                    Ok(c) => clauses.push(c),
                    Err(err) => errors.push(err.or_at(spec.decl_span(e.decl.name()))),
                }
            }
            if target == SystemId::Ab {
                blocks.extend(clauses.iter().map(|c| block(BlockKind::Clause, &c.name, render_clause_ab(c))));
            } else if !clauses.is_empty() {
                let mut ctors = Vec::new();
                for c in &clauses {
                    match render_clause_hy(c) {
                        Ok(s) => ctors.push(s),
                        Err(e) => errors.push(e.or_at(spec.decl_span(&c.name))),
                    }
                }
                let text = format!("Inductive prog : atm -> oo -> Prop :=\n{}.", ctors.join("\n"));
                blocks.push(block(BlockKind::Definition, "prog", text));
            }
            for s in tables.schemas.iter() {
                match translate_schema(sig, s, target, &ann, &names) {
                    Ok(t) => blocks.push(block(BlockKind::Definition, &s.name, t)),
                    Err(e) => errors.push(e.or_at(spec.span(&crate::syntax::Item::Schema(s.name.clone())))),
                }
            }
            for d in tables.relations.iter() {
                match translate_relation(sig, d, target, &ann, &names) {
                    Ok(t) => blocks.push(block(BlockKind::Definition, &d.name, t)),
                    Err(e) => errors.push(e.or_at(spec.span(&crate::syntax::Item::Def(d.name.clone())))),
                }
            }
        }
        SystemId::Bel => {
            let text = sections(spec, &[Section::Syntax, Section::Judgments, Section::Rules, Section::Schemas]);
            blocks.push(block(BlockKind::Passthrough, "signature", text.trim_end().to_string()));
            for d in tables.relations.iter() {
                blocks.push(block(BlockKind::Definition, &d.name, d.pretty()));
            }
        }
        SystemId::Tw => {
            let text = sections(spec, &[Section::Syntax, Section::Judgments, Section::Rules]);
            blocks.push(block(BlockKind::Passthrough, "signature", text.trim_end().to_string()));
            for s in tables.schemas.iter() {
                blocks.push(block(BlockKind::Definition, &s.name, comment(&s.pretty())));
            }
            for d in tables.relations.iter() {
                blocks.push(block(BlockKind::Definition, &d.name, comment(&d.pretty())));
            }
        }
    }
    for t in &spec.theorems {
        match translate_theorem(sig, &tables.relations, t, target, &ann, &names) {
            Ok((text, ws)) => {
                blocks.push(block(BlockKind::Theorem, &t.name, text));
                warnings.extend(ws.into_iter().map(|w| w.or_at(spec.span(&crate::syntax::Item::Theorem(t.name.clone())))));
            }
            Err(e) => errors.push(e.or_at(spec.span(&crate::syntax::Item::Theorem(t.name.clone())))),
        }
    }
    blocks.retain(|b| !b.text.is_empty());
    if errors.is_empty() {
        Ok(TargetDoc { target, blocks, warnings })
    } else {
        Err(errors)
    }
}
