//! Resolution of `%% wf|explicit|implicit [systems] in dest` directives.

use std::collections::{BTreeMap, BTreeSet};

use crate::diag::{Code, Diagnostic};
use crate::syntax::{Decl, Dest, Directive, Item, OrbiSpec, Prp, SystemId, What};

/// What a destination refers to once resolved.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum Target {
    Family(String),
    Rule(String),
    Schema(String),
    RelationParam(String, String),
    TheoremVar(String, String),
}

impl Target {
    fn describe(&self) -> String {
        match self {
            Target::Family(f) => format!("type family `{f}`"),
            Target::Rule(r) => format!("rule `{r}`"),
            Target::Schema(s) => format!("schema `{s}`"),
            Target::RelationParam(r, g) => format!("parameter `{g}` of relation `{r}`"),
            Target::TheoremVar(t, x) => format!("variable `{x}` of theorem `{t}`"),
        }
    }
}

/// Annotations in force for one target system. Anything not listed is implicit.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AnnotationTable {
    pub wf_families: BTreeSet<String>,
    pub explicit_rules: BTreeSet<String>,
    pub explicit_schemas: BTreeSet<String>,
    pub explicit_relation_params: BTreeMap<String, BTreeSet<String>>,
    pub explicit_theorem_vars: BTreeMap<String, BTreeSet<String>>,
}

impl AnnotationTable {
    pub fn is_empty(&self) -> bool {
        *self == AnnotationTable::default()
    }

    pub fn relation_param_explicit(&self, rel: &str, var: &str) -> bool {
        self.explicit_relation_params.get(rel).is_some_and(|s| s.contains(var))
    }

    pub fn theorem_var_explicit(&self, thm: &str, var: &str) -> bool {
        self.explicit_theorem_vars.get(thm).is_some_and(|s| s.contains(var))
    }
}

fn bound_vars(p: &Prp, out: &mut BTreeSet<String>) {
    match p {
        Prp::ForallCtx(x, _, b) | Prp::ForallTm(x, _, b) | Prp::ExistsTm(x, _, b) => {
            out.insert(x.clone());
            bound_vars(b, out);
        }
        Prp::And(a, b) | Prp::Or(a, b) | Prp::Imp(a, b) => {
            bound_vars(a, out);
            bound_vars(b, out);
        }
        _ => {}
    }
}

fn ctx_vars(p: &Prp, out: &mut BTreeSet<String>) {
    match p {
        Prp::ForallCtx(x, _, b) => {
            out.insert(x.clone());
            ctx_vars(b, out);
        }
        Prp::ForallTm(_, _, b) | Prp::ExistsTm(_, _, b) => ctx_vars(b, out),
        Prp::And(a, b) | Prp::Or(a, b) | Prp::Imp(a, b) => {
            ctx_vars(a, out);
            ctx_vars(b, out);
        }
        _ => {}
    }
}

/// Every entity `dest` could denote, in namespace priority order.
pub fn candidates(spec: &OrbiSpec, dest: &Dest) -> Vec<Target> {
    let mut out = Vec::new();
    match dest {
        Dest::Ident(id) => {
            let families = spec.syntax_decls.iter().chain(&spec.judgment_decls);
            if families.clone().any(|d| matches!(d, Decl::Family { name, .. } if name == id)) {
                out.push(Target::Family(id.clone()));
            }
            if spec.rules.iter().any(|d| d.name() == id) {
                out.push(Target::Rule(id.clone()));
            }
            if spec.schemas.iter().any(|s| s.name == *id) {
                out.push(Target::Schema(id.clone()));
            }
            for d in &spec.definitions {
                if d.params.iter().any(|(g, _)| g == id) {
                    out.push(Target::RelationParam(d.name.clone(), id.clone()));
                }
            }
            for t in &spec.theorems {
                let mut vs = BTreeSet::new();
                bound_vars(&t.statement, &mut vs);
                if vs.contains(id) {
                    out.push(Target::TheoremVar(t.name.clone(), id.clone()));
                }
            }
        }
        Dest::Qualified(owner, var) => {
            for d in spec.definitions.iter().filter(|d| d.name == *owner) {
                if d.params.iter().any(|(g, _)| g == var) {
                    out.push(Target::RelationParam(owner.clone(), var.clone()));
                }
            }
            for t in spec.theorems.iter().filter(|t| t.name == *owner) {
                let mut vs = BTreeSet::new();
                bound_vars(&t.statement, &mut vs);
                if vs.contains(var) {
                    out.push(Target::TheoremVar(owner.clone(), var.clone()));
                }
            }
        }
        Dest::Ctx(g) => {
            for d in &spec.definitions {
                if d.params.iter().any(|(p, _)| p == g) {
                    out.push(Target::RelationParam(d.name.clone(), g.clone()));
                }
            }
            for t in &spec.theorems {
                let mut vs = BTreeSet::new();
                ctx_vars(&t.statement, &mut vs);
                if vs.contains(g) {
                    out.push(Target::TheoremVar(t.name.clone(), g.clone()));
                }
            }
        }
    }
    out.dedup();
    out
}

/// Resolves a single directive's destination.
pub fn resolve_dest(spec: &OrbiSpec, d: &Directive) -> Result<Target, Diagnostic> {
    let mut found = candidates(spec, &d.dest);
    let target = match found.len() {
        0 => {
            return Err(Diagnostic::error(
                Code::UnknownDest,
                format!("`{}` names nothing in this specification", d.dest),
            ))
        }
        1 => found.remove(0),
        _ => {
            let list: Vec<String> = found.iter().map(Target::describe).collect();
            return Err(Diagnostic::error(
                Code::AmbiguousDest,
                format!("`{}` could mean {}", d.dest, list.join(" or ")),
            )
            .with_hint("qualify the destination as `owner.var`"));
        }
    };
    match (&d.what, &target) {
        (What::Wf, Target::Family(f)) if !spec.syntax_decls.iter().any(|s| s.name() == f) => Err(Diagnostic::error(
            Code::Directive,
            format!("`wf` needs a syntax family, but `{f}` is a judgment"),
        )),
        (What::Wf, Target::Family(_)) => Ok(target),
        (What::Wf, other) => Err(Diagnostic::error(
            Code::Directive,
            format!("`wf` applies to syntax families, not to {}", other.describe()),
        )),
        (_, Target::Family(f)) => Err(Diagnostic::error(
            Code::Directive,
            format!("`{}` does not apply to type family `{f}`", d.what.as_str()),
        )),
        _ => Ok(target),
    }
}

/// The annotation table for `target`, built from the directives naming it.
pub fn resolve(spec: &OrbiSpec, target: SystemId) -> Result<AnnotationTable, Vec<Diagnostic>> {
    let mut table = AnnotationTable::default();
    let mut errors = Vec::new();
    let mut explicit = BTreeSet::new();
    let mut implicit = BTreeSet::new();
    for (i, d) in spec.directives.iter().enumerate() {
        if !d.systems.contains(&target) {
            continue;
        }
        let span = spec.span(&Item::Directive(i));
        let t = match resolve_dest(spec, d) {
            Ok(t) => t,
            Err(e) => {
                errors.push(e.or_at(span));
                continue;
            }
        };
        match d.what {
            What::Wf => {
                if let Target::Family(f) = t {
                    table.wf_families.insert(f);
                }
            }
            What::Explicit => {
                explicit.insert(t);
            }
            What::Implicit => {
                implicit.insert(t);
            }
        }
    }
    for t in explicit.intersection(&implicit) {
        let first = spec
            .directives
            .iter()
            .position(|d| d.systems.contains(&target) && resolve_dest(spec, d).ok().as_ref() == Some(t));
        errors.push(
            Diagnostic::error(
                Code::Conflict,
                format!("{} is both explicit and implicit for {target}", t.describe()),
            )
            .or_at(first.and_then(|i| spec.span(&Item::Directive(i)))),
        );
    }
    if !errors.is_empty() {
        return Err(errors);
    }
    for t in explicit {
        match t {
            Target::Rule(r) => {
                table.explicit_rules.insert(r);
            }
            Target::Schema(s) => {
                table.explicit_schemas.insert(s);
            }
            Target::RelationParam(r, g) => {
                table.explicit_relation_params.entry(r).or_default().insert(g);
            }
            Target::TheoremVar(t, x) => {
                table.explicit_theorem_vars.entry(t).or_default().insert(x);
            }
            Target::Family(_) => {}
        }
    }
    Ok(table)
}

/// Resolves for every system any directive mentions, collecting all errors once.
pub fn check_directives(spec: &OrbiSpec) -> Vec<Diagnostic> {
    let systems: BTreeSet<SystemId> = spec.directives.iter().flat_map(|d| d.systems.iter().copied()).collect();
    let mut errors: Vec<Diagnostic> = Vec::new();
    for sy in systems {
        if let Err(es) = resolve(spec, sy) {
            for e in es {
                let dup = errors.iter().any(|f| f.span == e.span && f.code == e.code && e.code != Code::Conflict);
                if !dup {
                    errors.push(e);
                }
            }
        }
    }
    errors
}
