//! Schemas, context patterns, context relations and theorem scoping.

use std::collections::{BTreeMap, BTreeSet};

use crate::diag::{Code, Diagnostic};
use crate::lf::{canonical_tp, check_tp, Level, Signature, TypingCtx};
use crate::syntax::subst::{free_names, rename};
use crate::syntax::{Block, CtxPattern, InductiveDef, Item, OrbiSpec, Pretty, Prp, Schema, Term, Theorem, Tp};

/// Checked schemas in declaration order.
#[derive(Debug, Clone, Default)]
pub struct SchemaTable {
    schemas: Vec<Schema>,
}

impl SchemaTable {
    pub fn get(&self, name: &str) -> Option<&Schema> {
        self.schemas.iter().find(|s| s.name == name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Schema> {
        self.schemas.iter()
    }

    pub fn insert(&mut self, s: Schema) {
        self.schemas.retain(|t| t.name != s.name);
        self.schemas.push(s);
    }
}

/// Checked context relations in declaration order.
#[derive(Debug, Clone, Default)]
pub struct RelationTable {
    defs: Vec<InductiveDef>,
}

impl RelationTable {
    pub fn get(&self, name: &str) -> Option<&InductiveDef> {
        self.defs.iter().find(|d| d.name == name)
    }

    pub fn iter(&self) -> impl Iterator<Item = &InductiveDef> {
        self.defs.iter()
    }

    pub fn insert(&mut self, d: InductiveDef) {
        self.defs.retain(|e| e.name != d.name);
        self.defs.push(d);
    }
}

/// Schema of each context variable in scope.
pub type CtxVars = BTreeMap<String, String>;

/// Checks a block's entries left to right, each under the earlier labels.
pub fn check_block(sig: &Signature, block: &Block) -> Result<(), Diagnostic> {
    let mut ctx = TypingCtx::new();
    let mut seen = BTreeSet::new();
    for (label, a) in &block.entries {
        if !seen.insert(label.as_str()) {
            return Err(Diagnostic::error(Code::Duplicate, format!("label `{label}` occurs twice in one block")));
        }
        if sig.contains(label) {
            return Err(Diagnostic::error(
                Code::Duplicate,
                format!("block label `{label}` shadows a declared constant"),
            ));
        }
        check_tp(sig, &ctx, a).map_err(|e| Diagnostic {
            message: format!("in block entry `{label}: {}`: {}", a.pretty(), e.message),
            ..e
        })?;
        ctx.push(label.clone(), a.clone());
    }
    Ok(())
}

pub fn check_schema(sig: &Signature, s: &Schema) -> Result<Schema, Diagnostic> {
    if sig.contains(&s.name) {
        return Err(Diagnostic::error(
            Code::Duplicate,
            format!("schema `{}` has the name of a declared constant", s.name),
        ));
    }
    for b in &s.alternatives {
        check_block(sig, b)?;
    }
    Ok(s.clone())
}

// Labels become positional placeholders that cannot clash with identifiers.
fn positional(block: &Block) -> Vec<Tp> {
    let labels: Vec<&str> = block.labels().collect();
    block
        .entries
        .iter()
        .map(|(_, a)| {
            let a = labels
                .iter()
                .enumerate()
                .fold(a.clone(), |a, (i, l)| rename(&a, l, &format!("#{i}")));
            canonical_tp(&a)
        })
        .collect()
}

/// True if `b` is `alt` up to renaming labels positionally.
pub fn block_matches(b: &Block, alt: &Block) -> bool {
    b.entries.len() == alt.entries.len() && positional(b) == positional(alt)
}

/// Index of the first alternative of `schema` that `b` instantiates.
pub fn matching_alternative(schema: &Schema, b: &Block) -> Option<usize> {
    schema.alternatives.iter().position(|alt| block_matches(b, alt))
}

pub fn check_ctx_pattern(
    sig: &Signature,
    schemas: &SchemaTable,
    expected: &str,
    c: &CtxPattern,
    vars: &CtxVars,
) -> Result<(), Diagnostic> {
    let schema = schemas
        .get(expected)
        .ok_or_else(|| Diagnostic::error(Code::UnknownSchema, format!("unknown schema `{expected}`")))?;
    if let Some(g) = c.head_var() {
        match vars.get(g) {
            None => {
                return Err(Diagnostic::error(
                    Code::UnknownCtxVar,
                    format!("context variable `{g}` is not bound"),
                ))
            }
            Some(s) if s != expected => {
                return Err(Diagnostic::error(
                    Code::SchemaMismatch,
                    format!("context variable `{g}` has schema `{s}` but `{expected}` is expected"),
                ))
            }
            Some(_) => {}
        }
    }
    for (label, b) in c.blocks() {
        check_block(sig, b)?;
        if matching_alternative(schema, b).is_none() {
            return Err(Diagnostic::error(
                Code::SchemaMismatch,
                format!("`{label}:{}` is not an instance of any alternative of `{expected}`", b.pretty()),
            ));
        }
    }
    Ok(())
}

/// Splits `P1 -> ... -> Pn -> C` into premises and conclusion.
pub fn clause_parts(p: &Prp) -> (Vec<&Prp>, &Prp) {
    let mut premises = Vec::new();
    let mut p = p;
    while let Prp::Imp(a, b) = p {
        premises.push(&**a);
        p = b;
    }
    (premises, p)
}

fn shape_error(msg: impl Into<String>) -> Diagnostic {
    Diagnostic::error(Code::UnsupportedShape, msg)
}

pub fn check_inductive_def(
    sig: &Signature,
    schemas: &SchemaTable,
    relations: &RelationTable,
    d: &InductiveDef,
) -> Result<InductiveDef, Diagnostic> {
    for (_, s) in &d.params {
        if schemas.get(s).is_none() {
            return Err(Diagnostic::error(
                Code::UnknownSchema,
                format!("relation `{}` ranges over unknown schema `{s}`", d.name),
            ));
        }
    }
    let params_of = |r: &str| -> Option<Vec<String>> {
        if r == d.name {
            Some(d.params.iter().map(|(_, s)| s.clone()).collect())
        } else {
            relations.get(r).map(|e| e.params.iter().map(|(_, s)| s.clone()).collect())
        }
    };
    for clause in &d.clauses {
        let at = |e: Diagnostic| Diagnostic { message: format!("in clause `{}`: {}", clause.name, e.message), ..e };
        let (premises, conclusion) = clause_parts(&clause.prp);
        let mut apps = Vec::new();
        for p in &premises {
            let Prp::RelApp(r, args) = p else {
                return Err(at(shape_error(format!("premise `{}` is not a relation application", p.pretty()))));
            };
            if let Some(bad) = args.iter().find(|a| !matches!(a, CtxPattern::Var(_))) {
                return Err(at(shape_error(format!(
                    "premise arguments must be context variables, found `{}`",
                    bad.pretty()
                ))));
            }
            apps.push((r, args));
        }
        match conclusion {
            Prp::RelApp(r, args) if *r == d.name => apps.push((r, args)),
            other => {
                return Err(at(shape_error(format!(
                    "conclusion `{}` must apply `{}`",
                    other.pretty(),
                    d.name
                ))))
            }
        }
        let mut vars = CtxVars::new();
        for (r, args) in &apps {
            let params = params_of(r)
                .ok_or_else(|| at(Diagnostic::error(Code::UnknownRelation, format!("unknown relation `{r}`"))))?;
            if params.len() != args.len() {
                return Err(at(Diagnostic::error(
                    Code::Arity,
                    format!("`{r}` takes {} context arguments, found {}", params.len(), args.len()),
                )));
            }
            for (a, s) in args.iter().zip(&params) {
                if let Some(g) = a.head_var() {
                    if let Some(prev) = vars.insert(g.to_string(), s.clone()) {
                        if prev != *s {
                            return Err(at(Diagnostic::error(
                                Code::SchemaMismatch,
                                format!("context variable `{g}` is used at schemas `{prev}` and `{s}`"),
                            )));
                        }
                    }
                }
            }
        }
        for (r, args) in &apps {
            for (a, s) in args.iter().zip(params_of(r).unwrap_or_default()) {
                check_ctx_pattern(sig, schemas, &s, a, &vars).map_err(at)?;
            }
        }
    }
    Ok(d.clone())
}

struct Scope<'a> {
    sig: &'a Signature,
    schemas: &'a SchemaTable,
    relations: &'a RelationTable,
    ctx_vars: CtxVars,
    terms: TypingCtx,
    errors: Vec<Diagnostic>,
}

impl Scope<'_> {
    fn check_names(&mut self, t: &Term, extra: &BTreeSet<String>) {
        for n in free_names(t) {
            if !self.sig.contains(&n) && self.terms.lookup(&n).is_none() && !extra.contains(&n) {
                self.errors.push(Diagnostic::error(Code::Unbound, format!("unbound variable `{n}`")));
            }
        }
    }

    fn ctx_head(&mut self, c: &CtxPattern) {
        if let Some(g) = c.head_var() {
            if !self.ctx_vars.contains_key(g) {
                self.errors.push(Diagnostic::error(
                    Code::UnknownCtxVar,
                    format!("context variable `{g}` is not bound"),
                ));
            }
        }
    }

    fn prp(&mut self, p: &Prp) {
        match p {
            Prp::True | Prp::False => {}
            Prp::And(a, b) | Prp::Or(a, b) | Prp::Imp(a, b) => {
                self.prp(a);
                self.prp(b);
            }
            Prp::TermEq(a, b) => {
                self.check_names(a, &BTreeSet::new());
                self.check_names(b, &BTreeSet::new());
            }
            Prp::ForallCtx(g, s, body) => {
                if self.schemas.get(s).is_none() {
                    self.errors.push(Diagnostic::error(
                        Code::UnknownSchema,
                        format!("context variable `{g}` ranges over unknown schema `{s}`"),
                    ));
                }
                let prev = self.ctx_vars.insert(g.clone(), s.clone());
                self.prp(body);
                match prev {
                    Some(s) => self.ctx_vars.insert(g.clone(), s),
                    None => self.ctx_vars.remove(g),
                };
            }
            Prp::ForallTm(x, a, body) | Prp::ExistsTm(x, a, body) => {
                match check_tp(self.sig, &self.terms, a) {
                    Err(e) => self.errors.push(e),
                    Ok(()) if !self.sig.is_level0_type(a) => self.errors.push(Diagnostic::error(
                        Code::Level,
                        format!("`{x}` ranges over `{}`, which is not a syntax type", a.pretty()),
                    )),
                    Ok(()) => {}
                }
                self.terms.push(x.clone(), a.clone());
                self.prp(body);
                self.terms.pop();
            }
            Prp::Judgment(c, f, args) => {
                self.ctx_head(c);
                let mut labels = BTreeSet::new();
                for (_, b) in c.blocks() {
                    for (l, a) in &b.entries {
                        for n in free_names(a) {
                            if !self.sig.contains(&n) && self.terms.lookup(&n).is_none() && !labels.contains(&n) {
                                self.errors.push(Diagnostic::error(Code::Unbound, format!("unbound variable `{n}`")));
                            }
                        }
                        labels.insert(l.clone());
                    }
                }
                match self.sig.family_kind(f) {
                    None => self.errors.push(Diagnostic::error(Code::Unbound, format!("unknown judgment `{f}`"))),
                    Some(_) if self.sig.level(f) != Level::One => self.errors.push(Diagnostic::error(
                        Code::Level,
                        format!("`{f}` is a syntax type, not a judgment"),
                    )),
                    Some(k) => {
                        let arity = k.arity();
                        if arity != args.len() {
                            self.errors.push(Diagnostic::error(
                                Code::Arity,
                                format!("`{f}` takes {arity} arguments, found {}", args.len()),
                            ));
                        }
                    }
                }
                for t in args {
                    self.check_names(t, &labels);
                }
            }
            Prp::RelApp(r, pats) => {
                let Some(def) = self.relations.get(r) else {
                    self.errors.push(Diagnostic::error(Code::UnknownRelation, format!("unknown relation `{r}`")));
                    return;
                };
                if def.params.len() != pats.len() {
                    self.errors.push(Diagnostic::error(
                        Code::Arity,
                        format!("`{r}` takes {} context arguments, found {}", def.params.len(), pats.len()),
                    ));
                    return;
                }
                for (c, (_, s)) in pats.iter().zip(&def.params) {
                    if let Err(e) = check_ctx_pattern(self.sig, self.schemas, s, c, &self.ctx_vars) {
                        self.errors.push(e);
                    }
                }
            }
        }
    }
}

/// Scope and arity checking only; judgments are not given a meaning.
pub fn scope_check_theorem(
    sig: &Signature,
    schemas: &SchemaTable,
    relations: &RelationTable,
    t: &Theorem,
) -> Result<Theorem, Vec<Diagnostic>> {
    let mut scope = Scope {
        sig,
        schemas,
        relations,
        ctx_vars: CtxVars::new(),
        terms: TypingCtx::new(),
        errors: Vec::new(),
    };
    scope.prp(&t.statement);
    if scope.errors.is_empty() {
        Ok(t.clone())
    } else {
        Err(scope
            .errors
            .into_iter()
            .map(|e| Diagnostic { message: format!("in theorem `{}`: {}", t.name, e.message), ..e })
            .collect())
    }
}

/// Checked schemas, relations and theorems of a specification.
#[derive(Debug, Clone, Default)]
pub struct ContextTables {
    pub schemas: SchemaTable,
    pub relations: RelationTable,
}

/// Runs every context-level check over `spec`, collecting all errors.
pub fn check_contexts(sig: &Signature, spec: &OrbiSpec) -> (ContextTables, Vec<Diagnostic>) {
    let mut tables = ContextTables::default();
    let mut errors = Vec::new();
    for s in &spec.schemas {
        let span = spec.span(&Item::Schema(s.name.clone()));
        if tables.schemas.get(&s.name).is_some() {
            errors.push(Diagnostic::error(Code::Duplicate, format!("schema `{}` is declared twice", s.name)).or_at(span));
            continue;
        }
        match check_schema(sig, s) {
            Ok(s) => tables.schemas.insert(s),
            Err(e) => errors.push(e.or_at(span)),
        }
    }
    for d in &spec.definitions {
        let span = spec.span(&Item::Def(d.name.clone()));
        if tables.relations.get(&d.name).is_some() || tables.schemas.get(&d.name).is_some() {
            errors.push(Diagnostic::error(Code::Duplicate, format!("`{}` is declared twice", d.name)).or_at(span));
            continue;
        }
        match check_inductive_def(sig, &tables.schemas, &tables.relations, d) {
            Ok(d) => tables.relations.insert(d),
            Err(e) => errors.push(e.or_at(span)),
        }
    }
    let mut seen = BTreeSet::new();
    for t in &spec.theorems {
        let span = spec.span(&Item::Theorem(t.name.clone()));
        if !seen.insert(t.name.as_str()) {
            errors.push(Diagnostic::error(Code::Duplicate, format!("theorem `{}` is declared twice", t.name)).or_at(span));
            continue;
        }
        if let Err(es) = scope_check_theorem(sig, &tables.schemas, &tables.relations, t) {
            errors.extend(es.into_iter().map(|e| e.or_at(span)));
        }
    }
    (tables, errors)
}
