//! Style guidelines L1-L4. Lint never fails; it only warns.

use std::collections::BTreeSet;

use crate::check::Checked;
use crate::diag::{Code, Diagnostic, Span};
use crate::lf::{reconstruct, Signature};
use crate::syntax::subst::{mentions_bound, open};
use crate::syntax::{CtxPattern, Decl, Item, Kind, Pretty, Prp, Tp};

fn is_lower(name: &str) -> bool {
    name.starts_with(|c: char| c.is_lowercase())
}

fn is_upper(name: &str) -> bool {
    name.starts_with(|c: char| c.is_uppercase())
}

fn with_first(name: &str, f: impl Fn(char) -> String) -> String {
    let mut cs = name.chars();
    match cs.next() {
        Some(c) => f(c) + cs.as_str(),
        None => String::new(),
    }
}

struct Linter<'a> {
    sig: &'a Signature,
    out: Vec<Diagnostic>,
}

impl Linter<'_> {
    fn warn(&mut self, code: Code, span: Option<Span>, msg: String, hint: String) {
        self.out.push(Diagnostic::warning(code, msg).or_at(span).with_hint(hint));
    }

    fn vacuous(&mut self, span: Option<Span>, what: &str, x: &str, dom: &Tp, arrow: String) {
        self.warn(
            Code::L3,
            span,
            format!("in {what}, `{{{x}:{}}}` binds `{x}` but it is never used", dom.pretty()),
            format!("write `{arrow}`"),
        );
    }

    /// L2 and L3 on a type; `eigen` also asks for lower case Pi binders (L1).
    fn tp(&mut self, span: Option<Span>, what: &str, a: &Tp, eigen: bool) {
        match a {
            Tp::Atom(..) => {}
            Tp::Arrow(d, c) => {
                self.tp(span, what, d, eigen);
                self.tp(span, what, c, eigen);
            }
            Tp::Pi(x, d, c) => {
                if !mentions_bound(&**c, 0) {
                    let arrow = Tp::Arrow(d.clone(), Box::new(open(&**c, x))).pretty();
                    self.vacuous(span, what, x, d, arrow);
                }
                if !self.sig.is_level0_type(d) {
                    self.warn(
                        Code::L2,
                        span,
                        format!("in {what}, `{x}` ranges over `{}`, which is not a syntax type", d.pretty()),
                        "quantify over syntax types only; pass the assumption with `->`".into(),
                    );
                }
                if eigen && is_upper(x) {
                    self.lower(span, what, "eigenvariable", x);
                }
                self.tp(span, what, d, eigen);
                self.tp(span, what, &open(&**c, x), eigen);
            }
        }
    }

    fn kind(&mut self, span: Option<Span>, what: &str, k: &Kind) {
        match k {
            Kind::Type => {}
            Kind::Arrow(d, c) => {
                self.tp(span, what, d, false);
                self.kind(span, what, c);
            }
            Kind::Pi(x, d, c) => {
                if !mentions_bound(&**c, 0) {
                    let arrow = Kind::Arrow(d.clone(), Box::new(open(&**c, x))).pretty();
                    self.vacuous(span, what, x, d, arrow);
                }
                self.tp(span, what, d, false);
                self.kind(span, what, &open(&**c, x));
            }
        }
    }

    fn lower(&mut self, span: Option<Span>, what: &str, role: &str, x: &str) {
        self.warn(
            Code::L1,
            span,
            format!("in {what}, {role} `{x}` should be lower case"),
            format!("rename it to `{}`", with_first(x, |c| c.to_lowercase().collect())),
        );
    }

    fn rule(&mut self, span: Option<Span>, decl: &Decl) {
        let Decl::Const { name, tp } = decl else { return };
        let what = format!("rule `{name}`");
        if let Ok((_, implicits)) = reconstruct(self.sig, decl) {
            for (m, _) in implicits.iter().filter(|(m, _)| is_lower(m)) {
                self.warn(
                    Code::L1,
                    span,
                    format!("in {what}, schematic variable `{m}` should be upper case"),
                    format!("rename it to `{}`", with_first(m, |c| c.to_uppercase().collect())),
                );
            }
        }
        // Leading binders are schematic, the rest are eigenvariables.
        let mut a = tp.clone();
        while let Tp::Pi(x, d, c) = &a {
            if is_lower(x) {
                self.warn(
                    Code::L1,
                    span,
                    format!("in {what}, schematic variable `{x}` should be upper case"),
                    format!("rename it to `{}`", with_first(x, |c| c.to_uppercase().collect())),
                );
            }
            if !mentions_bound(&**c, 0) {
                let arrow = Tp::Arrow(d.clone(), Box::new(open(&**c, x))).pretty();
                self.vacuous(span, &what, x, d, arrow);
            }
            self.tp(span, &what, d, true);
            a = open(&**c, x);
        }
        self.tp(span, &what, &a, true);
    }

    fn block_labels(&mut self, span: Option<Span>, what: &str, labels: impl IntoIterator<Item = String>) {
        for l in labels.into_iter().filter(|l| is_upper(l)) {
            self.lower(span, what, "block variable", &l);
        }
    }

    fn ctx(&mut self, span: Option<Span>, what: &str, c: &CtxPattern) {
        if let Some(g) = c.head_var().filter(|g| is_upper(g)) {
            self.lower(span, what, "context variable", g);
        }
        let mut seen = BTreeSet::new();
        let mut reported = BTreeSet::new();
        for (label, b) in c.blocks() {
            self.block_labels(span, what, std::iter::once(label.to_string()).chain(b.labels().map(str::to_string)));
            for (_, a) in &b.entries {
                self.tp(span, what, a, true);
            }
            let here: BTreeSet<&str> = std::iter::once(label).chain(b.labels()).collect();
            for x in here {
                if !seen.insert(x) && reported.insert(x) {
                    self.warn(
                        Code::L4,
                        span,
                        format!("in {what}, `{x}` names variables in more than one block"),
                        format!("give the `{x}` of each block a distinct name"),
                    );
                }
            }
        }
    }

    fn prp(&mut self, span: Option<Span>, what: &str, p: &Prp) {
        match p {
            Prp::RelApp(_, cs) => cs.iter().for_each(|c| self.ctx(span, what, c)),
            Prp::Judgment(c, ..) => self.ctx(span, what, c),
            Prp::TermEq(..) | Prp::False | Prp::True => {}
            Prp::And(a, b) | Prp::Or(a, b) | Prp::Imp(a, b) => {
                self.prp(span, what, a);
                self.prp(span, what, b);
            }
            Prp::ForallCtx(g, _, b) => {
                if is_upper(g) {
                    self.lower(span, what, "context variable", g);
                }
                self.prp(span, what, b);
            }
            Prp::ForallTm(_, a, b) | Prp::ExistsTm(_, a, b) => {
                self.tp(span, what, a, false);
                self.prp(span, what, b);
            }
        }
    }
}

/// All guideline violations of a checked specification, in source order.
pub fn lint(checked: &Checked) -> Vec<Diagnostic> {
    let spec = &checked.spec;
    let mut l = Linter { sig: &checked.sig, out: Vec::new() };
    for d in spec.syntax_decls.iter().chain(&spec.judgment_decls) {
        let span = spec.decl_span(d.name());
        let what = format!("`{}`", d.name());
        match d {
            Decl::Const { tp, .. } => l.tp(span, &what, tp, false),
            Decl::Family { kind, .. } => l.kind(span, &what, kind),
        }
    }
    for r in &spec.rules {
        l.rule(spec.decl_span(r.name()), r);
    }
    for s in &spec.schemas {
        let span = spec.span(&Item::Schema(s.name.clone()));
        let what = format!("schema `{}`", s.name);
        for b in &s.alternatives {
            l.block_labels(span, &what, b.labels().map(str::to_string));
            for (_, a) in &b.entries {
                l.tp(span, &what, a, true);
            }
        }
    }
    for d in &spec.definitions {
        let span = spec.span(&Item::Def(d.name.clone()));
        for (g, _) in d.params.iter().filter(|(g, _)| is_upper(g)) {
            l.lower(span, &format!("`{}`", d.name), "context variable", g);
        }
        for c in &d.clauses {
            l.prp(span, &format!("clause `{}`", c.name), &c.prp);
        }
    }
    for t in &spec.theorems {
        l.prp(spec.span(&Item::Theorem(t.name.clone())), &format!("theorem `{}`", t.name), &t.statement);
    }
    l.out
}
