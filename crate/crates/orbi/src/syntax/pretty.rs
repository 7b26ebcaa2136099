//! Canonical ORBI concrete syntax with minimal parentheses.
//!
//! Application is left-associative and binds tighter than `->`, which is
//! right-associative; `\x.` and `{x:A}` extend as far right as possible.
//! Binder hints are primed when they would capture or shadow.

use std::collections::BTreeSet;

use super::ast::*;
use super::subst::free_names;

pub trait Pretty {
    fn pretty(&self) -> String;
}

/// Picks a printing name for a binder: the hint, primed until it avoids
/// both the free names of the scope and every enclosing binder name.
fn fresh(hint: &str, free: &BTreeSet<String>, env: &[String]) -> String {
    let mut name = if hint.is_empty() { "x".to_string() } else { hint.to_string() };
    while free.contains(&name) || env.contains(&name) {
        name.push('\'');
    }
    name
}

#[derive(Clone, Copy, PartialEq, PartialOrd)]
enum TermPrec {
    Top,
    Head,
    Arg,
}

fn term(t: &Term, env: &mut Vec<String>, prec: TermPrec, out: &mut String) {
    match t {
        Term::Var(Var::Bound(i)) => match env.len().checked_sub(i + 1) {
            Some(j) => out.push_str(&env[j]),
            None => {
                out.push('#');
                out.push_str(&i.to_string());
            }
        },
        Term::Var(Var::Free(n)) | Term::Const(n) => out.push_str(n),
        Term::Lam(h, body) => {
            let name = fresh(h, &free_names(&**body), env);
            if prec > TermPrec::Top {
                out.push('(');
            }
            out.push('\\');
            out.push_str(&name);
            out.push_str(". ");
            env.push(name);
            term(body, env, TermPrec::Top, out);
            env.pop();
            if prec > TermPrec::Top {
                out.push(')');
            }
        }
        Term::App(f, a) => {
            if prec == TermPrec::Arg {
                out.push('(');
            }
            term(f, env, TermPrec::Head, out);
            out.push(' ');
            term(a, env, TermPrec::Arg, out);
            if prec == TermPrec::Arg {
                out.push(')');
            }
        }
    }
}

fn tp(a: &Tp, env: &mut Vec<String>, in_domain: bool, out: &mut String) {
    match a {
        Tp::Atom(f, args) => {
            out.push_str(f);
            for arg in args {
                out.push(' ');
                term(arg, env, TermPrec::Arg, out);
            }
        }
        Tp::Arrow(d, c) => {
            if in_domain {
                out.push('(');
            }
            tp(d, env, true, out);
            out.push_str(" -> ");
            tp(c, env, false, out);
            if in_domain {
                out.push(')');
            }
        }
        Tp::Pi(h, d, c) => {
            if in_domain {
                out.push('(');
            }
            let name = fresh(h, &free_names(&**c), env);
            out.push('{');
            out.push_str(&name);
            out.push(':');
            tp(d, env, false, out);
            out.push_str("} ");
            env.push(name);
            tp(c, env, false, out);
            env.pop();
            if in_domain {
                out.push(')');
            }
        }
    }
}

fn kind(k: &Kind, env: &mut Vec<String>, out: &mut String) {
    match k {
        Kind::Type => out.push_str("type"),
        Kind::Arrow(d, c) => {
            tp(d, env, true, out);
            out.push_str(" -> ");
            kind(c, env, out);
        }
        Kind::Pi(h, d, c) => {
            let name = fresh(h, &free_names(&**c), env);
            out.push('{');
            out.push_str(&name);
            out.push(':');
            tp(d, env, false, out);
            out.push_str("} ");
            env.push(name);
            kind(c, env, out);
            env.pop();
        }
    }
}

impl Pretty for Term {
    fn pretty(&self) -> String {
        let mut s = String::new();
        term(self, &mut Vec::new(), TermPrec::Top, &mut s);
        s
    }
}

impl Pretty for Tp {
    fn pretty(&self) -> String {
        let mut s = String::new();
        tp(self, &mut Vec::new(), false, &mut s);
        s
    }
}

impl Pretty for Kind {
    fn pretty(&self) -> String {
        let mut s = String::new();
        kind(self, &mut Vec::new(), &mut s);
        s
    }
}

impl Pretty for Decl {
    fn pretty(&self) -> String {
        match self {
            Decl::Const { name, tp } => format!("{name}: {}.", tp.pretty()),
            Decl::Family { name, kind } => format!("{name}: {}.", kind.pretty()),
        }
    }
}

impl Pretty for Block {
    fn pretty(&self) -> String {
        let entries: Vec<String> = self
            .entries
            .iter()
            .map(|(l, a)| format!("{l}:{}", a.pretty()))
            .collect();
        format!("block ({})", entries.join(", "))
    }
}

impl Pretty for Schema {
    fn pretty(&self) -> String {
        let alts: Vec<String> = self.alternatives.iter().map(Pretty::pretty).collect();
        format!("schema {} = {};", self.name, alts.join(" + "))
    }
}

/// The inside of a context pattern, without brackets.
pub fn ctx_inner(c: &CtxPattern) -> String {
    match c {
        CtxPattern::Empty => String::new(),
        CtxPattern::Var(g) => g.clone(),
        CtxPattern::Snoc(p, label, b) => {
            let prefix = ctx_inner(p);
            let sep = if prefix.is_empty() { "" } else { ", " };
            format!("{prefix}{sep}{label}:{}", b.pretty())
        }
    }
}

impl Pretty for CtxPattern {
    fn pretty(&self) -> String {
        format!("[{}]", ctx_inner(self))
    }
}

fn judgment(ctx: &CtxPattern, family: &str, args: &[Term]) -> String {
    let inner = ctx_inner(ctx);
    let mut s = String::from("[");
    if inner.is_empty() {
        s.push(' ');
    } else {
        s.push_str(&inner);
        s.push(' ');
    }
    s.push_str("|- ");
    s.push_str(&Tp::Atom(family.to_string(), args.to_vec()).pretty());
    s.push(']');
    s
}

fn term_at(t: &Term, prec: TermPrec) -> String {
    let mut s = String::new();
    term(t, &mut Vec::new(), prec, &mut s);
    s
}

// Levels: 0 quantifier, 1 implication, 2 disjunction, 3 conjunction, 4 atom.
fn prp(p: &Prp, level: u8, out: &mut String) {
    let paren = |needed: u8, out: &mut String, f: &dyn Fn(&mut String)| {
        if level > needed {
            out.push('(');
            f(out);
            out.push(')');
        } else {
            f(out);
        }
    };
    match p {
        Prp::True => out.push_str("true"),
        Prp::False => out.push_str("false"),
        Prp::RelApp(r, ctxs) => {
            out.push_str(r);
            for c in ctxs {
                out.push(' ');
                out.push_str(&c.pretty());
            }
        }
        Prp::Judgment(c, f, args) => out.push_str(&judgment(c, f, args)),
        Prp::TermEq(a, b) => {
            out.push_str(&term_at(a, TermPrec::Head));
            out.push_str(" = ");
            out.push_str(&term_at(b, TermPrec::Head));
        }
        Prp::And(a, b) => paren(3, out, &|out| {
            prp(a, 4, out);
            out.push_str(" & ");
            prp(b, 3, out);
        }),
        Prp::Or(a, b) => paren(2, out, &|out| {
            prp(a, 3, out);
            out.push_str(" || ");
            prp(b, 2, out);
        }),
        Prp::Imp(a, b) => paren(1, out, &|out| {
            prp(a, 2, out);
            out.push_str(" -> ");
            prp(b, 0, out);
        }),
        Prp::ForallCtx(..) | Prp::ForallTm(..) | Prp::ExistsTm(..) => paren(0, out, &|out| {
            let mut q = p;
            loop {
                match q {
                    Prp::ForallCtx(g, s, body) => {
                        out.push_str(&format!("{{{g}:{s}}}"));
                        q = body;
                    }
                    Prp::ForallTm(x, a, body) => {
                        out.push_str(&format!("{{{x}:{}}}", a.pretty()));
                        q = body;
                    }
                    Prp::ExistsTm(x, a, body) => {
                        out.push_str(&format!("<{x}:{}>", a.pretty()));
                        q = body;
                    }
                    _ => break,
                }
            }
            out.push(' ');
            prp(q, 0, out);
        }),
    }
}

impl Pretty for Prp {
    fn pretty(&self) -> String {
        let mut s = String::new();
        prp(self, 0, &mut s);
        s
    }
}

impl Pretty for Theorem {
    fn pretty(&self) -> String {
        format!("theorem {}: {};", self.name, self.statement.pretty())
    }
}

impl Pretty for InductiveDef {
    fn pretty(&self) -> String {
        let mut s = format!("inductive {} :", self.name);
        for (g, schema) in &self.params {
            s.push_str(&format!(" {{{g}:{schema}}}"));
        }
        s.push_str(" prop =");
        for c in &self.clauses {
            s.push_str(&format!("\n| {}: {}", c.name, c.prp.pretty()));
        }
        s.push(';');
        s
    }
}

impl Pretty for Directive {
    fn pretty(&self) -> String {
        let systems: Vec<&str> = self.systems.iter().map(|s| s.as_str()).collect();
        format!("%% {} [{}] {}", self.what.as_str(), systems.join(","), self.dest)
    }
}

/// Renders the declarations of one section, one item per line.
pub fn section_body(spec: &OrbiSpec, section: Section) -> Vec<String> {
    match section {
        Section::Syntax => spec.syntax_decls.iter().map(Pretty::pretty).collect(),
        Section::Judgments => spec.judgment_decls.iter().map(Pretty::pretty).collect(),
        Section::Rules => spec.rules.iter().map(Pretty::pretty).collect(),
        Section::Schemas => spec.schemas.iter().map(Pretty::pretty).collect(),
        Section::Definitions => spec.definitions.iter().map(Pretty::pretty).collect(),
        Section::Directives => spec.directives.iter().map(Pretty::pretty).collect(),
        Section::Theorems => spec.theorems.iter().map(Pretty::pretty).collect(),
    }
}

/// Renders a run of sections, each headed by its separator line, with one
/// blank line between sections. Empty sections are omitted.
pub fn sections(spec: &OrbiSpec, which: &[Section]) -> String {
    let mut chunks = Vec::new();
    for &sec in which {
        let body = section_body(spec, sec);
        if body.is_empty() {
            continue;
        }
        let mut chunk = format!("%% {}\n", sec.name());
        for item in body {
            chunk.push_str(&item);
            chunk.push('\n');
        }
        chunks.push(chunk);
    }
    chunks.join("\n")
}

impl Pretty for OrbiSpec {
    fn pretty(&self) -> String {
        sections(self, &Section::ALL)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(n: &str) -> Term {
        Term::cnst(n)
    }
    fn tm() -> Tp {
        Tp::atom("tm", vec![])
    }

    #[test]
    fn lam_declaration() {
        let d = Decl::Const { name: "lam".into(), tp: Tp::arrow(Tp::arrow(tm(), tm()), tm()) };
        assert_eq!(d.pretty(), "lam: (tm -> tm) -> tm.");
    }

    #[test]
    fn nested_lambda() {
        let t = Term::lam(
            "x",
            Term::app(c("lam"), Term::lam("y", Term::apps(c("app"), [Term::bound(1), Term::bound(0)]))),
        );
        assert_eq!(t.pretty(), "\\x. lam (\\y. app x y)");
        assert_eq!(Term::app(c("lam"), t).pretty(), "lam (\\x. lam (\\y. app x y))");
    }

    #[test]
    fn bound_variable_uses_hint() {
        let mut s = String::new();
        term(&Term::bound(0), &mut vec!["x".into()], TermPrec::Top, &mut s);
        assert_eq!(s, "x");
    }

    #[test]
    fn capture_is_avoided_by_priming() {
        // lam (\y. app y #0) where y is a free constant
        let t = Term::app(c("lam"), Term::lam("y", Term::apps(c("app"), [c("y"), Term::bound(0)])));
        assert_eq!(t.pretty(), "lam (\\y'. app y y')");
    }

    #[test]
    fn pi_inside_arrow_domain() {
        let prem = Tp::pi(
            "x",
            tm(),
            Tp::arrow(
                Tp::atom("aeq", vec![Term::bound(0), Term::bound(0)]),
                Tp::atom("aeq", vec![Term::app(c("M"), Term::bound(0)), Term::app(c("N"), Term::bound(0))]),
            ),
        );
        let concl = Tp::atom(
            "aeq",
            vec![
                Term::app(c("lam"), Term::lam("x", Term::app(c("M"), Term::bound(0)))),
                Term::app(c("lam"), Term::lam("x", Term::app(c("N"), Term::bound(0)))),
            ],
        );
        assert_eq!(
            Tp::arrow(prem, concl).pretty(),
            "({x:tm} aeq x x -> aeq (M x) (N x)) -> aeq (lam (\\x. M x)) (lam (\\x. N x))"
        );
    }

    #[test]
    fn kinds() {
        let k = Kind::arrow(tm(), Kind::arrow(tm(), Kind::Type));
        assert_eq!(k.pretty(), "tm -> tm -> type");
        let k = Kind::arrow(Tp::arrow(tm(), tm()), Kind::Type);
        assert_eq!(k.pretty(), "(tm -> tm) -> type");
    }

    #[test]
    fn theorem_statement() {
        let t = Theorem {
            name: "reflG".into(),
            statement: Prp::ForallCtx(
                "h".into(),
                "xaG".into(),
                Box::new(Prp::ForallTm(
                    "M".into(),
                    tm(),
                    Box::new(Prp::Judgment(CtxPattern::Var("h".into()), "aeq".into(), vec![c("M"), c("M")])),
                )),
            ),
        };
        assert_eq!(t.pretty(), "theorem reflG: {h:xaG}{M:tm} [h |- aeq M M];");
    }

    #[test]
    fn connective_parentheses() {
        let a = || Prp::True;
        let p = Prp::imp(Prp::imp(a(), a()), Prp::Or(Box::new(Prp::And(Box::new(a()), Box::new(a()))), Box::new(a())));
        assert_eq!(p.pretty(), "(true -> true) -> true & true || true");
        let q = Prp::And(Box::new(Prp::Or(Box::new(a()), Box::new(a()))), Box::new(Prp::False));
        assert_eq!(q.pretty(), "(true || true) & false");
    }
}
