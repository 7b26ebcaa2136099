//! Hereditary Harrop clauses for rules and well-formedness predicates.

use std::collections::BTreeSet;

use super::names::{capitalize, Names};
use super::term::{render_term, Dialect};
use crate::diag::{Code, Diagnostic};
use crate::directives::AnnotationTable;
use crate::lf::{Level, Signature};
use crate::syntax::subst::{free_names, open};
use crate::syntax::{Decl, Pretty, Term, Tp};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Goal {
    Atom(String, Vec<Term>),
    Pi(String, Box<Goal>),
    Implies(Box<Goal>, Box<Goal>),
}

impl Goal {
    pub fn atom(f: &str, args: Vec<Term>) -> Goal {
        Goal::Atom(f.to_string(), args)
    }

    fn mentions(&self, x: &str) -> bool {
        match self {
            Goal::Atom(_, args) => args.iter().any(|t| free_names(t).contains(x)),
            Goal::Pi(y, g) => y != x && g.mentions(x),
            Goal::Implies(h, g) => h.mentions(x) || g.mentions(x),
        }
    }

    /// Removes atoms of the predicates in `wf` and the binders left vacuous.
    pub fn erase(&self, wf: &BTreeSet<String>) -> Option<Goal> {
        match self {
            Goal::Atom(f, _) if wf.contains(f) => None,
            Goal::Atom(..) => Some(self.clone()),
            Goal::Pi(x, g) => {
                let g = g.erase(wf)?;
                if g.mentions(x) {
                    Some(Goal::Pi(x.clone(), Box::new(g)))
                } else {
                    Some(g)
                }
            }
            Goal::Implies(h, g) => {
                let g = g.erase(wf)?;
                match h.erase(wf) {
                    Some(h) => Some(Goal::Implies(Box::new(h), Box::new(g))),
                    None => Some(g),
                }
            }
        }
    }

    /// Hypotheses are atoms or clauses; goals nest only `pi` and `=>`.
    pub fn is_hereditary_harrop(&self) -> bool {
        match self {
            Goal::Atom(..) => true,
            Goal::Pi(_, g) => g.is_hereditary_harrop(),
            Goal::Implies(h, g) => h.is_hereditary_harrop() && g.is_hereditary_harrop(),
        }
    }
}

/// `head :- body` universally closed over `vars`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clause {
    pub name: String,
    pub vars: Vec<(String, Tp)>,
    pub head: (String, Vec<Term>),
    pub body: Vec<Goal>,
}

impl Clause {
    pub fn erase(&self, wf: &BTreeSet<String>) -> Clause {
        Clause {
            body: self.body.iter().filter_map(|g| g.erase(wf)).collect(),
            ..self.clone()
        }
    }
}

const PI_NAMES: [&str; 3] = ["x", "y", "z"];

/// The well-formedness goal for `t : a`, if any wf predicate applies.
/// Binders it introduces avoid `scope` but are not reserved.
pub fn wf_goal(t: &Term, a: &Tp, wf: &BTreeSet<String>, scope: &Names) -> Option<Goal> {
    match a {
        Tp::Atom(f, _) => wf.contains(f).then(|| Goal::atom(&scope.wf_name(f), vec![t.clone()])),
        Tp::Arrow(dom, cod) | Tp::Pi(_, dom, cod) => {
            let mut inner = scope.clone();
            inner.reserve_all(free_names(t));
            let y = inner.fresh_from(&PI_NAMES);
            let cod = if matches!(a, Tp::Pi(..)) { open(&**cod, &y) } else { (**cod).clone() };
            let body = wf_goal(&Term::app(t.clone(), Term::free(&y)), &cod, wf, &inner)?;
            let g = match wf_goal(&Term::free(&y), dom, wf, &inner) {
                Some(h) => Goal::Implies(Box::new(h), Box::new(body)),
                None => body,
            };
            Some(Goal::Pi(y, Box::new(g)))
        }
    }
}

fn shape_error(msg: impl Into<String>) -> Diagnostic {
    Diagnostic::error(Code::UnsupportedShape, msg)
}

/// One clause per constructor of each wf family, in signature order.
pub fn gen_wf_predicates(sig: &Signature, wf_families: &BTreeSet<String>, names: &Names) -> Result<Vec<Clause>, Diagnostic> {
    if let Some(f) = wf_families.iter().find(|f| sig.level(f) != Level::Zero) {
        return Err(Diagnostic::error(
            Code::Level,
            format!("`{f}` is not a syntax family and has no well-formedness predicate"),
        ));
    }
    let mut out = Vec::new();
    for e in sig.entries() {
        let Decl::Family { name: family, .. } = &e.decl else { continue };
        if !wf_families.contains(family) {
            continue;
        }
        for (c, tp) in sig.constructors(family) {
            let mut scope = names.clone();
            let mut vars = Vec::new();
            let mut a = tp.clone();
            loop {
                a = match a {
                    Tp::Arrow(dom, cod) => {
                        vars.push((scope.fresh_upper(), *dom));
                        *cod
                    }
                    Tp::Pi(_, dom, cod) => {
                        let v = scope.fresh_upper();
                        let cod = open(&*cod, &v);
                        vars.push((v, *dom));
                        cod
                    }
                    Tp::Atom(..) => break,
                };
            }
            let body = vars
                .iter()
                .filter_map(|(v, a)| wf_goal(&Term::free(v), a, wf_families, &scope))
                .collect();
            let head = Term::apps(Term::cnst(c), vars.iter().map(|(v, _)| Term::free(v)));
            out.push(Clause {
                name: format!("{}_{c}", names.wf_name(family)),
                vars,
                head: (names.wf_name(family), vec![head]),
                body,
            });
        }
    }
    Ok(out)
}

struct RuleCx<'a> {
    sig: &'a Signature,
    /// Describes the translated item in errors, e.g. "rule `de_l`".
    rule: &'a str,
    wf: Option<&'a BTreeSet<String>>,
    names: Names,
}

impl RuleCx<'_> {
    fn premise(&mut self, a: &Tp) -> Result<Goal, Diagnostic> {
        match a {
            Tp::Atom(f, args) => Ok(Goal::atom(f, args.clone())),
            Tp::Arrow(h, g) => Ok(Goal::Implies(Box::new(self.premise(h)?), Box::new(self.premise(g)?))),
            Tp::Pi(hint, dom, cod) => {
                if !self.sig.is_level0_type(dom) {
                    return Err(shape_error(format!(
                        "{} has a premise quantifying over `{}`, which is not a syntax type",
                        self.rule,
                        dom.pretty()
                    )));
                }
                let x = self.names.fresh(hint);
                let g = self.premise(&open(&**cod, &x))?;
                let g = match self.wf.and_then(|wf| wf_goal(&Term::free(&x), dom, wf, &self.names)) {
                    Some(w) => Goal::Implies(Box::new(w), Box::new(g)),
                    None => g,
                };
                Ok(Goal::Pi(x, Box::new(g)))
            }
        }
    }
}

/// The goal for an assumption of type `a`, without wf atoms.
pub fn hypothesis(sig: &Signature, a: &Tp, what: &str, names: &Names) -> Result<Goal, Diagnostic> {
    RuleCx { sig, rule: what, wf: None, names: names.clone() }.premise(a)
}

/// Translates a reconstructed rule. Wf atoms appear iff the rule is explicit.
pub fn translate_rule(sig: &Signature, rule: &Decl, ann: &AnnotationTable, names: &Names) -> Result<Clause, Diagnostic> {
    let Decl::Const { name, tp } = rule else {
        return Err(shape_error(format!("`{}` is a type family, not a rule", rule.name())));
    };
    let explicit = ann.explicit_rules.contains(name);
    let what = format!("rule `{name}`");
    let mut cx = RuleCx {
        sig,
        rule: &what,
        wf: explicit.then_some(&ann.wf_families),
        names: names.clone(),
    };
    let mut vars: Vec<(String, Tp)> = Vec::new();
    let mut body = Vec::new();
    let mut a = tp.clone();
    let head = loop {
        a = match a {
            Tp::Pi(hint, dom, cod) => {
                if !sig.is_level0_type(&dom) {
                    return Err(shape_error(format!(
                        "rule `{name}` quantifies over `{}`, which is not a syntax type",
                        dom.pretty()
                    )));
                }
                let v = cx.names.fresh(&capitalize(&hint));
                let cod = open(&*cod, &v);
                vars.push((v, *dom));
                cod
            }
            Tp::Arrow(h, g) => {
                body.push(cx.premise(&h)?);
                *g
            }
            Tp::Atom(f, args) => break (f, args),
        };
    };
    if explicit {
        for (v, a) in &vars {
            if let Tp::Atom(f, _) = a {
                if ann.wf_families.contains(f) {
                    body.push(Goal::atom(&names.wf_name(f), vec![Term::free(v)]));
                }
            }
        }
    }
    Ok(Clause { name: name.clone(), vars, head, body })
}

pub fn atom_text(f: &str, args: &[Term], d: Dialect) -> String {
    let mut s = f.to_string();
    for a in args {
        s.push(' ');
        s.push_str(&render_term(a, d, true));
    }
    s
}

pub fn goal_ab(g: &Goal) -> String {
    match g {
        Goal::Atom(f, args) => atom_text(f, args, Dialect::Ab),
        Goal::Pi(x, g) => format!("pi {x}\\ {}", goal_ab(g)),
        Goal::Implies(h, g) => {
            let hyp = match **h {
                Goal::Atom(..) => goal_ab(h),
                _ => format!("({})", goal_ab(h)),
            };
            format!("{hyp} => {}", goal_ab(g))
        }
    }
}

/// `head :- g1, g2.` in the Abella dialect.
pub fn render_clause_ab(c: &Clause) -> String {
    let head = atom_text(&c.head.0, &c.head.1, Dialect::Ab);
    if c.body.is_empty() {
        return format!("{head}.");
    }
    let many = c.body.len() > 1;
    let goals: Vec<String> = c
        .body
        .iter()
        .map(|g| match g {
            Goal::Atom(..) => goal_ab(g),
            _ if many => format!("({})", goal_ab(g)),
            _ => goal_ab(g),
        })
        .collect();
    format!("{head} :- {}.", goals.join(", "))
}

pub fn paren(s: String) -> String {
    if s.contains(' ') {
        format!("({s})")
    } else {
        s
    }
}

fn goal_hy(g: &Goal, rule: &str) -> Result<String, Diagnostic> {
    Ok(match g {
        Goal::Atom(f, args) => format!("atom {}", paren(atom_text(f, args, Dialect::Hy))),
        Goal::Pi(x, g) => format!("All (fun {x} => {})", goal_hy(g, rule)?),
        Goal::Implies(h, g) => match &**h {
            Goal::Atom(f, args) => format!("Imp {} {}", paren(atom_text(f, args, Dialect::Hy)), paren(goal_hy(g, rule)?)),
            other => {
                return Err(shape_error(format!(
                    "`{rule}` assumes `{}`; the hy dialect only assumes atoms",
                    goal_ab(other)
                )))
            }
        },
    })
}

/// The Coq type of a level-0 LF type.
pub fn hy_type(a: &Tp) -> String {
    match a {
        Tp::Atom(..) => "uexp".to_string(),
        Tp::Arrow(d, c) | Tp::Pi(_, d, c) => {
            let dom = hy_type(d);
            let dom = if matches!(**d, Tp::Atom(..)) { dom } else { format!("({dom})") };
            format!("{dom} -> {}", hy_type(c))
        }
    }
}

/// `(M N:uexp) (L:uexp -> uexp)`, grouping neighbours of equal type.
pub fn hy_binders(vars: &[(String, String)]) -> String {
    let mut groups: Vec<(Vec<&str>, &str)> = Vec::new();
    for (v, t) in vars {
        match groups.last_mut() {
            Some((vs, gt)) if *gt == t.as_str() => vs.push(v),
            _ => groups.push((vec![v], t)),
        }
    }
    groups
        .iter()
        .map(|(vs, t)| format!("({}:{t})", vs.join(" ")))
        .collect::<Vec<_>>()
        .join(" ")
}

/// One constructor of the hy `prog` relation.
pub fn render_clause_hy(c: &Clause) -> Result<String, Diagnostic> {
    let head = paren(atom_text(&c.head.0, &c.head.1, Dialect::Hy));
    let mut goals: Vec<String> = Vec::new();
    for g in &c.body {
        goals.push(goal_hy(g, &c.name)?);
    }
    let body = match goals.pop() {
        None => "T_".to_string(),
        Some(last) => goals.into_iter().rev().fold(last, |acc, g| format!("Conj {} {}", paren(g), paren(acc))),
    };
    let prog = format!("prog {head} {}", paren(body));
    if c.vars.is_empty() {
        return Ok(format!("| {} : {prog}", c.name));
    }
    let typed: Vec<(String, String)> = c.vars.iter().map(|(v, a)| (v.clone(), hy_type(a))).collect();
    let guards: String = c
        .vars
        .iter()
        .filter(|(_, a)| !matches!(a, Tp::Atom(..)))
        .map(|(v, _)| format!("abstr {v} -> "))
        .collect();
    Ok(format!("| {} : forall {},\n    {guards}{prog}", c.name, hy_binders(&typed)))
}
