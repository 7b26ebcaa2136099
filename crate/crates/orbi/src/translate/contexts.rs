//! Schemas and context relations as inductive predicates over assumption lists.

use std::collections::BTreeSet;

use super::clause::{atom_text, goal_ab, hy_binders, hy_type, hypothesis, paren, wf_goal, Goal};
use super::names::{capitalize, prp_names, Names};
use super::term::Dialect;
use crate::context::clause_parts;
use crate::diag::{Code, Diagnostic};
use crate::directives::AnnotationTable;
use crate::lf::Signature;
use crate::syntax::{Block, CtxPattern, InductiveDef, Prp, Schema, SystemId, Term, Tp};

/// A context rendered for a target: its tail and the atoms consed onto it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ListCtx {
    /// Target name of the context variable, or `None` for `nil`.
    pub tail: Option<String>,
    /// Atoms, innermost first.
    pub atoms: Vec<String>,
    /// Block labels of syntax type, bound generically.
    pub eigen: Vec<(String, Tp)>,
}

impl ListCtx {
    /// `nil`, `G`, or `(a :: b :: G)`.
    pub fn as_list(&self) -> String {
        let tail = self.tail.clone().unwrap_or_else(|| "nil".to_string());
        if self.atoms.is_empty() {
            return tail;
        }
        format!("({} :: {tail})", self.atoms.join(" :: "))
    }
}

fn render_goal(g: &Goal, d: Dialect, what: &str) -> Result<String, Diagnostic> {
    match (g, d) {
        (Goal::Atom(f, args), _) => Ok(atom_text(f, args, d)),
        (_, Dialect::Ab) => Ok(paren(goal_ab(g))),
        (_, Dialect::Hy) => Err(Diagnostic::error(
            Code::UnsupportedShape,
            format!("{what} assumes `{}`; the hy dialect only stores atoms in contexts", goal_ab(g)),
        )),
    }
}

/// Rendered atoms plus the syntax-typed labels to bind generically.
pub type BlockAtoms = (Vec<String>, Vec<(String, Tp)>);

/// The atoms of one block, in entry order; empty if everything erases.
pub fn block_atoms(
    sig: &Signature,
    block: &Block,
    explicit: bool,
    wf_families: &BTreeSet<String>,
    d: Dialect,
    names: &Names,
    what: &str,
) -> Result<BlockAtoms, Diagnostic> {
    let mut atoms = Vec::new();
    let mut eigen = Vec::new();
    for (label, a) in &block.entries {
        if sig.is_level0_type(a) {
            eigen.push((label.clone(), a.clone()));
            if explicit {
                if let Some(w) = wf_goal(&Term::free(label), a, wf_families, names) {
                    atoms.push(render_goal(&w, d, what)?);
                }
            }
        } else {
            let g = hypothesis(sig, a, what, names)?;
            atoms.push(render_goal(&g, d, what)?);
        }
    }
    Ok((atoms, eigen))
}

/// Renders a context pattern; `tail_of` names context variables.
#[allow(clippy::too_many_arguments)]
pub fn list_ctx(
    sig: &Signature,
    c: &CtxPattern,
    tail_of: &dyn Fn(&str) -> String,
    explicit: bool,
    wf_families: &BTreeSet<String>,
    d: Dialect,
    names: &Names,
    what: &str,
) -> Result<ListCtx, Diagnostic> {
    let mut atoms = Vec::new();
    let mut eigen: Vec<(String, Tp)> = Vec::new();
    for (label, b) in c.blocks() {
        let (mut a, e) = block_atoms(sig, b, explicit, wf_families, d, names, what)?;
        if a.is_empty() {
            return Err(empty_error(&format!("block `{label}` of {what}"), what));
        }
        // Newest block first.
        a.append(&mut atoms);
        atoms = a;
        for (x, t) in e {
            if !eigen.iter().any(|(y, _)| *y == x) {
                eigen.push((x, t));
            }
        }
    }
    Ok(ListCtx { tail: c.head_var().map(tail_of), atoms, eigen })
}

fn empty_error(item: &str, what: &str) -> Diagnostic {
    Diagnostic::error(
        Code::EmptyRendering,
        format!("{item} has no atoms left once typing assumptions are implicit"),
    )
    .with_hint(format!("mark {what} explicit"))
}

fn ctor_base(schema: &str) -> &str {
    match schema.strip_suffix('G') {
        Some(b) if !b.is_empty() => b,
        _ => schema,
    }
}

fn list_var(names: &mut Names) -> String {
    let candidates: Vec<String> = ('A'..='Z').map(|c| format!("{c}s")).collect();
    let refs: Vec<&str> = candidates.iter().map(String::as_str).collect();
    names.fresh_from(&refs)
}

fn hy_guards(eigen: &[(String, Tp)]) -> String {
    eigen
        .iter()
        .map(|(x, a)| match a {
            Tp::Atom(..) => format!("proper {x} -> "),
            _ => format!("abstr {x} -> "),
        })
        .collect()
}

fn hy_forall(list_vars: &[String], eigen: &[(String, Tp)]) -> String {
    let mut bs: Vec<(String, String)> = list_vars.iter().map(|v| (v.clone(), "list atm".to_string())).collect();
    bs.extend(eigen.iter().map(|(x, a)| (x.clone(), hy_type(a))));
    hy_binders(&bs)
}

/// A unary predicate over assumption lists with one cons clause per alternative.
pub fn translate_schema(
    sig: &Signature,
    s: &Schema,
    target: SystemId,
    ann: &AnnotationTable,
    names: &Names,
) -> Result<String, Diagnostic> {
    let explicit = ann.explicit_schemas.contains(&s.name);
    let d = if target == SystemId::Hy { Dialect::Hy } else { Dialect::Ab };
    let what = format!("schema `{}`", s.name);
    let mut alts = Vec::new();
    for b in &s.alternatives {
        let (atoms, eigen) = block_atoms(sig, b, explicit, &ann.wf_families, d, names, &what)?;
        if atoms.is_empty() {
            return Err(empty_error(&what, &format!("`{}`", s.name))
                .with_hint(format!("mark it explicit with `%% explicit [{target}] in {}`", s.name)));
        }
        alts.push((atoms, eigen));
    }
    let name = &s.name;
    let mut scope = names.clone();
    for b in &s.alternatives {
        scope.reserve_all(b.labels().map(str::to_string));
    }
    if target == SystemId::Hy {
        let gamma = scope.fresh("Gamma");
        let base = ctor_base(name);
        let mut out = format!("Inductive {name} : list atm -> Prop :=\n| nil_{base} : {name} nil");
        let many = alts.len() > 1;
        for (i, (atoms, eigen)) in alts.iter().enumerate() {
            let ctor = if many { format!("cns_{base}_{}", i + 1) } else { format!("cns_{base}") };
            out.push_str(&format!(
                "\n| {ctor} : forall {},\n    {}{name} {gamma} -> {name} ({} :: {gamma})",
                hy_forall(std::slice::from_ref(&gamma), eigen),
                hy_guards(eigen),
                atoms.join(" :: ")
            ));
        }
        out.push('.');
        return Ok(out);
    }
    let xs = list_var(&mut scope);
    let mut clauses = vec![format!("{name} nil")];
    for (atoms, eigen) in &alts {
        let nabla = nabla_prefix(eigen);
        clauses.push(format!("{nabla}{name} ({} :: {xs}) := {name} {xs}", atoms.join(" :: ")));
    }
    Ok(define(name, &["olist"], &clauses))
}

fn nabla_prefix(eigen: &[(String, Tp)]) -> String {
    if eigen.is_empty() {
        return String::new();
    }
    let xs: Vec<&str> = eigen.iter().map(|(x, _)| x.as_str()).collect();
    format!("nabla {}, ", xs.join(" "))
}

fn define(name: &str, arg_types: &[&str], clauses: &[String]) -> String {
    let mut out = format!("Define {name} : {} -> prop by", arg_types.join(" -> "));
    for (i, c) in clauses.iter().enumerate() {
        let end = if i + 1 == clauses.len() { '.' } else { ';' };
        out.push_str(&format!("\n  {c}{end}"));
    }
    out
}

/// An n-ary predicate over n assumption lists, one clause per ORBI clause.
pub fn translate_relation(
    sig: &Signature,
    def: &InductiveDef,
    target: SystemId,
    ann: &AnnotationTable,
    names: &Names,
) -> Result<String, Diagnostic> {
    let d = if target == SystemId::Hy { Dialect::Hy } else { Dialect::Ab };
    let mut rendered = Vec::new();
    for clause in &def.clauses {
        let (premises, conclusion) = clause_parts(&clause.prp);
        let Prp::RelApp(_, args) = conclusion else {
            return Err(Diagnostic::error(
                Code::UnsupportedShape,
                format!("clause `{}` does not conclude `{}`", clause.name, def.name),
            ));
        };
        let mut scope = names.clone();
        let mut local = BTreeSet::new();
        prp_names(&clause.prp, &mut local);
        scope.reserve_all(local);
        let mut tails: Vec<(String, String)> = Vec::new();
        for c in premises.iter().filter_map(|p| match p {
            Prp::RelApp(_, cs) => Some(cs),
            _ => None,
        }).flatten().chain(args) {
            if let Some(g) = c.head_var() {
                if !tails.iter().any(|(h, _)| h == g) {
                    tails.push((g.to_string(), scope.fresh(&capitalize(g))));
                }
            }
        }
        let tail_of = |g: &str| tails.iter().find(|(h, _)| h == g).map(|(_, t)| t.clone()).unwrap_or_default();
        let mut eigen: Vec<(String, Tp)> = Vec::new();
        let mut head_args = Vec::new();
        for (c, (param, _)) in args.iter().zip(&def.params) {
            let explicit = ann.relation_param_explicit(&def.name, param);
            let what = format!("`{}.{param}`", def.name);
            let ctx = list_ctx(sig, c, &tail_of, explicit, &ann.wf_families, d, &scope, &what)
                .map_err(|e| Diagnostic { message: format!("in clause `{}`: {}", clause.name, e.message), ..e })?;
            for (x, t) in &ctx.eigen {
                if !eigen.iter().any(|(y, _)| y == x) {
                    eigen.push((x.clone(), t.clone()));
                }
            }
            head_args.push(ctx.as_list());
        }
        let head = format!("{} {}", def.name, head_args.join(" "));
        let body: Vec<String> = premises
            .iter()
            .filter_map(|p| match p {
                Prp::RelApp(r, cs) => {
                    let vs: Vec<String> = cs.iter().map(|c| c.head_var().map(&tail_of).unwrap_or_else(|| "nil".into())).collect();
                    Some(format!("{r} {}", vs.join(" ")))
                }
                _ => None,
            })
            .collect();
        rendered.push((clause.name.clone(), tails.iter().map(|(_, t)| t.clone()).collect::<Vec<_>>(), eigen, head, body));
    }
    let name = &def.name;
    if target == SystemId::Hy {
        let sorts = vec!["list atm"; def.params.len()].join(" -> ");
        let mut out = format!("Inductive {name} : {sorts} -> Prop :=");
        for (ctor, lists, eigen, head, body) in &rendered {
            if lists.is_empty() && eigen.is_empty() && body.is_empty() {
                out.push_str(&format!("\n| {ctor} : {head}"));
                continue;
            }
            let prems: String = body.iter().map(|b| format!("{b} -> ")).collect();
            out.push_str(&format!(
                "\n| {ctor} : forall {},\n    {}{prems}{head}",
                hy_forall(lists, eigen),
                hy_guards(eigen)
            ));
        }
        out.push('.');
        return Ok(out);
    }
    let clauses: Vec<String> = rendered
        .iter()
        .map(|(_, _, eigen, head, body)| {
            let nabla = nabla_prefix(eigen);
            if body.is_empty() {
                format!("{nabla}{head}")
            } else {
                format!("{nabla}{head} := {}", body.join(" /\\ "))
            }
        })
        .collect();
    let sorts = vec!["olist"; def.params.len()];
    Ok(define(name, &sorts, &clauses))
}
