//! Theorem statements in the target dialects.

use std::collections::{BTreeMap, BTreeSet};

use super::clause::{atom_text, goal_ab, wf_goal, Goal};
use super::contexts::list_ctx;
use super::names::{capitalize, prp_names, Names};
use super::term::{render_term, Dialect};
use crate::diag::{Code, Diagnostic};
use crate::directives::AnnotationTable;
use crate::context::RelationTable;
use crate::lf::Signature;
use crate::syntax::subst::free_names;
use crate::syntax::{CtxPattern, Pretty, Prp, SystemId, Term, Theorem, Tp};

/// Context variables whose judgments mention `var`, in order of appearance.
fn contexts_using(p: &Prp, var: &str, out: &mut Vec<String>) {
    match p {
        Prp::Judgment(c, _, args) => {
            if let Some(g) = c.head_var() {
                if args.iter().any(|t| free_names(t).contains(var)) && !out.iter().any(|h| h == g) {
                    out.push(g.to_string());
                }
            }
        }
        Prp::And(a, b) | Prp::Or(a, b) | Prp::Imp(a, b) => {
            contexts_using(a, var, out);
            contexts_using(b, var, out);
        }
        Prp::ForallCtx(_, _, b) | Prp::ForallTm(_, _, b) | Prp::ExistsTm(_, _, b) => contexts_using(b, var, out),
        _ => {}
    }
}

/// Chooses the context of each explicit term variable of `t`.
pub fn explicit_contexts(
    t: &Theorem,
    ann: &AnnotationTable,
    warnings: &mut Vec<Diagnostic>,
) -> Result<BTreeMap<String, String>, Diagnostic> {
    let mut chosen = BTreeMap::new();
    let mut in_scope: Vec<String> = Vec::new();
    fn walk(
        t: &Theorem,
        p: &Prp,
        ann: &AnnotationTable,
        in_scope: &mut Vec<String>,
        chosen: &mut BTreeMap<String, String>,
        warnings: &mut Vec<Diagnostic>,
    ) -> Result<(), Diagnostic> {
        match p {
            Prp::ForallCtx(g, _, b) => {
                in_scope.push(g.clone());
                walk(t, b, ann, in_scope, chosen, warnings)?;
                in_scope.pop();
            }
            Prp::ForallTm(x, _, b) | Prp::ExistsTm(x, _, b) => {
                if ann.theorem_var_explicit(&t.name, x) {
                    let mut used = Vec::new();
                    contexts_using(b, x, &mut used);
                    used.retain(|g| in_scope.contains(g));
                    let g = match (used.as_slice(), in_scope.first()) {
                        ([only], _) => only.clone(),
                        (_, None) => {
                            return Err(Diagnostic::error(
                                Code::NoCtxInScope,
                                format!("`{x}` in theorem `{}` is explicit but no context is quantified before it", t.name),
                            ))
                        }
                        (_, Some(first)) => {
                            if used.len() > 1 || in_scope.len() > 1 {
                                warnings.push(Diagnostic::warning(
                                    Code::NoCtxInScope,
                                    format!(
                                        "`{x}` in theorem `{}` has no single context; using `{first}`",
                                        t.name
                                    ),
                                ));
                            }
                            first.clone()
                        }
                    };
                    chosen.insert(x.clone(), g);
                }
                walk(t, b, ann, in_scope, chosen, warnings)?;
            }
            Prp::And(a, b) | Prp::Or(a, b) | Prp::Imp(a, b) => {
                walk(t, a, ann, in_scope, chosen, warnings)?;
                walk(t, b, ann, in_scope, chosen, warnings)?;
            }
            _ => {}
        }
        Ok(())
    }
    walk(t, &t.statement, ann, &mut in_scope, &mut chosen, warnings)?;
    Ok(chosen)
}

struct Lp<'a> {
    sig: &'a Signature,
    relations: &'a RelationTable,
    ann: &'a AnnotationTable,
    d: Dialect,
    names: Names,
    tails: BTreeMap<String, String>,
    schema_of: BTreeMap<String, String>,
    explicit: BTreeMap<String, String>,
}

// Levels: 0 quantifier, 1 implication, 2 disjunction, 3 conjunction, 4 atom.
fn wrap(s: String, own: u8, level: u8) -> String {
    if level > own {
        format!("({s})")
    } else {
        s
    }
}

impl Lp<'_> {
    fn tail(&self, g: &str) -> String {
        self.tails.get(g).cloned().unwrap_or_else(|| capitalize(g))
    }

    fn ctx_explicit(&self, c: &CtxPattern) -> bool {
        c.head_var()
            .and_then(|g| self.schema_of.get(g))
            .is_some_and(|s| self.ann.explicit_schemas.contains(s))
    }

    fn sequent(&self, ctx: &CtxPattern, goal: String) -> Result<String, Diagnostic> {
        let tail = |g: &str| self.tail(g);
        let lc = list_ctx(
            self.sig,
            ctx,
            &tail,
            self.ctx_explicit(ctx),
            &self.ann.wf_families,
            self.d,
            &self.names,
            "the context",
        )?;
        let mut hyps: Vec<String> = lc.tail.into_iter().collect();
        hyps.extend(lc.atoms.into_iter().rev());
        let seq = if hyps.is_empty() {
            format!("{{{goal}}}")
        } else {
            format!("{{{} |- {goal}}}", hyps.join(", "))
        };
        Ok(nabla(&lc.eigen, seq))
    }

    fn wf_antecedent(&self, x: &str, a: &Tp) -> Result<Option<String>, Diagnostic> {
        let Some(g) = self.explicit.get(x) else { return Ok(None) };
        let Some(w) = wf_goal(&Term::cnst(x), a, &self.ann.wf_families, &self.names) else {
            return Ok(None);
        };
        let goal = match &w {
            Goal::Atom(f, args) => atom_text(f, args, self.d),
            _ => goal_ab(&w),
        };
        self.sequent(&CtxPattern::Var(g.clone()), goal).map(Some)
    }

    fn prp(&self, p: &Prp, level: u8) -> Result<String, Diagnostic> {
        Ok(match p {
            Prp::True => "true".into(),
            Prp::False => "false".into(),
            Prp::TermEq(a, b) => wrap(
                format!("{} = {}", render_term(a, self.d, false), render_term(b, self.d, false)),
                3,
                level,
            ),
            Prp::Judgment(c, f, args) => self.sequent(c, atom_text(f, args, self.d))?,
            Prp::RelApp(r, cs) => {
                let params: Vec<&str> = self
                    .relations
                    .get(r)
                    .map(|d| d.params.iter().map(|(g, _)| g.as_str()).collect())
                    .unwrap_or_default();
                let mut eigen = Vec::new();
                let mut args = Vec::new();
                for (i, c) in cs.iter().enumerate() {
                    let tail = |g: &str| self.tail(g);
                    let explicit = params.get(i).is_some_and(|p| self.ann.relation_param_explicit(r, p));
                    let lc = list_ctx(self.sig, c, &tail, explicit, &self.ann.wf_families, self.d, &self.names, r)?;
                    for e in lc.eigen.iter() {
                        if !eigen.iter().any(|(y, _): &(String, Tp)| *y == e.0) {
                            eigen.push(e.clone());
                        }
                    }
                    args.push(lc.as_list());
                }
                let app = if args.is_empty() { r.clone() } else { format!("{r} {}", args.join(" ")) };
                if eigen.is_empty() {
                    app
                } else {
                    wrap(nabla(&eigen, app), 0, level)
                }
            }
            Prp::And(a, b) => wrap(format!("{} /\\ {}", self.prp(a, 4)?, self.prp(b, 3)?), 3, level),
            Prp::Or(a, b) => wrap(format!("{} \\/ {}", self.prp(a, 3)?, self.prp(b, 2)?), 2, level),
            Prp::Imp(a, b) => wrap(format!("{} -> {}", self.prp(a, 2)?, self.prp(b, 0)?), 1, level),
            Prp::ExistsTm(x, a, b) => {
                let body = match self.wf_antecedent(x, a)? {
                    Some(w) => format!("{w} /\\ {}", self.prp(b, 3)?),
                    None => self.prp(b, 0)?,
                };
                wrap(format!("exists {x}, {body}"), 0, level)
            }
            Prp::ForallCtx(..) | Prp::ForallTm(..) => {
                let mut vars = Vec::new();
                let mut antecedents = Vec::new();
                let mut q = p;
                loop {
                    match q {
                        Prp::ForallCtx(g, s, b) => {
                            let v = self.tail(g);
                            antecedents.push(format!("{s} {v}"));
                            vars.push(v);
                            q = b;
                        }
                        Prp::ForallTm(x, a, b) => {
                            vars.push(x.clone());
                            if let Some(w) = self.wf_antecedent(x, a)? {
                                antecedents.push(w);
                            }
                            q = b;
                        }
                        _ => break,
                    }
                }
                let mut body = self.prp(q, if antecedents.is_empty() { 0 } else { 1 })?;
                for a in antecedents.iter().rev() {
                    body = format!("{a} -> {body}");
                }
                wrap(format!("forall {}, {body}", vars.join(" ")), 0, level)
            }
        })
    }
}

fn nabla(eigen: &[(String, Tp)], s: String) -> String {
    if eigen.is_empty() {
        return s;
    }
    let xs: Vec<&str> = eigen.iter().map(|(x, _)| x.as_str()).collect();
    format!("nabla {}, {s}", xs.join(" "))
}

fn schemas_of(p: &Prp, out: &mut BTreeMap<String, String>) {
    match p {
        Prp::ForallCtx(g, s, b) => {
            out.insert(g.clone(), s.clone());
            schemas_of(b, out);
        }
        Prp::ForallTm(_, _, b) | Prp::ExistsTm(_, _, b) => schemas_of(b, out),
        Prp::And(a, b) | Prp::Or(a, b) | Prp::Imp(a, b) => {
            schemas_of(a, out);
            schemas_of(b, out);
        }
        _ => {}
    }
}

fn bel_prp(p: &Prp, explicit: &BTreeMap<String, String>) -> String {
    let mut quants = Vec::new();
    let mut q = p;
    loop {
        match q {
            Prp::ForallCtx(g, s, b) => {
                quants.push(format!("{{{g}:{s}}}"));
                q = b;
            }
            Prp::ForallTm(x, a, b) => {
                match explicit.get(x) {
                    Some(g) => quants.push(format!("{{{x}:[{g} |- {}]}}", a.pretty())),
                    None => quants.push(format!("{{{x}:{}}}", a.pretty())),
                }
                q = b;
            }
            Prp::ExistsTm(x, a, b) => {
                match explicit.get(x) {
                    Some(g) => quants.push(format!("<{x}:[{g} |- {}]>", a.pretty())),
                    None => quants.push(format!("<{x}:{}>", a.pretty())),
                }
                q = b;
            }
            _ => break,
        }
    }
    let body = q.pretty();
    if quants.is_empty() {
        body
    } else {
        format!("{} {body}", quants.join(" "))
    }
}

/// A theorem statement for `target`, plus any warnings about context choice.
pub fn translate_theorem(
    sig: &Signature,
    relations: &RelationTable,
    t: &Theorem,
    target: SystemId,
    ann: &AnnotationTable,
    names: &Names,
) -> Result<(String, Vec<Diagnostic>), Diagnostic> {
    let mut warnings = Vec::new();
    if target == SystemId::Tw {
        let text = t.pretty().lines().map(|l| format!("% {l}")).collect::<Vec<_>>().join("\n");
        return Ok((text, warnings));
    }
    let explicit = explicit_contexts(t, ann, &mut warnings)?;
    if target == SystemId::Bel {
        return Ok((format!("theorem {} : {}.", t.name, bel_prp(&t.statement, &explicit)), warnings));
    }
    let mut scope = names.clone();
    let mut local = BTreeSet::new();
    prp_names(&t.statement, &mut local);
    let mut schema_of = BTreeMap::new();
    schemas_of(&t.statement, &mut schema_of);
    for x in &local {
        if !schema_of.contains_key(x) {
            scope.reserve(x);
        }
    }
    let tails = schema_of.keys().map(|g| (g.clone(), scope.fresh(&capitalize(g)))).collect();
    let lp = Lp {
        sig,
        relations,
        ann,
        d: if target == SystemId::Hy { Dialect::Hy } else { Dialect::Ab },
        names: scope,
        tails,
        schema_of,
        explicit,
    };
    let body = lp.prp(&t.statement, 0).map_err(|e| Diagnostic {
        message: format!("in theorem `{}`: {}", t.name, e.message),
        ..e
    })?;
    Ok((format!("Theorem {} : {body}.", t.name), warnings))
}
