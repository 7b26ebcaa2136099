//! Implicit-argument reconstruction for rule constants.
//!
//! Identifiers that are neither declared nor bound are schematic. Each gets
//! its type from its first occurrence and is bound by a Pi prefix in order of
//! first occurrence. Schematic variables may only be applied to distinct
//! bound variables.

use std::collections::BTreeSet;

use super::{fresh_name, infer_type, tp_equal, LfResult, Signature, TypingCtx};
use crate::diag::{Code, Diagnostic};
use crate::syntax::subst::{abstract_name, free_names, open, subst};
use crate::syntax::{Decl, Kind, Pretty, Term, Tp, Var};

/// Closes a rule over its schematic variables.
pub fn reconstruct_implicits(sig: &Signature, rule: &Decl) -> Result<Decl, Diagnostic> {
    reconstruct(sig, rule).map(|(d, _)| d)
}

/// Like [`reconstruct_implicits`], also returning the prefix that was added.
pub(crate) fn reconstruct(sig: &Signature, rule: &Decl) -> LfResult<(Decl, Vec<(String, Tp)>)> {
    let Decl::Const { name, tp } = rule else {
        return Ok((rule.clone(), Vec::new()));
    };
    let mut r = Recon { sig, name, schematic: Vec::new() };
    r.walk_tp(tp, &mut TypingCtx::new())?;
    let mut closed = tp.clone();
    for (v, a) in r.schematic.iter().rev() {
        closed = Tp::Pi(v.clone(), Box::new(a.clone()), Box::new(abstract_name(&closed, v)));
    }
    Ok((Decl::Const { name: name.clone(), tp: closed }, r.schematic))
}

struct Recon<'a> {
    sig: &'a Signature,
    name: &'a str,
    schematic: Vec<(String, Tp)>,
}

fn recon_error(msg: impl Into<String>) -> Diagnostic {
    Diagnostic::error(Code::Recon, msg)
}

impl Recon<'_> {
    fn known(&self, n: &str) -> Option<&Tp> {
        self.schematic.iter().find(|(v, _)| v == n).map(|(_, a)| a)
    }

    fn is_schematic(&self, n: &str, ctx: &TypingCtx) -> bool {
        !self.sig.contains(n) && ctx.lookup(n).is_none()
    }

    fn fresh(&self, hint: &str, ctx: &TypingCtx, near: BTreeSet<String>) -> String {
        let mut avoid = near;
        avoid.extend(self.schematic.iter().map(|(v, _)| v.clone()));
        fresh_name(hint, self.sig, ctx, &avoid)
    }

    fn walk_tp(&mut self, a: &Tp, ctx: &mut TypingCtx) -> LfResult<()> {
        match a {
            Tp::Atom(f, args) => {
                let Some(kind) = self.sig.family_kind(f) else { return Ok(()) };
                let mut k = kind.clone();
                for arg in args {
                    k = match k {
                        Kind::Arrow(dom, cod) => {
                            self.term(arg, &dom, ctx)?;
                            *cod
                        }
                        Kind::Pi(_, dom, cod) => {
                            self.term(arg, &dom, ctx)?;
                            subst(&*cod, arg)
                        }
                        Kind::Type => break,
                    };
                }
                Ok(())
            }
            Tp::Arrow(a, b) => {
                self.walk_tp(a, ctx)?;
                self.walk_tp(b, ctx)
            }
            Tp::Pi(h, a, b) => {
                self.walk_tp(a, ctx)?;
                let x = self.fresh(h, ctx, free_names(&**b));
                ctx.push(x.clone(), (**a).clone());
                let res = self.walk_tp(&open(&**b, &x), ctx);
                ctx.pop();
                res
            }
        }
    }

    fn term(&mut self, t: &Term, expected: &Tp, ctx: &mut TypingCtx) -> LfResult<()> {
        if let Term::Lam(h, body) = t {
            let (dom, cod) = match expected {
                Tp::Arrow(a, b) => (a, (**b).clone()),
                Tp::Pi(_, a, b) => (a, (**b).clone()),
                Tp::Atom(..) => return Ok(()),
            };
            let x = self.fresh(h, ctx, free_names(&**body));
            let cod = if matches!(expected, Tp::Pi(..)) { open(&cod, &x) } else { cod };
            ctx.push(x.clone(), (**dom).clone());
            let res = self.term(&open(&**body, &x), &cod, ctx);
            ctx.pop();
            return res;
        }
        let (head, args) = t.spine();
        let head_name = match head {
            Term::Const(n) | Term::Var(Var::Free(n)) => n,
            _ => return Ok(()),
        };
        if matches!(head, Term::Const(_)) && self.is_schematic(head_name, ctx) {
            return self.schematic_app(head_name, &args, expected, ctx);
        }
        let Some(mut ty) = ctx.lookup(head_name).or_else(|| self.sig.const_type(head_name)).cloned() else {
            return Ok(());
        };
        for arg in args {
            ty = match ty {
                Tp::Arrow(dom, cod) => {
                    self.term(arg, &dom, ctx)?;
                    *cod
                }
                Tp::Pi(_, dom, cod) => {
                    self.term(arg, &dom, ctx)?;
                    subst(&*cod, arg)
                }
                Tp::Atom(..) => break,
            };
        }
        Ok(())
    }

    fn schematic_app(&mut self, v: &str, args: &[&Term], expected: &Tp, ctx: &TypingCtx) -> LfResult<()> {
        let app = Term::apps(Term::cnst(v), args.iter().map(|a| (*a).clone()));
        let not_pattern = || {
            recon_error(format!(
                "in rule `{}`, `{}` is not a pattern: `{v}` may only be applied to distinct bound variables",
                self.name,
                app.pretty()
            ))
        };
        let mut scope = TypingCtx::new();
        for (n, a) in &self.schematic {
            scope.push(n.clone(), a.clone());
        }
        for (n, a) in ctx.entries() {
            scope.push(n.clone(), a.clone());
        }
        let mut arg_types = Vec::with_capacity(args.len());
        for arg in args {
            match infer_type(self.sig, &scope, arg) {
                Ok(a) => arg_types.push(a),
                Err(_) => return Err(not_pattern()),
            }
        }
        let candidate = arg_types
            .into_iter()
            .rev()
            .fold(expected.clone(), |acc, a| Tp::arrow(a, acc));
        if let Some(prev) = self.known(v) {
            if !tp_equal(prev, &candidate) {
                return Err(recon_error(format!(
                    "in rule `{}`, `{v}` is used at `{}` and at `{}`",
                    self.name,
                    prev.pretty(),
                    candidate.pretty()
                )));
            }
        }
        let mut seen = BTreeSet::new();
        for arg in args {
            match arg {
                Term::Var(Var::Free(x)) if ctx.lookup(x).is_some() && seen.insert(x.as_str()) => {}
                _ => return Err(not_pattern()),
            }
        }
        if self.known(v).is_some() {
            return Ok(());
        }
        let escapes = free_names(&candidate).into_iter().any(|n| ctx.lookup(&n).is_some());
        if escapes || !self.sig.is_level0_type(&candidate) {
            return Err(recon_error(format!(
                "in rule `{}`, `{v}` would need type `{}`, which is not a closed level-0 type",
                self.name,
                candidate.pretty()
            )));
        }
        self.schematic.push((v.to_string(), candidate));
        Ok(())
    }
}
