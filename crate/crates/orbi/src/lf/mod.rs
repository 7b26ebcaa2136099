//! LF type checking at levels 0 and 1.
//!
//! Definitional equality is beta only. `A -> B` and `{x:A} B` with `x`
//! unused are equal types.

mod recon;

use std::collections::{BTreeSet, HashMap};

pub use recon::reconstruct_implicits;
pub(crate) use recon::reconstruct;

use crate::diag::{Code, Diagnostic};
use crate::syntax::subst::{abstract_name, beta_normal, beta_normal_tp, free_names, mentions_bound, open, shift, subst};
use crate::syntax::{Decl, Kind, OrbiSpec, Pretty, Section, Term, Tp, Var};

type LfResult<T> = Result<T, Diagnostic>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Level {
    Zero,
    One,
    Unknown,
}

#[derive(Debug, Clone)]
pub struct Entry {
    /// Rule constants are stored with their implicit prefix reconstructed.
    pub decl: Decl,
    pub level: Level,
    pub section: Section,
    /// Number of outermost Pi binders added by reconstruction.
    pub implicit: usize,
}

/// Ordered, checked declarations.
#[derive(Debug, Clone, Default)]
pub struct Signature {
    entries: Vec<Entry>,
    index: HashMap<String, usize>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Entry] {
        &self.entries
    }

    pub fn get(&self, name: &str) -> Option<&Entry> {
        self.index.get(name).map(|&i| &self.entries[i])
    }

    pub fn contains(&self, name: &str) -> bool {
        self.index.contains_key(name)
    }

    pub fn family_kind(&self, name: &str) -> Option<&Kind> {
        match self.get(name).map(|e| &e.decl) {
            Some(Decl::Family { kind, .. }) => Some(kind),
            _ => None,
        }
    }

    pub fn const_type(&self, name: &str) -> Option<&Tp> {
        match self.get(name).map(|e| &e.decl) {
            Some(Decl::Const { tp, .. }) => Some(tp),
            _ => None,
        }
    }

    pub fn level(&self, name: &str) -> Level {
        self.get(name).map_or(Level::Unknown, |e| e.level)
    }

    /// Constants whose type ends in `family`, in declaration order.
    pub fn constructors<'a>(&'a self, family: &'a str) -> impl Iterator<Item = (&'a str, &'a Tp)> + 'a {
        self.entries.iter().filter_map(move |e| match &e.decl {
            Decl::Const { name, tp } if tp.target_family() == family => Some((name.as_str(), tp)),
            _ => None,
        })
    }

    pub fn rules(&self) -> impl Iterator<Item = &Entry> {
        self.entries.iter().filter(|e| e.section == Section::Rules)
    }

    /// Adds an entry without checking it.
    pub fn push(&mut self, entry: Entry) {
        self.index.insert(entry.decl.name().to_string(), self.entries.len());
        self.entries.push(entry);
    }

    /// True if every family mentioned in `a` is level 0.
    pub fn is_level0_type(&self, a: &Tp) -> bool {
        match a {
            Tp::Atom(f, _) => self.level(f) == Level::Zero,
            Tp::Arrow(a, b) | Tp::Pi(_, a, b) => self.is_level0_type(a) && self.is_level0_type(b),
        }
    }
}

/// Ordered typing assumptions; later entries may mention earlier ones.
#[derive(Debug, Clone, Default)]
pub struct TypingCtx {
    entries: Vec<(String, Tp)>,
}

impl TypingCtx {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, name: impl Into<String>, tp: Tp) {
        self.entries.push((name.into(), tp));
    }

    pub fn pop(&mut self) {
        self.entries.pop();
    }

    pub fn lookup(&self, name: &str) -> Option<&Tp> {
        self.entries.iter().rev().find(|(n, _)| n == name).map(|(_, t)| t)
    }

    pub fn entries(&self) -> &[(String, Tp)] {
        &self.entries
    }
}

pub fn normalize(t: &Term) -> Term {
    beta_normal(t)
}

/// Beta-normal type with vacuous Pi binders shown as arrows.
pub fn canonical_tp(a: &Tp) -> Tp {
    match a {
        Tp::Atom(f, args) => Tp::Atom(f.clone(), args.iter().map(beta_normal).collect()),
        Tp::Arrow(a, b) => Tp::arrow(canonical_tp(a), canonical_tp(b)),
        Tp::Pi(h, a, b) => {
            if mentions_bound(&**b, 0) {
                Tp::Pi(h.clone(), Box::new(canonical_tp(a)), Box::new(canonical_tp(b)))
            } else {
                Tp::arrow(canonical_tp(a), canonical_tp(&shift(&**b, -1, 0)))
            }
        }
    }
}

pub fn tp_equal(a: &Tp, b: &Tp) -> bool {
    canonical_tp(a) == canonical_tp(b)
}

/// A name for a new free variable that clashes with nothing in scope.
pub(crate) fn fresh_name(hint: &str, sig: &Signature, ctx: &TypingCtx, avoid: &BTreeSet<String>) -> String {
    let mut name = if hint.is_empty() { "x".to_string() } else { hint.to_string() };
    while sig.contains(&name) || ctx.lookup(&name).is_some() || avoid.contains(&name) {
        name.push('\'');
    }
    name
}

fn type_error(msg: impl Into<String>) -> Diagnostic {
    Diagnostic::error(Code::Type, msg)
}

/// Principal type of `t` in beta-normal form.
pub fn infer_type(sig: &Signature, ctx: &TypingCtx, t: &Term) -> LfResult<Tp> {
    match t {
        Term::Var(Var::Bound(i)) => Err(Diagnostic::error(Code::Unbound, format!("dangling bound variable #{i}"))),
        Term::Var(Var::Free(n)) | Term::Const(n) => lookup_term(sig, ctx, n),
        Term::Lam(..) => Err(type_error(format!(
            "cannot infer a type for `{}`; a lambda needs an expected type",
            t.pretty()
        ))),
        Term::App(f, a) if matches!(**f, Term::Lam(..)) => {
            // A redex: the argument's type stands in for the missing annotation.
            let Term::Lam(h, body) = &**f else { unreachable!() };
            let dom = infer_type(sig, ctx, a)?;
            let x = fresh_name(h, sig, ctx, &free_names(&**body));
            let mut inner = ctx.clone();
            inner.push(x.clone(), dom);
            let cod = infer_type(sig, &inner, &open(&**body, &x))?;
            Ok(beta_normal_tp(&subst(&abstract_name(&cod, &x), a)))
        }
        Term::App(f, a) => {
            let ft = infer_type(sig, ctx, f)?;
            match ft {
                Tp::Arrow(dom, cod) => {
                    check_term(sig, ctx, a, &dom)?;
                    Ok(*cod)
                }
                Tp::Pi(_, dom, cod) => {
                    check_term(sig, ctx, a, &dom)?;
                    Ok(beta_normal_tp(&subst(&*cod, a)))
                }
                atom @ Tp::Atom(..) => Err(type_error(format!(
                    "`{}` has type `{}` and cannot be applied to `{}`",
                    f.pretty(),
                    atom.pretty(),
                    a.pretty()
                ))),
            }
        }
    }
}

fn lookup_term(sig: &Signature, ctx: &TypingCtx, n: &str) -> LfResult<Tp> {
    if let Some(a) = ctx.lookup(n) {
        return Ok(a.clone());
    }
    match sig.get(n).map(|e| &e.decl) {
        Some(Decl::Const { tp, .. }) => Ok(tp.clone()),
        Some(Decl::Family { .. }) => Err(type_error(format!("`{n}` is a type family, not a term"))),
        None => Err(Diagnostic::error(Code::Unbound, format!("unbound variable `{n}`"))),
    }
}

/// Checks `t` against `expected`; lambdas are checked, everything else inferred.
pub fn check_term(sig: &Signature, ctx: &TypingCtx, t: &Term, expected: &Tp) -> LfResult<()> {
    if let Term::Lam(h, body) = t {
        let (dom, cod_is_dependent, cod) = match expected {
            Tp::Arrow(a, b) => (a, false, b),
            Tp::Pi(_, a, b) => (a, true, b),
            Tp::Atom(..) => {
                return Err(type_error(format!(
                    "expected `{}`, found the function `{}`",
                    expected.pretty(),
                    t.pretty()
                )))
            }
        };
        let mut avoid = free_names(&**body);
        avoid.extend(free_names(&**cod));
        let x = fresh_name(h, sig, ctx, &avoid);
        let mut inner = ctx.clone();
        inner.push(x.clone(), (**dom).clone());
        let cod = if cod_is_dependent { open(&**cod, &x) } else { (**cod).clone() };
        return check_term(sig, &inner, &open(&**body, &x), &cod);
    }
    let actual = infer_type(sig, ctx, t)?;
    if tp_equal(&actual, expected) {
        Ok(())
    } else {
        Err(type_error(format!(
            "`{}` has type `{}` but `{}` was expected",
            t.pretty(),
            canonical_tp(&actual).pretty(),
            canonical_tp(expected).pretty()
        )))
    }
}

fn kind_error(msg: impl Into<String>) -> Diagnostic {
    Diagnostic::error(Code::Kind, msg)
}

/// Checks that `a` is a well-formed type.
pub fn check_tp(sig: &Signature, ctx: &TypingCtx, a: &Tp) -> LfResult<()> {
    match a {
        Tp::Atom(f, args) => {
            let mut k = match sig.get(f).map(|e| &e.decl) {
                Some(Decl::Family { kind, .. }) => kind.clone(),
                Some(Decl::Const { .. }) => return Err(kind_error(format!("`{f}` is a constant, not a type family"))),
                None if ctx.lookup(f).is_some() => {
                    return Err(kind_error(format!("`{f}` is a variable, not a type family")))
                }
                None => return Err(Diagnostic::error(Code::Unbound, format!("unknown type family `{f}`"))),
            };
            for (i, arg) in args.iter().enumerate() {
                k = match k {
                    Kind::Arrow(dom, cod) => {
                        check_term(sig, ctx, arg, &dom)?;
                        *cod
                    }
                    Kind::Pi(_, dom, cod) => {
                        check_term(sig, ctx, arg, &dom)?;
                        subst(&*cod, arg)
                    }
                    Kind::Type => {
                        return Err(kind_error(format!(
                            "`{f}` is applied to {} arguments but takes {i}",
                            args.len()
                        )))
                    }
                };
            }
            match k {
                Kind::Type => Ok(()),
                _ => Err(kind_error(format!(
                    "`{}` is missing arguments: `{f}` still expects `{}`",
                    a.pretty(),
                    k.pretty()
                ))),
            }
        }
        Tp::Arrow(a, b) => {
            check_tp(sig, ctx, a)?;
            check_tp(sig, ctx, b)
        }
        Tp::Pi(h, a, b) => {
            check_tp(sig, ctx, a)?;
            let x = fresh_name(h, sig, ctx, &free_names(&**b));
            let mut inner = ctx.clone();
            inner.push(x.clone(), (**a).clone());
            check_tp(sig, &inner, &open(&**b, &x))
        }
    }
}

pub fn check_kind(sig: &Signature, ctx: &TypingCtx, k: &Kind) -> LfResult<()> {
    match k {
        Kind::Type => Ok(()),
        Kind::Arrow(a, k) => {
            check_tp(sig, ctx, a)?;
            check_kind(sig, ctx, k)
        }
        Kind::Pi(h, a, k) => {
            check_tp(sig, ctx, a)?;
            let x = fresh_name(h, sig, ctx, &free_names(&**k));
            let mut inner = ctx.clone();
            inner.push(x.clone(), (**a).clone());
            check_kind(sig, &inner, &open(&**k, &x))
        }
    }
}

fn kind_domains(k: &Kind) -> Vec<&Tp> {
    match k {
        Kind::Type => Vec::new(),
        Kind::Arrow(a, k) | Kind::Pi(_, a, k) => {
            let mut v = vec![&**a];
            v.extend(kind_domains(k));
            v
        }
    }
}

fn level_error(msg: impl Into<String>) -> Diagnostic {
    Diagnostic::error(Code::Level, msg)
}

/// Checks one declaration against `sig` and returns its signature entry.
pub fn check_decl(sig: &Signature, section: Section, decl: &Decl) -> LfResult<Entry> {
    let empty = TypingCtx::new();
    let name = decl.name();
    if sig.contains(name) {
        return Err(Diagnostic::error(Code::Duplicate, format!("`{name}` is declared twice")));
    }
    match (section, decl) {
        (Section::Syntax, Decl::Family { kind, .. }) => {
            check_kind(sig, &empty, kind)?;
            if *kind != Kind::Type {
                return Err(level_error(format!(
                    "syntax family `{name}` must have kind `type`, found `{}`",
                    kind.pretty()
                ))
                .with_hint("indexed families belong in the Judgments section"));
            }
            Ok(Entry { decl: decl.clone(), level: Level::Zero, section, implicit: 0 })
        }
        (Section::Syntax, Decl::Const { tp, .. }) => {
            check_tp(sig, &empty, tp)?;
            if !sig.is_level0_type(tp) {
                return Err(level_error(format!(
                    "syntax constructor `{name}` mentions a judgment: `{}`",
                    tp.pretty()
                )));
            }
            Ok(Entry { decl: decl.clone(), level: Level::Zero, section, implicit: 0 })
        }
        (Section::Judgments, Decl::Family { kind, .. }) => {
            check_kind(sig, &empty, kind)?;
            if let Some(bad) = kind_domains(kind).into_iter().find(|a| !sig.is_level0_type(a)) {
                return Err(level_error(format!(
                    "judgment `{name}` is indexed by `{}`, which is not a level-0 type",
                    bad.pretty()
                )));
            }
            Ok(Entry { decl: decl.clone(), level: Level::One, section, implicit: 0 })
        }
        (Section::Judgments, Decl::Const { .. }) => Err(level_error(format!(
            "`{name}` is a constant; the Judgments section declares type families only"
        ))),
        (Section::Rules, Decl::Family { .. }) => Err(level_error(format!(
            "`{name}` is a type family; the Rules section declares rule constants only"
        ))),
        (Section::Rules, Decl::Const { .. }) => {
            let (rebuilt, implicit) = reconstruct(sig, decl)?;
            let Decl::Const { tp, .. } = &rebuilt else { unreachable!() };
            check_tp(sig, &empty, tp)?;
            let target = tp.target_family();
            if sig.level(target) != Level::One {
                return Err(level_error(format!(
                    "rule `{name}` concludes `{target}`, which is not a judgment"
                )));
            }
            Ok(Entry { decl: rebuilt, level: Level::One, section, implicit: implicit.len() })
        }
        (other, _) => Err(Diagnostic::error(
            Code::Section,
            format!("`{name}` cannot be declared in the {} section", other.name()),
        )),
    }
}

/// Kinds and types every declaration in order, assigning levels by section.
pub fn check_signature(spec: &OrbiSpec) -> Result<Signature, Vec<Diagnostic>> {
    let mut sig = Signature::new();
    let mut errors = Vec::new();
    for (section, decl) in spec.signature_decls() {
        match check_decl(&sig, section, decl) {
            Ok(entry) => sig.push(entry),
            Err(e) => errors.push(e.or_at(spec.decl_span(decl.name()))),
        }
    }
    if errors.is_empty() {
        Ok(sig)
    } else {
        Err(errors)
    }
}
