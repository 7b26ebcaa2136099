//! Index arithmetic: shifting, substitution, abstraction and beta reduction.

use std::collections::BTreeSet;

use super::ast::{Kind, Term, Tp, Var};

/// Syntax that contains terms under binders.
pub trait Binders: Sized {
    /// Rebuilds `self`, replacing each variable or constant leaf for which
    /// `f(leaf, depth)` returns `Some`. `depth` counts binders crossed.
    fn map_leaves<F: FnMut(&Term, usize) -> Option<Term>>(&self, depth: usize, f: &mut F) -> Self;

    fn for_leaves<F: FnMut(&Term, usize)>(&self, depth: usize, f: &mut F);
}

impl Binders for Term {
    fn map_leaves<F: FnMut(&Term, usize) -> Option<Term>>(&self, depth: usize, f: &mut F) -> Self {
        match self {
            Term::Var(_) | Term::Const(_) => f(self, depth).unwrap_or_else(|| self.clone()),
            Term::Lam(h, b) => Term::Lam(h.clone(), Box::new(b.map_leaves(depth + 1, f))),
            Term::App(g, a) => Term::App(
                Box::new(g.map_leaves(depth, f)),
                Box::new(a.map_leaves(depth, f)),
            ),
        }
    }

    fn for_leaves<F: FnMut(&Term, usize)>(&self, depth: usize, f: &mut F) {
        match self {
            Term::Var(_) | Term::Const(_) => f(self, depth),
            Term::Lam(_, b) => b.for_leaves(depth + 1, f),
            Term::App(g, a) => {
                g.for_leaves(depth, f);
                a.for_leaves(depth, f);
            }
        }
    }
}

impl Binders for Tp {
    fn map_leaves<F: FnMut(&Term, usize) -> Option<Term>>(&self, depth: usize, f: &mut F) -> Self {
        match self {
            Tp::Atom(a, args) => Tp::Atom(
                a.clone(),
                args.iter().map(|t| t.map_leaves(depth, f)).collect(),
            ),
            Tp::Arrow(a, b) => Tp::Arrow(
                Box::new(a.map_leaves(depth, f)),
                Box::new(b.map_leaves(depth, f)),
            ),
            Tp::Pi(h, a, b) => Tp::Pi(
                h.clone(),
                Box::new(a.map_leaves(depth, f)),
                Box::new(b.map_leaves(depth + 1, f)),
            ),
        }
    }

    fn for_leaves<F: FnMut(&Term, usize)>(&self, depth: usize, f: &mut F) {
        match self {
            Tp::Atom(_, args) => args.iter().for_each(|t| t.for_leaves(depth, f)),
            Tp::Arrow(a, b) => {
                a.for_leaves(depth, f);
                b.for_leaves(depth, f);
            }
            Tp::Pi(_, a, b) => {
                a.for_leaves(depth, f);
                b.for_leaves(depth + 1, f);
            }
        }
    }
}

impl Binders for Kind {
    fn map_leaves<F: FnMut(&Term, usize) -> Option<Term>>(&self, depth: usize, f: &mut F) -> Self {
        match self {
            Kind::Type => Kind::Type,
            Kind::Arrow(a, k) => Kind::Arrow(
                Box::new(a.map_leaves(depth, f)),
                Box::new(k.map_leaves(depth, f)),
            ),
            Kind::Pi(h, a, k) => Kind::Pi(
                h.clone(),
                Box::new(a.map_leaves(depth, f)),
                Box::new(k.map_leaves(depth + 1, f)),
            ),
        }
    }

    fn for_leaves<F: FnMut(&Term, usize)>(&self, depth: usize, f: &mut F) {
        match self {
            Kind::Type => {}
            Kind::Arrow(a, k) => {
                a.for_leaves(depth, f);
                k.for_leaves(depth, f);
            }
            Kind::Pi(_, a, k) => {
                a.for_leaves(depth, f);
                k.for_leaves(depth + 1, f);
            }
        }
    }
}

/// Adds `by` to every bound index that points at or beyond `cutoff`.
pub fn shift<T: Binders>(x: &T, by: isize, cutoff: usize) -> T {
    x.map_leaves(0, &mut |leaf, depth| match leaf {
        Term::Var(Var::Bound(i)) if *i >= cutoff + depth => {
            Some(Term::bound((*i as isize + by) as usize))
        }
        _ => None,
    })
}

/// Replaces index `k` by `s` (valid outside the eliminated binder) and
/// lowers every index above it by one.
pub fn subst_at<T: Binders>(x: &T, k: usize, s: &Term) -> T {
    x.map_leaves(0, &mut |leaf, depth| match leaf {
        Term::Var(Var::Bound(i)) => {
            let target = k + depth;
            if *i == target {
                Some(shift(s, target as isize, 0))
            } else if *i > target {
                Some(Term::bound(i - 1))
            } else {
                None
            }
        }
        _ => None,
    })
}

/// Eliminates the binder whose scope is `body`, replacing its variable by
/// `replacement` without capture.
pub fn subst<T: Binders>(body: &T, replacement: &Term) -> T {
    subst_at(body, 0, replacement)
}

/// Instantiates the outermost binder of `body` with a named free variable.
pub fn open<T: Binders>(body: &T, name: &str) -> T {
    subst(body, &Term::free(name))
}

/// Turns every occurrence of the identifier `name` (constant or free
/// variable) into a reference to a new innermost binder. The inverse of
/// [`open`].
pub fn abstract_name<T: Binders>(x: &T, name: &str) -> T {
    x.map_leaves(0, &mut |leaf, depth| match leaf {
        Term::Var(Var::Bound(i)) if *i >= depth => Some(Term::bound(i + 1)),
        Term::Const(c) | Term::Var(Var::Free(c)) if c == name => Some(Term::bound(depth)),
        _ => None,
    })
}

/// True if the binder at distance `k` from the top of `x` is referenced.
pub fn mentions_bound<T: Binders>(x: &T, k: usize) -> bool {
    let mut found = false;
    x.for_leaves(0, &mut |leaf, depth| {
        if let Term::Var(Var::Bound(i)) = leaf {
            if *i == k + depth {
                found = true;
            }
        }
    });
    found
}

/// Names of constants and free variables occurring in `x`.
pub fn free_names<T: Binders>(x: &T) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    x.for_leaves(0, &mut |leaf, _| match leaf {
        Term::Const(c) | Term::Var(Var::Free(c)) => {
            out.insert(c.clone());
        }
        _ => {}
    });
    out
}

/// Renames an identifier (constant or free variable) everywhere.
pub fn rename<T: Binders>(x: &T, from: &str, to: &str) -> T {
    x.map_leaves(0, &mut |leaf, _| match leaf {
        Term::Const(c) if c == from => Some(Term::cnst(to)),
        Term::Var(Var::Free(c)) if c == from => Some(Term::free(to)),
        _ => None,
    })
}

/// Beta-normal form. Terminates on well-typed terms.
pub fn beta_normal(t: &Term) -> Term {
    match t {
        Term::Var(_) | Term::Const(_) => t.clone(),
        Term::Lam(h, b) => Term::Lam(h.clone(), Box::new(beta_normal(b))),
        Term::App(f, a) => {
            let f = beta_normal(f);
            let a = beta_normal(a);
            match f {
                Term::Lam(_, body) => beta_normal(&subst(&*body, &a)),
                f => Term::app(f, a),
            }
        }
    }
}

pub fn beta_normal_tp(a: &Tp) -> Tp {
    match a {
        Tp::Atom(f, args) => Tp::Atom(f.clone(), args.iter().map(beta_normal).collect()),
        Tp::Arrow(a, b) => Tp::arrow(beta_normal_tp(a), beta_normal_tp(b)),
        Tp::Pi(h, a, b) => Tp::Pi(h.clone(), Box::new(beta_normal_tp(a)), Box::new(beta_normal_tp(b))),
    }
}

pub fn beta_normal_kind(k: &Kind) -> Kind {
    match k {
        Kind::Type => Kind::Type,
        Kind::Arrow(a, k) => Kind::arrow(beta_normal_tp(a), beta_normal_kind(k)),
        Kind::Pi(h, a, k) => Kind::Pi(h.clone(), Box::new(beta_normal_tp(a)), Box::new(beta_normal_kind(k))),
    }
}

/// Identical up to the choice of bound names.
pub fn alpha_equal(a: &Term, b: &Term) -> bool {
    a == b
}

/// `\x. M x` with `x` not free in `M` becomes `M`, recursively.
pub fn eta_contract(t: &Term) -> Term {
    match t {
        Term::Var(_) | Term::Const(_) => t.clone(),
        Term::App(f, a) => Term::app(eta_contract(f), eta_contract(a)),
        Term::Lam(h, b) => {
            let b = eta_contract(b);
            if let Term::App(f, a) = &b {
                if **a == Term::bound(0) && !mentions_bound(&**f, 0) {
                    return shift(&**f, -1, 0);
                }
            }
            Term::Lam(h.clone(), Box::new(b))
        }
    }
}
