//! Fresh names for generated variables.

use std::collections::{BTreeMap, BTreeSet};

use crate::lf::{Level, Signature};
use crate::syntax::subst::free_names;
use crate::syntax::{OrbiSpec, Prp};

/// Words of the target dialects that generated names must avoid.
const RESERVED: [&str; 30] = [
    "pi", "sigma", "nabla", "forall", "exists", "true", "false", "Define", "Theorem", "by", "prop", "olist",
    "nil", "type", "fun", "Prop", "Type", "list", "uexp", "atm", "oo", "prog", "atom", "Imp", "All", "Conj",
    "T_", "proper", "abstr", "Inductive",
];

const UPPER: [&str; 11] = ["M", "N", "O", "P", "Q", "R", "S", "T", "U", "V", "W"];

#[derive(Debug, Clone, Default)]
pub struct Names {
    used: BTreeSet<String>,
    wf: BTreeMap<String, String>,
}

impl Names {
    /// Global identifiers of `spec` and its signature, plus dialect keywords.
    /// Locally bound names are reserved where they are in scope.
    pub fn for_spec(sig: &Signature, spec: &OrbiSpec) -> Names {
        let mut n = Names::default();
        n.reserve_all(RESERVED.iter().map(|s| s.to_string()));
        n.reserve_all(sig.entries().iter().map(|e| e.decl.name().to_string()));
        for s in &spec.schemas {
            n.reserve(&s.name);
        }
        for d in &spec.definitions {
            n.reserve(&d.name);
            n.reserve_all(d.clauses.iter().map(|c| c.name.clone()));
        }
        for t in &spec.theorems {
            n.reserve(&t.name);
        }
        for e in sig.entries() {
            if e.level == Level::Zero && matches!(e.decl, crate::syntax::Decl::Family { .. }) {
                let f = e.decl.name().to_string();
                let w = n.fresh(&format!("is_{f}"));
                n.wf.insert(f, w);
            }
        }
        n
    }

    /// The well-formedness predicate of `family`, `is_family` unless taken.
    pub fn wf_name(&self, family: &str) -> String {
        self.wf.get(family).cloned().unwrap_or_else(|| format!("is_{family}"))
    }

    pub fn wf_predicates(&self, families: &BTreeSet<String>) -> BTreeSet<String> {
        families.iter().map(|f| self.wf_name(f)).collect()
    }

    pub fn reserve(&mut self, name: &str) {
        self.used.insert(name.to_string());
    }

    pub fn reserve_all(&mut self, names: impl IntoIterator<Item = String>) {
        self.used.extend(names);
    }

    pub fn is_used(&self, name: &str) -> bool {
        self.used.contains(name)
    }

    /// `base` if free, else `base1`, `base2`, ...
    pub fn fresh(&mut self, base: &str) -> String {
        let base = if base.is_empty() { "x" } else { base };
        let mut name = base.to_string();
        let mut i = 1;
        while self.used.contains(&name) {
            name = format!("{base}{i}");
            i += 1;
        }
        self.reserve(&name);
        name
    }

    /// The first free name of `bases`, else a numbered variant of the first.
    pub fn fresh_from(&mut self, bases: &[&str]) -> String {
        match bases.iter().find(|b| !self.used.contains(**b)) {
            Some(b) => {
                self.reserve(b);
                b.to_string()
            }
            None => self.fresh(bases[0]),
        }
    }

    pub fn fresh_upper(&mut self) -> String {
        self.fresh_from(&UPPER)
    }
}

pub fn capitalize(s: &str) -> String {
    let mut cs = s.chars();
    match cs.next() {
        Some(c) => c.to_uppercase().chain(cs).collect(),
        None => String::new(),
    }
}

/// Term-level identifiers occurring anywhere in a proposition.
pub fn prp_names(p: &Prp, out: &mut BTreeSet<String>) {
    match p {
        Prp::RelApp(_, cs) => {
            for c in cs {
                if let Some(g) = c.head_var() {
                    out.insert(g.to_string());
                }
            }
        }
        Prp::Judgment(c, _, args) => {
            if let Some(g) = c.head_var() {
                out.insert(g.to_string());
            }
            for (l, b) in c.blocks() {
                out.insert(l.to_string());
                out.extend(b.labels().map(str::to_string));
            }
            for a in args {
                out.extend(free_names(a));
            }
        }
        Prp::TermEq(a, b) => {
            out.extend(free_names(a));
            out.extend(free_names(b));
        }
        Prp::True | Prp::False => {}
        Prp::And(a, b) | Prp::Or(a, b) | Prp::Imp(a, b) => {
            prp_names(a, out);
            prp_names(b, out);
        }
        Prp::ForallCtx(x, _, b) | Prp::ForallTm(x, _, b) | Prp::ExistsTm(x, _, b) => {
            out.insert(x.clone());
            prp_names(b, out);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fresh_names() {
        let mut n = Names::default();
        n.reserve("x");
        assert_eq!(n.fresh("x"), "x1");
        assert_eq!(n.fresh("x"), "x2");
        assert_eq!(n.fresh_from(&["x", "y"]), "y");
        n.reserve("M");
        assert_eq!(n.fresh_upper(), "N");
        assert_eq!(capitalize("m1"), "M1");
    }
}
