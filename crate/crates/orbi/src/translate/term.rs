//! Terms in target-dialect syntax, eta-contracted.

use std::collections::BTreeSet;

use crate::syntax::subst::{eta_contract, free_names};
use crate::syntax::{Term, Var};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dialect {
    /// `x\ M`
    Ab,
    /// `fun x => M`
    Hy,
}

fn fresh(hint: &str, free: &BTreeSet<String>, env: &[String]) -> String {
    let base = if hint.is_empty() { "x" } else { hint };
    let mut name = base.to_string();
    let mut i = 1;
    while free.contains(&name) || env.contains(&name) {
        name = format!("{base}{i}");
        i += 1;
    }
    name
}

fn go(t: &Term, d: Dialect, env: &mut Vec<String>, arg: bool, head: bool, out: &mut String) {
    match t {
        Term::Var(Var::Bound(i)) => out.push_str(&env[env.len() - 1 - i]),
        Term::Var(Var::Free(n)) | Term::Const(n) => out.push_str(n),
        Term::Lam(h, body) => {
            let x = fresh(h, &free_names(&**body), env);
            let wrap = arg || head;
            if wrap {
                out.push('(');
            }
            match d {
                Dialect::Ab => out.push_str(&format!("{x}\\ ")),
                Dialect::Hy => out.push_str(&format!("fun {x} => ")),
            }
            env.push(x);
            go(body, d, env, false, false, out);
            env.pop();
            if wrap {
                out.push(')');
            }
        }
        Term::App(f, a) => {
            if arg {
                out.push('(');
            }
            go(f, d, env, false, true, out);
            out.push(' ');
            go(a, d, env, true, false, out);
            if arg {
                out.push(')');
            }
        }
    }
}

/// Renders `t`; `as_arg` parenthesizes applications and abstractions.
pub fn render_term(t: &Term, d: Dialect, as_arg: bool) -> String {
    let mut out = String::new();
    go(&eta_contract(t), d, &mut Vec::new(), as_arg, false, &mut out);
    out
}
