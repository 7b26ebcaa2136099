//! Directive lines: `%% Syntax` or `%% what [sy,...] in dest`.

use std::collections::BTreeSet;

use super::lexer::{is_ident_char, is_ident_start};
use crate::diag::{Code, Diagnostic};
use crate::syntax::{Dest, Directive, DirectiveLine, Section, SystemId, What};

struct Cursor<'a> {
    rest: &'a str,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        self.rest = self.rest.trim_start();
    }

    fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        match self.rest.strip_prefix(s) {
            Some(r) => {
                self.rest = r;
                true
            }
            None => false,
        }
    }

    fn ident(&mut self) -> Option<&'a str> {
        self.skip_ws();
        let mut chars = self.rest.char_indices();
        match chars.next() {
            Some((_, c)) if is_ident_start(c) => {}
            _ => return None,
        }
        let end = chars
            .find(|(_, c)| !is_ident_char(*c))
            .map(|(i, _)| i)
            .unwrap_or(self.rest.len());
        let (word, rest) = self.rest.split_at(end);
        self.rest = rest;
        Some(word)
    }
}

fn err(msg: impl Into<String>) -> Diagnostic {
    Diagnostic::error(Code::Directive, msg)
}

/// Parses the text of a directive line, with or without its leading `%%`.
pub fn parse_directive_line(line: &str) -> Result<DirectiveLine, Diagnostic> {
    let text = line.trim();
    let text = text.strip_prefix("%%").unwrap_or(text).trim();
    if let Some(sec) = Section::from_name(text) {
        return Ok(DirectiveLine::Separator(sec));
    }
    if text.starts_with(|c: char| c.is_uppercase()) && text.chars().all(|c| c.is_alphanumeric() || c == '_') {
        let names: Vec<&str> = Section::ALL.iter().map(|s| s.name()).collect();
        return Err(Diagnostic::error(Code::Section, format!("unknown section `{text}`"))
            .with_hint(format!("sections are {}", names.join(", "))));
    }
    let mut cur = Cursor { rest: text };
    let what = match cur.ident() {
        Some("wf") => What::Wf,
        Some("explicit") => What::Explicit,
        Some("implicit") => What::Implicit,
        Some(other) => {
            return Err(err(format!(
                "unknown directive `{other}`; expected a section name or one of wf, explicit, implicit"
            )))
        }
        None => return Err(err(format!("malformed directive `{text}`"))),
    };
    if !cur.eat("[") {
        return Err(err("expected a system set such as `[hy,ab]`"));
    }
    let mut systems = BTreeSet::new();
    loop {
        let id = cur.ident().ok_or_else(|| err("malformed system set"))?;
        let sy = SystemId::from_name(id).ok_or_else(|| {
            err(format!("unknown system `{id}`; expected one of hy, ab, bel, tw"))
        })?;
        systems.insert(sy);
        if cur.eat("]") {
            break;
        }
        if !cur.eat(",") {
            return Err(err("malformed system set: expected `,` or `]`"));
        }
    }
    if cur.ident() != Some("in") {
        return Err(err("expected `in` followed by a destination"));
    }
    let dest = if cur.eat("[") {
        let g = cur.ident().ok_or_else(|| err("expected a context variable after `in [`"))?;
        if !cur.eat("]") {
            return Err(err("expected `]` after context variable"));
        }
        Dest::Ctx(g.to_string())
    } else {
        let id = cur.ident().ok_or_else(|| err("expected a destination identifier"))?;
        if cur.rest.starts_with('.') {
            cur.rest = &cur.rest[1..];
            let var = match cur.rest.chars().next() {
                Some(c) if is_ident_start(c) => cur.ident().unwrap(),
                _ => return Err(err(format!("expected a variable after `{id}.`"))),
            };
            Dest::Qualified(id.to_string(), var.to_string())
        } else {
            Dest::Ident(id.to_string())
        }
    };
    cur.skip_ws();
    if !cur.rest.is_empty() {
        return Err(err(format!("unexpected `{}` after destination", cur.rest)));
    }
    Ok(DirectiveLine::Annotation(Directive { what, systems, dest }))
}
