//! Recursive-descent parser for `.orbi` files.
//!
//! Errors are recovered per declaration: after a failure the parser skips to
//! the next `.` or `;` that ends a line and carries on, so one run reports
//! every broken declaration.

mod directive;
pub mod lexer;

use std::collections::BTreeSet;

pub use directive::parse_directive_line;
pub use lexer::{tokenize, Token, TokenKind};

use crate::diag::{Code, Diagnostic, Span};
use crate::syntax::*;

type PResult<T> = Result<T, Diagnostic>;

/// Parses a whole file. All recoverable errors are returned together.
pub fn parse_spec(source: &str) -> Result<OrbiSpec, Vec<Diagnostic>> {
    let (spec, diags) = parse_spec_recovering(source);
    if diags.is_empty() {
        Ok(spec)
    } else {
        Err(diags)
    }
}

/// Parses as much as possible, returning the declarations that parsed along
/// with every diagnostic.
pub fn parse_spec_recovering(source: &str) -> (OrbiSpec, Vec<Diagnostic>) {
    let tokens = match tokenize(source) {
        Ok(t) => t,
        Err(e) => return (OrbiSpec::default(), vec![e]),
    };
    let mut p = Parser::new(tokens);
    let mut spec = OrbiSpec::default();
    let mut diags = Vec::new();
    let mut section = Section::Syntax;
    while let Some(tok) = p.peek().cloned() {
        let result = match tok.kind {
            TokenKind::Directive => {
                p.pos += 1;
                match parse_directive_line(&tok.lexeme) {
                    Ok(DirectiveLine::Separator(s)) => {
                        section = s;
                        Ok(())
                    }
                    Ok(DirectiveLine::Annotation(d)) => {
                        spec.locations.insert(Item::Directive(spec.directives.len()), tok.span);
                        spec.directives.push(d);
                        Ok(())
                    }
                    Err(e) => {
                        diags.push(e.at(tok.span));
                        continue;
                    }
                }
            }
            TokenKind::Keyword if tok.lexeme == "schema" => p.schema_decl().map(|s| {
                spec.locations.insert(Item::Schema(s.name.clone()), tok.span);
                spec.schemas.push(s);
            }),
            TokenKind::Keyword if tok.lexeme == "inductive" => p.inductive_decl().map(|d| {
                spec.locations.insert(Item::Def(d.name.clone()), tok.span);
                spec.definitions.push(d);
            }),
            TokenKind::Keyword if tok.lexeme == "theorem" => p.theorem_decl().map(|t| {
                spec.locations.insert(Item::Theorem(t.name.clone()), tok.span);
                spec.theorems.push(t);
            }),
            TokenKind::Ident | TokenKind::UpperIdent => p.decl().and_then(|d| {
                let bucket = match section {
                    Section::Syntax => &mut spec.syntax_decls,
                    Section::Judgments => &mut spec.judgment_decls,
                    Section::Rules => &mut spec.rules,
                    other => {
                        return Err(Diagnostic::error(
                            Code::Section,
                            format!(
                                "declaration `{}` is not allowed in the {} section",
                                d.name(),
                                other.name()
                            ),
                        )
                        .at(tok.span)
                        .with_hint("move it under `%% Syntax`, `%% Judgments` or `%% Rules`"))
                    }
                };
                spec.locations.insert(Item::Decl(d.name().to_string()), tok.span);
                bucket.push(d);
                Ok(())
            }),
            _ => Err(p.unexpected(&["identifier", "schema", "inductive", "theorem", "%%"], "sig")),
        };
        if let Err(e) = result {
            diags.push(e);
            p.recover();
        }
    }
    let schema_names: BTreeSet<String> = spec.schemas.iter().map(|s| s.name.clone()).collect();
    for t in &mut spec.theorems {
        t.statement = classify_quantifiers(&t.statement, &schema_names);
    }
    (spec, diags)
}

/// Parses a single theorem declaration, e.g. `theorem t: true;`.
pub fn parse_theorem(source: &str) -> PResult<Theorem> {
    let mut p = Parser::new(tokenize(source)?);
    let t = p.theorem_decl()?;
    p.expect_end()?;
    Ok(Theorem {
        statement: classify_quantifiers(&t.statement, &BTreeSet::new()),
        ..t
    })
}

pub fn parse_term(source: &str) -> PResult<Term> {
    let mut p = Parser::new(tokenize(source)?);
    let t = p.term()?;
    p.expect_end()?;
    Ok(t)
}

pub fn parse_tp(source: &str) -> PResult<Tp> {
    let mut p = Parser::new(tokenize(source)?);
    let span = p.span();
    let c = p.classifier()?;
    p.expect_end()?;
    c.into_tp(span)
}

pub fn parse_kind(source: &str) -> PResult<Kind> {
    let mut p = Parser::new(tokenize(source)?);
    let span = p.span();
    let c = p.classifier()?;
    p.expect_end()?;
    c.into_kind(span)
}

pub fn parse_ctx(source: &str) -> PResult<CtxPattern> {
    let mut p = Parser::new(tokenize(source)?);
    let c = p.ctx()?;
    p.expect_end()?;
    Ok(c)
}

/// A term-quantifier `{x:s}` becomes a context quantifier when `s` is a
/// bare identifier that names a schema or `x` is used as a context.
fn classify_quantifiers(p: &Prp, schemas: &BTreeSet<String>) -> Prp {
    let rec = |q: &Prp| Box::new(classify_quantifiers(q, schemas));
    match p {
        Prp::ForallTm(x, Tp::Atom(s, args), body)
            if args.is_empty() && (schemas.contains(s) || used_as_ctx(body, x)) =>
        {
            Prp::ForallCtx(x.clone(), s.clone(), rec(body))
        }
        Prp::ForallTm(x, a, body) => Prp::ForallTm(x.clone(), a.clone(), rec(body)),
        Prp::ExistsTm(x, a, body) => Prp::ExistsTm(x.clone(), a.clone(), rec(body)),
        Prp::ForallCtx(g, s, body) => Prp::ForallCtx(g.clone(), s.clone(), rec(body)),
        Prp::And(a, b) => Prp::And(rec(a), rec(b)),
        Prp::Or(a, b) => Prp::Or(rec(a), rec(b)),
        Prp::Imp(a, b) => Prp::Imp(rec(a), rec(b)),
        other => other.clone(),
    }
}

fn used_as_ctx(p: &Prp, x: &str) -> bool {
    match p {
        Prp::RelApp(_, cs) => cs.iter().any(|c| c.head_var() == Some(x)),
        Prp::Judgment(c, _, _) => c.head_var() == Some(x),
        Prp::And(a, b) | Prp::Or(a, b) | Prp::Imp(a, b) => used_as_ctx(a, x) || used_as_ctx(b, x),
        Prp::ForallCtx(y, _, b) | Prp::ForallTm(y, _, b) | Prp::ExistsTm(y, _, b) => {
            y != x && used_as_ctx(b, x)
        }
        Prp::TermEq(..) | Prp::True | Prp::False => false,
    }
}

/// Result of parsing the right-hand side of a declaration, which may be a
/// type or a kind.
enum Classifier {
    Tp(Tp),
    Kind(Kind),
    /// A kind used where a type was needed, e.g. the domain in `(tm -> type) -> type`.
    KindInDomain,
}

impl Classifier {
    fn into_tp(self, span: Span) -> PResult<Tp> {
        match self {
            Classifier::Tp(t) => Ok(t),
            Classifier::Kind(_) => Err(Diagnostic::error(Code::Parse, "expected a type, found a kind").at(span)),
            Classifier::KindInDomain => Err(level_error(span)),
        }
    }

    fn into_kind(self, span: Span) -> PResult<Kind> {
        match self {
            Classifier::Kind(k) => Ok(k),
            Classifier::Tp(_) => Err(Diagnostic::error(Code::Parse, "expected a kind, found a type").at(span)),
            Classifier::KindInDomain => Err(level_error(span)),
        }
    }
}

fn level_error(span: Span) -> Diagnostic {
    Diagnostic::error(
        Code::Level,
        "a type family is indexed by another type family; families may only be indexed by terms",
    )
    .at(span)
}

struct Parser {
    toks: Vec<Token>,
    pos: usize,
    /// Names bound by enclosing `\x.` and `{x:A}`, innermost last.
    env: Vec<String>,
}

impl Parser {
    fn new(toks: Vec<Token>) -> Self {
        Parser { toks, pos: 0, env: Vec::new() }
    }

    fn peek(&self) -> Option<&Token> {
        self.toks.get(self.pos)
    }

    fn peek_at(&self, n: usize) -> Option<&Token> {
        self.toks.get(self.pos + n)
    }

    fn at(&self, lexeme: &str) -> bool {
        self.peek().is_some_and(|t| t.is(lexeme))
    }

    fn at_ident(&self) -> bool {
        self.peek().is_some_and(Token::is_ident)
    }

    fn span(&self) -> Span {
        self.peek()
            .or_else(|| self.toks.last())
            .map(|t| t.span)
            .unwrap_or(Span::new(1, 1))
    }

    fn eat(&mut self, lexeme: &str) -> bool {
        if self.at(lexeme) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn unexpected(&self, expected: &[&str], production: &str) -> Diagnostic {
        let found = match self.peek() {
            Some(t) => t.to_string(),
            None => "end of input".to_string(),
        };
        let expected = expected
            .iter()
            .map(|e| if e.chars().all(|c| c.is_ascii_alphabetic() || c == ' ') { e.to_string() } else { format!("`{e}`") })
            .collect::<Vec<_>>()
            .join(", ");
        Diagnostic::error(
            Code::Parse,
            format!("expected one of {{{expected}}} while parsing `{production}`, found {found}"),
        )
        .at(self.span())
    }

    fn expect(&mut self, lexeme: &str, production: &str) -> PResult<()> {
        if self.eat(lexeme) {
            Ok(())
        } else {
            Err(self.unexpected(&[lexeme], production))
        }
    }

    fn expect_end(&self) -> PResult<()> {
        match self.peek() {
            None => Ok(()),
            Some(_) => Err(self.unexpected(&["end of input"], "input")),
        }
    }

    fn ident(&mut self, production: &str) -> PResult<String> {
        if self.at_ident() {
            let t = self.toks[self.pos].lexeme.clone();
            self.pos += 1;
            Ok(t)
        } else {
            Err(self.unexpected(&["identifier"], production))
        }
    }

    /// Skips past the next `.` or `;` that ends a line, or up to a directive.
    fn recover(&mut self) {
        self.env.clear();
        if self.peek().is_some_and(|t| t.kind == TokenKind::Directive) {
            return;
        }
        while let Some(t) = self.peek() {
            if t.kind == TokenKind::Directive {
                return;
            }
            let ends = t.is(".") || t.is(";");
            let line = t.span.line;
            self.pos += 1;
            if ends && self.peek().is_none_or(|n| n.span.line > line) {
                return;
            }
        }
    }

    // ---- signature ----

    fn decl(&mut self) -> PResult<Decl> {
        let name = self.ident("decl")?;
        self.expect(":", "decl")?;
        let span = self.span();
        let cls = self.classifier()?;
        self.expect(".", "decl")?;
        match cls {
            Classifier::Tp(tp) => Ok(Decl::Const { name, tp }),
            Classifier::Kind(kind) => Ok(Decl::Family { name, kind }),
            Classifier::KindInDomain => Err(level_error(span)),
        }
    }

    /// `kind` or `tp`: Pi binders, arrows in both directions, `type`.
    fn classifier(&mut self) -> PResult<Classifier> {
        if self.at("{") {
            let (x, dom) = self.pi_binder()?;
            self.env.push(x.clone());
            let body = self.classifier();
            self.env.pop();
            return Ok(match body? {
                Classifier::Tp(b) => Classifier::Tp(Tp::Pi(x, Box::new(dom), Box::new(b))),
                Classifier::Kind(k) => Classifier::Kind(Kind::Pi(x, Box::new(dom), Box::new(k))),
                Classifier::KindInDomain => Classifier::KindInDomain,
            });
        }
        let first = self.classifier_unit()?;
        if self.eat("->") {
            let rest = self.classifier()?;
            return Ok(arrow(first, rest));
        }
        if self.at("<-") {
            let mut acc = first;
            while self.eat("<-") {
                let dom = if self.at("{") { self.classifier()? } else { self.classifier_unit()? };
                acc = arrow(dom, acc);
            }
            if self.at("->") {
                return Err(Diagnostic::error(Code::Parse, "`->` and `<-` cannot be mixed without parentheses").at(self.span()));
            }
            return Ok(acc);
        }
        Ok(first)
    }

    fn pi_binder(&mut self) -> PResult<(String, Tp)> {
        self.expect("{", "tp")?;
        let x = self.ident("tp")?;
        self.expect(":", "tp")?;
        let span = self.span();
        let dom = self.classifier()?.into_tp(span)?;
        self.expect("}", "tp")?;
        Ok((x, dom))
    }

    fn classifier_unit(&mut self) -> PResult<Classifier> {
        if self.eat("type") {
            return Ok(Classifier::Kind(Kind::Type));
        }
        if self.eat("(") {
            let c = self.classifier()?;
            self.expect(")", "tp")?;
            return Ok(c);
        }
        if self.at_ident() {
            let family = self.ident("tp")?;
            let mut args = Vec::new();
            while self.starts_atom() {
                args.push(self.term_atom()?);
            }
            return Ok(Classifier::Tp(Tp::Atom(family, args)));
        }
        Err(self.unexpected(&["identifier", "type", "(", "{"], "tp"))
    }

    fn tp(&mut self) -> PResult<Tp> {
        let span = self.span();
        self.classifier()?.into_tp(span)
    }

    // ---- terms ----

    fn starts_atom(&self) -> bool {
        self.at_ident() || self.at("(") || self.at("\\")
    }

    fn term(&mut self) -> PResult<Term> {
        let mut t = self.term_atom()?;
        while self.starts_atom() {
            let a = self.term_atom()?;
            t = Term::app(t, a);
        }
        Ok(t)
    }

    fn term_atom(&mut self) -> PResult<Term> {
        if self.eat("(") {
            let t = self.term()?;
            self.expect(")", "term")?;
            return Ok(t);
        }
        if self.eat("\\") {
            let x = self.ident("term")?;
            self.expect(".", "term")?;
            self.env.push(x.clone());
            let body = self.term();
            self.env.pop();
            return Ok(Term::Lam(x, Box::new(body?)));
        }
        if self.at_ident() {
            let x = self.ident("term")?;
            return Ok(match self.env.iter().rev().position(|y| *y == x) {
                Some(i) => Term::bound(i),
                None => Term::Const(x),
            });
        }
        Err(self.unexpected(&["identifier", "(", "\\"], "term"))
    }

    // ---- schemas and contexts ----

    fn schema_decl(&mut self) -> PResult<Schema> {
        self.expect("schema", "s_decl")?;
        let name = self.ident("s_decl")?;
        self.expect("=", "s_decl")?;
        let mut alternatives = vec![self.block()?];
        while self.eat("+") {
            alternatives.push(self.block()?);
        }
        self.expect(";", "s_decl")?;
        Ok(Schema { name, alternatives })
    }

    /// `block (x:A, ...)` or the unparenthesized `block x:A, ...`.
    fn block(&mut self) -> PResult<Block> {
        self.expect("block", "blk")?;
        let parens = self.eat("(");
        let mut entries = vec![self.block_entry()?];
        loop {
            let more = self.at(",")
                && self.peek_at(1).is_some_and(Token::is_ident)
                && self.peek_at(2).is_some_and(|t| t.is(":"))
                && (parens || !self.peek_at(3).is_some_and(|t| t.is("block")));
            if !more {
                break;
            }
            self.pos += 1;
            entries.push(self.block_entry()?);
        }
        if parens {
            self.expect(")", "blk")?;
        }
        let mut seen = BTreeSet::new();
        for (l, _) in &entries {
            if !seen.insert(l.clone()) {
                return Err(Diagnostic::error(Code::Duplicate, format!("label `{l}` occurs twice in one block")).at(self.span()));
            }
        }
        Ok(Block { entries })
    }

    fn block_entry(&mut self) -> PResult<(String, Tp)> {
        let label = self.ident("blk")?;
        self.expect(":", "blk")?;
        let tp = self.tp()?;
        Ok((label, tp))
    }

    /// The inside of a context: `g`, `g, b:blk, ...`, `b:blk, ...` or nothing.
    fn ctx_items(&mut self, closers: &[&str]) -> PResult<CtxPattern> {
        let mut ctx = CtxPattern::Empty;
        if closers.iter().any(|c| self.at(c)) {
            return Ok(ctx);
        }
        let mut first = true;
        loop {
            let span = self.span();
            let name = self.ident("ctx")?;
            if self.eat(":") {
                let b = self.block()?;
                ctx = CtxPattern::Snoc(Box::new(ctx), name, b);
            } else if first {
                ctx = CtxPattern::Var(name);
            } else {
                return Err(Diagnostic::error(
                    Code::Parse,
                    format!("context variable `{name}` may only appear at the head of a context"),
                )
                .at(span));
            }
            first = false;
            if !self.eat(",") {
                return Ok(ctx);
            }
        }
    }

    fn ctx(&mut self) -> PResult<CtxPattern> {
        self.expect("[", "ctx")?;
        let c = self.ctx_items(&["]"])?;
        self.expect("]", "ctx")?;
        Ok(c)
    }

    // ---- inductive definitions ----

    fn inductive_decl(&mut self) -> PResult<InductiveDef> {
        self.expect("inductive", "def_dec")?;
        let name = self.ident("def_dec")?;
        self.expect(":", "def_dec")?;
        let mut params = Vec::new();
        while self.eat("{") {
            let g = self.ident("r_kind")?;
            self.expect(":", "r_kind")?;
            let s = self.ident("r_kind")?;
            self.expect("}", "r_kind")?;
            params.push((g, s));
        }
        self.expect("prop", "r_kind")?;
        self.expect("=", "def_dec")?;
        let mut clauses = Vec::new();
        while self.eat("|") {
            let cname = self.ident("def_body")?;
            self.expect(":", "def_body")?;
            let span = self.span();
            let prp = self.prp()?;
            if !is_def_prp(&prp) {
                return Err(Diagnostic::error(
                    Code::Parse,
                    format!("clause `{cname}` must be built from relation atoms and `->` only"),
                )
                .at(span));
            }
            clauses.push(DefClause { name: cname, prp });
        }
        if clauses.is_empty() {
            return Err(self.unexpected(&["|"], "def_body"));
        }
        self.expect(";", "def_dec")?;
        Ok(InductiveDef { name, params, clauses })
    }

    // ---- theorems ----

    fn theorem_decl(&mut self) -> PResult<Theorem> {
        self.expect("theorem", "thm")?;
        let name = self.ident("thm")?;
        self.expect(":", "thm")?;
        let statement = self.prp()?;
        self.expect(";", "thm")?;
        Ok(Theorem { name, statement })
    }

    fn prp(&mut self) -> PResult<Prp> {
        if self.eat("{") {
            let x = self.ident("quantif")?;
            self.expect(":", "quantif")?;
            let a = self.tp()?;
            self.expect("}", "quantif")?;
            let body = self.prp()?;
            return Ok(Prp::ForallTm(x, a, Box::new(body)));
        }
        if self.eat("<") {
            let x = self.ident("quantif")?;
            self.expect(":", "quantif")?;
            let a = self.tp()?;
            self.expect(">", "quantif")?;
            let body = self.prp()?;
            return Ok(Prp::ExistsTm(x, a, Box::new(body)));
        }
        let lhs = self.prp_or()?;
        if self.eat("->") {
            let rhs = self.prp()?;
            return Ok(Prp::Imp(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn prp_or(&mut self) -> PResult<Prp> {
        let lhs = self.prp_and()?;
        if self.eat("||") {
            let rhs = self.prp_or()?;
            return Ok(Prp::Or(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn prp_and(&mut self) -> PResult<Prp> {
        let lhs = self.prp_atom()?;
        if self.eat("&") {
            let rhs = self.prp_and()?;
            return Ok(Prp::And(Box::new(lhs), Box::new(rhs)));
        }
        Ok(lhs)
    }

    fn prp_atom(&mut self) -> PResult<Prp> {
        if self.eat("true") {
            return Ok(Prp::True);
        }
        if self.eat("false") {
            return Ok(Prp::False);
        }
        if self.eat("[") {
            let ctx = self.ctx_items(&["|-"])?;
            self.expect("|-", "prp")?;
            let family = self.ident("prp")?;
            let mut args = Vec::new();
            while self.starts_atom() {
                args.push(self.term_atom()?);
            }
            self.expect("]", "prp")?;
            return Ok(Prp::Judgment(ctx, family, args));
        }
        if self.at("(") {
            // `(M N) = P` or a parenthesized formula.
            let save = self.pos;
            if let Ok(eq) = self.term_equation() {
                return Ok(eq);
            }
            self.pos = save;
            self.expect("(", "prp")?;
            let p = self.prp()?;
            self.expect(")", "prp")?;
            return Ok(p);
        }
        if self.at_ident() {
            if self.peek_at(1).is_some_and(|t| t.is("[")) {
                let r = self.ident("prp")?;
                let mut ctxs = Vec::new();
                while self.at("[") {
                    ctxs.push(self.ctx()?);
                }
                return Ok(Prp::RelApp(r, ctxs));
            }
            let save = self.pos;
            let t = self.term()?;
            if self.eat("=") {
                let rhs = self.term()?;
                return Ok(Prp::TermEq(t, rhs));
            }
            if let Term::Const(r) = t {
                return Ok(Prp::RelApp(r, Vec::new()));
            }
            self.pos = save;
            self.term()?;
            return Err(self.unexpected(&["="], "prp"));
        }
        if self.at("\\") {
            return self.term_equation();
        }
        Err(self.unexpected(&["true", "false", "[", "(", "identifier", "{", "<"], "prp"))
    }

    fn term_equation(&mut self) -> PResult<Prp> {
        let lhs = self.term()?;
        self.expect("=", "prp")?;
        let rhs = self.term()?;
        Ok(Prp::TermEq(lhs, rhs))
    }
}

fn arrow(dom: Classifier, cod: Classifier) -> Classifier {
    match (dom, cod) {
        (Classifier::KindInDomain, _) | (_, Classifier::KindInDomain) | (Classifier::Kind(_), _) => {
            Classifier::KindInDomain
        }
        (Classifier::Tp(a), Classifier::Tp(b)) => Classifier::Tp(Tp::arrow(a, b)),
        (Classifier::Tp(a), Classifier::Kind(k)) => Classifier::Kind(Kind::arrow(a, k)),
    }
}

/// `id {ctx} | def_prp -> def_prp`
fn is_def_prp(p: &Prp) -> bool {
    match p {
        Prp::RelApp(..) => true,
        Prp::Imp(a, b) => is_def_prp(a) && is_def_prp(b),
        _ => false,
    }
}
