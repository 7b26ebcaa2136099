//! Abstract syntax of ORBI specifications.
//!
//! Terms, types and kinds use binding-depth indices for variables bound by
//! `\x.` and `{x:A}`; the surface names are kept only as printing hints and
//! are ignored by equality. Identifiers not bound by a binder are `Const`s;
//! whether they denote signature constants, block labels, schematic
//! variables or theorem variables is decided by the checkers.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::diag::Span;

/// A variable occurrence.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Var {
    /// Binding depth: 0 is the innermost enclosing binder.
    Bound(usize),
    /// A named free variable, introduced when the checker opens a binder.
    Free(String),
}

#[derive(Debug, Clone, Eq)]
pub enum Term {
    Var(Var),
    Const(String),
    Lam(String, Box<Term>),
    App(Box<Term>, Box<Term>),
}

#[derive(Debug, Clone, Eq)]
pub enum Tp {
    /// `a M1 ... Mn`
    Atom(String, Vec<Term>),
    /// `A -> B`; `B <- A` is read as this form.
    Arrow(Box<Tp>, Box<Tp>),
    /// `{x:A} B`; the codomain sees `x` at depth 0.
    Pi(String, Box<Tp>, Box<Tp>),
}

#[derive(Debug, Clone, Eq)]
pub enum Kind {
    Type,
    Arrow(Box<Tp>, Box<Kind>),
    Pi(String, Box<Tp>, Box<Kind>),
}

// Equality ignores binder name hints, which makes `==` alpha-equivalence.

impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Term::Var(a), Term::Var(b)) => a == b,
            (Term::Const(a), Term::Const(b)) => a == b,
            (Term::Lam(_, a), Term::Lam(_, b)) => a == b,
            (Term::App(f, a), Term::App(g, b)) => f == g && a == b,
            _ => false,
        }
    }
}

impl PartialEq for Tp {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Tp::Atom(a, xs), Tp::Atom(b, ys)) => a == b && xs == ys,
            (Tp::Arrow(a, b), Tp::Arrow(c, d)) => a == c && b == d,
            (Tp::Pi(_, a, b), Tp::Pi(_, c, d)) => a == c && b == d,
            _ => false,
        }
    }
}

impl PartialEq for Kind {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Kind::Type, Kind::Type) => true,
            (Kind::Arrow(a, b), Kind::Arrow(c, d)) => a == c && b == d,
            (Kind::Pi(_, a, b), Kind::Pi(_, c, d)) => a == c && b == d,
            _ => false,
        }
    }
}

impl Term {
    pub fn cnst(name: &str) -> Term {
        Term::Const(name.to_string())
    }

    pub fn bound(i: usize) -> Term {
        Term::Var(Var::Bound(i))
    }

    pub fn free(name: &str) -> Term {
        Term::Var(Var::Free(name.to_string()))
    }

    pub fn lam(hint: &str, body: Term) -> Term {
        Term::Lam(hint.to_string(), Box::new(body))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Box::new(f), Box::new(a))
    }

    /// Left-nested application of `head` to `args`.
    pub fn apps(head: Term, args: impl IntoIterator<Item = Term>) -> Term {
        args.into_iter().fold(head, Term::app)
    }

    /// Splits an application spine into its head and arguments.
    pub fn spine(&self) -> (&Term, Vec<&Term>) {
        let mut args = Vec::new();
        let mut t = self;
        while let Term::App(f, a) = t {
            args.push(&**a);
            t = f;
        }
        args.reverse();
        (t, args)
    }
}

impl Tp {
    pub fn atom(family: &str, args: Vec<Term>) -> Tp {
        Tp::Atom(family.to_string(), args)
    }

    pub fn arrow(dom: Tp, cod: Tp) -> Tp {
        Tp::Arrow(Box::new(dom), Box::new(cod))
    }

    pub fn pi(hint: &str, dom: Tp, cod: Tp) -> Tp {
        Tp::Pi(hint.to_string(), Box::new(dom), Box::new(cod))
    }

    /// The family at the end of the arrow/Pi chain.
    pub fn target_family(&self) -> &str {
        match self {
            Tp::Atom(a, _) => a,
            Tp::Arrow(_, b) | Tp::Pi(_, _, b) => b.target_family(),
        }
    }
}

impl Kind {
    pub fn arrow(dom: Tp, cod: Kind) -> Kind {
        Kind::Arrow(Box::new(dom), Box::new(cod))
    }

    /// Number of arguments a family of this kind takes.
    pub fn arity(&self) -> usize {
        match self {
            Kind::Type => 0,
            Kind::Arrow(_, k) | Kind::Pi(_, _, k) => 1 + k.arity(),
        }
    }

    pub fn pi(hint: &str, dom: Tp, cod: Kind) -> Kind {
        Kind::Pi(hint.to_string(), Box::new(dom), Box::new(cod))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decl {
    Const { name: String, tp: Tp },
    Family { name: String, kind: Kind },
}

impl Decl {
    pub fn name(&self) -> &str {
        match self {
            Decl::Const { name, .. } | Decl::Family { name, .. } => name,
        }
    }
}

/// An ordered group of assumptions. Later entries refer to earlier labels
/// by name (as `Const(label)`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Block {
    pub entries: Vec<(String, Tp)>,
}

impl Block {
    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.entries.iter().map(|(l, _)| l.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Schema {
    pub name: String,
    pub alternatives: Vec<Block>,
}

/// `[]`, `[g]`, or a pattern extended by a labelled block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CtxPattern {
    Empty,
    Var(String),
    Snoc(Box<CtxPattern>, String, Block),
}

impl CtxPattern {
    /// The head context variable, if any.
    pub fn head_var(&self) -> Option<&str> {
        match self {
            CtxPattern::Empty => None,
            CtxPattern::Var(g) => Some(g),
            CtxPattern::Snoc(p, _, _) => p.head_var(),
        }
    }

    /// Appended blocks, outermost last.
    pub fn blocks(&self) -> Vec<(&str, &Block)> {
        let mut out = Vec::new();
        let mut p = self;
        while let CtxPattern::Snoc(prefix, label, block) = p {
            out.push((label.as_str(), block));
            p = prefix;
        }
        out.reverse();
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Prp {
    RelApp(String, Vec<CtxPattern>),
    Judgment(CtxPattern, String, Vec<Term>),
    TermEq(Term, Term),
    False,
    True,
    And(Box<Prp>, Box<Prp>),
    Or(Box<Prp>, Box<Prp>),
    Imp(Box<Prp>, Box<Prp>),
    ForallCtx(String, String, Box<Prp>),
    ForallTm(String, Tp, Box<Prp>),
    ExistsTm(String, Tp, Box<Prp>),
}

impl Prp {
    pub fn imp(a: Prp, b: Prp) -> Prp {
        Prp::Imp(Box::new(a), Box::new(b))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefClause {
    pub name: String,
    pub prp: Prp,
}

/// An inductive relation between contexts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InductiveDef {
    pub name: String,
    /// `(ctx-var, schema)` in declaration order.
    pub params: Vec<(String, String)>,
    pub clauses: Vec<DefClause>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Theorem {
    pub name: String,
    pub statement: Prp,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Section {
    Syntax,
    Judgments,
    Rules,
    Schemas,
    Definitions,
    Directives,
    Theorems,
}

impl Section {
    pub const ALL: [Section; 7] = [
        Section::Syntax,
        Section::Judgments,
        Section::Rules,
        Section::Schemas,
        Section::Definitions,
        Section::Directives,
        Section::Theorems,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Section::Syntax => "Syntax",
            Section::Judgments => "Judgments",
            Section::Rules => "Rules",
            Section::Schemas => "Schemas",
            Section::Definitions => "Definitions",
            Section::Directives => "Directives",
            Section::Theorems => "Theorems",
        }
    }

    pub fn from_name(s: &str) -> Option<Section> {
        Section::ALL.into_iter().find(|sec| sec.name() == s)
    }
}

/// Target systems: Hybrid, Abella, Beluga, Twelf.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SystemId {
    Hy,
    Ab,
    Bel,
    Tw,
}

impl SystemId {
    pub const ALL: [SystemId; 4] = [SystemId::Hy, SystemId::Ab, SystemId::Bel, SystemId::Tw];

    pub fn as_str(self) -> &'static str {
        match self {
            SystemId::Hy => "hy",
            SystemId::Ab => "ab",
            SystemId::Bel => "bel",
            SystemId::Tw => "tw",
        }
    }

    pub fn from_name(s: &str) -> Option<SystemId> {
        SystemId::ALL.into_iter().find(|sy| sy.as_str() == s)
    }
}

impl fmt::Display for SystemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum What {
    Wf,
    Explicit,
    Implicit,
}

impl What {
    pub fn as_str(self) -> &'static str {
        match self {
            What::Wf => "wf",
            What::Explicit => "explicit",
            What::Implicit => "implicit",
        }
    }
}

/// Where a directive applies.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Dest {
    /// `in id`: any namespace.
    Ident(String),
    /// `in owner.var`: a relation parameter or a theorem variable.
    Qualified(String, String),
    /// `in [g]`: a context variable.
    Ctx(String),
}

impl fmt::Display for Dest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Dest::Ident(x) => write!(f, "in {x}"),
            Dest::Qualified(o, x) => write!(f, "in {o}.{x}"),
            Dest::Ctx(g) => write!(f, "in [{g}]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Directive {
    pub what: What,
    pub systems: BTreeSet<SystemId>,
    pub dest: Dest,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DirectiveLine {
    Separator(Section),
    Annotation(Directive),
}

/// Identifies a declaration for source-location lookup.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Item {
    Decl(String),
    Schema(String),
    Def(String),
    Theorem(String),
    Directive(usize),
}

/// A parsed specification. Equality ignores source locations.
#[derive(Debug, Clone, Default)]
pub struct OrbiSpec {
    pub syntax_decls: Vec<Decl>,
    pub judgment_decls: Vec<Decl>,
    pub rules: Vec<Decl>,
    pub schemas: Vec<Schema>,
    pub definitions: Vec<InductiveDef>,
    pub directives: Vec<Directive>,
    pub theorems: Vec<Theorem>,
    pub locations: BTreeMap<Item, Span>,
}

impl PartialEq for OrbiSpec {
    fn eq(&self, o: &Self) -> bool {
        self.syntax_decls == o.syntax_decls
            && self.judgment_decls == o.judgment_decls
            && self.rules == o.rules
            && self.schemas == o.schemas
            && self.definitions == o.definitions
            && self.directives == o.directives
            && self.theorems == o.theorems
    }
}

impl OrbiSpec {
    pub fn span(&self, item: &Item) -> Option<Span> {
        self.locations.get(item).copied()
    }

    pub fn decl_span(&self, name: &str) -> Option<Span> {
        self.span(&Item::Decl(name.to_string()))
    }

    /// All signature declarations with the section they came from, in order.
    pub fn signature_decls(&self) -> impl Iterator<Item = (Section, &Decl)> {
        self.syntax_decls
            .iter()
            .map(|d| (Section::Syntax, d))
            .chain(self.judgment_decls.iter().map(|d| (Section::Judgments, d)))
            .chain(self.rules.iter().map(|d| (Section::Rules, d)))
    }

    pub fn schema(&self, name: &str) -> Option<&Schema> {
        self.schemas.iter().find(|s| s.name == name)
    }

    pub fn definition(&self, name: &str) -> Option<&InductiveDef> {
        self.definitions.iter().find(|d| d.name == name)
    }

    pub fn theorem(&self, name: &str) -> Option<&Theorem> {
        self.theorems.iter().find(|t| t.name == name)
    }
}
