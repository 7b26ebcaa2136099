//! Diagnostics shared by every pass.

use std::fmt;

use serde::Serialize;

/// A position in a source file, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Default)]
pub struct Span {
    pub line: u32,
    pub col: u32,
}

impl Span {
    pub fn new(line: u32, col: u32) -> Self {
        Span { line, col }
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// Machine-readable diagnostic codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub enum Code {
    #[serde(rename = "E-LEX")]
    Lex,
    #[serde(rename = "E-PARSE")]
    Parse,
    #[serde(rename = "E-SECTION")]
    Section,
    #[serde(rename = "E-KIND")]
    Kind,
    #[serde(rename = "E-TYPE")]
    Type,
    #[serde(rename = "E-LEVEL")]
    Level,
    #[serde(rename = "E-RECON")]
    Recon,
    #[serde(rename = "E-DUP")]
    Duplicate,
    #[serde(rename = "E-UNBOUND")]
    Unbound,
    #[serde(rename = "E-SCHEMA")]
    SchemaMismatch,
    #[serde(rename = "E-UNKNOWN-SCHEMA")]
    UnknownSchema,
    #[serde(rename = "E-UNKNOWN-REL")]
    UnknownRelation,
    #[serde(rename = "E-CTXVAR")]
    UnknownCtxVar,
    #[serde(rename = "E-ARITY")]
    Arity,
    #[serde(rename = "E-DIR")]
    Directive,
    #[serde(rename = "E-DEST")]
    UnknownDest,
    #[serde(rename = "E-AMBIG")]
    AmbiguousDest,
    #[serde(rename = "E-CONFLICT")]
    Conflict,
    #[serde(rename = "E-EMPTY")]
    EmptyRendering,
    #[serde(rename = "E-SHAPE")]
    UnsupportedShape,
    #[serde(rename = "E-NOCTX")]
    NoCtxInScope,
    #[serde(rename = "L1")]
    L1,
    #[serde(rename = "L2")]
    L2,
    #[serde(rename = "L3")]
    L3,
    #[serde(rename = "L4")]
    L4,
}

impl Code {
    pub fn as_str(self) -> &'static str {
        match self {
            Code::Lex => "E-LEX",
            Code::Parse => "E-PARSE",
            Code::Section => "E-SECTION",
            Code::Kind => "E-KIND",
            Code::Type => "E-TYPE",
            Code::Level => "E-LEVEL",
            Code::Recon => "E-RECON",
            Code::Duplicate => "E-DUP",
            Code::Unbound => "E-UNBOUND",
            Code::SchemaMismatch => "E-SCHEMA",
            Code::UnknownSchema => "E-UNKNOWN-SCHEMA",
            Code::UnknownRelation => "E-UNKNOWN-REL",
            Code::UnknownCtxVar => "E-CTXVAR",
            Code::Arity => "E-ARITY",
            Code::Directive => "E-DIR",
            Code::UnknownDest => "E-DEST",
            Code::AmbiguousDest => "E-AMBIG",
            Code::Conflict => "E-CONFLICT",
            Code::EmptyRendering => "E-EMPTY",
            Code::UnsupportedShape => "E-SHAPE",
            Code::NoCtxInScope => "E-NOCTX",
            Code::L1 => "L1",
            Code::L2 => "L2",
            Code::L3 => "L3",
            Code::L4 => "L4",
        }
    }

    pub fn is_lint(self) -> bool {
        matches!(self, Code::L1 | Code::L2 | Code::L3 | Code::L4)
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Warning,
    Error,
}

/// A single report from any pass. Used as the error type throughout the crate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, thiserror::Error)]
#[error("[{code}] {message}")]
pub struct Diagnostic {
    pub code: Code,
    pub severity: Severity,
    pub span: Option<Span>,
    pub message: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hint: Option<String>,
}

impl Diagnostic {
    pub fn error(code: Code, message: impl Into<String>) -> Self {
        Diagnostic {
            code,
            severity: Severity::Error,
            span: None,
            message: message.into(),
            hint: None,
        }
    }

    pub fn warning(code: Code, message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            ..Diagnostic::error(code, message)
        }
    }

    pub fn at(mut self, span: Span) -> Self {
        self.span = Some(span);
        self
    }

    /// Attaches a span unless one is already present.
    pub fn or_at(mut self, span: Option<Span>) -> Self {
        if self.span.is_none() {
            self.span = span;
        }
        self
    }

    pub fn with_hint(mut self, hint: impl Into<String>) -> Self {
        self.hint = Some(hint.into());
        self
    }

    pub fn is_error(&self) -> bool {
        self.severity == Severity::Error
    }

    /// `file:line:col: [CODE] message` with the hint appended when present.
    pub fn render_line(&self, file: &str) -> String {
        let span = self.span.unwrap_or_default();
        let mut s = format!(
            "{}:{}:{}: [{}] {}",
            file, span.line, span.col, self.code, self.message
        );
        if let Some(h) = &self.hint {
            s.push_str(" (hint: ");
            s.push_str(h);
            s.push(')');
        }
        s
    }
}

/// One structured record per diagnostic, as emitted by `--json`.
#[derive(Debug, Serialize)]
pub struct Record<'a> {
    pub file: &'a str,
    #[serde(flatten)]
    pub diagnostic: &'a Diagnostic,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_format() {
        let d = Diagnostic::warning(Code::L3, "Pi binder `x` is unused")
            .at(Span::new(4, 7))
            .with_hint("write `tm -> tm`");
        assert_eq!(
            d.render_line("eq.orbi"),
            "eq.orbi:4:7: [L3] Pi binder `x` is unused (hint: write `tm -> tm`)"
        );
    }

    #[test]
    fn structured_record() {
        let d = Diagnostic::error(Code::Kind, "bad").at(Span::new(1, 2));
        let json = serde_json::to_string(&Record { file: "a.orbi", diagnostic: &d }).unwrap();
        assert_eq!(
            json,
            r#"{"file":"a.orbi","code":"E-KIND","severity":"error","span":{"line":1,"col":2},"message":"bad"}"#
        );
    }
}
