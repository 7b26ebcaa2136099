use std::fmt;

use crate::diag::{Code, Diagnostic, Span};

pub const KEYWORDS: [&str; 8] = [
    "type", "schema", "block", "inductive", "theorem", "prop", "true", "false",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TokenKind {
    /// Identifier starting with a lowercase letter.
    Ident,
    /// Identifier starting with an uppercase letter.
    UpperIdent,
    Keyword,
    Punct,
    /// A whole `%%` line; the lexeme is the text after `%%`, trimmed.
    Directive,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub lexeme: String,
    pub span: Span,
}

impl Token {
    pub fn is_ident(&self) -> bool {
        matches!(self.kind, TokenKind::Ident | TokenKind::UpperIdent)
    }

    pub fn is(&self, lexeme: &str) -> bool {
        matches!(self.kind, TokenKind::Punct | TokenKind::Keyword) && self.lexeme == lexeme
    }
}

impl fmt::Display for Token {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            TokenKind::Directive => write!(f, "directive `%% {}`", self.lexeme),
            _ => write!(f, "`{}`", self.lexeme),
        }
    }
}

// Longest first.
const PUNCT: [&str; 21] = [
    "->", "<-", "|-", "||", ":", ".", "{", "}", "(", ")", "[", "]", "\\", "=", ";", ",", "+", "|",
    "&", "<", ">",
];

pub fn is_ident_start(c: char) -> bool {
    c.is_ascii_alphabetic()
}

pub fn is_ident_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || c == '_' || c == '\''
}

/// Splits `source` into tokens. `%%` lines become directive tokens; other
/// `%` comments are dropped.
pub fn tokenize(source: &str) -> Result<Vec<Token>, Diagnostic> {
    let mut tokens = Vec::new();
    for (lineno, line) in source.lines().enumerate() {
        let line_no = lineno as u32 + 1;
        let chars: Vec<char> = line.chars().collect();
        let mut i = 0;
        while i < chars.len() {
            let c = chars[i];
            let span = Span::new(line_no, i as u32 + 1);
            if c.is_whitespace() {
                i += 1;
                continue;
            }
            if c == '%' {
                if chars.get(i + 1) == Some(&'%') {
                    let text: String = chars[i + 2..].iter().collect();
                    tokens.push(Token {
                        kind: TokenKind::Directive,
                        lexeme: text.trim().to_string(),
                        span,
                    });
                }
                break;
            }
            if is_ident_start(c) {
                let start = i;
                while i < chars.len() && is_ident_char(chars[i]) {
                    i += 1;
                }
                let word: String = chars[start..i].iter().collect();
                let kind = if KEYWORDS.contains(&word.as_str()) {
                    TokenKind::Keyword
                } else if c.is_ascii_uppercase() {
                    TokenKind::UpperIdent
                } else {
                    TokenKind::Ident
                };
                tokens.push(Token { kind, lexeme: word, span });
                continue;
            }
            let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
            match PUNCT.iter().find(|p| rest.starts_with(**p)) {
                Some(p) => {
                    tokens.push(Token {
                        kind: TokenKind::Punct,
                        lexeme: p.to_string(),
                        span,
                    });
                    i += p.len();
                }
                None => {
                    return Err(Diagnostic::error(
                        Code::Lex,
                        format!("illegal character `{c}`"),
                    )
                    .at(span))
                }
            }
        }
    }
    Ok(tokens)
}
