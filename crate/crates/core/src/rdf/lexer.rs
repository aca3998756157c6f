//! Character cursor and term-level lexing shared by the N-Triples and query
//! parsers.

use std::fmt;

use thiserror::Error;

use super::term::{is_iri_char, is_language_tag};
use super::{BlankNode, Iri, Literal, TermError};

/// What went wrong while parsing text input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SyntaxErrorKind {
    #[error("unterminated IRI")]
    UnterminatedIri,
    #[error("unterminated literal")]
    UnterminatedLiteral,
    #[error("invalid escape sequence")]
    InvalidEscape,
    #[error("missing terminating '.'")]
    MissingDot,
    #[error("literal in subject position")]
    LiteralSubject,
    #[error("predicate must be an IRI")]
    PredicateNotIri,
    #[error("unknown prefix {0:?}")]
    UnknownPrefix(String),
    #[error("empty pattern block")]
    EmptyPatternBlock,
    #[error("projected variable ?{0} does not occur in the patterns")]
    UnboundProjection(String),
    #[error("invalid variable name")]
    InvalidVariable,
    #[error("expected {0}")]
    Expected(&'static str),
    #[error("unexpected trailing input")]
    TrailingInput,
    #[error("invalid term: {0}")]
    InvalidTerm(TermError),
}

/// A syntax error with a 1-based line and column (in characters).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub struct SyntaxError {
    pub line: usize,
    pub column: usize,
    pub kind: SyntaxErrorKind,
}

impl fmt::Display for SyntaxError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.column, self.kind)
    }
}

#[derive(Clone)]
pub(crate) struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    line: usize,
    column: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(src: &'a str, line: usize) -> Self {
        Self {
            src,
            pos: 0,
            line,
            column: 1,
        }
    }

    pub fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    pub fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    pub fn peek_nth(&self, n: usize) -> Option<char> {
        self.rest().chars().nth(n)
    }

    pub fn at_end(&self) -> bool {
        self.pos >= self.src.len()
    }

    pub fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    pub fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(c) {
            self.bump();
            true
        } else {
            false
        }
    }

    /// Consumes `word` if the input starts with it, ignoring ASCII case.
    pub fn eat_keyword(&mut self, word: &str) -> bool {
        let rest = self.rest();
        let matches = rest.len() >= word.len()
            && rest.is_char_boundary(word.len())
            && rest[..word.len()].eq_ignore_ascii_case(word)
            && !rest[word.len()..]
                .chars()
                .next()
                .is_some_and(|c| c.is_alphanumeric() || c == '_' || c == ':');
        if matches {
            for _ in 0..word.chars().count() {
                self.bump();
            }
        }
        matches
    }

    /// Skips spaces and tabs only.
    pub fn skip_inline_ws(&mut self) {
        while matches!(self.peek(), Some(' ' | '\t')) {
            self.bump();
        }
    }

    /// Skips all whitespace and `#` comments.
    pub fn skip_ws_and_comments(&mut self) {
        loop {
            match self.peek() {
                Some(c) if c.is_whitespace() => {
                    self.bump();
                }
                Some('#') => {
                    while !matches!(self.peek(), None | Some('\n')) {
                        self.bump();
                    }
                }
                _ => break,
            }
        }
    }

    pub fn mark(&self) -> (usize, usize) {
        (self.line, self.column)
    }

    pub fn error(&self, kind: SyntaxErrorKind) -> SyntaxError {
        SyntaxError {
            line: self.line,
            column: self.column,
            kind,
        }
    }

    pub fn error_at(&self, (line, column): (usize, usize), kind: SyntaxErrorKind) -> SyntaxError {
        SyntaxError { line, column, kind }
    }

    /// `<...>` with UCHAR escapes.
    pub fn iri_ref(&mut self) -> Result<Iri, SyntaxError> {
        let start = self.mark();
        if !self.eat('<') {
            return Err(self.error(SyntaxErrorKind::Expected("'<'")));
        }
        let mut value = String::new();
        loop {
            match self.peek() {
                None | Some('\n') => return Err(self.error_at(start, SyntaxErrorKind::UnterminatedIri)),
                Some('>') => {
                    self.bump();
                    break;
                }
                Some('\\') => {
                    let at = self.mark();
                    self.bump();
                    let c = match self.bump() {
                        Some('u') => self.hex_escape(4, at)?,
                        Some('U') => self.hex_escape(8, at)?,
                        _ => return Err(self.error_at(at, SyntaxErrorKind::InvalidEscape)),
                    };
                    value.push(c);
                }
                Some(c) if is_iri_char(c) => {
                    self.bump();
                    value.push(c);
                }
                Some(c) if c.is_whitespace() => return Err(self.error_at(start, SyntaxErrorKind::UnterminatedIri)),
                Some(c) => return Err(self.error(SyntaxErrorKind::InvalidTerm(TermError::InvalidIriChar(c)))),
            }
        }
        Iri::new(&value).map_err(|e| self.error_at(start, SyntaxErrorKind::InvalidTerm(e)))
    }

    fn hex_escape(&mut self, digits: usize, at: (usize, usize)) -> Result<char, SyntaxError> {
        let mut code = 0u32;
        for _ in 0..digits {
            let d = self
                .peek()
                .and_then(|c| c.to_digit(16))
                .ok_or_else(|| self.error_at(at, SyntaxErrorKind::InvalidEscape))?;
            self.bump();
            code = code * 16 + d;
        }
        char::from_u32(code).ok_or_else(|| self.error_at(at, SyntaxErrorKind::InvalidEscape))
    }

    /// `"..."` with ECHAR and UCHAR escapes; returns the unescaped body.
    pub fn quoted_string(&mut self) -> Result<String, SyntaxError> {
        let start = self.mark();
        if !self.eat('"') {
            return Err(self.error(SyntaxErrorKind::Expected("'\"'")));
        }
        let mut value = String::new();
        loop {
            match self.peek() {
                None | Some('\n') | Some('\r') => {
                    return Err(self.error_at(start, SyntaxErrorKind::UnterminatedLiteral))
                }
                Some('"') => {
                    self.bump();
                    return Ok(value);
                }
                Some('\\') => {
                    let at = self.mark();
                    self.bump();
                    let c = match self.bump() {
                        Some('t') => '\t',
                        Some('b') => '\u{8}',
                        Some('n') => '\n',
                        Some('r') => '\r',
                        Some('f') => '\u{c}',
                        Some('"') => '"',
                        Some('\'') => '\'',
                        Some('\\') => '\\',
                        Some('u') => self.hex_escape(4, at)?,
                        Some('U') => self.hex_escape(8, at)?,
                        None => return Err(self.error_at(start, SyntaxErrorKind::UnterminatedLiteral)),
                        Some(_) => return Err(self.error_at(at, SyntaxErrorKind::InvalidEscape)),
                    };
                    value.push(c);
                }
                Some(c) => {
                    self.bump();
                    value.push(c);
                }
            }
        }
    }

    /// After the closing quote: an optional `@lang`. `^^` handling is left
    /// to the caller because the datatype syntax differs between formats.
    pub fn language_tag(&mut self) -> Result<Option<String>, SyntaxError> {
        if self.peek() != Some('@') {
            return Ok(None);
        }
        let at = self.mark();
        self.bump();
        let mut tag = String::new();
        while let Some(c) = self.peek() {
            if c.is_ascii_alphanumeric() || c == '-' {
                tag.push(c);
                self.bump();
            } else {
                break;
            }
        }
        if !is_language_tag(&tag) {
            return Err(self.error_at(at, SyntaxErrorKind::InvalidTerm(TermError::InvalidLanguageTag(tag))));
        }
        Ok(Some(tag))
    }

    /// `_:label`; a trailing `.` is left for the statement terminator.
    pub fn blank_node(&mut self) -> Result<BlankNode, SyntaxError> {
        let start = self.mark();
        if !(self.eat('_') && self.eat(':')) {
            return Err(self.error_at(start, SyntaxErrorKind::Expected("'_:'")));
        }
        let body = self.rest();
        let mut len = body
            .char_indices()
            .find(|&(_, c)| !(c.is_alphanumeric() || matches!(c, '_' | '-' | '.')))
            .map_or(body.len(), |(i, _)| i);
        while body[..len].ends_with('.') {
            len -= 1;
        }
        let label = &body[..len];
        for _ in 0..label.chars().count() {
            self.bump();
        }
        BlankNode::new(label).map_err(|e| self.error_at(start, SyntaxErrorKind::InvalidTerm(e)))
    }

    /// Finishes a literal after its quoted body has been read.
    pub fn literal_with_suffix(
        &mut self,
        lexical: String,
        start: (usize, usize),
        datatype: impl FnOnce(&mut Self) -> Result<Iri, SyntaxError>,
    ) -> Result<Literal, SyntaxError> {
        if let Some(tag) = self.language_tag()? {
            return Literal::with_language(lexical, &tag)
                .map_err(|e| self.error_at(start, SyntaxErrorKind::InvalidTerm(e)));
        }
        if self.rest().starts_with("^^") {
            self.bump();
            self.bump();
            let dt = datatype(self)?;
            return Literal::typed(lexical, dt).map_err(|e| self.error_at(start, SyntaxErrorKind::InvalidTerm(e)));
        }
        Ok(Literal::simple(lexical))
    }
}
