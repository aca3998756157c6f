use std::cmp::Ordering;
use std::fmt;
use std::iter::once;
use std::sync::Arc;

use thiserror::Error;

use super::vocab;

/// Rejected term construction.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error("IRI must not be empty")]
    EmptyIri,
    #[error("IRI contains forbidden character {0:?}")]
    InvalidIriChar(char),
    #[error("invalid blank node label {0:?}")]
    InvalidBlankLabel(String),
    #[error("invalid language tag {0:?}")]
    InvalidLanguageTag(String),
    #[error("rdf:langString literal requires a language tag")]
    LangStringWithoutTag,
    #[error("literal in subject position")]
    LiteralSubject,
}

/// An IRI, compared syntactically. No normalization is applied.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Iri(Arc<str>);

impl Iri {
    pub fn new(value: impl AsRef<str>) -> Result<Self, TermError> {
        let value = value.as_ref();
        if value.is_empty() {
            return Err(TermError::EmptyIri);
        }
        if let Some(c) = value.chars().find(|&c| !is_iri_char(c)) {
            return Err(TermError::InvalidIriChar(c));
        }
        Ok(Self(Arc::from(value)))
    }

    /// For compile-time vocabulary constants that are known to be valid.
    pub(crate) fn from_static(value: &'static str) -> Self {
        debug_assert!(Self::new(value).is_ok());
        Self(Arc::from(value))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    fn sort_chars(&self) -> impl Iterator<Item = char> + '_ {
        self.0.chars().chain(once('>'))
    }
}

pub(crate) fn is_iri_char(c: char) -> bool {
    !(c.is_whitespace() || c.is_control() || matches!(c, '<' | '>' | '"' | '{' | '}' | '|' | '^' | '`' | '\\'))
}

// Ordering follows the N-Triples serialization `<value>` so that sorted
// terms and sorted output lines agree.
impl Ord for Iri {
    fn cmp(&self, other: &Self) -> Ordering {
        // UTF-8 byte order is code point order, and '>' never occurs inside
        // an IRI, so a byte comparison with '>' as terminator suffices.
        let (a, b) = (self.0.as_bytes(), other.0.as_bytes());
        let n = a.iter().zip(b).take_while(|(x, y)| x == y).count();
        match (a.get(n), b.get(n)) {
            (Some(x), Some(y)) => x.cmp(y),
            (None, None) => Ordering::Equal,
            (None, Some(y)) => b'>'.cmp(y),
            (Some(x), None) => x.cmp(&b'>'),
        }
    }
}

impl PartialOrd for Iri {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

impl fmt::Debug for Iri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}>", self.0)
    }
}

/// A blank node label, without the `_:` prefix.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BlankNode(Arc<str>);

impl BlankNode {
    pub fn new(label: impl AsRef<str>) -> Result<Self, TermError> {
        let label = label.as_ref();
        let valid = label.chars().next().is_some_and(|c| c.is_alphanumeric() || c == '_')
            && label
                .chars()
                .all(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | '.'))
            && !label.ends_with('.');
        if !valid {
            return Err(TermError::InvalidBlankLabel(label.to_owned()));
        }
        Ok(Self(Arc::from(label)))
    }

    pub fn label(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for BlankNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "_:{}", self.0)
    }
}

/// An RDF literal. Plain literals carry the `xsd:string` datatype, language
/// tagged ones `rdf:langString` with a lowercase tag.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Literal {
    lexical: Arc<str>,
    datatype: Iri,
    language: Option<Arc<str>>,
}

impl Literal {
    pub fn simple(lexical: impl AsRef<str>) -> Self {
        Self {
            lexical: Arc::from(lexical.as_ref()),
            datatype: vocab::xsd_string(),
            language: None,
        }
    }

    pub fn typed(lexical: impl AsRef<str>, datatype: Iri) -> Result<Self, TermError> {
        if datatype.as_str() == vocab::RDF_LANG_STRING {
            return Err(TermError::LangStringWithoutTag);
        }
        Ok(Self {
            lexical: Arc::from(lexical.as_ref()),
            datatype,
            language: None,
        })
    }

    pub fn with_language(lexical: impl AsRef<str>, tag: &str) -> Result<Self, TermError> {
        if !is_language_tag(tag) {
            return Err(TermError::InvalidLanguageTag(tag.to_owned()));
        }
        Ok(Self {
            lexical: Arc::from(lexical.as_ref()),
            datatype: vocab::rdf_lang_string(),
            language: Some(Arc::from(tag.to_ascii_lowercase())),
        })
    }

    pub fn lexical_form(&self) -> &str {
        &self.lexical
    }

    pub fn datatype(&self) -> &Iri {
        &self.datatype
    }

    pub fn language(&self) -> Option<&str> {
        self.language.as_deref()
    }

    fn sort_chars(&self) -> impl Iterator<Item = char> + '_ {
        let datatype = match (&self.language, self.datatype.as_str()) {
            (None, dt) if dt != vocab::XSD_STRING => Some(dt),
            _ => None,
        };
        once('"')
            .chain(self.lexical.chars().flat_map(escape_char))
            .chain(once('"'))
            .chain(self.language.iter().flat_map(|tag| once('@').chain(tag.chars())))
            .chain(
                datatype
                    .into_iter()
                    .flat_map(|dt| "^^<".chars().chain(dt.chars()).chain(once('>'))),
            )
    }
}

pub(crate) fn is_language_tag(tag: &str) -> bool {
    let mut parts = tag.split('-');
    let primary_ok = parts
        .next()
        .is_some_and(|p| !p.is_empty() && p.chars().all(|c| c.is_ascii_alphabetic()));
    primary_ok && parts.all(|p| !p.is_empty() && p.chars().all(|c| c.is_ascii_alphanumeric()))
}

fn escape_char(c: char) -> impl Iterator<Item = char> {
    let (first, second) = match c {
        '"' => ('\\', Some('"')),
        '\\' => ('\\', Some('\\')),
        '\n' => ('\\', Some('n')),
        '\r' => ('\\', Some('r')),
        other => (other, None),
    };
    once(first).chain(second)
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use fmt::Write;
        for c in self.sort_chars() {
            f.write_char(c)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// An RDF term: IRI, blank node or literal.
#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Iri(Iri),
    BlankNode(BlankNode),
    Literal(Literal),
}

impl Term {
    pub fn iri(value: impl AsRef<str>) -> Result<Self, TermError> {
        Iri::new(value).map(Term::Iri)
    }

    pub fn blank(label: impl AsRef<str>) -> Result<Self, TermError> {
        BlankNode::new(label).map(Term::BlankNode)
    }

    pub fn literal(lexical: impl AsRef<str>) -> Self {
        Term::Literal(Literal::simple(lexical))
    }

    pub fn as_iri(&self) -> Option<&Iri> {
        match self {
            Term::Iri(iri) => Some(iri),
            _ => None,
        }
    }

    pub fn as_literal(&self) -> Option<&Literal> {
        match self {
            Term::Literal(lit) => Some(lit),
            _ => None,
        }
    }

    pub fn is_literal(&self) -> bool {
        matches!(self, Term::Literal(_))
    }

    /// Characters of the N-Triples serialization, produced lazily.
    fn sort_chars(&self) -> impl Iterator<Item = char> + '_ {
        let (iri, blank, literal) = match self {
            Term::Iri(i) => (Some(i), None, None),
            Term::BlankNode(b) => (None, Some(b), None),
            Term::Literal(l) => (None, None, Some(l)),
        };
        iri.into_iter()
            .flat_map(|i| once('<').chain(i.sort_chars()))
            .chain(blank.into_iter().flat_map(|b| "_:".chars().chain(b.0.chars())))
            .chain(literal.into_iter().flat_map(Literal::sort_chars))
    }
}

impl Ord for Term {
    fn cmp(&self, other: &Self) -> Ordering {
        // Serializations start with '"', '<' or '_', in that order.
        fn rank(t: &Term) -> u8 {
            match t {
                Term::Literal(_) => 0,
                Term::Iri(_) => 1,
                Term::BlankNode(_) => 2,
            }
        }
        match (self, other) {
            (Term::Iri(a), Term::Iri(b)) => a.cmp(b),
            (Term::BlankNode(a), Term::BlankNode(b)) => a.0.cmp(&b.0),
            (Term::Literal(a), Term::Literal(b)) if a == b => Ordering::Equal,
            (Term::Literal(_), Term::Literal(_)) => self.sort_chars().cmp(other.sort_chars()),
            _ => rank(self).cmp(&rank(other)),
        }
    }
}

impl PartialOrd for Term {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Iri(i) => fmt::Display::fmt(i, f),
            Term::BlankNode(b) => write!(f, "_:{}", b.0),
            Term::Literal(l) => fmt::Display::fmt(l, f),
        }
    }
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<Iri> for Term {
    fn from(iri: Iri) -> Self {
        Term::Iri(iri)
    }
}

impl From<BlankNode> for Term {
    fn from(b: BlankNode) -> Self {
        Term::BlankNode(b)
    }
}

impl From<Literal> for Term {
    fn from(l: Literal) -> Self {
        Term::Literal(l)
    }
}

/// A well-formed triple: the subject is never a literal, the predicate is an IRI.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Triple {
    subject: Term,
    predicate: Iri,
    object: Term,
}

impl Triple {
    pub fn new(subject: Term, predicate: Iri, object: Term) -> Result<Self, TermError> {
        if subject.is_literal() {
            return Err(TermError::LiteralSubject);
        }
        Ok(Self {
            subject,
            predicate,
            object,
        })
    }

    pub fn subject(&self) -> &Term {
        &self.subject
    }

    pub fn predicate(&self) -> &Iri {
        &self.predicate
    }

    pub fn object(&self) -> &Term {
        &self.object
    }

    pub fn into_parts(self) -> (Term, Iri, Term) {
        (self.subject, self.predicate, self.object)
    }
}

impl fmt::Display for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {} .", self.subject, self.predicate, self.object)
    }
}

impl fmt::Debug for Triple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
