//! Line-oriented N-Triples reader and canonical writer.
//!
//! The writer emits one triple per line, LF terminated, in sorted order, so
//! `parse(serialize(g)) == g` and output is byte-stable.

use std::io::{self, Read, Write};

use thiserror::Error;

use super::lexer::{Cursor, SyntaxError, SyntaxErrorKind};
use super::{BlankNode, Graph, Term, Triple};

#[derive(Debug, Error)]
pub enum NTriplesError {
    #[error("I/O error: {0}")]
    Io(#[from] io::Error),
    #[error("input is not valid UTF-8")]
    Utf8,
    #[error("{0}")]
    Syntax(#[from] SyntaxError),
}

pub fn parse_ntriples<R: Read>(mut reader: R) -> Result<Graph, NTriplesError> {
    let mut bytes = Vec::new();
    reader.read_to_end(&mut bytes)?;
    let text = String::from_utf8(bytes).map_err(|_| NTriplesError::Utf8)?;
    Ok(parse_ntriples_str(&text)?)
}

pub fn parse_ntriples_str(text: &str) -> Result<Graph, SyntaxError> {
    parse_ntriples_scoped(text, None)
}

/// Parses with blank node labels made unique to one file: with `Some(n)`
/// every label `b` becomes `b_f{n}`.
pub fn parse_ntriples_scoped(text: &str, file_ordinal: Option<usize>) -> Result<Graph, SyntaxError> {
    let mut graph = Graph::new();
    for (idx, line) in text.lines().enumerate() {
        if let Some(triple) = parse_line(line, idx + 1, file_ordinal)? {
            graph.insert(triple);
        }
    }
    Ok(graph)
}

fn parse_line(line: &str, line_no: usize, file_ordinal: Option<usize>) -> Result<Option<Triple>, SyntaxError> {
    let mut cur = Cursor::new(line, line_no);
    cur.skip_inline_ws();
    if cur.at_end() || cur.peek() == Some('#') || cur.rest().trim().is_empty() {
        return Ok(None);
    }

    let subject_at = cur.mark();
    let subject = match cur.peek() {
        Some('<') => Term::Iri(cur.iri_ref()?),
        Some('_') => Term::BlankNode(scoped(cur.blank_node()?, file_ordinal)),
        Some('"') => return Err(cur.error(SyntaxErrorKind::LiteralSubject)),
        _ => return Err(cur.error(SyntaxErrorKind::Expected("subject IRI or blank node"))),
    };
    cur.skip_inline_ws();

    let predicate = match cur.peek() {
        Some('<') => cur.iri_ref()?,
        None => return Err(cur.error(SyntaxErrorKind::Expected("predicate"))),
        _ => return Err(cur.error(SyntaxErrorKind::PredicateNotIri)),
    };
    cur.skip_inline_ws();

    let object = match cur.peek() {
        Some('<') => Term::Iri(cur.iri_ref()?),
        Some('_') => Term::BlankNode(scoped(cur.blank_node()?, file_ordinal)),
        Some('"') => {
            let start = cur.mark();
            let lexical = cur.quoted_string()?;
            Term::Literal(cur.literal_with_suffix(lexical, start, |c| c.iri_ref())?)
        }
        _ => return Err(cur.error(SyntaxErrorKind::Expected("object"))),
    };
    cur.skip_inline_ws();

    if !cur.eat('.') {
        return Err(cur.error(SyntaxErrorKind::MissingDot));
    }
    cur.skip_inline_ws();
    if !(cur.at_end() || cur.peek() == Some('#') || cur.rest().trim().is_empty()) {
        return Err(cur.error(SyntaxErrorKind::TrailingInput));
    }

    Triple::new(subject, predicate, object)
        .map(Some)
        .map_err(|e| cur.error_at(subject_at, SyntaxErrorKind::InvalidTerm(e)))
}

fn scoped(node: BlankNode, file_ordinal: Option<usize>) -> BlankNode {
    match file_ordinal {
        Some(n) => BlankNode::new(format!("{}_f{n}", node.label())).expect("suffix keeps label valid"),
        None => node,
    }
}

pub fn serialize_ntriples<W: Write>(graph: &Graph, mut writer: W) -> io::Result<()> {
    for triple in graph.iter() {
        writeln!(writer, "{triple}")?;
    }
    Ok(())
}

pub fn to_ntriples_string(graph: &Graph) -> String {
    let mut out = Vec::new();
    serialize_ntriples(graph, &mut out).expect("writing to a Vec cannot fail");
    String::from_utf8(out).expect("serializer emits UTF-8")
}
