//! Parser for the supported SELECT subset:
//!
//! ```text
//! query   := prefix* 'SELECT' var+ 'WHERE' '{' pattern ('.' pattern)* '.'? '}'
//! prefix  := 'PREFIX' PNAME_NS IRIREF
//! term    := IRIREF | prefixed-name | 'a' | literal | blank-node | var
//! ```
//!
//! Keywords are case-insensitive, `#` starts a comment.

use std::collections::BTreeMap;

use super::{BasicGraphPattern, PatternError, TermPattern, TriplePattern, Variable};
use crate::rdf::lexer::{Cursor, SyntaxError, SyntaxErrorKind};
use crate::rdf::{vocab, Iri, Term};

pub fn parse_query(text: &str) -> Result<BasicGraphPattern, SyntaxError> {
    QueryParser {
        cur: Cursor::new(text, 1),
        prefixes: BTreeMap::new(),
    }
    .query()
}

struct QueryParser<'a> {
    cur: Cursor<'a>,
    prefixes: BTreeMap<String, String>,
}

impl QueryParser<'_> {
    fn query(mut self) -> Result<BasicGraphPattern, SyntaxError> {
        self.ws();
        while self.cur.eat_keyword("PREFIX") {
            self.ws();
            let name = self.prefix_name()?;
            self.ws();
            let iri = self.cur.iri_ref()?;
            self.prefixes.insert(name, iri.as_str().to_owned());
            self.ws();
        }

        if !self.cur.eat_keyword("SELECT") {
            return Err(self.cur.error(SyntaxErrorKind::Expected("SELECT")));
        }
        self.ws();
        let mut projection = Vec::new();
        while self.cur.peek() == Some('?') {
            projection.push((self.cur.mark(), self.variable()?));
            self.ws();
        }
        if projection.is_empty() {
            return Err(self.cur.error(SyntaxErrorKind::Expected("projected variable")));
        }

        if !self.cur.eat_keyword("WHERE") {
            return Err(self.cur.error(SyntaxErrorKind::Expected("WHERE")));
        }
        self.ws();
        if !self.cur.eat('{') {
            return Err(self.cur.error(SyntaxErrorKind::Expected("'{'")));
        }
        self.ws();

        let block_start = self.cur.mark();
        let mut patterns = Vec::new();
        loop {
            if self.cur.eat('}') {
                break;
            }
            if !patterns.is_empty() {
                if !self.cur.eat('.') {
                    return Err(self.cur.error(SyntaxErrorKind::Expected("'.' or '}'")));
                }
                self.ws();
                if self.cur.eat('}') {
                    break;
                }
            }
            patterns.push(self.triple_pattern()?);
            self.ws();
        }
        if patterns.is_empty() {
            return Err(self.cur.error_at(block_start, SyntaxErrorKind::EmptyPatternBlock));
        }
        self.ws();
        if !self.cur.at_end() {
            return Err(self.cur.error(SyntaxErrorKind::TrailingInput));
        }

        let (positions, vars): (Vec<_>, Vec<Variable>) = projection.into_iter().unzip();
        let vars_for_pos = vars.clone();
        BasicGraphPattern::new(patterns, vars).map_err(|e| match e {
            PatternError::UnboundProjection(name) => {
                let at = positions
                    .iter()
                    .zip(&vars_for_pos)
                    .find(|(_, v)| v.name() == name)
                    .map_or(block_start, |(p, _)| *p);
                self.cur.error_at(at, SyntaxErrorKind::UnboundProjection(name))
            }
            _ => self.cur.error_at(block_start, SyntaxErrorKind::EmptyPatternBlock),
        })
    }

    fn ws(&mut self) {
        self.cur.skip_ws_and_comments();
    }

    fn prefix_name(&mut self) -> Result<String, SyntaxError> {
        let at = self.cur.mark();
        let mut name = String::new();
        while let Some(c) = self.cur.peek() {
            if c == ':' {
                self.cur.bump();
                return Ok(name);
            }
            if c.is_alphanumeric() || matches!(c, '_' | '-' | '.') {
                name.push(c);
                self.cur.bump();
            } else {
                break;
            }
        }
        Err(self
            .cur
            .error_at(at, SyntaxErrorKind::Expected("prefix name ending in ':'")))
    }

    fn variable(&mut self) -> Result<Variable, SyntaxError> {
        let at = self.cur.mark();
        self.cur.bump();
        let mut name = String::new();
        while let Some(c) = self.cur.peek() {
            if c.is_ascii_alphanumeric() || c == '_' {
                name.push(c);
                self.cur.bump();
            } else {
                break;
            }
        }
        Variable::new(name).map_err(|_| self.cur.error_at(at, SyntaxErrorKind::InvalidVariable))
    }

    fn triple_pattern(&mut self) -> Result<TriplePattern, SyntaxError> {
        let at = self.cur.mark();
        let subject = self.term_or_var(false)?;
        if subject.as_term().is_some_and(Term::is_literal) {
            return Err(self.cur.error_at(at, SyntaxErrorKind::LiteralSubject));
        }
        self.ws();
        let p_at = self.cur.mark();
        let predicate = self.term_or_var(true)?;
        if predicate.as_term().is_some_and(|t| t.as_iri().is_none()) {
            return Err(self.cur.error_at(p_at, SyntaxErrorKind::PredicateNotIri));
        }
        self.ws();
        let object = self.term_or_var(false)?;
        TriplePattern::new(subject, predicate, object)
            .map_err(|_| self.cur.error_at(at, SyntaxErrorKind::PredicateNotIri))
    }

    fn term_or_var(&mut self, predicate_position: bool) -> Result<TermPattern, SyntaxError> {
        match self.cur.peek() {
            Some('?') => Ok(TermPattern::Variable(self.variable()?)),
            Some('<') => Ok(TermPattern::Term(Term::Iri(self.cur.iri_ref()?))),
            Some('"') => {
                let start = self.cur.mark();
                let lexical = self.cur.quoted_string()?;
                let lit = self.cur.literal_with_suffix(lexical, start, |cur| {
                    let mut sub = QueryParser {
                        cur: cur.clone(),
                        prefixes: self.prefixes.clone(),
                    };
                    let iri = sub.iri()?;
                    *cur = sub.cur;
                    Ok(iri)
                })?;
                Ok(TermPattern::Term(Term::Literal(lit)))
            }
            Some('_') if self.cur.peek_nth(1) == Some(':') => {
                Ok(TermPattern::Term(Term::BlankNode(self.cur.blank_node()?)))
            }
            Some('a')
                if predicate_position
                    && self
                        .cur
                        .peek_nth(1)
                        .is_none_or(|c| c.is_whitespace() || c == '<' || c == '?') =>
            {
                self.cur.bump();
                Ok(TermPattern::Term(Term::Iri(vocab::rdf_type())))
            }
            Some(_) => Ok(TermPattern::Term(Term::Iri(self.prefixed_name()?))),
            None => Err(self.cur.error(SyntaxErrorKind::Expected("term"))),
        }
    }

    fn iri(&mut self) -> Result<Iri, SyntaxError> {
        if self.cur.peek() == Some('<') {
            self.cur.iri_ref()
        } else {
            self.prefixed_name()
        }
    }

    fn prefixed_name(&mut self) -> Result<Iri, SyntaxError> {
        let at = self.cur.mark();
        let rest = self.cur.rest();
        let Some(colon) = rest.find(':') else {
            return Err(self.cur.error(SyntaxErrorKind::Expected("term")));
        };
        let prefix = &rest[..colon];
        if !prefix
            .chars()
            .all(|c| c.is_alphanumeric() || matches!(c, '_' | '-' | '.'))
        {
            return Err(self.cur.error(SyntaxErrorKind::Expected("term")));
        }
        let after = &rest[colon + 1..];
        let mut len = after
            .char_indices()
            .find(|&(_, c)| !(c.is_alphanumeric() || matches!(c, '_' | '-' | '.' | '%' | ':')))
            .map_or(after.len(), |(i, _)| i);
        // A trailing '.' terminates the pattern rather than the name.
        while after[..len].ends_with('.') {
            len -= 1;
        }
        let local = &after[..len];
        for _ in 0..prefix.chars().count() + 1 + local.chars().count() {
            self.cur.bump();
        }
        let base = self
            .prefixes
            .get(prefix)
            .ok_or_else(|| self.cur.error_at(at, SyntaxErrorKind::UnknownPrefix(prefix.to_owned())))?;
        Iri::new(format!("{base}{local}")).map_err(|e| self.cur.error_at(at, SyntaxErrorKind::InvalidTerm(e)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn err(text: &str) -> SyntaxError {
        parse_query(text).unwrap_err()
    }

    #[test]
    fn parses_two_pattern_query() {
        let q = parse_query("SELECT ?m ?l WHERE { ?m a <F> . ?m <label> ?l }").unwrap();
        assert_eq!(q.patterns().len(), 2);
        let names: Vec<_> = q.projection().iter().map(|v| v.name().to_owned()).collect();
        assert_eq!(names, ["m", "l"]);
        assert_eq!(q.patterns()[0].predicate_iri().unwrap().as_str(), vocab::RDF_TYPE);
    }

    #[test]
    fn expands_prefixes_and_accepts_trailing_dot() {
        let q =
            parse_query("PREFIX ex: <http://ex.org/>\n# comment\nselect ?s where {\n  ?s ex:p ex:o.\n  ?s a ex:C .\n}")
                .unwrap();
        let tp = &q.patterns()[0];
        assert_eq!(tp.predicate_iri().unwrap().as_str(), "http://ex.org/p");
        assert_eq!(tp.object().as_term().unwrap(), &Term::iri("http://ex.org/o").unwrap());
        assert_eq!(q.patterns().len(), 2);
    }

    #[test]
    fn literals_with_tags_and_datatypes() {
        let q = parse_query(
            "PREFIX xsd: <http://www.w3.org/2001/XMLSchema#>\nSELECT ?s WHERE { ?s <p> \"1\"^^xsd:integer . ?s <q> \"Hair\"@EN }",
        )
        .unwrap();
        let lit = q.patterns()[0].object().as_term().unwrap().as_literal().unwrap();
        assert_eq!(lit.datatype().as_str(), vocab::XSD_INTEGER);
        let lang = q.patterns()[1].object().as_term().unwrap().as_literal().unwrap();
        assert_eq!(lang.language(), Some("en"));
    }

    #[test]
    fn empty_block_is_rejected() {
        let e = err("SELECT ?x WHERE { }");
        assert_eq!(e.kind, SyntaxErrorKind::EmptyPatternBlock);
        assert_eq!((e.line, e.column), (1, 19));
    }

    #[test]
    fn unknown_prefix_is_positioned() {
        let e = err("SELECT ?x WHERE {\n  ?x ex:p ?y }");
        assert_eq!(e.kind, SyntaxErrorKind::UnknownPrefix("ex".into()));
        assert_eq!((e.line, e.column), (2, 6));
    }

    #[test]
    fn unbound_projection_is_rejected() {
        let e = err("SELECT ?x ?z WHERE { ?x <p> ?y }");
        assert_eq!(e.kind, SyntaxErrorKind::UnboundProjection("z".into()));
        assert_eq!(e.line, 1);
    }

    #[test]
    fn other_malformed_inputs() {
        assert_eq!(err("").kind, SyntaxErrorKind::Expected("SELECT"));
        assert_eq!(
            err("SELECT WHERE { ?x <p> ?y }").kind,
            SyntaxErrorKind::Expected("projected variable")
        );
        assert_eq!(err("SELECT ?x { ?x <p> ?y }").kind, SyntaxErrorKind::Expected("WHERE"));
        assert_eq!(
            err("SELECT ?x WHERE { ?x <p> ?y").kind,
            SyntaxErrorKind::Expected("'.' or '}'")
        );
        assert_eq!(
            err("SELECT ?x WHERE { ?x <p> ?y } extra").kind,
            SyntaxErrorKind::TrailingInput
        );
        assert_eq!(
            err("SELECT ?x WHERE { \"s\" <p> ?x }").kind,
            SyntaxErrorKind::LiteralSubject
        );
        assert_eq!(
            err("SELECT ?x WHERE { ?x \"p\" ?y }").kind,
            SyntaxErrorKind::PredicateNotIri
        );
        assert_eq!(
            err("SELECT ?x WHERE { ?x <p ?y }").kind,
            SyntaxErrorKind::UnterminatedIri
        );
        assert_eq!(
            err("SELECT ? WHERE { ?x <p> ?y }").kind,
            SyntaxErrorKind::InvalidVariable
        );
    }
}
