//! RDF data model: terms, triples, an indexed in-memory graph and N-Triples I/O.

mod graph;
pub(crate) mod lexer;
mod ntriples;
mod term;
pub mod vocab;

pub use graph::Graph;
pub use lexer::{SyntaxError, SyntaxErrorKind};
pub use ntriples::{
    parse_ntriples, parse_ntriples_scoped, parse_ntriples_str, serialize_ntriples, to_ntriples_string, NTriplesError,
};
pub use term::{BlankNode, Iri, Literal, Term, TermError, Triple};
