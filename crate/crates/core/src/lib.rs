//! Completeness-aware federated query processing over RDF sources.
//!
//! Each source is summarized by extended molecule templates: per class, the
//! predicates its instances use together with their aggregated multiplicity,
//! plus class and property correspondences to other sources. A triple
//! pattern is evaluated at a root source first; when the answers fall short
//! of the expected multiplicity, evaluation expands breadth-first to the
//! most relevant linked sources, rewriting the pattern into each source's
//! vocabulary.

pub mod cost;
pub mod federation;
pub mod fixtures;
pub mod operator;
pub mod oracle;
pub mod profile;
pub mod query;
pub mod rdf;
pub mod sameas;

pub use federation::{execute, load_federation, ExecuteOptions, Federation, QueryResult};
pub use profile::{AggregationFn, EndpointId, MoleculeTemplate, MtCatalog};
pub use query::{parse_query, BasicGraphPattern, SolutionMapping, TriplePattern, Variable};
pub use rdf::{Graph, Iri, Term, Triple};
