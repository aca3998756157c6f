//! Sources, the federation registry and the bind-join executor.

mod config;
mod execute;
mod result;

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use thiserror::Error;

use crate::operator::OperatorError;
use crate::profile::{build_mts, link_mts_with, AggregationFn, EndpointId, MtCatalog, ProfileError};
use crate::query::{TermPattern, TriplePattern};
use crate::rdf::{Graph, NTriplesError, Triple};
use crate::sameas::SameAsIndex;

pub use config::{load_federation, EndpointConfig, FederationConfig};
pub use execute::{execute, select_root, ExecuteOptions};
pub use result::QueryResult;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EndpointError {
    #[error("endpoint {0} is unavailable")]
    Unavailable(EndpointId),
    #[error("endpoint {0} is not part of the federation")]
    Unknown(EndpointId),
}

#[derive(Debug, Error)]
pub enum FederationError {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}: invalid federation config: {source}", path.display())]
    Config {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("federation has no endpoints")]
    NoEndpoints,
    #[error("duplicate endpoint id {0}")]
    DuplicateEndpoint(EndpointId),
    #[error("endpoint {endpoint}: {}: {source}", path.display())]
    Data {
        endpoint: String,
        path: PathBuf,
        #[source]
        source: NTriplesError,
    },
    #[error("links file {}: {source}", path.display())]
    Links {
        path: PathBuf,
        #[source]
        source: NTriplesError,
    },
    #[error("catalog {}: {source}", path.display())]
    Catalog {
        path: PathBuf,
        #[source]
        source: ProfileError,
    },
    #[error(transparent)]
    Profile(#[from] ProfileError),
    #[error("no molecule template covers pattern {0}")]
    NoCandidate(Box<TriplePattern>),
    #[error("endpoint {0} is not part of the federation")]
    UnknownEndpoint(EndpointId),
    #[error(transparent)]
    Operator(#[from] OperatorError),
}

/// A source answering single triple patterns.
pub trait Endpoint: Send + Sync {
    fn id(&self) -> &EndpointId;

    /// Triples matching the bound positions of `pattern`, in sorted order.
    fn request(&self, pattern: &TriplePattern) -> Result<Vec<Triple>, EndpointError>;
}

/// An in-memory source over one graph, with a switch to simulate outages.
#[derive(Debug)]
pub struct LocalEndpoint {
    id: EndpointId,
    graph: Arc<Graph>,
    available: AtomicBool,
}

impl LocalEndpoint {
    pub fn new(id: EndpointId, graph: Arc<Graph>) -> Self {
        Self {
            id,
            graph,
            available: AtomicBool::new(true),
        }
    }

    pub fn graph(&self) -> &Arc<Graph> {
        &self.graph
    }

    pub fn set_available(&self, available: bool) {
        self.available.store(available, Ordering::SeqCst);
    }

    pub fn is_available(&self) -> bool {
        self.available.load(Ordering::SeqCst)
    }
}

impl Endpoint for LocalEndpoint {
    fn id(&self) -> &EndpointId {
        &self.id
    }

    fn request(&self, pattern: &TriplePattern) -> Result<Vec<Triple>, EndpointError> {
        if !self.is_available() {
            return Err(EndpointError::Unavailable(self.id.clone()));
        }
        let s = pattern.subject().as_term();
        let p = pattern.predicate_iri();
        let o = pattern.object().as_term();
        let mut triples = self.graph.match_pattern(s, p, o);
        if matches!(pattern.predicate(), TermPattern::Variable(_)) || s.is_none() || o.is_none() {
            // Repeated variables are filtered here so the stream is exact.
            triples.retain(|t| pattern.match_triple(t).is_some());
        }
        Ok(triples)
    }
}

/// Endpoints, their identity closure and their molecule templates. The
/// value is immutable once built, apart from endpoint availability.
#[derive(Clone, Debug)]
pub struct Federation {
    endpoints: BTreeMap<EndpointId, Arc<LocalEndpoint>>,
    links: Option<Arc<Graph>>,
    sameas: SameAsIndex,
    catalog: MtCatalog,
    aggregation: AggregationFn,
}

impl Federation {
    /// Profiles and links every graph.
    pub fn from_graphs(
        graphs: BTreeMap<EndpointId, Graph>,
        links: Option<Graph>,
        aggregation: AggregationFn,
    ) -> Result<Self, FederationError> {
        if graphs.is_empty() {
            return Err(FederationError::NoEndpoints);
        }
        let graphs: BTreeMap<EndpointId, Arc<Graph>> = graphs.into_iter().map(|(id, g)| (id, Arc::new(g))).collect();
        let sameas = SameAsIndex::from_graphs(graphs.iter().map(|(id, g)| (id, g.as_ref())), links.as_ref());
        let mts: MtCatalog = graphs
            .iter()
            .flat_map(|(id, g)| build_mts(g, id, aggregation))
            .collect();
        let catalog = link_mts_with(&mts, &graphs, &sameas)?;
        let endpoints = graphs
            .into_iter()
            .map(|(id, g)| (id.clone(), Arc::new(LocalEndpoint::new(id, g))))
            .collect();
        Ok(Self {
            endpoints,
            links: links.map(Arc::new),
            sameas,
            catalog,
            aggregation,
        })
    }

    /// Replaces the catalog, e.g. with an edited or externally built one.
    pub fn with_catalog(mut self, catalog: MtCatalog) -> Result<Self, FederationError> {
        if let Some(missing) = catalog
            .endpoints()
            .into_iter()
            .find(|e| !self.endpoints.contains_key(*e))
        {
            return Err(FederationError::UnknownEndpoint(missing.clone()));
        }
        self.catalog = catalog;
        Ok(self)
    }

    pub fn catalog(&self) -> &MtCatalog {
        &self.catalog
    }

    pub fn sameas(&self) -> &SameAsIndex {
        &self.sameas
    }

    pub fn aggregation(&self) -> AggregationFn {
        self.aggregation
    }

    pub fn links(&self) -> Option<&Graph> {
        self.links.as_deref()
    }

    pub fn endpoint_ids(&self) -> impl Iterator<Item = &EndpointId> {
        self.endpoints.keys()
    }

    pub fn endpoint(&self, id: &EndpointId) -> Option<&LocalEndpoint> {
        self.endpoints.get(id).map(Arc::as_ref)
    }

    /// Endpoint graphs in id order.
    pub fn graphs(&self) -> impl Iterator<Item = (&EndpointId, &Graph)> {
        self.endpoints.iter().map(|(id, e)| (id, e.graph().as_ref()))
    }

    pub fn contains(&self, id: &EndpointId) -> bool {
        self.endpoints.contains_key(id)
    }

    /// Switches an endpoint on or off; false if the id is unknown.
    pub fn set_available(&self, id: &EndpointId, available: bool) -> bool {
        match self.endpoints.get(id) {
            Some(e) => {
                e.set_available(available);
                true
            }
            None => false,
        }
    }

    pub fn request(&self, id: &EndpointId, pattern: &TriplePattern) -> Result<Vec<Triple>, EndpointError> {
        self.endpoints
            .get(id)
            .ok_or_else(|| EndpointError::Unknown(id.clone()))?
            .request(pattern)
    }
}
