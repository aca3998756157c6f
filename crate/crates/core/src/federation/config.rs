use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{Federation, FederationError};
use crate::profile::{AggregationFn, EndpointId, MtCatalog};
use crate::rdf::{parse_ntriples_scoped, Graph, NTriplesError};

/// On-disk description of a federation. Relative paths are resolved against
/// the directory holding the config file.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FederationConfig {
    #[serde(default = "default_aggregation")]
    pub aggregation: String,
    pub endpoints: Vec<EndpointConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub links: Option<PathBuf>,
    /// Catalog JSON to use instead of profiling the datasets.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub catalog: Option<PathBuf>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EndpointConfig {
    pub id: String,
    pub data: PathBuf,
    #[serde(default = "available_by_default", skip_serializing_if = "is_true")]
    pub available: bool,
}

fn default_aggregation() -> String {
    AggregationFn::Median.name().to_owned()
}

fn available_by_default() -> bool {
    true
}

fn is_true(b: &bool) -> bool {
    *b
}

impl FederationConfig {
    pub fn from_json(text: &str, path: &Path) -> Result<Self, FederationError> {
        serde_json::from_str(text).map_err(|source| FederationError::Config {
            path: path.to_owned(),
            source,
        })
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("config serializes");
        out.push('\n');
        out
    }

    /// Loads every dataset and builds the federation.
    pub fn load(&self, base: &Path) -> Result<Federation, FederationError> {
        self.load_with(base, |path| std::fs::read(path))
    }

    /// As [`load`](Self::load), reading files through `read`.
    pub fn load_with(
        &self,
        base: &Path,
        read: impl Fn(&Path) -> std::io::Result<Vec<u8>>,
    ) -> Result<Federation, FederationError> {
        let aggregation: AggregationFn = self.aggregation.parse()?;
        if self.endpoints.is_empty() {
            return Err(FederationError::NoEndpoints);
        }
        let mut graphs = BTreeMap::new();
        let mut offline = Vec::new();
        for (ordinal, e) in self.endpoints.iter().enumerate() {
            let id = EndpointId::new(&e.id)?;
            if graphs.contains_key(&id) {
                return Err(FederationError::DuplicateEndpoint(id));
            }
            let path = base.join(&e.data);
            let graph = read_graph(&read, &path, ordinal).map_err(|source| FederationError::Data {
                endpoint: e.id.clone(),
                path: path.clone(),
                source,
            })?;
            if !e.available {
                offline.push(id.clone());
            }
            graphs.insert(id, graph);
        }
        let links = match &self.links {
            Some(rel) => {
                let path = base.join(rel);
                Some(
                    read_graph(&read, &path, self.endpoints.len())
                        .map_err(|source| FederationError::Links { path, source })?,
                )
            }
            None => None,
        };
        let mut federation = Federation::from_graphs(graphs, links, aggregation)?;
        if let Some(rel) = &self.catalog {
            let path = base.join(rel);
            let bytes = read(&path).map_err(|source| FederationError::Io {
                path: path.clone(),
                source,
            })?;
            let text = String::from_utf8(bytes).unwrap_or_default();
            let catalog = MtCatalog::from_json(&text).map_err(|source| FederationError::Catalog { path, source })?;
            federation = federation.with_catalog(catalog)?;
        }
        for id in &offline {
            federation.set_available(id, false);
        }
        Ok(federation)
    }
}

fn read_graph(
    read: &impl Fn(&Path) -> std::io::Result<Vec<u8>>,
    path: &Path,
    ordinal: usize,
) -> Result<Graph, NTriplesError> {
    let bytes = read(path)?;
    let text = String::from_utf8(bytes).map_err(|_| NTriplesError::Utf8)?;
    Ok(parse_ntriples_scoped(&text, Some(ordinal))?)
}

/// Reads a federation config file and everything it references.
pub fn load_federation(path: impl AsRef<Path>) -> Result<Federation, FederationError> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|source| FederationError::Io {
        path: path.to_owned(),
        source,
    })?;
    let config = FederationConfig::from_json(&text, path)?;
    config.load(path.parent().unwrap_or(Path::new(".")))
}
