//! Test corpora: the two-source film federation, five domain federations
//! and a seeded generator of random federations.
//!
//! Every corpus is a [`FixtureSet`]: a federation config, its N-Triples
//! files and its queries, all as text. The checked-in copies under
//! `fixtures/` are written from these by the `regen_fixtures` example.

mod domains;
mod random;

use std::collections::BTreeMap;
use std::io;
use std::path::{Path, PathBuf};

pub use domains::{domains, hair};
pub use random::{gen_federation, FixtureError, RandomFederationSpec};

use crate::federation::{Federation, FederationConfig, FederationError};
use crate::query::{parse_query, BasicGraphPattern};
use crate::rdf::{parse_ntriples_str, to_ntriples_string, vocab};

/// A federation as text: config, data files and named queries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FixtureSet {
    pub name: String,
    pub config: FederationConfig,
    /// File name to N-Triples text, links file included.
    pub files: BTreeMap<String, String>,
    /// Query name to query text.
    pub queries: BTreeMap<String, String>,
}

impl FixtureSet {
    /// Builds the federation without touching the file system.
    pub fn federation(&self) -> Result<Federation, FederationError> {
        self.config.load_with(Path::new(""), |path| {
            let name = path.to_string_lossy();
            self.files
                .get(name.as_ref())
                .map(|text| text.clone().into_bytes())
                .ok_or_else(|| io::Error::new(io::ErrorKind::NotFound, name.into_owned()))
        })
    }

    pub fn query(&self, name: &str) -> Option<BasicGraphPattern> {
        self.queries
            .get(name)
            .map(|q| parse_query(q).expect("fixture queries parse"))
    }

    /// Writes `config.json`, the data files and `queries/*.rq` under `dir`.
    pub fn write_to(&self, dir: &Path) -> io::Result<()> {
        std::fs::create_dir_all(dir.join("queries"))?;
        std::fs::write(dir.join("config.json"), self.config.to_json())?;
        for (name, text) in &self.files {
            std::fs::write(dir.join(name), text)?;
        }
        for (name, text) in &self.queries {
            std::fs::write(dir.join("queries").join(format!("{name}.rq")), text)?;
        }
        Ok(())
    }

    /// Paths of every file `write_to` produces, relative to its directory.
    pub fn file_names(&self) -> Vec<PathBuf> {
        let mut names = vec![PathBuf::from("config.json")];
        names.extend(self.files.keys().map(PathBuf::from));
        names.extend(
            self.queries
                .keys()
                .map(|q| Path::new("queries").join(format!("{q}.rq"))),
        );
        names
    }
}

const PREFIXES: &[(&str, &str)] = &[
    ("dbo", "http://dbpedia.org/ontology/"),
    ("dbr", "http://dbpedia.org/resource/"),
    ("lmdb", "http://data.linkedmdb.org/resource/movie/"),
    ("owl", "http://www.w3.org/2002/07/owl#"),
    ("rdf", "http://www.w3.org/1999/02/22-rdf-syntax-ns#"),
    ("rdfs", "http://www.w3.org/2000/01/rdf-schema#"),
    ("wd", "http://www.wikidata.org/entity/"),
    ("wdt", "http://www.wikidata.org/prop/direct/"),
    ("xsd", "http://www.w3.org/2001/XMLSchema#"),
];

fn expand_name(token: &str) -> String {
    if token.starts_with('<') || token.starts_with("_:") {
        return token.to_owned();
    }
    if token == "a" {
        return format!("<{}>", vocab::RDF_TYPE);
    }
    let (prefix, local) = token
        .split_once(':')
        .unwrap_or_else(|| panic!("not a prefixed name: {token}"));
    let ns = PREFIXES
        .iter()
        .find(|(p, _)| *p == prefix)
        .unwrap_or_else(|| panic!("unknown prefix in {token}"))
        .1;
    format!("<{ns}{local}>")
}

/// Expands compact `s p o .` lines using the prefixes above into sorted
/// N-Triples. Only the object may contain spaces.
pub(crate) fn expand(compact: &str) -> String {
    let mut out = String::new();
    for line in compact.lines().map(str::trim) {
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let body = line.strip_suffix('.').expect("lines end with '.'").trim_end();
        let (s, rest) = body.split_once(' ').expect("subject");
        let (p, o) = rest.trim_start().split_once(' ').expect("predicate");
        let o = o.trim();
        let object = if o.starts_with('"') {
            match o.rsplit_once("^^") {
                Some((lexical, datatype)) => format!("{lexical}^^{}", expand_name(datatype)),
                None => o.to_owned(),
            }
        } else {
            expand_name(o)
        };
        out.push_str(&format!("{} {} {object} .\n", expand_name(s), expand_name(p)));
    }
    to_ntriples_string(&parse_ntriples_str(&out).expect("fixture data parses"))
}

/// Expands prefixed names in a query, adding no PREFIX lines.
pub(crate) fn prefix_block(names: &[&str]) -> String {
    names
        .iter()
        .map(|n| {
            let ns = PREFIXES.iter().find(|(p, _)| p == n).expect("known prefix").1;
            format!("PREFIX {n}: <{ns}>\n")
        })
        .collect()
}
