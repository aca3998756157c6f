//! Source descriptions: multiplicity statistics and extended molecule
//! templates (one per class per endpoint), plus their cross-source links.

mod build;
mod json;
mod link;
mod stats;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_rational::Ratio;
use thiserror::Error;

use crate::rdf::{vocab, Iri};

pub use build::build_mts;
pub use link::{link_mts, link_mts_with};
pub use stats::{aggregate, aggregated_multiplicity, aggregated_multiplicity_with, multiplicity, MissingPredicate};

#[derive(Debug, Error)]
pub enum ProfileError {
    #[error("invalid endpoint id {0:?}")]
    InvalidEndpointId(String),
    #[error("unknown aggregation function {0:?} (expected median, mean or max)")]
    UnknownAggregation(String),
    #[error("endpoint {0} has no dataset")]
    UnknownEndpoint(EndpointId),
    #[error("link from {0} points back to its own endpoint")]
    SelfLink(EndpointId),
    #[error("duplicate DTP entry for {predicate} with range {range}")]
    DuplicateDtp { predicate: Iri, range: Iri },
    #[error("invalid catalog: {0}")]
    InvalidCatalog(String),
    #[error("catalog JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// Identifier of a source in a federation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EndpointId(Arc<str>);

impl EndpointId {
    pub fn new(id: impl AsRef<str>) -> Result<Self, ProfileError> {
        let id = id.as_ref();
        if id.is_empty() || id.chars().any(char::is_whitespace) {
            return Err(ProfileError::InvalidEndpointId(id.to_owned()));
        }
        Ok(Self(Arc::from(id)))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for EndpointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for EndpointId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub enum AggregationFn {
    /// Lower median: element `(n - 1) / 2` of the sorted multiset.
    #[default]
    Median,
    Mean,
    Max,
}

impl AggregationFn {
    pub fn name(self) -> &'static str {
        match self {
            AggregationFn::Median => "median",
            AggregationFn::Mean => "mean",
            AggregationFn::Max => "max",
        }
    }
}

impl FromStr for AggregationFn {
    type Err = ProfileError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "median" => Ok(AggregationFn::Median),
            "mean" => Ok(AggregationFn::Mean),
            "max" => Ok(AggregationFn::Max),
            other => Err(ProfileError::UnknownAggregation(other.to_owned())),
        }
    }
}

impl fmt::Display for AggregationFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// An aggregated multiplicity: a non-negative rational, integral for
/// `median` and `max`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Amd(Ratio<u64>);

impl Amd {
    pub const ZERO: Amd = Amd(Ratio::new_raw(0, 1));

    pub fn from_integer(n: u64) -> Self {
        Amd(Ratio::from_integer(n))
    }

    pub fn new(numer: u64, denom: u64) -> Option<Self> {
        (denom != 0).then(|| Amd(Ratio::new(numer, denom)))
    }

    pub fn ratio(self) -> Ratio<u64> {
        self.0
    }

    pub fn scaled(self, factor: u64) -> Self {
        Amd(self.0 * Ratio::from_integer(factor))
    }

    /// Whether `count` observed values fall short of this estimate.
    pub fn exceeds(self, count: usize) -> bool {
        Ratio::from_integer(count as u64) < self.0
    }

    pub fn to_f64(self) -> f64 {
        *self.0.numer() as f64 / *self.0.denom() as f64
    }
}

impl fmt::Display for Amd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Amd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `(p, T, f(p))`: a predicate used by the class, its range type and its
/// aggregated multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct DtpEntry {
    pub predicate: Iri,
    pub range_type: Iri,
    pub amd: Amd,
}

/// `(p, Ck, SW)`: objects of `p` are typed `Ck` at endpoint `SW`. Entries
/// whose predicate is `rdf:type` record class correspondence instead.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ClassLink {
    pub predicate: Iri,
    pub class: Iri,
    pub endpoint: EndpointId,
}

/// `(p, p', SW)`: `p` is declared identical to `p'`, which `SW` uses.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PropertyLink {
    pub predicate: Iri,
    pub foreign: Iri,
    pub endpoint: EndpointId,
}

/// Extended molecule template: description of one class at one endpoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MoleculeTemplate {
    endpoint: EndpointId,
    class: Iri,
    aggregation: AggregationFn,
    dtp: BTreeSet<DtpEntry>,
    intra_class: BTreeSet<(Iri, Iri)>,
    inter_class: BTreeSet<ClassLink>,
    inter_property: BTreeSet<PropertyLink>,
}

impl MoleculeTemplate {
    pub fn new(endpoint: EndpointId, class: Iri, aggregation: AggregationFn) -> Self {
        Self {
            endpoint,
            class,
            aggregation,
            dtp: BTreeSet::new(),
            intra_class: BTreeSet::new(),
            inter_class: BTreeSet::new(),
            inter_property: BTreeSet::new(),
        }
    }

    pub fn key(&self) -> MtKey {
        MtKey {
            endpoint: self.endpoint.clone(),
            class: self.class.clone(),
        }
    }

    pub fn endpoint(&self) -> &EndpointId {
        &self.endpoint
    }

    pub fn class(&self) -> &Iri {
        &self.class
    }

    pub fn aggregation(&self) -> AggregationFn {
        self.aggregation
    }

    pub fn dtp(&self) -> &BTreeSet<DtpEntry> {
        &self.dtp
    }

    pub fn intra_class(&self) -> &BTreeSet<(Iri, Iri)> {
        &self.intra_class
    }

    pub fn inter_class(&self) -> &BTreeSet<ClassLink> {
        &self.inter_class
    }

    pub fn inter_property(&self) -> &BTreeSet<PropertyLink> {
        &self.inter_property
    }

    pub fn insert_dtp(&mut self, entry: DtpEntry) -> Result<(), ProfileError> {
        if self
            .dtp
            .iter()
            .any(|e| e.predicate == entry.predicate && e.range_type == entry.range_type)
        {
            return Err(ProfileError::DuplicateDtp {
                predicate: entry.predicate,
                range: entry.range_type,
            });
        }
        self.dtp.insert(entry);
        Ok(())
    }

    pub fn insert_intra_class(&mut self, predicate: Iri, class: Iri) {
        self.intra_class.insert((predicate, class));
    }

    pub fn insert_class_link(&mut self, link: ClassLink) -> Result<(), ProfileError> {
        if link.endpoint == self.endpoint {
            return Err(ProfileError::SelfLink(self.endpoint.clone()));
        }
        self.inter_class.insert(link);
        Ok(())
    }

    pub fn insert_property_link(&mut self, link: PropertyLink) -> Result<(), ProfileError> {
        if link.endpoint == self.endpoint {
            return Err(ProfileError::SelfLink(self.endpoint.clone()));
        }
        self.inter_property.insert(link);
        Ok(())
    }

    pub fn remove_property_link(&mut self, link: &PropertyLink) -> bool {
        self.inter_property.remove(link)
    }

    pub fn clear_links(&mut self) {
        self.inter_class.clear();
        self.inter_property.clear();
    }

    /// The aggregated multiplicity recorded for `p` (largest over range types).
    pub fn amd_for(&self, p: &Iri) -> Option<Amd> {
        self.dtp.iter().filter(|e| &e.predicate == p).map(|e| e.amd).max()
    }

    pub fn has_predicate(&self, p: &Iri) -> bool {
        self.dtp.iter().any(|e| &e.predicate == p)
    }

    /// Whether the class at `endpoint` was declared to correspond to this one.
    pub fn corresponds_to(&self, endpoint: &EndpointId, class: &Iri) -> bool {
        self.inter_class
            .iter()
            .any(|l| l.predicate.as_str() == vocab::RDF_TYPE && &l.endpoint == endpoint && &l.class == class)
    }

    /// Foreign predicates linked to `p` at `endpoint`.
    pub fn property_targets(&self, p: &Iri, endpoint: &EndpointId) -> Vec<&Iri> {
        self.inter_property
            .iter()
            .filter(|l| &l.predicate == p && &l.endpoint == endpoint)
            .map(|l| &l.foreign)
            .collect()
    }

    /// Scales every aggregated multiplicity by `factor`.
    pub fn scale_amd(&mut self, factor: u64) {
        self.dtp = std::mem::take(&mut self.dtp)
            .into_iter()
            .map(|e| DtpEntry {
                amd: e.amd.scaled(factor),
                ..e
            })
            .collect();
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct MtKey {
    pub endpoint: EndpointId,
    pub class: Iri,
}

impl fmt::Display for MtKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.endpoint, self.class)
    }
}

/// All molecule templates of a federation, keyed by (endpoint, class).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MtCatalog {
    entries: BTreeMap<MtKey, MoleculeTemplate>,
}

impl MtCatalog {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds or replaces the template for its (endpoint, class).
    pub fn insert(&mut self, mt: MoleculeTemplate) -> Option<MoleculeTemplate> {
        self.entries.insert(mt.key(), mt)
    }

    pub fn get(&self, endpoint: &EndpointId, class: &Iri) -> Option<&MoleculeTemplate> {
        self.entries.get(&MtKey {
            endpoint: endpoint.clone(),
            class: class.clone(),
        })
    }

    pub fn get_by_key(&self, key: &MtKey) -> Option<&MoleculeTemplate> {
        self.entries.get(key)
    }

    pub fn get_mut(&mut self, endpoint: &EndpointId, class: &Iri) -> Option<&mut MoleculeTemplate> {
        self.entries.get_mut(&MtKey {
            endpoint: endpoint.clone(),
            class: class.clone(),
        })
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Templates in (endpoint, class) order.
    pub fn iter(&self) -> impl Iterator<Item = &MoleculeTemplate> {
        self.entries.values()
    }

    pub fn iter_mut(&mut self) -> impl Iterator<Item = &mut MoleculeTemplate> {
        self.entries.values_mut()
    }

    pub fn at_endpoint<'a>(&'a self, endpoint: &EndpointId) -> impl Iterator<Item = &'a MoleculeTemplate> + 'a {
        let endpoint = endpoint.clone();
        self.entries.values().filter(move |m| m.endpoint == endpoint)
    }

    pub fn endpoints(&self) -> BTreeSet<&EndpointId> {
        self.entries.keys().map(|k| &k.endpoint).collect()
    }

    /// Merges another catalog in; later entries win.
    pub fn extend(&mut self, other: MtCatalog) {
        self.entries.extend(other.entries);
    }
}

impl FromIterator<MoleculeTemplate> for MtCatalog {
    fn from_iter<I: IntoIterator<Item = MoleculeTemplate>>(iter: I) -> Self {
        let mut c = MtCatalog::new();
        for mt in iter {
            c.insert(mt);
        }
        c
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ep(s: &str) -> EndpointId {
        EndpointId::new(s).unwrap()
    }

    fn iri(s: &str) -> Iri {
        Iri::new(s).unwrap()
    }

    #[test]
    fn endpoint_ids_are_validated() {
        assert!(EndpointId::new("").is_err());
        assert!(EndpointId::new("a b").is_err());
        assert!(EndpointId::new("dbpedia").is_ok());
    }

    #[test]
    fn aggregation_names_round_trip() {
        for f in [AggregationFn::Median, AggregationFn::Mean, AggregationFn::Max] {
            assert_eq!(f.name().parse::<AggregationFn>().unwrap(), f);
        }
        assert!("mode".parse::<AggregationFn>().is_err());
    }

    #[test]
    fn links_to_own_endpoint_are_rejected() {
        let mut mt = MoleculeTemplate::new(ep("A"), iri("C"), AggregationFn::Median);
        let link = PropertyLink {
            predicate: iri("p"),
            foreign: iri("q"),
            endpoint: ep("A"),
        };
        assert!(matches!(mt.insert_property_link(link), Err(ProfileError::SelfLink(_))));
        let link = ClassLink {
            predicate: iri("p"),
            class: iri("D"),
            endpoint: ep("A"),
        };
        assert!(mt.insert_class_link(link).is_err());
    }

    #[test]
    fn dtp_rejects_duplicate_predicate_range_pair() {
        let mut mt = MoleculeTemplate::new(ep("A"), iri("C"), AggregationFn::Median);
        let e = DtpEntry {
            predicate: iri("p"),
            range_type: iri("T"),
            amd: Amd::from_integer(1),
        };
        mt.insert_dtp(e.clone()).unwrap();
        assert!(mt
            .insert_dtp(DtpEntry {
                amd: Amd::from_integer(2),
                ..e
            })
            .is_err());
    }

    #[test]
    fn amd_display_and_comparison() {
        assert_eq!(Amd::from_integer(2).to_string(), "2");
        assert_eq!(Amd::new(5, 3).unwrap().to_string(), "5/3");
        assert!(Amd::from_integer(2).exceeds(1));
        assert!(!Amd::from_integer(2).exceeds(2));
        assert!(Amd::new(3, 2).unwrap().exceeds(1));
    }
}
