//! IRIs of the handful of vocabulary terms the engine interprets.

use super::Iri;

pub const RDF_TYPE: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
pub const RDF_LANG_STRING: &str = "http://www.w3.org/1999/02/22-rdf-syntax-ns#langString";
pub const RDFS_RESOURCE: &str = "http://www.w3.org/2000/01/rdf-schema#Resource";
pub const XSD_STRING: &str = "http://www.w3.org/2001/XMLSchema#string";
pub const XSD_INTEGER: &str = "http://www.w3.org/2001/XMLSchema#integer";
pub const OWL_SAME_AS: &str = "http://www.w3.org/2002/07/owl#sameAs";
pub const OWL_EQUIVALENT_CLASS: &str = "http://www.w3.org/2002/07/owl#equivalentClass";
pub const OWL_EQUIVALENT_PROPERTY: &str = "http://www.w3.org/2002/07/owl#equivalentProperty";

/// Range type recorded for objects that carry no asserted `rdf:type`.
pub const UNTYPED: &str = RDFS_RESOURCE;

pub fn rdf_type() -> Iri {
    Iri::from_static(RDF_TYPE)
}

pub fn rdf_lang_string() -> Iri {
    Iri::from_static(RDF_LANG_STRING)
}

pub fn xsd_string() -> Iri {
    Iri::from_static(XSD_STRING)
}

pub fn untyped() -> Iri {
    Iri::from_static(UNTYPED)
}

/// Predicates whose statements feed the identity closure.
pub fn is_identity_predicate(p: &Iri) -> bool {
    matches!(p.as_str(), OWL_SAME_AS | OWL_EQUIVALENT_CLASS | OWL_EQUIVALENT_PROPERTY)
}
