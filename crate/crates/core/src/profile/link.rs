use std::borrow::Borrow;
use std::collections::BTreeMap;

use super::{ClassLink, EndpointId, MoleculeTemplate, MtCatalog, ProfileError, PropertyLink};
use crate::rdf::{vocab, Graph, Iri, Term};
use crate::sameas::SameAsIndex;

/// Fills in `interC` and `interP` for every template, using the identity
/// statements found in the graphs and in the optional `links` graph.
pub fn link_mts<G: Borrow<Graph>>(
    catalog: &MtCatalog,
    graphs: &BTreeMap<EndpointId, G>,
    links: Option<&Graph>,
) -> Result<MtCatalog, ProfileError> {
    let sameas = SameAsIndex::from_graphs(graphs.iter().map(|(k, g)| (k, g.borrow())), links);
    link_mts_with(catalog, graphs, &sameas)
}

/// As [`link_mts`], with a precomputed identity closure.
pub fn link_mts_with<G: Borrow<Graph>>(
    catalog: &MtCatalog,
    graphs: &BTreeMap<EndpointId, G>,
    sameas: &SameAsIndex,
) -> Result<MtCatalog, ProfileError> {
    for ep in catalog.endpoints() {
        if !graphs.contains_key(ep) {
            return Err(ProfileError::UnknownEndpoint(ep.clone()));
        }
    }
    let rdf_type = vocab::rdf_type();
    let mut out = MtCatalog::new();
    for mt in catalog.iter() {
        let mut linked = mt.clone();
        linked.clear_links();
        let home = graphs[mt.endpoint()].borrow();

        for other in catalog.iter() {
            if other.endpoint() != mt.endpoint() && sameas.equivalent_iri(other.class(), mt.class()) {
                linked.insert_class_link(ClassLink {
                    predicate: rdf_type.clone(),
                    class: other.class().clone(),
                    endpoint: other.endpoint().clone(),
                })?;
            }
        }

        object_class_links(&mut linked, home, graphs, sameas)?;
        property_links(&mut linked, catalog, graphs, sameas)?;
        out.insert(linked);
    }
    Ok(out)
}

// (p, Ck, SW) whenever an object of p, or one of its equivalents, is typed
// Ck at SW.
fn object_class_links<G: Borrow<Graph>>(
    mt: &mut MoleculeTemplate,
    home: &Graph,
    graphs: &BTreeMap<EndpointId, G>,
    sameas: &SameAsIndex,
) -> Result<(), ProfileError> {
    let rdf_type = vocab::rdf_type();
    let class = Term::Iri(mt.class().clone());
    let mut found = Vec::new();
    for s in home.subjects_of(&rdf_type, &class) {
        let Some(props) = home.properties(s) else { continue };
        for (p, objects) in props.iter().filter(|(p, _)| **p != rdf_type) {
            for o in objects.iter().filter(|o| !o.is_literal()) {
                let aliases = sameas.members(o);
                for (ep, g) in graphs.iter().filter(|(ep, _)| *ep != mt.endpoint()) {
                    let g = g.borrow();
                    for alias in &aliases {
                        for c in g.objects(alias, &rdf_type).filter_map(Term::as_iri) {
                            found.push(ClassLink {
                                predicate: p.clone(),
                                class: c.clone(),
                                endpoint: ep.clone(),
                            });
                        }
                    }
                }
            }
        }
    }
    for link in found {
        mt.insert_class_link(link)?;
    }
    Ok(())
}

// (p, p', SW) for each p' identical to p that SW uses, provided either this
// template describes p or a corresponding template at SW describes p'.
fn property_links<G: Borrow<Graph>>(
    mt: &mut MoleculeTemplate,
    catalog: &MtCatalog,
    graphs: &BTreeMap<EndpointId, G>,
    sameas: &SameAsIndex,
) -> Result<(), ProfileError> {
    let mut found = Vec::new();
    for (ep, g) in graphs.iter().filter(|(ep, _)| *ep != mt.endpoint()) {
        let g = g.borrow();
        let corresponding: Vec<&MoleculeTemplate> = catalog
            .at_endpoint(ep)
            .filter(|m| sameas.equivalent_iri(m.class(), mt.class()))
            .collect();

        let mut candidates: BTreeMap<Iri, ()> = BTreeMap::new();
        for e in mt.dtp() {
            candidates.insert(e.predicate.clone(), ());
        }
        for m in &corresponding {
            for e in m.dtp() {
                for q in sameas.iri_members(&e.predicate) {
                    candidates.insert(q, ());
                }
            }
        }

        for p in candidates.keys() {
            if !sameas.is_linked(&Term::Iri(p.clone())) {
                continue;
            }
            for foreign in sameas.iri_members(p) {
                if !g.uses_predicate(&foreign) {
                    continue;
                }
                if mt.has_predicate(p) || corresponding.iter().any(|m| m.has_predicate(&foreign)) {
                    found.push(PropertyLink {
                        predicate: p.clone(),
                        foreign,
                        endpoint: ep.clone(),
                    });
                }
            }
        }
    }
    for link in found {
        mt.insert_property_link(link)?;
    }
    Ok(())
}
