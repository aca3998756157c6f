use std::collections::{BTreeMap, BTreeSet};

use super::{aggregate, AggregationFn, DtpEntry, EndpointId, MoleculeTemplate};
use crate::rdf::{vocab, Graph, Iri, Term};

#[derive(Default)]
struct PredicateProfile {
    multiplicities: Vec<u64>,
    range_votes: BTreeMap<Iri, usize>,
    object_classes: BTreeSet<Iri>,
}

/// One template per class with at least one instance in `graph`. Links to
/// other endpoints are left empty.
pub fn build_mts(graph: &Graph, endpoint: &EndpointId, f: AggregationFn) -> Vec<MoleculeTemplate> {
    let rdf_type = vocab::rdf_type();
    let mut instances: BTreeMap<Iri, BTreeSet<Term>> = BTreeMap::new();
    for t in graph.match_pattern(None, Some(&rdf_type), None) {
        let (s, _, o) = t.into_parts();
        if let Term::Iri(class) = o {
            instances.entry(class).or_default().insert(s);
        }
    }

    instances
        .into_iter()
        .map(|(class, members)| {
            let mut profiles: BTreeMap<&Iri, PredicateProfile> = BTreeMap::new();
            for s in &members {
                let Some(props) = graph.properties(s) else { continue };
                for (p, objects) in props {
                    let profile = profiles.entry(p).or_default();
                    profile.multiplicities.push(objects.len() as u64);
                    for o in objects {
                        vote_range(graph, p, o, &rdf_type, profile);
                    }
                }
            }

            let mut mt = MoleculeTemplate::new(endpoint.clone(), class, f);
            for (p, mut profile) in profiles {
                let range_type = majority(&profile.range_votes);
                let amd = aggregate(f, &mut profile.multiplicities);
                mt.insert_dtp(DtpEntry {
                    predicate: p.clone(),
                    range_type,
                    amd,
                })
                .expect("one entry per predicate");
                for c in profile.object_classes {
                    mt.insert_intra_class(p.clone(), c);
                }
            }
            mt
        })
        .collect()
}

fn vote_range(graph: &Graph, p: &Iri, o: &Term, rdf_type: &Iri, profile: &mut PredicateProfile) {
    if let Term::Literal(lit) = o {
        *profile.range_votes.entry(lit.datatype().clone()).or_default() += 1;
        return;
    }
    let mut typed = false;
    for c in graph.objects(o, rdf_type).filter_map(Term::as_iri) {
        typed = true;
        *profile.range_votes.entry(c.clone()).or_default() += 1;
        if p != rdf_type {
            profile.object_classes.insert(c.clone());
        }
    }
    if !typed {
        *profile.range_votes.entry(vocab::untyped()).or_default() += 1;
    }
}

// Most votes wins; ties go to the smallest IRI.
fn majority(votes: &BTreeMap<Iri, usize>) -> Iri {
    votes
        .iter()
        .max_by(|(ia, ca), (ib, cb)| ca.cmp(cb).then_with(|| ib.cmp(ia)))
        .map(|(iri, _)| iri.clone())
        .unwrap_or_else(vocab::untyped)
}
