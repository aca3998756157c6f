use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::FixtureSet;
use crate::federation::{EndpointConfig, FederationConfig};
use crate::rdf::{to_ntriples_string, vocab, Graph, Iri, Term, Triple};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum FixtureError {
    #[error("invalid generator spec: {0}")]
    InvalidSpec(String),
}

/// Shape of a generated federation. Endpoint 0 is the hub: it types every
/// entity and holds, for each entity and predicate, either every value or
/// none of them.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RandomFederationSpec {
    pub endpoint_count: usize,
    pub triples_per_endpoint: usize,
    pub class_count: usize,
    pub predicate_count: usize,
    /// Probability that each possible link is written to the links file.
    pub link_density: f64,
    pub seed: u64,
}

impl RandomFederationSpec {
    pub const MAX_ENDPOINTS: usize = 3;
    pub const MAX_TRIPLES: usize = 200;
    pub const MAX_CLASSES: usize = 5;
    pub const MAX_PREDICATES: usize = 8;

    pub fn new(seed: u64, link_density: f64) -> Self {
        Self {
            endpoint_count: Self::MAX_ENDPOINTS,
            triples_per_endpoint: Self::MAX_TRIPLES,
            class_count: Self::MAX_CLASSES,
            predicate_count: Self::MAX_PREDICATES,
            link_density,
            seed,
        }
    }

    pub fn validate(&self) -> Result<(), FixtureError> {
        let bad = |msg: String| Err(FixtureError::InvalidSpec(msg));
        if !(1..=Self::MAX_ENDPOINTS).contains(&self.endpoint_count) {
            return bad(format!("endpoint_count must be in 1..={}", Self::MAX_ENDPOINTS));
        }
        if !(1..=Self::MAX_TRIPLES).contains(&self.triples_per_endpoint) {
            return bad(format!("triples_per_endpoint must be in 1..={}", Self::MAX_TRIPLES));
        }
        if !(1..=Self::MAX_CLASSES).contains(&self.class_count) {
            return bad(format!("class_count must be in 1..={}", Self::MAX_CLASSES));
        }
        if !(1..=Self::MAX_PREDICATES).contains(&self.predicate_count) {
            return bad(format!("predicate_count must be in 1..={}", Self::MAX_PREDICATES));
        }
        if !(0.0..=1.0).contains(&self.link_density) {
            return bad("link_density must be in [0, 1]".to_owned());
        }
        if self.class_count > self.triples_per_endpoint {
            return bad("class_count exceeds triples_per_endpoint".to_owned());
        }
        Ok(())
    }
}

#[derive(Clone, Debug)]
struct PredicateShape {
    index: usize,
    multiplicity: usize,
    target: Option<usize>,
}

#[derive(Clone, Debug)]
struct ClassShape {
    entities: usize,
    predicates: Vec<PredicateShape>,
}

fn iri(endpoint: usize, local: &str) -> Iri {
    Iri::new(format!("http://ex{endpoint}.org/{local}")).expect("generated IRIs are valid")
}

fn class_iri(endpoint: usize, k: usize) -> Iri {
    iri(endpoint, &format!("C{k}"))
}

fn predicate_iri(endpoint: usize, j: usize) -> Iri {
    iri(endpoint, &format!("p{j}"))
}

fn entity(endpoint: usize, k: usize, x: usize) -> Term {
    Term::Iri(iri(endpoint, &format!("e{k}_{x}")))
}

fn shapes(spec: &RandomFederationSpec, rng: &mut ChaCha8Rng) -> Vec<ClassShape> {
    let c = spec.class_count;
    let per_class = spec.triples_per_endpoint / c;
    let all: Vec<usize> = (0..spec.predicate_count).collect();
    let mut classes: Vec<ClassShape> = (0..c)
        .map(|_| {
            let n = rng.gen_range(1..=3).min(all.len());
            let mut chosen: Vec<usize> = all.choose_multiple(rng, n).copied().collect();
            chosen.sort_unstable();
            let predicates = chosen
                .into_iter()
                .map(|j| PredicateShape {
                    index: j,
                    multiplicity: rng.gen_range(1..=3),
                    target: (j % 3 == 2 && c > 1).then_some(0),
                })
                .collect();
            ClassShape {
                entities: 0,
                predicates,
            }
        })
        .collect();
    for class in classes.iter_mut() {
        while !class.predicates.is_empty()
            && 1 + class.predicates.iter().map(|p| p.multiplicity).sum::<usize>() > per_class
        {
            class.predicates.pop();
        }
        let cost = 1 + class.predicates.iter().map(|p| p.multiplicity).sum::<usize>();
        class.entities = (spec.triples_per_endpoint / (c * cost)).clamp(1, 6);
    }
    for k in 0..c {
        let t = (k + 1) % c;
        let target_entities = classes[t].entities;
        for p in &mut classes[k].predicates {
            if p.target.is_some() {
                p.target = Some(t);
                p.multiplicity = p.multiplicity.min(target_entities);
            }
        }
    }
    classes
}

fn value(endpoint: usize, k: usize, x: usize, p: &PredicateShape, r: usize, classes: &[ClassShape]) -> Term {
    match p.target {
        Some(t) => entity(endpoint, t, (x + r) % classes[t].entities),
        None => Term::literal(format!("v{k}_{x}_{}_{r}", p.index)),
    }
}

fn add(graph: &mut Graph, s: Term, p: Iri, o: Term) {
    graph.insert(Triple::new(s, p, o).expect("generated subjects are IRIs"));
}

/// Generates a federation from `spec`. The same spec always yields the
/// same files.
pub fn gen_federation(spec: &RandomFederationSpec) -> Result<FixtureSet, FixtureError> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.endpoint_count;
    let classes = shapes(spec, &mut rng);
    let mut graphs: Vec<Graph> = (0..n).map(|_| Graph::new()).collect();

    for (k, class) in classes.iter().enumerate() {
        for x in 0..class.entities {
            add(
                &mut graphs[0],
                entity(0, k, x),
                vocab::rdf_type(),
                Term::Iri(class_iri(0, k)),
            );
            for p in &class.predicates {
                let owner = if x == 0 || n == 1 { 0 } else { rng.gen_range(0..n) };
                for (i, graph) in graphs.iter_mut().enumerate() {
                    let held: Vec<usize> = if i == owner {
                        (0..p.multiplicity).collect()
                    } else if i != 0 && p.multiplicity > 1 && rng.gen_bool(0.3) {
                        let size = rng.gen_range(1..p.multiplicity);
                        let mut rs: Vec<usize> = (0..p.multiplicity).collect();
                        rs.shuffle(&mut rng);
                        rs.truncate(size);
                        rs
                    } else {
                        Vec::new()
                    };
                    if held.is_empty() {
                        continue;
                    }
                    if i != 0 {
                        add(graph, entity(i, k, x), vocab::rdf_type(), Term::Iri(class_iri(i, k)));
                    }
                    for r in held {
                        add(
                            graph,
                            entity(i, k, x),
                            predicate_iri(i, p.index),
                            value(i, k, x, p, r, &classes),
                        );
                    }
                }
            }
        }
    }

    let mut links = Graph::new();
    let same_as = Iri::from_static(vocab::OWL_SAME_AS);
    let eq_class = Iri::from_static(vocab::OWL_EQUIVALENT_CLASS);
    let eq_property = Iri::from_static(vocab::OWL_EQUIVALENT_PROPERTY);
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect();
    let predicates: BTreeSet<usize> = classes
        .iter()
        .flat_map(|c| c.predicates.iter().map(|p| p.index))
        .collect();
    for &(a, b) in &pairs {
        for k in 0..classes.len() {
            if rng.gen_bool(spec.link_density) {
                add(
                    &mut links,
                    Term::Iri(class_iri(b, k)),
                    eq_class.clone(),
                    Term::Iri(class_iri(a, k)),
                );
            }
        }
        for &j in &predicates {
            if rng.gen_bool(spec.link_density) {
                add(
                    &mut links,
                    Term::Iri(predicate_iri(b, j)),
                    eq_property.clone(),
                    Term::Iri(predicate_iri(a, j)),
                );
            }
        }
    }
    for (i, graph) in graphs.iter().enumerate().skip(1) {
        let mut present = BTreeSet::new();
        for (k, class) in classes.iter().enumerate() {
            for x in 0..class.entities {
                let e = entity(i, k, x);
                if graph.mentions(&e) {
                    present.insert((k, x));
                }
            }
        }
        for (k, x) in present {
            if rng.gen_bool(spec.link_density) {
                add(&mut links, entity(i, k, x), same_as.clone(), entity(0, k, x));
            }
        }
    }

    let mut queries = BTreeMap::new();
    let mut pairs: Vec<(usize, usize)> = classes
        .iter()
        .enumerate()
        .flat_map(|(k, c)| c.predicates.iter().map(move |p| (k, p.index)))
        .collect();
    pairs.shuffle(&mut rng);
    pairs.truncate(4);
    pairs.sort_unstable();
    let mut probes = Vec::new();
    for (k, j) in pairs {
        probes.push(format!(
            "SELECT ?s ?o WHERE {{\n  ?s a {} .\n  ?s {} ?o .\n}}\n",
            class_iri(0, k),
            predicate_iri(0, j)
        ));
    }
    let two_hop = classes.iter().enumerate().find_map(|(k, c)| {
        c.predicates.iter().find_map(|p| {
            let t = p.target?;
            let l = classes[t].predicates.first()?;
            Some((k, p.index, t, l.index))
        })
    });
    if let Some((k, j, t, l)) = two_hop {
        probes.push(format!(
            "SELECT ?s ?x ?o WHERE {{\n  ?s a {} .\n  ?s {} ?x .\n  ?x a {} .\n  ?x {} ?o .\n}}\n",
            class_iri(0, k),
            predicate_iri(0, j),
            class_iri(0, t),
            predicate_iri(0, l)
        ));
    }
    let mut k = 0;
    while probes.len() < 3 {
        probes.push(format!(
            "SELECT ?s WHERE {{\n  ?s a {} .\n}}\n",
            class_iri(0, k % classes.len())
        ));
        k += 1;
    }
    for (q, text) in probes.into_iter().enumerate() {
        queries.insert(format!("probe-{q}"), text);
    }

    let mut files = BTreeMap::new();
    for (i, graph) in graphs.iter().enumerate() {
        files.insert(format!("e{i}.nt"), to_ntriples_string(graph));
    }
    files.insert("links.nt".to_owned(), to_ntriples_string(&links));
    let config = FederationConfig {
        aggregation: "median".to_owned(),
        endpoints: (0..n)
            .map(|i| EndpointConfig {
                id: format!("e{i}"),
                data: format!("e{i}.nt").into(),
                available: true,
            })
            .collect(),
        links: Some("links.nt".into()),
        catalog: None,
    };
    Ok(FixtureSet {
        name: format!("random-{}-{}", spec.seed, spec.link_density),
        config,
        files,
        queries,
    })
}
