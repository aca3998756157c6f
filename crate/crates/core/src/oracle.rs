//! Ground truth by brute force: every endpoint graph merged after collapsing
//! identical terms, queried with a plain nested loop.
//!
//! Nothing here reuses the engine's indexes, matcher or identity closure.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::federation::{execute, ExecuteOptions, Federation, FederationError};
use crate::profile::EndpointId;
use crate::query::{BasicGraphPattern, SolutionMapping, TermPattern, Variable};
use crate::rdf::{vocab, Graph, Iri, Term, Triple};

/// The merged dataset, every term replaced by the least member of its
/// identity class.
#[derive(Clone, Debug)]
pub struct UnionGraph {
    graph: Graph,
    canonical: BTreeMap<Term, Term>,
}

impl UnionGraph {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn canonical(&self, t: &Term) -> Term {
        self.canonical.get(t).cloned().unwrap_or_else(|| t.clone())
    }

    fn canonical_iri(&self, iri: &Iri) -> Iri {
        match self.canonical(&Term::Iri(iri.clone())) {
            Term::Iri(i) => i,
            _ => iri.clone(),
        }
    }
}

// Connected components of the identity statements, by repeated search.
fn identity_classes<'g>(graphs: impl Iterator<Item = &'g Graph>) -> BTreeMap<Term, Term> {
    let mut adjacent: BTreeMap<Term, BTreeSet<Term>> = BTreeMap::new();
    for g in graphs {
        for t in g.iter() {
            if !vocab::is_identity_predicate(t.predicate()) || t.object().is_literal() {
                continue;
            }
            let (s, _, o) = t.into_parts();
            adjacent.entry(s.clone()).or_default().insert(o.clone());
            adjacent.entry(o).or_default().insert(s);
        }
    }
    let mut canonical = BTreeMap::new();
    for start in adjacent.keys() {
        if canonical.contains_key(start) {
            continue;
        }
        let mut component = BTreeSet::from([start.clone()]);
        let mut stack = vec![start.clone()];
        while let Some(t) = stack.pop() {
            for n in &adjacent[&t] {
                if component.insert(n.clone()) {
                    stack.push(n.clone());
                }
            }
        }
        let least = component.first().cloned().expect("component holds start");
        for t in component {
            canonical.insert(t, least.clone());
        }
    }
    canonical
}

/// Union of all endpoint graphs after canonicalization. The links file
/// contributes identities but no triples.
pub fn build_union(federation: &Federation) -> UnionGraph {
    let graphs: Vec<&Graph> = federation.graphs().map(|(_, g)| g).collect();
    let canonical = identity_classes(graphs.iter().copied().chain(federation.links()));
    let mut union = UnionGraph {
        graph: Graph::new(),
        canonical,
    };
    let mut graph = Graph::new();
    for g in graphs {
        for t in g.iter() {
            let s = union.canonical(t.subject());
            let p = union.canonical_iri(t.predicate());
            let o = union.canonical(t.object());
            graph.insert(Triple::new(s, p, o).expect("canonical subjects are never literals"));
        }
    }
    union.graph = graph;
    union
}

fn unify(pattern: &TermPattern, term: &Term, binding: &mut BTreeMap<Variable, Term>) -> bool {
    match pattern {
        TermPattern::Term(t) => t == term,
        TermPattern::Variable(v) => match binding.get(v) {
            Some(bound) => bound == term,
            None => {
                binding.insert(v.clone(), term.clone());
                true
            }
        },
    }
}

/// Every solution of `query` over `union`, projected. Query constants are
/// canonicalized first.
pub fn oracle_evaluate(query: &BasicGraphPattern, union: &UnionGraph) -> BTreeSet<SolutionMapping> {
    let canon = |p: &TermPattern| match p {
        TermPattern::Term(t) => TermPattern::Term(union.canonical(t)),
        v => v.clone(),
    };
    let patterns: Vec<[TermPattern; 3]> = query
        .patterns()
        .iter()
        .map(|tp| [canon(tp.subject()), canon(tp.predicate()), canon(tp.object())])
        .collect();
    let triples: Vec<Triple> = union.graph.iter().collect();

    let mut partial: Vec<BTreeMap<Variable, Term>> = vec![BTreeMap::new()];
    for [s, p, o] in &patterns {
        let mut extended = Vec::new();
        for binding in &partial {
            for t in &triples {
                let mut b = binding.clone();
                let predicate = Term::Iri(t.predicate().clone());
                if unify(s, t.subject(), &mut b) && unify(p, &predicate, &mut b) && unify(o, t.object(), &mut b) {
                    extended.push(b);
                }
            }
        }
        partial = extended;
    }
    partial
        .into_iter()
        .map(|b| {
            query
                .projection()
                .iter()
                .filter_map(|v| b.get(v).map(|t| (v.clone(), t.clone())))
                .collect()
        })
        .collect()
}

/// Rewrites mappings into the union's canonical terms.
pub fn canonicalize(mappings: &BTreeSet<SolutionMapping>, union: &UnionGraph) -> BTreeSet<SolutionMapping> {
    mappings.iter().map(|m| m.map_terms(|t| union.canonical(t))).collect()
}

/// Oracle, federated and root-only answers of one query, in canonical terms.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleReport {
    pub oracle: BTreeSet<SolutionMapping>,
    pub federated: BTreeSet<SolutionMapping>,
    pub root_only: BTreeSet<SolutionMapping>,
}

impl OracleReport {
    /// Oracle answers the federated run did not produce.
    pub fn missing(&self) -> Vec<&SolutionMapping> {
        self.oracle.difference(&self.federated).collect()
    }

    /// Federated answers the oracle does not contain.
    pub fn unexpected(&self) -> Vec<&SolutionMapping> {
        self.federated.difference(&self.oracle).collect()
    }

    /// |oracle| - |federated ∩ oracle|.
    pub fn gap(&self) -> usize {
        self.missing().len()
    }

    pub fn is_exact(&self) -> bool {
        self.oracle == self.federated
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "oracle: {}", self.oracle.len());
        let _ = writeln!(out, "federated: {}", self.federated.len());
        let _ = writeln!(out, "root-only: {}", self.root_only.len());
        let _ = writeln!(out, "gap: {}", self.gap());
        for (label, rows) in [("missing", self.missing()), ("unexpected", self.unexpected())] {
            if !rows.is_empty() {
                let _ = writeln!(out, "{label}:");
                for m in rows {
                    let _ = writeln!(out, "  {m}");
                }
            }
        }
        out
    }
}

/// Runs `query` with and without expansion and compares both against the
/// oracle.
pub fn diff_against_oracle(
    query: &BasicGraphPattern,
    federation: &Federation,
    root_hint: Option<&EndpointId>,
) -> Result<OracleReport, FederationError> {
    let union = build_union(federation);
    let mut options = ExecuteOptions {
        root_hint: root_hint.cloned(),
        ..ExecuteOptions::default()
    };
    let federated = execute(query, federation, &options)?;
    options.expand = false;
    let root_only = execute(query, federation, &options)?;
    Ok(OracleReport {
        oracle: oracle_evaluate(query, &union),
        federated: canonicalize(federated.mappings(), &union),
        root_only: canonicalize(root_only.mappings(), &union),
    })
}
