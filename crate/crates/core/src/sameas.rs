//! Identity closure over `owl:sameAs`, `owl:equivalentClass` and
//! `owl:equivalentProperty` statements.
//!
//! Entities, classes and properties share one union-find. Each equivalence
//! class remembers which endpoints mention which of its members, so a term
//! can be rewritten into the vocabulary of a given source.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::profile::EndpointId;
use crate::rdf::{vocab, Graph, Iri, Term};

#[derive(Debug, Default, Clone)]
struct UnionFind {
    parent: Vec<usize>,
    rank: Vec<u8>,
}

impl UnionFind {
    fn add(&mut self) -> usize {
        let id = self.parent.len();
        self.parent.push(id);
        self.rank.push(0);
        id
    }

    fn find(&self, mut x: usize) -> usize {
        while self.parent[x] != x {
            x = self.parent[x];
        }
        x
    }

    fn find_compress(&mut self, x: usize) -> usize {
        let root = self.find(x);
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find_compress(a), self.find_compress(b));
        if ra == rb {
            return;
        }
        match self.rank[ra].cmp(&self.rank[rb]) {
            std::cmp::Ordering::Less => self.parent[ra] = rb,
            std::cmp::Ordering::Greater => self.parent[rb] = ra,
            std::cmp::Ordering::Equal => {
                self.parent[rb] = ra;
                self.rank[ra] += 1;
            }
        }
    }
}

/// Accumulates identity statements, then freezes into a [`SameAsIndex`].
#[derive(Debug, Default)]
pub struct SameAsBuilder {
    ids: HashMap<Term, usize>,
    terms: Vec<Term>,
    uf: UnionFind,
}

impl SameAsBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    fn id(&mut self, t: &Term) -> usize {
        if let Some(&id) = self.ids.get(t) {
            return id;
        }
        let id = self.uf.add();
        self.ids.insert(t.clone(), id);
        self.terms.push(t.clone());
        id
    }

    /// Declares `a` and `b` identical. Literals are ignored.
    pub fn link(&mut self, a: &Term, b: &Term) {
        if a.is_literal() || b.is_literal() {
            return;
        }
        let (ia, ib) = (self.id(a), self.id(b));
        self.uf.union(ia, ib);
    }

    /// Picks up every identity statement in `graph`.
    pub fn add_graph(&mut self, graph: &Graph) {
        for p in graph
            .predicates()
            .filter(|p| vocab::is_identity_predicate(p))
            .cloned()
            .collect::<Vec<_>>()
        {
            for t in graph.match_pattern(None, Some(&p), None) {
                self.link(t.subject(), t.object());
            }
        }
    }

    /// Freezes the closure and records, for every non-trivial equivalence
    /// class, which endpoints use which members. Identity statements do not
    /// count as use.
    pub fn build<'g>(mut self, graphs: impl IntoIterator<Item = (&'g EndpointId, &'g Graph)>) -> SameAsIndex {
        let mut members: BTreeMap<usize, BTreeSet<Term>> = BTreeMap::new();
        for (t, &id) in &self.ids {
            let root = self.uf.find_compress(id);
            members.entry(root).or_default().insert(t.clone());
        }
        let mut classes = Vec::new();
        let mut class_of = HashMap::new();
        for set in members.into_values().filter(|s| s.len() > 1) {
            let idx = classes.len();
            for t in &set {
                class_of.insert(t.clone(), idx);
            }
            classes.push(set);
        }
        let mut presence: HashMap<Term, BTreeSet<EndpointId>> = HashMap::new();
        for (endpoint, graph) in graphs {
            for triple in graph.iter() {
                if vocab::is_identity_predicate(triple.predicate()) {
                    continue;
                }
                let (s, p, o) = triple.into_parts();
                for t in [s, Term::Iri(p), o] {
                    if class_of.contains_key(&t) {
                        presence.entry(t).or_default().insert(endpoint.clone());
                    }
                }
            }
        }
        SameAsIndex {
            classes,
            class_of,
            presence,
        }
    }
}

/// Frozen reflexive, symmetric, transitive identity closure.
#[derive(Debug, Default, Clone)]
pub struct SameAsIndex {
    classes: Vec<BTreeSet<Term>>,
    class_of: HashMap<Term, usize>,
    presence: HashMap<Term, BTreeSet<EndpointId>>,
}

impl SameAsIndex {
    /// Closure over the identity statements of `graphs` plus `links`.
    pub fn from_graphs<'g>(
        graphs: impl IntoIterator<Item = (&'g EndpointId, &'g Graph)> + Clone,
        links: Option<&Graph>,
    ) -> Self {
        let mut builder = SameAsBuilder::new();
        for (_, g) in graphs.clone() {
            builder.add_graph(g);
        }
        if let Some(links) = links {
            builder.add_graph(links);
        }
        builder.build(graphs)
    }

    pub fn equivalent(&self, a: &Term, b: &Term) -> bool {
        a == b || matches!((self.class_of.get(a), self.class_of.get(b)), (Some(x), Some(y)) if x == y)
    }

    pub fn equivalent_iri(&self, a: &Iri, b: &Iri) -> bool {
        a == b || self.equivalent(&Term::Iri(a.clone()), &Term::Iri(b.clone()))
    }

    /// All members of `t`'s class, sorted; `[t]` when `t` has no links.
    pub fn members(&self, t: &Term) -> Vec<Term> {
        match self.class_of.get(t) {
            Some(&idx) => self.classes[idx].iter().cloned().collect(),
            None => vec![t.clone()],
        }
    }

    /// IRI members of an IRI's class, sorted.
    pub fn iri_members(&self, iri: &Iri) -> Vec<Iri> {
        self.members(&Term::Iri(iri.clone()))
            .into_iter()
            .filter_map(|t| t.as_iri().cloned())
            .collect()
    }

    /// Whether `t` takes part in any identity statement with another term.
    pub fn is_linked(&self, t: &Term) -> bool {
        self.class_of.contains_key(t)
    }

    /// Lexicographically least member of `t`'s class.
    pub fn canonical(&self, t: &Term) -> Term {
        match self.class_of.get(t) {
            Some(&idx) => self.classes[idx].first().cloned().expect("classes are non-empty"),
            None => t.clone(),
        }
    }

    /// Least IRI member of an IRI's class.
    pub fn canonical_iri(&self, iri: &Iri) -> Iri {
        self.iri_members(iri).into_iter().next().unwrap_or_else(|| iri.clone())
    }

    fn present_at(&self, t: &Term, endpoint: &EndpointId) -> bool {
        self.presence.get(t).is_some_and(|eps| eps.contains(endpoint))
    }

    /// Rewrites `t` for a request to `endpoint`: kept when the endpoint knows
    /// it, otherwise the least equivalent the endpoint mentions, otherwise
    /// unchanged.
    pub fn localize(&self, t: &Term, endpoint: &EndpointId) -> Term {
        let Some(&idx) = self.class_of.get(t) else {
            return t.clone();
        };
        if self.present_at(t, endpoint) {
            return t.clone();
        }
        self.classes[idx]
            .iter()
            .find(|m| self.present_at(m, endpoint))
            .cloned()
            .unwrap_or_else(|| t.clone())
    }

    /// Rewrites an answer term into `endpoint`'s vocabulary: the least
    /// equivalent the endpoint mentions, else the canonical member.
    pub fn to_vocabulary_of(&self, t: &Term, endpoint: &EndpointId) -> Term {
        let Some(&idx) = self.class_of.get(t) else {
            return t.clone();
        };
        let class = &self.classes[idx];
        class
            .iter()
            .find(|m| self.present_at(m, endpoint))
            .or_else(|| class.first())
            .cloned()
            .expect("classes are non-empty")
    }

    /// Equivalence classes with more than one member.
    pub fn classes(&self) -> impl Iterator<Item = &BTreeSet<Term>> {
        self.classes.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn iri(s: &str) -> Term {
        Term::iri(s).unwrap()
    }

    #[test]
    fn closure_is_transitive_and_symmetric() {
        let mut b = SameAsBuilder::new();
        b.link(&iri("a"), &iri("b"));
        b.link(&iri("c"), &iri("b"));
        let idx = b.build(std::iter::empty());
        assert!(idx.equivalent(&iri("a"), &iri("c")));
        assert!(idx.equivalent(&iri("c"), &iri("a")));
        assert!(idx.equivalent(&iri("z"), &iri("z")));
        assert!(!idx.equivalent(&iri("a"), &iri("z")));
        assert_eq!(idx.canonical(&iri("c")), iri("a"));
    }

    #[test]
    fn localize_prefers_terms_present_at_endpoint() {
        let ep_a = EndpointId::new("A").unwrap();
        let ep_b = EndpointId::new("B").unwrap();
        let ga = crate::rdf::parse_ntriples_str("<x1> <p> <o> .").unwrap();
        let gb = crate::rdf::parse_ntriples_str("<x2> <q> <o> .").unwrap();
        let links = crate::rdf::parse_ntriples_str("<x1> <http://www.w3.org/2002/07/owl#sameAs> <x2> .").unwrap();
        let idx = SameAsIndex::from_graphs([(&ep_a, &ga), (&ep_b, &gb)], Some(&links));
        assert_eq!(idx.localize(&iri("x1"), &ep_b), iri("x2"));
        assert_eq!(idx.localize(&iri("x2"), &ep_b), iri("x2"));
        assert_eq!(idx.to_vocabulary_of(&iri("x2"), &ep_a), iri("x1"));
        assert_eq!(idx.localize(&iri("o"), &ep_a), iri("o"));
    }

    proptest! {
        #[test]
        fn closure_matches_reachability(edges in proptest::collection::vec((0..8u8, 0..8u8), 0..12)) {
            let mut b = SameAsBuilder::new();
            for (x, y) in &edges {
                b.link(&iri(&format!("n{x}")), &iri(&format!("n{y}")));
            }
            let idx = b.build(std::iter::empty());
            // Floyd-Warshall style reachability over the undirected edges.
            let mut reach = [[false; 8]; 8];
            for (i, row) in reach.iter_mut().enumerate() {
                row[i] = true;
            }
            for (x, y) in &edges {
                reach[*x as usize][*y as usize] = true;
                reach[*y as usize][*x as usize] = true;
            }
            for k in 0..8 {
                for i in 0..8 {
                    if reach[i][k] {
                        let via = reach[k];
                        for (cell, v) in reach[i].iter_mut().zip(via) {
                            *cell |= v;
                        }
                    }
                }
            }
            for (i, row) in reach.iter().enumerate() {
                for (j, &reachable) in row.iter().enumerate() {
                    prop_assert_eq!(
                        idx.equivalent(&iri(&format!("n{i}")), &iri(&format!("n{j}"))),
                        reachable
                    );
                }
            }
        }
    }
}
