use std::collections::{BTreeMap, BTreeSet};

use super::{Iri, Term, Triple};

type Index<A, B, C> = BTreeMap<A, BTreeMap<B, BTreeSet<C>>>;

/// An in-memory triple set indexed three ways (SPO, POS, OSP).
///
/// Built once, then read concurrently; all lookups return triples in
/// lexicographic order of their N-Triples serialization.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct Graph {
    spo: Index<Term, Iri, Term>,
    pos: Index<Iri, Term, Term>,
    osp: Index<Term, Term, Iri>,
    len: usize,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Adds a triple; returns `false` when it was already present.
    pub fn insert(&mut self, triple: Triple) -> bool {
        let (s, p, o) = triple.into_parts();
        let fresh = self
            .spo
            .entry(s.clone())
            .or_default()
            .entry(p.clone())
            .or_default()
            .insert(o.clone());
        if !fresh {
            return false;
        }
        self.pos
            .entry(p.clone())
            .or_default()
            .entry(o.clone())
            .or_default()
            .insert(s.clone());
        self.osp.entry(o).or_default().entry(s).or_default().insert(p);
        self.len += 1;
        true
    }

    pub fn contains(&self, triple: &Triple) -> bool {
        self.spo
            .get(triple.subject())
            .and_then(|by_p| by_p.get(triple.predicate()))
            .is_some_and(|objects| objects.contains(triple.object()))
    }

    /// All triples in sorted order.
    pub fn iter(&self) -> impl Iterator<Item = Triple> + '_ {
        self.spo.iter().flat_map(|(s, by_p)| {
            by_p.iter()
                .flat_map(move |(p, objects)| objects.iter().map(move |o| make(s, p, o)))
        })
    }

    /// Triples matching every bound position, sorted.
    pub fn match_pattern(&self, subject: Option<&Term>, predicate: Option<&Iri>, object: Option<&Term>) -> Vec<Triple> {
        match (subject, predicate, object) {
            (Some(s), p, o) => {
                let Some(by_p) = self.spo.get(s) else {
                    return Vec::new();
                };
                let mut out = Vec::new();
                for (pred, objects) in range_or_all(by_p, p) {
                    match o {
                        Some(o) if objects.contains(o) => out.push(make(s, pred, o)),
                        Some(_) => {}
                        None => out.extend(objects.iter().map(|obj| make(s, pred, obj))),
                    }
                }
                out
            }
            (None, Some(p), o) => {
                let Some(by_o) = self.pos.get(p) else {
                    return Vec::new();
                };
                let mut out: Vec<Triple> = range_or_all(by_o, o)
                    .flat_map(|(obj, subjects)| subjects.iter().map(move |s| make(s, p, obj)))
                    .collect();
                out.sort();
                out
            }
            (None, None, Some(o)) => self
                .osp
                .get(o)
                .into_iter()
                .flat_map(|by_s| {
                    by_s.iter()
                        .flat_map(move |(s, preds)| preds.iter().map(move |p| make(s, p, o)))
                })
                .collect(),
            (None, None, None) => self.iter().collect(),
        }
    }

    /// Distinct subjects in sorted order.
    pub fn subjects(&self) -> impl Iterator<Item = &Term> {
        self.spo.keys()
    }

    /// Distinct predicates in sorted order.
    pub fn predicates(&self) -> impl Iterator<Item = &Iri> {
        self.pos.keys()
    }

    pub fn uses_predicate(&self, p: &Iri) -> bool {
        self.pos.contains_key(p)
    }

    /// Objects of `(subject, predicate, ?)`.
    pub fn objects(&self, subject: &Term, predicate: &Iri) -> impl Iterator<Item = &Term> {
        self.spo
            .get(subject)
            .and_then(|by_p| by_p.get(predicate))
            .into_iter()
            .flatten()
    }

    /// Subjects of `(?, predicate, object)`.
    pub fn subjects_of(&self, predicate: &Iri, object: &Term) -> impl Iterator<Item = &Term> {
        self.pos
            .get(predicate)
            .and_then(|by_o| by_o.get(object))
            .into_iter()
            .flatten()
    }

    /// Predicate → objects map for one subject.
    pub fn properties(&self, subject: &Term) -> Option<&BTreeMap<Iri, BTreeSet<Term>>> {
        self.spo.get(subject)
    }

    /// Whether the term occurs anywhere in the graph.
    pub fn mentions(&self, term: &Term) -> bool {
        self.spo.contains_key(term)
            || self.osp.contains_key(term)
            || term.as_iri().is_some_and(|iri| self.pos.contains_key(iri))
    }

    /// Sanity check used by tests: the three indexes describe the same set.
    #[doc(hidden)]
    pub fn indexes_agree(&self) -> bool {
        let spo: BTreeSet<Triple> = self.iter().collect();
        let pos: BTreeSet<Triple> = self
            .pos
            .iter()
            .flat_map(|(p, by_o)| {
                by_o.iter()
                    .flat_map(move |(o, ss)| ss.iter().map(move |s| make(s, p, o)))
            })
            .collect();
        let osp: BTreeSet<Triple> = self
            .osp
            .iter()
            .flat_map(|(o, by_s)| {
                by_s.iter()
                    .flat_map(move |(s, ps)| ps.iter().map(move |p| make(s, p, o)))
            })
            .collect();
        spo.len() == self.len && spo == pos && spo == osp
    }
}

fn range_or_all<'a, K: Ord, V>(
    map: &'a BTreeMap<K, V>,
    key: Option<&'a K>,
) -> Box<dyn Iterator<Item = (&'a K, &'a V)> + 'a> {
    match key {
        Some(k) => Box::new(map.get_key_value(k).into_iter()),
        None => Box::new(map.iter()),
    }
}

// Index entries were validated when first inserted.
fn make(s: &Term, p: &Iri, o: &Term) -> Triple {
    Triple::new(s.clone(), p.clone(), o.clone()).expect("indexed triple is well-formed")
}

impl Extend<Triple> for Graph {
    fn extend<I: IntoIterator<Item = Triple>>(&mut self, iter: I) {
        for t in iter {
            self.insert(t);
        }
    }
}

impl FromIterator<Triple> for Graph {
    fn from_iter<I: IntoIterator<Item = Triple>>(iter: I) -> Self {
        let mut g = Graph::new();
        g.extend(iter);
        g
    }
}

impl std::fmt::Debug for Graph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn t(s: &str, p: &str, o: &str) -> Triple {
        Triple::new(Term::iri(s).unwrap(), Iri::new(p).unwrap(), Term::iri(o).unwrap()).unwrap()
    }

    #[test]
    fn insert_is_idempotent() {
        let mut g = Graph::new();
        assert!(g.insert(t("a", "p", "b")));
        assert_eq!(g.len(), 1);
        assert!(!g.insert(t("a", "p", "b")));
        assert_eq!(g.len(), 1);
        g.insert(t("a", "p", "c"));
        assert_eq!(g.len(), 2);
        let a = Term::iri("a").unwrap();
        let p = Iri::new("p").unwrap();
        assert_eq!(g.match_pattern(Some(&a), Some(&p), None).len(), 2);
    }

    #[test]
    fn empty_graph_matches_nothing() {
        assert!(Graph::new().match_pattern(None, None, None).is_empty());
    }

    fn arb_triple() -> impl Strategy<Value = Triple> {
        (0..6u8, 0..4u8, 0..8u8, any::<bool>()).prop_map(|(s, p, o, lit)| {
            let object = if lit {
                Term::literal(format!("v{o}"))
            } else {
                Term::iri(format!("http://x/e{o}")).unwrap()
            };
            Triple::new(
                Term::iri(format!("http://x/e{s}")).unwrap(),
                Iri::new(format!("http://x/p{p}")).unwrap(),
                object,
            )
            .unwrap()
        })
    }

    proptest! {
        #[test]
        fn match_equals_linear_scan(
            triples in proptest::collection::vec(arb_triple(), 0..300),
            probe in arb_triple(),
            mask in 0..8u8,
        ) {
            let g: Graph = triples.iter().cloned().collect();
            prop_assert!(g.indexes_agree());
            let s = (mask & 1 != 0).then(|| probe.subject());
            let p = (mask & 2 != 0).then(|| probe.predicate());
            let o = (mask & 4 != 0).then(|| probe.object());
            let mut expected: Vec<Triple> = triples
                .iter()
                .filter(|t| s.is_none_or(|s| t.subject() == s)
                    && p.is_none_or(|p| t.predicate() == p)
                    && o.is_none_or(|o| t.object() == o))
                .cloned()
                .collect();
            expected.sort_by_key(|t| t.to_string());
            expected.dedup();
            prop_assert_eq!(g.match_pattern(s, p, o), expected);
        }

        #[test]
        fn insert_twice_equals_insert_once(triples in proptest::collection::vec(arb_triple(), 0..50), extra in arb_triple()) {
            let mut once: Graph = triples.iter().cloned().collect();
            once.insert(extra.clone());
            let mut twice = once.clone();
            twice.insert(extra);
            prop_assert_eq!(once, twice);
        }
    }
}
