use std::collections::{BTreeMap, BTreeSet};

use mtfed_core::oracle::{build_union, oracle_evaluate};
use mtfed_core::query::TermPattern;
use mtfed_core::rdf::vocab;
use mtfed_core::{
    execute, AggregationFn, BasicGraphPattern, EndpointId, ExecuteOptions, Federation, Graph, Iri, Term, Triple,
    TriplePattern, Variable,
};
use proptest::prelude::*;

#[derive(Clone, Debug)]
enum Obj {
    Entity(u8),
    Literal(u8),
}

#[derive(Clone, Debug)]
struct Fact {
    subject: u8,
    predicate: Option<u8>,
    object: Obj,
}

// `None` predicate stands for rdf:type, whose object is a class.
fn arb_fact() -> impl Strategy<Value = Fact> {
    prop_oneof![
        (0..6u8, 0..3u8).prop_map(|(s, c)| Fact {
            subject: s,
            predicate: None,
            object: Obj::Entity(c),
        }),
        (0..6u8, 0..4u8, 0..6u8).prop_map(|(s, p, o)| Fact {
            subject: s,
            predicate: Some(p),
            object: Obj::Entity(o),
        }),
        (0..6u8, 0..4u8, 0..3u8).prop_map(|(s, p, o)| Fact {
            subject: s,
            predicate: Some(p),
            object: Obj::Literal(o),
        }),
    ]
}

fn entity(ns: &str, i: u8) -> Term {
    Term::iri(format!("http://{ns}.test/e{i}")).unwrap()
}

fn class(ns: &str, i: u8) -> Term {
    Term::iri(format!("http://{ns}.test/C{i}")).unwrap()
}

fn predicate(ns: &str, i: u8) -> Iri {
    Iri::new(format!("http://{ns}.test/p{i}")).unwrap()
}

fn triple(fact: &Fact, ns: &str) -> Triple {
    match (fact.predicate, &fact.object) {
        (None, Obj::Entity(c)) => Triple::new(entity(ns, fact.subject), vocab::rdf_type(), class(ns, *c)),
        (Some(p), Obj::Entity(o)) => Triple::new(entity(ns, fact.subject), predicate(ns, p), entity(ns, *o)),
        (Some(p), Obj::Literal(l)) => Triple::new(
            entity(ns, fact.subject),
            predicate(ns, p),
            Term::literal(format!("v{l}")),
        ),
        (None, Obj::Literal(_)) => unreachable!("types are never literal"),
    }
    .unwrap()
}

#[derive(Clone, Debug)]
enum Slot {
    Var(u8),
    Entity(u8),
    Literal(u8),
    Class(u8),
}

fn arb_slot() -> impl Strategy<Value = Slot> {
    prop_oneof![
        4 => (0..3u8).prop_map(Slot::Var),
        1 => (0..6u8).prop_map(Slot::Entity),
        1 => (0..3u8).prop_map(Slot::Literal),
    ]
}

fn arb_pattern() -> impl Strategy<Value = (Slot, Option<u8>, Slot)> {
    prop_oneof![
        (arb_slot(), 0..3u8).prop_map(|(s, c)| (s, None, Slot::Class(c))),
        (arb_slot(), 0..4u8, arb_slot()).prop_map(|(s, p, o)| (s, Some(p), o)),
    ]
}

fn slot(s: &Slot) -> TermPattern {
    let vars = ["a", "b", "c"];
    match s {
        Slot::Var(v) => TermPattern::Variable(Variable::new(vars[*v as usize]).unwrap()),
        Slot::Entity(e) => TermPattern::Term(entity("x", *e)),
        Slot::Literal(l) => TermPattern::Term(Term::literal(format!("v{l}"))),
        Slot::Class(c) => TermPattern::Term(class("x", *c)),
    }
}

fn query(patterns: &[(Slot, Option<u8>, Slot)]) -> Option<BasicGraphPattern> {
    let mut tps = Vec::new();
    for (s, p, o) in patterns {
        if matches!(s, Slot::Literal(_)) {
            return None;
        }
        let p = p.map_or_else(vocab::rdf_type, |p| predicate("x", p));
        tps.push(TriplePattern::new(slot(s), p, slot(o)).ok()?);
    }
    let projection: BTreeSet<Variable> = tps.iter().flat_map(|tp| tp.variables().cloned()).collect();
    if projection.is_empty() {
        return None;
    }
    BasicGraphPattern::new(tps, projection.into_iter().collect()).ok()
}

fn ep(s: &str) -> EndpointId {
    EndpointId::new(s).unwrap()
}

fn federation(graphs: Vec<(&str, Graph)>, links: Option<Graph>) -> Federation {
    let graphs: BTreeMap<_, _> = graphs.into_iter().map(|(id, g)| (ep(id), g)).collect();
    Federation::from_graphs(graphs, links, AggregationFn::Median).unwrap()
}

fn graph(facts: &[Fact], ns: &str) -> Graph {
    let mut g = Graph::new();
    for f in facts {
        g.insert(triple(f, ns));
    }
    g
}

fn link(g: &mut Graph, p: &str, a: Term, b: Term) {
    g.insert(Triple::new(a, Iri::new(p).unwrap(), b).unwrap());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn one_endpoint_matches_the_oracle(
        facts in proptest::collection::vec(arb_fact(), 0..30),
        patterns in proptest::collection::vec(arb_pattern(), 1..4),
    ) {
        let Some(q) = query(&patterns) else { return Ok(()) };
        let fed = federation(vec![("only", graph(&facts, "x"))], None);
        let expected = oracle_evaluate(&q, &build_union(&fed));
        let result = execute(&q, &fed, &ExecuteOptions::default()).unwrap();
        prop_assert_eq!(result.mappings(), &expected);
        let root_only = execute(&q, &fed, &ExecuteOptions::root_only()).unwrap();
        prop_assert_eq!(root_only.mappings(), &expected);
    }

    #[test]
    fn splitting_the_data_keeps_the_oracle(
        facts in proptest::collection::vec((arb_fact(), any::<bool>()), 0..30),
        patterns in proptest::collection::vec(arb_pattern(), 1..4),
    ) {
        let Some(q) = query(&patterns) else { return Ok(()) };
        let all: Vec<Fact> = facts.iter().map(|(f, _)| f.clone()).collect();
        let whole = federation(vec![("whole", graph(&all, "x"))], None);
        let expected = oracle_evaluate(&q, &build_union(&whole));

        let left: Vec<Fact> = facts.iter().filter(|(_, l)| *l).map(|(f, _)| f.clone()).collect();
        let right: Vec<Fact> = facts.iter().filter(|(_, l)| !*l).map(|(f, _)| f.clone()).collect();
        let same_names = federation(vec![("left", graph(&left, "x")), ("right", graph(&right, "x"))], None);
        prop_assert_eq!(&oracle_evaluate(&q, &build_union(&same_names)), &expected);

        // The right half in its own vocabulary, reconciled through the links file.
        let mut links = Graph::new();
        for i in 0..6 {
            link(&mut links, vocab::OWL_SAME_AS, entity("x", i), entity("y", i));
        }
        for i in 0..3 {
            link(&mut links, vocab::OWL_EQUIVALENT_CLASS, class("x", i), class("y", i));
        }
        for i in 0..4 {
            link(
                &mut links,
                vocab::OWL_EQUIVALENT_PROPERTY,
                Term::Iri(predicate("x", i)),
                Term::Iri(predicate("y", i)),
            );
        }
        let renamed = federation(vec![("left", graph(&left, "x")), ("right", graph(&right, "y"))], Some(links));
        prop_assert_eq!(&oracle_evaluate(&q, &build_union(&renamed)), &expected);
    }
}
