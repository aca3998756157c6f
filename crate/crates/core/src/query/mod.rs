//! Triple patterns, basic graph patterns and solution mappings.

mod parser;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::rdf::{Iri, Term, Triple};

pub use parser::parse_query;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PatternError {
    #[error("invalid variable name {0:?}")]
    InvalidVariable(String),
    #[error("literal in subject position")]
    LiteralSubject,
    #[error("predicate must be an IRI or a variable")]
    PredicateNotIri,
    #[error("a basic graph pattern needs at least one triple pattern")]
    Empty,
    #[error("projected variable ?{0} does not occur in the patterns")]
    UnboundProjection(String),
}

/// A query variable, stored without the leading `?`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Variable(Arc<str>);

impl Variable {
    pub fn new(name: impl AsRef<str>) -> Result<Self, PatternError> {
        let name = name.as_ref();
        let mut chars = name.chars();
        let valid = chars.next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
            && chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !valid {
            return Err(PatternError::InvalidVariable(name.to_owned()));
        }
        Ok(Self(Arc::from(name)))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "?{}", self.0)
    }
}

impl fmt::Debug for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// One position of a triple pattern.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TermPattern {
    Term(Term),
    Variable(Variable),
}

impl TermPattern {
    pub fn as_term(&self) -> Option<&Term> {
        match self {
            TermPattern::Term(t) => Some(t),
            TermPattern::Variable(_) => None,
        }
    }

    pub fn as_variable(&self) -> Option<&Variable> {
        match self {
            TermPattern::Variable(v) => Some(v),
            TermPattern::Term(_) => None,
        }
    }

    fn substitute(&self, mapping: &SolutionMapping) -> TermPattern {
        match self {
            TermPattern::Variable(v) => match mapping.get(v) {
                Some(t) => TermPattern::Term(t.clone()),
                None => self.clone(),
            },
            TermPattern::Term(_) => self.clone(),
        }
    }
}

impl From<Term> for TermPattern {
    fn from(t: Term) -> Self {
        TermPattern::Term(t)
    }
}

impl From<Iri> for TermPattern {
    fn from(i: Iri) -> Self {
        TermPattern::Term(Term::Iri(i))
    }
}

impl From<Variable> for TermPattern {
    fn from(v: Variable) -> Self {
        TermPattern::Variable(v)
    }
}

impl fmt::Display for TermPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TermPattern::Term(t) => fmt::Display::fmt(t, f),
            TermPattern::Variable(v) => fmt::Display::fmt(v, f),
        }
    }
}

impl fmt::Debug for TermPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TriplePattern {
    subject: TermPattern,
    predicate: TermPattern,
    object: TermPattern,
}

impl TriplePattern {
    pub fn new(
        subject: impl Into<TermPattern>,
        predicate: impl Into<TermPattern>,
        object: impl Into<TermPattern>,
    ) -> Result<Self, PatternError> {
        let (subject, predicate, object) = (subject.into(), predicate.into(), object.into());
        if subject.as_term().is_some_and(Term::is_literal) {
            return Err(PatternError::LiteralSubject);
        }
        if predicate.as_term().is_some_and(|t| t.as_iri().is_none()) {
            return Err(PatternError::PredicateNotIri);
        }
        Ok(Self {
            subject,
            predicate,
            object,
        })
    }

    pub fn subject(&self) -> &TermPattern {
        &self.subject
    }

    pub fn predicate(&self) -> &TermPattern {
        &self.predicate
    }

    pub fn object(&self) -> &TermPattern {
        &self.object
    }

    /// The predicate, when bound.
    pub fn predicate_iri(&self) -> Option<&Iri> {
        self.predicate.as_term().and_then(Term::as_iri)
    }

    pub fn variables(&self) -> impl Iterator<Item = &Variable> {
        [&self.subject, &self.predicate, &self.object]
            .into_iter()
            .filter_map(TermPattern::as_variable)
    }

    /// Replaces every variable bound in `mapping` by its term.
    pub fn apply(&self, mapping: &SolutionMapping) -> TriplePattern {
        let subject = self.subject.substitute(mapping);
        let predicate = self.predicate.substitute(mapping);
        // A binding may be a literal or blank node that cannot stand in that
        // position; such an instantiation matches nothing, so the variable is
        // kept and the caller's merge step rejects the result.
        let subject = if subject.as_term().is_some_and(Term::is_literal) {
            self.subject.clone()
        } else {
            subject
        };
        let predicate = if predicate.as_term().is_some_and(|t| t.as_iri().is_none()) {
            self.predicate.clone()
        } else {
            predicate
        };
        TriplePattern {
            subject,
            predicate,
            object: self.object.substitute(mapping),
        }
    }

    /// The mapping that makes this pattern equal to `triple`, if any.
    pub fn match_triple(&self, triple: &Triple) -> Option<SolutionMapping> {
        let mut mapping = SolutionMapping::new();
        let predicate = Term::Iri(triple.predicate().clone());
        for (pattern, term) in [
            (&self.subject, triple.subject()),
            (&self.predicate, &predicate),
            (&self.object, triple.object()),
        ] {
            match pattern {
                TermPattern::Term(t) if t != term => return None,
                TermPattern::Term(_) => {}
                TermPattern::Variable(v) => match mapping.get(v) {
                    Some(bound) if bound != term => return None,
                    Some(_) => {}
                    None => {
                        mapping.insert(v.clone(), term.clone());
                    }
                },
            }
        }
        Some(mapping)
    }

    /// Rebuilds the pattern with positions transformed; invariants are rechecked.
    pub fn map_positions(&self, mut f: impl FnMut(&TermPattern) -> TermPattern) -> Result<TriplePattern, PatternError> {
        TriplePattern::new(f(&self.subject), f(&self.predicate), f(&self.object))
    }
}

impl fmt::Display for TriplePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} {} {})", self.subject, self.predicate, self.object)
    }
}

impl fmt::Debug for TriplePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A SELECT query over a conjunction of triple patterns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasicGraphPattern {
    patterns: Vec<TriplePattern>,
    projection: Vec<Variable>,
}

impl BasicGraphPattern {
    pub fn new(patterns: Vec<TriplePattern>, projection: Vec<Variable>) -> Result<Self, PatternError> {
        if patterns.is_empty() {
            return Err(PatternError::Empty);
        }
        let bound: BTreeSet<&Variable> = patterns.iter().flat_map(TriplePattern::variables).collect();
        if let Some(v) = projection.iter().find(|v| !bound.contains(v)) {
            return Err(PatternError::UnboundProjection(v.name().to_owned()));
        }
        Ok(Self { patterns, projection })
    }

    pub fn patterns(&self) -> &[TriplePattern] {
        &self.patterns
    }

    pub fn projection(&self) -> &[Variable] {
        &self.projection
    }

    /// The class `C` of a `subject rdf:type C` pattern, if the query has one.
    pub fn type_constraint(&self, subject: &TermPattern) -> Option<&Iri> {
        self.patterns.iter().find_map(|tp| {
            let is_type = tp
                .predicate_iri()
                .is_some_and(|p| p.as_str() == crate::rdf::vocab::RDF_TYPE);
            (is_type && tp.subject() == subject)
                .then(|| tp.object().as_term().and_then(Term::as_iri))
                .flatten()
        })
    }
}

/// A partial function from variables to terms.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SolutionMapping(BTreeMap<Variable, Term>);

impl SolutionMapping {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, v: &Variable) -> Option<&Term> {
        self.0.get(v)
    }

    pub fn insert(&mut self, v: Variable, t: Term) -> Option<Term> {
        self.0.insert(v, t)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Variable, &Term)> {
        self.0.iter()
    }

    /// Union of two mappings that agree on their shared variables.
    pub fn merge(&self, other: &SolutionMapping) -> Option<SolutionMapping> {
        let mut out = self.clone();
        for (v, t) in &other.0 {
            match out.0.get(v) {
                Some(existing) if existing != t => return None,
                Some(_) => {}
                None => {
                    out.0.insert(v.clone(), t.clone());
                }
            }
        }
        Some(out)
    }

    /// Restriction to `vars`.
    pub fn project(&self, vars: &[Variable]) -> SolutionMapping {
        SolutionMapping(
            vars.iter()
                .filter_map(|v| self.0.get(v).map(|t| (v.clone(), t.clone())))
                .collect(),
        )
    }

    pub fn map_terms(&self, mut f: impl FnMut(&Term) -> Term) -> SolutionMapping {
        SolutionMapping(self.0.iter().map(|(v, t)| (v.clone(), f(t))).collect())
    }
}

impl FromIterator<(Variable, Term)> for SolutionMapping {
    fn from_iter<I: IntoIterator<Item = (Variable, Term)>>(iter: I) -> Self {
        SolutionMapping(iter.into_iter().collect())
    }
}

impl fmt::Display for SolutionMapping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, (v, t)) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{v} -> {t}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for SolutionMapping {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn var(n: &str) -> Variable {
        Variable::new(n).unwrap()
    }

    fn iri(s: &str) -> Term {
        Term::iri(s).unwrap()
    }

    fn mapping(pairs: &[(&str, &str)]) -> SolutionMapping {
        pairs.iter().map(|(v, t)| (var(v), iri(t))).collect()
    }

    #[test]
    fn variable_names_are_validated() {
        assert!(Variable::new("m").is_ok());
        assert!(Variable::new("_x1").is_ok());
        assert!(Variable::new("").is_err());
        assert!(Variable::new("1x").is_err());
        assert!(Variable::new("a-b").is_err());
    }

    #[test]
    fn apply_substitutes_bound_variables() {
        let tp = TriplePattern::new(var("s"), iri("p"), var("o")).unwrap();
        let applied = tp.apply(&mapping(&[("s", "a")]));
        assert_eq!(applied, TriplePattern::new(iri("a"), iri("p"), var("o")).unwrap());
        assert_eq!(tp.apply(&SolutionMapping::new()), tp);

        let all = TriplePattern::new(var("s"), var("p"), var("o")).unwrap();
        let ground = all.apply(&mapping(&[("s", "a"), ("p", "q"), ("o", "b")]));
        assert_eq!(ground.variables().count(), 0);
    }

    #[test]
    fn merge_examples() {
        let xa = mapping(&[("x", "a")]);
        assert_eq!(
            xa.merge(&mapping(&[("y", "b")])),
            Some(mapping(&[("x", "a"), ("y", "b")]))
        );
        assert_eq!(xa.merge(&mapping(&[("x", "b")])), None);
        assert_eq!(
            xa.merge(&mapping(&[("x", "a"), ("y", "c")])),
            Some(mapping(&[("x", "a"), ("y", "c")]))
        );
    }

    #[test]
    fn match_triple_respects_repeated_variables() {
        let tp = TriplePattern::new(var("x"), iri("p"), var("x")).unwrap();
        let loop_t = Triple::new(iri("a"), Iri::new("p").unwrap(), iri("a")).unwrap();
        let other = Triple::new(iri("a"), Iri::new("p").unwrap(), iri("b")).unwrap();
        assert_eq!(tp.match_triple(&loop_t), Some(mapping(&[("x", "a")])));
        assert_eq!(tp.match_triple(&other), None);
    }

    #[test]
    fn bgp_rejects_unbound_projection_and_empty() {
        let tp = TriplePattern::new(var("s"), iri("p"), var("o")).unwrap();
        assert_eq!(BasicGraphPattern::new(vec![], vec![]), Err(PatternError::Empty));
        assert!(matches!(
            BasicGraphPattern::new(vec![tp], vec![var("z")]),
            Err(PatternError::UnboundProjection(_))
        ));
    }

    fn arb_mapping() -> impl Strategy<Value = SolutionMapping> {
        proptest::collection::btree_map(0..4u8, 0..3u8, 0..4).prop_map(|m| {
            m.into_iter()
                .map(|(v, t)| (var(&format!("v{v}")), iri(&format!("t{t}"))))
                .collect()
        })
    }

    proptest! {
        #[test]
        fn merge_is_commutative_with_identity(a in arb_mapping(), b in arb_mapping()) {
            prop_assert_eq!(a.merge(&b), b.merge(&a));
            prop_assert_eq!(a.merge(&SolutionMapping::new()), Some(a.clone()));
        }

        #[test]
        fn merge_is_associative(a in arb_mapping(), b in arb_mapping(), c in arb_mapping()) {
            let left = a.merge(&b).and_then(|ab| ab.merge(&c));
            let right = b.merge(&c).and_then(|bc| a.merge(&bc));
            prop_assert_eq!(left, right);
        }

        #[test]
        fn apply_is_idempotent(m in arb_mapping(), s in 0..4u8, o in 0..4u8) {
            let tp = TriplePattern::new(var(&format!("v{s}")), iri("p"), var(&format!("v{o}"))).unwrap();
            let once = tp.apply(&m);
            prop_assert_eq!(once.apply(&m), once);
        }
    }
}
