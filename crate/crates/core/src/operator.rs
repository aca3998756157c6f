//! The adaptive triple-pattern operator.
//!
//! A pattern is evaluated at its root template's endpoint. While some subject
//! has fewer distinct objects than the expected multiplicity, relevant
//! templates are visited breadth-first in rank order, the pattern rewritten
//! into each one's vocabulary and the answers translated back into the
//! root's.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use thiserror::Error;

use crate::cost::{rank, relevance, relevant_mts, CostError, RelevanceScore};
use crate::federation::{EndpointError, Federation};
use crate::profile::{Amd, EndpointId, MoleculeTemplate, MtKey};
use crate::query::{PatternError, SolutionMapping, TermPattern, TriplePattern};
use crate::rdf::Term;
use crate::sameas::SameAsIndex;

#[derive(Debug, Error)]
pub enum OperatorError {
    #[error(transparent)]
    Endpoint(#[from] EndpointError),
    #[error("no property link maps {pattern} from {from} to {to}")]
    NoMapping {
        pattern: Box<TriplePattern>,
        from: MtKey,
        to: MtKey,
    },
    #[error("rewritten pattern is invalid: {0}")]
    Pattern(#[from] PatternError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceReason {
    Root,
    Expansion(RelevanceScore),
}

impl fmt::Display for TraceReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TraceReason::Root => f.write_str("root"),
            TraceReason::Expansion(score) => write!(f, "expand:{score}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TraceNote {
    UnboundPredicate,
    /// No template describes the pattern; the endpoint was queried directly.
    Unprofiled,
}

impl fmt::Display for TraceNote {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TraceNote::UnboundPredicate => "unbound-predicate",
            TraceNote::Unprofiled => "unprofiled",
        })
    }
}

/// One endpoint request made by the operator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEvent {
    pub step: usize,
    pub endpoint: EndpointId,
    /// The pattern as sent, in the endpoint's vocabulary.
    pub pattern: TriplePattern,
    /// Mappings not already obtained from earlier requests.
    pub gained: usize,
    pub reason: TraceReason,
    pub note: Option<TraceNote>,
    /// Whether the answers were judged complete after this request. Not part
    /// of the text format.
    pub complete_after: bool,
}

impl fmt::Display for TraceEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "step={} endpoint={} pattern={} gained={} reason={}",
            self.step, self.endpoint, self.pattern, self.gained, self.reason
        )?;
        if let Some(note) = self.note {
            write!(f, " note={note}")?;
        }
        Ok(())
    }
}

/// Answers for one pattern, with the endpoints that produced each mapping.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PatternAnswer {
    answers: BTreeMap<SolutionMapping, BTreeSet<EndpointId>>,
    trace: Vec<TraceEvent>,
}

impl PatternAnswer {
    pub fn mappings(&self) -> impl Iterator<Item = &SolutionMapping> {
        self.answers.keys()
    }

    pub fn len(&self) -> usize {
        self.answers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.answers.is_empty()
    }

    pub fn provenance(&self, mapping: &SolutionMapping) -> Option<&BTreeSet<EndpointId>> {
        self.answers.get(mapping)
    }

    /// Every endpoint that contributed at least one mapping.
    pub fn sources(&self) -> BTreeSet<EndpointId> {
        self.answers.values().flatten().cloned().collect()
    }

    pub fn trace(&self) -> &[TraceEvent] {
        &self.trace
    }

    fn absorb(&mut self, endpoint: &EndpointId, mappings: BTreeSet<SolutionMapping>) -> usize {
        let mut gained = 0;
        for m in mappings {
            let sources = self.answers.entry(m).or_insert_with(|| {
                gained += 1;
                BTreeSet::new()
            });
            sources.insert(endpoint.clone());
        }
        gained
    }

    fn record(&mut self, endpoint: &EndpointId, pattern: TriplePattern, gained: usize, reason: TraceReason) {
        self.trace.push(TraceEvent {
            step: self.trace.len() + 1,
            endpoint: endpoint.clone(),
            pattern,
            gained,
            reason,
            note: None,
            complete_after: false,
        });
    }

    fn last_event(&mut self) -> &mut TraceEvent {
        self.trace.last_mut().expect("at least one request was recorded")
    }
}

/// Rewrites `tp` from `from`'s vocabulary into `to`'s: the predicate through
/// `from`'s property links, bound terms through the identity closure.
pub fn map_pattern(
    tp: &TriplePattern,
    from: &MoleculeTemplate,
    to: &MoleculeTemplate,
    sameas: &SameAsIndex,
) -> Result<TriplePattern, OperatorError> {
    let no_mapping = || OperatorError::NoMapping {
        pattern: Box::new(tp.clone()),
        from: from.key(),
        to: to.key(),
    };
    let p = tp.predicate_iri().ok_or_else(no_mapping)?;
    // Prefer the target predicate `to` describes best; ties by IRI.
    let target = from
        .property_targets(p, to.endpoint())
        .into_iter()
        .max_by(|a, b| to.amd_for(a).cmp(&to.amd_for(b)).then_with(|| b.cmp(a)))
        .ok_or_else(no_mapping)?
        .clone();
    let localize = |pos: &TermPattern| match pos {
        TermPattern::Term(t) => TermPattern::Term(sameas.localize(t, to.endpoint())),
        v => v.clone(),
    };
    Ok(TriplePattern::new(
        localize(tp.subject()),
        target,
        localize(tp.object()),
    )?)
}

/// Whether `answers` look incomplete for `tp` given `expected` objects per
/// subject: true when there are no answers, or when some subject has fewer
/// distinct objects than expected. With a bound object at most one answer
/// per subject is possible, so the expectation is capped at one.
pub fn is_incomplete<'a>(
    answers: impl IntoIterator<Item = &'a SolutionMapping>,
    tp: &TriplePattern,
    expected: Amd,
) -> bool {
    let expected = match tp.object() {
        TermPattern::Term(_) => expected.min(Amd::from_integer(1)),
        TermPattern::Variable(_) => expected,
    };
    let value = |pos: &TermPattern, m: &'a SolutionMapping| match pos {
        TermPattern::Variable(v) => m.get(v).cloned(),
        TermPattern::Term(_) => None,
    };
    let mut per_subject: BTreeMap<_, BTreeSet<_>> = BTreeMap::new();
    for m in answers {
        per_subject
            .entry(value(tp.subject(), m))
            .or_default()
            .insert(value(tp.object(), m));
    }
    per_subject.is_empty() || per_subject.values().any(|objects| expected.exceeds(objects.len()))
}

fn localize_term(pos: &TermPattern, endpoint: &EndpointId, sameas: &SameAsIndex) -> TermPattern {
    match pos {
        TermPattern::Term(t) => TermPattern::Term(sameas.localize(t, endpoint)),
        v => v.clone(),
    }
}

/// Rewrites a pattern in canonical terms into `root`'s vocabulary. The
/// predicate becomes the identical predicate `root` describes best, or the
/// one its endpoint uses when `root` describes none.
pub fn localize_for_root(
    tp: &TriplePattern,
    root: &MoleculeTemplate,
    sameas: &SameAsIndex,
) -> Result<TriplePattern, OperatorError> {
    let endpoint = root.endpoint();
    let predicate = match tp.predicate() {
        TermPattern::Term(Term::Iri(p)) => {
            let described = sameas
                .iri_members(p)
                .into_iter()
                .filter_map(|m| root.amd_for(&m).map(|amd| (amd, m)))
                .max_by(|(a, x), (b, y)| a.cmp(b).then_with(|| y.cmp(x)));
            match described {
                Some((_, m)) => TermPattern::Term(Term::Iri(m)),
                None => localize_term(tp.predicate(), endpoint, sameas),
            }
        }
        other => localize_term(other, endpoint, sameas),
    };
    Ok(TriplePattern::new(
        localize_term(tp.subject(), endpoint, sameas),
        predicate,
        localize_term(tp.object(), endpoint, sameas),
    )?)
}

// Sends `pattern` to `endpoint`; answers come back in canonical terms.
fn request(
    federation: &Federation,
    endpoint: &EndpointId,
    pattern: &TriplePattern,
) -> Result<BTreeSet<SolutionMapping>, OperatorError> {
    let triples = federation.request(endpoint, pattern)?;
    let sameas = federation.sameas();
    Ok(triples
        .iter()
        .filter_map(|t| pattern.match_triple(t))
        .map(|m| m.map_terms(|t| sameas.canonical(t)))
        .collect())
}

/// Evaluates `tp`, given in canonical terms, at the root endpoint only.
pub fn evaluate_root_only(
    tp: &TriplePattern,
    root: &MoleculeTemplate,
    federation: &Federation,
) -> Result<PatternAnswer, OperatorError> {
    let local = localize_for_root(tp, root, federation.sameas())?;
    let mut answer = PatternAnswer::default();
    let mappings = request(federation, root.endpoint(), &local)?;
    let gained = answer.absorb(root.endpoint(), mappings);
    answer.record(root.endpoint(), local.clone(), gained, TraceReason::Root);
    let expected = local.predicate_iri().and_then(|p| root.amd_for(p)).unwrap_or(Amd::ZERO);
    let complete = !is_incomplete(answer.mappings(), tp, expected);
    let event = answer.last_event();
    event.complete_after = complete;
    if tp.predicate_iri().is_none() {
        event.note = Some(TraceNote::UnboundPredicate);
    }
    Ok(answer)
}

/// Evaluates a pattern no template describes by asking each endpoint
/// directly, without expansion.
pub fn evaluate_unprofiled(
    tp: &TriplePattern,
    endpoints: &[EndpointId],
    federation: &Federation,
) -> Result<PatternAnswer, OperatorError> {
    let sameas = federation.sameas();
    let mut answer = PatternAnswer::default();
    for endpoint in endpoints {
        let local = tp.map_positions(|pos| localize_term(pos, endpoint, sameas))?;
        let mappings = request(federation, endpoint, &local)?;
        let gained = answer.absorb(endpoint, mappings);
        answer.record(endpoint, local, gained, TraceReason::Root);
        let complete = !answer.is_empty();
        let event = answer.last_event();
        event.note = Some(TraceNote::Unprofiled);
        event.complete_after = complete;
    }
    Ok(answer)
}

struct Candidate<'a> {
    mt: &'a MoleculeTemplate,
    pattern: TriplePattern,
    score: RelevanceScore,
}

// Relevant templates reachable from `from`, ranked, minus those already seen.
fn discover<'a>(
    from: &MoleculeTemplate,
    pattern: &TriplePattern,
    federation: &'a Federation,
    seen: &mut BTreeSet<MtKey>,
) -> Result<Vec<Candidate<'a>>, OperatorError> {
    let relevant = match relevant_mts(pattern, from, federation.catalog()) {
        Ok(r) => r,
        Err(CostError::UnboundPredicate(_)) => return Ok(Vec::new()),
    };
    let mut scored = Vec::new();
    let mut mapped = BTreeMap::new();
    for m in relevant.into_iter().filter(|m| !seen.contains(&m.key())) {
        let p = map_pattern(pattern, from, m, federation.sameas())?;
        if let Some(score) = relevance(&p, m) {
            scored.push((m, score));
            mapped.insert(m.key(), p);
        }
    }
    Ok(rank(scored)
        .into_iter()
        .map(|(mt, score)| {
            seen.insert(mt.key());
            Candidate {
                pattern: mapped.remove(&mt.key()).expect("mapped above"),
                mt,
                score,
            }
        })
        .collect())
}

/// The adaptive operator over a pattern in canonical terms. Completeness is
/// checked after the root request and after every expansion; the expected
/// multiplicity is the largest of the root's own estimate and the scores of
/// the relevant templates found so far.
pub fn evaluate_adaptive(
    tp: &TriplePattern,
    root: &MoleculeTemplate,
    federation: &Federation,
) -> Result<PatternAnswer, OperatorError> {
    if tp.predicate_iri().is_none() {
        return evaluate_root_only(tp, root, federation);
    }
    let local = localize_for_root(tp, root, federation.sameas())?;
    let p = local.predicate_iri().expect("localizing keeps the predicate bound");
    let home = root.endpoint();
    let mut answer = PatternAnswer::default();
    let mappings = request(federation, home, &local)?;
    let gained = answer.absorb(home, mappings);
    answer.record(home, local.clone(), gained, TraceReason::Root);

    let mut seen = BTreeSet::from([root.key()]);
    let mut frontier: VecDeque<Candidate> = discover(root, &local, federation, &mut seen)?.into();
    let mut expected = root.amd_for(p).unwrap_or(Amd::ZERO);
    expected = frontier.iter().map(|c| c.score.value()).fold(expected, Amd::max);

    let mut complete = !is_incomplete(answer.mappings(), tp, expected);
    answer.last_event().complete_after = complete;

    while !complete {
        let Some(next) = frontier.pop_front() else { break };
        let endpoint = next.mt.endpoint();
        let mappings = request(federation, endpoint, &next.pattern)?;
        let gained = answer.absorb(endpoint, mappings);
        answer.record(
            endpoint,
            next.pattern.clone(),
            gained,
            TraceReason::Expansion(next.score),
        );

        for found in discover(next.mt, &next.pattern, federation, &mut seen)? {
            expected = expected.max(found.score.value());
            frontier.push_back(found);
        }
        complete = !is_incomplete(answer.mappings(), tp, expected);
        answer.last_event().complete_after = complete;
    }
    Ok(answer)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::query::Variable;

    fn var(n: &str) -> TermPattern {
        TermPattern::Variable(Variable::new(n).unwrap())
    }

    fn tp(s: TermPattern, o: TermPattern) -> TriplePattern {
        TriplePattern::new(s, crate::rdf::Iri::new("p").unwrap(), o).unwrap()
    }

    fn mapping(pairs: &[(&str, &str)]) -> SolutionMapping {
        pairs
            .iter()
            .map(|(v, t)| (Variable::new(v).unwrap(), Term::iri(t).unwrap()))
            .collect()
    }

    #[test]
    fn no_answers_is_incomplete() {
        let pattern = tp(var("s"), var("o"));
        assert!(is_incomplete(&[], &pattern, Amd::ZERO));
    }

    #[test]
    fn per_subject_threshold() {
        let pattern = tp(var("s"), var("o"));
        let answers = [
            mapping(&[("s", "a"), ("o", "x")]),
            mapping(&[("s", "b"), ("o", "x")]),
            mapping(&[("s", "b"), ("o", "y")]),
        ];
        assert!(is_incomplete(&answers, &pattern, Amd::from_integer(2)));
        assert!(!is_incomplete(&answers[1..], &pattern, Amd::from_integer(2)));
        assert!(!is_incomplete(&answers, &pattern, Amd::from_integer(1)));
    }

    #[test]
    fn bound_object_caps_expectation() {
        let pattern = tp(var("s"), TermPattern::Term(Term::iri("x").unwrap()));
        let answers = [mapping(&[("s", "a")])];
        assert!(!is_incomplete(&answers, &pattern, Amd::from_integer(3)));
    }

    #[test]
    fn trace_line_format() {
        let e = TraceEvent {
            step: 2,
            endpoint: EndpointId::new("B").unwrap(),
            pattern: tp(var("s"), var("o")),
            gained: 3,
            reason: TraceReason::Expansion(RelevanceScore::new(Amd::from_integer(2))),
            note: None,
            complete_after: true,
        };
        assert_eq!(
            e.to_string(),
            "step=2 endpoint=B pattern=(?s <p> ?o) gained=3 reason=expand:2"
        );
    }
}
