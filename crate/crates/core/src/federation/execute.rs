use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;

use super::{Federation, FederationError, QueryResult};
use crate::operator::{evaluate_adaptive, evaluate_root_only, evaluate_unprofiled, OperatorError, PatternAnswer};
use crate::profile::{Amd, EndpointId, MoleculeTemplate};
use crate::query::{BasicGraphPattern, SolutionMapping, TermPattern, TriplePattern};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExecuteOptions {
    /// Endpoint whose templates serve as roots.
    pub root_hint: Option<EndpointId>,
    /// When false every pattern is answered by its root alone.
    pub expand: bool,
}

impl Default for ExecuteOptions {
    fn default() -> Self {
        Self {
            root_hint: None,
            expand: true,
        }
    }
}

impl ExecuteOptions {
    pub fn root_only() -> Self {
        Self {
            expand: false,
            ..Self::default()
        }
    }

    pub fn with_root(mut self, root: EndpointId) -> Self {
        self.root_hint = Some(root);
        self
    }
}

// Highest τ first, then (endpoint, class); templates without the predicate last.
fn best<'a>(
    candidates: impl Iterator<Item = &'a MoleculeTemplate>,
    tp: &TriplePattern,
) -> Option<&'a MoleculeTemplate> {
    let score = |m: &MoleculeTemplate| tp.predicate_iri().and_then(|p| m.amd_for(p));
    candidates.min_by(|a, b| {
        let (sa, sb): (Option<Amd>, Option<Amd>) = (score(a), score(b));
        sb.cmp(&sa)
            .then_with(|| a.endpoint().cmp(b.endpoint()))
            .then_with(|| a.class().cmp(b.class()))
    })
}

/// Chooses the template at which evaluation of `tp` starts.
///
/// With a hint: the hint's template for the subject's type constraint (or an
/// equivalent class), else its template with the best estimate for the
/// predicate. Without: among templates for the type constraint (or all
/// templates when there is none), the one with the highest estimate.
pub fn select_root<'a>(
    tp: &TriplePattern,
    bgp: &BasicGraphPattern,
    federation: &'a Federation,
    root_hint: Option<&EndpointId>,
) -> Result<&'a MoleculeTemplate, FederationError> {
    let catalog = federation.catalog();
    let sameas = federation.sameas();
    let class = bgp.type_constraint(tp.subject());
    let has_predicate = |m: &&MoleculeTemplate| tp.predicate_iri().is_some_and(|p| m.has_predicate(p));
    let no_candidate = || FederationError::NoCandidate(Box::new(tp.clone()));

    if let Some(hint) = root_hint {
        if !federation.contains(hint) {
            return Err(FederationError::UnknownEndpoint(hint.clone()));
        }
        if let Some(c) = class {
            if let Some(m) = catalog.get(hint, c) {
                return Ok(m);
            }
            if let Some(m) = catalog.at_endpoint(hint).find(|m| sameas.equivalent_iri(m.class(), c)) {
                return Ok(m);
            }
        }
        return best(catalog.at_endpoint(hint).filter(has_predicate), tp).ok_or_else(no_candidate);
    }

    if let Some(c) = class {
        let exact: Vec<_> = catalog.iter().filter(|m| m.class() == c).collect();
        if !exact.is_empty() {
            return best(exact.into_iter(), tp).ok_or_else(no_candidate);
        }
        let equivalent: Vec<_> = catalog.iter().filter(|m| sameas.equivalent_iri(m.class(), c)).collect();
        if !equivalent.is_empty() {
            return best(equivalent.into_iter(), tp).ok_or_else(no_candidate);
        }
    }
    best(catalog.iter().filter(has_predicate), tp).ok_or_else(no_candidate)
}

// Query constants replaced by the least member of their identity class, the
// vocabulary answers are reported in.
fn canonical_query(bgp: &BasicGraphPattern, federation: &Federation) -> Result<BasicGraphPattern, FederationError> {
    let sameas = federation.sameas();
    let patterns = bgp
        .patterns()
        .iter()
        .map(|tp| {
            tp.map_positions(|pos| match pos {
                TermPattern::Term(t) => TermPattern::Term(sameas.canonical(t)),
                v => v.clone(),
            })
        })
        .collect::<Result<Vec<_>, _>>()
        .map_err(OperatorError::from)?;
    Ok(BasicGraphPattern::new(patterns, bgp.projection().to_vec()).map_err(OperatorError::from)?)
}

/// Bind join in textual pattern order. Answers use canonical terms. Each distinct instantiation of a
/// pattern is evaluated once by the operator; instantiations run in
/// parallel and are merged in a fixed order.
pub fn execute(
    bgp: &BasicGraphPattern,
    federation: &Federation,
    options: &ExecuteOptions,
) -> Result<QueryResult, FederationError> {
    let bgp = &canonical_query(bgp, federation)?;
    let mut current: BTreeSet<SolutionMapping> = BTreeSet::from([SolutionMapping::new()]);
    let mut traces = Vec::new();
    let mut sources = BTreeSet::new();

    for tp in bgp.patterns() {
        if current.is_empty() {
            break;
        }
        let root = match select_root(tp, bgp, federation, options.root_hint.as_ref()) {
            Ok(root) => Some(root),
            Err(FederationError::NoCandidate(_)) => None,
            Err(e) => return Err(e),
        };

        let mut groups: BTreeMap<TriplePattern, Vec<&SolutionMapping>> = BTreeMap::new();
        for mu in &current {
            groups.entry(tp.apply(mu)).or_default().push(mu);
        }
        let instantiations: Vec<&TriplePattern> = groups.keys().collect();
        let answers: Vec<Result<PatternAnswer, FederationError>> = instantiations
            .par_iter()
            .map(|pattern| evaluate(pattern, root, federation, options))
            .collect();

        let mut next = BTreeSet::new();
        for (pattern, answer) in instantiations.into_iter().zip(answers) {
            let answer = answer?;
            sources.extend(answer.sources());
            for mu in &groups[pattern] {
                next.extend(answer.mappings().filter_map(|m| mu.merge(m)));
            }
            traces.push(answer.trace().to_vec());
        }
        current = next;
    }

    let mappings = current.iter().map(|m| m.project(bgp.projection())).collect();
    Ok(QueryResult::new(bgp.projection().to_vec(), mappings, sources, traces))
}

fn evaluate(
    pattern: &TriplePattern,
    root: Option<&MoleculeTemplate>,
    federation: &Federation,
    options: &ExecuteOptions,
) -> Result<PatternAnswer, FederationError> {
    Ok(match root {
        Some(root) if options.expand => evaluate_adaptive(pattern, root, federation)?,
        Some(root) => evaluate_root_only(pattern, root, federation)?,
        None => {
            let endpoints: Vec<EndpointId> = match &options.root_hint {
                Some(hint) => vec![hint.clone()],
                None => federation.endpoint_ids().cloned().collect(),
            };
            evaluate_unprofiled(pattern, &endpoints, federation)?
        }
    })
}
