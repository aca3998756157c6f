//! Relevance of foreign molecule templates for a triple pattern, and their
//! ranking.

use std::fmt;

use thiserror::Error;

use crate::profile::{Amd, MoleculeTemplate, MtCatalog};
use crate::query::TriplePattern;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CostError {
    #[error("pattern {0} has a variable predicate")]
    UnboundPredicate(Box<TriplePattern>),
}

/// τ: the aggregated multiplicity a template promises for a predicate.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct RelevanceScore(Amd);

impl RelevanceScore {
    pub fn new(value: Amd) -> Self {
        Self(value)
    }

    pub fn value(self) -> Amd {
        self.0
    }
}

impl fmt::Display for RelevanceScore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl fmt::Debug for RelevanceScore {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

/// Templates by descending score, ties by (endpoint, class).
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct RankedMts<'a> {
    items: Vec<(&'a MoleculeTemplate, RelevanceScore)>,
}

impl<'a> RankedMts<'a> {
    pub fn items(&self) -> &[(&'a MoleculeTemplate, RelevanceScore)] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }
}

impl<'a> IntoIterator for RankedMts<'a> {
    type Item = (&'a MoleculeTemplate, RelevanceScore);
    type IntoIter = std::vec::IntoIter<Self::Item>;

    fn into_iter(self) -> Self::IntoIter {
        self.items.into_iter()
    }
}

/// Templates other than `root` whose class corresponds to the root's class
/// and which use a predicate linked to the pattern's predicate.
pub fn relevant_mts<'a>(
    tp: &TriplePattern,
    root: &MoleculeTemplate,
    catalog: &'a MtCatalog,
) -> Result<Vec<&'a MoleculeTemplate>, CostError> {
    let p = tp
        .predicate_iri()
        .ok_or_else(|| CostError::UnboundPredicate(Box::new(tp.clone())))?;
    Ok(catalog
        .iter()
        .filter(|m| m.key() != root.key())
        .filter(|m| root.corresponds_to(m.endpoint(), m.class()))
        .filter(|m| {
            root.property_targets(p, m.endpoint())
                .into_iter()
                .any(|q| m.has_predicate(q))
        })
        .collect())
}

/// τ for an already mapped pattern; `None` when `m` does not describe the
/// predicate.
pub fn relevance(tp: &TriplePattern, m: &MoleculeTemplate) -> Option<RelevanceScore> {
    tp.predicate_iri().and_then(|p| m.amd_for(p)).map(RelevanceScore)
}

pub fn rank(mut candidates: Vec<(&MoleculeTemplate, RelevanceScore)>) -> RankedMts<'_> {
    candidates.sort_by(|(ma, sa), (mb, sb)| {
        sb.cmp(sa)
            .then_with(|| ma.endpoint().cmp(mb.endpoint()))
            .then_with(|| ma.class().cmp(mb.class()))
    });
    RankedMts { items: candidates }
}
