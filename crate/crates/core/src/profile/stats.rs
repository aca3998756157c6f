use num_rational::Ratio;

use super::{AggregationFn, Amd};
use crate::rdf::{vocab, Graph, Iri, Term};

/// Number of distinct objects `s` has for `p`.
pub fn multiplicity(graph: &Graph, s: &Term, p: &Iri) -> usize {
    graph.objects(s, p).count()
}

/// How class instances without any `p` triple are treated when aggregating.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MissingPredicate {
    /// Only instances with at least one `p` triple contribute.
    #[default]
    Skip,
    /// Instances without `p` contribute a multiplicity of zero.
    CountAsZero,
}

/// `f` over the multiplicities of `p` among instances of `c`. Zero when no
/// instance contributes.
pub fn aggregated_multiplicity(graph: &Graph, c: &Iri, p: &Iri, f: AggregationFn) -> Amd {
    aggregated_multiplicity_with(graph, c, p, f, MissingPredicate::Skip)
}

pub fn aggregated_multiplicity_with(
    graph: &Graph,
    c: &Iri,
    p: &Iri,
    f: AggregationFn,
    missing: MissingPredicate,
) -> Amd {
    let class = Term::Iri(c.clone());
    let mut values: Vec<u64> = graph
        .subjects_of(&vocab::rdf_type(), &class)
        .map(|s| multiplicity(graph, s, p) as u64)
        .filter(|&md| md > 0 || missing == MissingPredicate::CountAsZero)
        .collect();
    aggregate(f, &mut values)
}

/// Applies `f` to a multiset; empty input aggregates to zero.
pub fn aggregate(f: AggregationFn, values: &mut [u64]) -> Amd {
    if values.is_empty() {
        return Amd::ZERO;
    }
    match f {
        AggregationFn::Median => {
            values.sort_unstable();
            Amd::from_integer(values[(values.len() - 1) / 2])
        }
        AggregationFn::Mean => {
            let sum: u64 = values.iter().sum();
            Amd(Ratio::new(sum, values.len() as u64))
        }
        AggregationFn::Max => Amd::from_integer(*values.iter().max().expect("non-empty")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::parse_ntriples_str;
    use proptest::prelude::*;

    const TYPE: &str = "<http://www.w3.org/1999/02/22-rdf-syntax-ns#type>";

    fn iri(s: &str) -> Iri {
        Iri::new(s).unwrap()
    }

    #[test]
    fn multiplicity_counts_distinct_objects() {
        let g = parse_ntriples_str("<s> <p> <b> .\n<s> <p> <b> .\n<s> <p> <c> .").unwrap();
        assert_eq!(multiplicity(&g, &Term::iri("s").unwrap(), &iri("p")), 2);
        assert_eq!(multiplicity(&g, &Term::iri("s").unwrap(), &iri("q")), 0);
        assert_eq!(multiplicity(&g, &Term::iri("zz").unwrap(), &iri("p")), 0);
    }

    #[test]
    fn lower_median_of_even_multiset() {
        let g = parse_ntriples_str(&format!(
            "<a> {TYPE} <C> .\n<b> {TYPE} <C> .\n<a> <p> \"1\" .\n<b> <p> \"1\" .\n<b> <p> \"2\" .\n<b> <p> \"3\" .\n"
        ))
        .unwrap();
        let amd = aggregated_multiplicity(&g, &iri("C"), &iri("p"), AggregationFn::Median);
        assert_eq!(amd, Amd::from_integer(1));
        let mean = aggregated_multiplicity(&g, &iri("C"), &iri("p"), AggregationFn::Mean);
        assert_eq!(mean, Amd::from_integer(2));
        let max = aggregated_multiplicity(&g, &iri("C"), &iri("p"), AggregationFn::Max);
        assert_eq!(max, Amd::from_integer(3));
    }

    #[test]
    fn class_without_instances_is_zero() {
        let g = parse_ntriples_str("<a> <p> <b> .").unwrap();
        assert_eq!(
            aggregated_multiplicity(&g, &iri("C"), &iri("p"), AggregationFn::Median),
            Amd::ZERO
        );
    }

    #[test]
    fn instances_without_predicate_are_skipped_unless_asked() {
        let g = parse_ntriples_str(&format!(
            "<a> {TYPE} <C> .\n<b> {TYPE} <C> .\n<c> {TYPE} <C> .\n<a> <p> \"1\" .\n<a> <p> \"2\" .\n"
        ))
        .unwrap();
        let skip = aggregated_multiplicity(&g, &iri("C"), &iri("p"), AggregationFn::Median);
        assert_eq!(skip, Amd::from_integer(2));
        let zeros = aggregated_multiplicity_with(
            &g,
            &iri("C"),
            &iri("p"),
            AggregationFn::Median,
            MissingPredicate::CountAsZero,
        );
        assert_eq!(zeros, Amd::ZERO);
    }

    proptest! {
        #[test]
        fn single_value_aggregates_to_itself(v in 1..50u64) {
            for f in [AggregationFn::Median, AggregationFn::Mean, AggregationFn::Max] {
                prop_assert_eq!(aggregate(f, &mut [v]), Amd::from_integer(v));
            }
        }

        #[test]
        fn max_dominates_median_dominates_min(mut values in proptest::collection::vec(1..20u64, 1..30)) {
            let min = Amd::from_integer(*values.iter().min().unwrap());
            let median = aggregate(AggregationFn::Median, &mut values.clone());
            let max = aggregate(AggregationFn::Max, &mut values);
            prop_assert!(max >= median && median >= min);
        }

        #[test]
        fn multiplicity_ignores_order_and_duplicates(objs in proptest::collection::vec(0..6u8, 0..20)) {
            let lines: Vec<String> = objs.iter().map(|o| format!("<s> <p> <o{o}> .")).collect();
            let mut reversed = lines.clone();
            reversed.reverse();
            let g1 = parse_ntriples_str(&lines.join("\n")).unwrap();
            let g2 = parse_ntriples_str(&reversed.join("\n")).unwrap();
            let s = Term::iri("s").unwrap();
            let distinct: std::collections::BTreeSet<_> = objs.iter().collect();
            prop_assert_eq!(multiplicity(&g1, &s, &iri("p")), distinct.len());
            prop_assert_eq!(multiplicity(&g2, &s, &iri("p")), distinct.len());
        }
    }
}
