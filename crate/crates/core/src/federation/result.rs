use std::collections::BTreeSet;

use crate::operator::TraceEvent;
use crate::profile::EndpointId;
use crate::query::{SolutionMapping, Variable};
use crate::rdf::Term;

/// Answers of a query with the sources that produced them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QueryResult {
    variables: Vec<Variable>,
    mappings: BTreeSet<SolutionMapping>,
    sources_used: BTreeSet<EndpointId>,
    traces: Vec<Vec<TraceEvent>>,
}

impl QueryResult {
    pub fn new(
        variables: Vec<Variable>,
        mappings: BTreeSet<SolutionMapping>,
        sources_used: BTreeSet<EndpointId>,
        traces: Vec<Vec<TraceEvent>>,
    ) -> Self {
        Self {
            variables,
            mappings,
            sources_used,
            traces,
        }
    }

    pub fn variables(&self) -> &[Variable] {
        &self.variables
    }

    pub fn mappings(&self) -> &BTreeSet<SolutionMapping> {
        &self.mappings
    }

    pub fn len(&self) -> usize {
        self.mappings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mappings.is_empty()
    }

    /// F*: endpoints that contributed at least one mapping to some pattern.
    pub fn sources_used(&self) -> &BTreeSet<EndpointId> {
        &self.sources_used
    }

    /// One trace per operator invocation, in pattern order.
    pub fn traces(&self) -> &[Vec<TraceEvent>] {
        &self.traces
    }

    /// Rows in projection order, sorted by term order.
    pub fn rows(&self) -> Vec<Vec<Option<&Term>>> {
        let mut rows: Vec<Vec<Option<&Term>>> = self
            .mappings
            .iter()
            .map(|m| self.variables.iter().map(|v| m.get(v)).collect())
            .collect();
        rows.sort();
        rows
    }

    /// Header of variable names, then one row per mapping with terms in
    /// N-Triples syntax; RFC 4180 quoting, LF line ends.
    pub fn to_csv(&self) -> String {
        let mut writer = csv::WriterBuilder::new()
            .terminator(csv::Terminator::Any(b'\n'))
            .from_writer(Vec::new());
        writer
            .write_record(self.variables.iter().map(Variable::name))
            .expect("writing to memory");
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(|t| t.map(Term::to_string).unwrap_or_default()).collect();
            writer.write_record(&cells).expect("writing to memory");
        }
        let bytes = writer.into_inner().expect("flushing to memory");
        String::from_utf8(bytes).expect("terms are UTF-8")
    }

    /// One JSON object per row, keyed by variable name.
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for row in self.rows() {
            let object: serde_json::Map<String, serde_json::Value> = self
                .variables
                .iter()
                .zip(row)
                .filter_map(|(v, t)| t.map(|t| (v.name().to_owned(), serde_json::Value::String(t.to_string()))))
                .collect();
            out.push_str(&serde_json::Value::Object(object).to_string());
            out.push('\n');
        }
        out
    }

    /// Trace events, one per line; each operator invocation restarts at step 1.
    pub fn trace_text(&self) -> String {
        let mut out = String::new();
        for event in self.traces.iter().flatten() {
            out.push_str(&event.to_string());
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rdf::Literal;

    #[test]
    fn csv_quotes_and_orders() {
        let x = Variable::new("x").unwrap();
        let y = Variable::new("y").unwrap();
        let m1: SolutionMapping = [
            (x.clone(), Term::iri("http://b").unwrap()),
            (y.clone(), Term::Literal(Literal::simple("a, \"b\""))),
        ]
        .into_iter()
        .collect();
        let m2: SolutionMapping = [
            (x.clone(), Term::iri("http://a").unwrap()),
            (y.clone(), Term::literal("z")),
        ]
        .into_iter()
        .collect();
        let r = QueryResult::new(vec![y, x], [m1, m2].into(), BTreeSet::new(), Vec::new());
        assert_eq!(
            r.to_csv(),
            "y,x\n\"\"\"a, \\\"\"b\\\"\"\"\"\",<http://b>\n\"\"\"z\"\"\",<http://a>\n"
        );
        assert_eq!(
            r.to_jsonl(),
            "{\"x\":\"<http://b>\",\"y\":\"\\\"a, \\\\\\\"b\\\\\\\"\\\"\"}\n{\"x\":\"<http://a>\",\"y\":\"\\\"z\\\"\"}\n"
        );
    }
}
