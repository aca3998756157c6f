//! Rewrites the checked-in corpus under `fixtures/`.
//!
//! Usage: `cargo run -p mtfed-core --example regen_fixtures [-- <out-dir>]`

use std::collections::BTreeSet;
use std::path::PathBuf;

use mtfed_core::fixtures::{self, gen_federation, FixtureSet, RandomFederationSpec};
use mtfed_core::oracle::diff_against_oracle;
use mtfed_core::QueryResult;

fn write(set: &FixtureSet, root: &std::path::Path) -> Result<(), Box<dyn std::error::Error>> {
    let dir = root.join(&set.name);
    if dir.exists() {
        std::fs::remove_dir_all(&dir)?;
    }
    set.write_to(&dir)?;
    std::fs::create_dir_all(dir.join("expected"))?;
    let federation = set.federation()?;
    for name in set.queries.keys() {
        let query = set.query(name).expect("query exists");
        let report = diff_against_oracle(&query, &federation, None)?;
        let expected = QueryResult::new(
            query.projection().to_vec(),
            report.oracle.clone(),
            BTreeSet::new(),
            Vec::new(),
        );
        std::fs::write(dir.join("expected").join(format!("{name}.csv")), expected.to_csv())?;
        println!(
            "{}/{name}: root-only {} federated {} oracle {}",
            set.name,
            report.root_only.len(),
            report.federated.len(),
            report.oracle.len()
        );
    }
    Ok(())
}

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let root = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures"));
    let mut sets = vec![fixtures::hair()];
    sets.extend(fixtures::domains());
    let mut random = gen_federation(&RandomFederationSpec::new(1, 1.0))?;
    random.name = "random-seed1".to_owned();
    sets.push(random);
    for set in &sets {
        write(set, &root)?;
    }
    Ok(())
}
