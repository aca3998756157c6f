use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn mtfed(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mtfed"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn query_fixture(name: &str, query: &str, extra: &[&str]) -> Output {
    let dir = fixtures().join(name);
    let config = dir.join("config.json");
    let q = dir.join("queries").join(format!("{query}.rq"));
    let mut args = vec!["query", "--config", path(&config), "--query", path(&q)];
    args.extend(extra);
    mtfed(&args)
}

fn expected(name: &str, query: &str) -> String {
    std::fs::read_to_string(fixtures().join(name).join("expected").join(format!("{query}.csv"))).unwrap()
}

#[test]
fn every_fixture_query_matches_its_golden() {
    for entry in std::fs::read_dir(fixtures()).unwrap() {
        let dir = entry.unwrap().path();
        let name = dir.file_name().unwrap().to_str().unwrap().to_owned();
        for q in std::fs::read_dir(dir.join("queries")).unwrap() {
            let q = q.unwrap().path();
            let query = q.file_stem().unwrap().to_str().unwrap().to_owned();
            let out = query_fixture(&name, &query, &[]);
            assert!(out.status.success(), "{name}/{query}: {}", stderr(&out));
            assert_eq!(stdout(&out), expected(&name, &query), "{name}/{query}");
        }
    }
}

#[test]
fn hair_row_count_equals_oracle() {
    let out = query_fixture("hair", "q1", &[]);
    assert_eq!(stdout(&out).lines().count() - 1, 9);
}

#[test]
fn explicit_root_keeps_rows_and_traces_expansion() {
    let plain = query_fixture("hair", "q1", &[]);
    let rooted = query_fixture("hair", "q1", &["--root", "lmdb", "--trace"]);
    assert!(rooted.status.success());
    assert_eq!(stdout(&plain), stdout(&rooted));
    let trace = stderr(&rooted);
    assert!(trace.contains("endpoint=dbpedia"), "{trace}");
    assert!(trace.contains("reason=expand:2"), "{trace}");
    assert!(stderr(&plain).is_empty());
}

#[test]
fn output_is_byte_stable() {
    let a = query_fixture("hair", "q1", &["--trace"]);
    let b = query_fixture("hair", "q1", &["--trace"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stderr, b.stderr);
    let a = query_fixture("random-seed1", "probe-4", &["--format", "jsonl", "--trace"]);
    let b = query_fixture("random-seed1", "probe-4", &["--format", "jsonl", "--trace"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stderr, b.stderr);
}

#[test]
fn jsonl_has_one_object_per_row() {
    let out = query_fixture("hair", "q1", &["--format", "jsonl"]);
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 9);
    let first: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert_eq!(first["film"], "<http://data.linkedmdb.org/resource/movie/Amadeus>");
}

#[test]
fn missing_query_file_is_usage_error() {
    let config = fixtures().join("hair/config.json");
    let out = mtfed(&["query", "--config", path(&config), "--query", "/nonexistent/q.rq"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_flags_are_usage_errors() {
    assert_eq!(mtfed(&["query", "--bogus"]).status.code(), Some(2));
    assert_eq!(mtfed(&[]).status.code(), Some(2));
    let data = fixtures().join("hair/lmdb.nt");
    let out = mtfed(&["profile", "--data", path(&data), "--endpoint", "lmdb", "--agg", "mode"]);
    assert_eq!(out.status.code(), Some(2));
    let out = query_fixture("hair", "q1", &["--format", "xml"]);
    assert_eq!(out.status.code(), Some(2));
    let out = query_fixture("hair", "q1", &["--root", "nowhere"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unparsable_query_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let q = dir.path().join("bad.rq");
    std::fs::write(&q, "SELECT ?s WHERE { ?s <p> }").unwrap();
    let config = fixtures().join("hair/config.json");
    let out = mtfed(&["query", "--config", path(&config), "--query", path(&q)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("line 1"), "{}", stderr(&out));
}

#[test]
fn profile_reports_label_multiplicity() {
    let data = fixtures().join("hair/dbpedia.nt");
    let out = mtfed(&["profile", "--data", path(&data), "--endpoint", "dbpedia"]);
    assert!(out.status.success());
    let catalog: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let film = &catalog[0];
    assert_eq!(film["class"], "http://dbpedia.org/ontology/Film");
    let label = film["dtp"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["p"] == "http://www.w3.org/2000/01/rdf-schema#label")
        .unwrap();
    assert_eq!(label["amd"], 2);
}

#[test]
fn profile_of_empty_file_is_empty_array() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("empty.nt");
    std::fs::write(&data, "").unwrap();
    let out = mtfed(&["profile", "--data", path(&data), "--endpoint", "x"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "[]\n");
}

#[test]
fn profile_of_malformed_file_cites_line() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("bad.nt");
    std::fs::write(&data, "<a> <p> <b> .\n<a> <p> \"open .\n").unwrap();
    let out = mtfed(&["profile", "--data", path(&data), "--endpoint", "x"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("line 2"), "{}", stderr(&out));
}

#[test]
fn link_merges_profiles() {
    let dir = tempfile::tempdir().unwrap();
    let hair = fixtures().join("hair");
    let mut catalogs = Vec::new();
    for ep in ["lmdb", "dbpedia"] {
        let data = hair.join(format!("{ep}.nt"));
        let out = mtfed(&["profile", "--data", path(&data), "--endpoint", ep]);
        let file = dir.path().join(format!("{ep}.json"));
        std::fs::write(&file, &out.stdout).unwrap();
        catalogs.push(file);
    }
    let lmdb_data = format!("lmdb={}", path(&hair.join("lmdb.nt")));
    let dbpedia_data = format!("dbpedia={}", path(&hair.join("dbpedia.nt")));
    let links = hair.join("links.nt");
    let out = mtfed(&[
        "link",
        "--catalog",
        path(&catalogs[0]),
        "--catalog",
        path(&catalogs[1]),
        "--data",
        &lmdb_data,
        "--data",
        &dbpedia_data,
        "--links",
        path(&links),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let catalog: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let lmdb = catalog
        .as_array()
        .unwrap()
        .iter()
        .find(|m| m["endpoint"] == "lmdb")
        .unwrap();
    let link = serde_json::json!([
        "http://data.linkedmdb.org/resource/movie/label",
        "http://www.w3.org/2000/01/rdf-schema#label",
        "dbpedia"
    ]);
    assert!(lmdb["interP"].as_array().unwrap().contains(&link));

    let out = mtfed(&["link", "--catalog", path(&catalogs[0]), "--data", &dbpedia_data]);
    assert_eq!(out.status.code(), Some(1), "catalog endpoint without data");
}

#[test]
fn diff_oracle_on_hair_is_exact() {
    let hair = fixtures().join("hair");
    let out = mtfed(&[
        "diff-oracle",
        "--config",
        path(&hair.join("config.json")),
        "--query",
        path(&hair.join("queries/q1.rq")),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "oracle: 9\nfederated: 9\nroot-only: 3\ngap: 0\n");
}

fn copy_dir(from: &Path, to: &Path) {
    std::fs::create_dir_all(to).unwrap();
    for entry in std::fs::read_dir(from).unwrap() {
        let entry = entry.unwrap();
        let target = to.join(entry.file_name());
        if entry.file_type().unwrap().is_dir() {
            copy_dir(&entry.path(), &target);
        } else {
            std::fs::copy(entry.path(), target).unwrap();
        }
    }
}

fn linked_hair_catalog(dir: &Path) -> serde_json::Value {
    let hair = fixtures().join("hair");
    let mut args = vec!["link".to_owned()];
    for ep in ["lmdb", "dbpedia"] {
        let data = hair.join(format!("{ep}.nt"));
        let out = mtfed(&["profile", "--data", path(&data), "--endpoint", ep]);
        let file = dir.join(format!("{ep}.json"));
        std::fs::write(&file, &out.stdout).unwrap();
        args.extend(["--catalog".to_owned(), path(&file).to_owned()]);
        args.extend(["--data".to_owned(), format!("{ep}={}", path(&data))]);
    }
    args.extend(["--links".to_owned(), path(&hair.join("links.nt")).to_owned()]);
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    let out = mtfed(&args);
    assert!(out.status.success(), "{}", stderr(&out));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn diff_with_catalog(dir: &Path, catalog: &serde_json::Value) -> Output {
    copy_dir(&fixtures().join("hair"), dir);
    std::fs::write(dir.join("catalog.json"), serde_json::to_string_pretty(catalog).unwrap()).unwrap();
    let mut config: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.join("config.json")).unwrap()).unwrap();
    config["catalog"] = "catalog.json".into();
    std::fs::write(dir.join("config.json"), config.to_string()).unwrap();
    mtfed(&[
        "diff-oracle",
        "--config",
        path(&dir.join("config.json")),
        "--query",
        path(&dir.join("queries/q1.rq")),
    ])
}

#[test]
fn linked_catalog_reproduces_the_profiled_run() {
    let dir = tempfile::tempdir().unwrap();
    let catalog = linked_hair_catalog(dir.path());
    let out = diff_with_catalog(&dir.path().join("fed"), &catalog);
    assert_eq!(out.status.code(), Some(0), "{}{}", stdout(&out), stderr(&out));
    assert!(stdout(&out).contains("gap: 0"));
}

#[test]
fn deleting_the_property_link_opens_a_gap() {
    let dir = tempfile::tempdir().unwrap();
    let mut catalog = linked_hair_catalog(dir.path());
    for mt in catalog.as_array_mut().unwrap() {
        if mt["endpoint"] == "lmdb" {
            mt["interP"]
                .as_array_mut()
                .unwrap()
                .retain(|l| l[0] != "http://data.linkedmdb.org/resource/movie/label");
        }
    }
    let out = diff_with_catalog(&dir.path().join("fed"), &catalog);
    assert_eq!(out.status.code(), Some(1), "{}", stderr(&out));
    let report = stdout(&out);
    assert!(report.contains("gap: 6"), "{report}");
    assert!(report.contains("missing:\n"), "{report}");
    assert!(report.contains("Hair (film)"), "{report}");
}

#[test]
fn single_endpoint_federation_is_exact() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::copy(fixtures().join("hair/lmdb.nt"), dir.path().join("lmdb.nt")).unwrap();
    std::fs::write(
        dir.path().join("config.json"),
        r#"{"endpoints": [{"id": "lmdb", "data": "lmdb.nt"}]}"#,
    )
    .unwrap();
    let out = mtfed(&[
        "diff-oracle",
        "--config",
        path(&dir.path().join("config.json")),
        "--query",
        path(&fixtures().join("hair/queries/q1.rq")),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    assert!(stdout(&out).contains("gap: 0"));
}

#[test]
fn unavailable_endpoint_is_named() {
    let dir = tempfile::tempdir().unwrap();
    copy_dir(&fixtures().join("hair"), dir.path());
    std::fs::write(
        dir.path().join("config.json"),
        r#"{
  "endpoints": [
    {"id": "lmdb", "data": "lmdb.nt"},
    {"id": "dbpedia", "data": "dbpedia.nt", "available": false}
  ],
  "links": "links.nt"
}"#,
    )
    .unwrap();
    let out = mtfed(&[
        "query",
        "--config",
        path(&dir.path().join("config.json")),
        "--query",
        path(&dir.path().join("queries/q1.rq")),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("dbpedia"), "{}", stderr(&out));
}
