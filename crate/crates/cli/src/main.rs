use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Parser, Subcommand, ValueEnum};
use mtfed_core::federation::FederationError;
use mtfed_core::oracle::diff_against_oracle;
use mtfed_core::profile::{build_mts, link_mts};
use mtfed_core::rdf::{parse_ntriples_scoped, Graph};
use mtfed_core::{
    execute, load_federation, parse_query, AggregationFn, BasicGraphPattern, EndpointId, ExecuteOptions, MtCatalog,
};

#[derive(Parser)]
#[command(
    name = "mtfed",
    version,
    about = "Completeness-aware federated queries over RDF sources"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Profile one dataset into a molecule template catalog.
    Profile {
        #[arg(long)]
        data: PathBuf,
        #[arg(long)]
        endpoint: String,
        #[arg(long, default_value = "median", value_parser = parse_agg)]
        agg: AggregationFn,
    },
    /// Merge catalogs and fill in their cross-source links.
    Link {
        /// Catalog JSON produced by `profile`; repeatable.
        #[arg(long = "catalog", required = true)]
        catalogs: Vec<PathBuf>,
        /// Dataset of an endpoint as `<id>=<file>`; repeatable.
        #[arg(long = "data", value_parser = parse_data_arg)]
        data: Vec<(String, PathBuf)>,
        #[arg(long)]
        links: Option<PathBuf>,
    },
    /// Evaluate a query over a federation.
    Query {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        query: PathBuf,
        /// Start every pattern at this endpoint.
        #[arg(long)]
        root: Option<String>,
        /// Print the operator trace to stderr.
        #[arg(long)]
        trace: bool,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Compare federated and root-only answers against the oracle.
    DiffOracle {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        query: PathBuf,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Jsonl,
}

fn parse_agg(s: &str) -> Result<AggregationFn, String> {
    s.parse().map_err(|e| format!("{e}"))
}

fn parse_data_arg(s: &str) -> Result<(String, PathBuf), String> {
    let (id, path) = s.split_once('=').ok_or("expected <id>=<file>")?;
    Ok((id.to_owned(), PathBuf::from(path)))
}

enum Failure {
    Usage(anyhow::Error),
    Domain(anyhow::Error),
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Failure::Domain(e)
    }
}

type Outcome = Result<ExitCode, Failure>;

fn usage(e: impl Into<anyhow::Error>) -> Failure {
    Failure::Usage(e.into())
}

fn read_input(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path)
        .with_context(|| format!("cannot read {}", path.display()))
        .map_err(Failure::Usage)
}

fn read_graph(path: &Path, ordinal: usize) -> Result<Graph, Failure> {
    let text = read_input(path)?;
    parse_ntriples_scoped(&text, Some(ordinal))
        .with_context(|| path.display().to_string())
        .map_err(Failure::Domain)
}

fn read_query(path: &Path) -> Result<BasicGraphPattern, Failure> {
    let text = read_input(path)?;
    parse_query(&text)
        .with_context(|| path.display().to_string())
        .map_err(Failure::Usage)
}

fn load(config: &Path) -> Result<mtfed_core::Federation, Failure> {
    load_federation(config).map_err(|e| match e {
        FederationError::Io { ref path, .. } if path == config => usage(e),
        e => Failure::Domain(e.into()),
    })
}

fn root_hint(federation: &mtfed_core::Federation, root: Option<String>) -> Result<Option<EndpointId>, Failure> {
    let Some(root) = root else { return Ok(None) };
    let id = EndpointId::new(&root).map_err(usage)?;
    if !federation.contains(&id) {
        return Err(usage(anyhow!("--root {id}: no such endpoint in the federation")));
    }
    Ok(Some(id))
}

fn emit(text: &str) -> Outcome {
    let mut out = std::io::stdout().lock();
    out.write_all(text.as_bytes()).context("writing to stdout")?;
    out.flush().context("writing to stdout")?;
    Ok(ExitCode::SUCCESS)
}

fn profile(data: &Path, endpoint: &str, agg: AggregationFn) -> Outcome {
    let endpoint = EndpointId::new(endpoint).map_err(usage)?;
    let graph = read_graph(data, 0)?;
    let catalog: MtCatalog = build_mts(&graph, &endpoint, agg).into_iter().collect();
    emit(&catalog.to_json())
}

fn link(catalogs: &[PathBuf], data: &[(String, PathBuf)], links: Option<&Path>) -> Outcome {
    let mut merged = MtCatalog::new();
    for path in catalogs {
        let text = read_input(path)?;
        let catalog = MtCatalog::from_json(&text).with_context(|| path.display().to_string())?;
        for mt in catalog.iter() {
            if merged.get(mt.endpoint(), mt.class()).is_some() {
                return Err(Failure::Domain(anyhow!(
                    "{}: template {} appears in more than one catalog",
                    path.display(),
                    mt.key()
                )));
            }
        }
        merged.extend(catalog);
    }
    let mut graphs = BTreeMap::new();
    for (ordinal, (id, path)) in data.iter().enumerate() {
        let id = EndpointId::new(id).map_err(usage)?;
        if graphs.contains_key(&id) {
            return Err(usage(anyhow!("--data {id} given twice")));
        }
        graphs.insert(id, read_graph(path, ordinal)?);
    }
    let links = links.map(|p| read_graph(p, data.len())).transpose()?;
    let linked = link_mts(&merged, &graphs, links.as_ref()).context("linking catalogs")?;
    emit(&linked.to_json())
}

fn query(config: &Path, query: &Path, root: Option<String>, trace: bool, format: Format) -> Outcome {
    let bgp = read_query(query)?;
    let federation = load(config)?;
    let options = ExecuteOptions {
        root_hint: root_hint(&federation, root)?,
        ..ExecuteOptions::default()
    };
    let result = execute(&bgp, &federation, &options).context("query evaluation failed")?;
    if trace {
        eprint!("{}", result.trace_text());
    }
    emit(&match format {
        Format::Csv => result.to_csv(),
        Format::Jsonl => result.to_jsonl(),
    })
}

fn diff_oracle(config: &Path, query: &Path) -> Outcome {
    let bgp = read_query(query)?;
    let federation = load(config)?;
    let report = diff_against_oracle(&bgp, &federation, None).context("query evaluation failed")?;
    emit(&report.to_text())?;
    Ok(if report.is_exact() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Profile { data, endpoint, agg } => profile(&data, &endpoint, agg),
        Command::Link { catalogs, data, links } => link(&catalogs, &data, links.as_deref()),
        Command::Query {
            config,
            query: q,
            root,
            trace,
            format,
        } => query(&config, &q, root, trace, format),
        Command::DiffOracle { config, query } => diff_oracle(&config, &query),
    };
    match outcome {
        Ok(code) => code,
        Err(Failure::Usage(e)) => {
            eprintln!("mtfed: {e:#}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            eprintln!("mtfed: {e:#}");
            ExitCode::from(1)
        }
    }
}
