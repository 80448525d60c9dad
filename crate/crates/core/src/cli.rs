//! The `tifsem` command line: ingest, map, query, export, validate and
//! fixture generation over files.
//!
//! Exit codes are 0 on success, 1 on a domain error (malformed XML, invalid
//! rules, query errors, validation errors) and 2 on usage or I/O errors.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::fixtures::{self, FixtureConfig};
use crate::graph::{assert_io, io_iri, AssertError, Graph, Iri};
use crate::ingest::{format_issues, parse_tif, DialectProfile, ParseError, RawDocument, ValidationIssue};
use crate::mapping::{builtin_rules, load_rules, materialize, MappingRule};
use crate::query::{evaluate, parse_query, SolutionTable};
use crate::serialize::{from_ntriples, to_jsonld, to_ntriples, to_turtle};
use crate::vocab;

pub const BASE_ENV: &str = "TIFSEM_BASE_IRI";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Nt,
    Ttl,
    Jsonld,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Nt => "nt",
            OutputFormat::Ttl => "ttl",
            OutputFormat::Jsonld => "jsonld",
        }
    }

    pub fn from_path(path: &Path) -> Option<Self> {
        match path.extension()?.to_str()? {
            "nt" => Some(OutputFormat::Nt),
            "ttl" => Some(OutputFormat::Ttl),
            "jsonld" | "json" => Some(OutputFormat::Jsonld),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Table,
    Csv,
}

/// Settings shared by the pipeline steps.
#[derive(Debug, Clone, PartialEq)]
pub struct PipelineConfig {
    pub base: String,
    pub profile: Option<PathBuf>,
    pub rules: Option<PathBuf>,
    pub inputs: Vec<PathBuf>,
    pub output: PathBuf,
    pub format: OutputFormat,
}

impl PipelineConfig {
    /// Checks that the output extension, when it names a format, agrees with `format`.
    pub fn validate(&self) -> Result<(), CliError> {
        match OutputFormat::from_path(&self.output) {
            Some(f) if f != self.format => Err(CliError::Usage(format!(
                "output {} does not match format {}",
                self.output.display(),
                self.format.extension()
            ))),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Usage(String),
    Io(String),
    Domain(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Usage(_) | CliError::Io(_) => 2,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) | CliError::Domain(m) => f.write_str(m),
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "tifsem",
    version,
    about = "TourInFrance to Schema.org knowledge graph toolkit"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Parse TIF XML files into an N-Triples graph and an issue report.
    Ingest {
        inputs: Vec<PathBuf>,
        #[arg(long)]
        profile: Option<PathBuf>,
        #[arg(long, env = BASE_ENV, default_value = vocab::DEFAULT_BASE)]
        base: String,
        #[arg(long)]
        out: PathBuf,
        /// Issue report path; defaults to the output path with an `.issues.tsv` extension.
        #[arg(long)]
        issues: Option<PathBuf>,
    },
    /// Materialize Schema.org alignments into a graph.
    Map {
        graph: PathBuf,
        /// Extra rules, appended to the builtin ones.
        #[arg(long)]
        rules: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a query file against a graph.
    Query {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        query: PathBuf,
        #[arg(long, value_enum, default_value_t = TableFormat::Table)]
        format: TableFormat,
    },
    /// Write a graph as N-Triples, Turtle or JSON-LD.
    Export {
        #[arg(long)]
        graph: PathBuf,
        /// Root node for JSON-LD: an IRI or an IO identifier.
        #[arg(long)]
        root: Option<String>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum)]
        format: Option<OutputFormat>,
        #[arg(long, env = BASE_ENV, default_value = vocab::DEFAULT_BASE)]
        base: String,
    },
    /// Parse and validate TIF XML files without writing a graph.
    Validate {
        inputs: Vec<PathBuf>,
        #[arg(long)]
        profile: Option<PathBuf>,
    },
    #[command(subcommand)]
    Fixtures(FixturesCommand),
}

#[derive(Debug, Subcommand)]
pub enum FixturesCommand {
    /// Write the synthetic La Rochelle dataset as TIF XML.
    Generate {
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = fixtures::DEFAULT_SEED)]
        seed: u64,
    },
}

/// Parses the arguments, runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            if code == 0 {
                let _ = write!(stdout, "{text}");
            } else {
                let _ = write!(stderr, "{text}");
            }
            return code;
        }
    };
    match execute(cli.command, stdout) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn execute(command: Command, stdout: &mut dyn Write) -> Result<i32, CliError> {
    match command {
        Command::Ingest {
            inputs,
            profile,
            base,
            out,
            issues,
        } => {
            let config = PipelineConfig {
                base,
                profile,
                rules: None,
                inputs,
                output: out,
                format: OutputFormat::Nt,
            };
            config.validate()?;
            cmd_ingest(&config, issues.as_deref(), stdout)
        }
        Command::Map { graph, rules, out } => cmd_map(&graph, rules.as_deref(), &out, stdout),
        Command::Query { graph, query, format } => cmd_query(&graph, &query, format, stdout),
        Command::Export {
            graph,
            root,
            out,
            format,
            base,
        } => {
            let format = format
                .or_else(|| OutputFormat::from_path(&out))
                .unwrap_or(OutputFormat::Nt);
            let config = PipelineConfig {
                base,
                profile: None,
                rules: None,
                inputs: vec![graph],
                output: out,
                format,
            };
            config.validate()?;
            cmd_export(&config, root.as_deref())
        }
        Command::Validate { inputs, profile } => cmd_validate(&inputs, profile.as_deref(), stdout),
        Command::Fixtures(FixturesCommand::Generate { out, seed }) => {
            let config = FixtureConfig {
                seed,
                ..FixtureConfig::default()
            };
            write_file(&out, &fixtures::larochelle_xml(&config))?;
            Ok(0)
        }
    }
}

fn read_file(path: &Path) -> Result<Vec<u8>, CliError> {
    std::fs::read(path).map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))
}

fn read_text(path: &Path) -> Result<String, CliError> {
    String::from_utf8(read_file(path)?).map_err(|_| CliError::Io(format!("{} is not valid UTF-8", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

fn load_profile(path: Option<&Path>) -> Result<DialectProfile, CliError> {
    match path {
        None => Ok(DialectProfile::identity()),
        Some(p) => {
            DialectProfile::from_json(&read_text(p)?).map_err(|e| CliError::Domain(format!("{}: {e}", p.display())))
        }
    }
}

fn load_graph(path: &Path) -> Result<Graph, CliError> {
    from_ntriples(&read_text(path)?).map_err(|e| CliError::Domain(format!("{}:{e}", path.display())))
}

fn read_documents(inputs: &[PathBuf]) -> Result<Vec<RawDocument>, CliError> {
    if inputs.is_empty() {
        return Err(CliError::Usage("no input files given".into()));
    }
    inputs
        .iter()
        .map(|p| Ok(RawDocument::new(p.display().to_string(), read_file(p)?)))
        .collect()
}

/// Parses each document on its own thread, returning results in input order.
pub fn parse_all(
    docs: &[RawDocument],
    profile: &DialectProfile,
) -> Vec<Result<crate::ingest::ParseOutput, ParseError>> {
    std::thread::scope(|scope| {
        let handles: Vec<_> = docs
            .iter()
            .map(|doc| scope.spawn(move || parse_tif(doc, profile)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("parser thread panicked"))
            .collect()
    })
}

/// Parses the documents and asserts every valid IO into one graph.
///
/// IOs with validation errors are left out of the graph; their issues are
/// part of the returned list.
pub fn ingest_documents(
    docs: &[RawDocument],
    profile: &DialectProfile,
    base: &str,
) -> Result<(Graph, Vec<ValidationIssue>), ParseError> {
    let mut graph = Graph::new();
    let mut issues = vec![];
    for output in parse_all(docs, profile) {
        let output = output?;
        issues.extend(output.issues);
        for io in &output.ios {
            match assert_io(&mut graph, io, base) {
                Ok(_) | Err(AssertError::Invalid { .. }) => {}
                Err(e @ AssertError::Base(_)) => {
                    issues.push(ValidationIssue::error(Some(&io.id), "Identifier", e.to_string()))
                }
            }
        }
    }
    Ok((graph, issues))
}

fn cmd_ingest(config: &PipelineConfig, issues_path: Option<&Path>, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let docs = read_documents(&config.inputs)?;
    let profile = load_profile(config.profile.as_deref())?;
    let (graph, issues) =
        ingest_documents(&docs, &profile, &config.base).map_err(|e| CliError::Domain(e.to_string()))?;
    write_file(&config.output, &to_ntriples(&graph))?;
    let issues_path = issues_path
        .map(Path::to_path_buf)
        .unwrap_or_else(|| config.output.with_extension("issues.tsv"));
    write_file(&issues_path, &format_issues(&issues))?;
    let errors = issues.iter().filter(|i| i.is_error()).count();
    let _ = writeln!(
        stdout,
        "{} triples, {} errors, {} warnings",
        graph.len(),
        errors,
        issues.len() - errors
    );
    Ok(if errors == 0 { 0 } else { 1 })
}

/// Builtin rules plus the rules of an optional JSON document.
pub fn rules_with(extra: Option<&str>) -> Result<Vec<MappingRule>, crate::mapping::RuleError> {
    let mut rules = builtin_rules();
    if let Some(text) = extra {
        rules.extend(load_rules(text)?);
    }
    Ok(rules)
}

fn cmd_map(graph_path: &Path, rules_path: Option<&Path>, out: &Path, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let mut graph = load_graph(graph_path)?;
    let extra = rules_path.map(read_text).transpose()?;
    let rules = rules_with(extra.as_deref()).map_err(|e| {
        CliError::Domain(format!(
            "{}: {e}",
            rules_path.map(|p| p.display().to_string()).unwrap_or_default()
        ))
    })?;
    let report = materialize(&mut graph, &rules);
    write_file(out, &to_ntriples(&graph))?;
    let _ = write!(stdout, "{report}");
    Ok(0)
}

/// Parses and evaluates query text against a graph.
pub fn run_query(text: &str, graph: &Graph) -> Result<SolutionTable, CliError> {
    let query = parse_query(text).map_err(|e| CliError::Domain(e.to_string()))?;
    evaluate(&query, graph).map_err(|e| CliError::Domain(e.to_string()))
}

fn cmd_query(
    graph_path: &Path,
    query_path: &Path,
    format: TableFormat,
    stdout: &mut dyn Write,
) -> Result<i32, CliError> {
    let graph = load_graph(graph_path)?;
    let text = read_text(query_path)?;
    let table = run_query(&text, &graph).map_err(|e| CliError::Domain(format!("{}:{e}", query_path.display())))?;
    let rendered = match format {
        TableFormat::Csv => table.to_csv(),
        TableFormat::Table => table.to_table(),
    };
    stdout
        .write_all(rendered.as_bytes())
        .map_err(|e| CliError::Io(e.to_string()))?;
    Ok(0)
}

fn cmd_export(config: &PipelineConfig, root: Option<&str>) -> Result<i32, CliError> {
    let graph = load_graph(&config.inputs[0])?;
    let text = match config.format {
        OutputFormat::Nt => to_ntriples(&graph),
        OutputFormat::Ttl => to_turtle(&graph, vocab::PREFIXES),
        OutputFormat::Jsonld => {
            let root = root.ok_or_else(|| CliError::Usage("JSON-LD export needs --root".into()))?;
            let iri = if root.contains(':') {
                Iri::new(root).map_err(|e| CliError::Usage(e.to_string()))?
            } else {
                io_iri(&config.base, root).map_err(|e| CliError::Usage(e.to_string()))?
            };
            let doc = to_jsonld(&graph, &iri).map_err(|e| CliError::Domain(e.to_string()))?;
            doc.to_string_pretty() + "\n"
        }
    };
    write_file(&config.output, &text)?;
    Ok(0)
}

fn cmd_validate(inputs: &[PathBuf], profile: Option<&Path>, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let docs = read_documents(inputs)?;
    let profile = load_profile(profile)?;
    let mut errors = 0;
    for output in parse_all(&docs, &profile) {
        let output = output.map_err(|e| CliError::Domain(e.to_string()))?;
        errors += output.issues.iter().filter(|i| i.is_error()).count();
        let _ = stdout.write_all(format_issues(&output.issues).as_bytes());
    }
    Ok(if errors == 0 { 0 } else { 1 })
}
