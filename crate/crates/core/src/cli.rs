//! The `learning-path` command line.
//!
//! Exit codes: 0 ok, 1 I/O or parse failure, 2 unknown term, 3 no path,
//! 4 oracle guard tripped, 5 port in use.

use std::collections::{BTreeMap, BTreeSet};
use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::aco::{self, AcoError, LearningPath, ParamOverrides, TargetGate};
use crate::corpus::{normalize_term, parse_definitions, parse_qa_log};
use crate::fpgraph::{build_graph, to_dot, FpGraph, QaMatch};
use crate::service::{self, ServeError, ServiceConfig};
use crate::ROOT;

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_UNKNOWN_TERM: i32 = 2;
pub const EXIT_NO_PATH: i32 = 3;
pub const EXIT_ORACLE_GUARD: i32 = 4;
pub const EXIT_PORT_IN_USE: i32 = 5;

#[derive(Debug, Parser)]
#[command(
    name = "learning-path",
    version,
    about = "Build prerequisite graphs and search them for learning paths"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a graph snapshot from a definitions file and an optional Q&A log.
    Build {
        #[arg(long)]
        definitions: PathBuf,
        #[arg(long)]
        qa: Option<PathBuf>,
        #[arg(long)]
        sigma: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the colony for one term.
    Query(QueryArgs),
    /// Enumerate every walk and print the best one.
    Oracle {
        #[command(flatten)]
        target: TargetArgs,
        #[arg(long, value_enum)]
        gate: Option<GateArg>,
        #[arg(long)]
        json: bool,
    },
    /// Serve the HTTP API.
    Serve {
        #[arg(long)]
        graph: Option<PathBuf>,
        #[arg(long)]
        port: Option<u16>,
        /// TOML settings file; flags and environment override it.
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Write the graph in Graphviz DOT format.
    ExportDot {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Print graph statistics.
    Stats {
        #[arg(long)]
        graph: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct TargetArgs {
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long)]
    pub term: String,
    /// Comma-separated terms the learner already knows.
    #[arg(long, value_delimiter = ',')]
    pub known: Vec<String>,
}

#[derive(Debug, Args)]
pub struct QueryArgs {
    #[command(flatten)]
    pub target: TargetArgs,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub rho: Option<f64>,
    #[arg(long = "q")]
    pub q_factor: Option<f64>,
    #[arg(long = "ants")]
    pub n_ants: Option<usize>,
    #[arg(long = "iters")]
    pub max_iterations: Option<usize>,
    #[arg(long = "stagnation")]
    pub stagnation_window: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub gate: Option<GateArg>,
    #[arg(long)]
    pub json: bool,
}

#[derive(Debug, Clone, Copy, clap::ValueEnum)]
pub enum GateArg {
    Query,
    CurrentNode,
}

impl From<GateArg> for TargetGate {
    fn from(g: GateArg) -> Self {
        match g {
            GateArg::Query => TargetGate::Query,
            GateArg::CurrentNode => TargetGate::CurrentNode,
        }
    }
}

/// A failure carrying the exit code it maps to.
#[derive(Debug)]
struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn io(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_IO,
            message: message.into(),
        }
    }
}

type Outcome = Result<(), Failure>;

fn write_out(out: &mut dyn Write, text: &str) -> Outcome {
    out.write_all(text.as_bytes())
        .map_err(|e| Failure::io(format!("writing output: {e}")))
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::io(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, text: &str) -> Outcome {
    std::fs::write(path, text).map_err(|e| Failure::io(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> Result<FpGraph, Failure> {
    let text = read(path)?;
    FpGraph::from_json(&text).map_err(|e| Failure::io(format!("{}: {e}", path.display())))
}

fn resolve(graph: &FpGraph, raw: &str) -> Result<String, Failure> {
    let term = normalize_term(raw).map_err(|e| Failure::io(e.to_string()))?;
    if term != ROOT && !graph.contains(&term) {
        let suggestions = graph.suggest(&term, 5);
        let mut message = format!("unknown term {term:?}");
        if !suggestions.is_empty() {
            message.push_str(&format!("; did you mean: {}", suggestions.join(", ")));
        }
        return Err(Failure {
            code: EXIT_UNKNOWN_TERM,
            message,
        });
    }
    Ok(term)
}

fn resolve_target(
    graph: &FpGraph,
    args: &TargetArgs,
) -> Result<(String, BTreeSet<String>), Failure> {
    let term = resolve(graph, &args.term)?;
    let known = args
        .known
        .iter()
        .filter(|k| !k.trim().is_empty())
        .map(|k| resolve(graph, k))
        .collect::<Result<_, _>>()?;
    Ok((term, known))
}

fn aco_failure(err: AcoError) -> Failure {
    let code = match err {
        AcoError::UnknownTerm(_) => EXIT_UNKNOWN_TERM,
        AcoError::NoPath { .. } => EXIT_NO_PATH,
        AcoError::OracleTooLarge { .. } => EXIT_ORACLE_GUARD,
        _ => EXIT_IO,
    };
    Failure {
        code,
        message: err.to_string(),
    }
}

fn render_path(path: &LearningPath) -> String {
    let mut text = path
        .path
        .iter()
        .map(|t| if t == ROOT { "Root" } else { t.as_str() })
        .collect::<Vec<_>>()
        .join(" -> ");
    text.push('\n');
    if path.recommended_terms.is_empty() {
        text.push_str("recommended: (none)\n");
    } else {
        text.push_str(&format!(
            "recommended: {}\n",
            path.recommended_terms.join(", ")
        ));
    }
    text.push_str(&format!("associations: {}\n", path.association_count));
    text
}

fn cmd_build(
    definitions: &Path,
    qa: Option<&Path>,
    sigma: u64,
    out_path: &Path,
    out: &mut dyn Write,
) -> Outcome {
    let defs = parse_definitions(&read(definitions)?)
        .map_err(|e| Failure::io(format!("{}: {e}", definitions.display())))?;
    let qa_log = match qa {
        Some(path) => parse_qa_log(&read(path)?)
            .map_err(|e| Failure::io(format!("{}: {e}", path.display())))?,
        None => Vec::new(),
    };
    let (graph, matches) =
        build_graph(&defs, &qa_log, sigma).map_err(|e| Failure::io(e.to_string()))?;
    write_file(out_path, &graph.to_json())?;
    let matched = matches
        .iter()
        .filter(|m| matches!(m, QaMatch::Matched { .. }))
        .count();
    write_out(
        out,
        &format!(
            "nodes: {}\nedges: {}\nassociations: {}\nqa matched: {matched} of {}\n",
            graph.node_count(),
            graph.edge_count(),
            graph.association_count(),
            qa_log.len(),
        ),
    )
}

fn cmd_query(args: &QueryArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let graph = load_graph(&args.target.graph)?;
    let (term, known) = resolve_target(&graph, &args.target)?;
    let overrides = ParamOverrides {
        alpha: args.alpha,
        beta: args.beta,
        rho: args.rho,
        q_factor: args.q_factor,
        n_ants: args.n_ants,
        max_iterations: args.max_iterations,
        stagnation_window: args.stagnation_window,
        seed: args.seed,
        gate: args.gate.map(Into::into),
        ..ParamOverrides::default()
    };
    let mut params = overrides.apply(&aco::AcoParams::default());
    if args.seed.is_none() {
        params.seed = rand::random();
        write_out(err, &format!("seed: {}\n", params.seed))?;
    }
    let path = aco::learning_path(&graph, &term, &known, &params).map_err(aco_failure)?;
    if args.json {
        write_out(out, &format!("{}\n", path.to_json()))
    } else {
        write_out(out, &render_path(&path))
    }
}

fn cmd_oracle(
    target: &TargetArgs,
    gate: Option<GateArg>,
    json: bool,
    out: &mut dyn Write,
) -> Outcome {
    let graph = load_graph(&target.graph)?;
    let (term, known) = resolve_target(&graph, target)?;
    let gate = gate.map_or(TargetGate::default(), Into::into);
    let path = aco::brute_force_oracle(&graph, &term, &known, gate).map_err(aco_failure)?;
    if json {
        write_out(out, &format!("{}\n", path.to_json()))
    } else {
        write_out(out, &render_path(&path))
    }
}

fn cmd_serve(graph: Option<PathBuf>, port: Option<u16>, config: Option<PathBuf>) -> Outcome {
    let mut settings =
        ServiceConfig::load(config.as_deref()).map_err(|e| Failure::io(e.to_string()))?;
    if graph.is_some() {
        settings.graph_path = graph;
    }
    if let Some(port) = port {
        settings.port = port;
    }
    let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure::io(e.to_string()))?;
    runtime
        .block_on(service::serve(settings))
        .map_err(|e| Failure {
            code: match e {
                ServeError::PortInUse(_) => EXIT_PORT_IN_USE,
                _ => EXIT_IO,
            },
            message: e.to_string(),
        })
}

fn cmd_stats(path: &Path, out: &mut dyn Write) -> Outcome {
    let graph = load_graph(path)?;
    let mut histogram: BTreeMap<u64, usize> = BTreeMap::new();
    for edge in graph.edges() {
        *histogram.entry(edge.frequency).or_default() += 1;
    }
    let mut text = format!(
        "sigma: {}\nnodes: {}\nedges: {}\nassociations: {}\nunmatched: {}\nfrequency histogram:\n",
        graph.sigma(),
        graph.node_count(),
        graph.edge_count(),
        graph.association_count(),
        graph.unmatched().len(),
    );
    for (frequency, count) in histogram {
        text.push_str(&format!("  {frequency}: {count}\n"));
    }
    write_out(out, &text)
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match cli.command {
        Command::Build {
            definitions,
            qa,
            sigma,
            out: out_path,
        } => cmd_build(&definitions, qa.as_deref(), sigma, &out_path, out),
        Command::Query(args) => cmd_query(&args, out, err),
        Command::Oracle { target, gate, json } => cmd_oracle(&target, gate, json, out),
        Command::Serve {
            graph,
            port,
            config,
        } => cmd_serve(graph, port, config),
        Command::ExportDot {
            graph,
            out: out_path,
        } => write_file(&out_path, &to_dot(&load_graph(&graph)?)),
        Command::Stats { graph } => cmd_stats(&graph, out),
    }
}

/// Parses `args` (program name first) and runs the command, returning the
/// process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_IO } else { EXIT_OK };
        }
    };
    match dispatch(cli, out, err) {
        Ok(()) => EXIT_OK,
        Err(failure) => {
            let _ = writeln!(err, "error: {}", failure.message);
            failure.code
        }
    }
}

pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}
