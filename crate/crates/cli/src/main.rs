use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use semicayley::families::GraphSource;
use semicayley::transfer::Method;
use semicayley::{Error, Vertex};
use semicayley_cli::{error_outcome, parse_config, run, time_text, Command, Format, JobConfig, DEFAULT_TOLERANCE};

/// Spectra, quantum-walk transfer and perfect state transfer on semi-Cayley graphs.
#[derive(Parser, Debug)]
#[command(name = "semicayley", version)]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[command(flatten)]
    common: Common,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Closed-form eigenvalues and projector coefficients.
    Spectrum,
    /// Transfer matrix H(t), or one entry with --from/--to.
    Evolve,
    /// Perfect state transfer queries.
    #[command(subcommand)]
    Pst(PstCmd),
    /// Periodicity and minimum period.
    Period,
    /// Run a job file whose "command" field picks the analysis.
    Run,
}

#[derive(Subcommand, Debug)]
enum PstCmd {
    /// Decide one pair, or check |H(t)| at --time.
    Check,
    /// Decide every pair up to translation.
    Find,
}

#[derive(Args, Debug)]
struct Common {
    /// JSON job file: a graph (inline or family) plus optional options.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Inline graph JSON: {"group":{"factors":[..]},"R":[..],"L":[..],"S":[..]}.
    #[arg(long, global = true, value_name = "JSON")]
    graph: Option<String>,
    /// Named family: sunlet, cone, join, dihedral-full-coset, dihedral-involutions,
    /// dicyclic-full-coset, dicyclic-involutions, hypercube.
    #[arg(long, global = true, value_name = "NAME")]
    family: Option<String>,
    /// Size parameter of sunlet, cone and hypercube.
    #[arg(long, global = true)]
    n: Option<u64>,
    /// Factor sizes of the base group A, e.g. 2,4.
    #[arg(long, global = true, value_delimiter = ',', value_name = "LIST")]
    factors: Option<Vec<u64>>,
    /// Involution y of A for the dicyclic families, e.g. 0,2.
    #[arg(long, global = true, value_delimiter = ',', value_name = "LIST")]
    y: Option<Vec<u64>>,
    /// Confirmation tolerance for witnesses and periods (default 1e-8).
    #[arg(long, global = true, value_name = "FLOAT")]
    tol: Option<f64>,
    /// "pi/2", "3/4 pi", "2*pi/3" or a decimal number.
    #[arg(long, global = true, value_name = "EXPR", allow_hyphen_values = true)]
    time: Option<String>,
    #[arg(long, global = true, value_enum)]
    format: Option<FormatArg>,
    /// Vertex as [[exponents],layer].
    #[arg(long, global = true, value_name = "VERT")]
    from: Option<String>,
    /// Target vertex, same syntax as --from.
    #[arg(long, global = true, value_name = "VERT")]
    to: Option<String>,
    #[arg(long, global = true, value_enum)]
    method: Option<MethodArg>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum MethodArg {
    Spectral,
    Oracle,
    Block,
}

fn parse_vertex(text: &str) -> Result<Vertex, Error> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("invalid vertex '{text}': {e}")))
}

fn family_source(c: &Common, name: &str) -> Result<GraphSource, Error> {
    let mut object = json!({ "family": name });
    if let Some(n) = c.n {
        let key = if name == "hypercube" { "d" } else { "n" };
        object[key] = json!(n);
    }
    if let Some(f) = &c.factors {
        object["A"] = json!(f);
    }
    if let Some(y) = &c.y {
        object["y"] = json!(y);
    }
    GraphSource::try_from(object)
}

fn build_config(cli: &Cli) -> Result<JobConfig, Error> {
    let c = &cli.common;
    let sources = [c.config.is_some(), c.graph.is_some(), c.family.is_some()];
    if sources.iter().filter(|&&s| s).count() != 1 {
        return Err(Error::Parse("give exactly one of --config, --graph, --family".into()));
    }
    let (graph, options) = match (&c.config, &c.graph, &c.family) {
        (Some(path), _, _) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
            let (graph, options) = parse_config(&text)?;
            (graph, Some(options))
        }
        (_, Some(inline), _) => {
            let value: Value = serde_json::from_str(inline).map_err(|e| Error::Parse(e.to_string()))?;
            (GraphSource::try_from(value)?, None)
        }
        (_, _, Some(name)) => (family_source(c, name)?, None),
        _ => unreachable!(),
    };
    let options = options.unwrap_or_default();
    let command = match &cli.command {
        Cmd::Spectrum => Command::Spectrum,
        Cmd::Evolve => Command::Evolve,
        Cmd::Pst(PstCmd::Check) => Command::PstCheck,
        Cmd::Pst(PstCmd::Find) => Command::PstFind,
        Cmd::Period => Command::Period,
        Cmd::Run => options
            .command
            .ok_or_else(|| Error::Parse("job file has no \"command\"".into()))?,
    };
    let from = match &c.from {
        Some(t) => Some(parse_vertex(t)?),
        None => options.from,
    };
    let to = match &c.to {
        Some(t) => Some(parse_vertex(t)?),
        None => options.to,
    };
    let time = match &c.time {
        Some(t) => Some(t.clone()),
        None => options.time.as_ref().map(time_text).transpose()?,
    };
    Ok(JobConfig {
        graph,
        command,
        tolerance: c.tol.or(options.tolerance).unwrap_or(DEFAULT_TOLERANCE),
        time,
        from,
        to,
        format: c
            .format
            .map(|f| match f {
                FormatArg::Json => Format::Json,
                FormatArg::Text => Format::Text,
            })
            .or(options.format)
            .unwrap_or_default(),
        method: c
            .method
            .map(|m| match m {
                MethodArg::Spectral => Method::Spectral,
                MethodArg::Oracle => Method::Oracle,
                MethodArg::Block => Method::Block,
            })
            .or(options.method)
            .unwrap_or_default(),
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help and --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };
    let format = match cli.common.format {
        Some(FormatArg::Text) => Format::Text,
        _ => Format::Json,
    };
    let outcome = match build_config(&cli) {
        Ok(config) => run(&config),
        Err(e) => error_outcome(&e, format),
    };
    // a closed pipe (e.g. `| head`) is not an error worth reporting
    let _ = writeln!(std::io::stdout().lock(), "{}", outcome.output);
    ExitCode::from(outcome.exit_code as u8)
}
