//! Job model behind the `semicayley` binary: one graph, one command, one
//! report. Kept separate from `main.rs` so tests can run jobs in-process.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use semicayley::families::GraphSource;
use semicayley::pst::{self, Analyzer, Certificate, PeriodReport, PstVerdict, Verification};
use semicayley::spectral::{eigenvalues, SpectrumReport};
use semicayley::time::{parse_time, SymbolicTime, TimeExpr};
use semicayley::transfer::{evolve, Method};
use semicayley::{Error, SemiCayleySpec, Vertex};

pub const DEFAULT_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Spectrum,
    Evolve,
    PstCheck,
    PstFind,
    Period,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Clone, Debug, PartialEq)]
pub struct JobConfig {
    pub graph: GraphSource,
    pub command: Command,
    pub tolerance: f64,
    pub time: Option<String>,
    pub from: Option<Vertex>,
    pub to: Option<Vertex>,
    pub format: Format,
    pub method: Method,
}

/// Job options that may appear next to the graph in a config file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobOptions {
    pub command: Option<Command>,
    #[serde(alias = "tol")]
    pub tolerance: Option<f64>,
    pub time: Option<Value>,
    pub from: Option<Vertex>,
    pub to: Option<Vertex>,
    pub format: Option<Format>,
    pub method: Option<Method>,
}

const OPTION_KEYS: [&str; 8] = ["command", "tolerance", "tol", "time", "from", "to", "format", "method"];

/// Splits a config object into its graph source and job options. The graph
/// is either under `"graph"` or given by the remaining top-level keys.
pub fn parse_config(text: &str) -> Result<(GraphSource, JobOptions), Error> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let Value::Object(mut object) = value else {
        return Err(Error::Parse("config must be a JSON object".into()));
    };
    let mut options = Map::new();
    for key in OPTION_KEYS {
        if let Some(v) = object.remove(key) {
            options.insert(key.to_string(), v);
        }
    }
    let options: JobOptions =
        serde_json::from_value(Value::Object(options)).map_err(|e| Error::Parse(e.to_string()))?;
    let graph = match object.remove("graph") {
        Some(g) => {
            if !object.is_empty() {
                let extra: Vec<_> = object.keys().cloned().collect();
                return Err(Error::Parse(format!("unexpected keys next to \"graph\": {extra:?}")));
            }
            g
        }
        None => Value::Object(object),
    };
    let graph = GraphSource::try_from(graph)?;
    Ok((graph, options))
}

/// `time` may be given as a string expression or a bare number.
pub fn time_text(value: &Value) -> Result<String, Error> {
    match value {
        Value::String(s) => Ok(s.clone()),
        Value::Number(n) => Ok(n.to_string()),
        other => Err(Error::Parse(format!("invalid time {other}"))),
    }
}

impl JobConfig {
    pub fn from_json(text: &str) -> Result<Self, Error> {
        let (graph, options) = parse_config(text)?;
        let command = options
            .command
            .ok_or_else(|| Error::Parse("config has no \"command\"".into()))?;
        Ok(JobConfig {
            graph,
            command,
            tolerance: options.tolerance.unwrap_or(DEFAULT_TOLERANCE),
            time: options.time.as_ref().map(time_text).transpose()?,
            from: options.from,
            to: options.to,
            format: options.format.unwrap_or_default(),
            method: options.method.unwrap_or_default(),
        })
    }
}

/// Rendered report and process exit code.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub exit_code: i32,
    pub output: String,
}

pub fn exit_code(error: &Error) -> i32 {
    match error {
        Error::InternalConsistency { .. } | Error::UnconfirmedWitness { .. } => 2,
        _ => 1,
    }
}

fn error_kind(error: &Error) -> &'static str {
    match error {
        Error::InvalidFactors(_) => "invalid-factors",
        Error::DimensionMismatch { .. } => "dimension-mismatch",
        Error::ExponentOutOfRange { .. } => "exponent-out-of-range",
        Error::NotInverseClosed(_) => "not-inverse-closed",
        Error::ContainsIdentity(_) => "contains-identity",
        Error::NotAnAutomorphism(_) => "not-an-automorphism",
        Error::Family(_) => "family",
        Error::ModulusMismatch { .. } => "modulus-mismatch",
        Error::SpectrumNotIntegral => "spectrum-not-integral",
        Error::Precondition(_) => "precondition",
        Error::Parse(_) => "parse",
        Error::InternalConsistency { .. } => "internal-consistency",
        Error::UnconfirmedWitness { .. } => "unconfirmed-witness",
    }
}

pub fn error_outcome(error: &Error, format: Format) -> Outcome {
    let output = match format {
        Format::Json => {
            let body = json!({"error": {"kind": error_kind(error), "message": error.to_string()}});
            pretty(&body)
        }
        Format::Text => format!("error ({}): {error}", error_kind(error)),
    };
    Outcome {
        exit_code: exit_code(error),
        output,
    }
}

pub fn run(config: &JobConfig) -> Outcome {
    match execute(config) {
        Ok(output) => Outcome { exit_code: 0, output },
        Err(e) => error_outcome(&e, config.format),
    }
}

#[derive(Serialize)]
struct Complex {
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct TimeField {
    value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<SymbolicTime>,
}

impl From<TimeExpr> for TimeField {
    fn from(t: TimeExpr) -> Self {
        TimeField {
            value: t.value,
            exact: t.exact,
        }
    }
}

#[derive(Serialize)]
struct SpectrumOutput<'a> {
    graph: &'a SemiCayleySpec,
    sorted: Vec<f64>,
    #[serde(flatten)]
    report: SpectrumReport,
}

#[derive(Serialize)]
struct CheckOutput<'a> {
    graph: &'a SemiCayleySpec,
    from: &'a Vertex,
    to: &'a Vertex,
    time: TimeField,
    #[serde(flatten)]
    verification: Verification,
}

#[derive(Serialize)]
struct VerdictOutput<'a> {
    graph: &'a SemiCayleySpec,
    #[serde(flatten)]
    verdict: &'a PstVerdict,
}

#[derive(Serialize)]
struct PeriodOutput<'a> {
    graph: &'a SemiCayleySpec,
    #[serde(flatten)]
    report: &'a PeriodReport,
}

fn required<'a>(v: &'a Option<Vertex>, flag: &str) -> Result<&'a Vertex, Error> {
    v.as_ref()
        .ok_or_else(|| Error::Parse(format!("--{flag} is required for this command")))
}

fn required_time(config: &JobConfig) -> Result<TimeExpr, Error> {
    let text = config
        .time
        .as_deref()
        .ok_or_else(|| Error::Parse("--time is required for this command".into()))?;
    parse_time(text)
}

fn execute(config: &JobConfig) -> Result<String, Error> {
    if !(config.tolerance > 0.0 && config.tolerance < 1.0) {
        return Err(Error::Precondition(format!(
            "tolerance must lie in (0, 1), got {}",
            config.tolerance
        )));
    }
    let spec = config.graph.build()?;
    let json = config.format == Format::Json;
    match config.command {
        Command::Spectrum => {
            let spectrum = eigenvalues(&spec);
            if json {
                return Ok(pretty(&SpectrumOutput {
                    graph: &spec,
                    sorted: spectrum.sorted_eigenvalues(),
                    report: spectrum.report(),
                }));
            }
            let mut out = String::new();
            let _ = writeln!(out, "graph: {spec}");
            let _ = writeln!(out, "integral: {}", spectrum.is_integral());
            if let Ok(m) = spectrum.eigen_gcd() {
                let _ = writeln!(out, "eigen gcd: {m}");
            }
            for p in spectrum.pairs() {
                let _ = writeln!(
                    out,
                    "{}: lambda+ = {:.12}, lambda- = {:.12}{}",
                    p.index,
                    p.lambda_plus,
                    p.lambda_minus,
                    if p.spoke_vanishes { "  (spoke sum vanishes)" } else { "" }
                );
            }
            Ok(out.trim_end().to_string())
        }
        Command::Evolve => {
            let t = required_time(config)?;
            let h = evolve(&spec, t.value, config.method)?;
            match (&config.from, &config.to) {
                (Some(u), Some(v)) => {
                    let z = h.get(spec.vertex_index(u)?, spec.vertex_index(v)?);
                    if json {
                        let body = json!({
                            "t": t.value,
                            "time": TimeField::from(t),
                            "from": u,
                            "to": v,
                            "entry": Complex { re: z.re, im: z.im },
                            "magnitude": z.norm(),
                        });
                        Ok(pretty(&body))
                    } else {
                        Ok(format!("H[{u},{v}]({}) = {:.12} {:+.12}i  |H| = {:.12}", t.value, z.re, z.im, z.norm()))
                    }
                }
                (None, None) => {
                    let entries: Vec<Vec<Complex>> = (0..h.dim())
                        .map(|i| (0..h.dim()).map(|j| h.get(i, j)).map(|z| Complex { re: z.re, im: z.im }).collect())
                        .collect();
                    if json {
                        let body = json!({"t": t.value, "time": TimeField::from(t), "entries": entries});
                        Ok(pretty(&body))
                    } else {
                        let mut out = format!("t = {}\n", t.value);
                        for row in &entries {
                            let cells: Vec<String> =
                                row.iter().map(|z| format!("{:+.6}{:+.6}i", z.re, z.im)).collect();
                            let _ = writeln!(out, "{}", cells.join("  "));
                        }
                        Ok(out.trim_end().to_string())
                    }
                }
                _ => Err(Error::Parse("--from and --to must be given together".into())),
            }
        }
        Command::PstCheck => {
            let u = required(&config.from, "from")?;
            let v = required(&config.to, "to")?;
            let analyzer = Analyzer::new(&spec).with_tolerance(config.tolerance);
            match &config.time {
                Some(text) => {
                    let t = parse_time(text)?;
                    let check = analyzer.verify(u, v, t.value)?;
                    if json {
                        Ok(pretty(&CheckOutput {
                            graph: &spec,
                            from: u,
                            to: v,
                            time: t.into(),
                            verification: check,
                        }))
                    } else {
                        Ok(format!(
                            "{u} -> {v} at t = {}: |H| = {:.12} ({})",
                            t.exact.map(|e| e.to_string()).unwrap_or_else(|| t.value.to_string()),
                            check.magnitude,
                            if check.pass { "pass" } else { "fail" }
                        ))
                    }
                }
                None => {
                    let verdict = analyzer.decide(u, v)?;
                    if json {
                        Ok(pretty(&VerdictOutput {
                            graph: &spec,
                            verdict: &verdict,
                        }))
                    } else {
                        Ok(verdict_line(&verdict))
                    }
                }
            }
        }
        Command::PstFind => {
            let verdicts = pst::find_pst(&spec)?;
            if json {
                return Ok(pretty(&verdicts));
            }
            let mut out = format!("graph: {spec}\n");
            for v in &verdicts {
                let _ = writeln!(out, "{}", verdict_line(v));
            }
            let count = verdicts.iter().filter(|v| v.is_yes()).count();
            let _ = write!(out, "pairs with PST: {count} of {}", verdicts.len());
            Ok(out)
        }
        Command::Period => {
            let report = Analyzer::new(&spec).with_tolerance(config.tolerance).periodicity()?;
            if json {
                return Ok(pretty(&PeriodOutput {
                    graph: &spec,
                    report: &report,
                }));
            }
            Ok(match (report.periodic, report.min_period) {
                (true, Some(t)) => format!("periodic, minimum period {t}"),
                (true, None) => "periodic at every time".to_string(),
                (false, _) if report.decided => "not periodic".to_string(),
                (false, _) => "undecided (no period found numerically)".to_string(),
            })
        }
    }
}

fn pretty<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("serializable")
}

fn verdict_line(v: &PstVerdict) -> String {
    let status = match v.status {
        pst::Status::Yes => "yes",
        pst::Status::No => "no",
        pst::Status::Undecided => "undecided",
    };
    let reason = match &v.certificate {
        Certificate::PhaseSystemSolved { .. } => String::new(),
        c => format!(
            "  [{}]",
            serde_json::to_value(c).expect("serializable")["kind"]
                .as_str()
                .unwrap_or("")
        ),
    };
    match (&v.time, v.time_value) {
        (Some(t), _) => format!("{} -> {}: {status} at t = {t}{reason}", v.from, v.to),
        (None, Some(t)) => format!("{} -> {}: {status} at t = {t}{reason}", v.from, v.to),
        _ => format!("{} -> {}: {status}{reason}", v.from, v.to),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_and_nested_configs() {
        let flat = JobConfig::from_json(r#"{"family":"sunlet","n":4,"command":"pst-find"}"#).unwrap();
        assert_eq!(flat.command, Command::PstFind);
        assert_eq!(flat.tolerance, DEFAULT_TOLERANCE);
        let nested = JobConfig::from_json(
            r#"{"graph":{"group":{"factors":[2]},"R":[[1]],"L":[[1]],"S":[[0]]},
                "command":"pst-check","from":[[0],0],"to":[[1],1],"time":"1/2 pi"}"#,
        )
        .unwrap();
        assert_eq!(nested.time.as_deref(), Some("1/2 pi"));
        assert_eq!(nested.to.unwrap().layer, 1);
        assert!(JobConfig::from_json(r#"{"family":"sunlet","n":4}"#).is_err());
        assert!(JobConfig::from_json(r#"{"graph":{"family":"cone","n":4},"n":3,"command":"period"}"#).is_err());
    }

    #[test]
    fn exit_codes() {
        assert_eq!(exit_code(&Error::Parse("x".into())), 1);
        assert_eq!(exit_code(&Error::InternalConsistency { spectral: 1.0, oracle: 0.0 }), 2);
        let bad = JobConfig::from_json(r#"{"family":"cone","n":4,"command":"evolve"}"#).unwrap();
        let out = run(&bad);
        assert_eq!(out.exit_code, 1);
        assert!(out.output.contains("\"kind\": \"parse\""));
    }
}
