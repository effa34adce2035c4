//! Batch experiment runner behind the `tdomset` binary.
//!
//! Every command takes an [`ExperimentConfig`] and yields an [`Outcome`]: the
//! report text plus the process exit code (0 success, 1 a verification
//! failed, 2 the configuration could not be carried out). Reports embed the
//! config that produced them and are byte-deterministic.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_rational::Rational64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::adversary::{
    feasible, run_cut_and_paste_experiment, AdversaryError, CutAndPasteReport, Feasibility,
};
use crate::algorithms::{NamedAlgorithm, RulingParams};
use crate::graph::{parse_graph, GraphError, Label, LabeledGraph, ParseError, RingSpec};
use crate::reductions::{
    eight_colour_ring, to_dot, validate_claims, BudgetOverrides, ClaimVerdict, ColoringResult,
    ReductionError,
};
use crate::sim::{execute, AlgorithmFamily, NodeOutput, SimError};
use crate::verify::{
    check_certificates, is_k_spaced, is_proper_colouring, is_t_dominating,
    min_dominating_size_oracle, window_check_ring, Verdict, VerifyError,
};

/// Version of the JSON report and CSV column layout.
pub const REPORT_VERSION: u32 = 1;

/// Column order of sweep tables.
pub const SWEEP_COLUMNS: [&str; 9] = [
    "n",
    "T",
    "algorithm",
    "seed",
    "setSize",
    "bound",
    "ratio",
    "roundsUsed",
    "dominating",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Run,
    Verify,
    Adversary,
    Colour,
    Oracle,
    Sweep,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    #[default]
    Json,
    Csv,
}

/// Where the graph comes from.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GraphSource {
    /// A ring of `n` nodes: explicit labels in ring order, a seeded random
    /// permutation of `1..=n`, or the identity labelling when neither is set.
    Ring {
        n: usize,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        labels: Option<Vec<Label>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
    /// A graph file in the text format of [`parse_graph`].
    File { path: PathBuf },
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SweepSpec {
    pub n: Vec<usize>,
    pub t: Vec<u32>,
    pub algorithms: Vec<NamedAlgorithm>,
    pub seeds: Vec<u64>,
}

/// A declarative description of one experiment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub command: Command,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub graph: Option<GraphSource>,
    /// Label bound; defaults to the largest of `n` and the labels in use.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label_bound: Option<Label>,
    #[serde(default = "default_algorithm")]
    pub algorithm: NamedAlgorithm,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<u32>,
    /// Node count of the adversary's source rings.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub x: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_prime: Option<u32>,
    /// Member labels for `verify`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub members: Option<Vec<Label>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<SweepSpec>,
    #[serde(default)]
    pub include_ring: bool,
    #[serde(default)]
    pub dot: bool,
    #[serde(default)]
    pub format: Format,
    #[serde(default)]
    pub verbosity: u8,
}

fn default_algorithm() -> NamedAlgorithm {
    NamedAlgorithm::ChooseSmallest
}

impl ExperimentConfig {
    pub fn new(command: Command) -> Self {
        ExperimentConfig {
            command,
            graph: None,
            label_bound: None,
            algorithm: default_algorithm(),
            t: None,
            n: None,
            lambda: None,
            x: None,
            beta: None,
            t_prime: None,
            members: None,
            sweep: None,
            include_ring: false,
            dot: false,
            format: Format::Json,
            verbosity: 0,
        }
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("missing {0}")]
    Missing(&'static str),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("invalid config: {0}")]
    Config(String),
    #[error("invalid rational `{0}` (expected p/q)")]
    Rational(String),
    #[error("invalid list `{0}`")]
    List(String),
    #[error("{0}")]
    Unsupported(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Verify(#[from] VerifyError),
    #[error(transparent)]
    Reduction(#[from] ReductionError),
    #[error(transparent)]
    Adversary(#[from] AdversaryError),
}

/// Report text and exit code of one command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub exit_code: i32,
    pub output: String,
}

impl Outcome {
    fn new(ok: bool, output: String) -> Self {
        Outcome {
            exit_code: if ok { 0 } else { 1 },
            output,
        }
    }

    /// Exit code 2 with the error as a JSON report.
    pub fn error(config: Option<&ExperimentConfig>, err: &CliError) -> Self {
        #[derive(Serialize)]
        struct ErrorReport<'a> {
            version: u32,
            config: Option<&'a ExperimentConfig>,
            error: String,
        }
        Outcome {
            exit_code: 2,
            output: to_json(&ErrorReport {
                version: REPORT_VERSION,
                config,
                error: err.to_string(),
            }),
        }
    }
}

pub fn parse_rational(s: &str) -> Result<Rational64, CliError> {
    let bad = || CliError::Rational(s.to_string());
    let (p, q) = match s.trim().split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (s.trim(), "1"),
    };
    let p: i64 = p.parse().map_err(|_| bad())?;
    let q: i64 = q.parse().map_err(|_| bad())?;
    if q == 0 {
        return Err(bad());
    }
    Ok(Rational64::new(p, q))
}

/// Parses `a,b,c` where every item is a number or `start..=end[:step]`
/// (also `start..end[:step]`, end exclusive). The empty string is the empty
/// list.
pub fn parse_list<T>(s: &str) -> Result<Vec<T>, CliError>
where
    T: TryFrom<u64> + Copy,
{
    let bad = || CliError::List(s.to_string());
    let num = |t: &str| t.trim().parse::<u64>().map_err(|_| bad());
    let mut out = Vec::new();
    for item in s.split(',').map(str::trim).filter(|i| !i.is_empty()) {
        let (range, step) = match item.split_once(':') {
            Some((r, st)) => (r, num(st)?),
            None => (item, 1),
        };
        if step == 0 {
            return Err(bad());
        }
        let (lo, hi) = if let Some((a, b)) = range.split_once("..=") {
            (num(a)?, Some(num(b)?))
        } else if let Some((a, b)) = range.split_once("..") {
            let b = num(b)?;
            (num(a)?, b.checked_sub(1))
        } else {
            let v = num(range)?;
            (v, Some(v))
        };
        if let Some(hi) = hi {
            let mut v = lo;
            while v <= hi {
                out.push(T::try_from(v).map_err(|_| bad())?);
                v += step;
            }
        }
    }
    Ok(out)
}

fn to_json<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("reports serialize");
    s.push('\n');
    s
}

fn csv_header(config: &ExperimentConfig) -> String {
    format!(
        "# tdomset report v{REPORT_VERSION} config={}\n",
        serde_json::to_string(config).expect("configs serialize")
    )
}

fn require_t(config: &ExperimentConfig) -> Result<u32, CliError> {
    config.t.ok_or(CliError::Missing("round budget T"))
}

fn rational(field: &Option<String>, what: &'static str) -> Result<Rational64, CliError> {
    parse_rational(field.as_deref().ok_or(CliError::Missing(what))?)
}

/// Builds the configured graph.
pub fn load_graph(config: &ExperimentConfig) -> Result<LabeledGraph, CliError> {
    match config.graph.as_ref().ok_or(CliError::Missing("graph"))? {
        GraphSource::Ring { n, labels, seed } => {
            let spec = match (labels, seed) {
                (Some(_), Some(_)) => {
                    return Err(CliError::Config("give labels or a seed, not both".into()))
                }
                (Some(l), None) => {
                    if l.len() != *n {
                        return Err(GraphError::LabelCount {
                            expected: *n,
                            got: l.len(),
                        }
                        .into());
                    }
                    RingSpec::new(l.clone())?
                }
                (None, Some(s)) => RingSpec::shuffled(*n, *s)?,
                (None, None) => RingSpec::identity(*n)?,
            };
            let bound = config
                .label_bound
                .unwrap_or_else(|| spec.max_label().max(*n as Label));
            Ok(spec.to_graph(bound)?)
        }
        GraphSource::File { path } => {
            let shown = path.display().to_string();
            let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
                path: shown.clone(),
                message: e.to_string(),
            })?;
            let g = parse_graph(&text).map_err(|source| CliError::Parse {
                path: shown,
                source,
            })?;
            if config.label_bound.is_some_and(|b| b != g.label_bound()) {
                return Err(CliError::Config(
                    "the label bound is fixed by the graph file".into(),
                ));
            }
            Ok(g)
        }
    }
}

fn ceil_div(a: usize, b: usize) -> usize {
    a.div_ceil(b)
}

/// Size promise of each algorithm, when it has one.
fn size_promise(alg: NamedAlgorithm, g: &LabeledGraph, t: u32) -> Option<usize> {
    let n = g.node_count();
    match alg {
        NamedAlgorithm::ChooseSmallest => Some(n.saturating_sub((t / 2) as usize).max(1)),
        NamedAlgorithm::RulingSet => match RulingParams::new(t, g.label_bound()).k {
            Some(k) => Some((n / (k as usize + 1)).max(1)),
            None => Some(n),
        },
        NamedAlgorithm::ConstantOne => Some(n),
        NamedAlgorithm::ConstantZero => None,
    }
}

#[derive(Debug, Serialize)]
struct RunReport<'a> {
    version: u32,
    config: &'a ExperimentConfig,
    algorithm: String,
    parameters: BTreeMap<String, i64>,
    n: usize,
    label_bound: Label,
    t: u32,
    rounds_used: u32,
    rounds_within_budget: bool,
    size: usize,
    size_promise: Option<usize>,
    size_within_promise: Option<bool>,
    /// `⌈n/(2T+1)⌉`, the least size any `T`-dominating set of a ring has.
    ring_lower_bound: Option<usize>,
    members: BTreeSet<Label>,
    dominating: Verdict,
    certificates: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    spacing: Option<Verdict>,
    passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    outputs: Option<BTreeMap<Label, NodeOutput>>,
}

/// Executes the algorithm and verifies domination, size, rounds and
/// certificates.
pub fn cmd_run(config: &ExperimentConfig) -> Result<Outcome, CliError> {
    let g = load_graph(config)?;
    let t = require_t(config)?;
    let alg = config.algorithm.instantiate(t, g.label_bound());
    let res = execute(alg.as_ref(), &g, t)?;
    let dominating = is_t_dominating(&g, &res.member_set, t)?;
    let certificates = check_certificates(&g, &res, t);
    let spacing = match (config.algorithm, RulingParams::new(t, g.label_bound()).k) {
        (NamedAlgorithm::RulingSet, Some(k)) if res.size() > 1 => {
            Some(is_k_spaced(&g, &res.member_set, k)?)
        }
        _ => None,
    };
    let promise = size_promise(config.algorithm, &g, t);
    let size_ok = promise.map(|p| res.size() <= p);
    let passed = dominating.verdict
        && certificates.verdict
        && res.rounds_used <= t
        && size_ok.unwrap_or(true)
        && spacing.as_ref().is_none_or(|v| v.verdict);
    if config.format == Format::Csv {
        let mut w = csv::Writer::from_writer(csv_header(config).into_bytes());
        w.write_record(["label", "bit", "path"]).map_err(csv_err)?;
        let mut rows: Vec<(Label, &NodeOutput)> =
            g.nodes().map(|v| (g.label(v), &res.outputs[v])).collect();
        rows.sort_by_key(|r| r.0);
        for (l, o) in rows {
            let path = o.path_certificate.as_ref().map_or(String::new(), |p| {
                p.iter().map(Label::to_string).collect::<Vec<_>>().join(" ")
            });
            w.write_record([l.to_string(), u8::from(o.bit).to_string(), path])
                .map_err(csv_err)?;
        }
        return Ok(Outcome::new(passed, finish_csv(w)?));
    }
    let report = RunReport {
        version: REPORT_VERSION,
        config,
        algorithm: alg.name().to_string(),
        parameters: alg.parameters(),
        n: g.node_count(),
        label_bound: g.label_bound(),
        t,
        rounds_used: res.rounds_used,
        rounds_within_budget: res.rounds_used <= t,
        size: res.size(),
        size_promise: promise,
        size_within_promise: size_ok,
        ring_lower_bound: g
            .is_ring()
            .then(|| ceil_div(g.node_count(), 2 * t as usize + 1)),
        members: res.member_labels(&g),
        dominating,
        certificates,
        spacing,
        passed,
        outputs: (config.verbosity > 0).then(|| {
            g.nodes()
                .map(|v| (g.label(v), res.outputs[v].clone()))
                .collect()
        }),
    };
    Ok(Outcome::new(passed, to_json(&report)))
}

/// Checks a given member set for `T`-domination, and on rings also by the
/// window criterion.
pub fn cmd_verify(config: &ExperimentConfig) -> Result<Outcome, CliError> {
    #[derive(Serialize)]
    struct VerifyReport<'a> {
        version: u32,
        config: &'a ExperimentConfig,
        n: usize,
        t: u32,
        size: usize,
        dominating: Verdict,
        #[serde(skip_serializing_if = "Option::is_none")]
        windows: Option<Verdict>,
        passed: bool,
    }
    let g = load_graph(config)?;
    let t = require_t(config)?;
    let labels = config
        .members
        .as_ref()
        .ok_or(CliError::Missing("members"))?;
    let set = labels
        .iter()
        .map(|&l| {
            g.node_of(l)
                .ok_or_else(|| CliError::Config(format!("label {l} is not in the graph")))
        })
        .collect::<Result<BTreeSet<_>, _>>()?;
    let dominating = is_t_dominating(&g, &set, t)?;
    let windows = match g.ring_spec() {
        Some(spec) if spec.len() > 2 * t as usize => {
            let by_pos: BTreeSet<usize> = spec
                .labels()
                .iter()
                .enumerate()
                .filter(|(_, l)| labels.contains(l))
                .map(|(p, _)| p)
                .collect();
            Some(window_check_ring(&spec, &by_pos, t)?)
        }
        _ => None,
    };
    let passed = dominating.verdict;
    if config.format == Format::Csv {
        return Err(csv_unsupported(config.command));
    }
    Ok(Outcome::new(
        passed,
        to_json(&VerifyReport {
            version: REPORT_VERSION,
            config,
            n: g.node_count(),
            t,
            size: set.len(),
            dominating,
            windows,
            passed,
        }),
    ))
}

/// Builds the adversarial ring and reports whether the lower bound is
/// certified. Infeasible parameters are a config error.
pub fn cmd_adversary(config: &ExperimentConfig) -> Result<Outcome, CliError> {
    #[derive(Serialize)]
    struct AdversaryReport<'a> {
        version: u32,
        config: &'a ExperimentConfig,
        feasibility: Feasibility,
        #[serde(skip_serializing_if = "Option::is_none")]
        report: Option<CutAndPasteReport>,
        /// Set when the candidate fails on a ring of the construction.
        #[serde(skip_serializing_if = "Option::is_none")]
        falsified: Option<String>,
        #[serde(skip_serializing_if = "Option::is_none")]
        witness: Option<Verdict>,
    }
    if config.format == Format::Csv {
        return Err(csv_unsupported(config.command));
    }
    let n = config.n.ok_or(CliError::Missing("n"))?;
    let t = require_t(config)?;
    let lambda = rational(&config.lambda, "λ")?;
    let f = feasible(n, t, lambda);
    if !f.feasible {
        let reason = f.reason.clone().unwrap_or_default();
        return Err(AdversaryError::Infeasible(reason).into());
    }
    let mut out = AdversaryReport {
        version: REPORT_VERSION,
        config,
        feasibility: f,
        report: None,
        falsified: None,
        witness: None,
    };
    match run_cut_and_paste_experiment(&config.algorithm, n, t, lambda, config.include_ring) {
        Ok(r) => {
            let ok = r.certified;
            out.report = Some(r);
            Ok(Outcome::new(ok, to_json(&out)))
        }
        Err(e @ AdversaryError::NotDominating { .. }) => {
            if let AdversaryError::NotDominating { verdict, .. } = &e {
                out.witness = Some(verdict.clone());
            }
            out.falsified = Some(e.to_string());
            Ok(Outcome::new(false, to_json(&out)))
        }
        Err(e) => Err(e.into()),
    }
}

/// Runs the eight-colour reduction and checks the colouring and the claims
/// it rests on.
pub fn cmd_colour(config: &ExperimentConfig) -> Result<Outcome, CliError> {
    #[derive(Serialize)]
    struct ColourReport<'a> {
        version: u32,
        config: &'a ExperimentConfig,
        result: ColoringResult,
        claims: Vec<ClaimVerdict>,
        /// `None` when some node could not pick a colour.
        proper: Option<Verdict>,
        #[serde(skip_serializing_if = "Option::is_none")]
        dot: Option<String>,
    }
    if config.format == Format::Csv {
        return Err(csv_unsupported(config.command));
    }
    let g = load_graph(config)?;
    let ring = g
        .ring_spec()
        .ok_or_else(|| CliError::Unsupported("colour needs a ring".into()))?;
    let x = rational(&config.x, "x")?;
    let beta = parse_rational(config.beta.as_deref().unwrap_or("1"))?;
    let overrides = BudgetOverrides {
        t: config.t,
        t_prime: config.t_prime,
    };
    let result = eight_colour_ring(&config.algorithm, &ring, x, beta, overrides)?;
    let claims = validate_claims(
        &ring,
        &result.memberships,
        &result.survivorships,
        &result.params,
    )
    .verdicts;
    let proper = if result.colors.iter().all(Option::is_some) {
        Some(is_proper_colouring(
            &ring.to_graph(ring.len() as Label)?,
            &result.colors,
            8,
        )?)
    } else {
        None
    };
    let ok = proper.as_ref().is_some_and(|v| v.verdict);
    let dot = config.dot.then(|| to_dot(&ring, &result.colors));
    Ok(Outcome::new(
        ok,
        to_json(&ColourReport {
            version: REPORT_VERSION,
            config,
            result,
            claims,
            proper,
            dot,
        }),
    ))
}

/// Exhaustive minimum `T`-dominating set size, compared on rings with
/// `⌈n/(2T+1)⌉`.
pub fn cmd_oracle(config: &ExperimentConfig) -> Result<Outcome, CliError> {
    #[derive(Serialize)]
    struct OracleReport<'a> {
        version: u32,
        config: &'a ExperimentConfig,
        n: usize,
        t: u32,
        minimum: usize,
        ring_formula: Option<usize>,
        agrees: Option<bool>,
    }
    if config.format == Format::Csv {
        return Err(csv_unsupported(config.command));
    }
    let g = load_graph(config)?;
    let t = require_t(config)?;
    let minimum = min_dominating_size_oracle(&g, t)?;
    let ring_formula = g
        .is_ring()
        .then(|| ceil_div(g.node_count(), 2 * t as usize + 1));
    let agrees = ring_formula.map(|f| f == minimum);
    Ok(Outcome::new(
        agrees.unwrap_or(true),
        to_json(&OracleReport {
            version: REPORT_VERSION,
            config,
            n: g.node_count(),
            t,
            minimum,
            ring_formula,
            agrees,
        }),
    ))
}

/// One row of a sweep table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub n: usize,
    #[serde(rename = "T")]
    pub t: u32,
    pub algorithm: NamedAlgorithm,
    pub seed: u64,
    #[serde(rename = "setSize")]
    pub set_size: usize,
    /// `⌈n/(2T+1)⌉`.
    pub bound: usize,
    /// `setSize / bound` with four decimals.
    pub ratio: String,
    #[serde(rename = "roundsUsed")]
    pub rounds_used: u32,
    pub dominating: bool,
    #[serde(skip)]
    pub within_promise: bool,
}

/// Rows in `algorithm, n, T, seed` order.
pub fn sweep_rows(spec: &SweepSpec) -> Result<Vec<SweepRow>, CliError> {
    let mut cells = Vec::new();
    for &alg in &spec.algorithms {
        for &n in &spec.n {
            for &t in &spec.t {
                for &seed in &spec.seeds {
                    cells.push((alg, n, t, seed));
                }
            }
        }
    }
    cells
        .into_par_iter()
        .map(|(alg, n, t, seed)| {
            let g = RingSpec::shuffled(n, seed)?.to_graph(n as Label)?;
            let res = execute(alg.instantiate(t, n as Label).as_ref(), &g, t)?;
            let bound = ceil_div(n, 2 * t as usize + 1);
            let within_promise = size_promise(alg, &g, t).is_none_or(|p| res.size() <= p);
            Ok(SweepRow {
                n,
                t,
                algorithm: alg,
                seed,
                set_size: res.size(),
                bound,
                ratio: format!("{:.4}", res.size() as f64 / bound as f64),
                rounds_used: res.rounds_used,
                dominating: is_t_dominating(&g, &res.member_set, t)?.verdict,
                within_promise,
            })
        })
        .collect()
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Unsupported(format!("csv: {e}"))
}

fn finish_csv(w: csv::Writer<Vec<u8>>) -> Result<String, CliError> {
    let bytes = w
        .into_inner()
        .map_err(|e| CliError::Unsupported(format!("csv: {e}")))?;
    Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
}

fn csv_unsupported(c: Command) -> CliError {
    CliError::Unsupported(format!(
        "csv output is available for run and sweep, not {}",
        serde_json::to_value(c).expect("serializes")
    ))
}

/// Size-versus-budget table over generated rings.
pub fn cmd_sweep(config: &ExperimentConfig) -> Result<Outcome, CliError> {
    #[derive(Serialize)]
    struct SweepReport<'a> {
        version: u32,
        config: &'a ExperimentConfig,
        columns: [&'static str; 9],
        rows: &'a [SweepRow],
    }
    let spec = config
        .sweep
        .as_ref()
        .ok_or(CliError::Missing("sweep ranges"))?;
    let rows = sweep_rows(spec)?;
    let ok = rows.iter().all(|r| r.dominating && r.within_promise);
    let output = match config.format {
        Format::Csv => {
            let mut w = csv::WriterBuilder::new()
                .has_headers(false)
                .from_writer(csv_header(config).into_bytes());
            w.write_record(SWEEP_COLUMNS).map_err(csv_err)?;
            for r in &rows {
                w.serialize(r).map_err(csv_err)?;
            }
            finish_csv(w)?
        }
        Format::Json => to_json(&SweepReport {
            version: REPORT_VERSION,
            config,
            columns: SWEEP_COLUMNS,
            rows: &rows,
        }),
    };
    Ok(Outcome::new(ok, output))
}

/// Dispatches on `config.command`; errors become exit code 2.
pub fn run_config(config: &ExperimentConfig) -> Outcome {
    let res = match config.command {
        Command::Run => cmd_run(config),
        Command::Verify => cmd_verify(config),
        Command::Adversary => cmd_adversary(config),
        Command::Colour => cmd_colour(config),
        Command::Oracle => cmd_oracle(config),
        Command::Sweep => cmd_sweep(config),
    };
    res.unwrap_or_else(|e| Outcome::error(Some(config), &e))
}

#[derive(Debug, Parser)]
#[command(
    name = "tdomset",
    version,
    about = "T-dominating sets on rings in the LOCAL model"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: CliCommand,
}

#[derive(Debug, Subcommand)]
pub enum CliCommand {
    /// Execute an algorithm and verify its output.
    Run {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long = "alg", default_value = "choose-smallest")]
        alg: NamedAlgorithm,
        #[arg(long = "T")]
        t: u32,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Check a member set for T-domination.
    Verify {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long = "T")]
        t: u32,
        /// Member labels, comma separated.
        #[arg(long, value_delimiter = ',')]
        members: Vec<Label>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Build the adversarial ring against an algorithm.
    Adversary {
        #[arg(long)]
        n: u64,
        #[arg(long = "T")]
        t: u32,
        /// p/q
        #[arg(long)]
        lambda: String,
        #[arg(long = "alg", default_value = "choose-smallest")]
        alg: NamedAlgorithm,
        /// Include the composed ring in the report.
        #[arg(long)]
        include_ring: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Eight-colour a ring with a dominating set algorithm.
    Colour {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long = "alg", default_value = "choose-smallest")]
        alg: NamedAlgorithm,
        /// Size ratio of the algorithm, p/q.
        #[arg(long)]
        x: String,
        /// Round coefficient, p/q.
        #[arg(long, default_value = "1")]
        beta: String,
        /// Override the larger budget.
        #[arg(long = "T")]
        t: Option<u32>,
        /// Override the smaller budget.
        #[arg(long = "T-prime")]
        t_prime: Option<u32>,
        /// Include a Graphviz rendering.
        #[arg(long)]
        dot: bool,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Exhaustive minimum T-dominating set size.
    Oracle {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long = "T")]
        t: u32,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Set sizes over ranges of n and T.
    Sweep {
        /// Algorithms, comma separated.
        #[arg(long = "alg", value_delimiter = ',', default_value = "choose-smallest")]
        alg: Vec<NamedAlgorithm>,
        /// List of ring sizes, e.g. `50..=400:50`.
        #[arg(long, allow_hyphen_values = true)]
        n: String,
        /// List of budgets, e.g. `2,4,8,16`.
        #[arg(long = "T")]
        t: String,
        /// Label permutation seeds.
        #[arg(long, default_value = "0")]
        seeds: String,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run a saved config file.
    Replay {
        config: PathBuf,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct GraphArgs {
    /// Ring with this many nodes.
    #[arg(long, conflicts_with = "graph")]
    pub ring: Option<usize>,
    /// Ring labels in ring order, comma separated.
    #[arg(long, value_delimiter = ',', requires = "ring")]
    pub labels: Option<Vec<Label>>,
    /// Seed of a random label permutation.
    #[arg(long, requires = "ring", conflicts_with = "labels")]
    pub seed: Option<u64>,
    /// Graph file.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    /// Label bound.
    #[arg(long = "L")]
    pub label_bound: Option<Label>,
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    #[arg(long, value_enum, default_value = "json")]
    pub format: Format,
    #[arg(short, long, action = clap::ArgAction::Count)]
    pub verbose: u8,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Print the config instead of running it.
    #[arg(long)]
    pub dump_config: bool,
}

impl GraphArgs {
    fn source(&self) -> Result<GraphSource, CliError> {
        match (&self.graph, self.ring) {
            (Some(path), None) => Ok(GraphSource::File { path: path.clone() }),
            (None, Some(n)) => Ok(GraphSource::Ring {
                n,
                labels: self.labels.clone(),
                seed: self.seed,
            }),
            _ => Err(CliError::Missing("--ring N or --graph FILE")),
        }
    }
}

/// What the binary should do after parsing.
pub struct Invocation {
    pub config: ExperimentConfig,
    pub output: Option<PathBuf>,
    pub dump_config: bool,
}

fn apply_common(mut c: ExperimentConfig, common: CommonArgs) -> Invocation {
    c.format = common.format;
    c.verbosity = common.verbose;
    Invocation {
        config: c,
        output: common.output,
        dump_config: common.dump_config,
    }
}

impl CliCommand {
    pub fn into_invocation(self) -> Result<Invocation, CliError> {
        Ok(match self {
            CliCommand::Run {
                graph,
                alg,
                t,
                common,
            } => {
                let mut c = ExperimentConfig::new(Command::Run);
                c.graph = Some(graph.source()?);
                c.label_bound = graph.label_bound;
                c.algorithm = alg;
                c.t = Some(t);
                apply_common(c, common)
            }
            CliCommand::Verify {
                graph,
                t,
                members,
                common,
            } => {
                let mut c = ExperimentConfig::new(Command::Verify);
                c.graph = Some(graph.source()?);
                c.label_bound = graph.label_bound;
                c.t = Some(t);
                c.members = Some(members);
                apply_common(c, common)
            }
            CliCommand::Adversary {
                n,
                t,
                lambda,
                alg,
                include_ring,
                common,
            } => {
                let mut c = ExperimentConfig::new(Command::Adversary);
                c.n = Some(n);
                c.t = Some(t);
                c.lambda = Some(lambda);
                c.algorithm = alg;
                c.include_ring = include_ring;
                apply_common(c, common)
            }
            CliCommand::Colour {
                graph,
                alg,
                x,
                beta,
                t,
                t_prime,
                dot,
                common,
            } => {
                let mut c = ExperimentConfig::new(Command::Colour);
                c.graph = Some(graph.source()?);
                c.label_bound = graph.label_bound;
                c.algorithm = alg;
                c.x = Some(x);
                c.beta = Some(beta);
                c.t = t;
                c.t_prime = t_prime;
                c.dot = dot;
                apply_common(c, common)
            }
            CliCommand::Oracle { graph, t, common } => {
                let mut c = ExperimentConfig::new(Command::Oracle);
                c.graph = Some(graph.source()?);
                c.label_bound = graph.label_bound;
                c.t = Some(t);
                apply_common(c, common)
            }
            CliCommand::Sweep {
                alg,
                n,
                t,
                seeds,
                common,
            } => {
                let mut c = ExperimentConfig::new(Command::Sweep);
                c.sweep = Some(SweepSpec {
                    n: parse_list(&n)?,
                    t: parse_list(&t)?,
                    algorithms: alg,
                    seeds: parse_list(&seeds)?,
                });
                apply_common(c, common)
            }
            CliCommand::Replay { config, output } => {
                let shown = config.display().to_string();
                let text = std::fs::read_to_string(&config).map_err(|e| CliError::Io {
                    path: shown.clone(),
                    message: e.to_string(),
                })?;
                let config = serde_json::from_str(&text)
                    .map_err(|e| CliError::Config(format!("{shown}: {e}")))?;
                Invocation {
                    config,
                    output,
                    dump_config: false,
                }
            }
        })
    }
}

/// Entry point of the binary: parses `args`, runs, and returns what to print
/// and the exit code.
pub fn main_with_args<I, S>(args: I) -> Outcome
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            return Outcome {
                exit_code: code,
                output: e.render().to_string(),
            };
        }
    };
    let inv = match cli.command.into_invocation() {
        Ok(i) => i,
        Err(e) => return Outcome::error(None, &e),
    };
    if inv.dump_config {
        return Outcome::new(true, to_json(&inv.config));
    }
    let out = run_config(&inv.config);
    match &inv.output {
        Some(path) => match std::fs::write(path, &out.output) {
            Ok(()) => Outcome {
                exit_code: out.exit_code,
                output: String::new(),
            },
            Err(e) => Outcome::error(
                Some(&inv.config),
                &CliError::Io {
                    path: path.display().to_string(),
                    message: e.to_string(),
                },
            ),
        },
        None => out,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ring_config(cmd: Command, n: usize, t: u32) -> ExperimentConfig {
        let mut c = ExperimentConfig::new(cmd);
        c.graph = Some(GraphSource::Ring {
            n,
            labels: None,
            seed: Some(3),
        });
        c.t = Some(t);
        c
    }

    #[test]
    fn lists() {
        assert_eq!(parse_list::<usize>("50..=400:50").unwrap().len(), 8);
        assert_eq!(parse_list::<u32>("2,4,8,16").unwrap(), vec![2, 4, 8, 16]);
        assert_eq!(parse_list::<u32>("1..4").unwrap(), vec![1, 2, 3]);
        assert!(parse_list::<u32>("").unwrap().is_empty());
        assert!(parse_list::<u32>("5..=2").unwrap().is_empty());
        assert!(parse_list::<u32>("0..0").unwrap().is_empty());
        assert!(parse_list::<u32>("x").is_err());
        assert!(parse_list::<u32>("1..=3:0").is_err());
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("7/5").unwrap(), Rational64::new(7, 5));
        assert_eq!(parse_rational("2").unwrap(), Rational64::from_integer(2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("0.5").is_err());
    }

    #[test]
    fn config_round_trip() {
        let mut c = ring_config(Command::Sweep, 10, 2);
        c.sweep = Some(SweepSpec {
            n: vec![10, 20],
            t: vec![1],
            algorithms: vec![NamedAlgorithm::RulingSet],
            seeds: vec![0, 1],
        });
        c.lambda = Some("7/5".into());
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(serde_json::from_str::<ExperimentConfig>(&s).unwrap(), c);
    }

    #[test]
    fn run_reports_and_exit_codes() {
        let c = ring_config(Command::Run, 100, 6);
        let out = run_config(&c);
        assert_eq!(out.exit_code, 0, "{}", out.output);
        let v: serde_json::Value = serde_json::from_str(&out.output).unwrap();
        assert!(v["size"].as_u64().unwrap() <= 97);
        assert_eq!(v["dominating"]["verdict"], true);
        assert_eq!(v["config"]["t"], 6);
        assert_eq!(run_config(&c), out);

        let mut zero = c.clone();
        zero.algorithm = NamedAlgorithm::ConstantZero;
        assert_eq!(run_config(&zero).exit_code, 1);

        let mut missing = c;
        missing.t = None;
        assert_eq!(run_config(&missing).exit_code, 2);
    }

    #[test]
    fn explicit_labels() {
        let mut c = ExperimentConfig::new(Command::Run);
        c.graph = Some(GraphSource::Ring {
            n: 7,
            labels: Some(vec![3, 1, 4, 5, 9, 2, 6]),
            seed: None,
        });
        c.t = Some(2);
        let v: serde_json::Value = serde_json::from_str(&run_config(&c).output).unwrap();
        assert_eq!(v["members"], serde_json::json!([1, 2, 4]));
        assert_eq!(v["label_bound"], 9);
    }

    #[test]
    fn adversary_errors() {
        let mut c = ExperimentConfig::new(Command::Adversary);
        c.n = Some(144);
        c.t = Some(4);
        c.lambda = Some("7/5".into());
        let out = run_config(&c);
        assert_eq!(out.exit_code, 2);
        assert!(out.output.contains("< 8T+4"), "{}", out.output);
        c.lambda = Some("3/2".into());
        let out = run_config(&c);
        assert_eq!(out.exit_code, 2);
        assert!(out.output.contains("λ must be < 3/2"), "{}", out.output);
    }

    #[test]
    fn adversary_small_instance() {
        let mut c = ExperimentConfig::new(Command::Adversary);
        c.n = Some(120);
        c.t = Some(1);
        c.lambda = Some("1".into());
        assert_eq!(run_config(&c).exit_code, 0);
        c.algorithm = NamedAlgorithm::ConstantZero;
        let out = run_config(&c);
        assert_eq!(out.exit_code, 1);
        assert!(out.output.contains("falsified"));
    }

    #[test]
    fn sweep_tables() {
        let mut c = ExperimentConfig::new(Command::Sweep);
        c.format = Format::Csv;
        c.sweep = Some(SweepSpec {
            n: vec![20, 30],
            t: vec![2, 4],
            algorithms: vec![NamedAlgorithm::ChooseSmallest],
            seeds: vec![0],
        });
        let out = run_config(&c);
        assert_eq!(out.exit_code, 0);
        let lines: Vec<&str> = out.output.lines().collect();
        assert!(lines[0].starts_with("# tdomset report v1 config="));
        assert_eq!(lines[1], SWEEP_COLUMNS.join(","));
        assert_eq!(lines.len(), 6);
        assert!(lines[2].starts_with("20,2,choose-smallest,0,"));

        c.sweep = Some(SweepSpec::default());
        let out = run_config(&c);
        assert_eq!(out.exit_code, 0);
        assert_eq!(out.output.lines().count(), 2);
    }

    #[test]
    fn oracle_and_verify() {
        let out = run_config(&ring_config(Command::Oracle, 11, 2));
        assert_eq!(out.exit_code, 0);
        assert!(out.output.contains("\"minimum\": 3"));

        let mut c = ExperimentConfig::new(Command::Verify);
        c.graph = Some(GraphSource::Ring {
            n: 10,
            labels: None,
            seed: None,
        });
        c.t = Some(2);
        c.members = Some(vec![1, 6]);
        assert_eq!(run_config(&c).exit_code, 0);
        c.members = Some(vec![1, 4]);
        let out = run_config(&c);
        assert_eq!(out.exit_code, 1);
        assert!(out.output.contains("\"windows\""));
        c.members = Some(vec![11]);
        assert_eq!(run_config(&c).exit_code, 2);
    }

    #[test]
    fn colour_command() {
        let mut c = ring_config(Command::Colour, 150, 4);
        c.t_prime = Some(2);
        c.x = Some("1/4".into());
        let out = run_config(&c);
        assert_eq!(out.exit_code, 0, "{}", out.output);
        c.x = Some("2".into());
        assert_eq!(run_config(&c).exit_code, 2);
    }

    #[test]
    fn clap_surface() {
        let out = main_with_args([
            "tdomset",
            "run",
            "--ring",
            "100",
            "--alg",
            "choose-smallest",
            "--T",
            "6",
        ]);
        assert_eq!(out.exit_code, 0, "{}", out.output);
        let out = main_with_args([
            "tdomset", "run", "--ring", "10", "--alg", "nope", "--T", "1",
        ]);
        assert_eq!(out.exit_code, 2);
        let out = main_with_args([
            "tdomset", "sweep", "--n", "", "--T", "1..=3", "--format", "csv",
        ]);
        assert_eq!(out.exit_code, 0, "{}", out.output);
        let out = main_with_args(["tdomset", "run", "--ring", "9", "--T", "1", "--dump-config"]);
        let c: ExperimentConfig = serde_json::from_str(&out.output).unwrap();
        assert_eq!(c.command, Command::Run);
    }
}
