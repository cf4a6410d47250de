//! End-to-end runs: instance generation, full vs. reduced optimization,
//! sampling, approximation ratios and report tables.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use serde::Serialize;

use crate::automorphism::edge_classes;
use crate::error::{Error, Result};
use crate::graph::{balanced_tree, full_rary_tree, parse_edge_list, path_graph, star_graph, Graph};
use crate::hamiltonian::{
    cut_value_of_index, full_hamiltonian, reduced_hamiltonian, rounded_reduction_percentage,
    Convention, IsingHamiltonian,
};
use crate::optimizer::{optimize_qaoa, EvaluationMode, OptimizerConfig};
use crate::simulator::{AnsatzParams, QaoaAnsatz, DEFAULT_QUBIT_CAP};

pub const DEFAULT_SHOTS: usize = 4096;

/// Largest non-bipartite graph [`classical_max_cut`] will enumerate.
pub const BRUTE_FORCE_CUT_MAX_VERTICES: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GraphSpec {
    /// Full binary tree on `n` vertices, breadth-first labels.
    Binary(usize),
    /// Balanced tree with branching `r` and height `h`.
    Balanced {
        r: usize,
        h: usize,
    },
    Star(usize),
    Path(usize),
    File(PathBuf),
}

impl GraphSpec {
    pub fn build(&self) -> Result<Graph> {
        match self {
            GraphSpec::Binary(n) => full_rary_tree(2, *n),
            GraphSpec::Balanced { r, h } => balanced_tree(*r, *h),
            GraphSpec::Star(n) => star_graph(*n),
            GraphSpec::Path(n) => path_graph(*n),
            GraphSpec::File(path) => parse_edge_list(&std::fs::read_to_string(path)?),
        }
    }

    /// Row label such as `binary(15,14)`.
    pub fn label(&self, g: &Graph) -> String {
        let kind = match self {
            GraphSpec::Binary(_) => "binary".to_string(),
            GraphSpec::Balanced { .. } => "balanced".to_string(),
            GraphSpec::Star(_) => "star".to_string(),
            GraphSpec::Path(_) => "path".to_string(),
            GraphSpec::File(p) => p
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "graph".into()),
        };
        format!("{kind}({},{})", g.n(), g.m())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunMode {
    Full,
    Reduced,
    Both,
}

impl RunMode {
    fn runs_full(self) -> bool {
        matches!(self, RunMode::Full | RunMode::Both)
    }

    fn runs_reduced(self) -> bool {
        matches!(self, RunMode::Reduced | RunMode::Both)
    }
}

impl std::str::FromStr for RunMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(RunMode::Full),
            "reduced" => Ok(RunMode::Reduced),
            "both" => Ok(RunMode::Both),
            other => Err(Error::InvalidArgument(format!(
                "unknown mode {other:?} (full, reduced, both)"
            ))),
        }
    }
}

/// How a batch of samples is turned into one cut value.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RatioEstimator {
    /// Largest cut among all samples.
    BestSampled,
    /// Cut of the most frequent sample (ties: smallest basis index).
    MostLikely,
}

impl std::str::FromStr for RatioEstimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "best" => Ok(RatioEstimator::BestSampled),
            "most-likely" => Ok(RatioEstimator::MostLikely),
            other => Err(Error::InvalidArgument(format!(
                "unknown estimator {other:?} (best, most-likely)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Markdown,
}

impl std::str::FromStr for ReportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            other => Err(Error::InvalidArgument(format!(
                "unknown format {other:?} (csv, markdown)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub graph: GraphSpec,
    pub convention: Convention,
    pub layers: usize,
    pub shots: usize,
    pub seed: u64,
    pub optimizer: OptimizerConfig,
    pub mode: RunMode,
    pub evaluation: EvaluationMode,
    pub estimator: RatioEstimator,
    /// Fill the wall-time columns. Off by default so reports are
    /// byte-reproducible.
    pub record_timings: bool,
    pub qubit_cap: usize,
}

impl RunConfig {
    pub fn new(graph: GraphSpec) -> Self {
        Self {
            graph,
            convention: Convention::MaxCut,
            layers: 1,
            shots: DEFAULT_SHOTS,
            seed: 0,
            optimizer: OptimizerConfig::default(),
            mode: RunMode::Both,
            evaluation: EvaluationMode::Lightcone,
            estimator: RatioEstimator::BestSampled,
            record_timings: false,
            qubit_cap: DEFAULT_QUBIT_CAP,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.layers == 0 {
            return Err(Error::InvalidArgument("p must be >= 1".into()));
        }
        if self.shots == 0 {
            return Err(Error::InvalidArgument("shots must be >= 1".into()));
        }
        self.optimizer.validate()
    }
}

/// One optimized mode (full or reduced observable) of an instance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModeOutcome {
    pub terms: usize,
    pub best_params: Vec<f64>,
    /// Maximized `⟨H⟩` at `best_params`.
    pub expectation: f64,
    pub best_cut: usize,
    pub ratio: f64,
    pub wall_time: f64,
    pub evaluations: usize,
    pub simulated_qubits: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InstanceRecord {
    pub graph: String,
    pub n: usize,
    pub m: usize,
    pub classes: usize,
    pub terms_red: usize,
    pub terms_full: usize,
    pub reduction_pct: f64,
    pub c_max: usize,
    pub seed: u64,
    pub full: Option<ModeOutcome>,
    pub reduced: Option<ModeOutcome>,
    pub timings: bool,
    /// Peak resident memory of the process so far (best effort, Linux only).
    pub peak_rss_bytes: Option<u64>,
}

/// Maximum cut: `|E|` for bipartite graphs, otherwise exhaustive search.
pub fn classical_max_cut(g: &Graph) -> Result<usize> {
    if g.bipartition().is_some() {
        return Ok(g.m());
    }
    if g.n() > BRUTE_FORCE_CUT_MAX_VERTICES {
        return Err(Error::Resource(format!(
            "exhaustive max-cut over {} vertices (limit {BRUTE_FORCE_CUT_MAX_VERTICES})",
            g.n()
        )));
    }
    // Fixing the last vertex to side 0 halves the search.
    Ok((0..1usize << (g.n() - 1))
        .map(|x| cut_value_of_index(g, x))
        .max()
        .unwrap_or(0))
}

pub fn approximation_ratio(best_cut: usize, c_max: usize) -> Result<f64> {
    if c_max == 0 {
        return Err(Error::InvalidArgument(
            "maximum cut is 0; ratio undefined".into(),
        ));
    }
    if best_cut > c_max {
        return Err(Error::Contract(format!(
            "cut {best_cut} exceeds the maximum {c_max}"
        )));
    }
    Ok(best_cut as f64 / c_max as f64)
}

/// Cut value picked from `samples` by `estimator`.
pub fn estimate_cut(g: &Graph, samples: &[usize], estimator: RatioEstimator) -> Result<usize> {
    if samples.is_empty() {
        return Err(Error::InvalidArgument("no samples".into()));
    }
    Ok(match estimator {
        RatioEstimator::BestSampled => samples
            .iter()
            .map(|&x| cut_value_of_index(g, x))
            .max()
            .unwrap_or(0),
        RatioEstimator::MostLikely => {
            let mut counts: HashMap<usize, usize> = HashMap::new();
            for &x in samples {
                *counts.entry(x).or_default() += 1;
            }
            let (&mode, _) = counts
                .iter()
                .max_by(|a, b| a.1.cmp(b.1).then(b.0.cmp(a.0)))
                .expect("non-empty");
            cut_value_of_index(g, mode)
        }
    })
}

/// Class count and term counts, without any simulation.
pub fn structural_record(
    label: String,
    g: &Graph,
    convention: Convention,
    seed: u64,
) -> Result<InstanceRecord> {
    let classes = edge_classes(g).map_err(|e| e.at_stage("automorphisms"))?;
    let full = full_hamiltonian(g, convention);
    let red =
        reduced_hamiltonian(g, &classes, convention).map_err(|e| e.at_stage("hamiltonian"))?;
    let terms_full = full.term_count().total;
    let terms_red = red.term_count().total;
    Ok(InstanceRecord {
        graph: label,
        n: g.n(),
        m: g.m(),
        classes: classes.len(),
        terms_red,
        terms_full,
        reduction_pct: rounded_reduction_percentage(terms_red, terms_full),
        c_max: classical_max_cut(g).map_err(|e| e.at_stage("classical"))?,
        seed,
        full: None,
        reduced: None,
        timings: false,
        peak_rss_bytes: None,
    })
}

fn run_mode(
    g: &Graph,
    measure: &IsingHamiltonian,
    ansatz_h: &IsingHamiltonian,
    cfg: &RunConfig,
    c_max: usize,
    stage: &'static str,
) -> Result<ModeOutcome> {
    let optimizer = OptimizerConfig {
        seed: cfg.seed,
        ..cfg.optimizer.clone()
    };
    let opt = optimize_qaoa(g, measure, ansatz_h, cfg.layers, &optimizer, cfg.evaluation)
        .map_err(|e| e.at_stage(stage))?;
    let simulated_qubits = crate::optimizer::QaoaObjective::with_cap(
        ansatz_h,
        measure,
        cfg.layers,
        cfg.evaluation,
        cfg.qubit_cap,
    )
    .map_err(|e| e.at_stage(stage))?
    .simulated_qubits();
    let params = AnsatzParams::from_flat(&opt.best_params)?;
    let state = QaoaAnsatz::with_cap(ansatz_h, cfg.qubit_cap)
        .and_then(|a| a.state(&params))
        .map_err(|e| e.at_stage("sampling"))?;
    let samples = state.sample_indices(cfg.shots, cfg.seed)?;
    let best_cut = estimate_cut(g, &samples, cfg.estimator)?;
    Ok(ModeOutcome {
        terms: measure.term_count().total,
        best_params: opt.best_params,
        expectation: -opt.best_value,
        best_cut,
        ratio: approximation_ratio(best_cut, c_max)?,
        wall_time: opt.wall_time,
        evaluations: opt.evaluations,
        simulated_qubits,
    })
}

/// Full pipeline for one instance: graph, edge classes, both Hamiltonians,
/// optimization per requested mode, sampling at the optimum and the ratio.
/// Both modes sample with the same seed.
pub fn run_instance(cfg: &RunConfig) -> Result<InstanceRecord> {
    cfg.validate()?;
    let g = cfg.graph.build().map_err(|e| e.at_stage("graph"))?;
    if g.n() > cfg.qubit_cap {
        return Err(Error::Resource(format!(
            "{} qubits exceed the cap of {}",
            g.n(),
            cfg.qubit_cap
        ))
        .at_stage("graph"));
    }
    let mut record = structural_record(cfg.graph.label(&g), &g, cfg.convention, cfg.seed)?;
    let classes = edge_classes(&g).map_err(|e| e.at_stage("automorphisms"))?;
    let full = full_hamiltonian(&g, cfg.convention);
    let red =
        reduced_hamiltonian(&g, &classes, cfg.convention).map_err(|e| e.at_stage("hamiltonian"))?;

    if cfg.mode.runs_full() {
        record.full = Some(run_mode(
            &g,
            &full,
            &full,
            cfg,
            record.c_max,
            "optimize-full",
        )?);
    }
    if cfg.mode.runs_reduced() {
        record.reduced = Some(run_mode(
            &g,
            &red,
            &full,
            cfg,
            record.c_max,
            "optimize-reduced",
        )?);
    }
    record.timings = cfg.record_timings;
    record.peak_rss_bytes = peak_rss_bytes();
    Ok(record)
}

/// `VmHWM` from `/proc/self/status`, when available.
pub fn peak_rss_bytes() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmHWM:"))?;
    let kib: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kib * 1024)
}

pub const REPORT_COLUMNS: [&str; 13] = [
    "graph",
    "n",
    "m",
    "classes",
    "terms_red",
    "terms_full",
    "reduction_pct",
    "t_red_s",
    "t_full_s",
    "r_red",
    "r_full",
    "c_max",
    "seed",
];

fn report_row(r: &InstanceRecord) -> [String; 13] {
    let time = |o: &Option<ModeOutcome>| match o {
        Some(o) if r.timings => format!("{:.2}", o.wall_time),
        _ => String::new(),
    };
    let ratio = |o: &Option<ModeOutcome>| {
        o.as_ref()
            .map(|o| format!("{:.2}", o.ratio))
            .unwrap_or_default()
    };
    [
        r.graph.clone(),
        r.n.to_string(),
        r.m.to_string(),
        r.classes.to_string(),
        r.terms_red.to_string(),
        r.terms_full.to_string(),
        format!("{:.2}", r.reduction_pct),
        time(&r.reduced),
        time(&r.full),
        ratio(&r.reduced),
        ratio(&r.full),
        r.c_max.to_string(),
        r.seed.to_string(),
    ]
}

pub fn emit_report(records: &[InstanceRecord], format: ReportFormat) -> Result<String> {
    if records.is_empty() {
        return Err(Error::InvalidArgument("no records to report".into()));
    }
    match format {
        ReportFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            let io = |e: csv::Error| Error::Io(e.to_string());
            w.write_record(REPORT_COLUMNS).map_err(io)?;
            for r in records {
                w.write_record(report_row(r)).map_err(io)?;
            }
            let bytes = w.into_inner().map_err(|e| Error::Io(e.to_string()))?;
            Ok(String::from_utf8(bytes).expect("csv output is utf-8"))
        }
        ReportFormat::Markdown => {
            let mut out = String::new();
            writeln!(out, "| {} |", REPORT_COLUMNS.join(" | ")).unwrap();
            writeln!(out, "|{}", "---|".repeat(REPORT_COLUMNS.len())).unwrap();
            for r in records {
                writeln!(out, "| {} |", report_row(r).join(" | ")).unwrap();
            }
            Ok(out)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BenchSuite {
    /// Binary trees of the edge-class table; structure only.
    Table1,
    /// Balanced trees; structure only.
    Table2,
    /// Star graphs with 28 and 29 vertices; structure only.
    Table5,
    /// Small trees and a star, optimized in both modes.
    Desk,
}

impl std::str::FromStr for BenchSuite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table1" => Ok(BenchSuite::Table1),
            "table2" => Ok(BenchSuite::Table2),
            "table5" => Ok(BenchSuite::Table5),
            "desk" => Ok(BenchSuite::Desk),
            other => Err(Error::InvalidArgument(format!(
                "unknown suite {other:?} (table1, table2, table5, desk)"
            ))),
        }
    }
}

impl BenchSuite {
    pub fn instances(self) -> Vec<GraphSpec> {
        match self {
            BenchSuite::Table1 => [5, 10, 15, 20, 25, 30, 31, 34]
                .map(GraphSpec::Binary)
                .to_vec(),
            BenchSuite::Table2 => [(2, 2), (3, 2), (2, 3), (2, 4)]
                .map(|(r, h)| GraphSpec::Balanced { r, h })
                .to_vec(),
            BenchSuite::Table5 => vec![GraphSpec::Star(28), GraphSpec::Star(29)],
            BenchSuite::Desk => vec![
                GraphSpec::Binary(7),
                GraphSpec::Binary(13),
                GraphSpec::Binary(15),
                GraphSpec::Balanced { r: 3, h: 2 },
                GraphSpec::Star(12),
            ],
        }
    }

    /// Whether rows are optimized and sampled, or structural only.
    pub fn simulates(self) -> bool {
        self == BenchSuite::Desk
    }
}

/// Runs every instance of `suite`; instance `i` uses seed `seed + i`. Table
/// suites count terms in the adjacency convention, the desk suite optimizes
/// under `base` (its graph field is ignored).
pub fn run_bench(suite: BenchSuite, base: &RunConfig) -> Result<Vec<InstanceRecord>> {
    suite
        .instances()
        .into_iter()
        .enumerate()
        .map(|(i, spec)| {
            let seed = base.seed.wrapping_add(i as u64);
            if suite.simulates() {
                run_instance(&RunConfig {
                    graph: spec,
                    seed,
                    ..base.clone()
                })
            } else {
                let g = spec.build()?;
                structural_record(spec.label(&g), &g, Convention::Adjacency, seed)
            }
        })
        .collect()
}
