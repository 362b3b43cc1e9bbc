// Copyright 2026 The deltric Developers.
// SPDX-License-Identifier: Apache-2.0

//! Experiment harness: benchmark suites, parameter sweeps, ablations,
//! runtime scaling and the two demonstration experiments.
//!
//! Suites are TOML files with one `[[spec]]` table per experiment:
//!
//! ```toml
//! [[spec]]
//! name = "synthetic-500x5"
//! repeats = 3
//! [spec.generator]
//! n_points = 500
//! n_dim = 5
//! [spec.params]
//! prune_param = 1.0
//! ```
//!
//! A spec reads either a `generator` config or an `input` matrix with a
//! `truth` label file (and optionally an `embedding`). Seeds are derived
//! from the spec name and the repeat index.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::io::{self, DataMatrix, IoError, MatrixFormat};
use crate::labels::LabelVector;
use crate::metrics::{self, Evaluation, MetricsError};
use crate::pipeline::{
    fit_predict, ClusteringResult, DelTriCParams, DimReduction, PipelineError, StageTimings,
    MERGE_RANGE, PRUNE_RANGE,
};
use crate::projection::{self, Embedding, ProjectionError};
use crate::registry;
use crate::svg;
use crate::synthgen::{self, ConfigError, SynthConfig};

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("invalid suite: {0}")]
    Suite(String),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Io(#[from] IoError),
    #[error(transparent)]
    Projection(#[from] ProjectionError),
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchSpec {
    pub name: String,
    #[serde(default = "one")]
    pub repeats: usize,
    #[serde(default)]
    pub generator: Option<SynthConfig>,
    #[serde(default)]
    pub input: Option<PathBuf>,
    #[serde(default)]
    pub truth: Option<PathBuf>,
    #[serde(default)]
    pub embedding: Option<PathBuf>,
    #[serde(default)]
    pub params: DelTriCParams,
    /// Drop true anomalies before ARI/NMI.
    #[serde(default)]
    pub exclude_true_anomalies: bool,
}

fn one() -> usize {
    1
}

impl BenchSpec {
    pub fn validate(&self) -> Result<(), BenchError> {
        let bad = |m: String| Err(BenchError::Suite(format!("spec {:?}: {m}", self.name)));
        if self.repeats < 1 {
            return bad("repeats must be >= 1".into());
        }
        match (&self.generator, &self.input) {
            (Some(_), Some(_)) => return bad("give either generator or input, not both".into()),
            (None, None) => return bad("one of generator or input is required".into()),
            (None, Some(_)) if self.truth.is_none() => return bad("input needs truth labels".into()),
            _ => {}
        }
        if self.generator.is_some() && self.embedding.is_some() {
            return bad("an embedding can only accompany input files".into());
        }
        self.params.validate().map_err(|e| BenchError::Suite(e.to_string()))
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct SuiteFile {
    spec: Vec<BenchSpec>,
}

/// Parses a suite. Relative paths resolve against `base_dir`.
pub fn parse_suite(text: &str, base_dir: &Path) -> Result<Vec<BenchSpec>, BenchError> {
    let suite: SuiteFile = toml::from_str(text).map_err(|e| BenchError::Suite(e.to_string()))?;
    let mut specs = suite.spec;
    for s in &mut specs {
        for p in [&mut s.input, &mut s.truth, &mut s.embedding].into_iter().flatten() {
            if p.is_relative() {
                *p = base_dir.join(&*p);
            }
        }
        s.validate()?;
    }
    Ok(specs)
}

pub fn load_suite(path: &Path) -> Result<Vec<BenchSpec>, BenchError> {
    let text = std::fs::read_to_string(path).map_err(|source| IoError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_suite(&text, path.parent().unwrap_or(Path::new(".")))
}

/// Stable seed for repeat `repeat` of spec `name` (FNV-1a, then SplitMix64).
pub fn derive_seed(name: &str, repeat: usize) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in name.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    let mut z = h ^ (repeat as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub name: String,
    pub seed: u64,
    pub n: usize,
    pub d: usize,
    pub prune: f64,
    pub merge: f64,
    pub sensitivity: f64,
    pub eval: Evaluation,
    pub timings: StageTimings,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Aggregate {
    pub name: String,
    pub runs: usize,
    pub ari_mean: f64,
    pub ari_std: f64,
    pub nmi_mean: f64,
    pub nmi_std: f64,
    pub f1_mean: f64,
    pub f1_std: f64,
    pub total_ms_mean: f64,
}

#[derive(Debug, Clone, Default)]
pub struct BenchReport {
    pub rows: Vec<BenchRow>,
    /// `(spec name, repeat, error message)` for runs that failed.
    pub failures: Vec<(String, usize, String)>,
}

pub const REPORT_HEADER: &str = "name,seed,n,d,prune,merge,sensitivity,ari,nmi,precision,recall,f1,n_clusters,n_anomalies,ms_project,ms_triangulate,ms_prune,ms_merge,ms_anomaly";

impl BenchReport {
    /// The per-run CSV. With `timing` false the millisecond columns are
    /// written as 0 so that the file depends on the inputs alone.
    pub fn to_csv(&self, timing: bool) -> String {
        let mut out = format!("{REPORT_HEADER}\n");
        for r in &self.rows {
            let t = if timing {
                r.timings.clone()
            } else {
                StageTimings::default()
            };
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{:?},{:?},{:?},{:?},{:?},{},{},{:.3},{:.3},{:.3},{:.3},{:.3}",
                r.name,
                r.seed,
                r.n,
                r.d,
                r.prune,
                r.merge,
                r.sensitivity,
                r.eval.ari,
                r.eval.nmi,
                r.eval.precision,
                r.eval.recall,
                r.eval.f1,
                r.eval.n_clusters,
                r.eval.n_anomalies,
                t.project_ms,
                t.triangulate_ms,
                t.prune_ms,
                t.merge_ms,
                t.anomaly_ms
            );
        }
        out
    }

    /// Mean and population standard deviation per spec, in first-seen
    /// order.
    pub fn aggregates(&self) -> Vec<Aggregate> {
        let mut names: Vec<&str> = Vec::new();
        for r in &self.rows {
            if !names.contains(&r.name.as_str()) {
                names.push(&r.name);
            }
        }
        names
            .into_iter()
            .map(|name| {
                let rows: Vec<&BenchRow> = self.rows.iter().filter(|r| r.name == name).collect();
                let col = |f: &dyn Fn(&BenchRow) -> f64| -> Vec<f64> { rows.iter().map(|r| f(r)).collect() };
                let ari = col(&|r| r.eval.ari);
                let nmi = col(&|r| r.eval.nmi);
                let f1 = col(&|r| r.eval.f1);
                Aggregate {
                    name: name.to_string(),
                    runs: rows.len(),
                    ari_mean: crate::stats::mean(&ari),
                    ari_std: crate::stats::population_std(&ari),
                    nmi_mean: crate::stats::mean(&nmi),
                    nmi_std: crate::stats::population_std(&nmi),
                    f1_mean: crate::stats::mean(&f1),
                    f1_std: crate::stats::population_std(&f1),
                    total_ms_mean: crate::stats::mean(&col(&|r| r.timings.total_ms())),
                }
            })
            .collect()
    }

    pub fn aggregates_csv(&self, timing: bool) -> String {
        let mut out =
            String::from("name,runs,ari_mean,ari_std,nmi_mean,nmi_std,f1_mean,f1_std,total_ms_mean\n");
        for a in self.aggregates() {
            let _ = writeln!(
                out,
                "{},{},{:?},{:?},{:?},{:?},{:?},{:?},{:.3}",
                a.name,
                a.runs,
                a.ari_mean,
                a.ari_std,
                a.nmi_mean,
                a.nmi_std,
                a.f1_mean,
                a.f1_std,
                if timing { a.total_ms_mean } else { 0.0 }
            );
        }
        out
    }
}

#[derive(Debug, Clone, Default)]
pub struct SuiteOptions {
    /// Write one scatter plot per run into this directory.
    pub svg_dir: Option<PathBuf>,
    /// Worker threads; 0 or 1 runs sequentially.
    pub workers: usize,
}

/// Loads or generates the data for one run.
pub fn spec_data(
    spec: &BenchSpec,
    seed: u64,
) -> Result<(DataMatrix, LabelVector, Option<Embedding>), BenchError> {
    if let Some(cfg) = &spec.generator {
        let cfg = SynthConfig {
            random_state: seed,
            ..cfg.clone()
        };
        let (x, y) = synthgen::generate(&cfg)?;
        return Ok((x, y, None));
    }
    let input = spec.input.as_deref().expect("validated");
    let x = io::load_matrix(input, MatrixFormat::detect(input)?, false)?;
    let y = io::load_labels(spec.truth.as_deref().expect("validated"))?;
    let e = match &spec.embedding {
        Some(p) => Some(projection::import_embedding(p, &x)?),
        None => None,
    };
    Ok((x, y, e))
}

fn run_one(spec: &BenchSpec, repeat: usize, svg_dir: Option<&Path>) -> Result<BenchRow, BenchError> {
    let seed = derive_seed(&spec.name, repeat);
    let (x, truth, emb) = spec_data(spec, seed)?;
    let mut params = spec.params.clone();
    params.seed = seed;
    if emb.is_some() {
        params.dim_reduction = DimReduction::Imported;
    }
    let result = fit_predict(&x, &params, emb.as_ref())?;
    let eval = metrics::evaluate(&truth, &result.labels, spec.exclude_true_anomalies)?;
    if let Some(dir) = svg_dir {
        let path = dir.join(format!("{}-{repeat}.svg", spec.name));
        let text = svg::scatter(result.artifacts.embedding.coords(), &result.labels, &spec.name);
        std::fs::write(&path, text).map_err(|source| IoError::Io { path, source })?;
    }
    Ok(BenchRow {
        name: spec.name.clone(),
        seed,
        n: x.n_points(),
        d: x.n_dims(),
        prune: params.prune_param,
        merge: params.merge_param,
        sensitivity: params.anomaly_sensitivity,
        eval,
        timings: result.diagnostics.timings,
    })
}

/// Runs every repeat of every spec. Failed runs are recorded and the
/// suite carries on. Rows come back in spec order whatever the worker
/// count.
pub fn run_suite(specs: &[BenchSpec], options: &SuiteOptions) -> BenchReport {
    let jobs: Vec<(usize, usize)> = specs
        .iter()
        .enumerate()
        .flat_map(|(i, s)| (0..s.repeats).map(move |r| (i, r)))
        .collect();
    let results: Mutex<Vec<Option<Result<BenchRow, String>>>> = Mutex::new(vec![None; jobs.len()]);
    let next = AtomicUsize::new(0);
    let svg_dir = options.svg_dir.as_deref();
    let work = || loop {
        let j = next.fetch_add(1, Ordering::Relaxed);
        let Some(&(i, r)) = jobs.get(j) else { break };
        let out = run_one(&specs[i], r, svg_dir).map_err(|e| e.to_string());
        results.lock().expect("no panics while holding the lock")[j] = Some(out);
    };
    let workers = options.workers.max(1).min(jobs.len().max(1));
    if workers == 1 {
        work();
    } else {
        std::thread::scope(|s| {
            for _ in 0..workers {
                s.spawn(work);
            }
        });
    }
    let mut report = BenchReport::default();
    for ((i, r), out) in jobs.into_iter().zip(results.into_inner().expect("workers joined")) {
        match out.expect("every job ran") {
            Ok(row) => report.rows.push(row),
            Err(msg) => report.failures.push((specs[i].name.clone(), r, msg)),
        }
    }
    report
}

/// Candidate values for an exhaustive sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamGrid {
    pub prune: Vec<f64>,
    pub merge: Vec<f64>,
    pub sensitivity: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepProbe {
    pub prune: f64,
    pub merge: f64,
    pub sensitivity: f64,
    pub eval: Evaluation,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub best: DelTriCParams,
    pub best_eval: Evaluation,
    pub trace: Vec<SweepProbe>,
}

impl SweepResult {
    pub fn trace_csv(&self) -> String {
        let mut out = String::from("probe,prune,merge,sensitivity,ari,nmi,f1,n_clusters,n_anomalies\n");
        for (i, p) in self.trace.iter().enumerate() {
            let _ = writeln!(
                out,
                "{i},{:?},{:?},{:?},{:?},{:?},{:?},{},{}",
                p.prune, p.merge, p.sensitivity, p.eval.ari, p.eval.nmi, p.eval.f1, p.eval.n_clusters, p.eval.n_anomalies
            );
        }
        out
    }
}

/// Data shared by every probe of a sweep or ablation.
pub struct Problem<'a> {
    pub data: &'a DataMatrix,
    pub truth: &'a LabelVector,
    pub embedding: Option<&'a Embedding>,
}

fn sweep(
    problem: &Problem<'_>,
    base: &DelTriCParams,
    probes: impl IntoIterator<Item = (f64, f64, f64)>,
) -> Result<SweepResult, BenchError> {
    let mut trace = Vec::new();
    let mut best: Option<(DelTriCParams, Evaluation)> = None;
    for (prune, merge, sensitivity) in probes {
        let params = DelTriCParams {
            prune_param: prune,
            merge_param: merge,
            anomaly_sensitivity: sensitivity,
            ..base.clone()
        };
        let result = fit_predict(problem.data, &params, problem.embedding)?;
        let eval = metrics::evaluate(problem.truth, &result.labels, false)?;
        trace.push(SweepProbe {
            prune,
            merge,
            sensitivity,
            eval,
        });
        if best.as_ref().is_none_or(|(_, b)| eval.ari > b.ari) {
            best = Some((params, eval));
        }
    }
    let (best, best_eval) = best.ok_or_else(|| BenchError::Suite("empty sweep".into()))?;
    Ok(SweepResult {
        best,
        best_eval,
        trace,
    })
}

/// Tries every grid combination; the first probe with the highest ARI wins.
pub fn grid_sweep(
    problem: &Problem<'_>,
    base: &DelTriCParams,
    grid: &ParamGrid,
) -> Result<SweepResult, BenchError> {
    let mut probes = Vec::new();
    for &p in &grid.prune {
        for &m in &grid.merge {
            for &s in &grid.sensitivity {
                probes.push((p, m, s));
            }
        }
    }
    sweep(problem, base, probes)
}

/// `probes` uniform draws of prune and merge parameters from their usual
/// ranges; the anomaly sensitivity is taken from `base`.
pub fn random_sweep(
    problem: &Problem<'_>,
    base: &DelTriCParams,
    n_probes: usize,
    seed: u64,
) -> Result<SweepResult, BenchError> {
    let mut rng = synthgen::stream(seed, 11);
    let probes: Vec<(f64, f64, f64)> = (0..n_probes)
        .map(|_| {
            (
                rng.random_range(PRUNE_RANGE.0..PRUNE_RANGE.1),
                rng.random_range(MERGE_RANGE.0..MERGE_RANGE.1),
                base.anomaly_sensitivity,
            )
        })
        .collect();
    sweep(problem, base, probes)
}

#[derive(Debug, Clone)]
pub struct AblationRow {
    pub variant: String,
    pub result: ClusteringResult,
    pub eval: Option<Evaluation>,
}

/// Runs the named registered variants on the same input.
pub fn run_ablation(
    data: &DataMatrix,
    truth: Option<&LabelVector>,
    embedding: Option<&Embedding>,
    base: &DelTriCParams,
    names: &[&str],
) -> Result<Vec<AblationRow>, BenchError> {
    names
        .iter()
        .map(|name| {
            let v = registry::variant(name).ok_or_else(|| {
                BenchError::Suite(format!(
                    "unknown variant {name:?}; expected one of {:?}",
                    registry::variants().names().collect::<Vec<_>>()
                ))
            })?;
            let mut params = base.clone();
            v.apply(&mut params);
            let result = fit_predict(data, &params, embedding)?;
            let eval = truth
                .map(|t| metrics::evaluate(t, &result.labels, false))
                .transpose()?;
            Ok(AblationRow {
                variant: name.to_string(),
                result,
                eval,
            })
        })
        .collect()
}

pub fn ablation_csv(rows: &[AblationRow]) -> String {
    let mut out = String::from("variant,n_clusters,n_anomalies,ari,nmi,precision,recall,f1\n");
    for r in rows {
        let m = |f: fn(&Evaluation) -> f64| r.eval.as_ref().map_or(String::new(), |e| format!("{:?}", f(e)));
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.variant,
            r.result.n_clusters,
            r.result.n_anomalies,
            m(|e| e.ari),
            m(|e| e.nmi),
            m(|e| e.precision),
            m(|e| e.recall),
            m(|e| e.f1)
        );
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScalingRow {
    pub n: usize,
    pub d: usize,
    pub trial_ms: Vec<f64>,
    pub median_ms: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScalingReport {
    pub rows: Vec<ScalingRow>,
    /// Log-log slope of time against `n` at the first `d`.
    pub n_exponent: Option<f64>,
    /// Log-log slope of time against `d` at the first `n`.
    pub d_exponent: Option<f64>,
}

impl ScalingReport {
    pub fn median_ms(&self, n: usize, d: usize) -> Option<f64> {
        self.rows.iter().find(|r| r.n == n && r.d == d).map(|r| r.median_ms)
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,d,median_ms,trials_ms\n");
        for r in &self.rows {
            let trials: Vec<String> = r.trial_ms.iter().map(|t| format!("{t:.3}")).collect();
            let _ = writeln!(out, "{},{},{:.3},{}", r.n, r.d, r.median_ms, trials.join(" "));
        }
        out
    }
}

fn log_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 {
        return None;
    }
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.max(1e-9).ln()).collect();
    let (mx, my) = (crate::stats::mean(&xs), crate::stats::mean(&ys));
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    (sxx > 0.0).then(|| sxy / sxx)
}

/// End-to-end wall clock of the default pipeline with PCA on generated
/// data, median over `trials`.
pub fn runtime_scaling(
    n_list: &[usize],
    d_list: &[usize],
    trials: usize,
    seed: u64,
) -> Result<ScalingReport, BenchError> {
    if n_list.is_empty() || d_list.is_empty() || trials == 0 {
        return Err(BenchError::Suite("n list, d list and trials must be non-empty".into()));
    }
    let params = DelTriCParams {
        seed,
        ..DelTriCParams::default()
    };
    let mut rows = Vec::new();
    for &d in d_list {
        for &n in n_list {
            let (x, _) = synthgen::generate(&SynthConfig {
                n_points: n,
                n_dim: d,
                random_state: seed,
                ..SynthConfig::default()
            })?;
            let mut trial_ms = Vec::with_capacity(trials);
            for _ in 0..trials {
                let t = Instant::now();
                fit_predict(&x, &params, None)?;
                trial_ms.push(t.elapsed().as_secs_f64() * 1e3);
            }
            let median_ms = crate::stats::median(&trial_ms);
            rows.push(ScalingRow {
                n,
                d,
                trial_ms,
                median_ms,
            });
        }
    }
    let at = |pred: &dyn Fn(&ScalingRow) -> bool, key: &dyn Fn(&ScalingRow) -> usize| -> Vec<(f64, f64)> {
        rows.iter().filter(|r| pred(r)).map(|r| (key(r) as f64, r.median_ms)).collect()
    };
    let n_exponent = log_slope(&at(&|r| r.d == d_list[0], &|r| r.n));
    let d_exponent = log_slope(&at(&|r| r.n == n_list[0], &|r| r.d));
    Ok(ScalingReport {
        rows,
        n_exponent,
        d_exponent,
    })
}

/// Parameters for the pruning-degradation experiment: the strips are
/// clustered in their own plane with merging off and every anomaly group
/// kept, so only the pruning step decides whether they separate.
pub fn degradation_params(prune_param: f64) -> DelTriCParams {
    DelTriCParams {
        prune_param,
        dim_reduction: DimReduction::Imported,
        merging_enabled: false,
        anomaly_sensitivity: 1.0,
        ..DelTriCParams::default()
    }
}

/// Sigma factor used by the degradation demo.
pub const DEGRADATION_PRUNE: f64 = 1.0;

pub const DEGRADATION_EPSILONS: [f64; 7] = [2.0, 1.5, 1.2, 1.0, 0.8, 0.6, 0.5];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DegradationRow {
    pub epsilon: f64,
    pub successes: usize,
    pub seeds: usize,
}

impl DegradationRow {
    pub fn success_rate(&self) -> f64 {
        self.successes as f64 / self.seeds as f64
    }
}

/// For each gap, the number of seeds on which exactly two clusters are
/// found.
pub fn degradation_sweep(
    epsilons: &[f64],
    seeds: &[u64],
    prune_param: f64,
) -> Result<Vec<DegradationRow>, BenchError> {
    epsilons
        .iter()
        .map(|&epsilon| {
            let mut successes = 0;
            for &seed in seeds {
                let (x, _) = synthgen::generate_degradation_pair(epsilon, seed)?;
                let emb = Embedding::from_matrix(&x)?;
                let params = DelTriCParams {
                    seed,
                    ..degradation_params(prune_param)
                };
                let r = fit_predict(&x, &params, Some(&emb))?;
                successes += usize::from(r.n_clusters == 2);
            }
            Ok(DegradationRow {
                epsilon,
                successes,
                seeds: seeds.len(),
            })
        })
        .collect()
}

pub fn degradation_csv(rows: &[DegradationRow]) -> String {
    let mut out = String::from("epsilon,successes,seeds,success_rate\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{},{:?}", r.epsilon, r.successes, r.seeds, r.success_rate());
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BackprojectionSetup {
    pub n_points: usize,
    pub n_dim: usize,
    pub n_tail: usize,
    pub prune_param: f64,
}

impl Default for BackprojectionSetup {
    fn default() -> Self {
        Self {
            n_points: 500,
            n_dim: 10,
            n_tail: 25,
            prune_param: 0.6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BackprojectionRow {
    pub seed: u64,
    pub recall_full: f64,
    pub recall_proj_off: f64,
    pub flagged_full: usize,
    pub flagged_proj_off: usize,
}

/// Tail-anomaly recall with and without back-projection on a blob whose
/// embedding hides the tail inside the cluster footprint.
pub fn backprojection_demo(setup: &BackprojectionSetup, seeds: &[u64]) -> Result<Vec<BackprojectionRow>, BenchError> {
    seeds
        .iter()
        .map(|&seed| {
            let (x, truth) =
                synthgen::generate_backprojection_demo(setup.n_points, setup.n_dim, setup.n_tail, seed)?;
            let emb = synthgen::footprint_embedding(&x, &truth, seed);
            let base = DelTriCParams {
                prune_param: setup.prune_param,
                dim_reduction: DimReduction::Imported,
                anomaly_sensitivity: 1.0,
                seed,
                ..DelTriCParams::default()
            };
            let rows = run_ablation(&x, Some(&truth), Some(&emb), &base, &["full", "proj_off"])?;
            let recall = |i: usize| rows[i].eval.as_ref().expect("truth given").recall;
            Ok(BackprojectionRow {
                seed,
                recall_full: recall(0),
                recall_proj_off: recall(1),
                flagged_full: rows[0].result.n_anomalies,
                flagged_proj_off: rows[1].result.n_anomalies,
            })
        })
        .collect()
}

pub fn backprojection_csv(rows: &[BackprojectionRow]) -> String {
    let mut out = String::from("seed,recall_full,recall_proj_off,flagged_full,flagged_proj_off\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{:?},{:?},{},{}",
            r.seed, r.recall_full, r.recall_proj_off, r.flagged_full, r.flagged_proj_off
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_spec(name: &str, repeats: usize) -> BenchSpec {
        BenchSpec {
            name: name.into(),
            repeats,
            generator: Some(SynthConfig {
                n_points: 500,
                n_dim: 5,
                ..SynthConfig::default()
            }),
            input: None,
            truth: None,
            embedding: None,
            params: DelTriCParams {
                prune_param: 1.0,
                ..DelTriCParams::default()
            },
            exclude_true_anomalies: false,
        }
    }

    #[test]
    fn seeds_depend_on_name_and_repeat() {
        assert_eq!(derive_seed("a", 0), derive_seed("a", 0));
        assert_ne!(derive_seed("a", 0), derive_seed("a", 1));
        assert_ne!(derive_seed("a", 0), derive_seed("b", 0));
    }

    #[test]
    fn suite_row_populated() {
        let report = run_suite(&[small_spec("s", 1)], &SuiteOptions::default());
        assert!(report.failures.is_empty());
        let row = &report.rows[0];
        assert_eq!((row.n, row.d), (500, 5));
        assert!(row.eval.ari.is_finite() && row.eval.nmi.is_finite() && row.eval.f1.is_finite());
        let csv = report.to_csv(true);
        assert!(csv.starts_with(REPORT_HEADER));
        assert_eq!(csv.lines().nth(1).unwrap().split(',').count(), 19);
    }

    #[test]
    fn repeats_are_reproducible_and_parallel_safe() {
        let specs = [small_spec("r", 3)];
        let a = run_suite(&specs, &SuiteOptions::default());
        let b = run_suite(
            &specs,
            &SuiteOptions {
                workers: 3,
                ..Default::default()
            },
        );
        assert_eq!(a.to_csv(false), b.to_csv(false));
        assert_eq!(a.aggregates_csv(false), b.aggregates_csv(false));
        let agg = &a.aggregates()[0];
        assert_eq!(agg.runs, 3);
        let mean: f64 = a.rows.iter().map(|r| r.eval.ari).sum::<f64>() / 3.0;
        assert!((agg.ari_mean - mean).abs() < 1e-12);
    }

    #[test]
    fn failures_recorded_and_suite_continues() {
        let mut broken = small_spec("broken", 1);
        broken.generator = None;
        broken.input = Some(PathBuf::from("/nonexistent/x.csv"));
        broken.truth = Some(PathBuf::from("/nonexistent/y.csv"));
        let report = run_suite(&[broken, small_spec("ok", 1)], &SuiteOptions::default());
        assert_eq!(report.failures.len(), 1);
        assert_eq!(report.rows.len(), 1);
        assert_eq!(report.rows[0].name, "ok");
    }

    #[test]
    fn suite_parsing() {
        let text = r#"
[[spec]]
name = "a"
repeats = 2
[spec.generator]
n_points = 100
[spec.params]
prune_param = 0.8

[[spec]]
name = "b"
input = "x.csv"
truth = "y.csv"
"#;
        let specs = parse_suite(text, Path::new("/data")).unwrap();
        assert_eq!(specs.len(), 2);
        assert_eq!(specs[0].repeats, 2);
        assert_eq!(specs[0].generator.as_ref().unwrap().n_points, 100);
        assert_eq!(specs[0].params.prune_param, 0.8);
        assert_eq!(specs[0].params.merge_param, -0.8);
        assert_eq!(specs[1].input.as_deref(), Some(Path::new("/data/x.csv")));

        assert!(parse_suite("[[spec]]\nname = \"x\"\n", Path::new(".")).is_err());
        assert!(parse_suite("[[spec]]\nname = \"x\"\nrepeats = 0\n[spec.generator]\n", Path::new(".")).is_err());
        assert!(parse_suite("[[spec]]\nname = \"x\"\nbogus = 1\n", Path::new(".")).is_err());
    }

    #[test]
    fn single_point_grid() {
        let cfg = SynthConfig {
            n_points: 200,
            ..SynthConfig::default()
        };
        let (x, y) = synthgen::generate(&cfg).unwrap();
        let grid = ParamGrid {
            prune: vec![1.1],
            merge: vec![-0.9],
            sensitivity: vec![0.95],
        };
        let problem = Problem {
            data: &x,
            truth: &y,
            embedding: None,
        };
        let r = grid_sweep(&problem, &DelTriCParams::default(), &grid).unwrap();
        assert_eq!(r.trace.len(), 1);
        assert_eq!(r.best.prune_param, 1.1);
        assert_eq!(r.best.merge_param, -0.9);
        assert_eq!(r.best.anomaly_sensitivity, 0.95);
    }

    #[test]
    fn random_sweep_reproducible() {
        let (x, y) = synthgen::generate(&SynthConfig {
            n_points: 150,
            ..SynthConfig::default()
        })
        .unwrap();
        let problem = Problem {
            data: &x,
            truth: &y,
            embedding: None,
        };
        let base = DelTriCParams::default();
        let a = random_sweep(&problem, &base, 5, 9).unwrap();
        let b = random_sweep(&problem, &base, 5, 9).unwrap();
        assert_eq!(a.trace_csv(), b.trace_csv());
        for p in &a.trace {
            assert!(p.prune >= PRUNE_RANGE.0 && p.prune < PRUNE_RANGE.1);
            assert!(p.merge >= MERGE_RANGE.0 && p.merge < MERGE_RANGE.1);
        }
    }

    #[test]
    fn log_slope_of_power_law() {
        let pts: Vec<(f64, f64)> = [1.0, 2.0, 4.0].iter().map(|&x: &f64| (x, 3.0 * x.powi(2))).collect();
        assert!((log_slope(&pts).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(log_slope(&pts[..1]), None);
    }

    #[test]
    fn ablation_rejects_unknown_variant() {
        let (x, _) = synthgen::generate(&SynthConfig {
            n_points: 100,
            ..SynthConfig::default()
        })
        .unwrap();
        assert!(run_ablation(&x, None, None, &DelTriCParams::default(), &["nope"]).is_err());
        let rows = run_ablation(&x, None, None, &DelTriCParams::default(), &["full", "merge_off"]).unwrap();
        assert_eq!(rows.len(), 2);
        assert!(ablation_csv(&rows).lines().nth(1).unwrap().starts_with("full,"));
    }
}
