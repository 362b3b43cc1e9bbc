// Copyright 2026 The deltric Developers.
// SPDX-License-Identifier: Apache-2.0

//! `deltric` command-line tool.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error. Machine-readable
//! output goes to stdout or the requested files; notes go to stderr.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use deltric::bench::{self, BackprojectionSetup, ParamGrid, Problem, SuiteOptions};
use deltric::io::{self, DataMatrix, MatrixFormat};
use deltric::pipeline::{DelTriCParams, DimReduction, PipelineError};
use deltric::projection::{self, Embedding};
use deltric::synthgen::{self, SynthConfig};
use deltric::{metrics, pruning, registry, svg, LabelVector};

#[derive(Debug, Parser)]
#[command(name = "deltric", version, about = "Delaunay-triangulation clustering with back-projected pruning")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Generate a synthetic benchmark dataset with ground-truth labels.
    Gen(GenArgs),
    /// Cluster a data matrix.
    Cluster(ClusterArgs),
    /// Score predicted labels against ground truth (JSON on stdout).
    Eval(EvalArgs),
    /// Run a benchmark suite or a runtime-scaling measurement.
    Bench(BenchArgs),
    /// Run ablation variants on one input.
    Ablate(AblateArgs),
    /// Run a demonstration experiment.
    Demo(DemoArgs),
    /// Search prune/merge parameters against ground truth.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
struct GenArgs {
    #[arg(long, default_value_t = 500)]
    n: usize,
    #[arg(long, default_value_t = 4)]
    clusters: usize,
    #[arg(long, default_value_t = 5)]
    dim: usize,
    #[arg(long, default_value_t = 0.1)]
    overlap: f64,
    #[arg(long, default_value_t = 0.05)]
    anomaly_frac: f64,
    #[arg(long, default_value_t = 0.2)]
    snake_frac: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Data matrix path (`.bin` or `.dtrc` selects the binary format).
    #[arg(long)]
    out: PathBuf,
    /// Label path; defaults to `<out stem>.labels.csv` beside the matrix.
    #[arg(long)]
    labels_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct InputArgs {
    /// Data matrix (CSV or binary, detected from content).
    #[arg(long)]
    input: PathBuf,
    /// The CSV input starts with a header row.
    #[arg(long)]
    header: bool,
    /// Imported 2D embedding with one row per input row.
    #[arg(long)]
    embedding: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ParamArgs {
    #[arg(long, default_value_t = 0.3, allow_negative_numbers = true)]
    prune: f64,
    #[arg(long, default_value_t = -0.8, allow_negative_numbers = true)]
    merge: f64,
    #[arg(long, default_value_t = 0.99)]
    sensitivity: f64,
    #[arg(long, default_value_t = 3)]
    tau: usize,
    /// Triangle size measure.
    #[arg(long, default_value = "max_edge")]
    size_mode: String,
    /// Measure triangle sizes in the embedding only.
    #[arg(long)]
    no_back_projection: bool,
    /// Skip representative merging.
    #[arg(long)]
    no_merge: bool,
    /// Z-score columns before PCA.
    #[arg(long)]
    standardize: bool,
    /// Jitter collinear embeddings instead of failing.
    #[arg(long)]
    jitter: bool,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

impl ParamArgs {
    fn params(&self, imported: bool) -> DelTriCParams {
        DelTriCParams {
            prune_param: self.prune,
            merge_param: self.merge,
            tau: self.tau,
            anomaly_sensitivity: self.sensitivity,
            dim_reduction: if imported {
                DimReduction::Imported
            } else {
                DimReduction::Pca
            },
            back_projection: !self.no_back_projection,
            merging_enabled: !self.no_merge,
            size_mode: self.size_mode.clone(),
            seed: self.seed,
            standardize: self.standardize,
            jitter_on_collinear: self.jitter,
        }
    }
}

#[derive(Debug, Args)]
struct ClusterArgs {
    #[command(flatten)]
    input: InputArgs,
    #[command(flatten)]
    params: ParamArgs,
    /// Label output; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Scatter plot of the embedding coloured by label.
    #[arg(long)]
    svg: Option<PathBuf>,
    /// Directory for per-triangle and per-group diagnostics.
    #[arg(long)]
    diag: Option<PathBuf>,
    /// Write the stage-one triangulation as `i,j,k` rows.
    #[arg(long)]
    triangles: Option<PathBuf>,
    /// Print stage timings to stderr.
    #[arg(long)]
    verbose: bool,
}

#[derive(Debug, Args)]
struct EvalArgs {
    #[arg(long = "true")]
    truth: PathBuf,
    #[arg(long)]
    pred: PathBuf,
    /// Drop points labelled -1 in the truth before ARI and NMI.
    #[arg(long)]
    exclude_true_anomalies: bool,
}

#[derive(Debug, Args)]
#[command(group(clap::ArgGroup::new("mode").required(true).args(["suite", "scaling_n"])))]
struct BenchArgs {
    /// TOML suite file.
    #[arg(long)]
    suite: Option<PathBuf>,
    /// Per-run CSV report; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Per-spec mean/stddev CSV.
    #[arg(long)]
    aggregate_out: Option<PathBuf>,
    /// Directory for one scatter plot per run.
    #[arg(long)]
    svg_dir: Option<PathBuf>,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Write 0 in the millisecond columns.
    #[arg(long)]
    no_timing: bool,
    /// Point counts for a runtime-scaling measurement.
    #[arg(long, value_delimiter = ',')]
    scaling_n: Option<Vec<usize>>,
    /// Dimensions for a runtime-scaling measurement.
    #[arg(long, value_delimiter = ',', default_value = "50")]
    scaling_d: Vec<usize>,
    #[arg(long, default_value_t = 3)]
    trials: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Debug, Args)]
struct AblateArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Ground-truth labels; adds score columns.
    #[arg(long)]
    truth: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', default_value = "full,merge_off,proj_off,anom_merged")]
    variants: Vec<String>,
    #[command(flatten)]
    params: ParamArgs,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Demo {
    Backprojection,
    Degradation,
}

#[derive(Debug, Args)]
struct DemoArgs {
    #[arg(long, value_enum)]
    which: Demo,
    /// Number of seeds, starting at 0 (default 5 for backprojection, 10
    /// for degradation).
    #[arg(long)]
    seeds: Option<u64>,
    /// Pruning sigma factor (default 0.6 for backprojection, 1.0 for
    /// degradation).
    #[arg(long)]
    prune: Option<f64>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long)]
    truth: PathBuf,
    /// Random probes drawn from the usual parameter ranges.
    #[arg(long, default_value_t = 100)]
    probes: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Exhaustive grid instead of random probes.
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    grid_prune: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',', allow_negative_numbers = true)]
    grid_merge: Option<Vec<f64>>,
    #[arg(long, value_delimiter = ',')]
    grid_sensitivity: Option<Vec<f64>>,
    #[arg(long, default_value_t = 0.99)]
    sensitivity: f64,
    /// Full probe trace CSV.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Data(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

fn data<E: std::fmt::Display>(e: E) -> CliError {
    CliError::Data(e.to_string())
}

fn pipeline_err(e: PipelineError) -> CliError {
    match e {
        PipelineError::InvalidParams(m) => CliError::Usage(m),
        other => data(other),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let out = match cli.command {
        Command::Gen(a) => gen(a),
        Command::Cluster(a) => cluster(a),
        Command::Eval(a) => eval(a),
        Command::Bench(a) => bench_cmd(a),
        Command::Ablate(a) => ablate(a),
        Command::Demo(a) => demo(a),
        Command::Sweep(a) => sweep(a),
    };
    match out {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let (CliError::Usage(m) | CliError::Data(m)) = &e;
            eprintln!("error: {m}");
            ExitCode::from(e.code())
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| CliError::Data(format!("{}: {e}", path.display())))
}

/// Writes to `path`, or stdout when it is `None`.
fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => write_file(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_input(a: &InputArgs) -> Result<(DataMatrix, Option<Embedding>)> {
    let format = MatrixFormat::detect(&a.input).map_err(data)?;
    let x = io::load_matrix(&a.input, format, a.header).map_err(data)?;
    let e = match &a.embedding {
        Some(p) => Some(projection::import_embedding(p, &x).map_err(data)?),
        None => None,
    };
    Ok((x, e))
}

fn check_params(p: &DelTriCParams, embedding: bool) -> Result<()> {
    p.validate().map_err(pipeline_err)?;
    for w in p.warnings() {
        eprintln!("warning: {w}");
    }
    if !embedding {
        eprintln!(
            "note: projecting with native PCA; the reference defaults use UMAP, which can be supplied with --embedding"
        );
    }
    Ok(())
}

fn labels_path_for(out: &Path) -> PathBuf {
    let stem = out.file_stem().map_or("data".into(), |s| s.to_string_lossy().into_owned());
    out.with_file_name(format!("{stem}.labels.csv"))
}

fn gen(a: GenArgs) -> Result<()> {
    let cfg = SynthConfig {
        n_points: a.n,
        n_clusters: a.clusters,
        n_dim: a.dim,
        overlap: a.overlap,
        anomaly_fraction: a.anomaly_frac,
        snake_fraction: a.snake_frac,
        random_state: a.seed,
    };
    cfg.validate().map_err(|e| CliError::Usage(e.to_string()))?;
    let (x, y) = synthgen::generate(&cfg).map_err(data)?;
    io::save_matrix(&x, &a.out, MatrixFormat::from_extension(&a.out)).map_err(data)?;
    let labels = a.labels_out.unwrap_or_else(|| labels_path_for(&a.out));
    io::save_labels(&y, &labels).map_err(data)?;
    eprintln!(
        "wrote {} x {} matrix to {} and labels to {}",
        x.n_points(),
        x.n_dims(),
        a.out.display(),
        labels.display()
    );
    Ok(())
}

fn cluster(a: ClusterArgs) -> Result<()> {
    let (x, emb) = load_input(&a.input)?;
    let params = a.params.params(emb.is_some());
    check_params(&params, emb.is_some())?;
    let r = deltric::fit_predict(&x, &params, emb.as_ref()).map_err(pipeline_err)?;
    let d = &r.diagnostics;
    eprintln!(
        "{} clusters, {} anomalies ({} triangles, {} kept, {} merges, {} of {} anomaly groups merged)",
        r.n_clusters, r.n_anomalies, d.n_triangles, d.n_triangles_kept, d.merges, d.n_groups_merged, d.n_anomaly_groups
    );
    if a.verbose {
        let t = &d.timings;
        eprintln!(
            "timings ms: project {:.2}, triangulate {:.2}, prune {:.2}, merge {:.2}, anomaly {:.2}",
            t.project_ms, t.triangulate_ms, t.prune_ms, t.merge_ms, t.anomaly_ms
        );
    }
    emit(a.out.as_deref(), &io::format_labels(&r.labels))?;
    let art = &r.artifacts;
    if let Some(p) = &a.svg {
        let title = format!("{} clusters, {} anomalies", r.n_clusters, r.n_anomalies);
        write_file(p, &svg::scatter(art.embedding.coords(), &r.labels, &title))?;
    }
    if let Some(p) = &a.triangles {
        write_file(p, &art.triangulation.to_csv())?;
    }
    if let Some(dir) = &a.diag {
        fs::create_dir_all(dir).map_err(|e| CliError::Data(format!("{}: {e}", dir.display())))?;
        write_file(
            &dir.join("triangles.csv"),
            &pruning::diagnostics_csv(&art.triangulation, &art.sizes, &art.prune),
        )?;
        write_file(&dir.join("anomaly_groups.csv"), &art.anomaly.diagnostics_csv())?;
        write_file(&dir.join("initial_labels.csv"), &io::format_labels(&art.initial_labels))?;
        write_file(&dir.join("merged_labels.csv"), &io::format_labels(&art.merged_labels))?;
        // timings vary between runs, so they stay out of the files
        let mut summary = serde_json::to_value(d).map_err(data)?;
        if let Some(obj) = summary.as_object_mut() {
            obj.remove("timings");
        }
        let mut text = serde_json::to_string_pretty(&summary).map_err(data)?;
        text.push('\n');
        write_file(&dir.join("summary.json"), &text)?;
    }
    Ok(())
}

fn eval(a: EvalArgs) -> Result<()> {
    let t = io::load_labels(&a.truth).map_err(data)?;
    let p = io::load_labels(&a.pred).map_err(data)?;
    let e = metrics::evaluate(&t, &p, a.exclude_true_anomalies).map_err(data)?;
    println!("{}", serde_json::to_string(&e).map_err(data)?);
    Ok(())
}

fn bench_cmd(a: BenchArgs) -> Result<()> {
    if let Some(ns) = &a.scaling_n {
        let r = bench::runtime_scaling(ns, &a.scaling_d, a.trials, a.seed)
            .map_err(|e| CliError::Usage(e.to_string()))?;
        if let Some(k) = r.n_exponent {
            eprintln!("fitted exponent in n: {k:.3}");
        }
        if let Some(k) = r.d_exponent {
            eprintln!("fitted exponent in d: {k:.3}");
        }
        return emit(a.out.as_deref(), &r.to_csv());
    }
    let suite = a.suite.as_deref().expect("clap enforces the mode group");
    let specs = bench::load_suite(suite).map_err(data)?;
    if let Some(dir) = &a.svg_dir {
        fs::create_dir_all(dir).map_err(|e| CliError::Data(format!("{}: {e}", dir.display())))?;
    }
    let report = bench::run_suite(
        &specs,
        &SuiteOptions {
            svg_dir: a.svg_dir.clone(),
            workers: a.workers,
        },
    );
    for (name, rep, msg) in &report.failures {
        eprintln!("spec {name} repeat {rep} failed: {msg}");
    }
    emit(a.out.as_deref(), &report.to_csv(!a.no_timing))?;
    if let Some(p) = &a.aggregate_out {
        write_file(p, &report.aggregates_csv(!a.no_timing))?;
    }
    if report.rows.is_empty() && !report.failures.is_empty() {
        return Err(CliError::Data("every run failed".into()));
    }
    Ok(())
}

fn ablate(a: AblateArgs) -> Result<()> {
    let (x, emb) = load_input(&a.input)?;
    let truth = match &a.truth {
        Some(p) => Some(io::load_labels(p).map_err(data)?),
        None => None,
    };
    let params = a.params.params(emb.is_some());
    check_params(&params, emb.is_some())?;
    for v in &a.variants {
        if registry::variant(v).is_none() {
            return Err(CliError::Usage(format!(
                "unknown variant {v:?}; expected one of {:?}",
                registry::variants().names().collect::<Vec<_>>()
            )));
        }
    }
    let names: Vec<&str> = a.variants.iter().map(String::as_str).collect();
    let rows = bench::run_ablation(&x, truth.as_ref(), emb.as_ref(), &params, &names).map_err(data)?;
    emit(a.out.as_deref(), &bench::ablation_csv(&rows))
}

fn demo(a: DemoArgs) -> Result<()> {
    let text = match a.which {
        Demo::Backprojection => {
            let seeds: Vec<u64> = (0..a.seeds.unwrap_or(5)).collect();
            let mut setup = BackprojectionSetup::default();
            if let Some(p) = a.prune {
                setup.prune_param = p;
            }
            bench::backprojection_csv(&bench::backprojection_demo(&setup, &seeds).map_err(data)?)
        }
        Demo::Degradation => {
            let seeds: Vec<u64> = (0..a.seeds.unwrap_or(10)).collect();
            let rows =
                bench::degradation_sweep(
                &bench::DEGRADATION_EPSILONS,
                &seeds,
                a.prune.unwrap_or(bench::DEGRADATION_PRUNE),
            ).map_err(data)?;
            bench::degradation_csv(&rows)
        }
    };
    emit(a.out.as_deref(), &text)
}

fn sweep(a: SweepArgs) -> Result<()> {
    let (x, emb) = load_input(&a.input)?;
    let truth: LabelVector = io::load_labels(&a.truth).map_err(data)?;
    if truth.len() != x.n_points() {
        return Err(CliError::Data(format!(
            "truth has {} labels but the input has {} rows",
            truth.len(),
            x.n_points()
        )));
    }
    let base = DelTriCParams {
        anomaly_sensitivity: a.sensitivity,
        dim_reduction: if emb.is_some() {
            DimReduction::Imported
        } else {
            DimReduction::Pca
        },
        seed: a.seed,
        ..DelTriCParams::default()
    };
    base.validate().map_err(pipeline_err)?;
    let problem = Problem {
        data: &x,
        truth: &truth,
        embedding: emb.as_ref(),
    };
    let result = if a.grid_prune.is_some() || a.grid_merge.is_some() || a.grid_sensitivity.is_some() {
        let grid = ParamGrid {
            prune: a.grid_prune.unwrap_or(vec![base.prune_param]),
            merge: a.grid_merge.unwrap_or(vec![base.merge_param]),
            sensitivity: a.grid_sensitivity.unwrap_or(vec![base.anomaly_sensitivity]),
        };
        bench::grid_sweep(&problem, &base, &grid)
    } else {
        if a.probes == 0 {
            return Err(CliError::Usage("--probes must be >= 1".into()));
        }
        bench::random_sweep(&problem, &base, a.probes, a.seed)
    }
    .map_err(|e| match e {
        bench::BenchError::Pipeline(p) => pipeline_err(p),
        other => data(other),
    })?;
    if let Some(p) = &a.trace {
        write_file(p, &result.trace_csv())?;
    }
    let out = serde_json::json!({
        "prune_param": result.best.prune_param,
        "merge_param": result.best.merge_param,
        "anomaly_sensitivity": result.best.anomaly_sensitivity,
        "eval": result.best_eval,
    });
    println!("{out}");
    Ok(())
}
