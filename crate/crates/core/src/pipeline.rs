// Copyright 2026 The deltric Developers.
// SPDX-License-Identifier: Apache-2.0

//! End-to-end clustering: project, triangulate, prune, merge, and resolve
//! anomalies.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_pcg::Pcg64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::anomaly::{self, AnomalyOutcome, AnomalyParams, ScoreScales};
use crate::delaunay::{self, DelaunayError, Triangulation};
use crate::io::DataMatrix;
use crate::labels::{LabelVector, ANOMALY};
use crate::merging;
use crate::projection::{Embedding, ProjectionError};
use crate::pruning::{self, PruneResult, TriangleSizes};
use crate::registry::{self, ImportedProjector, PcaProjector, Projector};

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("projection stage: {0}")]
    Project(#[source] ProjectionError),
    #[error("triangulation stage: {0}")]
    Triangulate(#[source] DelaunayError),
    #[error("pruning stage: {0}")]
    Prune(#[source] DelaunayError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DimReduction {
    Pca,
    Imported,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DelTriCParams {
    /// Pruning factor applied to the spread of triangle z-scores.
    pub prune_param: f64,
    /// Pruning factor for the representative triangulation.
    pub merge_param: f64,
    /// Clusters with at most this many points are anomaly groups.
    pub tau: usize,
    /// 1 keeps every anomaly group separate, 0 merges all that can be.
    pub anomaly_sensitivity: f64,
    pub dim_reduction: DimReduction,
    /// Measure triangle sizes in the original space as well as the embedding.
    pub back_projection: bool,
    pub merging_enabled: bool,
    /// Name of a registered [`registry::SizeMeasure`].
    pub size_mode: String,
    pub seed: u64,
    /// Z-score each column before PCA.
    pub standardize: bool,
    /// Jitter collinear embeddings by `1e-9` of the bounding-box diagonal
    /// instead of failing.
    pub jitter_on_collinear: bool,
}

impl Default for DelTriCParams {
    fn default() -> Self {
        Self {
            prune_param: 0.3,
            merge_param: -0.8,
            tau: 3,
            anomaly_sensitivity: 0.99,
            dim_reduction: DimReduction::Pca,
            back_projection: true,
            merging_enabled: true,
            size_mode: "max_edge".to_string(),
            seed: 0,
            standardize: false,
            jitter_on_collinear: false,
        }
    }
}

pub const PRUNE_RANGE: (f64, f64) = (0.5, 2.0);
pub const MERGE_RANGE: (f64, f64) = (-2.0, -0.5);

impl DelTriCParams {
    pub fn validate(&self) -> Result<(), PipelineError> {
        if !self.prune_param.is_finite() || !self.merge_param.is_finite() {
            return Err(PipelineError::InvalidParams(
                "prune and merge parameters must be finite".into(),
            ));
        }
        AnomalyParams {
            tau: self.tau,
            sensitivity: self.anomaly_sensitivity,
        }
        .validate()
        .map_err(|e| PipelineError::InvalidParams(e.to_string()))?;
        if registry::size_measure(&self.size_mode).is_none() {
            return Err(PipelineError::InvalidParams(format!(
                "unknown size mode {:?}; expected one of {:?}",
                self.size_mode,
                registry::size_measures().names().collect::<Vec<_>>()
            )));
        }
        Ok(())
    }

    /// Soft warnings for parameters outside the usual tuning ranges.
    pub fn warnings(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !(self.prune_param > PRUNE_RANGE.0 && self.prune_param < PRUNE_RANGE.1) {
            out.push(format!(
                "prune_param {} is outside the usual range ({}, {})",
                self.prune_param, PRUNE_RANGE.0, PRUNE_RANGE.1
            ));
        }
        if !(self.merge_param > MERGE_RANGE.0 && self.merge_param < MERGE_RANGE.1) {
            out.push(format!(
                "merge_param {} is outside the usual range ({}, {})",
                self.merge_param, MERGE_RANGE.0, MERGE_RANGE.1
            ));
        }
        out
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct StageTimings {
    pub project_ms: f64,
    pub triangulate_ms: f64,
    pub prune_ms: f64,
    pub merge_ms: f64,
    pub anomaly_ms: f64,
}

impl StageTimings {
    pub fn total_ms(&self) -> f64 {
        self.project_ms + self.triangulate_ms + self.prune_ms + self.merge_ms + self.anomaly_ms
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Diagnostics {
    pub timings: StageTimings,
    pub n_duplicates: usize,
    pub jittered: bool,
    pub n_triangles: usize,
    pub n_triangles_kept: usize,
    pub theta_prune: f64,
    pub n_initial_clusters: usize,
    pub merges: usize,
    pub theta_merge: Option<f64>,
    pub n_anomaly_groups: usize,
    pub n_groups_merged: usize,
    pub delta: f64,
}

/// Intermediate products kept for inspection and diagnostic dumps. Point
/// indices refer to the input rows.
#[derive(Debug, Clone)]
pub struct StageArtifacts {
    pub embedding: Embedding,
    pub triangulation: Triangulation,
    pub sizes: TriangleSizes,
    pub prune: PruneResult,
    pub initial_labels: LabelVector,
    pub merged_labels: LabelVector,
    pub anomaly: AnomalyOutcome,
}

#[derive(Debug, Clone)]
pub struct ClusteringResult {
    pub labels: LabelVector,
    pub n_clusters: usize,
    pub n_anomalies: usize,
    pub diagnostics: Diagnostics,
    pub artifacts: StageArtifacts,
}

fn elapsed_ms(t: Instant) -> f64 {
    t.elapsed().as_secs_f64() * 1e3
}

fn jitter(embedding: &Embedding, seed: u64) -> Embedding {
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for c in embedding.coords() {
        for k in 0..2 {
            lo[k] = lo[k].min(c[k]);
            hi[k] = hi[k].max(c[k]);
        }
    }
    let scale = 1e-9 * (hi[0] - lo[0]).hypot(hi[1] - lo[1]);
    let mut rng = Pcg64::seed_from_u64(seed ^ 0x6a69_7474_6572);
    let coords = embedding
        .coords()
        .iter()
        .map(|c| {
            [
                c[0] + scale * rng.random_range(-1.0..1.0),
                c[1] + scale * rng.random_range(-1.0..1.0),
            ]
        })
        .collect();
    Embedding::new(coords, embedding.source()).expect("jittered coordinates are finite")
}

/// Clusters `data`, returning labels in `{-1} ∪ 0..k` numbered by each
/// cluster's smallest point index.
///
/// `external_embedding` must be given exactly when
/// `params.dim_reduction` is [`DimReduction::Imported`].
pub fn fit_predict(
    data: &DataMatrix,
    params: &DelTriCParams,
    external_embedding: Option<&Embedding>,
) -> Result<ClusteringResult, PipelineError> {
    params.validate()?;
    let measure = registry::size_measure(&params.size_mode).expect("validated size mode");
    let mut diag = Diagnostics::default();
    let n = data.n_points();

    let t = Instant::now();
    let projector: Box<dyn Projector> = match (params.dim_reduction, external_embedding) {
        (DimReduction::Pca, None) => Box::new(PcaProjector {
            standardize: params.standardize,
        }),
        (DimReduction::Imported, Some(e)) => Box::new(ImportedProjector {
            embedding: e.clone(),
        }),
        (DimReduction::Pca, Some(_)) => {
            return Err(PipelineError::InvalidParams(
                "an external embedding was given but dim_reduction is pca".into(),
            ))
        }
        (DimReduction::Imported, None) => {
            return Err(PipelineError::InvalidParams(
                "dim_reduction is imported but no embedding was given".into(),
            ))
        }
    };
    let embedding = projector
        .project(data, params.seed)
        .map_err(PipelineError::Project)?;
    diag.timings.project_ms = elapsed_ms(t);

    // Work on one copy of every distinct embedded point.
    let t = Instant::now();
    let mut tri_full = match delaunay::triangulate_embedding(&embedding) {
        Err(DelaunayError::Collinear) if params.jitter_on_collinear => {
            diag.jittered = true;
            delaunay::triangulate_embedding(&jitter(&embedding, params.seed))
        }
        other => other,
    }
    .map_err(PipelineError::Triangulate)?;
    let representative = tri_full.representative().to_vec();
    let unique: Vec<usize> = (0..n).filter(|&i| representative[i] == i).collect();
    diag.n_duplicates = n - unique.len();
    let mut local_of = vec![usize::MAX; n];
    for (l, &g) in unique.iter().enumerate() {
        local_of[g] = l;
    }
    let local_tri = Triangulation::from_triangles(
        unique.len(),
        tri_full
            .triangles()
            .iter()
            .map(|t| t.map(|v| local_of[v]))
            .collect(),
    );
    let proj = embedding.select_rows(&unique);
    let original = if params.back_projection {
        data.select_rows(&unique)
    } else {
        proj.to_matrix()
    };
    diag.timings.triangulate_ms = elapsed_ms(t);

    let t = Instant::now();
    let sizes = pruning::triangle_sizes(&local_tri, &original, &proj, measure)
        .map_err(PipelineError::Prune)?;
    let (prune, graph) = pruning::prune(&local_tri, &sizes, params.prune_param);
    let initial = pruning::connected_components(&graph);
    diag.n_triangles = local_tri.triangles().len();
    diag.n_triangles_kept = prune.n_kept();
    diag.theta_prune = prune.theta;
    diag.n_initial_clusters = initial.n_clusters();
    diag.timings.prune_ms = elapsed_ms(t);

    let t = Instant::now();
    let merged = if params.merging_enabled {
        let reps = merging::compute_representatives(&initial, &proj);
        let outcome =
            merging::merge_clusters(&initial, &reps, &original, &proj, params.merge_param, measure);
        diag.merges = outcome.merges;
        diag.theta_merge = outcome.prune.as_ref().map(|p| p.theta);
        outcome.labels
    } else {
        initial.clone()
    };
    diag.timings.merge_ms = elapsed_ms(t);

    let t = Instant::now();
    let anomaly_params = AnomalyParams {
        tau: params.tau,
        sensitivity: params.anomaly_sensitivity,
    };
    let (mut groups, provisional) = anomaly::detect_anomaly_groups(&merged, params.tau);
    anomaly::attach_neighbors(&mut groups, &local_tri);
    let outcome = anomaly::score_and_merge(
        &groups,
        &provisional,
        &original,
        &proj,
        ScoreScales::from_sizes(&sizes),
        anomaly_params,
    );
    diag.n_anomaly_groups = groups.len();
    diag.n_groups_merged = outcome.n_merged();
    diag.delta = outcome.delta;
    diag.timings.anomaly_ms = elapsed_ms(t);

    let local_final = outcome.labels.canonicalize();
    let expand = |local: &LabelVector| -> LabelVector {
        LabelVector::new(
            (0..n)
                .map(|i| local[local_of[representative[i]]])
                .collect(),
        )
        .canonicalize()
    };
    let labels = expand(&local_final);
    let n_clusters = labels.n_clusters();
    let n_anomalies = labels.iter().filter(|&l| l == ANOMALY).count();

    // Re-express per-point artifacts in input row indices.
    tri_full = Triangulation::from_triangles(n, tri_full.triangles().to_vec());
    let mut anomaly_out = outcome;
    for g in &mut anomaly_out.groups {
        g.points.iter_mut().for_each(|p| *p = unique[*p]);
    }
    anomaly_out.labels = expand(&anomaly_out.labels);

    Ok(ClusteringResult {
        labels,
        n_clusters,
        n_anomalies,
        diagnostics: diag,
        artifacts: StageArtifacts {
            embedding,
            triangulation: tri_full,
            sizes,
            prune,
            initial_labels: expand(&initial),
            merged_labels: expand(&merged),
            anomaly: anomaly_out,
        },
    })
}
