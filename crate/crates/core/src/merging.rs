// Copyright 2026 The deltric Developers.
// SPDX-License-Identifier: Apache-2.0

//! Merging of initial clusters through a triangulation of their
//! representatives.
//!
//! Each cluster is represented by the member closest to its projected
//! mean. The representatives are triangulated in the embedding, sigma
//! pruning is applied with the merge parameter, and clusters whose
//! representatives stay connected are united.

use crate::delaunay::{self, PointSpace};
use crate::labels::{LabelVector, ANOMALY};
use crate::projection::Embedding;
use crate::pruning::{self, PruneResult};
use crate::registry::SizeMeasure;
use crate::union_find::UnionFind;

#[derive(Debug, Clone, PartialEq)]
pub struct Representatives {
    pub cluster_ids: Vec<i64>,
    pub rep_point_index: Vec<usize>,
    pub rep_coords_proj: Vec<[f64; 2]>,
}

impl Representatives {
    pub fn len(&self) -> usize {
        self.cluster_ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cluster_ids.is_empty()
    }
}

/// One representative per non-anomaly cluster, in ascending label order.
/// Ties in distance go to the lower point index.
pub fn compute_representatives(labels: &LabelVector, proj: &Embedding) -> Representatives {
    let mut out = Representatives {
        cluster_ids: Vec::new(),
        rep_point_index: Vec::new(),
        rep_coords_proj: Vec::new(),
    };
    for (id, members) in labels.clusters() {
        let n = members.len() as f64;
        let (sx, sy) = members.iter().fold((0.0, 0.0), |(x, y), &p| {
            let c = proj.point(p);
            (x + c[0], y + c[1])
        });
        let mean = [sx / n, sy / n];
        let mut best = members[0];
        let mut best_d = f64::INFINITY;
        for &p in &members {
            let c = proj.point(p);
            let d = (c[0] - mean[0]).powi(2) + (c[1] - mean[1]).powi(2);
            if d < best_d {
                best_d = d;
                best = p;
            }
        }
        out.cluster_ids.push(id);
        out.rep_point_index.push(best);
        out.rep_coords_proj.push(proj.point(best));
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct MergeOutcome {
    pub labels: LabelVector,
    /// Number of clusters absorbed into another (`k_before - k_after`).
    pub merges: usize,
    pub prune: Option<PruneResult>,
}

/// Restricts a point space to a list of rows.
struct Subset<'a, S: ?Sized> {
    space: &'a S,
    rows: &'a [usize],
}

impl<S: PointSpace + ?Sized> PointSpace for Subset<'_, S> {
    fn n_points(&self) -> usize {
        self.rows.len()
    }
    fn dist(&self, a: usize, b: usize) -> f64 {
        self.space.dist(self.rows[a], self.rows[b])
    }
}

/// Unites clusters whose representatives remain connected after sigma
/// pruning of the representative triangulation with `merge_param`.
///
/// Fewer than three representatives, or representatives that cannot be
/// triangulated, leave the labels unchanged. So does a representative
/// size distribution without spread (for instance a single triangle),
/// since then no triangle stands out as small.
pub fn merge_clusters<S: PointSpace + ?Sized>(
    labels: &LabelVector,
    reps: &Representatives,
    original: &S,
    proj: &Embedding,
    merge_param: f64,
    measure: &dyn SizeMeasure,
) -> MergeOutcome {
    let unchanged = |prune| MergeOutcome {
        labels: labels.clone(),
        merges: 0,
        prune,
    };
    let k = reps.len();
    if k < 3 {
        return unchanged(None);
    }
    let Ok(tri) = delaunay::triangulate(&reps.rep_coords_proj) else {
        return unchanged(None);
    };
    let rep_original = Subset {
        space: original,
        rows: &reps.rep_point_index,
    };
    let rep_proj = proj.select_rows(&reps.rep_point_index);
    let sizes = pruning::triangle_sizes(&tri, &rep_original, &rep_proj, measure)
        .expect("representative spaces share the triangulation's point count");
    let (result, graph) = pruning::prune(&tri, &sizes, merge_param);
    if result.z_std == 0.0 {
        return unchanged(Some(result));
    }
    let mut uf = UnionFind::new(k);
    for &(a, b) in &graph.edges {
        uf.union(a, b);
    }
    let group = uf.canonical_labels();
    let n_groups = group.iter().copied().max().map_or(0, |m| m as usize + 1);
    let group_of_cluster: std::collections::HashMap<i64, i64> = reps
        .cluster_ids
        .iter()
        .copied()
        .zip(group.iter().copied())
        .collect();
    let merged: Vec<i64> = labels
        .iter()
        .map(|l| {
            if l == ANOMALY {
                ANOMALY
            } else {
                group_of_cluster[&l]
            }
        })
        .collect();
    MergeOutcome {
        labels: LabelVector::new(merged).canonicalize(),
        merges: k - n_groups,
        prune: Some(result),
    }
}
