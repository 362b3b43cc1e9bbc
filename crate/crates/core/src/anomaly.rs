// Copyright 2026 The deltric Developers.
// SPDX-License-Identifier: Apache-2.0

//! Anomaly groups: detection, scoring against neighbouring clusters, and
//! merging.
//!
//! Clusters with at most `tau` members become anomaly groups. A group `A`
//! is scored against every cluster `C` reachable through a direct edge of
//! the stage-one triangulation:
//!
//! ```text
//! S(C | A) = (mu / n) * sum over edges (p, q), p in A, q in C of 1 / d(p, q)
//! d(p, q)  = max(alpha * |X_p - X_q|, |Y_p - Y_q|)
//! ```
//!
//! where `X` is the original space, `Y` the embedding, `n` the number of
//! edges leaving `A`, `mu` the mean projected triangle size and `alpha` the
//! ratio of projected to original median triangle size. The group joins the
//! best-scoring cluster when that score exceeds `delta`, the
//! `sensitivity`-quantile of all candidate scores in the run (`sensitivity`
//! 1 never merges, 0 always merges).

use std::fmt::Write as _;

use thiserror::Error;

use crate::delaunay::{PointSpace, Triangulation};
use crate::labels::{LabelVector, ANOMALY};
use crate::projection::Embedding;
use crate::pruning::TriangleSizes;
use crate::stats;

#[derive(Debug, Error, PartialEq)]
pub enum AnomalyError {
    #[error("points {0} and {1} coincide in both spaces")]
    ZeroDistance(usize, usize),
    #[error("invalid anomaly parameters: {0}")]
    InvalidParams(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnomalyGroup {
    /// Label the group carried before being flagged.
    pub cluster_id: i64,
    pub point_indices: Vec<usize>,
    /// `(anomaly point, neighbour outside the group)` triangulation edges.
    pub neighbor_edges: Vec<(usize, usize)>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnomalyParams {
    pub tau: usize,
    pub sensitivity: f64,
}

impl AnomalyParams {
    pub fn validate(&self) -> Result<(), AnomalyError> {
        if self.tau < 1 {
            return Err(AnomalyError::InvalidParams("tau must be >= 1".into()));
        }
        if !(0.0..=1.0).contains(&self.sensitivity) {
            return Err(AnomalyError::InvalidParams(format!(
                "anomaly sensitivity {} outside [0, 1]",
                self.sensitivity
            )));
        }
        Ok(())
    }
}

impl Default for AnomalyParams {
    fn default() -> Self {
        Self {
            tau: 3,
            sensitivity: 0.99,
        }
    }
}

/// Flags every cluster with at most `tau` members. Returns the groups, in
/// ascending order of their smallest point, and the labels with the
/// flagged points set to `-1`.
pub fn detect_anomaly_groups(labels: &LabelVector, tau: usize) -> (Vec<AnomalyGroup>, LabelVector) {
    let mut provisional = labels.clone();
    let mut groups: Vec<AnomalyGroup> = labels
        .clusters()
        .into_iter()
        .filter(|(_, members)| members.len() <= tau)
        .map(|(id, members)| AnomalyGroup {
            cluster_id: id,
            point_indices: members,
            neighbor_edges: Vec::new(),
        })
        .collect();
    groups.sort_by_key(|g| g.point_indices[0]);
    for g in &groups {
        for &p in &g.point_indices {
            provisional.set(p, ANOMALY);
        }
    }
    (groups, provisional)
}

/// Fills each group's edges to points outside the group.
pub fn attach_neighbors(groups: &mut [AnomalyGroup], tri: &Triangulation) {
    let adj = tri.neighbors();
    for g in groups.iter_mut() {
        g.neighbor_edges.clear();
        for &p in &g.point_indices {
            let mut qs: Vec<usize> = adj[p]
                .iter()
                .copied()
                .filter(|q| g.point_indices.binary_search(q).is_err())
                .collect();
            qs.sort_unstable();
            g.neighbor_edges.extend(qs.into_iter().map(|q| (p, q)));
        }
    }
}

/// `max(alpha * |X_p - X_q|, |Y_p - Y_q|)`; zero when the points coincide
/// in both spaces is reported as an error for the caller to floor.
pub fn anomaly_distance<S: PointSpace + ?Sized>(
    p: usize,
    q: usize,
    original: &S,
    proj: &Embedding,
    alpha: f64,
) -> Result<f64, AnomalyError> {
    let d = (alpha * original.dist(p, q)).max(proj.dist(p, q));
    if d == 0.0 {
        Err(AnomalyError::ZeroDistance(p, q))
    } else {
        Ok(d)
    }
}

/// Scale factors derived from the stage-one triangle sizes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScoreScales {
    pub alpha: f64,
    pub mu: f64,
    pub epsilon: f64,
}

impl ScoreScales {
    pub fn from_sizes(sizes: &TriangleSizes) -> Self {
        let med_proj = stats::median(&sizes.projected);
        let med_orig = stats::median(&sizes.original);
        let alpha = if med_orig > 0.0 && med_proj > 0.0 {
            med_proj / med_orig
        } else {
            1.0
        };
        let mu = if sizes.projected.is_empty() {
            1.0
        } else {
            stats::mean(&sizes.projected)
        };
        let epsilon = 1e-12 * if med_proj > 0.0 { med_proj } else { 1.0 };
        Self { alpha, mu, epsilon }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupReport {
    pub group_id: usize,
    pub points: Vec<usize>,
    /// `(cluster label, score)` for every candidate, ascending label.
    pub candidates: Vec<(i64, f64)>,
    pub best_cluster: Option<i64>,
    pub best_score: Option<f64>,
    pub merged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnomalyOutcome {
    pub labels: LabelVector,
    pub delta: f64,
    pub groups: Vec<GroupReport>,
}

impl AnomalyOutcome {
    pub fn n_merged(&self) -> usize {
        self.groups.iter().filter(|g| g.merged).count()
    }

    /// `group_id,points,best_cluster,best_score,delta,merged` per group.
    pub fn diagnostics_csv(&self) -> String {
        let mut out = String::from("group_id,points,best_cluster,best_score,delta,merged\n");
        for g in &self.groups {
            let points: Vec<String> = g.points.iter().map(|p| p.to_string()).collect();
            let _ = writeln!(
                out,
                "{},{},{},{},{:?},{}",
                g.group_id,
                points.join(" "),
                g.best_cluster.map_or(String::new(), |c| c.to_string()),
                g.best_score.map_or(String::new(), |s| format!("{s:?}")),
                self.delta,
                u8::from(g.merged)
            );
        }
        out
    }
}

/// Maps `sensitivity` to the merge threshold over all candidate scores.
pub fn merge_threshold(scores: &[f64], sensitivity: f64) -> f64 {
    if sensitivity >= 1.0 {
        f64::INFINITY
    } else if sensitivity <= 0.0 || scores.is_empty() {
        f64::NEG_INFINITY
    } else {
        stats::quantile(scores, sensitivity)
    }
}

/// Scores each group against the clusters around it and merges it into the
/// best one if the score clears the sensitivity threshold.
///
/// `labels` must be the provisional labels from [`detect_anomaly_groups`];
/// scores are computed against them for every group before any merge is
/// applied. Ties go to the smaller cluster label.
pub fn score_and_merge<S: PointSpace + ?Sized>(
    groups: &[AnomalyGroup],
    labels: &LabelVector,
    original: &S,
    proj: &Embedding,
    scales: ScoreScales,
    params: AnomalyParams,
) -> AnomalyOutcome {
    let mut reports: Vec<GroupReport> = groups
        .iter()
        .enumerate()
        .map(|(gid, g)| {
            let n = g.neighbor_edges.len();
            let mut sums: std::collections::BTreeMap<i64, f64> = Default::default();
            for &(p, q) in &g.neighbor_edges {
                let target = labels[q];
                if target == ANOMALY {
                    continue;
                }
                let d = anomaly_distance(p, q, original, proj, scales.alpha)
                    .unwrap_or(scales.epsilon)
                    .max(scales.epsilon);
                *sums.entry(target).or_insert(0.0) += 1.0 / d;
            }
            let candidates: Vec<(i64, f64)> = sums
                .into_iter()
                .map(|(c, s)| (c, scales.mu / n as f64 * s))
                .collect();
            let mut best: Option<(i64, f64)> = None;
            for &(c, s) in &candidates {
                if best.is_none_or(|(_, bs)| s > bs) {
                    best = Some((c, s));
                }
            }
            GroupReport {
                group_id: gid,
                points: g.point_indices.clone(),
                candidates,
                best_cluster: best.map(|b| b.0),
                best_score: best.map(|b| b.1),
                merged: false,
            }
        })
        .collect();

    let all_scores: Vec<f64> = reports
        .iter()
        .flat_map(|r| r.candidates.iter().map(|c| c.1))
        .collect();
    let delta = merge_threshold(&all_scores, params.sensitivity);

    let mut out = labels.clone();
    for r in &mut reports {
        if let (Some(c), Some(s)) = (r.best_cluster, r.best_score) {
            if s > delta {
                r.merged = true;
                for &p in &r.points {
                    out.set(p, c);
                }
            }
        }
    }
    AnomalyOutcome {
        labels: out,
        delta,
        groups: reports,
    }
}
