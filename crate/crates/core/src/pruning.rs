// Copyright 2026 The deltric Developers.
// SPDX-License-Identifier: Apache-2.0

//! Sigma pruning of oversized triangles.
//!
//! Triangle sizes are measured twice, in the original space and in the 2D
//! embedding, and each series is turned into robust z-scores
//! `(s - median) / MAD`. The threshold is `theta = mean(z) + sigma_f *
//! std(z)` over the original-space scores only, and a triangle survives
//! when `max(z, z_proj) <= theta`. An edge survives when at least one
//! triangle containing it survives.

use std::fmt::Write as _;

use crate::delaunay::{DelaunayError, PointSpace, Triangulation};
use crate::labels::LabelVector;
use crate::projection::Embedding;
use crate::registry::SizeMeasure;
use crate::stats;
use crate::union_find::UnionFind;

/// Per-triangle sizes, aligned with `Triangulation::triangles`.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleSizes {
    pub original: Vec<f64>,
    pub projected: Vec<f64>,
    pub mode: &'static str,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RobustStats {
    pub median: f64,
    pub mad: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PruneResult {
    pub keep_mask: Vec<bool>,
    pub theta: f64,
    /// `(z, z_proj)` per triangle.
    pub z_scores: Vec<(f64, f64)>,
    pub z_mean: f64,
    pub z_std: f64,
}

impl PruneResult {
    pub fn n_kept(&self) -> usize {
        self.keep_mask.iter().filter(|&&k| k).count()
    }
}

/// Undirected graph of surviving edges.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeGraph {
    pub n_vertices: usize,
    pub edges: Vec<(usize, usize)>,
}

pub fn triangle_sizes<S: PointSpace + ?Sized>(
    tri: &Triangulation,
    original: &S,
    proj: &Embedding,
    measure: &dyn SizeMeasure,
) -> Result<TriangleSizes, DelaunayError> {
    for found in [original.n_points(), proj.n_points()] {
        if found != tri.n_points() {
            return Err(DelaunayError::ShapeMismatch {
                expected: tri.n_points(),
                found,
            });
        }
    }
    let size_in = |space: &dyn Fn(usize, usize) -> f64| -> Vec<f64> {
        tri.triangles()
            .iter()
            .map(|&[i, j, k]| measure.size([space(i, j), space(j, k), space(k, i)]))
            .collect()
    };
    Ok(TriangleSizes {
        original: size_in(&|a, b| original.dist(a, b)),
        projected: size_in(&|a, b| proj.dist(a, b)),
        mode: measure.name(),
    })
}

/// Robust z-scores `(s - median) / MAD`.
///
/// A constant sample scores all zeros. Otherwise a zero MAD is floored at
/// `1e-12 * max(|median|, 1)`.
pub fn robust_z(sizes: &[f64]) -> (RobustStats, Vec<f64>) {
    let median = stats::median(sizes);
    let mad = stats::mad_around(sizes, median);
    let robust = RobustStats { median, mad };
    if sizes.iter().all(|&s| s == sizes[0]) {
        return (robust, vec![0.0; sizes.len()]);
    }
    let scale = if mad > 0.0 {
        mad
    } else {
        1e-12 * median.abs().max(1.0)
    };
    (robust, sizes.iter().map(|s| (s - median) / scale).collect())
}

/// `mean(z) + sigma_f * std(z)` with the population standard deviation.
pub fn prune_threshold(z: &[f64], sigma_f: f64) -> f64 {
    let mu = stats::mean(z);
    let sd = stats::population_std(z);
    let theta = mu + sigma_f * sd;
    // an infinite factor times zero spread leaves the mean
    if theta.is_nan() {
        mu
    } else {
        theta
    }
}

pub fn prune(tri: &Triangulation, sizes: &TriangleSizes, sigma_f: f64) -> (PruneResult, EdgeGraph) {
    let (_, z) = robust_z(&sizes.original);
    let (_, z_proj) = robust_z(&sizes.projected);
    let (theta, z_mean, z_std) = if z.is_empty() {
        (0.0, 0.0, 0.0)
    } else {
        (
            prune_threshold(&z, sigma_f),
            stats::mean(&z),
            stats::population_std(&z),
        )
    };
    let keep_mask: Vec<bool> = z
        .iter()
        .zip(&z_proj)
        .map(|(a, b)| a.max(*b) <= theta)
        .collect();
    let mut edges: Vec<(usize, usize)> = tri
        .triangles()
        .iter()
        .zip(&keep_mask)
        .filter(|(_, &k)| k)
        .flat_map(|(&[i, j, k], _)| [(i, j), (j, k), (i, k)])
        .collect();
    edges.sort_unstable();
    edges.dedup();
    (
        PruneResult {
            keep_mask,
            theta,
            z_scores: z.into_iter().zip(z_proj).collect(),
            z_mean,
            z_std,
        },
        EdgeGraph {
            n_vertices: tri.n_points(),
            edges,
        },
    )
}

/// Component labels numbered by each component's smallest vertex.
pub fn connected_components(graph: &EdgeGraph) -> LabelVector {
    let mut uf = UnionFind::new(graph.n_vertices);
    for &(a, b) in &graph.edges {
        uf.union(a, b);
    }
    LabelVector::new(uf.canonical_labels())
}

/// `i,j,k,s,s_proj,z,z_proj,kept` per triangle, with a header line.
pub fn diagnostics_csv(tri: &Triangulation, sizes: &TriangleSizes, result: &PruneResult) -> String {
    let mut out = String::from("i,j,k,s,s_proj,z,z_proj,kept\n");
    for (t, &[i, j, k]) in tri.triangles().iter().enumerate() {
        let (z, zp) = result.z_scores[t];
        let _ = writeln!(
            out,
            "{i},{j},{k},{:?},{:?},{:?},{:?},{}",
            sizes.original[t],
            sizes.projected[t],
            z,
            zp,
            u8::from(result.keep_mask[t])
        );
    }
    out
}
