// Copyright 2026 The deltric Developers.
// SPDX-License-Identifier: Apache-2.0

//! Synthetic benchmark data with ground truth.
//!
//! The main generator mixes Gaussian blobs, one noisy sinusoidal "snake"
//! cluster and uniformly scattered anomalies. Two smaller generators build
//! the fixtures for the pruning-degradation sweep and the back-projection
//! demonstration.
//!
//! Every generator is driven by PCG-64 with a separate stream per
//! component, so a fixed seed reproduces the same output on every platform.

use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use rand_pcg::Pcg64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::io::DataMatrix;
use crate::labels::{LabelVector, ANOMALY};
use crate::projection::{Embedding, EmbeddingSource};
use crate::stats;

#[derive(Debug, Error, PartialEq)]
pub enum ConfigError {
    #[error("invalid generator config: {0}")]
    Invalid(String),
}

/// Side of the hypercube blob centres are drawn from, centred at 0.
pub const CENTER_BOX: f64 = 20.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SynthConfig {
    pub n_points: usize,
    pub n_clusters: usize,
    pub n_dim: usize,
    pub overlap: f64,
    pub anomaly_fraction: f64,
    pub snake_fraction: f64,
    pub random_state: u64,
}

impl Default for SynthConfig {
    fn default() -> Self {
        Self {
            n_points: 500,
            n_clusters: 4,
            n_dim: 5,
            overlap: 0.1,
            anomaly_fraction: 0.05,
            snake_fraction: 0.20,
            random_state: 0,
        }
    }
}

/// Point counts per component.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SynthCounts {
    pub blobs: Vec<usize>,
    pub snake: usize,
    pub anomalies: usize,
}

impl SynthConfig {
    /// `overlap * sqrt(n_dim) * 2`.
    pub fn cluster_std(&self) -> f64 {
        self.overlap * (self.n_dim as f64).sqrt() * 2.0
    }

    /// Anomalies are `round(anomaly_fraction * n)`, the snake takes
    /// `round(snake_fraction * rest)` and the blobs share the remainder,
    /// earlier blobs taking one extra point each when it does not divide.
    pub fn counts(&self) -> SynthCounts {
        let anomalies = (self.anomaly_fraction * self.n_points as f64).round() as usize;
        let rest = self.n_points - anomalies.min(self.n_points);
        let snake = (self.snake_fraction * rest as f64).round() as usize;
        let blob_total = rest - snake.min(rest);
        let k = self.n_clusters.max(1);
        let blobs = (0..self.n_clusters)
            .map(|i| blob_total / k + usize::from(i < blob_total % k))
            .collect();
        SynthCounts {
            blobs,
            snake,
            anomalies,
        }
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let bad = |m: String| Err(ConfigError::Invalid(m));
        if self.n_clusters == 0 {
            return bad("n_clusters must be >= 1".into());
        }
        if self.n_points < self.n_clusters {
            return bad(format!(
                "n_points {} is smaller than n_clusters {}",
                self.n_points, self.n_clusters
            ));
        }
        if self.n_dim < 2 {
            return bad("n_dim must be >= 2".into());
        }
        if !(self.overlap.is_finite() && self.overlap >= 0.0) {
            return bad(format!("overlap {} must be finite and >= 0", self.overlap));
        }
        if !(0.0..1.0).contains(&self.anomaly_fraction) {
            return bad(format!(
                "anomaly_fraction {} outside [0, 1)",
                self.anomaly_fraction
            ));
        }
        if !(0.0..1.0).contains(&self.snake_fraction) {
            return bad(format!("snake_fraction {} outside [0, 1)", self.snake_fraction));
        }
        if self.counts().blobs.contains(&0) {
            return bad("too few points left for every blob to get one".into());
        }
        Ok(())
    }
}

const STREAM_CENTERS: u128 = 1;
const STREAM_BLOBS: u128 = 2;
const STREAM_SNAKE: u128 = 3;
const STREAM_ANOMALIES: u128 = 4;
const STREAM_EXTRA: u128 = 5;

/// PCG-64 seeded from `seed` on a component-specific stream.
pub fn stream(seed: u64, id: u128) -> Pcg64 {
    Pcg64::new((u128::from(seed) << 64) | 0x853c_49e6_748f_ea9b, id)
}

fn normal(rng: &mut Pcg64) -> f64 {
    StandardNormal.sample(rng)
}

/// Blobs labelled `0..n_clusters`, the snake labelled `n_clusters`, and
/// anomalies labelled `-1`, in that row order.
pub fn generate(config: &SynthConfig) -> Result<(DataMatrix, LabelVector), ConfigError> {
    config.validate()?;
    let d = config.n_dim;
    let std = config.cluster_std();
    let counts = config.counts();
    let seed = config.random_state;

    let mut rng = stream(seed, STREAM_CENTERS);
    let centers: Vec<Vec<f64>> = (0..config.n_clusters)
        .map(|_| {
            (0..d)
                .map(|_| rng.random_range(-CENTER_BOX / 2.0..CENTER_BOX / 2.0))
                .collect()
        })
        .collect();

    let mut values: Vec<f64> = Vec::with_capacity(config.n_points * d);
    let mut labels: Vec<i64> = Vec::with_capacity(config.n_points);
    let mut rng = stream(seed, STREAM_BLOBS);
    for (c, &count) in counts.blobs.iter().enumerate() {
        for _ in 0..count {
            values.extend(centers[c].iter().map(|m| m + std * normal(&mut rng)));
            labels.push(c as i64);
        }
    }
    let n_blob = labels.len();

    // snake: fit the unit curve into the central 80% box of the blobs
    let column = |k: usize| -> Vec<f64> { (0..n_blob).map(|i| values[i * d + k]).collect() };
    let mut lo = vec![0.0; d];
    let mut hi = vec![0.0; d];
    let mut mid = vec![0.0; d];
    for k in 0..d {
        let col = column(k);
        lo[k] = stats::quantile(&col, 0.1);
        hi[k] = stats::quantile(&col, 0.9);
        mid[k] = stats::median(&col);
    }
    let noise = 0.1 * std;
    let mut rng = stream(seed, STREAM_SNAKE);
    for _ in 0..counts.snake {
        let t = rng.random_range(0.0..4.0 * PI);
        let unit = [t.sin(), t.cos()];
        for k in 0..d {
            let v = if k < 2 {
                lo[k] + (unit[k] + 1.0) / 2.0 * (hi[k] - lo[k])
            } else {
                mid[k]
            };
            values.push(v + noise * normal(&mut rng));
        }
        labels.push(config.n_clusters as i64);
    }

    let n_regular = labels.len();
    let mut bb_lo = vec![f64::INFINITY; d];
    let mut bb_hi = vec![f64::NEG_INFINITY; d];
    for i in 0..n_regular {
        for k in 0..d {
            bb_lo[k] = bb_lo[k].min(values[i * d + k]);
            bb_hi[k] = bb_hi[k].max(values[i * d + k]);
        }
    }
    let mut rng = stream(seed, STREAM_ANOMALIES);
    for _ in 0..counts.anomalies {
        for k in 0..d {
            let u: f64 = rng.random();
            values.push(bb_lo[k] + u * (bb_hi[k] - bb_lo[k]));
        }
        labels.push(ANOMALY);
    }

    let m = DataMatrix::new(labels.len(), d, values)
        .map_err(|e| ConfigError::Invalid(e.to_string()))?;
    Ok((m, LabelVector::new(labels)))
}

/// Mean intra-manifold spacing used by [`generate_degradation_pair`].
pub const DEGRADATION_SPACING: f64 = 0.88;
const STRIP_COLS: usize = 40;
const STRIP_ROWS: usize = 4;

/// Mean distance from each point to its nearest other point.
pub fn mean_nn_distance(points: &[[f64; 2]]) -> f64 {
    let total: f64 = points
        .iter()
        .enumerate()
        .map(|(i, p)| {
            points
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(_, q)| (p[0] - q[0]).hypot(p[1] - q[1]))
                .fold(f64::INFINITY, f64::min)
        })
        .sum();
    total / points.len() as f64
}

fn strip(rng: &mut Pcg64) -> Vec<[f64; 2]> {
    let mut pts = Vec::with_capacity(STRIP_COLS * STRIP_ROWS);
    for r in 0..STRIP_ROWS {
        for c in 0..STRIP_COLS {
            // boundary points only move along their edge, so the strip
            // outline stays a straight-sided rectangle
            let edge_col = c == 0 || c == STRIP_COLS - 1;
            let edge_row = r == 0 || r == STRIP_ROWS - 1;
            let dx = rng.random_range(-0.15..0.15);
            let dy = rng.random_range(-0.15..0.15);
            pts.push([
                c as f64 + if edge_col { 0.0 } else { dx },
                r as f64 + if edge_row { 0.0 } else { dy },
            ]);
        }
    }
    let scale = DEGRADATION_SPACING / mean_nn_distance(&pts);
    pts.iter().map(|p| [p[0] * scale, p[1] * scale]).collect()
}

/// Two parallel jittered strips, each with mean nearest-neighbour spacing
/// 0.88, separated vertically by a gap of exactly `epsilon`. Interior grid
/// points are jittered in both axes; points on a strip's outline only along it.
pub fn generate_degradation_pair(epsilon: f64, seed: u64) -> Result<(DataMatrix, LabelVector), ConfigError> {
    if !(epsilon.is_finite() && epsilon > 0.0) {
        return Err(ConfigError::Invalid(format!("epsilon {epsilon} must be > 0")));
    }
    let mut rng = stream(seed, STREAM_EXTRA);
    let lower = strip(&mut rng);
    let upper = strip(&mut rng);
    let top = lower.iter().map(|p| p[1]).fold(f64::NEG_INFINITY, f64::max);
    let bottom = upper.iter().map(|p| p[1]).fold(f64::INFINITY, f64::min);
    let shift = top + epsilon - bottom;
    let mut rows: Vec<[f64; 2]> = lower.clone();
    rows.extend(upper.iter().map(|p| [p[0], p[1] + shift]));
    let mut labels = vec![0i64; lower.len()];
    labels.extend(std::iter::repeat_n(1, upper.len()));
    let m = DataMatrix::from_rows(&rows).map_err(|e| ConfigError::Invalid(e.to_string()))?;
    Ok((m, LabelVector::new(labels)))
}

/// One standard Gaussian blob in `n_dim` dimensions; the `n_tail` points
/// farthest from the sample mean are labelled `-1`, the rest `0`.
pub fn generate_backprojection_demo(
    n_points: usize,
    n_dim: usize,
    n_tail: usize,
    seed: u64,
) -> Result<(DataMatrix, LabelVector), ConfigError> {
    if n_dim < 3 {
        return Err(ConfigError::Invalid("n_dim must be >= 3".into()));
    }
    if n_tail >= n_points {
        return Err(ConfigError::Invalid(format!(
            "n_tail {n_tail} must be below n_points {n_points}"
        )));
    }
    let mut rng = stream(seed, STREAM_BLOBS);
    let values: Vec<f64> = (0..n_points * n_dim).map(|_| normal(&mut rng)).collect();
    let m = DataMatrix::new(n_points, n_dim, values).map_err(|e| ConfigError::Invalid(e.to_string()))?;
    let mut mean = vec![0.0; n_dim];
    for row in m.rows() {
        for (a, v) in mean.iter_mut().zip(row) {
            *a += v / n_points as f64;
        }
    }
    let mut by_dist: Vec<(f64, usize)> = m
        .rows()
        .enumerate()
        .map(|(i, r)| {
            let d2: f64 = r.iter().zip(&mean).map(|(v, c)| (v - c) * (v - c)).sum();
            (d2, i)
        })
        .collect();
    by_dist.sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
    let mut labels = vec![0i64; n_points];
    for &(_, i) in by_dist.iter().take(n_tail) {
        labels[i] = ANOMALY;
    }
    Ok((m, LabelVector::new(labels)))
}

/// A 2D embedding of a back-projection demo blob in which the labelled
/// tail points land inside the cluster footprint.
///
/// Regular points keep their first two coordinates. Each tail point keeps
/// its planar direction but is moved to a radius drawn from the interior
/// of the footprint, mimicking a projection that folds the tail inward.
pub fn footprint_embedding(data: &DataMatrix, labels: &LabelVector, seed: u64) -> Embedding {
    let planar: Vec<[f64; 2]> = data.rows().map(|r| [r[0], r[1]]).collect();
    let radii: Vec<f64> = planar
        .iter()
        .zip(labels.iter())
        .filter(|(_, l)| *l != ANOMALY)
        .map(|(p, _)| p[0].hypot(p[1]))
        .collect();
    let inner = stats::median(&radii);
    let mut rng = stream(seed, STREAM_EXTRA);
    let coords = planar
        .iter()
        .zip(labels.iter())
        .map(|(p, l)| {
            if l != ANOMALY {
                return *p;
            }
            let u: f64 = rng.random();
            let r = inner * u.sqrt();
            let norm = p[0].hypot(p[1]);
            if norm > 0.0 {
                [p[0] / norm * r, p[1] / norm * r]
            } else {
                [r, 0.0]
            }
        })
        .collect();
    Embedding::new(coords, EmbeddingSource::Imported).expect("finite coordinates")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cluster_std_formula() {
        let c = SynthConfig {
            overlap: 0.5,
            n_dim: 4,
            ..Default::default()
        };
        assert_eq!(c.cluster_std(), 2.0);
    }

    #[test]
    fn label_histogram() {
        let c = SynthConfig {
            n_points: 500,
            n_clusters: 4,
            snake_fraction: 0.2,
            anomaly_fraction: 0.05,
            ..Default::default()
        };
        assert_eq!(
            c.counts(),
            SynthCounts {
                blobs: vec![95, 95, 95, 95],
                snake: 95,
                anomalies: 25
            }
        );
        let (m, l) = generate(&c).unwrap();
        assert_eq!(m.n_points(), 500);
        assert_eq!(l.n_anomalies(), 25);
        assert_eq!(l.iter().filter(|&x| x == 4).count(), 95);
        for k in 0..4 {
            assert_eq!(l.iter().filter(|&x| x == k).count(), 95);
        }
    }

    #[test]
    fn no_anomalies_when_fraction_zero() {
        let c = SynthConfig {
            anomaly_fraction: 0.0,
            ..Default::default()
        };
        assert_eq!(generate(&c).unwrap().1.n_anomalies(), 0);
    }

    #[test]
    fn config_errors() {
        let bad = [
            SynthConfig {
                n_points: 3,
                n_clusters: 4,
                ..Default::default()
            },
            SynthConfig {
                n_dim: 1,
                ..Default::default()
            },
            SynthConfig {
                anomaly_fraction: 1.0,
                ..Default::default()
            },
            SynthConfig {
                n_clusters: 0,
                ..Default::default()
            },
        ];
        for c in bad {
            assert!(generate(&c).is_err(), "{c:?}");
        }
    }

    #[test]
    fn anomalies_inside_regular_bounding_box() {
        let c = SynthConfig {
            n_points: 300,
            n_dim: 6,
            anomaly_fraction: 0.1,
            random_state: 3,
            ..Default::default()
        };
        let (m, l) = generate(&c).unwrap();
        for k in 0..6 {
            let reg: Vec<f64> = (0..300).filter(|&i| l[i] >= 0).map(|i| m.row(i)[k]).collect();
            let lo = reg.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = reg.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            for i in (0..300).filter(|&i| l[i] < 0) {
                assert!(m.row(i)[k] >= lo && m.row(i)[k] <= hi);
            }
        }
    }

    #[test]
    fn deterministic() {
        let c = SynthConfig::default();
        assert_eq!(generate(&c).unwrap(), generate(&c).unwrap());
        let other = SynthConfig {
            random_state: 1,
            ..c.clone()
        };
        assert_ne!(generate(&c).unwrap().0, generate(&other).unwrap().0);
    }

    #[test]
    fn degradation_spacing_is_calibrated() {
        for seed in 0..3 {
            let (m, l) = generate_degradation_pair(1.0, seed).unwrap();
            for label in [0, 1] {
                let pts: Vec<[f64; 2]> = (0..m.n_points())
                    .filter(|&i| l[i] == label)
                    .map(|i| [m.row(i)[0], m.row(i)[1]])
                    .collect();
                assert!((mean_nn_distance(&pts) - 0.88).abs() < 0.05);
            }
        }
        assert!(generate_degradation_pair(0.0, 0).is_err());
    }

    #[test]
    fn degradation_gap_is_epsilon() {
        let (m, l) = generate_degradation_pair(0.5, 7).unwrap();
        let top = (0..m.n_points())
            .filter(|&i| l[i] == 0)
            .map(|i| m.row(i)[1])
            .fold(f64::NEG_INFINITY, f64::max);
        let bottom = (0..m.n_points())
            .filter(|&i| l[i] == 1)
            .map(|i| m.row(i)[1])
            .fold(f64::INFINITY, f64::min);
        assert!((bottom - top - 0.5).abs() < 1e-12);
    }

    #[test]
    fn demo_tail_is_largest_norm() {
        let (m, l) = generate_backprojection_demo(200, 10, 0, 1).unwrap();
        assert_eq!(l.n_anomalies(), 0);
        let (m2, l2) = generate_backprojection_demo(200, 10, 12, 1).unwrap();
        assert_eq!(m, m2);
        assert_eq!(l2.n_anomalies(), 12);
        let mut mean = vec![0.0; 10];
        for r in m.rows() {
            for (a, v) in mean.iter_mut().zip(r) {
                *a += v / 200.0;
            }
        }
        let dist = |i: usize| -> f64 {
            m.row(i).iter().zip(&mean).map(|(v, c)| (v - c).powi(2)).sum()
        };
        let min_tail = (0..200).filter(|&i| l2[i] < 0).map(dist).fold(f64::INFINITY, f64::min);
        let max_core = (0..200).filter(|&i| l2[i] == 0).map(dist).fold(0.0, f64::max);
        assert!(min_tail > max_core);
        assert!(generate_backprojection_demo(200, 2, 3, 1).is_err());
    }

    #[test]
    fn footprint_keeps_tail_inside() {
        let (m, l) = generate_backprojection_demo(300, 10, 15, 4).unwrap();
        let e = footprint_embedding(&m, &l, 4);
        let radius = |p: [f64; 2]| p[0].hypot(p[1]);
        let core_max = (0..300).filter(|&i| l[i] == 0).map(|i| radius(e.point(i))).fold(0.0, f64::max);
        for i in (0..300).filter(|&i| l[i] < 0) {
            assert!(radius(e.point(i)) < core_max);
        }
    }
}
