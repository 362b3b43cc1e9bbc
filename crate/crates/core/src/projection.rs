// Copyright 2026 The deltric Developers.
// SPDX-License-Identifier: Apache-2.0

//! Two-dimensional proxy embeddings: native PCA or an imported matrix.

use std::path::Path;

use nalgebra::{DMatrix, SymmetricEigen};
use thiserror::Error;

use crate::io::{self, DataMatrix, IoError, MatrixFormat};

#[derive(Debug, Error)]
pub enum ProjectionError {
    #[error("need at least 3 points to project, got {0}")]
    Degenerate(usize),
    #[error("embedding shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error(transparent)]
    Io(#[from] IoError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmbeddingSource {
    PcaNative,
    Imported,
}

/// `n x 2` projected coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    coords: Vec<[f64; 2]>,
    source: EmbeddingSource,
}

impl Embedding {
    pub fn new(coords: Vec<[f64; 2]>, source: EmbeddingSource) -> Result<Self, ProjectionError> {
        if let Some(i) = coords
            .iter()
            .position(|c| !c[0].is_finite() || !c[1].is_finite())
        {
            return Err(ProjectionError::ShapeMismatch(format!(
                "non-finite coordinate in row {}",
                i + 1
            )));
        }
        Ok(Self { coords, source })
    }

    /// Reads a 2-column matrix as an imported embedding.
    pub fn from_matrix(m: &DataMatrix) -> Result<Self, ProjectionError> {
        if m.n_dims() != 2 {
            return Err(ProjectionError::ShapeMismatch(format!(
                "embedding must have exactly 2 columns, found {}",
                m.n_dims()
            )));
        }
        Ok(Self {
            coords: m.rows().map(|r| [r[0], r[1]]).collect(),
            source: EmbeddingSource::Imported,
        })
    }

    pub fn coords(&self) -> &[[f64; 2]] {
        &self.coords
    }

    pub fn source(&self) -> EmbeddingSource {
        self.source
    }

    pub fn n_points(&self) -> usize {
        self.coords.len()
    }

    pub fn point(&self, i: usize) -> [f64; 2] {
        self.coords[i]
    }

    pub fn dist(&self, a: usize, b: usize) -> f64 {
        let (p, q) = (self.coords[a], self.coords[b]);
        (p[0] - q[0]).hypot(p[1] - q[1])
    }

    pub fn to_matrix(&self) -> DataMatrix {
        let values = self.coords.iter().flat_map(|c| c.iter().copied()).collect();
        DataMatrix::new(self.coords.len(), 2, values).expect("embedding coordinates are finite")
    }

    pub fn select_rows(&self, rows: &[usize]) -> Self {
        Self {
            coords: rows.iter().map(|&r| self.coords[r]).collect(),
            source: self.source,
        }
    }
}

/// Loads an externally computed embedding (CSV or DTRC) for `data`.
pub fn import_embedding(path: &Path, data: &DataMatrix) -> Result<Embedding, ProjectionError> {
    let format = MatrixFormat::detect(path)?;
    let m = io::load_matrix(path, format, false)?;
    check_embedding_matrix(&m, data)
}

pub fn check_embedding_matrix(m: &DataMatrix, data: &DataMatrix) -> Result<Embedding, ProjectionError> {
    if m.n_points() != data.n_points() {
        return Err(ProjectionError::ShapeMismatch(format!(
            "embedding has {} rows but the data has {}",
            m.n_points(),
            data.n_points()
        )));
    }
    Embedding::from_matrix(m)
}

/// Column-wise z-scoring; constant columns are only centred.
pub fn standardize(data: &DataMatrix) -> DataMatrix {
    let (n, d) = (data.n_points(), data.n_dims());
    let mut means = vec![0.0; d];
    for row in data.rows() {
        for (m, v) in means.iter_mut().zip(row) {
            *m += v;
        }
    }
    means.iter_mut().for_each(|m| *m /= n as f64);
    let mut sds = vec![0.0; d];
    for row in data.rows() {
        for ((s, v), m) in sds.iter_mut().zip(row).zip(&means) {
            *s += (v - m) * (v - m);
        }
    }
    sds.iter_mut().for_each(|s| *s = (*s / n as f64).sqrt());
    let values = data
        .rows()
        .flat_map(|row| {
            row.iter()
                .zip(&means)
                .zip(&sds)
                .map(|((v, m), s)| if *s > 0.0 { (v - m) / s } else { v - m })
                .collect::<Vec<_>>()
        })
        .collect();
    DataMatrix::new(n, d, values).expect("standardized values are finite")
}

/// Sample covariance of the rows and the column means.
pub fn covariance(data: &DataMatrix) -> (DMatrix<f64>, Vec<f64>) {
    let (n, d) = (data.n_points(), data.n_dims());
    let mut mean = vec![0.0; d];
    for row in data.rows() {
        for (m, v) in mean.iter_mut().zip(row) {
            *m += v;
        }
    }
    mean.iter_mut().for_each(|m| *m /= n as f64);
    let mut cov = DMatrix::<f64>::zeros(d, d);
    let mut centered = vec![0.0; d];
    for row in data.rows() {
        for ((c, v), m) in centered.iter_mut().zip(row).zip(&mean) {
            *c = v - m;
        }
        for i in 0..d {
            let ci = centered[i];
            for j in i..d {
                cov[(i, j)] += ci * centered[j];
            }
        }
    }
    let denom = (n.max(2) - 1) as f64;
    for i in 0..d {
        for j in i..d {
            let v = cov[(i, j)] / denom;
            cov[(i, j)] = v;
            cov[(j, i)] = v;
        }
    }
    (cov, mean)
}

/// The top two principal axes of the data as unit vectors, plus their
/// eigenvalues. With a single input dimension the second axis is zero.
pub fn principal_axes(data: &DataMatrix) -> ([Vec<f64>; 2], [f64; 2]) {
    let d = data.n_dims();
    let (cov, _) = covariance(data);
    let eig = SymmetricEigen::new(cov);
    let scale = eig.eigenvalues.iter().fold(1.0f64, |a, v| a.max(v.abs()));
    let tie = 1e-12 * scale;
    let mut order: Vec<usize> = (0..d).collect();
    let first_nonzero = |k: usize| {
        let col = eig.eigenvectors.column(k);
        col.iter().position(|v| v.abs() > 1e-12).unwrap_or(d)
    };
    order.sort_by(|&a, &b| {
        let (la, lb) = (eig.eigenvalues[a], eig.eigenvalues[b]);
        if (la - lb).abs() <= tie {
            first_nonzero(a).cmp(&first_nonzero(b)).then(a.cmp(&b))
        } else {
            lb.total_cmp(&la)
        }
    });
    let axis = |k: usize| -> Vec<f64> {
        let col = eig.eigenvectors.column(k);
        let mut best = 0;
        for (i, v) in col.iter().enumerate() {
            if v.abs() > col[best].abs() {
                best = i;
            }
        }
        let sign = if col[best] < 0.0 { -1.0 } else { 1.0 };
        col.iter().map(|v| v * sign).collect()
    };
    let first = axis(order[0]);
    let (second, l2) = if d >= 2 {
        (axis(order[1]), eig.eigenvalues[order[1]])
    } else {
        (vec![0.0; d], 0.0)
    };
    ([first, second], [eig.eigenvalues[order[0]], l2])
}

/// Projects mean-centred rows onto the top two principal axes.
///
/// Axes are ordered by decreasing eigenvalue and signed so that each
/// axis's largest-magnitude component is positive. `_seed` is unused:
/// PCA is deterministic.
pub fn pca2(data: &DataMatrix, _seed: u64) -> Result<Embedding, ProjectionError> {
    if data.n_points() < 3 {
        return Err(ProjectionError::Degenerate(data.n_points()));
    }
    let (_, mean) = covariance(data);
    let (axes, _) = principal_axes(data);
    let coords = data
        .rows()
        .map(|row| {
            let mut c = [0.0; 2];
            for (k, axis) in axes.iter().enumerate() {
                c[k] = row
                    .iter()
                    .zip(&mean)
                    .zip(axis)
                    .map(|((v, m), a)| (v - m) * a)
                    .sum();
            }
            c
        })
        .collect();
    Embedding::new(coords, EmbeddingSource::PcaNative)
}
