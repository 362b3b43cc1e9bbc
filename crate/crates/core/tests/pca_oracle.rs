// Copyright 2026 The deltric Developers.
// SPDX-License-Identifier: Apache-2.0

mod common;

use common::{jacobi_eigen, rng};
use deltric::io::DataMatrix;
use deltric::projection::{pca2, principal_axes, EmbeddingSource};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

/// Data with a known, well separated spectrum: independent columns with
/// decreasing spread, mixed by a random rotation-ish linear map.
fn anisotropic(seed: u64, n: usize, d: usize) -> DataMatrix {
    let mut r = rng(seed);
    let mix: Vec<Vec<f64>> = (0..d).map(|_| (0..d).map(|_| r.random_range(-1.0..1.0)).collect()).collect();
    let rows: Vec<Vec<f64>> = (0..n)
        .map(|_| {
            let z: Vec<f64> = (0..d)
                .map(|k| {
                    let g: f64 = StandardNormal.sample(&mut r);
                    g * 3.0 / (k as f64 + 1.0) + 5.0
                })
                .collect();
            (0..d).map(|i| (0..d).map(|k| mix[i][k] * z[k]).sum()).collect()
        })
        .collect();
    DataMatrix::from_rows(&rows).unwrap()
}

fn oracle_projection(x: &DataMatrix) -> (Vec<[f64; 2]>, [f64; 2]) {
    let (n, d) = (x.n_points(), x.n_dims());
    let mean: Vec<f64> = (0..d).map(|k| x.rows().map(|r| r[k]).sum::<f64>() / n as f64).collect();
    let mut cov = vec![vec![0.0; d]; d];
    for r in x.rows() {
        for i in 0..d {
            for j in 0..d {
                cov[i][j] += (r[i] - mean[i]) * (r[j] - mean[j]) / (n as f64 - 1.0);
            }
        }
    }
    let (vals, vecs) = jacobi_eigen(cov);
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]));
    let axis = |k: usize| -> Vec<f64> {
        let col: Vec<f64> = (0..d).map(|i| vecs[i][k]).collect();
        let big = col.iter().copied().fold(0.0f64, |m, v| if v.abs() > m.abs() { v } else { m });
        col.iter().map(|v| v * big.signum()).collect()
    };
    let (a0, a1) = (axis(order[0]), axis(order[1]));
    let coords = x
        .rows()
        .map(|r| {
            let c: Vec<f64> = r.iter().zip(&mean).map(|(v, m)| v - m).collect();
            [
                c.iter().zip(&a0).map(|(p, q)| p * q).sum(),
                c.iter().zip(&a1).map(|(p, q)| p * q).sum(),
            ]
        })
        .collect();
    (coords, [vals[order[0]], vals[order[1]]])
}

#[test]
fn projection_matches_jacobi_oracle() {
    for (seed, d) in [(1, 2), (2, 3), (3, 5), (4, 10), (5, 20)] {
        let x = anisotropic(seed, 200, d);
        let e = pca2(&x, 0).unwrap();
        assert_eq!(e.source(), EmbeddingSource::PcaNative);
        let (expected, vals) = oracle_projection(&x);
        let (_, got_vals) = principal_axes(&x);
        for k in 0..2 {
            assert!((got_vals[k] - vals[k]).abs() <= 1e-9 * vals[0], "d={d}");
        }
        let scale = vals[0].sqrt();
        for (g, w) in e.coords().iter().zip(&expected) {
            for k in 0..2 {
                assert!((g[k] - w[k]).abs() <= 1e-8 * scale, "d={d}: {g:?} vs {w:?}");
            }
        }
    }
}

#[test]
fn projection_is_deterministic_and_centred() {
    let x = anisotropic(9, 300, 7);
    let a = pca2(&x, 0).unwrap();
    assert_eq!(a, pca2(&x, 123).unwrap());
    for k in 0..2 {
        let mean: f64 = a.coords().iter().map(|c| c[k]).sum::<f64>() / 300.0;
        assert!(mean.abs() < 1e-9);
    }
}

#[test]
fn rigid_translation_does_not_move_the_projection() {
    let x = anisotropic(11, 100, 4);
    let shifted = DataMatrix::from_rows(
        &x.rows().map(|r| r.iter().map(|v| v + 1e3).collect::<Vec<_>>()).collect::<Vec<_>>(),
    )
    .unwrap();
    let (a, b) = (pca2(&x, 0).unwrap(), pca2(&shifted, 0).unwrap());
    for (p, q) in a.coords().iter().zip(b.coords()) {
        assert!((p[0] - q[0]).abs() < 1e-8 && (p[1] - q[1]).abs() < 1e-8);
    }
}
