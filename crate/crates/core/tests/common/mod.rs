// Copyright 2026 The deltric Developers.
// SPDX-License-Identifier: Apache-2.0

//! Independent reference implementations used by the integration tests.
//! Nothing here calls into the library's own geometry or statistics.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_distr::{Distribution, StandardNormal};
use rand_pcg::Pcg64;

pub fn rng(seed: u64) -> Pcg64 {
    Pcg64::seed_from_u64(seed)
}

fn rat(x: f64) -> BigRational {
    BigRational::from_float(x).expect("finite coordinate")
}

fn sign(x: &BigRational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

/// Exact sign of the orientation of `a, b, c` (positive = counter-clockwise).
/// A floating-point evaluation decides when it clears a static error bound;
/// everything else goes to rational arithmetic.
pub fn orient_sign(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> i8 {
    let left = (b[0] - a[0]) * (c[1] - a[1]);
    let right = (b[1] - a[1]) * (c[0] - a[0]);
    let det = left - right;
    if det.abs() > 4e-16 * (left.abs() + right.abs()) && det.is_finite() {
        return det.signum() as i8;
    }
    orient_sign_exact(a, b, c)
}

pub fn orient_sign_exact(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> i8 {
    let (ax, ay, bx, by, cx, cy) = (rat(a[0]), rat(a[1]), rat(b[0]), rat(b[1]), rat(c[0]), rat(c[1]));
    let det = (&bx - &ax) * (&cy - &ay) - (&by - &ay) * (&cx - &ax);
    sign(&det)
}

/// Exact sign of the in-circle determinant; positive when `d` is strictly
/// inside the circle through the counter-clockwise triangle `a, b, c`.
pub fn incircle_sign(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> i8 {
    let (adx, ady) = (a[0] - d[0], a[1] - d[1]);
    let (bdx, bdy) = (b[0] - d[0], b[1] - d[1]);
    let (cdx, cdy) = (c[0] - d[0], c[1] - d[1]);
    let (alift, blift, clift) = (adx * adx + ady * ady, bdx * bdx + bdy * bdy, cdx * cdx + cdy * cdy);
    let det = alift * (bdx * cdy - cdx * bdy) + blift * (cdx * ady - adx * cdy) + clift * (adx * bdy - bdx * ady);
    let permanent = alift * ((bdx * cdy).abs() + (cdx * bdy).abs())
        + blift * ((cdx * ady).abs() + (adx * cdy).abs())
        + clift * ((adx * bdy).abs() + (bdx * ady).abs());
    if det.abs() > 2e-15 * permanent && det.is_finite() {
        return det.signum() as i8;
    }
    incircle_sign_exact(a, b, c, d)
}

pub fn incircle_sign_exact(a: [f64; 2], b: [f64; 2], c: [f64; 2], d: [f64; 2]) -> i8 {
    let row = |p: [f64; 2]| {
        let x = rat(p[0]) - rat(d[0]);
        let y = rat(p[1]) - rat(d[1]);
        let w = &x * &x + &y * &y;
        (x, y, w)
    };
    let (ax, ay, aw) = row(a);
    let (bx, by, bw) = row(b);
    let (cx, cy, cw) = row(c);
    let det = &ax * (&by * &cw - &bw * &cy) - &ay * (&bx * &cw - &bw * &cx) + &aw * (&bx * &cy - &by * &cx);
    sign(&det)
}

/// Twice the signed area, exactly.
pub fn double_area(a: [f64; 2], b: [f64; 2], c: [f64; 2]) -> BigRational {
    let (ax, ay, bx, by, cx, cy) = (rat(a[0]), rat(a[1]), rat(b[0]), rat(b[1]), rat(c[0]), rat(c[1]));
    (&bx - &ax) * (&cy - &ay) - (&by - &ay) * (&cx - &ax)
}

/// Strict convex hull (no collinear vertices), counter-clockwise, by
/// Andrew's monotone chain with exact orientation.
pub fn convex_hull(points: &[[f64; 2]]) -> Vec<[f64; 2]> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a[0].total_cmp(&b[0]).then(a[1].total_cmp(&b[1])));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<[f64; 2]> = Vec::new();
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &[f64; 2]>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 && orient_sign(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Number of input points lying on the hull boundary, collinear ones
/// included.
pub fn boundary_count(points: &[[f64; 2]]) -> usize {
    let hull = convex_hull(points);
    let on_segment = |p: [f64; 2], a: [f64; 2], b: [f64; 2]| {
        orient_sign(a, b, p) == 0
            && p[0] >= a[0].min(b[0])
            && p[0] <= a[0].max(b[0])
            && p[1] >= a[1].min(b[1])
            && p[1] <= a[1].max(b[1])
    };
    points
        .iter()
        .filter(|&&p| (0..hull.len()).any(|i| on_segment(p, hull[i], hull[(i + 1) % hull.len()])))
        .count()
}

/// Checks a triangulation of `points` (distinct) for the Delaunay
/// property and for tiling the convex hull.
pub fn check_delaunay(points: &[[f64; 2]], triangles: &[[usize; 3]]) -> Result<(), String> {
    let mut total = BigRational::zero();
    for t in triangles {
        let [a, b, c] = t.map(|i| points[i]);
        let (a, b, c) = match orient_sign(a, b, c) {
            1 => (a, b, c),
            -1 => (a, c, b),
            _ => return Err(format!("degenerate triangle {t:?}")),
        };
        total += double_area(a, b, c);
        for (i, &p) in points.iter().enumerate() {
            if t.contains(&i) {
                continue;
            }
            if incircle_sign(a, b, c, p) > 0 {
                return Err(format!("point {i} lies inside the circumcircle of {t:?}"));
            }
        }
    }
    let hull = convex_hull(points);
    let mut hull_area = BigRational::zero();
    for i in 1..hull.len().saturating_sub(1) {
        hull_area += double_area(hull[0], hull[i], hull[i + 1]);
    }
    if total != hull_area {
        return Err("triangles do not tile the convex hull".into());
    }
    Ok(())
}

pub fn uniform_points(rng: &mut Pcg64, n: usize) -> Vec<[f64; 2]> {
    (0..n).map(|_| [rng.random::<f64>(), rng.random::<f64>()]).collect()
}

/// `n` distinct points on a small integer lattice: many collinear and
/// cocircular subsets.
pub fn lattice_points(rng: &mut Pcg64, n: usize, side: i32) -> Vec<[f64; 2]> {
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    while out.len() < n {
        let p = (rng.random_range(0..side), rng.random_range(0..side));
        if seen.insert(p) {
            out.push([f64::from(p.0), f64::from(p.1)]);
        }
    }
    out
}

/// Pair-counting ARI: O(n^2) over all point pairs.
pub fn ari_pairs(a: &[i64], b: &[i64]) -> f64 {
    let n = a.len();
    let (mut both, mut only_a, mut only_b, mut neither) = (0f64, 0f64, 0f64, 0f64);
    for i in 0..n {
        for j in i + 1..n {
            match (a[i] == a[j], b[i] == b[j]) {
                (true, true) => both += 1.0,
                (true, false) => only_a += 1.0,
                (false, true) => only_b += 1.0,
                (false, false) => neither += 1.0,
            }
        }
    }
    let pairs = both + only_a + only_b + neither;
    if pairs == 0.0 {
        return 1.0;
    }
    let same_a = both + only_a;
    let same_b = both + only_b;
    let expected = same_a * same_b / pairs;
    let max = (same_a + same_b) / 2.0;
    if max == expected {
        return 1.0;
    }
    (both - expected) / (max - expected)
}

/// NMI from entropies of the joint and marginal distributions, arithmetic
/// normalisation.
pub fn nmi_entropy(a: &[i64], b: &[i64]) -> f64 {
    let n = a.len() as f64;
    let h = |counts: &BTreeMap<_, usize>| -> f64 {
        counts
            .values()
            .map(|&c| {
                let p = c as f64 / n;
                -p * p.ln()
            })
            .sum()
    };
    let mut ca = BTreeMap::new();
    let mut cb = BTreeMap::new();
    let mut cab = BTreeMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *ca.entry((x, 0)).or_insert(0) += 1;
        *cb.entry((y, 0)).or_insert(0) += 1;
        *cab.entry((x, y)).or_insert(0) += 1;
    }
    let (ha, hb, hab) = (h(&ca), h(&cb), h(&cab));
    if ha == 0.0 && hb == 0.0 {
        return 1.0;
    }
    if ha == 0.0 || hb == 0.0 {
        return 0.0;
    }
    let mi = ha + hb - hab;
    (mi / ((ha + hb) / 2.0)).clamp(0.0, 1.0)
}

pub fn sorted_median(xs: &[f64]) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// Eigen-decomposition of a symmetric matrix by cyclic Jacobi rotations.
/// Returns `(eigenvalues, eigenvectors as columns)`.
pub fn jacobi_eigen(mut a: Vec<Vec<f64>>) -> (Vec<f64>, Vec<Vec<f64>>) {
    let n = a.len();
    let mut v = vec![vec![0.0; n]; n];
    for (i, row) in v.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    for _sweep in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j] * a[i][j])
            .sum();
        if off < 1e-30 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for row in a.iter_mut() {
                    let (akp, akq) = (row[p], row[q]);
                    row[p] = c * akp - s * akq;
                    row[q] = s * akp + c * akq;
                }
                let (ap, aq) = (a[p].clone(), a[q].clone());
                for k in 0..n {
                    a[p][k] = c * ap[k] - s * aq[k];
                    a[q][k] = s * ap[k] + c * aq[k];
                }
                for row in v.iter_mut() {
                    let (vkp, vkq) = (row[p], row[q]);
                    row[p] = c * vkp - s * vkq;
                    row[q] = s * vkp + c * vkq;
                }
            }
        }
    }
    ((0..n).map(|i| a[i][i]).collect(), v)
}

/// Gaussian blobs in 2D with the given centres and spread, `per` points
/// each, labelled by blob.
pub fn blobs(rng: &mut Pcg64, centers: &[[f64; 2]], std: f64, per: usize) -> (Vec<[f64; 2]>, Vec<i64>) {
    let mut pts = Vec::new();
    let mut labels = Vec::new();
    for (k, c) in centers.iter().enumerate() {
        for _ in 0..per {
            let dx: f64 = StandardNormal.sample(rng);
            let dy: f64 = StandardNormal.sample(rng);
            pts.push([c[0] + std * dx, c[1] + std * dy]);
            labels.push(k as i64);
        }
    }
    (pts, labels)
}
