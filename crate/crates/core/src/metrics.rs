// Copyright 2026 The deltric Developers.
// SPDX-License-Identifier: Apache-2.0

//! External clustering scores: ARI, NMI and anomaly-class F1.
//!
//! The anomaly label `-1` is an ordinary category for ARI and NMI.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::labels::{LabelVector, ANOMALY};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MetricsError {
    #[error("label length mismatch: true has {true_len}, predicted has {pred_len}")]
    LengthMismatch { true_len: usize, pred_len: usize },
}

fn check(a: &LabelVector, b: &LabelVector) -> Result<(), MetricsError> {
    if a.len() != b.len() {
        return Err(MetricsError::LengthMismatch {
            true_len: a.len(),
            pred_len: b.len(),
        });
    }
    Ok(())
}

/// Co-occurrence counts between two labellings.
#[derive(Debug, Clone, PartialEq)]
pub struct ContingencyTable {
    pub counts: Vec<Vec<u64>>,
    pub row_sums: Vec<u64>,
    pub col_sums: Vec<u64>,
    pub n: u64,
}

impl ContingencyTable {
    pub fn new(a: &LabelVector, b: &LabelVector) -> Result<Self, MetricsError> {
        check(a, b)?;
        let index = |v: &LabelVector| -> BTreeMap<i64, usize> {
            let mut m = BTreeMap::new();
            for l in v.iter() {
                let next = m.len();
                m.entry(l).or_insert(next);
            }
            m
        };
        let (ra, rb) = (index(a), index(b));
        let mut counts = vec![vec![0u64; rb.len()]; ra.len()];
        for (x, y) in a.iter().zip(b.iter()) {
            counts[ra[&x]][rb[&y]] += 1;
        }
        let row_sums = counts.iter().map(|r| r.iter().sum()).collect();
        let col_sums = (0..rb.len())
            .map(|j| counts.iter().map(|r| r[j]).sum())
            .collect();
        Ok(Self {
            counts,
            row_sums,
            col_sums,
            n: a.len() as u64,
        })
    }
}

fn comb2(x: u64) -> f64 {
    (x as f64) * (x as f64 - 1.0) / 2.0
}

/// Adjusted Rand index. Identical degenerate partitions (one cluster
/// each, or all singletons) score 1.
pub fn ari(true_labels: &LabelVector, pred_labels: &LabelVector) -> Result<f64, MetricsError> {
    let t = ContingencyTable::new(true_labels, pred_labels)?;
    if t.n < 2 {
        return Ok(1.0);
    }
    let index: f64 = t.counts.iter().flatten().map(|&c| comb2(c)).sum();
    let sum_a: f64 = t.row_sums.iter().map(|&c| comb2(c)).sum();
    let sum_b: f64 = t.col_sums.iter().map(|&c| comb2(c)).sum();
    let expected = sum_a * sum_b / comb2(t.n);
    let max = (sum_a + sum_b) / 2.0;
    if max == expected {
        return Ok(1.0);
    }
    Ok((index - expected) / (max - expected))
}

fn entropy(counts: &[u64], n: f64) -> f64 {
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let p = c as f64 / n;
            -p * p.ln()
        })
        .sum()
}

/// Mutual information normalised by the arithmetic mean of the two
/// entropies (natural log).
pub fn nmi(true_labels: &LabelVector, pred_labels: &LabelVector) -> Result<f64, MetricsError> {
    let t = ContingencyTable::new(true_labels, pred_labels)?;
    if t.n == 0 {
        return Ok(1.0);
    }
    let n = t.n as f64;
    let (ha, hb) = (entropy(&t.row_sums, n), entropy(&t.col_sums, n));
    if ha == 0.0 && hb == 0.0 {
        return Ok(1.0);
    }
    if ha == 0.0 || hb == 0.0 {
        return Ok(0.0);
    }
    let mut mi = 0.0;
    for (i, row) in t.counts.iter().enumerate() {
        for (j, &c) in row.iter().enumerate() {
            if c > 0 {
                let c = c as f64;
                mi += c / n * (c * n / (t.row_sums[i] as f64 * t.col_sums[j] as f64)).ln();
            }
        }
    }
    Ok((mi / ((ha + hb) / 2.0)).clamp(0.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Prf {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
}

/// Precision, recall and F1 of predicting label `-1`. Undefined ratios
/// are 0.
pub fn anomaly_prf(true_labels: &LabelVector, pred_labels: &LabelVector) -> Result<Prf, MetricsError> {
    check(true_labels, pred_labels)?;
    let (mut tp, mut pred_pos, mut true_pos) = (0u64, 0u64, 0u64);
    for (t, p) in true_labels.iter().zip(pred_labels.iter()) {
        let (t, p) = (t == ANOMALY, p == ANOMALY);
        tp += u64::from(t && p);
        pred_pos += u64::from(p);
        true_pos += u64::from(t);
    }
    let ratio = |a: u64, b: u64| if b == 0 { 0.0 } else { a as f64 / b as f64 };
    let precision = ratio(tp, pred_pos);
    let recall = ratio(tp, true_pos);
    let f1 = if precision + recall == 0.0 {
        0.0
    } else {
        2.0 * precision * recall / (precision + recall)
    };
    Ok(Prf {
        precision,
        recall,
        f1,
    })
}

/// Everything `eval` reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Evaluation {
    pub ari: f64,
    pub nmi: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub n_clusters: usize,
    pub n_anomalies: usize,
}

/// Scores `pred` against `truth`. With `exclude_true_anomalies` the points
/// labelled `-1` in `truth` are dropped before ARI and NMI.
pub fn evaluate(
    truth: &LabelVector,
    pred: &LabelVector,
    exclude_true_anomalies: bool,
) -> Result<Evaluation, MetricsError> {
    check(truth, pred)?;
    let (t, p) = if exclude_true_anomalies {
        let keep: Vec<usize> = (0..truth.len()).filter(|&i| truth[i] != ANOMALY).collect();
        (
            LabelVector::new(keep.iter().map(|&i| truth[i]).collect()),
            LabelVector::new(keep.iter().map(|&i| pred[i]).collect()),
        )
    } else {
        (truth.clone(), pred.clone())
    };
    let prf = anomaly_prf(truth, pred)?;
    Ok(Evaluation {
        ari: ari(&t, &p)?,
        nmi: nmi(&t, &p)?,
        precision: prf.precision,
        recall: prf.recall,
        f1: prf.f1,
        n_clusters: pred.n_clusters(),
        n_anomalies: pred.n_anomalies(),
    })
}
