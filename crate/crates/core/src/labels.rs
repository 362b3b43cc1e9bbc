// Copyright 2026 The deltric Developers.
// SPDX-License-Identifier: Apache-2.0

use std::collections::HashMap;

/// Label reserved for points that belong to no cluster.
pub const ANOMALY: i64 = -1;

/// Per-point cluster labels. `-1` marks an anomaly.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct LabelVector(Vec<i64>);

impl LabelVector {
    pub fn new(labels: Vec<i64>) -> Self {
        Self(labels)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<i64> {
        self.0
    }

    pub fn get(&self, i: usize) -> i64 {
        self.0[i]
    }

    pub fn set(&mut self, i: usize, label: i64) {
        self.0[i] = label;
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> + '_ {
        self.0.iter().copied()
    }

    /// True when every label is `>= -1`.
    pub fn is_valid(&self) -> bool {
        self.0.iter().all(|&l| l >= ANOMALY)
    }

    pub fn n_anomalies(&self) -> usize {
        self.0.iter().filter(|&&l| l == ANOMALY).count()
    }

    /// Number of distinct non-negative labels.
    pub fn n_clusters(&self) -> usize {
        let mut seen: Vec<i64> = self.0.iter().copied().filter(|&l| l >= 0).collect();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }

    /// Relabel non-negative clusters to `0..k` ordered by the smallest point
    /// index carrying each label. Anomalies stay `-1`.
    pub fn canonicalize(&self) -> Self {
        let mut map: HashMap<i64, i64> = HashMap::new();
        let mut next = 0;
        let out = self
            .0
            .iter()
            .map(|&l| {
                if l < 0 {
                    ANOMALY
                } else {
                    *map.entry(l).or_insert_with(|| {
                        next += 1;
                        next - 1
                    })
                }
            })
            .collect();
        Self(out)
    }

    /// Member lists per non-negative label, keyed by label in ascending order.
    pub fn clusters(&self) -> Vec<(i64, Vec<usize>)> {
        let mut map: std::collections::BTreeMap<i64, Vec<usize>> = Default::default();
        for (i, &l) in self.0.iter().enumerate() {
            if l >= 0 {
                map.entry(l).or_default().push(i);
            }
        }
        map.into_iter().collect()
    }
}

impl From<Vec<i64>> for LabelVector {
    fn from(v: Vec<i64>) -> Self {
        Self(v)
    }
}

impl std::ops::Index<usize> for LabelVector {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_order_follows_first_occurrence() {
        let l = LabelVector::new(vec![7, -1, 3, 7, 3, 9]);
        assert_eq!(l.canonicalize().as_slice(), &[0, -1, 1, 0, 1, 2]);
        assert_eq!(l.n_clusters(), 3);
        assert_eq!(l.n_anomalies(), 1);
    }

    #[test]
    fn clusters_groups_members() {
        let l = LabelVector::new(vec![1, 0, 1, -1]);
        assert_eq!(l.clusters(), vec![(0, vec![1]), (1, vec![0, 2])]);
    }
}
