// Copyright 2026 The deltric Developers.
// SPDX-License-Identifier: Apache-2.0

mod common;

use common::{ari_pairs, nmi_entropy, rng};
use deltric::metrics::{anomaly_prf, ari, evaluate, nmi};
use deltric::LabelVector;
use proptest::prelude::*;
use rand::Rng;

#[test]
fn ari_and_nmi_match_oracles_on_random_pairs() {
    let mut r = rng(21);
    for _ in 0..500 {
        let n = r.random_range(1..=300);
        let ka = r.random_range(1..=8);
        let kb = r.random_range(1..=8);
        let a: Vec<i64> = (0..n).map(|_| r.random_range(-1..ka)).collect();
        // correlated predictions: copy some labels, randomise the rest
        let b: Vec<i64> = a
            .iter()
            .map(|&x| if r.random::<f64>() < 0.6 { x } else { r.random_range(-1..kb) })
            .collect();
        let (la, lb) = (LabelVector::new(a.clone()), LabelVector::new(b.clone()));
        let got = ari(&la, &lb).unwrap();
        let want = ari_pairs(&a, &b);
        assert!((got - want).abs() <= 1e-10, "ari {got} vs {want}");
        let got = nmi(&la, &lb).unwrap();
        let want = nmi_entropy(&a, &b);
        assert!((got - want).abs() <= 1e-10, "nmi {got} vs {want}");
    }
}

#[test]
fn f1_worked_example() {
    let mut t = vec![0i64; 100];
    let mut p = vec![0i64; 100];
    t[..10].fill(-1);
    p[5..25].fill(-1);
    let prf = anomaly_prf(&LabelVector::new(t), &LabelVector::new(p)).unwrap();
    assert_eq!(prf.f1, 2.0 * 0.25 * 0.5 / 0.75);
    assert!((prf.f1 - 1.0 / 3.0).abs() < 1e-15);
}

#[test]
fn excluding_true_anomalies_only_changes_partition_scores() {
    let t = LabelVector::new(vec![0, 0, 0, 1, 1, 1, -1, -1]);
    let p = LabelVector::new(vec![0, 0, 0, 1, 1, 1, -1, 0]);
    let with = evaluate(&t, &p, false).unwrap();
    let without = evaluate(&t, &p, true).unwrap();
    assert_eq!(without.ari, 1.0);
    assert!(with.ari < 1.0);
    assert_eq!(with.f1, without.f1);
    assert_eq!(with.precision, 1.0);
    assert_eq!(with.recall, 0.5);
}

proptest! {
    #[test]
    fn ari_symmetric_and_bounded(pairs in prop::collection::vec((0i64..5, 0i64..5), 2..120)) {
        let a = LabelVector::new(pairs.iter().map(|p| p.0).collect());
        let b = LabelVector::new(pairs.iter().map(|p| p.1).collect());
        let ab = ari(&a, &b).unwrap();
        prop_assert!((ab - ari(&b, &a).unwrap()).abs() < 1e-12);
        prop_assert!(ab <= 1.0 + 1e-12);
        let m = nmi(&a, &b).unwrap();
        prop_assert!((0.0..=1.0).contains(&m));
        prop_assert!((m - nmi(&b, &a).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn scores_ignore_label_names(labels in prop::collection::vec(0i64..6, 2..100), shift in 1i64..50) {
        let a = LabelVector::new(labels.clone());
        let b = LabelVector::new(labels.iter().map(|l| l * 7 + shift).collect());
        prop_assert!((ari(&a, &b).unwrap() - 1.0).abs() < 1e-12);
        prop_assert!((nmi(&a, &b).unwrap() - 1.0).abs() < 1e-12);
    }
}
