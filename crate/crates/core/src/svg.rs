// Copyright 2026 The deltric Developers.
// SPDX-License-Identifier: Apache-2.0

//! Minimal self-contained SVG scatter plots of embeddings.

use std::fmt::Write as _;

use crate::labels::{LabelVector, ANOMALY};

/// Cluster colours, cycled by label.
pub const PALETTE: [&str; 10] = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2", "#bcbd22",
    "#17becf", "#7f7fff",
];
/// Colour for anomalies.
pub const ANOMALY_COLOR: &str = "#404040";

const SIZE: f64 = 600.0;
const MARGIN: f64 = 20.0;

pub fn color_for(label: i64) -> &'static str {
    if label == ANOMALY {
        ANOMALY_COLOR
    } else {
        PALETTE[label.rem_euclid(PALETTE.len() as i64) as usize]
    }
}

/// Renders points coloured by label. Anomalies are drawn last so they sit
/// on top.
pub fn scatter(coords: &[[f64; 2]], labels: &LabelVector, title: &str) -> String {
    let (mut lo, mut hi) = ([f64::INFINITY; 2], [f64::NEG_INFINITY; 2]);
    for c in coords {
        for k in 0..2 {
            lo[k] = lo[k].min(c[k]);
            hi[k] = hi[k].max(c[k]);
        }
    }
    let span = (hi[0] - lo[0]).max(hi[1] - lo[1]);
    let scale = if span > 0.0 { (SIZE - 2.0 * MARGIN) / span } else { 1.0 };
    let px = |c: [f64; 2]| {
        (
            MARGIN + (c[0] - lo[0]) * scale,
            SIZE - MARGIN - (c[1] - lo[1]) * scale,
        )
    };

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, "<title>{}</title>", escape(title));
    let _ = writeln!(out, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let mut order: Vec<usize> = (0..coords.len()).collect();
    order.sort_by_key(|&i| labels[i] == ANOMALY);
    for i in order {
        let (x, y) = px(coords[i]);
        let _ = writeln!(
            out,
            r#"<circle cx="{x:.2}" cy="{y:.2}" r="2.5" fill="{}"/>"#,
            color_for(labels[i])
        );
    }
    out.push_str("</svg>\n");
    out
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn anomalies_are_dark_gray() {
        let svg = scatter(
            &[[0.0, 0.0], [1.0, 1.0], [2.0, 0.0]],
            &LabelVector::new(vec![0, -1, 1]),
            "a < b",
        );
        assert!(svg.starts_with("<svg"));
        assert!(!svg.contains("<script"));
        assert_eq!(svg.matches("<circle").count(), 3);
        assert_eq!(svg.matches(ANOMALY_COLOR).count(), 1);
        assert!(svg.contains("a &lt; b"));
        // the anomaly is drawn last
        let last = svg.rfind("<circle").unwrap();
        assert!(svg[last..].contains(ANOMALY_COLOR));
    }

    #[test]
    fn single_point_does_not_divide_by_zero() {
        let svg = scatter(&[[3.0, 3.0]], &LabelVector::new(vec![0]), "");
        assert!(!svg.contains("NaN"));
    }
}
