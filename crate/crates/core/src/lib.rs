// Copyright 2026 The deltric Developers.
// SPDX-License-Identifier: Apache-2.0

//! Triangulation-based clustering with back-projected pruning.
//!
//! Points are projected to 2D, Delaunay-triangulated there, and the
//! triangles are then measured in the original space. Oversized triangles
//! (by a robust z-score) are pruned, surviving edges define the initial
//! clusters, cluster representatives are re-triangulated to merge close
//! sub-clusters, and small leftover clusters are treated as anomaly groups
//! that are either absorbed by a neighbouring cluster or labelled `-1`.
//!
//! The main entry point is [`pipeline::fit_predict`]; the remaining modules
//! expose the individual stages so they can be tested and reused.

pub mod anomaly;
pub mod bench;
pub mod delaunay;
pub mod io;
pub mod labels;
pub mod merging;
pub mod metrics;
pub mod pipeline;
pub mod projection;
pub mod pruning;
pub mod registry;
pub mod stats;
pub mod svg;
pub mod synthgen;
mod union_find;

pub use io::DataMatrix;
pub use labels::{LabelVector, ANOMALY};
pub use pipeline::{fit_predict, ClusteringResult, DelTriCParams, DimReduction};
pub use projection::{Embedding, EmbeddingSource};
