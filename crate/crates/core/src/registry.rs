// Copyright 2026 The deltric Developers.
// SPDX-License-Identifier: Apache-2.0

//! Named strategy registries.
//!
//! Interchangeable pieces of the pipeline sit behind small traits and are
//! looked up by name at runtime (from the CLI or a bench suite file):
//!
//! * [`SizeMeasure`]: how three edge lengths become one triangle size.
//! * [`Projector`]: how the 2D proxy embedding is produced.
//! * [`Variant`]: ablation switches applied on top of a parameter set.

use std::collections::BTreeMap;
use std::sync::OnceLock;

use crate::io::DataMatrix;
use crate::pipeline::DelTriCParams;
use crate::projection::{self, Embedding, ProjectionError};

/// Name-indexed collection of boxed strategies.
pub struct Registry<T: ?Sized> {
    entries: BTreeMap<&'static str, Box<T>>,
}

impl<T: ?Sized> Registry<T> {
    pub fn new() -> Self {
        Self {
            entries: BTreeMap::new(),
        }
    }

    pub fn register(&mut self, name: &'static str, entry: Box<T>) {
        self.entries.insert(name, entry);
    }

    pub fn get(&self, name: &str) -> Option<&T> {
        self.entries.get(name).map(|b| b.as_ref())
    }

    pub fn names(&self) -> impl Iterator<Item = &'static str> + '_ {
        self.entries.keys().copied()
    }
}

impl<T: ?Sized> Default for Registry<T> {
    fn default() -> Self {
        Self::new()
    }
}

/// Reduces a triangle's three edge lengths to a single size.
pub trait SizeMeasure: Send + Sync {
    fn name(&self) -> &'static str;
    fn size(&self, edges: [f64; 3]) -> f64;
}

pub struct MaxEdge;
pub struct SumEdges;
pub struct MinEdge;

impl SizeMeasure for MaxEdge {
    fn name(&self) -> &'static str {
        "max_edge"
    }
    fn size(&self, e: [f64; 3]) -> f64 {
        e[0].max(e[1]).max(e[2])
    }
}

impl SizeMeasure for SumEdges {
    fn name(&self) -> &'static str {
        "sum_edges"
    }
    fn size(&self, e: [f64; 3]) -> f64 {
        e[0] + e[1] + e[2]
    }
}

impl SizeMeasure for MinEdge {
    fn name(&self) -> &'static str {
        "min_edge"
    }
    fn size(&self, e: [f64; 3]) -> f64 {
        e[0].min(e[1]).min(e[2])
    }
}

pub fn size_measures() -> &'static Registry<dyn SizeMeasure> {
    static REG: OnceLock<Registry<dyn SizeMeasure>> = OnceLock::new();
    REG.get_or_init(|| {
        let mut reg: Registry<dyn SizeMeasure> = Registry::new();
        reg.register("max_edge", Box::new(MaxEdge));
        reg.register("sum_edges", Box::new(SumEdges));
        reg.register("min_edge", Box::new(MinEdge));
        reg
    })
}

pub fn size_measure(name: &str) -> Option<&'static dyn SizeMeasure> {
    size_measures().get(name)
}

/// Produces the 2D proxy embedding for a data matrix.
pub trait Projector: Send + Sync {
    fn name(&self) -> &'static str;
    fn project(&self, data: &DataMatrix, seed: u64) -> Result<Embedding, ProjectionError>;
}

/// Native PCA onto the top two components.
pub struct PcaProjector {
    pub standardize: bool,
}

impl Projector for PcaProjector {
    fn name(&self) -> &'static str {
        "pca"
    }
    fn project(&self, data: &DataMatrix, seed: u64) -> Result<Embedding, ProjectionError> {
        if self.standardize {
            projection::pca2(&projection::standardize(data), seed)
        } else {
            projection::pca2(data, seed)
        }
    }
}

/// An embedding computed elsewhere (UMAP, t-SNE, ...).
pub struct ImportedProjector {
    pub embedding: Embedding,
}

impl Projector for ImportedProjector {
    fn name(&self) -> &'static str {
        "imported"
    }
    fn project(&self, data: &DataMatrix, _seed: u64) -> Result<Embedding, ProjectionError> {
        if self.embedding.n_points() != data.n_points() {
            return Err(ProjectionError::ShapeMismatch(format!(
                "embedding has {} rows but the data has {}",
                self.embedding.n_points(),
                data.n_points()
            )));
        }
        Ok(self.embedding.clone())
    }
}

/// An ablation: a named tweak of the pipeline parameters.
pub trait Variant: Send + Sync {
    fn name(&self) -> &'static str;
    fn apply(&self, params: &mut DelTriCParams);
}

/// All stages enabled.
pub struct Full;
/// Skip the representative-merging stage.
pub struct MergeOff;
/// Measure triangle sizes in the embedding only.
pub struct ProjOff;
/// Merge every anomaly group that has a neighbouring cluster.
pub struct AnomaliesMerged;

impl Variant for Full {
    fn name(&self) -> &'static str {
        "full"
    }
    fn apply(&self, _: &mut DelTriCParams) {}
}

impl Variant for MergeOff {
    fn name(&self) -> &'static str {
        "merge_off"
    }
    fn apply(&self, p: &mut DelTriCParams) {
        p.merging_enabled = false;
    }
}

impl Variant for ProjOff {
    fn name(&self) -> &'static str {
        "proj_off"
    }
    fn apply(&self, p: &mut DelTriCParams) {
        p.back_projection = false;
    }
}

impl Variant for AnomaliesMerged {
    fn name(&self) -> &'static str {
        "anom_merged"
    }
    fn apply(&self, p: &mut DelTriCParams) {
        p.anomaly_sensitivity = 0.0;
    }
}

pub fn variants() -> &'static Registry<dyn Variant> {
    static REG: OnceLock<Registry<dyn Variant>> = OnceLock::new();
    REG.get_or_init(|| {
        let mut reg: Registry<dyn Variant> = Registry::new();
        reg.register("full", Box::new(Full));
        reg.register("merge_off", Box::new(MergeOff));
        reg.register("proj_off", Box::new(ProjOff));
        reg.register("anom_merged", Box::new(AnomaliesMerged));
        reg
    })
}

pub fn variant(name: &str) -> Option<&'static dyn Variant> {
    variants().get(name)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lookups() {
        assert_eq!(size_measure("sum_edges").unwrap().size([3.0, 4.0, 5.0]), 12.0);
        assert_eq!(size_measure("max_edge").unwrap().size([3.0, 4.0, 5.0]), 5.0);
        assert_eq!(size_measure("min_edge").unwrap().size([3.0, 4.0, 5.0]), 3.0);
        assert!(size_measure("area").is_none());
        let names: Vec<_> = variants().names().collect();
        assert_eq!(names, vec!["anom_merged", "full", "merge_off", "proj_off"]);
    }

    #[test]
    fn variants_toggle_params() {
        let mut p = DelTriCParams::default();
        variant("merge_off").unwrap().apply(&mut p);
        variant("proj_off").unwrap().apply(&mut p);
        variant("anom_merged").unwrap().apply(&mut p);
        assert!(!p.merging_enabled);
        assert!(!p.back_projection);
        assert_eq!(p.anomaly_sensitivity, 0.0);
    }

    #[test]
    fn imported_projector_checks_rows() {
        let data = DataMatrix::from_rows(&[[0.0]; 4]).unwrap();
        let e = Embedding::from_matrix(&DataMatrix::from_rows(&[[0.0, 1.0]; 3]).unwrap()).unwrap();
        let p = ImportedProjector { embedding: e };
        assert!(matches!(
            p.project(&data, 0),
            Err(ProjectionError::ShapeMismatch(_))
        ));
    }
}
