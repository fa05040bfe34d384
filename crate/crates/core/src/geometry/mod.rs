//! The quadrilateral configuration, its curve catalogue, and linear systems
//! of plane curves through it.

mod catalogue;
mod config;
mod decompose;
mod interp;

use thiserror::Error;

use crate::lattice::DivisorClass;

pub use catalogue::{CatalogueEntry, CurveCatalogue, CurveKind};
pub use config::{collinear, on_common_conic, ConfigurationKind, PointConfiguration, ProjectivePoint};
pub use decompose::{decompose_over, effective_decompositions, Decomposition, DecompositionSearch};
pub use interp::{class_to_system, h0_class, h0_fat_points, remove_fixed_part, FatPointSystem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeometryError {
    #[error("triple {triple:?}: recorded collinear = {recorded}, determinant disagrees")]
    Incidence { triple: [usize; 3], recorded: bool },
    #[error("negative multiplicity {mult} at point {point}; remove the fixed part first")]
    NegativeMultiplicity { point: usize, mult: i64 },
    #[error("class {0} has negative degree")]
    NegativeDegree(DivisorClass),
    #[error("class has {class} exceptional coordinates, configuration has {config} points")]
    LatticeMismatch { config: usize, class: usize },
    #[error("fixed-part removal for {class} exceeded {budget} steps; the curve catalogue has a gap")]
    CatalogueGap { class: DivisorClass, budget: usize },
}
