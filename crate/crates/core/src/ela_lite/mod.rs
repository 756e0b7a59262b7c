//! Landscape features computed from a sampled design: dispersion, y
//! distribution, meta-models, PCA, nearest-better clustering and information
//! content.

pub mod design;
pub mod dispersion;
pub mod extract;
pub mod ic;
pub mod metamodel;
pub mod nbc;
pub mod pca;
pub mod ydist;

/// Feature values in output order.
pub type NamedFeatures = Vec<(String, f64)>;

pub use design::{improved_lhs, improved_lhs_with, Bounds, Design, LHS_CANDIDATES};
pub use dispersion::{dispersion_features, DISPERSION_QUANTILES};
pub use extract::{
    design_features, extract_features, extract_once, feature_names_all, ExtractConfig,
    Extraction, ExtractionFailure, Objective,
};
pub use ic::{ic_features, ic_from_sequence, IcFeatures};
pub use metamodel::{fit_model, metamodel_features, LinearFit, ModelKind};
pub use nbc::{nbc_features, nearest_better, NearestBetter};
pub use pca::{explained_variance, pca_features, PcaMode};
pub use ydist::{ydist_features, YDistFeatures};
