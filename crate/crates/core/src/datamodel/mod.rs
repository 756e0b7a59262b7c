//! Typed records for instances, landscape features and run data, with CSV
//! ingestion and canonical serialization.

mod features;
mod key;
mod performance;

pub use features::{load_feature_table, median_aggregate, read_feature_table, FeatureTable};
pub(crate) use features::median_in_place;
pub use key::InstanceKey;
pub use performance::{load_performance_table, read_performance_table, PerfRecord, PerformanceTable};

/// Leading columns shared by every instance-keyed file.
pub const KEY_COLUMNS: [&str; 4] = ["suite", "problem_id", "instance_id", "dimension"];

/// Canonical rendering: 17 significant digits, which round-trips every `f64`.
pub fn format_value(v: f64) -> String {
    format!("{v:.16e}")
}
