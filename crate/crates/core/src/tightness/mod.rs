//! Relative compactness and tightness diagnostics.

mod families;
mod report;
mod sampler;
mod stopping;

pub use report::{
    aldous_statistic, compactness_report, half_width, omega_curve, region_label, tightness_statistic,
    CompactnessCurve, ReportRow, Statistic, TightnessReport, Z95,
};
pub use families::PathFamily;
pub use sampler::{stream_seed, EnsembleSampler, SampledPath, SamplerKind};
pub use stopping::{hitting_stopping_times, r_functional};
