//! Local Skorokhod topology on exploding cadlag step paths.
//!
//! Paths live in `R^d`, may explode at a finite time `xi`, and are compared
//! with localized Skorokhod pseudo-metrics.  The crate also provides the
//! modulus `ω′`, time changes by a rate function and tightness diagnostics.

pub mod error;
pub mod metrics;
pub mod path;
pub mod sim;
pub mod space;
pub mod tightness;
pub mod timechange;

pub use error::{Error, Result};
pub use path::StepPath;
pub use space::{CompactSet, Exhaustion, MetricKind, Point, StateSpace};
