//! Fixture generators: Euler paths of ODEs that may explode, compound-Poisson
//! step paths, and the local/global continuity demonstration.

mod demo;
mod levy;
mod ode;

pub use demo::{continuity_demo, ode_family, straddle_pair, DemoOptions, DemoReport, DemoRow};
pub use levy::{levy_step_path, JumpLaw, JumpSpec};
pub use ode::{explosion_threshold, intro_blowup_time, ode_path, OdeField, OdeSpec};
