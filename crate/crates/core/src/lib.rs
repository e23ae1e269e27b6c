//! Deterministic 2-D simulator of a leader-follower relay convoy steered
//! by a rotating directional antenna.
//!
//! Each follower sweeps its antenna, estimates the bearing of the node
//! ahead with a weighted centroid of the RSSI samples, bends that estimate
//! away from sonar-detected obstacles, and drives or stops depending on
//! the signal from the node ahead and the node behind. A chain of such
//! followers relays a command center's link to a moving end user.
//!
//! The modules mirror that pipeline:
//!
//! - [`radio`]: path loss, antenna patterns, noise and Doppler terms
//! - [`scan`]: antenna sweeps and the weighted-centroid bearing
//! - [`avoidance`]: obstacle situations, escape direction and scan penalty
//! - [`control`]: wheel commands and the drive/stop decision
//! - [`chain`]: link quality, connectivity and end-to-end throughput
//! - [`sim`]: kinematics, sonar ray casting, the leader script and tick loop
//! - [`scenario`] and [`trace`]: configuration, presets, output and export
//!
//! ```
//! use relay_convoy::scenario::scenario_preset;
//! use relay_convoy::trace::{run_scenario, Summary};
//!
//! let mut config = scenario_preset("convergence_bench").unwrap();
//! config.duration_s = 5.0;
//! let rows = run_scenario(&config).unwrap();
//! let summary = Summary::from_trace(&rows);
//! assert_eq!(summary.ticks, 6);
//! ```

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod avoidance;
pub mod chain;
pub mod checks;
pub mod control;
pub mod error;
pub mod geometry;
pub mod radio;
pub mod scan;
pub mod scenario;
pub mod sim;
pub mod trace;
pub mod world;

pub use error::{ConfigError, DomainError, SimError};
pub use geometry::{normalize_angle, Point, Pose};
