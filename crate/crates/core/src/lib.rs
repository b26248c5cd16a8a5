//! Closed-form interference-alignment precoders and receive filters for
//! multi-cell MIMO downlinks, with feasibility checks, resource tables and
//! a seeded Monte Carlo rate simulator.
//!
//! ```
//! use cellular_ia::{design, generate_channels, leakage_report, Approach, NetworkConfig};
//!
//! let cfg = NetworkConfig::cyclic_two_side(6, 3, 2, 6, 14);
//! let channels = generate_channels(&cfg, 7).unwrap();
//! let (coders, _) = design(&channels, Approach::A, 7, None).unwrap();
//! assert!(leakage_report(&channels, &coders).unwrap().max_residual() < 1e-8);
//! ```

pub mod approach;
pub mod coders;
pub mod designs;
pub mod error;
pub mod evaluation;
pub mod feasibility;
pub mod harness;
pub mod linalg;
pub mod network;
pub mod random;
pub mod tables;

pub use approach::Approach;
pub use coders::{CoderSet, Intermediates, UserKey};
pub use designs::{design, ChainReport, Codebook};
pub use error::{IaError, Result};
pub use evaluation::{
    chordal_distance_sq, dof_slope, interference_leakage, leakage_report, rate_sweep, run_sweep, sum_rate,
    DesignSpec, LeakageReport, RateCurve, SweepResult, SweepSettings,
};
pub use linalg::ComplexMatrix;
pub use network::{generate_channels, ChannelSet, NetworkConfig, Topology, UserClass};
pub use tables::{min_antennas, resource_report, AntennaMinimum, ResourceRow};
