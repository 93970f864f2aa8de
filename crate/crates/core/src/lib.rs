//! Stochastic-geometry simulation and analysis of CoMPflex, where two
//! interconnected half-duplex base stations with adjacent Voronoi cells
//! emulate one full-duplex base station, against a full-duplex baseline.
//!
//! The crate is organised bottom-up:
//!
//! * [`geometry`]: Poisson deployments and window-clipped Voronoi cells;
//! * [`pairing`]: randomised greedy pairing and uplink/downlink assignment;
//! * [`scenario`]: complete snapshots for both schemes;
//! * [`channel`]: path loss, Rayleigh fading and SINR;
//! * [`montecarlo`]: drop-based success and distance statistics;
//! * [`analytic`]: quadrature of the PPP-approximation expressions;
//! * [`config`] and [`run`]: experiment configuration and CSV output.
//!
//! The `examples/` directory has one runnable program per capability.

pub mod analytic;
pub mod channel;
pub mod config;
pub mod error;
pub mod geometry;
pub mod montecarlo;
pub mod output;
pub mod pairing;
pub mod quadrature;
pub mod results;
pub mod run;
pub mod scenario;

pub use error::{Error, NumericError, Result};
pub use geometry::{Deployment, Point2D, VoronoiAdjacency, Window};
pub use pairing::{Direction, PairedNetwork};
pub use scenario::{Scenario, Scheme};
