//! Scheduling and simulation of single-layer information dissemination in
//! wireless networks under the additive affectance interference model.
//!
//! * [`affectance`]: topology, affectance matrix, success and selection predicates.
//! * [`characterize`]: maximum average affectance and derived schedule constants.
//! * [`protocols`]: randomized and deterministic schedules, Decay and SINR-style baselines.
//! * [`sim`]: slotted-time runner and sweep harness.
//! * [`scenario`]: office-grid and Radio Network generators, instance files.
//! * [`oracle`]: exhaustive reference computations for small instances.
//!
//! Data-parallel loops run on rayon when the `parallel` feature (default) is
//! enabled; see [`Exec`].

pub mod affectance;
pub mod characterize;
pub mod cli;
pub mod error;
pub mod exec;
pub mod oracle;
pub mod protocols;
pub mod rng;
pub mod scenario;
pub mod schedule;
pub mod sim;

pub use affectance::{encode_radio_network, mask_of, AffectanceMatrix, Instance, LayerTopology, Link, SelectiveReport};
pub use characterize::{characterize, max_avg_affectance_w, Characterization};
pub use error::{Error, Result};
pub use exec::Exec;
pub use schedule::Schedule;
