//! Buffer-aided successive relay selection: the min-power policy and its
//! baselines, a buffer-state Markov chain for analytic outage, and a
//! slot-level Monte Carlo simulator.

pub mod error;
pub mod markov;
pub mod model;
pub mod policies;
pub mod quad;
pub mod sim;

pub use error::{Error, Result};
pub use model::{BufferState, Capacity, ChannelState, NetworkConfig};
pub use policies::{Decision, Link, Policy};
pub use sim::{run, SimConfig, SimMetrics};
