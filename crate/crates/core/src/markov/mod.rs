//! Buffer-state Markov chain of the min-power protocol.

pub mod diversity;
pub mod matrix;
pub mod sia;
pub mod solve;
pub mod space;

pub use diversity::{asymptotic_outage, asymptotic_slope, diversity_slope};
pub use matrix::{build_matrix, build_matrix_closed_form, build_matrix_protocol, Construction, LinkModel, TransitionMatrix};
pub use sia::{verify_sia, SiaReport};
pub use solve::{outage_analytic, steady_state, StationaryDistribution};
pub use space::{count_links, LinkCounts, StateSpace, STATE_CAP};
