//! Channel, constraint and objective data model.

mod channel;
mod constraints;
mod covariance;
pub mod generator;
mod noise;
pub mod objective;

pub use channel::{Degradedness, WiretapChannel};
pub use constraints::{ConstraintIndex, ConstraintSet, InterferenceConstraint, FEASIBILITY_REL_TOL};
pub use covariance::CovarianceCandidate;
pub use generator::{corr_distance, exponential_correlation, kronecker_channel, ChannelRng};
pub use noise::{NoiseCorrelation, KBAR_EIG_CAP};
pub use objective::{
    f_b, f_e, grad_fb, grad_fe, grad_saddle_x, saddle_objective, secrecy_rate, secrecy_rate_unclamped,
};
