//! Exact and asymptotic analysis of the referee's chance of avoiding biased
//! votes, plus the goodness-of-fit machinery used to detect biased elections.

mod avoidance;
mod chi_square;
mod limits;
mod monte_carlo;
mod stirling;

pub use avoidance::{exact_avoidance_probability, AvoidanceProbability};
pub use chi_square::{
    chi_square_critical_value, chi_square_survival, chi_square_uniform, histogram,
    regularized_gamma_p, regularized_gamma_q, UniformityReport, DEFAULT_ALPHA,
};
pub use limits::{limit_logn_liars, limit_overloaded_liars, overloaded_k};
pub use monte_carlo::{monte_carlo_avoidance, MonteCarloEstimate};
pub use stirling::{stirling_estimate, AsymptoticEstimate, EXACT_COMPARISON_MAX_N};
