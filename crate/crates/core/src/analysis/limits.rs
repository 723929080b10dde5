//! Finite-n witnesses for the two asymptotic regimes of `p(n, k)`.

use crate::config::address_len;
use crate::error::{Error, Result};

use super::{exact_avoidance_probability, AvoidanceProbability};

/// `p(n, log2 n)` for each `n`; tends to 1.
pub fn limit_logn_liars(n_values: &[u64]) -> Result<Vec<AvoidanceProbability>> {
    n_values
        .iter()
        .map(|&n| exact_avoidance_probability(n, address_len(n)? as u64))
        .collect()
}

/// `round(c * n / log2 n)`.
pub fn overloaded_k(c: f64, n: u64) -> Result<u64> {
    if !(c.is_finite() && c > 0.0) {
        return Err(Error::NonPositiveConstant { c });
    }
    let len = address_len(n)? as u64;
    let k = (c * n as f64 / len as f64).round() as u64;
    if k >= n - len {
        return Err(Error::OutOfRange { n, k });
    }
    Ok(k)
}

/// `p(n, round(c n / log2 n))` for each `n`; tends to `e^-c`.
pub fn limit_overloaded_liars(c: f64, n_values: &[u64]) -> Result<Vec<AvoidanceProbability>> {
    n_values
        .iter()
        .map(|&n| exact_avoidance_probability(n, overloaded_k(c, n)?))
        .collect()
}
