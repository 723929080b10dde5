use serde::Serialize;

use crate::config::address_len;
use crate::error::{Error, Result};

use super::exact_avoidance_probability;

/// Largest `n` for which the estimate is compared against the exact value.
pub const EXACT_COMPARISON_MAX_N: u64 = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticEstimate {
    pub n: u64,
    pub k: u64,
    pub value: f64,
    pub ln_value: f64,
    pub relative_error_vs_exact: Option<f64>,
}

/// Stirling-form estimate of `p(n, k)`:
///
/// ```text
/// (1 - L/n)^k (1 - k/n)^(n-k+1/2) / (1 - k/(n-L))^(n-k-L+1/2)
/// ```
///
/// evaluated in the log domain.
pub fn stirling_estimate(n: u64, k: u64) -> Result<AsymptoticEstimate> {
    let len = address_len(n)? as u64;
    if k >= n.saturating_sub(len) {
        return Err(Error::OutOfRange { n, k });
    }
    let (nf, kf, lf) = (n as f64, k as f64, len as f64);
    let ln_value = kf * (-lf / nf).ln_1p() + (nf - kf + 0.5) * (-kf / nf).ln_1p()
        - (nf - kf - lf + 0.5) * (-kf / (nf - lf)).ln_1p();
    let value = ln_value.exp();
    let relative_error_vs_exact = if n <= EXACT_COMPARISON_MAX_N {
        let exact = exact_avoidance_probability(n, k)?.value;
        Some(((value - exact) / exact).abs())
    } else {
        None
    };
    Ok(AsymptoticEstimate {
        n,
        k,
        value,
        ln_value,
        relative_error_vs_exact,
    })
}
