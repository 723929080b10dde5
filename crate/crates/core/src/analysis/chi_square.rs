//! Pearson goodness-of-fit against the uniform distribution.
//!
//! The chi-square tail is `Q(df/2, x/2)`, the regularized upper incomplete
//! gamma function. `Q` is evaluated by its power series (through `P = 1 - Q`)
//! when `x < a + 1` and by the Legendre continued fraction otherwise, using the
//! modified Lentz recurrence. Critical values invert the tail by bisection.

use serde::Serialize;

use crate::error::{Error, Result};

pub const DEFAULT_ALPHA: f64 = 0.001;

const MAX_ITERATIONS: usize = 10_000;
const EPS: f64 = 1e-16;
const TINY: f64 = 1e-300;

const LANCZOS_G: f64 = 7.0;
const LANCZOS: [f64; 9] = [
    0.999_999_999_999_809_9,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_1,
    -176.615_029_162_140_6,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_1,
    9.984_369_578_019_572e-6,
    1.505_632_735_149_311_6e-7,
];

fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let t = x + LANCZOS_G + 0.5;
    let series = LANCZOS[1..]
        .iter()
        .enumerate()
        .fold(LANCZOS[0], |acc, (i, c)| acc + c / (x + i as f64 + 1.0));
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + series.ln()
}

fn gamma_p_series(a: f64, x: f64) -> f64 {
    let mut term = 1.0 / a;
    let mut sum = term;
    let mut denom = a;
    for _ in 0..MAX_ITERATIONS {
        denom += 1.0;
        term *= x / denom;
        sum += term;
        if term.abs() < sum.abs() * EPS {
            break;
        }
    }
    sum * (-x + a * x.ln() - ln_gamma(a)).exp()
}

fn gamma_q_continued_fraction(a: f64, x: f64) -> f64 {
    let mut b = x + 1.0 - a;
    let mut c = 1.0 / TINY;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITERATIONS {
        let an = -(i as f64) * (i as f64 - a);
        b += 2.0;
        d = an * d + b;
        if d.abs() < TINY {
            d = TINY;
        }
        c = b + an / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < EPS {
            break;
        }
    }
    (-x + a * x.ln() - ln_gamma(a)).exp() * h
}

/// Regularized lower incomplete gamma `P(a, x)`.
pub fn regularized_gamma_p(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x < a + 1.0 {
        gamma_p_series(a, x)
    } else {
        1.0 - gamma_q_continued_fraction(a, x)
    }
}

/// Regularized upper incomplete gamma `Q(a, x) = 1 - P(a, x)`.
pub fn regularized_gamma_q(a: f64, x: f64) -> f64 {
    if x <= 0.0 {
        1.0
    } else if x < a + 1.0 {
        1.0 - gamma_p_series(a, x)
    } else {
        gamma_q_continued_fraction(a, x)
    }
}

/// `Pr[X > statistic]` for `X ~ chi^2(df)`.
pub fn chi_square_survival(statistic: f64, df: usize) -> f64 {
    regularized_gamma_q(df as f64 / 2.0, statistic / 2.0)
}

/// The `x` with `Pr[X > x] = alpha` for `X ~ chi^2(df)`.
pub fn chi_square_critical_value(alpha: f64, df: usize) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::InvalidAlpha { alpha });
    }
    let mut hi = df as f64 + 1.0;
    while chi_square_survival(hi, df) > alpha {
        hi *= 2.0;
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if chi_square_survival(mid, df) > alpha {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Outcome of a uniformity test over a histogram.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UniformityReport {
    pub cell_counts: Vec<u64>,
    pub total: u64,
    pub statistic: f64,
    pub degrees_of_freedom: usize,
    pub alpha: f64,
    pub critical_value_at_alpha: f64,
    pub p_value: f64,
    pub reject_uniform: bool,
    /// Half the L1 distance between the empirical and the uniform distribution.
    pub tv_distance: f64,
}

/// Pearson chi-square test of `counts` against equal cell probabilities.
pub fn chi_square_uniform(counts: &[u64], alpha: f64) -> Result<UniformityReport> {
    let cells = counts.len();
    let total: u64 = counts.iter().sum();
    if cells < 2 || total < 10 * cells as u64 {
        return Err(Error::TooFewSamples { total, cells });
    }
    let expected = total as f64 / cells as f64;
    let statistic = counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    let tv_distance = 0.5
        * counts
            .iter()
            .map(|&c| (c as f64 / total as f64 - 1.0 / cells as f64).abs())
            .sum::<f64>();
    let df = cells - 1;
    let critical = chi_square_critical_value(alpha, df)?;
    Ok(UniformityReport {
        cell_counts: counts.to_vec(),
        total,
        statistic,
        degrees_of_freedom: df,
        alpha,
        critical_value_at_alpha: critical,
        p_value: chi_square_survival(statistic, df),
        reject_uniform: statistic > critical,
        tv_distance,
    })
}

/// Counts of one-based indices in `[1, cells]`.
pub fn histogram(indices: impl IntoIterator<Item = u32>, cells: usize) -> Vec<u64> {
    let mut counts = vec![0; cells];
    for i in indices {
        counts[i as usize - 1] += 1;
    }
    counts
}
