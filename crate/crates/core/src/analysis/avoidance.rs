use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::config::address_len;
use crate::error::{Error, Result};

/// `p(n, k) = C(n-k, L) / C(n, L)`: the chance that an `L`-subset of `n`
/// positions misses `k` marked ones.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AvoidanceProbability {
    pub n: u64,
    pub k: u64,
    pub address_len: usize,
    #[serde(serialize_with = "as_fraction")]
    pub exact: BigRational,
    pub value: f64,
    /// `k < n - L`, the range over which the closed form is usually quoted.
    pub defined: bool,
}

fn as_fraction<S: Serializer>(value: &BigRational, serializer: S) -> Result<S::Ok, S::Error> {
    serializer.collect_str(value)
}

impl AvoidanceProbability {
    /// `numerator/denominator` in lowest terms.
    pub fn fraction(&self) -> String {
        self.exact.to_string()
    }
}

/// Evaluates `prod_{i<L} (n-k-i)/(n-i)` exactly.
pub fn exact_avoidance_probability(n: u64, k: u64) -> Result<AvoidanceProbability> {
    let len = address_len(n)?;
    if k > n {
        return Err(Error::KOutOfRange { k, n });
    }
    let exact = if n - k < len as u64 {
        BigRational::zero()
    } else {
        let (num, den) = (0..len as u64).fold((BigInt::one(), BigInt::one()), |(num, den), i| {
            (num * (n - k - i), den * (n - i))
        });
        BigRational::new(num, den)
    };
    let value = exact.to_f64().unwrap_or(f64::NAN);
    Ok(AvoidanceProbability {
        n,
        k,
        address_len: len,
        exact,
        value,
        defined: k < n - len as u64,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ratio(num: i64, den: i64) -> BigRational {
        BigRational::new(num.into(), den.into())
    }

    #[test]
    fn small_cases() {
        assert_eq!(exact_avoidance_probability(8, 0).unwrap().exact, ratio(1, 1));
        let p = exact_avoidance_probability(8, 2).unwrap();
        assert_eq!(p.exact, ratio(5, 14));
        assert_eq!(p.fraction(), "5/14");
        assert!((p.value - 0.357_142_857_142_857_1).abs() < 1e-15);
        assert!(p.defined);
        let zero = exact_avoidance_probability(8, 6).unwrap();
        assert_eq!(zero.exact, ratio(0, 1));
        assert!(!zero.defined);
    }

    #[test]
    fn the_gap_above_n_minus_l() {
        // n - L <= k but n - k >= L: value from the product, flagged undefined.
        let p = exact_avoidance_probability(8, 5).unwrap();
        assert_eq!(p.exact, ratio(3 * 2, 8 * 7 * 6));
        assert!(!p.defined);
    }

    #[test]
    fn errors() {
        assert_eq!(
            exact_avoidance_probability(12, 1),
            Err(Error::NotPowerOfTwo { n: 12 })
        );
        assert_eq!(
            exact_avoidance_probability(8, 9),
            Err(Error::KOutOfRange { k: 9, n: 8 })
        );
    }

    #[test]
    fn large_n_is_cheap() {
        let p = exact_avoidance_probability(1 << 24, 24).unwrap();
        assert!(p.value > 0.99 && p.value < 1.0);
    }
}
