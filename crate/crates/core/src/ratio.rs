//! Exact probabilities as ratios of big integers.
//!
//! Every probability the engine reports is kept as `numerator / denominator`
//! and only converted to floating point on demand. The conversion is a scaled
//! integer division, so it stays accurate when both sides are far outside the
//! `f64` range (p(100000) has 346 decimal digits) and when the ratio itself is
//! tiny.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

/// Bits of quotient kept by [`Probability::to_f64`]; more than an `f64` mantissa.
const QUOTIENT_BITS: u64 = 64;

#[derive(Debug, Clone)]
pub struct Probability {
    numerator: BigUint,
    denominator: BigUint,
}

impl Probability {
    /// # Panics
    /// If `denominator` is zero or `numerator > denominator`.
    pub fn new(numerator: BigUint, denominator: BigUint) -> Self {
        assert!(!denominator.is_zero(), "probability with zero denominator");
        assert!(numerator <= denominator, "probability above one");
        Self {
            numerator,
            denominator,
        }
    }

    pub fn zero() -> Self {
        Self::new(BigUint::zero(), BigUint::one())
    }

    pub fn one() -> Self {
        Self::new(BigUint::one(), BigUint::one())
    }

    pub fn numerator(&self) -> &BigUint {
        &self.numerator
    }

    pub fn denominator(&self) -> &BigUint {
        &self.denominator
    }

    pub fn is_zero(&self) -> bool {
        self.numerator.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        ratio_to_f64(&self.numerator, &self.denominator)
    }

    /// Base-10 logarithm, finite for every nonzero ratio even when `to_f64`
    /// would underflow. Returns negative infinity for zero.
    pub fn log10(&self) -> f64 {
        if self.is_zero() {
            return f64::NEG_INFINITY;
        }
        log2_biguint(&self.numerator) * std::f64::consts::LOG10_2
            - log2_biguint(&self.denominator) * std::f64::consts::LOG10_2
    }

    /// Exact comparison against a decimal threshold such as `1e-7`.
    pub fn cmp_f64(&self, threshold: f64) -> Ordering {
        assert!(threshold.is_finite() && threshold >= 0.0);
        let (mantissa, shift) = dyadic(threshold);
        // self ? m * 2^shift   <=>   num * 2^{-shift} ? m * den
        let lhs = &self.numerator;
        let rhs = &self.denominator * BigUint::from(mantissa);
        if shift >= 0 {
            lhs.cmp(&(rhs << shift as u64))
        } else {
            (lhs << (-shift) as u64).cmp(&rhs)
        }
    }
}

/// Equality of values, not of representations: 2/4 == 1/2.
impl PartialEq for Probability {
    fn eq(&self, other: &Self) -> bool {
        &self.numerator * &other.denominator == &other.numerator * &self.denominator
    }
}

impl Eq for Probability {}

impl PartialOrd for Probability {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Probability {
    fn cmp(&self, other: &Self) -> Ordering {
        (&self.numerator * &other.denominator).cmp(&(&other.numerator * &self.denominator))
    }
}

impl fmt::Display for Probability {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let value = self.to_f64();
        if value == 0.0 && !self.is_zero() {
            // below the f64 range; print the order of magnitude
            write!(f, "~1e{:.0}", self.log10().floor())
        } else if value != 0.0 && value < 1e-4 {
            write!(f, "{value:.6e}")
        } else {
            write!(f, "{value}")
        }
    }
}

impl Serialize for Probability {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_f64(self.to_f64())
    }
}

/// `num / den` rounded to `f64` through a 64-bit integer quotient.
pub fn ratio_to_f64(num: &BigUint, den: &BigUint) -> f64 {
    assert!(!den.is_zero());
    if num.is_zero() {
        return 0.0;
    }
    // Choose a shift so that (num << shift) / den has QUOTIENT_BITS bits.
    let shift = QUOTIENT_BITS as i64 + den.bits() as i64 - num.bits() as i64;
    let quotient = if shift >= 0 {
        (num << shift as u64) / den
    } else {
        num / (den << (-shift) as u64)
    };
    let q = quotient.to_f64().expect("quotient fits in f64");
    // powi only handles i32; split to avoid intermediate overflow/underflow
    scale_by_pow2(q, -shift)
}

fn scale_by_pow2(mut value: f64, mut exp: i64) -> f64 {
    while exp > 1000 {
        value *= 2f64.powi(1000);
        exp -= 1000;
    }
    while exp < -1000 {
        value *= 2f64.powi(-1000);
        exp += 1000;
    }
    value * 2f64.powi(exp as i32)
}

/// log2 of a positive big integer from its leading 64 bits.
pub(crate) fn log2_biguint(value: &BigUint) -> f64 {
    let bits = value.bits();
    if bits <= 64 {
        return value.to_f64().expect("small").log2();
    }
    let drop = bits - 64;
    let top = (value >> drop).to_f64().expect("64-bit prefix");
    top.log2() + drop as f64
}

/// Natural log of a positive big integer.
pub(crate) fn ln_biguint(value: &BigUint) -> f64 {
    log2_biguint(value) * std::f64::consts::LN_2
}

/// Decomposes a finite nonnegative `f64` as `mantissa * 2^exponent` exactly.
pub(crate) fn dyadic(value: f64) -> (u64, i64) {
    if value == 0.0 {
        return (0, 0);
    }
    let bits = value.to_bits();
    let exponent = ((bits >> 52) & 0x7ff) as i64;
    let fraction = bits & ((1u64 << 52) - 1);
    if exponent == 0 {
        (fraction, -1074)
    } else {
        (fraction | (1u64 << 52), exponent - 1075)
    }
}

/// Exact test of `count / total <= threshold` for a floating-point threshold.
pub(crate) fn ratio_at_most(count: &BigUint, total: &BigUint, threshold: f64) -> bool {
    Probability {
        numerator: count.clone(),
        denominator: total.clone(),
    }
    .cmp_f64(threshold)
        != Ordering::Greater
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Num;

    #[test]
    fn simple_ratios() {
        let p = Probability::new(BigUint::from(1u32), BigUint::from(5u32));
        assert_eq!(p.to_f64(), 0.2);
        assert_eq!(Probability::one().to_f64(), 1.0);
        assert_eq!(Probability::zero().to_f64(), 0.0);
    }

    #[test]
    fn huge_operands_keep_precision() {
        let den = BigUint::from_str_radix(&"9".repeat(400), 10).unwrap();
        let num = &den / BigUint::from(3u32);
        let p = Probability::new(num, den);
        assert!((p.to_f64() - 1.0 / 3.0).abs() < 1e-16);
    }

    #[test]
    fn tiny_ratio_is_not_flushed_to_zero() {
        let den = BigUint::one() << 1200u32;
        let p = Probability::new(BigUint::one(), den);
        assert_eq!(p.to_f64(), 0.0);
        assert!((p.log10() - (-1200.0 * std::f64::consts::LOG10_2)).abs() < 1e-9);
        assert!(p.to_string().starts_with("~1e-"));
    }

    #[test]
    fn exact_threshold_comparison() {
        let p = Probability::new(BigUint::from(1u32), BigUint::from(100u32));
        // 0.01 is not exactly representable; 1/100 sits just below it
        assert_eq!(p.cmp_f64(0.01), Ordering::Less);
        assert_eq!(p.cmp_f64(0.5), Ordering::Less);
        assert_eq!(p.cmp_f64(0.001), Ordering::Greater);
        let half = Probability::new(BigUint::from(1u32), BigUint::from(2u32));
        assert_eq!(half.cmp_f64(0.5), Ordering::Equal);
    }

    #[test]
    fn dyadic_round_trips() {
        for v in [0.02, 1e-300, 0.5, 3.75, 5e-324] {
            let (m, e) = dyadic(v);
            assert_eq!((m as f64) * 2f64.powi(e as i32), v);
        }
    }
}
