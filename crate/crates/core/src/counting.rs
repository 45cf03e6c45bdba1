//! Exact partition counts.
//!
//! - [`PartitionCountTable`]: p(m) for every m up to a bound, by Euler's
//!   pentagonal-number recurrence.
//! - [`BoundedPartTable`]: partitions of m into parts of size at most k,
//!   i.e. the coefficients of prod_{j=1}^{k} 1/(1-x^j). By conjugation the
//!   same numbers count partitions with at most k parts.
//! - [`DurfeeCountRow`]: partitions of n by Durfee square side, the coefficient
//!   of x^n in x^{k^2} prod_{j=1}^{k} (1-x^j)^{-2}.
//!
//! Everything here is exact `BigUint` arithmetic.

use num_bigint::BigUint;
use num_integer::Roots;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};

/// Convolutions shorter than this are summed on the calling thread.
const PARALLEL_CONVOLUTION_MIN: usize = 2048;

/// Upper bound on the problem size the engine accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub max_n: u64,
    /// Largest n for which the O(n^2) exact unranking table is built.
    pub max_unrank_n: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Self {
            max_n: 100_000,
            max_unrank_n: 2_000,
        }
    }
}

impl Limits {
    pub fn check(&self, n: u64) -> Result<usize> {
        if n > self.max_n {
            return Err(Error::ResourceLimit {
                requested: n,
                cap: self.max_n,
            });
        }
        Ok(n as usize)
    }
}

/// `values[m] = p(m)` for `0 <= m <= max_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionCountTable {
    values: Vec<BigUint>,
}

impl PartitionCountTable {
    pub fn new(max_n: usize) -> Self {
        let mut table = Self {
            values: vec![BigUint::one()],
        };
        table.extend_to(max_n);
        table
    }

    /// Builds a table from previously computed values, checking the cheap
    /// invariants (p(0) = 1, nondecreasing). Used when loading a cache file.
    pub fn from_values(values: Vec<BigUint>) -> Result<Self> {
        if values.first() != Some(&BigUint::one()) {
            return Err(Error::Cache("table must start with p(0) = 1".into()));
        }
        if let Some(m) = values.windows(2).position(|w| w[1] < w[0]) {
            return Err(Error::Cache(format!("table decreases at m = {}", m + 1)));
        }
        Ok(Self { values })
    }

    /// Appends p(m) for m up to `max_n` using
    /// p(m) = sum_{j>=1} (-1)^{j+1} [p(m - j(3j-1)/2) + p(m - j(3j+1)/2)].
    pub fn extend_to(&mut self, max_n: usize) {
        self.values.reserve(max_n.saturating_sub(self.max_n()));
        for m in self.values.len()..=max_n {
            let mut plus = BigUint::zero();
            let mut minus = BigUint::zero();
            for j in 1usize.. {
                let first = j * (3 * j - 1) / 2;
                if first > m {
                    break;
                }
                let second = first + j;
                let acc = if j % 2 == 1 { &mut plus } else { &mut minus };
                *acc += &self.values[m - first];
                if second <= m {
                    *acc += &self.values[m - second];
                }
            }
            self.values.push(plus - minus);
        }
    }

    pub fn max_n(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, m: usize) -> Option<&BigUint> {
        self.values.get(m)
    }

    pub fn values(&self) -> &[BigUint] {
        &self.values
    }
}

impl std::ops::Index<usize> for PartitionCountTable {
    type Output = BigUint;

    fn index(&self, m: usize) -> &BigUint {
        &self.values[m]
    }
}

/// Partitions of m into parts of size at most `k`, for `0 <= m <= max_m`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundedPartTable {
    k: usize,
    values: Vec<BigUint>,
}

impl BoundedPartTable {
    pub fn new(k: usize, max_m: usize) -> Self {
        let mut values = unit_series(max_m);
        for part in 1..=k.min(max_m) {
            multiply_by_geometric(&mut values, part, max_m);
        }
        Self { k, values }
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn max_m(&self) -> usize {
        self.values.len() - 1
    }

    pub fn values(&self) -> &[BigUint] {
        &self.values
    }
}

impl std::ops::Index<usize> for BoundedPartTable {
    type Output = BigUint;

    fn index(&self, m: usize) -> &BigUint {
        &self.values[m]
    }
}

fn unit_series(len: usize) -> Vec<BigUint> {
    let mut values = vec![BigUint::zero(); len + 1];
    values[0] = BigUint::one();
    values
}

/// In place: series *= 1/(1 - x^part), truncated after x^upto.
fn multiply_by_geometric(series: &mut [BigUint], part: usize, upto: usize) {
    for m in part..=upto.min(series.len() - 1) {
        let (low, high) = series.split_at_mut(m);
        high[0] += &low[m - part];
    }
}

/// `counts[k]` = number of partitions of `n` whose Durfee square has side `k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DurfeeCountRow {
    pub n: u64,
    #[serde(serialize_with = "serialize_decimal_vec")]
    pub counts: Vec<BigUint>,
}

impl DurfeeCountRow {
    pub fn max_k(&self) -> usize {
        self.counts.len() - 1
    }

    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    /// sum of counts[k] for k in `range`, clamped to the row.
    pub fn sum_range(&self, lo: usize, hi_inclusive: usize) -> BigUint {
        if lo > hi_inclusive || lo > self.max_k() {
            return BigUint::zero();
        }
        self.counts[lo..=hi_inclusive.min(self.max_k())]
            .iter()
            .sum()
    }
}

fn serialize_decimal_vec<S: serde::Serializer>(
    values: &[BigUint],
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    serializer.collect_seq(values.iter().map(|v| v.to_str_radix(10)))
}

/// Durfee counts for `n`, realising the square/right/below decomposition:
/// counts[k] = sum_m B_k(m) * B_k(n - k^2 - m) with B_k the parts-at-most-k
/// counts.
///
/// The bounded-part coefficients are built incrementally in k; each step
/// only needs coefficients up to n - k^2, which shrinks as k grows.
pub fn durfee_counts_uncached(n: usize) -> DurfeeCountRow {
    let max_k = n.sqrt();
    let mut counts = vec![BigUint::zero(); max_k + 1];
    if n == 0 {
        counts[0] = BigUint::one();
        return DurfeeCountRow { n: 0, counts };
    }
    let mut bounded = unit_series(n - 1);
    for (k, slot) in counts.iter_mut().enumerate().skip(1) {
        let rest = n - k * k;
        multiply_by_geometric(&mut bounded, k, rest);
        *slot = self_convolution(&bounded[..=rest]);
    }
    DurfeeCountRow {
        n: n as u64,
        counts,
    }
}

/// sum_{m=0}^{r} a[m] * a[r-m] where r = a.len() - 1.
fn self_convolution(a: &[BigUint]) -> BigUint {
    let r = a.len() - 1;
    let half = r / 2;
    // pairs (m, r-m) with m < r-m appear twice
    let paired_upto = if r % 2 == 0 { half } else { half + 1 };
    let pair = |m: usize| &a[m] * &a[r - m];
    let twice: BigUint = if paired_upto >= PARALLEL_CONVOLUTION_MIN {
        (0..paired_upto)
            .into_par_iter()
            .map(pair)
            .reduce(BigUint::zero, |x, y| x + y)
    } else {
        (0..paired_upto).map(pair).sum()
    };
    let mut total = twice << 1u32;
    if r % 2 == 0 {
        total += &a[half] * &a[half];
    }
    total
}

/// Hardy–Ramanujan asymptotic p(n) ~ exp(pi sqrt(2n/3)) / (4 n sqrt 3).
///
/// Held as a natural logarithm because the value leaves the `f64` range near
/// n = 47000.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HardyRamanujanEstimate {
    pub n: u64,
    pub ln_value: f64,
}

impl HardyRamanujanEstimate {
    pub fn new(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "Hardy-Ramanujan estimate needs n >= 1".into(),
            ));
        }
        let nf = n as f64;
        let ln_value =
            std::f64::consts::PI * (2.0 * nf / 3.0).sqrt() - (4.0 * nf * 3f64.sqrt()).ln();
        Ok(Self { n, ln_value })
    }

    /// The estimate itself; `inf` once it exceeds `f64::MAX`.
    pub fn value(&self) -> f64 {
        let nf = self.n as f64;
        if self.ln_value < 700.0 {
            (std::f64::consts::PI * (2.0 * nf / 3.0).sqrt()).exp() / (4.0 * nf * 3f64.sqrt())
        } else {
            self.ln_value.exp()
        }
    }

    /// estimate / exact, computed in log space.
    pub fn ratio_to(&self, exact: &BigUint) -> f64 {
        (self.ln_value - crate::ratio::ln_biguint(exact)).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle;

    #[test]
    fn small_partition_numbers() {
        let table = PartitionCountTable::new(50);
        assert_eq!(table[0], BigUint::from(1u32));
        assert_eq!(table[5], BigUint::from(7u32));
        assert_eq!(table[50], BigUint::from(204_226u32));
        for m in 0..=20 {
            assert_eq!(table[m], BigUint::from(oracle::enumerate(m).len()));
        }
    }

    #[test]
    fn extending_matches_fresh_build() {
        let mut table = PartitionCountTable::new(10);
        table.extend_to(300);
        assert_eq!(table, PartitionCountTable::new(300));
    }

    #[test]
    fn from_values_rejects_bad_tables() {
        assert!(PartitionCountTable::from_values(vec![]).is_err());
        assert!(PartitionCountTable::from_values(vec![BigUint::from(2u32)]).is_err());
        let bad = vec![1u32, 1, 2, 1].into_iter().map(BigUint::from).collect();
        assert!(PartitionCountTable::from_values(bad).is_err());
    }

    #[test]
    fn bounded_tables() {
        let ones: Vec<BigUint> = vec![1u32; 5].into_iter().map(BigUint::from).collect();
        assert_eq!(BoundedPartTable::new(1, 4).values(), &ones[..]);
        let twos: Vec<BigUint> = [1u32, 1, 2, 2, 3].into_iter().map(BigUint::from).collect();
        assert_eq!(BoundedPartTable::new(2, 4).values(), &twos[..]);
        assert_eq!(BoundedPartTable::new(5, 5)[5], BigUint::from(7u32));
        assert_eq!(BoundedPartTable::new(3, 0).values(), &[BigUint::one()]);
    }

    #[test]
    fn durfee_rows() {
        let four = durfee_counts_uncached(4);
        let expect: Vec<BigUint> = [0u32, 4, 1].into_iter().map(BigUint::from).collect();
        assert_eq!(four.counts, expect);
        assert_eq!(durfee_counts_uncached(0).counts, vec![BigUint::one()]);
        assert_eq!(
            durfee_counts_uncached(50).total(),
            BigUint::from(204_226u32)
        );
        assert_eq!(durfee_counts_uncached(1).counts.len(), 2);
    }

    #[test]
    fn convolution_parallel_path_agrees() {
        // long enough to take the rayon branch
        let n = 2 * PARALLEL_CONVOLUTION_MIN + 10;
        let table = PartitionCountTable::new(n);
        assert_eq!(durfee_counts_uncached(n).total(), table[n]);
    }

    #[test]
    fn hardy_ramanujan_closed_form() {
        let one = HardyRamanujanEstimate::new(1).unwrap();
        let direct = (std::f64::consts::PI * (2.0f64 / 3.0).sqrt()).exp() / (4.0 * 3f64.sqrt());
        assert!((one.value() - direct).abs() < 1e-14);
        // exp(pi sqrt(2/3)) / (4 sqrt 3) = 1.876670422605369...
        assert!((one.value() - 1.876_670_422_605_369).abs() < 1e-14);
        assert!(HardyRamanujanEstimate::new(0).is_err());
        let big = HardyRamanujanEstimate::new(100_000).unwrap();
        assert!(big.value().is_infinite());
        assert!(big.ln_value.is_finite());
    }

    #[test]
    fn limits() {
        let limits = Limits::default();
        assert_eq!(limits.check(100_000), Ok(100_000));
        assert_eq!(
            limits.check(100_001),
            Err(Error::ResourceLimit {
                requested: 100_001,
                cap: 100_000
            })
        );
    }
}
