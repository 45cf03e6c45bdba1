//! Probability of each h under the uniform measure on partitions of n, and
//! the statistics built on it: confidence intervals, tails, the mode, the
//! rule-of-thumb estimate and a finite-n concentration diagnostic.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigUint;
use num_integer::Roots;
use num_traits::Zero;
use serde::Serialize;

use crate::counting::DurfeeCountRow;
use crate::engine::{engine, Engine};
use crate::error::{Error, Result};
use crate::ratio::{ratio_at_most, Probability};

/// sqrt(6) * ln(2) / pi: the asymptotic mode of the Durfee side over sqrt(n).
pub const RULE_OF_THUMB_CONSTANT: f64 = 0.540_444_639_466_730_7;

pub const DEFAULT_EPSILON: f64 = 0.02;

#[derive(Debug, Clone, Serialize)]
pub struct DurfeeDistribution {
    pub n: u64,
    pub probabilities: Vec<f64>,
    #[serde(skip)]
    counts: Arc<DurfeeCountRow>,
    #[serde(skip)]
    total: BigUint,
}

impl DurfeeDistribution {
    pub fn counts(&self) -> &DurfeeCountRow {
        &self.counts
    }

    /// p(n), the normalizing total.
    pub fn total(&self) -> &BigUint {
        &self.total
    }

    pub fn max_k(&self) -> usize {
        self.counts.max_k()
    }

    pub fn probability(&self, k: usize) -> Probability {
        self.mass(k, k)
    }

    /// Exact P(lo <= h <= hi).
    pub fn mass(&self, lo: usize, hi: usize) -> Probability {
        Probability::new(self.counts.sum_range(lo, hi), self.total.clone())
    }

    /// Exact P(h >= t); zero once t passes floor(sqrt n).
    pub fn tail(&self, t: usize) -> Probability {
        self.mass(t, self.max_k())
    }

    /// Smallest k attaining the largest count.
    pub fn mode(&self) -> usize {
        let mut best = 0;
        for (k, count) in self.counts.counts.iter().enumerate() {
            if count > &self.counts.counts[best] {
                best = k;
            }
        }
        best
    }

    /// Total-variation distance to another pmf on the same support indices.
    pub fn total_variation(&self, other: &[f64]) -> f64 {
        let len = self.probabilities.len().max(other.len());
        let at = |v: &[f64], k: usize| v.get(k).copied().unwrap_or(0.0);
        0.5 * (0..len)
            .map(|k| (at(&self.probabilities, k) - at(other, k)).abs())
            .sum::<f64>()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum IntervalRule {
    /// Trim at most epsilon/2 of probability from each tail.
    #[default]
    Symmetric,
    /// Narrowest interval holding at least 1 - epsilon; ties go to the larger
    /// mass, then the smaller lower end.
    MinWidth,
}

impl FromStr for IntervalRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "symmetric" => Ok(Self::Symmetric),
            "minwidth" => Ok(Self::MinWidth),
            other => Err(Error::InvalidArgument(format!(
                "unknown interval rule {other:?} (expected symmetric or minwidth)"
            ))),
        }
    }
}

impl fmt::Display for IntervalRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Symmetric => "symmetric",
            Self::MinWidth => "minwidth",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfidenceInterval {
    pub n: u64,
    pub epsilon: f64,
    pub rule: IntervalRule,
    pub low: u64,
    pub high: u64,
    /// Probability that h lands in `[low, high]`.
    pub mass: Probability,
}

impl ConfidenceInterval {
    pub fn contains(&self, h: u64) -> bool {
        (self.low..=self.high).contains(&h)
    }

    /// How far `h` lies outside the interval; zero when inside.
    pub fn distance(&self, h: u64) -> u64 {
        if h < self.low {
            self.low - h
        } else {
            h.saturating_sub(self.high)
        }
    }
}

impl fmt::Display for ConfidenceInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.low, self.high)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RuleOfThumbEstimate {
    pub n: u64,
    pub value: f64,
}

impl RuleOfThumbEstimate {
    pub fn new(n: u64) -> Self {
        Self {
            n,
            value: RULE_OF_THUMB_CONSTANT * (n as f64).sqrt(),
        }
    }

    /// Value rounded to one decimal, as shown in reports.
    pub fn display_value(&self) -> f64 {
        round_to(self.value, 1)
    }

    /// Value in tenths, rounded half away from zero.
    pub fn tenths(&self) -> i64 {
        (self.value * 10.0).round() as i64
    }
}

impl fmt::Display for RuleOfThumbEstimate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:.1}", self.value)
    }
}

pub(crate) fn round_to(value: f64, decimals: i32) -> f64 {
    let scale = 10f64.powi(decimals);
    (value * scale).round() / scale
}

pub fn validate_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidEpsilon(epsilon))
    }
}

/// floor(sqrt(n)), the largest possible h for n citations.
pub fn max_h(n: u64) -> u64 {
    n.sqrt()
}

pub fn rule_of_thumb(n: u64) -> RuleOfThumbEstimate {
    RuleOfThumbEstimate::new(n)
}

impl Engine {
    pub fn durfee_distribution(&self, n: u64) -> Result<DurfeeDistribution> {
        let counts = self.durfee_counts(n)?;
        let total = self.partition_count(n)?;
        debug_assert_eq!(
            counts.total(),
            total,
            "Euler-Gauss identity violated at n = {n}"
        );
        let probabilities = counts
            .counts
            .iter()
            .map(|c| Probability::new(c.clone(), total.clone()).to_f64())
            .collect();
        Ok(DurfeeDistribution {
            n,
            probabilities,
            counts,
            total,
        })
    }

    pub fn confidence_interval(
        &self,
        n: u64,
        epsilon: f64,
        rule: IntervalRule,
    ) -> Result<ConfidenceInterval> {
        validate_epsilon(epsilon)?;
        let dist = self.durfee_distribution(n)?;
        let (low, high) = match rule {
            IntervalRule::Symmetric => symmetric_bounds(&dist, epsilon),
            IntervalRule::MinWidth => min_width_bounds(&dist, epsilon),
        };
        Ok(ConfidenceInterval {
            n,
            epsilon,
            rule,
            low: low as u64,
            high: high as u64,
            mass: dist.mass(low, high),
        })
    }

    pub fn tail_probability(&self, n: u64, t: u64) -> Result<Probability> {
        if t == 0 {
            self.limits().check(n)?;
            return Ok(Probability::one());
        }
        if t > max_h(n) {
            self.limits().check(n)?;
            return Ok(Probability::zero());
        }
        Ok(self.durfee_distribution(n)?.tail(t as usize))
    }

    pub fn mode_h(&self, n: u64) -> Result<u64> {
        Ok(self.durfee_distribution(n)?.mode() as u64)
    }

    /// P((1-eps) mu < h < (1+eps) mu) with mu the rule-of-thumb value.
    pub fn concentration_mass(&self, n: u64, epsilon: f64) -> Result<Probability> {
        if n == 0 || epsilon.is_nan() || epsilon <= 0.0 {
            return Err(Error::InvalidArgument(
                "concentration mass needs n >= 1 and epsilon > 0".into(),
            ));
        }
        let dist = self.durfee_distribution(n)?;
        let mu = rule_of_thumb(n).value;
        let (lower, upper) = ((1.0 - epsilon) * mu, (1.0 + epsilon) * mu);
        let inside: BigUint = dist
            .counts
            .counts
            .iter()
            .enumerate()
            .filter(|&(k, _)| (k as f64) > lower && (k as f64) < upper)
            .map(|(_, c)| c)
            .sum();
        Ok(Probability::new(inside, dist.total.clone()))
    }
}

/// low: largest a with P(h < a) <= eps/2; high: smallest b with P(h > b) <= eps/2.
fn symmetric_bounds(dist: &DurfeeDistribution, epsilon: f64) -> (usize, usize) {
    let counts = &dist.counts.counts;
    let total = &dist.total;
    let half = epsilon / 2.0;

    let mut low = 0;
    let mut below = BigUint::zero();
    for a in 1..=dist.max_k() {
        below += &counts[a - 1];
        if !ratio_at_most(&below, total, half) {
            break;
        }
        low = a;
    }

    let mut high = dist.max_k();
    let mut above = BigUint::zero();
    for b in (0..dist.max_k()).rev() {
        above += &counts[b + 1];
        if !ratio_at_most(&above, total, half) {
            break;
        }
        high = b;
    }
    (low, high)
}

fn min_width_bounds(dist: &DurfeeDistribution, epsilon: f64) -> (usize, usize) {
    let counts = &dist.counts.counts;
    let total = &dist.total;
    let mut prefix = Vec::with_capacity(counts.len() + 1);
    prefix.push(BigUint::zero());
    for c in counts {
        let next = prefix.last().expect("nonempty") + c;
        prefix.push(next);
    }

    let mut best: Option<(usize, BigUint, usize, usize)> = None;
    for a in 0..counts.len() {
        for b in a..counts.len() {
            let inside = &prefix[b + 1] - &prefix[a];
            let outside = total - &inside;
            if !ratio_at_most(&outside, total, epsilon) {
                continue;
            }
            let width = b - a;
            let better = match &best {
                None => true,
                Some((w, mass, _, _)) => width < *w || (width == *w && inside > *mass),
            };
            if better {
                best = Some((width, inside, a, b));
            }
            break;
        }
    }
    let (_, _, a, b) = best.expect("the full range always qualifies");
    (a, b)
}

pub fn durfee_distribution(n: u64) -> Result<DurfeeDistribution> {
    engine().durfee_distribution(n)
}

pub fn confidence_interval(n: u64, epsilon: f64, rule: IntervalRule) -> Result<ConfidenceInterval> {
    engine().confidence_interval(n, epsilon, rule)
}

pub fn tail_probability(n: u64, t: u64) -> Result<Probability> {
    engine().tail_probability(n, t)
}

pub fn mode_h(n: u64) -> Result<u64> {
    engine().mode_h(n)
}

pub fn concentration_mass(n: u64, epsilon: f64) -> Result<Probability> {
    engine().concentration_mass(n, epsilon)
}
