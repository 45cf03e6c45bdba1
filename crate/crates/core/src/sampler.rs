//! Uniform random partitions of n.
//!
//! Two independent methods:
//!
//! - **Recursive unranking**: draw a uniform rank below p(n) and decode it
//!   through the exact table of counts of partitions of m with parts at most
//!   k. Uniform by construction; the table is O(n^2) big integers, so it is
//!   capped by [`Limits::max_unrank_n`].
//! - **Boltzmann rejection**: part multiplicities are independent geometric
//!   variables with parameter x^i, x = exp(-pi / sqrt(6n)); a draw is kept
//!   only if the parts sum to exactly n. Every partition of n has weight x^n
//!   under the product measure, so accepted draws are uniform.
//!
//! Randomness comes from ChaCha8 seeded with `seed_from_u64`. Sample `i`
//! of a run belongs to stream `i / STREAM_CHUNK`, so histograms do not depend
//! on how many threads ran them.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::counting::Limits;
use crate::engine::{engine, Engine};
use crate::error::{Error, Result};
use crate::interval::max_h;
use crate::profile::{h_index, Partition};

/// Identifier recorded alongside every sampled result.
pub const RNG_ALGORITHM: &str = "ChaCha8Rng(seed_from_u64)+stream";

/// Samples drawn from one RNG stream before moving to the next.
pub const STREAM_CHUNK: u64 = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplingMethod {
    #[default]
    RecursiveUnranking,
    BoltzmannRejection,
}

impl FromStr for SamplingMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unranking" | "recursive_unranking" => Ok(Self::RecursiveUnranking),
            "boltzmann" | "boltzmann_rejection" => Ok(Self::BoltzmannRejection),
            other => Err(Error::InvalidArgument(format!(
                "unknown sampling method {other:?} (expected unranking or boltzmann)"
            ))),
        }
    }
}

impl fmt::Display for SamplingMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::RecursiveUnranking => "recursive_unranking",
            Self::BoltzmannRejection => "boltzmann_rejection",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SamplerConfig {
    pub n: u64,
    pub seed: u64,
    pub method: SamplingMethod,
}

impl SamplerConfig {
    pub fn new(n: u64, seed: u64, method: SamplingMethod) -> Self {
        Self { n, seed, method }
    }

    fn validate(&self, limits: &Limits) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidArgument("sampler needs n >= 1".into()));
        }
        limits.check(self.n)?;
        if self.method == SamplingMethod::RecursiveUnranking && self.n > limits.max_unrank_n {
            return Err(Error::ResourceLimit {
                requested: self.n,
                cap: limits.max_unrank_n,
            });
        }
        Ok(())
    }
}

/// `rows[m][k]` = partitions of m into parts of size at most k, for k <= m.
#[derive(Debug)]
struct UnrankTable {
    rows: Vec<Vec<BigUint>>,
}

impl UnrankTable {
    fn new(n: usize) -> Self {
        let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(n + 1);
        rows.push(vec![BigUint::from(1u32)]);
        for m in 1..=n {
            let mut row = Vec::with_capacity(m + 1);
            row.push(BigUint::zero());
            for k in 1..=m {
                let with_part_k = &rows[m - k][k.min(m - k)];
                let next = &row[k - 1] + with_part_k;
                row.push(next);
            }
            rows.push(row);
        }
        Self { rows }
    }

    fn count(&self, m: usize, k: usize) -> &BigUint {
        &self.rows[m][k.min(m)]
    }

    /// Decodes `rank < p(n)` into a partition, splitting
    /// count(m, k) = count(m, k - 1) + count(m - k, k).
    fn unrank(&self, n: usize, mut rank: BigUint) -> Partition {
        let (mut m, mut k) = (n, n);
        let mut parts = Vec::new();
        while m > 0 {
            k = k.min(m);
            let using_k = self.count(m - k, k);
            if rank < *using_k {
                parts.push(k as u64);
                m -= k;
            } else {
                rank -= using_k;
                k -= 1;
            }
        }
        Partition::new(parts).expect("unranking emits nonincreasing parts")
    }
}

#[derive(Debug)]
enum Method {
    Unranking(Arc<UnrankTable>),
    /// `log_x_powers[i - 1]` = i * ln(x).
    Boltzmann {
        log_x_powers: Arc<Vec<f64>>,
    },
}

impl Method {
    fn prepare(config: &SamplerConfig) -> Self {
        let n = config.n as usize;
        match config.method {
            SamplingMethod::RecursiveUnranking => Self::Unranking(Arc::new(UnrankTable::new(n))),
            SamplingMethod::BoltzmannRejection => {
                let log_x = -std::f64::consts::PI / (6.0 * n as f64).sqrt();
                Self::Boltzmann {
                    log_x_powers: Arc::new((1..=n).map(|i| i as f64 * log_x).collect()),
                }
            }
        }
    }

    fn share(&self) -> Self {
        match self {
            Self::Unranking(t) => Self::Unranking(Arc::clone(t)),
            Self::Boltzmann { log_x_powers } => Self::Boltzmann {
                log_x_powers: Arc::clone(log_x_powers),
            },
        }
    }
}

/// A reproducible stream of uniform partitions of `config.n`.
#[derive(Debug)]
pub struct Sampler {
    config: SamplerConfig,
    method: Method,
    rng: ChaCha8Rng,
}

impl Sampler {
    pub fn new(config: SamplerConfig) -> Result<Self> {
        engine().sampler(config)
    }

    fn from_parts(config: SamplerConfig, method: Method, stream: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        rng.set_stream(stream);
        Self {
            config,
            method,
            rng,
        }
    }

    pub fn config(&self) -> &SamplerConfig {
        &self.config
    }

    pub fn next_partition(&mut self) -> Partition {
        let n = self.config.n as usize;
        match &self.method {
            Method::Unranking(table) => {
                let rank = random_below(&mut self.rng, table.count(n, n));
                table.unrank(n, rank)
            }
            Method::Boltzmann { log_x_powers } => loop {
                if let Some(p) = boltzmann_attempt(&mut self.rng, n, log_x_powers) {
                    return p;
                }
            },
        }
    }
}

/// One Boltzmann draw; `None` when the parts do not sum to `n`.
fn boltzmann_attempt<R: Rng>(rng: &mut R, n: usize, log_x_powers: &[f64]) -> Option<Partition> {
    let mut multiplicities = Vec::new();
    let mut total = 0usize;
    // Largest parts first so overshoot is detected early.
    for i in (1..=n).rev() {
        // Geometric by inversion: P(m >= j) = x^{i j}.
        let u: f64 = 1.0 - rng.random::<f64>();
        let m = (u.ln() / log_x_powers[i - 1]).floor();
        if m >= 1.0 {
            let m = m as usize;
            total = total.checked_add(i.checked_mul(m)?)?;
            if total > n {
                return None;
            }
            multiplicities.push((i as u64, m));
        }
    }
    if total != n {
        return None;
    }
    let parts = multiplicities
        .into_iter()
        .flat_map(|(i, m)| std::iter::repeat(i).take(m))
        .collect();
    Some(Partition::new(parts).expect("parts emitted in decreasing order"))
}

/// Uniform integer in `[0, bound)` by rejection on the bit length.
fn random_below<R: RngCore>(rng: &mut R, bound: &BigUint) -> BigUint {
    assert!(!bound.is_zero());
    if let Some(b) = bound.to_u64() {
        return BigUint::from(rng.random_range(0..b));
    }
    let bits = bound.bits();
    let bytes = bits.div_ceil(8) as usize;
    let excess = (bytes as u64 * 8 - bits) as u32;
    let mut buf = vec![0u8; bytes];
    loop {
        rng.fill_bytes(&mut buf);
        // little-endian: the last byte is the most significant
        buf[bytes - 1] &= 0xffu8 >> excess;
        let candidate = BigUint::from_bytes_le(&buf);
        if candidate < *bound {
            return candidate;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EmpiricalDistribution {
    pub n: u64,
    pub samples: u64,
    pub seed: u64,
    pub method: SamplingMethod,
    pub rng: &'static str,
    /// Durfee side -> number of draws.
    pub histogram: BTreeMap<u64, u64>,
}

impl EmpiricalDistribution {
    fn empty(config: &SamplerConfig) -> Self {
        Self {
            n: config.n,
            samples: 0,
            seed: config.seed,
            method: config.method,
            rng: RNG_ALGORITHM,
            histogram: BTreeMap::new(),
        }
    }

    /// Adds another histogram over the same n.
    pub fn merge(mut self, other: Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        self.samples += other.samples;
        for (k, c) in other.histogram {
            *self.histogram.entry(k).or_insert(0) += c;
        }
        self
    }

    /// Relative frequency of each k in `0..=floor(sqrt n)`.
    pub fn frequencies(&self) -> Vec<f64> {
        (0..=max_h(self.n))
            .map(|k| self.histogram.get(&k).copied().unwrap_or(0) as f64 / self.samples as f64)
            .collect()
    }
}

impl Engine {
    pub fn sampler(&self, config: SamplerConfig) -> Result<Sampler> {
        config.validate(&self.limits())?;
        Ok(Sampler::from_parts(config, Method::prepare(&config), 0))
    }

    pub fn sample_partition(&self, config: SamplerConfig) -> Result<Partition> {
        Ok(self.sampler(config)?.next_partition())
    }

    pub fn empirical_durfee_distribution(
        &self,
        config: SamplerConfig,
        samples: u64,
    ) -> Result<EmpiricalDistribution> {
        if samples == 0 {
            return Err(Error::InvalidArgument("need at least one sample".into()));
        }
        config.validate(&self.limits())?;
        let method = Method::prepare(&config);
        let streams = samples.div_ceil(STREAM_CHUNK);
        let result = (0..streams)
            .into_par_iter()
            .map(|stream| {
                let start = stream * STREAM_CHUNK;
                let count = STREAM_CHUNK.min(samples - start);
                let mut sampler = Sampler::from_parts(config, method.share(), stream);
                let mut hist = EmpiricalDistribution::empty(&config);
                for _ in 0..count {
                    let h = h_index(&sampler.next_partition());
                    *hist.histogram.entry(h).or_insert(0) += 1;
                }
                hist.samples = count;
                hist
            })
            .reduce(
                || EmpiricalDistribution::empty(&config),
                EmpiricalDistribution::merge,
            );
        Ok(result)
    }
}

pub fn sample_partition(config: SamplerConfig) -> Result<Partition> {
    engine().sample_partition(config)
}

pub fn empirical_durfee_distribution(
    config: SamplerConfig,
    samples: u64,
) -> Result<EmpiricalDistribution> {
    engine().empirical_durfee_distribution(config, samples)
}
