//! Exact statistics of the Durfee square of a uniform random partition,
//! applied to the h-index of citation profiles.
//!
//! A citation profile sorted in decreasing order is a partition of the total
//! citation count, and its h-index is the side of the partition's Durfee
//! square. Treating every partition of N as equally likely gives an exact
//! distribution for h given N, from which this crate derives confidence
//! intervals, tail probabilities and the rule-of-thumb estimate
//! `h ~ (sqrt(6) ln 2 / pi) sqrt(N)`.
//!
//! ```
//! use durfee_core::{confidence_interval, rule_of_thumb, IntervalRule};
//!
//! let iv = confidence_interval(1677, 0.02, IntervalRule::Symmetric).unwrap();
//! assert!(iv.contains(24));
//! assert_eq!(rule_of_thumb(1677).to_string(), "22.1");
//! ```

pub mod cohort;
pub mod counting;
pub mod datasets;
pub mod engine;
pub mod error;
pub mod interval;
pub mod persist;
pub mod profile;
pub mod ratio;
pub mod reproduce;
pub mod sampler;

#[cfg(test)]
mod oracle;

pub use cohort::{
    analyze_cohort, assess, book_adjust, hirsch_a, pearson_r, read_cohort_csv, write_cohort_csv,
    Anomaly, Assessment, CohortReport, RecordIssue, ScatterPoint, ScholarRecord,
};
pub use counting::{
    BoundedPartTable, DurfeeCountRow, HardyRamanujanEstimate, Limits, PartitionCountTable,
};
pub use datasets::Dataset;
pub use engine::{
    bounded_part_counts, durfee_counts, engine, hardy_ramanujan_estimate, partition_count, Engine,
};
pub use error::{Error, Result};
pub use interval::{
    concentration_mass, confidence_interval, durfee_distribution, max_h, mode_h, rule_of_thumb,
    tail_probability, ConfidenceInterval, DurfeeDistribution, IntervalRule, RuleOfThumbEstimate,
    DEFAULT_EPSILON, RULE_OF_THUMB_CONSTANT,
};
pub use profile::{durfee_decompose, h_index, parse_profiles, DurfeeDecomposition, Partition};
pub use ratio::Probability;
pub use reproduce::{reproduce, Reproduction, Target};
pub use sampler::{
    empirical_durfee_distribution, sample_partition, EmpiricalDistribution, Sampler, SamplerConfig,
    SamplingMethod,
};
