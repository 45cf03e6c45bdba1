//! Independent oracles shared by the integration tests. Nothing here calls
//! into the library's counting code.
#![allow(dead_code)]

use std::collections::HashMap;

use durfee_core::{Partition, Sampler, SamplerConfig, SamplingMethod};
use num_bigint::BigUint;
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// All partitions of `n` as plain vectors, largest part first.
pub fn enumerate(n: u64) -> Vec<Vec<u64>> {
    fn go(rem: u64, max: u64, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if rem == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=rem.min(max)).rev() {
            cur.push(p);
            go(rem - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(n, n, &mut Vec::new(), &mut out);
    out
}

/// Largest i with parts[i-1] >= i, by direct scan.
pub fn naive_h(parts: &[u64]) -> u64 {
    let mut h = 0;
    for (i, &p) in parts.iter().enumerate() {
        if p > i as u64 {
            h = i as u64 + 1;
        }
    }
    h
}

/// Durfee-size histogram of all partitions of `n`.
pub fn brute_durfee_counts(n: u64) -> Vec<u64> {
    let mut counts = vec![0u64; (n as f64).sqrt() as usize + 2];
    for p in enumerate(n) {
        counts[naive_h(&p) as usize] += 1;
    }
    while counts.len() > 1 && *counts.last().unwrap() == 0 {
        counts.pop();
    }
    counts
}

/// exact[m][j] = number of partitions of m into exactly j parts,
/// via p(m, j) = p(m-1, j-1) + p(m-j, j).
pub fn exact_parts_table(max_m: usize, max_j: usize) -> Vec<Vec<BigUint>> {
    let mut t = vec![vec![BigUint::from(0u8); max_j + 1]; max_m + 1];
    t[0][0] = BigUint::from(1u8);
    for m in 1..=max_m {
        for j in 1..=max_j.min(m) {
            let mut v = t[m - 1][j - 1].clone();
            if m >= j {
                v += &t[m - j][j];
            }
            t[m][j] = v;
        }
    }
    t
}

/// Pearson chi-square p-value for uniformity over all partitions of `n`,
/// drawing `draws` samples with the given method.
pub fn uniformity_p_value(n: u64, draws: u64, seed: u64, method: SamplingMethod) -> f64 {
    let all = enumerate(n);
    let index: HashMap<Vec<u64>, usize> = all
        .iter()
        .cloned()
        .enumerate()
        .map(|(i, p)| (p, i))
        .collect();
    let mut observed = vec![0u64; all.len()];
    let mut sampler = Sampler::new(SamplerConfig::new(n, seed, method)).unwrap();
    for _ in 0..draws {
        let p: Partition = sampler.next_partition();
        observed[index[p.parts()]] += 1;
    }
    let expected = draws as f64 / all.len() as f64;
    let stat: f64 = observed
        .iter()
        .map(|&o| (o as f64 - expected).powi(2) / expected)
        .sum();
    let dist = ChiSquared::new((all.len() - 1) as f64).unwrap();
    1.0 - dist.cdf(stat)
}
