//! Acceptance checks. Each test prints one `[PASS]` or `[FAIL]` line that
//! bypasses libtest output capture, then asserts.

mod common;

use std::io::Write;
use std::time::Instant;

use durfee_core::reproduce::{INTERVAL_ENDPOINT_TOLERANCE, PUBLISHED_INTERVALS};
use durfee_core::{
    analyze_cohort, concentration_mass, confidence_interval, durfee_counts, engine,
    hardy_ramanujan_estimate, max_h, partition_count, reproduce, rule_of_thumb, tail_probability,
    Dataset, IntervalRule, SamplerConfig, SamplingMethod, Target, DEFAULT_EPSILON,
};
use num_bigint::BigUint;

fn report(criterion: u32, ok: bool, detail: &str) {
    let tag = if ok { "PASS" } else { "FAIL" };
    let line = format!("[{tag}] criterion {criterion}: {detail}\n");
    let _ = std::io::stdout().write_all(line.as_bytes());
    assert!(ok, "criterion {criterion} failed: {detail}");
}

#[test]
fn criterion_01_interval_table() {
    let start = Instant::now();
    let mut failures = Vec::new();
    for &(n, low, high) in &PUBLISHED_INTERVALS {
        let mut close = false;
        for rule in [IntervalRule::Symmetric, IntervalRule::MinWidth] {
            let iv = confidence_interval(n, DEFAULT_EPSILON, rule).unwrap();
            if iv.mass.cmp_f64(1.0 - DEFAULT_EPSILON).is_lt() {
                failures.push(format!("N={n} {rule} mass {:.6} < 0.98", iv.mass.to_f64()));
            }
            close |= iv.low.abs_diff(low) <= INTERVAL_ENDPOINT_TOLERANCE
                && iv.high.abs_diff(high) <= INTERVAL_ENDPOINT_TOLERANCE;
        }
        if !close {
            failures.push(format!(
                "N={n} printed [{low},{high}] not within 1 under either rule"
            ));
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    if elapsed > 300.0 {
        failures.push(format!("took {elapsed:.1}s"));
    }
    report(
        1,
        failures.is_empty(),
        &format!("26 intervals within +/-1, mass >= 0.98, {elapsed:.1}s; problems: {failures:?}"),
    );
}

#[test]
fn criterion_02_rule_of_thumb_cells() {
    let e = engine();
    let mut mismatched = Vec::new();
    let mut compared = 0;
    let mut flagged = Vec::new();
    for target in [
        Target::Table2,
        Target::Table3,
        Target::Table4,
        Target::Appendix,
    ] {
        let rep = reproduce(e, target).unwrap();
        flagged.extend(rep.flagged.iter().map(|f| f.row.clone()));
        for cell in rep
            .cells
            .iter()
            .filter(|c| c.column == "estimate" && !c.excluded)
        {
            compared += 1;
            if !cell.matches {
                mismatched.push(format!(
                    "{target} {}: printed {} computed {}",
                    cell.row, cell.published, cell.computed
                ));
            }
        }
    }
    let detected = flagged.iter().any(|r| r.contains("Okounkov"))
        && flagged.iter().any(|r| r.contains("Spencer"));
    report(
        2,
        mismatched.is_empty() && detected,
        &format!(
            "{} of {compared} estimate cells within 0.1; flagged rows {flagged:?}; mismatches {mismatched:?}",
            compared - mismatched.len()
        ),
    );
}

#[test]
fn criterion_03_tail_claim() {
    let tail = tail_probability(1677, 32).unwrap();
    let ok = tail.cmp_f64(1e-7).is_lt() && max_h(1677) == 40;
    report(
        3,
        ok,
        &format!(
            "P(h >= 32 | N=1677) = {:.3e} (log10 {:.3}), max_h(1677) = {}",
            tail.to_f64(),
            tail.log10(),
            max_h(1677)
        ),
    );
}

#[test]
fn criterion_04_euler_gauss() {
    let mut bad = Vec::new();
    for n in 0..=2000u64 {
        let row = durfee_counts(n).unwrap();
        if row.total() != partition_count(n).unwrap() {
            bad.push(n);
        }
    }
    for n in 0..=30u64 {
        let brute = common::brute_durfee_counts(n);
        let row = durfee_counts(n).unwrap();
        let ours: Vec<BigUint> = row.counts.clone();
        let theirs: Vec<BigUint> = brute.iter().map(|&c| BigUint::from(c)).collect();
        if ours != theirs {
            bad.push(n);
        }
    }
    report(
        4,
        bad.is_empty(),
        &format!("sum identity n <= 2000, enumeration n <= 30; failing n: {bad:?}"),
    );
}

#[test]
fn criterion_05_nas_correlation() {
    let records = Dataset::Nas.records().unwrap();
    let rep = analyze_cohort(&records, DEFAULT_EPSILON).unwrap();
    let raw = rep.pearson_r.unwrap();
    let nonbook = rep.pearson_r_nonbook.unwrap();
    let ok = (0.91..=0.96).contains(&raw) && nonbook > raw;
    report(
        5,
        ok,
        &format!(
            "R = {raw:.5}, non-book R = {nonbook:.5} ({} records, {} excluded from non-book)",
            records.len(),
            rep.excluded_from_nonbook.len()
        ),
    );
}

#[test]
fn criterion_06_associate_professors() {
    let records = Dataset::Assoc.records().unwrap();
    let rep = analyze_cohort(&records, DEFAULT_EPSILON).unwrap();
    let outside: Vec<String> = rep
        .out_of_interval()
        .map(|a| format!("{} h={} {} (by {})", a.name, a.h, a.interval, a.distance))
        .collect();
    let all_by_one = rep.out_of_interval().all(|a| a.distance == 1);
    let printed = Dataset::Assoc.printed_rows().unwrap();
    let outside_printed = records
        .iter()
        .zip(&printed)
        .filter(|(r, p)| r.h < p.printed_low.unwrap() || r.h > p.printed_high.unwrap())
        .count();
    report(
        6,
        outside.len() == 5 && all_by_one,
        &format!(
            "{} of {} outside computed interval {outside:?} (expected 5, each by 1); outside printed ranges: {outside_printed}",
            outside.len(),
            records.len()
        ),
    );
}

#[test]
fn criterion_07_stanley() {
    let est = rule_of_thumb(6510);
    let stanley = Dataset::Nas
        .records()
        .unwrap()
        .into_iter()
        .find(|r| r.name.contains("Stanley"))
        .unwrap();
    let a = durfee_core::assess(&stanley, DEFAULT_EPSILON).unwrap();
    let shortfall = a.shortfall().unwrap();
    let revised = rule_of_thumb(6510 - 3237);
    let ok = est.to_string() == "43.6"
        && a.h == 35
        && (shortfall - 0.20).abs() <= 0.01
        && revised.to_string() == "30.9";
    report(
        7,
        ok,
        &format!(
            "estimate {est}, h 35 is a {:.1}% shortfall, revised estimate at 3273 = {revised}",
            shortfall * 100.0
        ),
    );
}

#[test]
fn criterion_08_sampler() {
    let exact = durfee_core::durfee_distribution(200).unwrap();
    let empirical = durfee_core::empirical_durfee_distribution(
        SamplerConfig::new(200, 20_140_601, SamplingMethod::default()),
        100_000,
    )
    .unwrap();
    let tv = exact.total_variation(&empirical.frequencies());
    let mut p_values = Vec::new();
    for method in [
        SamplingMethod::RecursiveUnranking,
        SamplingMethod::BoltzmannRejection,
    ] {
        for n in [4, 6, 8] {
            p_values.push((
                method,
                n,
                common::uniformity_p_value(n, 100_000, 7 + n, method),
            ));
        }
    }
    let ok = tv < 0.02 && p_values.iter().all(|&(_, _, p)| p > 0.001);
    let shown: Vec<String> = p_values
        .iter()
        .map(|(m, n, p)| format!("{m} n={n} p={p:.3}"))
        .collect();
    report(
        8,
        ok,
        &format!("TV(n=200, 1e5 draws) = {tv:.4}; chi-square {shown:?}"),
    );
}

#[test]
fn criterion_09_hardy_ramanujan() {
    let mut grid: Vec<u64> = (0..=400)
        .map(|i| 10f64.powf(i as f64 / 100.0).round() as u64)
        .collect();
    grid.dedup();
    let mut below_one = Vec::new();
    let mut too_large = Vec::new();
    for &n in &grid {
        let ratio = hardy_ramanujan_estimate(n)
            .unwrap()
            .ratio_to(&partition_count(n).unwrap());
        if ratio <= 1.0 {
            below_one.push(n);
        }
        if n >= 500 && ratio >= 1.05 {
            too_large.push(n);
        }
    }
    let r500 = hardy_ramanujan_estimate(500)
        .unwrap()
        .ratio_to(&partition_count(500).unwrap());
    report(
        9,
        below_one.is_empty() && too_large.is_empty(),
        &format!("{} grid points in [1,10000]; ratio at 500 = {r500:.5}; ratio <= 1 at {below_one:?}; >= 1.05 at {too_large:?}", grid.len()),
    );
}

#[test]
fn criterion_10_concentration() {
    let small = concentration_mass(100, 0.2).unwrap();
    let large = concentration_mass(10_000, 0.2).unwrap();
    report(
        10,
        large > small,
        &format!(
            "window mass at eps=0.2: n=100 {:.6}, n=10000 {:.6}",
            small.to_f64(),
            large.to_f64()
        ),
    );
}
