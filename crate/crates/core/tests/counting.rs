mod common;

use durfee_core::{
    bounded_part_counts, durfee_counts, hardy_ramanujan_estimate, partition_count, Engine, Error,
    Limits, PartitionCountTable,
};
use num_bigint::BigUint;

#[test]
fn known_partition_numbers() {
    assert_eq!(partition_count(0).unwrap(), BigUint::from(1u8));
    assert_eq!(partition_count(10).unwrap(), BigUint::from(42u8));
    assert_eq!(partition_count(100).unwrap(), BigUint::from(190_569_292u64));
    assert_eq!(
        partition_count(1000).unwrap().to_string(),
        "24061467864032622473692149727991"
    );
}

#[test]
fn partition_numbers_match_enumeration() {
    for n in 0..=30 {
        assert_eq!(
            partition_count(n).unwrap(),
            BigUint::from(common::enumerate(n).len()),
            "n={n}"
        );
    }
}

#[test]
fn bounded_parts_match_enumeration() {
    for m in 0..=25u64 {
        let all = common::enumerate(m);
        for k in 1..=8u64 {
            let table = bounded_part_counts(k, 25).unwrap();
            let brute = all.iter().filter(|p| p.iter().all(|&x| x <= k)).count();
            assert_eq!(table[m as usize], BigUint::from(brute), "m={m} k={k}");
        }
    }
}

// Parts <= k and at most k parts are equinumerous by conjugation.
#[test]
fn conjugation_symmetry_small_by_enumeration() {
    for m in 0..=40u64 {
        let all = common::enumerate(m);
        for k in 1..=20u64 {
            let at_most_k_parts = all.iter().filter(|p| p.len() as u64 <= k).count();
            let table = bounded_part_counts(k, 40).unwrap();
            assert_eq!(
                table[m as usize],
                BigUint::from(at_most_k_parts),
                "m={m} k={k}"
            );
        }
    }
}

#[test]
fn conjugation_symmetry_to_200() {
    let exact = common::exact_parts_table(200, 20);
    for k in 1..=20usize {
        let table = bounded_part_counts(k as u64, 200).unwrap();
        for m in 0..=200 {
            let at_most_k_parts: BigUint = exact[m][..=k].iter().sum();
            assert_eq!(table[m], at_most_k_parts, "m={m} k={k}");
        }
    }
}

#[test]
fn durfee_rows_sum_to_partition_numbers() {
    for n in (0..=5000).step_by(97).chain([10_000]) {
        assert_eq!(
            durfee_counts(n).unwrap().total(),
            partition_count(n).unwrap(),
            "n={n}"
        );
    }
}

#[test]
fn durfee_row_has_no_entries_past_the_square_root_bound() {
    let row = durfee_counts(1677).unwrap();
    assert_eq!(row.max_k(), 40);
    assert!(row.counts[40] > BigUint::from(0u8));
    assert_eq!(row.counts[0], BigUint::from(0u8));
}

#[test]
fn hardy_ramanujan_ratios() {
    let ratio = |n| {
        hardy_ramanujan_estimate(n)
            .unwrap()
            .ratio_to(&partition_count(n).unwrap())
    };
    assert!((1.0..1.10).contains(&ratio(100)));
    assert!((1.0..1.02).contains(&ratio(5000)));
    assert!((ratio(1) - 1.876_670_422_605_369).abs() < 1e-12);
    let mut last = f64::INFINITY;
    for n in [10, 100, 1000, 10_000] {
        let r = ratio(n);
        assert!(r < last, "ratio should decrease toward 1, n={n}");
        last = r;
    }
}

#[test]
fn limits_are_enforced() {
    let engine = Engine::new(Limits {
        max_n: 500,
        ..Limits::default()
    });
    assert!(matches!(
        engine.partition_count(501),
        Err(Error::ResourceLimit {
            requested: 501,
            cap: 500
        })
    ));
    assert!(engine.durfee_counts(500).is_ok());
    assert!(engine.bounded_part_counts(0, 10).is_err());
    assert!(hardy_ramanujan_estimate(0).is_err());
}

#[test]
fn preloaded_table_is_used_and_extended() {
    let engine = Engine::default().with_partition_table(PartitionCountTable::new(50));
    assert_eq!(engine.cached_partition_table().unwrap().max_n(), 50);
    assert_eq!(
        engine.partition_count(200).unwrap(),
        partition_count(200).unwrap()
    );
    assert!(engine.cached_partition_table().unwrap().max_n() >= 200);
}
