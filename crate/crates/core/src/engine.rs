//! Memoizing front end over [`crate::counting`].
//!
//! An [`Engine`] owns the resource limits and the count caches. Cached tables
//! are handed out as `Arc`s and never mutated after insertion; a larger
//! partition table replaces the cached one wholesale.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock, RwLock};

use num_bigint::BigUint;

use crate::counting::{
    durfee_counts_uncached, BoundedPartTable, DurfeeCountRow, HardyRamanujanEstimate, Limits,
    PartitionCountTable,
};
use crate::error::Result;

#[derive(Debug, Default)]
pub struct Engine {
    limits: Limits,
    partition_table: RwLock<Option<Arc<PartitionCountTable>>>,
    durfee_rows: RwLock<HashMap<u64, Arc<DurfeeCountRow>>>,
    bounded_tables: RwLock<HashMap<(u64, u64), Arc<BoundedPartTable>>>,
}

impl Engine {
    pub fn new(limits: Limits) -> Self {
        Self {
            limits,
            ..Self::default()
        }
    }

    /// Seeds the partition cache, e.g. from a table persisted on disk.
    pub fn with_partition_table(self, table: PartitionCountTable) -> Self {
        *self.partition_table.write().expect("cache lock") = Some(Arc::new(table));
        self
    }

    pub fn limits(&self) -> Limits {
        self.limits
    }

    /// A table covering at least `0..=n`.
    pub fn partition_table(&self, n: u64) -> Result<Arc<PartitionCountTable>> {
        let n = self.limits.check(n)?;
        if let Some(table) = self.partition_table.read().expect("cache lock").as_ref() {
            if table.max_n() >= n {
                return Ok(Arc::clone(table));
            }
        }
        let mut slot = self.partition_table.write().expect("cache lock");
        let table = match slot.as_ref() {
            Some(table) if table.max_n() >= n => return Ok(Arc::clone(table)),
            Some(table) => {
                let mut bigger = PartitionCountTable::clone(table);
                bigger.extend_to(n);
                bigger
            }
            None => PartitionCountTable::new(n),
        };
        let table = Arc::new(table);
        *slot = Some(Arc::clone(&table));
        Ok(table)
    }

    /// The largest partition table built so far, if any.
    pub fn cached_partition_table(&self) -> Option<Arc<PartitionCountTable>> {
        self.partition_table.read().expect("cache lock").clone()
    }

    pub fn partition_count(&self, n: u64) -> Result<BigUint> {
        Ok(self.partition_table(n)?[n as usize].clone())
    }

    pub fn bounded_part_counts(&self, k: u64, max_m: u64) -> Result<Arc<BoundedPartTable>> {
        if k == 0 {
            return Err(crate::Error::InvalidArgument(
                "part bound k must be >= 1".into(),
            ));
        }
        let max_m_usize = self.limits.check(max_m)?;
        if let Some(table) = self
            .bounded_tables
            .read()
            .expect("cache lock")
            .get(&(k, max_m))
        {
            return Ok(Arc::clone(table));
        }
        let table = Arc::new(BoundedPartTable::new(k as usize, max_m_usize));
        self.bounded_tables
            .write()
            .expect("cache lock")
            .entry((k, max_m))
            .or_insert_with(|| Arc::clone(&table));
        Ok(table)
    }

    pub fn durfee_counts(&self, n: u64) -> Result<Arc<DurfeeCountRow>> {
        let n_usize = self.limits.check(n)?;
        if let Some(row) = self.durfee_rows.read().expect("cache lock").get(&n) {
            return Ok(Arc::clone(row));
        }
        let row = Arc::new(durfee_counts_uncached(n_usize));
        let mut rows = self.durfee_rows.write().expect("cache lock");
        Ok(Arc::clone(rows.entry(n).or_insert(row)))
    }

    pub fn hardy_ramanujan_estimate(&self, n: u64) -> Result<HardyRamanujanEstimate> {
        HardyRamanujanEstimate::new(n)
    }
}

/// Process-wide engine with default limits, used by the free functions.
pub fn engine() -> &'static Engine {
    static ENGINE: OnceLock<Engine> = OnceLock::new();
    ENGINE.get_or_init(Engine::default)
}

pub fn partition_count(n: u64) -> Result<BigUint> {
    engine().partition_count(n)
}

pub fn bounded_part_counts(k: u64, max_m: u64) -> Result<Arc<BoundedPartTable>> {
    engine().bounded_part_counts(k, max_m)
}

pub fn durfee_counts(n: u64) -> Result<Arc<DurfeeCountRow>> {
    engine().durfee_counts(n)
}

pub fn hardy_ramanujan_estimate(n: u64) -> Result<HardyRamanujanEstimate> {
    HardyRamanujanEstimate::new(n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Error;

    #[test]
    fn caps_are_enforced() {
        let engine = Engine::new(Limits {
            max_n: 100,
            ..Limits::default()
        });
        assert!(engine.partition_count(100).is_ok());
        assert!(matches!(
            engine.partition_count(101),
            Err(Error::ResourceLimit {
                requested: 101,
                cap: 100
            })
        ));
        assert!(engine.durfee_counts(101).is_err());
        assert!(engine.bounded_part_counts(3, 101).is_err());
        assert!(engine.bounded_part_counts(0, 5).is_err());
    }

    #[test]
    fn tables_are_shared_and_grow() {
        let engine = Engine::default();
        let small = engine.partition_table(10).unwrap();
        let again = engine.partition_table(5).unwrap();
        assert!(Arc::ptr_eq(&small, &again));
        let big = engine.partition_table(200).unwrap();
        assert_eq!(big.max_n(), 200);
        assert_eq!(small[10], big[10]);
        let row = engine.durfee_counts(30).unwrap();
        assert!(Arc::ptr_eq(&row, &engine.durfee_counts(30).unwrap()));
    }

    #[test]
    fn bounded_with_large_k_is_unrestricted() {
        let table = bounded_part_counts(1_000, 30).unwrap();
        assert_eq!(table[30], partition_count(30).unwrap());
        assert_eq!(table.max_m(), 30);
    }
}
