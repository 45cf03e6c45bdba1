//! On-disk text format for partition-count tables.
//!
//! ```text
//! n=<max>
//! p(0)
//! p(1)
//! ...
//! p(max)
//! ```
//!
//! One decimal integer per line.

use std::io::{BufRead, Write};

use num_bigint::BigUint;

use crate::counting::PartitionCountTable;
use crate::error::{Error, Result};

pub const CACHE_FILE_NAME: &str = "partition_counts.txt";

pub fn write_partition_table<W: Write>(table: &PartitionCountTable, mut out: W) -> Result<()> {
    let io = |e: std::io::Error| Error::Cache(e.to_string());
    writeln!(out, "n={}", table.max_n()).map_err(io)?;
    for value in table.values() {
        writeln!(out, "{value}").map_err(io)?;
    }
    out.flush().map_err(io)
}

pub fn read_partition_table<R: BufRead>(input: R) -> Result<PartitionCountTable> {
    let mut lines = input.lines();
    let header = lines
        .next()
        .ok_or_else(|| Error::Cache("empty cache file".into()))?
        .map_err(|e| Error::Cache(e.to_string()))?;
    let max: usize = header
        .trim()
        .strip_prefix("n=")
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::Cache(format!("bad header {header:?}, expected n=<max>")))?;
    let mut values = Vec::with_capacity(max + 1);
    for (i, line) in lines.enumerate() {
        let line = line.map_err(|e| Error::Cache(e.to_string()))?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let value = line
            .parse::<BigUint>()
            .map_err(|_| Error::Cache(format!("line {}: not a decimal integer", i + 2)))?;
        values.push(value);
    }
    if values.len() != max + 1 {
        return Err(Error::Cache(format!(
            "header says n={max} but file holds {} values",
            values.len()
        )));
    }
    PartitionCountTable::from_values(values)
}
