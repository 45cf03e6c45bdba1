//! Brute-force enumeration, used only by tests as an independent check.

use crate::profile::Partition;

/// Every partition of `n`, largest part first.
pub(crate) fn enumerate(n: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current = Vec::new();
    fill(n, n, &mut current, &mut out);
    out
}

fn fill(remaining: usize, max_part: usize, current: &mut Vec<u64>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition::new(current.clone()).expect("generated in order"));
        return;
    }
    for part in (1..=remaining.min(max_part)).rev() {
        current.push(part as u64);
        fill(remaining - part, part, current, out);
        current.pop();
    }
}
