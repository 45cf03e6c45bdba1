//! Citation profiles as partitions: the h-index is the side of the Durfee
//! square, and every profile splits into square, right arm and lower leg.

use std::fmt;

use num_integer::Roots;
use serde::Serialize;

use crate::error::{Error, Result};

/// Citations per paper in weakly decreasing order. Zeros (uncited papers) are
/// allowed and kept.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(transparent)]
pub struct Partition {
    parts: Vec<u64>,
}

impl Partition {
    pub fn new(parts: Vec<u64>) -> Result<Self> {
        if let Some(i) = parts.windows(2).position(|w| w[0] < w[1]) {
            return Err(Error::InvalidArgument(format!(
                "parts must be weakly decreasing; part {} ({}) < part {} ({})",
                i + 1,
                parts[i],
                i + 2,
                parts[i + 1]
            )));
        }
        Ok(Self { parts })
    }

    /// Sorts the citation counts into decreasing order.
    pub fn from_unsorted(mut parts: Vec<u64>) -> Self {
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Self { parts }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn parts(&self) -> &[u64] {
        &self.parts
    }

    pub fn into_parts(self) -> Vec<u64> {
        self.parts
    }

    /// N_citations.
    pub fn size(&self) -> u64 {
        self.parts.iter().sum()
    }

    /// N_papers, counting uncited papers.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// Partition with the zero parts dropped.
    pub fn trimmed(&self) -> Partition {
        Partition {
            parts: self.parts.iter().copied().take_while(|&p| p > 0).collect(),
        }
    }

    /// Transpose of the Young diagram.
    pub fn conjugate(&self) -> Partition {
        let largest = self.parts.first().copied().unwrap_or(0);
        let parts = (1..=largest)
            .map(|j| self.parts.iter().take_while(|&&p| p >= j).count() as u64)
            .collect();
        Partition { parts }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
        }
        f.write_str(")")
    }
}

/// Largest h such that h papers have at least h citations each.
pub fn h_index(lambda: &Partition) -> u64 {
    lambda
        .parts
        .iter()
        .enumerate()
        .take_while(|&(i, &p)| p > i as u64)
        .count() as u64
}

/// A partition split into its Durfee square (side `k`), the part to the right
/// of the square (at most `k` rows) and the part below it (parts at most `k`).
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DurfeeDecomposition {
    pub k: u64,
    pub right: Partition,
    pub below: Partition,
}

impl DurfeeDecomposition {
    pub fn recompose(&self) -> Partition {
        let k = self.k as usize;
        let mut parts = Vec::with_capacity(k + self.below.len());
        for i in 0..k {
            parts.push(self.k + self.right.parts.get(i).copied().unwrap_or(0));
        }
        parts.extend_from_slice(&self.below.parts);
        Partition { parts }
    }

    pub fn size(&self) -> u64 {
        self.k * self.k + self.right.size() + self.below.size()
    }
}

pub fn durfee_decompose(lambda: &Partition) -> DurfeeDecomposition {
    let k = h_index(lambda);
    let ku = k as usize;
    let right = Partition {
        parts: lambda.parts[..ku]
            .iter()
            .map(|&p| p - k)
            .take_while(|&p| p > 0)
            .collect(),
    };
    let below = Partition {
        parts: lambda.parts[ku..].to_vec(),
    };
    DurfeeDecomposition { k, right, below }
}

/// Checks `h <= floor(sqrt(n))`.
pub fn h_within_bound(n: u64, h: u64) -> bool {
    h <= n.sqrt()
}

/// Parses the profile file format: one `name: c1 c2 c3 ...` per line.
/// Blank lines and lines starting with `#` are skipped. Counts may be in any
/// order.
pub fn parse_profiles(text: &str) -> Result<Vec<(String, Partition)>> {
    let mut profiles = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let line_no = idx as u64 + 1;
        let (name, counts) = line.split_once(':').ok_or_else(|| Error::Parse {
            line: line_no,
            message: "expected `name: c1 c2 ...`".into(),
        })?;
        let name = name.trim();
        if name.is_empty() {
            return Err(Error::Parse {
                line: line_no,
                message: "empty profile name".into(),
            });
        }
        let parts = counts
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<u64>().map_err(|_| Error::Parse {
                    line: line_no,
                    message: format!("citation count {t:?} is not a nonnegative integer"),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        profiles.push((name.to_string(), Partition::from_unsorted(parts)));
    }
    Ok(profiles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(parts: &[u64]) -> Partition {
        Partition::new(parts.to_vec()).unwrap()
    }

    #[test]
    fn h_index_examples() {
        assert_eq!(h_index(&p(&[5, 3, 1, 0])), 2);
        assert_eq!(h_index(&Partition::empty()), 0);
        assert_eq!(h_index(&p(&[3, 3, 3])), 3);
        assert_eq!(h_index(&p(&[0, 0])), 0);
        assert_eq!(h_index(&p(&[100])), 1);
    }

    #[test]
    fn decomposition_examples() {
        let d = durfee_decompose(&p(&[5, 3, 1]));
        assert_eq!(
            (d.k, d.right.clone(), d.below.clone()),
            (2, p(&[3, 1]), p(&[1]))
        );
        let e = durfee_decompose(&Partition::empty());
        assert_eq!((e.k, e.right.len(), e.below.len()), (0, 0, 0));
        let sq = durfee_decompose(&p(&[2, 2]));
        assert_eq!((sq.k, sq.right.len(), sq.below.len()), (2, 0, 0));
        let zeros = p(&[5, 3, 1, 0]);
        assert_eq!(durfee_decompose(&zeros).recompose(), zeros);
    }

    #[test]
    fn rejects_increasing_parts() {
        assert!(Partition::new(vec![1, 2]).is_err());
        assert_eq!(Partition::from_unsorted(vec![1, 0, 5, 3]), p(&[5, 3, 1, 0]));
    }

    #[test]
    fn conjugation() {
        assert_eq!(p(&[5, 3, 1]).conjugate(), p(&[3, 2, 2, 1, 1]));
        assert_eq!(p(&[5, 3, 1]).conjugate().conjugate(), p(&[5, 3, 1]));
    }

    #[test]
    fn profile_parsing() {
        let text = "# comment\nX: 5 3 1 0\n\nY: 1, 4,2\n";
        let profiles = parse_profiles(text).unwrap();
        assert_eq!(profiles[0], ("X".to_string(), p(&[5, 3, 1, 0])));
        assert_eq!(profiles[1].1, p(&[4, 2, 1]));
        assert_eq!(h_index(&profiles[0].1), 2);
        assert!(matches!(
            parse_profiles("X 1 2"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_profiles("ok: 1\nbad: 1 x"),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    fn arb_partition(max_size: u64) -> impl Strategy<Value = Partition> {
        prop::collection::vec(0..=max_size, 0..40).prop_map(move |mut v| {
            // scale down so the total stays near max_size
            let total: u64 = v.iter().sum();
            if total > max_size {
                for x in v.iter_mut() {
                    *x = *x * max_size / total;
                }
            }
            Partition::from_unsorted(v)
        })
    }

    proptest! {
        #[test]
        fn decomposition_round_trips(lambda in arb_partition(500)) {
            let d = durfee_decompose(&lambda);
            prop_assert_eq!(d.k, h_index(&lambda));
            prop_assert_eq!(d.recompose(), lambda.clone());
            prop_assert_eq!(d.size(), lambda.size());
            prop_assert!(d.right.len() as u64 <= d.k);
            prop_assert!(d.below.parts().iter().all(|&q| q <= d.k));
        }

        #[test]
        fn h_is_bounded_by_sqrt(lambda in arb_partition(500)) {
            prop_assert!(h_within_bound(lambda.size(), h_index(&lambda)));
        }

        #[test]
        fn h_equals_conjugate_h(lambda in arb_partition(500)) {
            prop_assert_eq!(h_index(&lambda), h_index(&lambda.conjugate()));
        }

        #[test]
        fn adding_a_citation_never_lowers_h(lambda in arb_partition(500), pick in any::<prop::sample::Index>()) {
            prop_assume!(!lambda.is_empty());
            let before = h_index(&lambda);
            let i = pick.index(lambda.len());
            let mut parts = lambda.clone().into_parts();
            parts[i] += 1;
            let after = Partition::from_unsorted(parts);
            prop_assert!(h_index(&after) >= before);
        }
    }
}
