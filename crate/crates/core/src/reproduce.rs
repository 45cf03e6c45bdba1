//! Regenerates the published tables from the engine and the bundled
//! fixtures, cell by cell.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::cohort::{RecordIssue, ScholarRecord};
use crate::datasets::{Dataset, PrintedRow};
use crate::engine::Engine;
use crate::error::{Error, Result};
use crate::interval::{rule_of_thumb, IntervalRule, DEFAULT_EPSILON};

/// Published 98% intervals for h given N citations.
pub const PUBLISHED_INTERVALS: [(u64, u64, u64); 26] = [
    (50, 2, 5),
    (100, 3, 7),
    (200, 5, 9),
    (300, 7, 11),
    (400, 8, 13),
    (500, 9, 14),
    (750, 11, 17),
    (1000, 13, 20),
    (1250, 15, 22),
    (1500, 17, 24),
    (1750, 18, 26),
    (2000, 20, 28),
    (2500, 22, 31),
    (3000, 25, 34),
    (3500, 27, 36),
    (4000, 29, 39),
    (4500, 31, 41),
    (5000, 34, 43),
    (5500, 35, 45),
    (6000, 36, 47),
    (6500, 37, 49),
    (7000, 39, 51),
    (7500, 40, 52),
    (8000, 42, 54),
    (9000, 44, 57),
    (10000, 47, 60),
];

/// Endpoint tolerance used when comparing intervals with published ones.
pub const INTERVAL_ENDPOINT_TOLERANCE: u64 = 1;

/// Estimate tolerance, in tenths.
pub const ESTIMATE_TOLERANCE_TENTHS: i64 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Target {
    Table1,
    Table2,
    Table3,
    Table4,
    Appendix,
}

impl Target {
    pub const ALL: [Target; 5] = [
        Target::Table1,
        Target::Table2,
        Target::Table3,
        Target::Table4,
        Target::Appendix,
    ];

    pub fn dataset(self) -> Option<Dataset> {
        match self {
            Self::Table1 => None,
            Self::Table2 => Some(Dataset::Fields),
            Self::Table3 => Some(Dataset::Abel),
            Self::Table4 => Some(Dataset::Assoc),
            Self::Appendix => Some(Dataset::Nas),
        }
    }
}

impl FromStr for Target {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table1" => Ok(Self::Table1),
            "table2" => Ok(Self::Table2),
            "table3" => Ok(Self::Table3),
            "table4" => Ok(Self::Table4),
            "appendix" => Ok(Self::Appendix),
            other => Err(Error::InvalidArgument(format!(
                "unknown reproduction target {other:?} (expected table1..table4 or appendix)"
            ))),
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Table1 => "table1",
            Self::Table2 => "table2",
            Self::Table3 => "table3",
            Self::Table4 => "table4",
            Self::Appendix => "appendix",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellDiff {
    pub row: String,
    pub column: String,
    pub published: String,
    pub computed: String,
    pub matches: bool,
    /// Set when the row is flagged and left out of the match count.
    pub excluded: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FlaggedRow {
    pub row: String,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ColumnSummary {
    pub column: String,
    pub matched: usize,
    pub compared: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Reproduction {
    pub target: Target,
    pub cells: Vec<CellDiff>,
    pub flagged: Vec<FlaggedRow>,
    /// Free-form summary lines (exact-match counts and the like).
    pub notes: Vec<String>,
}

impl Reproduction {
    /// Matched / compared counts per column, flagged rows excluded.
    pub fn summary(&self) -> Vec<ColumnSummary> {
        let mut out: Vec<ColumnSummary> = Vec::new();
        for cell in self.cells.iter().filter(|c| !c.excluded) {
            let idx = match out.iter().position(|s| s.column == cell.column) {
                Some(i) => i,
                None => {
                    out.push(ColumnSummary {
                        column: cell.column.clone(),
                        matched: 0,
                        compared: 0,
                    });
                    out.len() - 1
                }
            };
            out[idx].compared += 1;
            out[idx].matched += usize::from(cell.matches);
        }
        out
    }

    pub fn mismatches(&self, column: &str) -> Vec<&CellDiff> {
        self.cells
            .iter()
            .filter(|c| c.column == column && !c.excluded && !c.matches)
            .collect()
    }
}

/// Decimal string -> tenths ("17.2" -> 172, "24" -> 240).
pub fn parse_tenths(text: &str) -> Option<i64> {
    let text = text.trim();
    let (int, frac) = text.split_once('.').unwrap_or((text, ""));
    let int: i64 = int.parse().ok()?;
    let tenth = match frac.len() {
        0 => 0,
        1 => frac.parse::<i64>().ok()?,
        _ => return None,
    };
    Some(int * 10 + tenth)
}

fn estimate_cell(row: &str, column: &str, published: &str, citations: u64) -> CellDiff {
    let estimate = rule_of_thumb(citations);
    let matches = parse_tenths(published)
        .is_some_and(|p| (p - estimate.tenths()).abs() <= ESTIMATE_TOLERANCE_TENTHS);
    CellDiff {
        row: row.to_string(),
        column: column.to_string(),
        published: published.to_string(),
        computed: estimate.to_string(),
        matches,
        excluded: false,
    }
}

fn endpoints_close(a: (u64, u64), b: (u64, u64)) -> bool {
    a.0.abs_diff(b.0) <= INTERVAL_ENDPOINT_TOLERANCE
        && a.1.abs_diff(b.1) <= INTERVAL_ENDPOINT_TOLERANCE
}

pub fn reproduce(engine: &Engine, target: Target) -> Result<Reproduction> {
    match target {
        Target::Table1 => reproduce_intervals(engine),
        _ => reproduce_cohort(engine, target),
    }
}

fn reproduce_intervals(engine: &Engine) -> Result<Reproduction> {
    let mut cells = Vec::new();
    let mut exact = [0usize; 2];
    let mut within_either = 0;
    for &(n, low, high) in &PUBLISHED_INTERVALS {
        let mut close_any = false;
        for (i, rule) in [IntervalRule::Symmetric, IntervalRule::MinWidth]
            .into_iter()
            .enumerate()
        {
            let iv = engine.confidence_interval(n, DEFAULT_EPSILON, rule)?;
            let close = endpoints_close((iv.low, iv.high), (low, high));
            close_any |= close;
            exact[i] += usize::from((iv.low, iv.high) == (low, high));
            cells.push(CellDiff {
                row: n.to_string(),
                column: rule.to_string(),
                published: format!("[{low},{high}]"),
                computed: format!("{iv} mass={:.6}", iv.mass.to_f64()),
                matches: close,
                excluded: false,
            });
        }
        within_either += usize::from(close_any);
    }
    let total = PUBLISHED_INTERVALS.len();
    Ok(Reproduction {
        target: Target::Table1,
        cells,
        flagged: Vec::new(),
        notes: vec![
            format!("exact matches: symmetric {}/{total}, minwidth {}/{total}", exact[0], exact[1]),
            format!("within +/-{INTERVAL_ENDPOINT_TOLERANCE} per endpoint under at least one rule: {within_either}/{total}"),
        ],
    })
}

/// Detects rows whose printed cells contradict themselves.
fn flag_row(record: &ScholarRecord, printed: &PrintedRow) -> Option<String> {
    if let (Some(h_cell), Some(est_cell)) = (&printed.printed_h, &printed.printed_estimate) {
        let h_is_integer = h_cell.trim().parse::<u64>().is_ok();
        let h_looks_like_estimate = parse_tenths(h_cell).is_some_and(|t| {
            (t - rule_of_thumb(record.citations).tenths()).abs() <= ESTIMATE_TOLERANCE_TENTHS
        });
        if !h_is_integer
            && h_looks_like_estimate
            && est_cell.trim().parse::<u64>().ok() == Some(record.h)
        {
            return Some(format!(
                "estimate and h columns transposed (printed estimate {est_cell}, printed h {h_cell})"
            ));
        }
    }
    record
        .issues()
        .into_iter()
        .find(RecordIssue::affects_nonbook_only)
        .map(|issue| issue.to_string())
}

fn reproduce_cohort(engine: &Engine, target: Target) -> Result<Reproduction> {
    let dataset = target.dataset().expect("cohort target");
    let records = dataset.records()?;
    let printed = dataset.printed_rows()?;
    let mut cells = Vec::new();
    let mut flagged = Vec::new();
    let mut notes = Vec::new();
    let (mut outside_published, mut outside_published_by_one) = (0, 0);
    let (mut outside_computed, mut outside_computed_by_one) = (0, 0);

    for (record, row) in records.iter().zip(&printed) {
        let flag = flag_row(record, row);
        if let Some(reason) = &flag {
            flagged.push(FlaggedRow {
                row: record.name.clone(),
                reason: reason.clone(),
            });
        }
        let start = cells.len();
        if let Some(est) = &row.printed_estimate {
            cells.push(estimate_cell(
                &record.name,
                "estimate",
                est,
                record.citations,
            ));
        }
        let interval = engine.confidence_interval(
            record.citations,
            DEFAULT_EPSILON,
            IntervalRule::Symmetric,
        )?;
        if let (Some(low), Some(high)) = (row.printed_low, row.printed_high) {
            cells.push(CellDiff {
                row: record.name.clone(),
                column: "interval".into(),
                published: format!("[{low},{high}]"),
                computed: interval.to_string(),
                matches: endpoints_close((interval.low, interval.high), (low, high)),
                excluded: false,
            });
            let published_distance = if record.h < low {
                low - record.h
            } else {
                record.h.saturating_sub(high)
            };
            if published_distance > 0 {
                outside_published += 1;
                outside_published_by_one += usize::from(published_distance == 1);
            }
        }
        if !interval.contains(record.h) {
            outside_computed += 1;
            outside_computed_by_one += usize::from(interval.distance(record.h) == 1);
        }
        if let (Some(est), Some(nonbook)) =
            (&row.printed_revised_estimate, record.citations_nonbook)
        {
            cells.push(estimate_cell(
                &record.name,
                "revised_estimate",
                est,
                nonbook,
            ));
        }
        if flag.is_some() {
            for cell in &mut cells[start..] {
                cell.excluded = true;
            }
        }
    }

    if target == Target::Table4 || target == Target::Table2 || target == Target::Table3 {
        notes.push(format!(
            "h outside the published range: {outside_published} of {} ({outside_published_by_one} by exactly one unit)",
            records.len()
        ));
    }
    notes.push(format!(
        "h outside the computed {:.0}% symmetric interval: {outside_computed} of {} ({outside_computed_by_one} by exactly one unit)",
        (1.0 - DEFAULT_EPSILON) * 100.0,
        records.len()
    ));
    if target == Target::Appendix {
        let report = engine.analyze_cohort(&records, DEFAULT_EPSILON, IntervalRule::Symmetric)?;
        if let Some(r) = report.pearson_r {
            notes.push(format!("Pearson R (estimate vs h): {r:.4}"));
        }
        if let Some(r) = report.pearson_r_nonbook {
            notes.push(format!("Pearson R, books removed: {r:.4}"));
        }
    }

    Ok(Reproduction {
        target,
        cells,
        flagged,
        notes,
    })
}
