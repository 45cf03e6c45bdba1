//! Scholar records, per-scholar assessment against the uniform-partition
//! model, and cohort-level correlation reports.

use std::fmt;
use std::io::Read;

use rayon::prelude::*;
use serde::Serialize;

use crate::engine::{engine, Engine};
use crate::error::{Error, Result};
use crate::interval::{
    max_h, rule_of_thumb, ConfidenceInterval, IntervalRule, RuleOfThumbEstimate,
};
use crate::profile::{h_index, Partition};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScholarRecord {
    pub name: String,
    pub citations: u64,
    pub h: u64,
    pub citations_nonbook: Option<u64>,
    pub h_nonbook: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub full_profile: Option<Partition>,
    /// Set by [`book_adjust`]: the record before book citations were removed.
    #[serde(skip)]
    pub original: Option<Box<ScholarRecord>>,
}

/// Ways a record can contradict itself.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RecordIssue {
    HAboveBound { h: u64, max: u64 },
    NonbookExceedsTotal { nonbook: u64, total: u64 },
    NonbookHAboveBound { h: u64, max: u64 },
    NonbookHWithoutCitations,
    ProfileSizeMismatch { profile: u64, citations: u64 },
    ProfileHMismatch { profile: u64, h: u64 },
}

impl RecordIssue {
    /// Whether the issue only taints the non-book figures.
    pub fn affects_nonbook_only(&self) -> bool {
        matches!(
            self,
            Self::NonbookExceedsTotal { .. }
                | Self::NonbookHAboveBound { .. }
                | Self::NonbookHWithoutCitations
        )
    }
}

impl fmt::Display for RecordIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::HAboveBound { h, max } => {
                write!(f, "h = {h} exceeds floor(sqrt(citations)) = {max}")
            }
            Self::NonbookExceedsTotal { nonbook, total } => {
                write!(
                    f,
                    "non-book citations ({nonbook}) exceed total citations ({total})"
                )
            }
            Self::NonbookHAboveBound { h, max } => {
                write!(
                    f,
                    "non-book h = {h} exceeds floor(sqrt(non-book citations)) = {max}"
                )
            }
            Self::NonbookHWithoutCitations => {
                f.write_str("non-book h given without non-book citations")
            }
            Self::ProfileSizeMismatch { profile, citations } => {
                write!(f, "profile sums to {profile} but citations = {citations}")
            }
            Self::ProfileHMismatch { profile, h } => {
                write!(f, "profile has h-index {profile} but h = {h}")
            }
        }
    }
}

impl ScholarRecord {
    pub fn new(name: impl Into<String>, citations: u64, h: u64) -> Self {
        Self {
            name: name.into(),
            citations,
            h,
            citations_nonbook: None,
            h_nonbook: None,
            full_profile: None,
            original: None,
        }
    }

    pub fn with_nonbook(mut self, citations_nonbook: u64, h_nonbook: u64) -> Self {
        self.citations_nonbook = Some(citations_nonbook);
        self.h_nonbook = Some(h_nonbook);
        self
    }

    /// Record whose citations and h come from a full profile.
    pub fn from_profile(name: impl Into<String>, profile: Partition) -> Self {
        let mut record = Self::new(name, profile.size(), h_index(&profile));
        record.full_profile = Some(profile);
        record
    }

    pub fn issues(&self) -> Vec<RecordIssue> {
        let mut issues = Vec::new();
        let max = max_h(self.citations);
        if self.h > max {
            issues.push(RecordIssue::HAboveBound { h: self.h, max });
        }
        match (self.citations_nonbook, self.h_nonbook) {
            (Some(nonbook), h_nonbook) => {
                if nonbook > self.citations {
                    issues.push(RecordIssue::NonbookExceedsTotal {
                        nonbook,
                        total: self.citations,
                    });
                }
                if let Some(h) = h_nonbook {
                    let max = max_h(nonbook);
                    if h > max {
                        issues.push(RecordIssue::NonbookHAboveBound { h, max });
                    }
                }
            }
            (None, Some(_)) => issues.push(RecordIssue::NonbookHWithoutCitations),
            (None, None) => {}
        }
        if let Some(profile) = &self.full_profile {
            if profile.size() != self.citations {
                issues.push(RecordIssue::ProfileSizeMismatch {
                    profile: profile.size(),
                    citations: self.citations,
                });
            }
            let ph = h_index(profile);
            if ph != self.h {
                issues.push(RecordIssue::ProfileHMismatch {
                    profile: ph,
                    h: self.h,
                });
            }
        }
        issues
    }

    fn nonbook_usable(&self) -> bool {
        self.citations_nonbook.is_some()
            && self.h_nonbook.is_some()
            && !self.issues().iter().any(RecordIssue::affects_nonbook_only)
    }
}

/// Replaces the primary figures with the non-book ones. The input is kept in
/// `original`.
pub fn book_adjust(scholar: &ScholarRecord) -> Result<ScholarRecord> {
    let (Some(citations), Some(h)) = (scholar.citations_nonbook, scholar.h_nonbook) else {
        return Err(Error::MissingNonbook {
            name: scholar.name.clone(),
        });
    };
    if let Some(issue) = scholar
        .issues()
        .into_iter()
        .find(RecordIssue::affects_nonbook_only)
    {
        return Err(Error::InconsistentRecord {
            name: scholar.name.clone(),
            reason: issue.to_string(),
        });
    }
    Ok(ScholarRecord {
        name: scholar.name.clone(),
        citations,
        h,
        citations_nonbook: Some(citations),
        h_nonbook: Some(h),
        full_profile: None,
        original: Some(Box::new(scholar.clone())),
    })
}

/// N = a h^2, so a = N / h^2.
pub fn hirsch_a(citations: u64, h: u64) -> Result<f64> {
    if h == 0 {
        return Err(Error::InvalidArgument("Hirsch's a needs h >= 1".into()));
    }
    Ok(citations as f64 / (h as f64 * h as f64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Anomaly {
    None,
    BelowInterval,
    AboveInterval,
}

impl fmt::Display for Anomaly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::None => "none",
            Self::BelowInterval => "below_interval",
            Self::AboveInterval => "above_interval",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Assessment {
    pub name: String,
    pub citations: u64,
    pub h: u64,
    pub estimate: RuleOfThumbEstimate,
    pub interval: ConfidenceInterval,
    pub in_interval: bool,
    /// Units between h and the nearest interval end; zero when inside.
    pub distance: u64,
    /// true h / estimated h.
    pub ratio: Option<f64>,
    pub hirsch_a: Option<f64>,
    pub anomaly: Anomaly,
    pub issues: Vec<RecordIssue>,
    /// Same assessment on the non-book figures, when usable.
    pub revised: Option<Box<Assessment>>,
}

impl Assessment {
    /// Relative shortfall of h against the estimate, e.g. 0.20 for 35 vs 43.6.
    pub fn shortfall(&self) -> Option<f64> {
        self.ratio.map(|r| 1.0 - r)
    }
}

impl Engine {
    pub fn assess(
        &self,
        scholar: &ScholarRecord,
        epsilon: f64,
        rule: IntervalRule,
    ) -> Result<Assessment> {
        let mut assessment = self.assess_figures(scholar, epsilon, rule)?;
        if scholar.nonbook_usable() {
            let revised = book_adjust(scholar)?;
            assessment.revised = Some(Box::new(self.assess_figures(&revised, epsilon, rule)?));
        }
        Ok(assessment)
    }

    fn assess_figures(
        &self,
        scholar: &ScholarRecord,
        epsilon: f64,
        rule: IntervalRule,
    ) -> Result<Assessment> {
        let estimate = rule_of_thumb(scholar.citations);
        let interval = self.confidence_interval(scholar.citations, epsilon, rule)?;
        let h = scholar.h;
        let anomaly = if h < interval.low {
            Anomaly::BelowInterval
        } else if h > interval.high {
            Anomaly::AboveInterval
        } else {
            Anomaly::None
        };
        Ok(Assessment {
            name: scholar.name.clone(),
            citations: scholar.citations,
            h,
            estimate,
            in_interval: interval.contains(h),
            distance: interval.distance(h),
            ratio: (estimate.value > 0.0).then(|| h as f64 / estimate.value),
            hirsch_a: hirsch_a(scholar.citations, h).ok(),
            anomaly,
            interval,
            issues: scholar.issues(),
            revised: None,
        })
    }

    pub fn analyze_cohort(
        &self,
        records: &[ScholarRecord],
        epsilon: f64,
        rule: IntervalRule,
    ) -> Result<CohortReport> {
        if records.is_empty() {
            return Err(Error::InvalidArgument("cohort has no records".into()));
        }
        let assessments = records
            .par_iter()
            .map(|r| self.assess(r, epsilon, rule))
            .collect::<Result<Vec<_>>>()?;

        let scatter_points: Vec<ScatterPoint> =
            assessments.iter().map(ScatterPoint::from).collect();
        let nonbook_scatter: Vec<ScatterPoint> = assessments
            .iter()
            .filter_map(|a| a.revised.as_deref().map(ScatterPoint::from))
            .collect();
        let excluded_from_nonbook = records
            .iter()
            .filter(|r| r.citations_nonbook.is_some() && !r.nonbook_usable())
            .map(|r| ExcludedRecord {
                name: r.name.clone(),
                issues: r
                    .issues()
                    .into_iter()
                    .filter(RecordIssue::affects_nonbook_only)
                    .collect(),
            })
            .collect();

        let (raw_r, correlation_error) = split(pearson_r(&pairs(&scatter_points)));
        let (pearson_r_nonbook, nonbook_correlation_error) = if nonbook_scatter.is_empty() {
            (None, None)
        } else {
            split(pearson_r(&pairs(&nonbook_scatter)))
        };

        Ok(CohortReport {
            epsilon,
            rule,
            assessments,
            pearson_r: raw_r,
            correlation_error,
            pearson_r_nonbook,
            nonbook_correlation_error,
            scatter_points,
            nonbook_scatter,
            excluded_from_nonbook,
        })
    }
}

fn split(r: Result<f64>) -> (Option<f64>, Option<String>) {
    match r {
        Ok(v) => (Some(v), None),
        Err(e) => (None, Some(e.to_string())),
    }
}

fn pairs(points: &[ScatterPoint]) -> Vec<(f64, f64)> {
    points.iter().map(|p| (p.estimate, p.h as f64)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScatterPoint {
    pub name: String,
    pub estimate: f64,
    pub h: u64,
}

impl From<&Assessment> for ScatterPoint {
    fn from(a: &Assessment) -> Self {
        Self {
            name: a.name.clone(),
            estimate: a.estimate.value,
            h: a.h,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExcludedRecord {
    pub name: String,
    pub issues: Vec<RecordIssue>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CohortReport {
    pub epsilon: f64,
    pub rule: IntervalRule,
    pub assessments: Vec<Assessment>,
    /// Correlation of (estimate, h); `None` with an error message when undefined.
    pub pearson_r: Option<f64>,
    pub correlation_error: Option<String>,
    pub pearson_r_nonbook: Option<f64>,
    pub nonbook_correlation_error: Option<String>,
    pub scatter_points: Vec<ScatterPoint>,
    pub nonbook_scatter: Vec<ScatterPoint>,
    /// Records with non-book data that was left out of the non-book correlation.
    pub excluded_from_nonbook: Vec<ExcludedRecord>,
}

impl CohortReport {
    pub fn out_of_interval(&self) -> impl Iterator<Item = &Assessment> {
        self.assessments.iter().filter(|a| !a.in_interval)
    }
}

/// Pearson product-moment correlation.
pub fn pearson_r(points: &[(f64, f64)]) -> Result<f64> {
    if points.len() < 2 {
        return Err(Error::DegenerateCorrelation(format!(
            "need at least 2 points, got {}",
            points.len()
        )));
    }
    let n = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / n;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for &(x, y) in points {
        let (dx, dy) = (x - mean_x, y - mean_y);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Err(Error::DegenerateCorrelation(
            "a coordinate has zero variance".into(),
        ));
    }
    Ok((sxy / (sxx.sqrt() * syy.sqrt())).clamp(-1.0, 1.0))
}

pub fn assess(scholar: &ScholarRecord, epsilon: f64) -> Result<Assessment> {
    engine().assess(scholar, epsilon, IntervalRule::default())
}

pub fn analyze_cohort(records: &[ScholarRecord], epsilon: f64) -> Result<CohortReport> {
    engine().analyze_cohort(records, epsilon, IntervalRule::default())
}

/// Reads the cohort CSV format
/// (`name,citations,h,citations_nonbook,h_nonbook`, header required).
///
/// Lines starting with `#` are comments. Extra columns are ignored, and the
/// two non-book columns may be empty or absent. Errors carry the file line.
pub fn read_cohort_csv<R: Read>(reader: R) -> Result<Vec<ScholarRecord>> {
    let mut csv = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers = csv
        .headers()
        .map_err(|e| Error::Parse {
            line: 1,
            message: e.to_string(),
        })?
        .clone();
    let column = |name: &str| headers.iter().position(|h| h == name);
    let required = |name: &str| {
        column(name).ok_or_else(|| Error::Parse {
            line: headers.position().map_or(1, |p| p.line()),
            message: format!("missing required column {name:?}"),
        })
    };
    let (name_col, cit_col, h_col) = (required("name")?, required("citations")?, required("h")?);
    let (nb_col, hnb_col) = (column("citations_nonbook"), column("h_nonbook"));

    let mut records = Vec::new();
    for row in csv.records() {
        let row = row.map_err(|e| Error::Parse {
            line: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let line = row.position().map_or(0, |p| p.line());
        let field = |col: usize| row.get(col).unwrap_or("");
        let number = |col: usize, what: &str| -> Result<u64> {
            field(col).parse::<u64>().map_err(|_| Error::Parse {
                line,
                message: format!("{what} {:?} is not a nonnegative integer", field(col)),
            })
        };
        let optional = |col: Option<usize>, what: &str| -> Result<Option<u64>> {
            match col {
                Some(c) if !field(c).is_empty() => number(c, what).map(Some),
                _ => Ok(None),
            }
        };
        let name = field(name_col);
        if name.is_empty() {
            return Err(Error::Parse {
                line,
                message: "empty name".into(),
            });
        }
        let record = ScholarRecord {
            name: name.to_string(),
            citations: number(cit_col, "citations")?,
            h: number(h_col, "h")?,
            citations_nonbook: optional(nb_col, "citations_nonbook")?,
            h_nonbook: optional(hnb_col, "h_nonbook")?,
            full_profile: None,
            original: None,
        };
        if let Some(issue) = record
            .issues()
            .into_iter()
            .find(|i| matches!(i, RecordIssue::HAboveBound { .. }))
        {
            return Err(Error::Parse {
                line,
                message: issue.to_string(),
            });
        }
        records.push(record);
    }
    Ok(records)
}

/// Writes records in the cohort CSV format.
pub fn write_cohort_csv<W: std::io::Write>(records: &[ScholarRecord], writer: W) -> Result<()> {
    let io = |e: csv::Error| Error::InvalidArgument(e.to_string());
    let mut csv = csv::Writer::from_writer(writer);
    csv.write_record(["name", "citations", "h", "citations_nonbook", "h_nonbook"])
        .map_err(io)?;
    let opt = |v: Option<u64>| v.map(|x| x.to_string()).unwrap_or_default();
    for r in records {
        csv.write_record([
            r.name.clone(),
            r.citations.to_string(),
            r.h.to_string(),
            opt(r.citations_nonbook),
            opt(r.h_nonbook),
        ])
        .map_err(io)?;
    }
    csv.flush()
        .map_err(|e| Error::InvalidArgument(e.to_string()))
}
