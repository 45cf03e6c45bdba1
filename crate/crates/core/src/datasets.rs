//! Bundled cohort fixtures (cohort CSV format plus verbatim `printed_*`
//! columns from the source tables).

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::cohort::{read_cohort_csv, ScholarRecord};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Dataset {
    /// Fields medalists 1998-2010.
    Fields,
    /// Abel prize laureates 2003-2013.
    Abel,
    /// Associate professors at three universities.
    Assoc,
    /// National Academy of Sciences, mathematics section.
    Nas,
    /// One Google Scholar snapshot.
    TaoScholar,
}

impl Dataset {
    pub const ALL: [Dataset; 5] = [
        Dataset::Fields,
        Dataset::Abel,
        Dataset::Assoc,
        Dataset::Nas,
        Dataset::TaoScholar,
    ];

    pub fn file_name(self) -> &'static str {
        match self {
            Self::Fields => "fields.csv",
            Self::Abel => "abel.csv",
            Self::Assoc => "assoc.csv",
            Self::Nas => "nas.csv",
            Self::TaoScholar => "tao_scholar.csv",
        }
    }

    pub fn csv_text(self) -> &'static str {
        match self {
            Self::Fields => include_str!("../../../data/fields.csv"),
            Self::Abel => include_str!("../../../data/abel.csv"),
            Self::Assoc => include_str!("../../../data/assoc.csv"),
            Self::Nas => include_str!("../../../data/nas.csv"),
            Self::TaoScholar => include_str!("../../../data/tao_scholar.csv"),
        }
    }

    pub fn records(self) -> Result<Vec<ScholarRecord>> {
        read_cohort_csv(self.csv_text().as_bytes())
    }

    /// The verbatim table cells stored next to each record.
    pub fn printed_rows(self) -> Result<Vec<PrintedRow>> {
        let mut reader = csv::ReaderBuilder::new()
            .comment(Some(b'#'))
            .trim(csv::Trim::All)
            .from_reader(self.csv_text().as_bytes());
        reader
            .deserialize()
            .map(|row| {
                row.map_err(|e| Error::Parse {
                    line: e.position().map_or(0, |p| p.line()),
                    message: e.to_string(),
                })
            })
            .collect()
    }
}

impl FromStr for Dataset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|d| d.file_name().trim_end_matches(".csv") == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown dataset {s:?}")))
    }
}

impl fmt::Display for Dataset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.file_name().trim_end_matches(".csv"))
    }
}

/// Cells as printed in the source table; absent columns stay `None`.
#[derive(Debug, Clone, PartialEq, Eq, Deserialize)]
pub struct PrintedRow {
    pub name: String,
    #[serde(default)]
    pub printed_estimate: Option<String>,
    #[serde(default)]
    pub printed_h: Option<String>,
    #[serde(default)]
    pub printed_low: Option<u64>,
    #[serde(default)]
    pub printed_high: Option<u64>,
    #[serde(default)]
    pub printed_revised_estimate: Option<String>,
    #[serde(default)]
    pub printed_revised_h: Option<String>,
}
