use std::collections::{BTreeSet, HashSet};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{find_column, open_file, CorpusError, Result};

/// Number of two-digit NAICS sectors; more in a sector table triggers a warning.
const NAICS2_SECTORS: usize = 19;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EmploymentKind {
    /// Area (MSA or county) x occupation.
    AreaOccupation,
    /// Sector x occupation.
    SectorOccupation,
    /// Area x sector.
    AreaSector,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmploymentRow {
    pub group_key: String,
    pub group_title: String,
    pub member_key: String,
    pub employment: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmploymentTable {
    kind: EmploymentKind,
    rows: Vec<EmploymentRow>,
}

impl EmploymentTable {
    /// Validates non-negative finite employment and unique
    /// `(group_key, member_key)` pairs.
    pub fn new(kind: EmploymentKind, rows: Vec<EmploymentRow>) -> Result<Self> {
        let mut seen = HashSet::with_capacity(rows.len());
        for (i, row) in rows.iter().enumerate() {
            check_row(row, i as u64 + 1)?;
            if !seen.insert((row.group_key.as_str(), row.member_key.as_str())) {
                return Err(duplicate(row, i as u64 + 1));
            }
        }
        let table = EmploymentTable { kind, rows };
        table.warn_on_sector_count();
        Ok(table)
    }

    pub fn kind(&self) -> EmploymentKind {
        self.kind
    }

    pub fn rows(&self) -> &[EmploymentRow] {
        &self.rows
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Distinct sector codes: group keys of a sector x occupation table,
    /// member keys of an area x sector table.
    pub fn sectors(&self) -> BTreeSet<&str> {
        match self.kind {
            EmploymentKind::SectorOccupation => {
                self.rows.iter().map(|r| r.group_key.as_str()).collect()
            }
            EmploymentKind::AreaSector => self.rows.iter().map(|r| r.member_key.as_str()).collect(),
            EmploymentKind::AreaOccupation => BTreeSet::new(),
        }
    }

    fn warn_on_sector_count(&self) {
        let n = self.sectors().len();
        if n > NAICS2_SECTORS {
            log::warn!("employment table lists {n} sectors, more than the {NAICS2_SECTORS} NAICS-2 sectors");
        }
    }
}

fn check_row(row: &EmploymentRow, line: u64) -> Result<()> {
    if !row.employment.is_finite() {
        return Err(CorpusError::MalformedRow {
            line,
            reason: format!("employment {} is not finite", row.employment),
        });
    }
    if row.employment < 0.0 {
        return Err(CorpusError::NegativeEmployment {
            line,
            group_key: row.group_key.clone(),
            member_key: row.member_key.clone(),
        });
    }
    Ok(())
}

fn duplicate(row: &EmploymentRow, line: u64) -> CorpusError {
    CorpusError::MalformedRow {
        line,
        reason: format!("duplicate pair ({}, {})", row.group_key, row.member_key),
    }
}

/// Loads an employment CSV with header `group_key,group_title,member_key,employment`.
pub fn load_employment(path: impl AsRef<Path>, kind: EmploymentKind) -> Result<EmploymentTable> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(open_file(path)?);
    let malformed = |e: csv::Error| CorpusError::MalformedRow {
        line: e.position().map_or(0, |p| p.line()),
        reason: e.to_string(),
    };
    let headers = reader.headers().map_err(malformed)?.clone();
    let mut cols = [0usize; 4];
    for (slot, name) in cols
        .iter_mut()
        .zip(["group_key", "group_title", "member_key", "employment"])
    {
        *slot = find_column(&headers, &[name]).ok_or_else(|| CorpusError::MalformedHeader {
            path: path.to_path_buf(),
            column: name.to_string(),
        })?;
    }

    let mut rows = Vec::new();
    let mut seen = HashSet::new();
    for record in reader.records() {
        let record = record.map_err(malformed)?;
        let line = record.position().map_or(0, |p| p.line());
        let get = |i: usize| record.get(cols[i]).unwrap_or("").to_string();
        let raw = get(3);
        let employment: f64 = raw.parse().map_err(|_| CorpusError::MalformedRow {
            line,
            reason: format!("employment {raw:?} is not a number"),
        })?;
        let row = EmploymentRow {
            group_key: get(0),
            group_title: get(1),
            member_key: get(2),
            employment,
        };
        if row.group_key.is_empty() || row.member_key.is_empty() {
            return Err(CorpusError::MalformedRow {
                line,
                reason: "empty group or member key".into(),
            });
        }
        check_row(&row, line)?;
        if !seen.insert((row.group_key.clone(), row.member_key.clone())) {
            return Err(duplicate(&row, line));
        }
        rows.push(row);
    }
    let table = EmploymentTable { kind, rows };
    table.warn_on_sector_count();
    Ok(table)
}
