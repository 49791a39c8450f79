//! Employment-weighted exposure of areas and sectors.
//!
//! A group's score is the employment-weighted mean of the scores of its
//! occupations. Occupations without a score are dropped and the weights
//! renormalized over the remaining ("covered") employment; the covered share
//! is reported next to each score.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{EmploymentKind, EmploymentTable};
use crate::exposure::ExposureScores;
use crate::numeric::{weighted_mean, CompensatedSum};

#[derive(Debug, Error)]
pub enum AggregateError {
    #[error("{level} aggregation needs a {expected:?} table, got {found:?}")]
    KindMismatch {
        level: GroupKind,
        expected: EmploymentKind,
        found: EmploymentKind,
    },

    #[error("county table references sectors missing from the national table: {0:?}")]
    SectorCodeMismatch(Vec<String>),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = AggregateError> = std::result::Result<T, E>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GroupKind {
    Msa,
    County,
    Sector,
}

impl GroupKind {
    pub fn id(self) -> &'static str {
        match self {
            GroupKind::Msa => "msa",
            GroupKind::County => "county",
            GroupKind::Sector => "sector",
        }
    }
}

impl fmt::Display for GroupKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl std::str::FromStr for GroupKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.trim().to_ascii_lowercase().as_str() {
            "msa" => Ok(GroupKind::Msa),
            "county" => Ok(GroupKind::County),
            "sector" => Ok(GroupKind::Sector),
            other => Err(format!("unknown aggregation level {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupEntry {
    pub group_title: String,
    pub score: f64,
    /// Share of the group's employment held by scored members, in (0, 1].
    pub covered_employment_share: f64,
    /// Total employment of the group, scored or not.
    pub employment: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroupScores {
    pub kind: GroupKind,
    pub entries: BTreeMap<String, GroupEntry>,
    /// Groups left out for lack of covered employment.
    pub warnings: Vec<String>,
}

impl GroupScores {
    pub fn get(&self, group_key: &str) -> Option<f64> {
        self.entries.get(group_key).map(|e| e.score)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

struct Group<'a> {
    title: &'a str,
    members: Vec<(f64, Option<f64>)>,
}

/// Weighted mean over members with a score; `None` without covered weight.
fn reduce_groups<'a>(
    kind: GroupKind,
    groups: BTreeMap<&'a str, Group<'a>>,
) -> GroupScores {
    let mut entries = BTreeMap::new();
    let mut warnings = Vec::new();
    for (key, group) in groups {
        let total: CompensatedSum = group.members.iter().map(|m| m.0).collect();
        let covered: CompensatedSum = group
            .members
            .iter()
            .filter(|m| m.1.is_some())
            .map(|m| m.0)
            .collect();
        let score = weighted_mean(group.members.iter().filter_map(|(w, s)| s.map(|s| (*w, s))));
        match score {
            Some(score) => {
                entries.insert(
                    key.to_string(),
                    GroupEntry {
                        group_title: group.title.to_string(),
                        score,
                        covered_employment_share: (covered.total() / total.total()).min(1.0),
                        employment: total.total(),
                    },
                );
            }
            None => {
                log::warn!("{kind} {key}: no employment in scored members");
                warnings.push(format!("NoCoverage({key})"));
            }
        }
    }
    GroupScores {
        kind,
        entries,
        warnings,
    }
}

fn expected_table(kind: GroupKind, found: EmploymentKind) -> Result<()> {
    let ok = match kind {
        GroupKind::Msa | GroupKind::County => found == EmploymentKind::AreaOccupation,
        GroupKind::Sector => found == EmploymentKind::SectorOccupation,
    };
    if ok {
        return Ok(());
    }
    Err(AggregateError::KindMismatch {
        level: kind,
        expected: match kind {
            GroupKind::Sector => EmploymentKind::SectorOccupation,
            _ => EmploymentKind::AreaOccupation,
        },
        found,
    })
}

/// Employment-weighted occupation exposure per area or sector.
pub fn group_exposure(
    scores: &ExposureScores,
    employment: &EmploymentTable,
    kind: GroupKind,
) -> Result<GroupScores> {
    expected_table(kind, employment.kind())?;
    let mut groups: BTreeMap<&str, Group<'_>> = BTreeMap::new();
    for row in employment.rows() {
        groups
            .entry(&row.group_key)
            .or_insert_with(|| Group {
                title: &row.group_title,
                members: Vec::new(),
            })
            .members
            .push((row.employment, scores.get(&row.member_key)));
    }
    Ok(reduce_groups(kind, groups))
}

/// Projects national sector exposure onto counties by their sector mix.
///
/// Sector scores come from `national` (sector x occupation); each county's
/// score is the employment-weighted mean of its sectors' scores in
/// `county_sector` (area x sector).
pub fn county_projection(
    scores: &ExposureScores,
    national: &EmploymentTable,
    county_sector: &EmploymentTable,
) -> Result<GroupScores> {
    if county_sector.kind() != EmploymentKind::AreaSector {
        return Err(AggregateError::KindMismatch {
            level: GroupKind::County,
            expected: EmploymentKind::AreaSector,
            found: county_sector.kind(),
        });
    }
    let sectors = group_exposure(scores, national, GroupKind::Sector)?;
    let known: BTreeSet<&str> = national.sectors();
    let unknown: Vec<String> = county_sector
        .sectors()
        .into_iter()
        .filter(|s| !known.contains(s))
        .map(str::to_string)
        .collect();
    if !unknown.is_empty() {
        return Err(AggregateError::SectorCodeMismatch(unknown));
    }

    let mut groups: BTreeMap<&str, Group<'_>> = BTreeMap::new();
    for row in county_sector.rows() {
        groups
            .entry(&row.group_key)
            .or_insert_with(|| Group {
                title: &row.group_title,
                members: Vec::new(),
            })
            .members
            .push((row.employment, sectors.get(&row.member_key)));
    }
    let mut out = reduce_groups(GroupKind::County, groups);
    let mut warnings = sectors.warnings;
    warnings.append(&mut out.warnings);
    out.warnings = warnings;
    Ok(out)
}

/// Writes `group_key,group_title,score,covered_share` rows in key order.
pub fn write_group_scores_csv<W: Write>(groups: &GroupScores, out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| AggregateError::Io(e.into());
    w.write_record(["group_key", "group_title", "score", "covered_share"])
        .map_err(io)?;
    for (key, e) in &groups.entries {
        w.write_record([
            key.as_str(),
            &e.group_title,
            &e.score.to_string(),
            &e.covered_employment_share.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::EmploymentRow;
    use crate::exposure::IndexKind;

    fn table(kind: EmploymentKind, rows: &[(&str, &str, f64)]) -> EmploymentTable {
        EmploymentTable::new(
            kind,
            rows.iter()
                .map(|(g, m, e)| EmploymentRow {
                    group_key: g.to_string(),
                    group_title: format!("{g} title"),
                    member_key: m.to_string(),
                    employment: *e,
                })
                .collect(),
        )
        .unwrap()
    }

    fn scores(values: &[(&str, f64)]) -> ExposureScores {
        ExposureScores::from_scores(IndexKind::Aise, values.iter().map(|(k, v)| (*k, *v)))
    }

    #[test]
    fn hand_weighted_average() {
        let emp = table(EmploymentKind::AreaOccupation, &[("g", "o1", 100.0), ("g", "o2", 300.0)]);
        let s = scores(&[("o1", 0.2), ("o2", 0.6)]);
        let g = group_exposure(&s, &emp, GroupKind::Msa).unwrap();
        assert!((g.get("g").unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(g.entries["g"].covered_employment_share, 1.0);
        assert_eq!(g.entries["g"].group_title, "g title");
    }

    #[test]
    fn uniform_score_is_reproduced() {
        let emp = table(
            EmploymentKind::SectorOccupation,
            &[("11", "o1", 7.0), ("11", "o2", 3.0), ("52", "o1", 1.0), ("52", "o3", 13.0)],
        );
        let s = scores(&[("o1", 0.1), ("o2", 0.1), ("o3", 0.1)]);
        let g = group_exposure(&s, &emp, GroupKind::Sector).unwrap();
        assert!(g.entries.values().all(|e| e.score == 0.1));
    }

    #[test]
    fn half_uncovered() {
        let emp = table(EmploymentKind::AreaOccupation, &[("g", "o1", 50.0), ("g", "o2", 50.0)]);
        let g = group_exposure(&scores(&[("o1", 0.4)]), &emp, GroupKind::Msa).unwrap();
        assert_eq!(g.get("g"), Some(0.4));
        assert_eq!(g.entries["g"].covered_employment_share, 0.5);
    }

    #[test]
    fn uncovered_group_is_omitted_with_warning() {
        let emp = table(EmploymentKind::AreaOccupation, &[("g", "o9", 50.0), ("h", "o1", 0.0)]);
        let g = group_exposure(&scores(&[("o1", 0.4)]), &emp, GroupKind::Msa).unwrap();
        assert!(g.is_empty());
        assert_eq!(g.warnings, ["NoCoverage(g)", "NoCoverage(h)"]);
    }

    #[test]
    fn kind_mismatch() {
        let emp = table(EmploymentKind::AreaSector, &[("g", "11", 1.0)]);
        assert!(matches!(
            group_exposure(&scores(&[]), &emp, GroupKind::Sector),
            Err(AggregateError::KindMismatch { .. })
        ));
    }

    #[test]
    fn county_in_one_sector_takes_sector_score() {
        let national = table(EmploymentKind::SectorOccupation, &[("11", "o1", 10.0), ("11", "o2", 30.0), ("52", "o2", 5.0)]);
        let county = table(EmploymentKind::AreaSector, &[("06085", "11", 1000.0)]);
        let s = scores(&[("o1", 0.2), ("o2", 0.6)]);
        let c = county_projection(&s, &national, &county).unwrap();
        let sector = group_exposure(&s, &national, GroupKind::Sector).unwrap();
        assert_eq!(c.get("06085"), sector.get("11"));
        assert_eq!(c.kind, GroupKind::County);
    }

    #[test]
    fn county_with_unknown_sector() {
        let national = table(EmploymentKind::SectorOccupation, &[("11", "o1", 10.0)]);
        let county = table(EmploymentKind::AreaSector, &[("06085", "23", 10.0)]);
        match county_projection(&scores(&[("o1", 0.2)]), &national, &county) {
            Err(AggregateError::SectorCodeMismatch(codes)) => assert_eq!(codes, ["23"]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn csv_layout() {
        let emp = table(EmploymentKind::AreaOccupation, &[("41940", "o1", 100.0)]);
        let g = group_exposure(&scores(&[("o1", 0.25)]), &emp, GroupKind::Msa).unwrap();
        let mut buf = Vec::new();
        write_group_scores_csv(&g, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            "group_key,group_title,score,covered_share\n41940,41940 title,0.25,1\n"
        );
    }
}
