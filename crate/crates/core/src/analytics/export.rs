use std::collections::BTreeMap;
use std::io::Write;

use super::{RankedOccupation, RegionAssignment, Result, ZoneBucket, ZoneDistribution};
use crate::corpus::{JobZoneMap, OccupationSet, SkillRatings};
use crate::exposure::ExposureScores;

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

fn csv_err(e: csv::Error) -> std::io::Error {
    std::io::Error::other(e)
}

/// One row per occupation scored by either index, in code order.
pub fn write_scatter_csv<W: Write>(
    aise: &ExposureScores,
    aioe: &ExposureScores,
    zones: &JobZoneMap,
    regions: &RegionAssignment,
    titles: Option<&OccupationSet>,
    out: W,
) -> Result<()> {
    let mut codes: Vec<&str> = aise.iter().chain(aioe.iter()).map(|(k, _)| k).collect();
    codes.sort_unstable();
    codes.dedup();
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["soc_code", "title", "aise", "aioe", "job_zone", "region", "c_split"])
        .map_err(csv_err)?;
    for code in codes {
        w.write_record([
            code.to_string(),
            titles.and_then(|t| t.title(code)).unwrap_or_default().to_string(),
            opt(aise.get(code)),
            opt(aioe.get(code)),
            opt(zones.get(code)),
            opt(regions.region(code)),
            opt(regions.c_split.get(code)),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Crucial-skill frequencies for several occupation groups side by side.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SkillFrequencyTable {
    pub columns: Vec<(String, BTreeMap<String, f64>)>,
}

impl SkillFrequencyTable {
    pub fn push(&mut self, label: impl Into<String>, freq: BTreeMap<String, f64>) {
        self.columns.push((label.into(), freq));
    }
}

pub fn write_skill_frequency_csv<W: Write>(
    table: &SkillFrequencyTable,
    skills: &SkillRatings,
    out: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let mut header = vec!["skill_id".to_string(), "skill_name".to_string()];
    header.extend(table.columns.iter().map(|(label, _)| label.clone()));
    w.write_record(&header).map_err(csv_err)?;
    for skill in skills.skill_ids() {
        let mut row = vec![
            skill.to_string(),
            skills.skill_name(skill).unwrap_or_default().to_string(),
        ];
        row.extend(table.columns.iter().map(|(_, f)| opt(f.get(skill))));
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}

/// Box statistics per Job Zone; empty zones get a row with `n = 0`.
/// Outlier codes are joined with `;`.
pub fn write_zone_stats_csv<W: Write>(
    groups: &[(&str, &ZoneDistribution)],
    out: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record([
        "group", "job_zone", "n", "mean", "min", "q1", "median", "q3", "max", "whisker_low",
        "whisker_high", "outliers",
    ])
    .map_err(csv_err)?;
    for (label, dist) in groups {
        for bucket in ZoneBucket::all() {
            let row = match dist.stats(bucket) {
                Some(s) => vec![
                    label.to_string(),
                    bucket.to_string(),
                    s.n.to_string(),
                    s.mean.to_string(),
                    s.min.to_string(),
                    s.q1.to_string(),
                    s.median.to_string(),
                    s.q3.to_string(),
                    s.max.to_string(),
                    s.whisker_low.to_string(),
                    s.whisker_high.to_string(),
                    s.outliers.join(";"),
                ],
                None => {
                    let mut r = vec![label.to_string(), bucket.to_string(), "0".to_string()];
                    r.resize(12, String::new());
                    r
                }
            };
            w.write_record(&row).map_err(csv_err)?;
        }
    }
    w.flush()?;
    Ok(())
}

pub fn write_rankings_csv<W: Write>(
    groups: &[(&str, &[RankedOccupation])],
    out: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["list", "rank", "soc_code", "title", "score"])
        .map_err(csv_err)?;
    for (label, rows) in groups {
        for r in rows.iter() {
            w.write_record([
                label.to_string(),
                r.rank.to_string(),
                r.soc_code.clone(),
                r.title.clone(),
                r.score.to_string(),
            ])
            .map_err(csv_err)?;
        }
    }
    w.flush()?;
    Ok(())
}
