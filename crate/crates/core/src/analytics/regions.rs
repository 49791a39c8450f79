use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use super::{AnalyticsError, Result};
use crate::exposure::ExposureScores;

/// AIOE tertile of an occupation: `A` lowest, `C` highest.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    A,
    B,
    C,
    NotAvailable,
}

impl Region {
    pub const ALL: [Region; 4] = [Region::A, Region::B, Region::C, Region::NotAvailable];

    pub fn id(self) -> &'static str {
        match self {
            Region::A => "a",
            Region::B => "b",
            Region::C => "c",
            Region::NotAvailable => "not_available",
        }
    }
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Split of region `C` by AISE quartile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CSplit {
    BottomC,
    MidC,
    TopC,
}

impl CSplit {
    pub const ALL: [CSplit; 3] = [CSplit::TopC, CSplit::MidC, CSplit::BottomC];

    pub fn id(self) -> &'static str {
        match self {
            CSplit::TopC => "top_c",
            CSplit::MidC => "mid_c",
            CSplit::BottomC => "bottom_c",
        }
    }
}

impl fmt::Display for CSplit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RegionAssignment {
    pub regions: BTreeMap<String, Region>,
    pub c_split: BTreeMap<String, CSplit>,
}

impl RegionAssignment {
    pub fn region(&self, soc_code: &str) -> Option<Region> {
        self.regions.get(soc_code).copied()
    }

    pub fn members(&self, region: Region) -> Vec<&str> {
        self.regions
            .iter()
            .filter(|(_, r)| **r == region)
            .map(|(k, _)| k.as_str())
            .collect()
    }

    pub fn split_members(&self, split: CSplit) -> Vec<&str> {
        self.c_split
            .iter()
            .filter(|(_, s)| **s == split)
            .map(|(k, _)| k.as_str())
            .collect()
    }
}

/// Codes sorted by ascending score, ties broken by code.
fn ranked<'a>(scores: impl Iterator<Item = (&'a str, f64)>) -> Vec<&'a str> {
    let mut v: Vec<(&str, f64)> = scores.collect();
    v.sort_by(|a, b| a.1.total_cmp(&b.1).then(a.0.cmp(b.0)));
    v.into_iter().map(|(k, _)| k).collect()
}

/// Bucket of the element at `rank` (0-based) when `n` ranked items are cut
/// into `parts` groups whose sizes differ by at most one.
fn bucket(rank: usize, n: usize, parts: usize) -> usize {
    rank * parts / n
}

/// Assigns every occupation scored by either index to an AIOE tertile, and
/// splits tertile `C` by AISE quartile. Occupations with an AISE score but no
/// AIOE score go to [`Region::NotAvailable`].
pub fn assign_regions(aioe: &ExposureScores, aise: &ExposureScores) -> Result<RegionAssignment> {
    if !aioe.iter().any(|(k, _)| aise.contains(k)) {
        return Err(AnalyticsError::EmptyIntersection);
    }
    let mut out = RegionAssignment::default();

    let order = ranked(aioe.iter());
    let n = order.len();
    for (rank, code) in order.iter().enumerate() {
        let region = [Region::A, Region::B, Region::C][bucket(rank, n, 3)];
        out.regions.insert(code.to_string(), region);
    }
    for (code, _) in aise.iter() {
        out.regions
            .entry(code.to_string())
            .or_insert(Region::NotAvailable);
    }

    let in_c = ranked(
        aise.iter()
            .filter(|(k, _)| out.regions.get(*k) == Some(&Region::C)),
    );
    let m = in_c.len();
    for (rank, code) in in_c.iter().enumerate() {
        let split = match bucket(rank, m, 4) {
            0 => CSplit::BottomC,
            3 => CSplit::TopC,
            _ => CSplit::MidC,
        };
        out.c_split.insert(code.to_string(), split);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exposure::IndexKind;

    #[test]
    fn tertiles_then_quartiles_within_c() {
        let aioe = ExposureScores::from_scores(
            IndexKind::Aioe,
            (0..12).map(|i| (format!("{i:02}"), i as f64)),
        );
        let aise = ExposureScores::from_scores(
            IndexKind::Aise,
            (0..12).map(|i| (format!("{i:02}"), (11 - i) as f64 / 10.0)),
        );
        let r = assign_regions(&aioe, &aise).unwrap();
        assert_eq!(r.members(Region::A), ["00", "01", "02", "03"]);
        assert_eq!(r.members(Region::B), ["04", "05", "06", "07"]);
        assert_eq!(r.members(Region::C), ["08", "09", "10", "11"]);
        assert_eq!(r.split_members(CSplit::BottomC), ["11"]);
        assert_eq!(r.split_members(CSplit::MidC), ["09", "10"]);
        assert_eq!(r.split_members(CSplit::TopC), ["08"]);
    }

    #[test]
    fn ten_occupations_split_four_three_three() {
        let aioe = ExposureScores::from_scores(
            IndexKind::Aioe,
            (0..10).map(|i| (format!("{i:02}"), (i % 5) as f64)),
        );
        let r = assign_regions(&aioe, &aioe).unwrap();
        let sizes: Vec<usize> = [Region::A, Region::B, Region::C]
            .iter()
            .map(|g| r.members(*g).len())
            .collect();
        assert_eq!(sizes, [4, 3, 3]);
        // ties on score are ranked by code
        assert_eq!(r.members(Region::C), ["04", "08", "09"]);
    }

    #[test]
    fn aise_only_occupations_are_not_available() {
        let aioe = ExposureScores::from_scores(IndexKind::Aioe, [("a", 1.0), ("b", 2.0)]);
        let aise = ExposureScores::from_scores(IndexKind::Aise, [("a", 0.5), ("z", 0.1)]);
        let r = assign_regions(&aioe, &aise).unwrap();
        assert_eq!(r.region("z"), Some(Region::NotAvailable));
        assert_eq!(r.regions.len(), 3);
    }

    #[test]
    fn no_overlap_fails() {
        let aioe = ExposureScores::from_scores(IndexKind::Aioe, [("a", 1.0)]);
        let aise = ExposureScores::from_scores(IndexKind::Aise, [("z", 0.1)]);
        assert!(matches!(assign_regions(&aioe, &aise), Err(AnalyticsError::EmptyIntersection)));
    }
}
