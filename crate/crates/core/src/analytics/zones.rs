use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;

use crate::corpus::JobZoneMap;
use crate::numeric::CompensatedSum;
use crate::exposure::ExposureScores;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ZoneBucket {
    Zone(u8),
    NotAvailable,
}

impl ZoneBucket {
    pub fn all() -> impl Iterator<Item = ZoneBucket> {
        (1..=5).map(ZoneBucket::Zone).chain([ZoneBucket::NotAvailable])
    }
}

impl fmt::Display for ZoneBucket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ZoneBucket::Zone(z) => write!(f, "{z}"),
            ZoneBucket::NotAvailable => f.write_str("not_available"),
        }
    }
}

impl Serialize for ZoneBucket {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Nearest-rank quantile of sorted data: the value at rank `ceil(p*n)`,
/// clamped to `[1, n]`.
pub fn nearest_rank(sorted: &[f64], p: f64) -> f64 {
    let n = sorted.len();
    assert!(n > 0, "quantile of empty data");
    let rank = ((p * n as f64).ceil() as usize).clamp(1, n);
    sorted[rank - 1]
}

/// Box-plot statistics. Whiskers reach the most extreme data points within
/// 1.5 IQR of the quartiles; points beyond are outliers.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoxStats {
    pub n: usize,
    pub mean: f64,
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub whisker_low: f64,
    pub whisker_high: f64,
    pub outliers: Vec<String>,
}

impl BoxStats {
    pub fn from_points(points: &[(String, f64)]) -> Option<Self> {
        if points.is_empty() {
            return None;
        }
        let mut sorted: Vec<f64> = points.iter().map(|p| p.1).collect();
        sorted.sort_by(f64::total_cmp);
        let q1 = nearest_rank(&sorted, 0.25);
        let q3 = nearest_rank(&sorted, 0.75);
        let iqr = q3 - q1;
        let (lo, hi) = (q1 - 1.5 * iqr, q3 + 1.5 * iqr);
        let inside = |v: f64| v >= lo && v <= hi;
        let whisker_low = sorted.iter().copied().find(|v| inside(*v)).unwrap_or(q1);
        let whisker_high = sorted.iter().rev().copied().find(|v| inside(*v)).unwrap_or(q3);
        let mut outliers: Vec<String> = points
            .iter()
            .filter(|p| !inside(p.1))
            .map(|p| p.0.clone())
            .collect();
        outliers.sort();
        let sum: CompensatedSum = sorted.iter().copied().collect();
        Some(BoxStats {
            n: sorted.len(),
            mean: sum.total() / sorted.len() as f64,
            min: sorted[0],
            q1,
            median: nearest_rank(&sorted, 0.5),
            q3,
            max: sorted[sorted.len() - 1],
            whisker_low,
            whisker_high,
            outliers,
        })
    }
}

/// Scores grouped by Job Zone. Every zone bucket is present, possibly empty.
#[derive(Debug, Clone, PartialEq)]
pub struct ZoneDistribution {
    pub buckets: BTreeMap<ZoneBucket, Vec<(String, f64)>>,
}

impl ZoneDistribution {
    pub fn stats(&self, bucket: ZoneBucket) -> Option<BoxStats> {
        self.buckets.get(&bucket).and_then(|p| BoxStats::from_points(p))
    }

    pub fn total(&self) -> usize {
        self.buckets.values().map(Vec::len).sum()
    }
}

/// Groups the scored occupations by Job Zone, optionally restricted to a
/// subset such as one region.
pub fn job_zone_distribution(
    scores: &ExposureScores,
    zones: &JobZoneMap,
    only: Option<&BTreeSet<String>>,
) -> ZoneDistribution {
    let mut buckets: BTreeMap<ZoneBucket, Vec<(String, f64)>> =
        ZoneBucket::all().map(|b| (b, Vec::new())).collect();
    for (code, score) in scores.iter() {
        if only.is_some_and(|set| !set.contains(code)) {
            continue;
        }
        let bucket = zones
            .get(code)
            .map_or(ZoneBucket::NotAvailable, |z| ZoneBucket::Zone(z.get()));
        buckets
            .get_mut(&bucket)
            .expect("all buckets present")
            .push((code.to_string(), score));
    }
    ZoneDistribution { buckets }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::JobZone;
    use crate::exposure::IndexKind;

    #[test]
    fn nearest_rank_quantiles() {
        let v = [1.0, 2.0, 3.0, 4.0];
        assert_eq!(nearest_rank(&v, 0.0), 1.0);
        assert_eq!(nearest_rank(&v, 0.25), 1.0);
        assert_eq!(nearest_rank(&v, 0.5), 2.0);
        assert_eq!(nearest_rank(&v, 0.75), 3.0);
        assert_eq!(nearest_rank(&v, 1.0), 4.0);
    }

    fn points(values: &[f64]) -> Vec<(String, f64)> {
        values
            .iter()
            .enumerate()
            .map(|(i, v)| (format!("o{i}"), *v))
            .collect()
    }

    #[test]
    fn five_values() {
        let b = BoxStats::from_points(&points(&[5.0, 1.0, 4.0, 2.0, 3.0])).unwrap();
        assert_eq!((b.q1, b.median, b.q3, b.mean), (2.0, 3.0, 4.0, 3.0));
        assert!(b.outliers.is_empty());
    }

    #[test]
    fn single_value() {
        let b = BoxStats::from_points(&points(&[0.25])).unwrap();
        let all = [b.min, b.q1, b.median, b.q3, b.max, b.whisker_low, b.whisker_high];
        assert!(all.iter().all(|v| *v == 0.25));
    }

    #[test]
    fn outliers_beyond_fences() {
        let pts: Vec<(String, f64)> = [1.0, 2.0, 2.0, 3.0, 3.0, 4.0, 40.0]
            .iter()
            .enumerate()
            .map(|(i, v)| (format!("o{i}"), *v))
            .collect();
        let b = BoxStats::from_points(&pts).unwrap();
        assert_eq!((b.q1, b.median, b.q3), (2.0, 3.0, 4.0));
        assert_eq!(b.whisker_high, 4.0);
        assert_eq!(b.whisker_low, 1.0);
        assert_eq!(b.outliers, ["o6"]);
        assert_eq!(b.max, 40.0);
    }

    #[test]
    fn buckets_cover_every_scored_occupation() {
        let scores = ExposureScores::from_scores(
            IndexKind::Aise,
            [("a", 0.1), ("b", 0.2), ("c", 0.3)],
        );
        let zones: JobZoneMap = [
            ("a".to_string(), JobZone::new(2).unwrap()),
            ("b".to_string(), JobZone::new(2).unwrap()),
        ]
        .into_iter()
        .collect();
        let d = job_zone_distribution(&scores, &zones, None);
        assert_eq!(d.buckets.len(), 6);
        assert_eq!(d.total(), 3);
        assert_eq!(d.buckets[&ZoneBucket::NotAvailable].len(), 1);
        assert_eq!(d.stats(ZoneBucket::Zone(2)).unwrap().n, 2);
        assert!(d.stats(ZoneBucket::Zone(5)).is_none());

        let only: BTreeSet<String> = ["a".to_string()].into();
        assert_eq!(job_zone_distribution(&scores, &zones, Some(&only)).total(), 1);
    }
}
