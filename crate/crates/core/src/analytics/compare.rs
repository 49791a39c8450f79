use serde::Serialize;

use super::{kendall_tau_b, pearson, AnalyticsError, Result};
use crate::exposure::ExposureScores;
use crate::numeric::CompensatedSum;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SummaryStats {
    pub n: usize,
    pub mean: f64,
    /// Sample standard deviation; zero for a single observation.
    pub std_dev: f64,
    pub min: f64,
    pub median: f64,
    pub max: f64,
}

impl SummaryStats {
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let n = values.len();
        let mean = values.iter().copied().collect::<CompensatedSum>().total() / n as f64;
        let ss: CompensatedSum = values.iter().map(|v| (v - mean) * (v - mean)).collect();
        let std_dev = if n > 1 { (ss.total() / (n - 1) as f64).sqrt() } else { 0.0 };
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        let median = if n % 2 == 1 {
            sorted[n / 2]
        } else {
            (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0
        };
        Some(SummaryStats {
            n,
            mean,
            std_dev,
            min: sorted[0],
            median,
            max: sorted[n - 1],
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairedScore {
    pub soc_code: String,
    pub left: f64,
    pub right: f64,
}

/// Correlations between two score sets over their common occupations.
/// A coefficient is `None` when it is undefined for the data (too few
/// points, zero variance, all tied).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonReport {
    pub left: String,
    pub right: String,
    pub n_common: usize,
    pub pearson: Option<f64>,
    pub kendall_tau_b: Option<f64>,
    pub left_summary: SummaryStats,
    pub right_summary: SummaryStats,
    pub pairs: Vec<PairedScore>,
}

fn defined(r: Result<f64>) -> Result<Option<f64>> {
    match r {
        Ok(v) => Ok(Some(v)),
        Err(AnalyticsError::TooShort(_) | AnalyticsError::ZeroVariance | AnalyticsError::AllTied) => {
            Ok(None)
        }
        Err(e) => Err(e),
    }
}

pub fn compare_indices(left: &ExposureScores, right: &ExposureScores) -> Result<ComparisonReport> {
    let pairs: Vec<PairedScore> = left
        .iter()
        .filter_map(|(code, a)| {
            right.get(code).map(|b| PairedScore {
                soc_code: code.to_string(),
                left: a,
                right: b,
            })
        })
        .collect();
    if pairs.is_empty() {
        return Err(AnalyticsError::EmptyIntersection);
    }
    let xs: Vec<f64> = pairs.iter().map(|p| p.left).collect();
    let ys: Vec<f64> = pairs.iter().map(|p| p.right).collect();
    Ok(ComparisonReport {
        left: left.kind().id().to_string(),
        right: right.kind().id().to_string(),
        n_common: pairs.len(),
        pearson: defined(pearson(&xs, &ys))?,
        kendall_tau_b: defined(kendall_tau_b(&xs, &ys))?,
        left_summary: SummaryStats::of(&xs).expect("non-empty"),
        right_summary: SummaryStats::of(&ys).expect("non-empty"),
        pairs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exposure::IndexKind;

    #[test]
    fn compares_common_occupations_only() {
        let a = ExposureScores::from_scores(
            IndexKind::Aise,
            [("a", 0.1), ("b", 0.2), ("c", 0.3), ("x", 9.0)],
        );
        let b = ExposureScores::from_scores(
            IndexKind::Aioe,
            [("a", 1.0), ("b", 2.0), ("c", 4.0), ("y", -9.0)],
        );
        let r = compare_indices(&a, &b).unwrap();
        assert_eq!(r.n_common, 3);
        assert!((r.pearson.unwrap() - 0.981981).abs() < 1e-5);
        assert_eq!(r.kendall_tau_b, Some(1.0));
        assert_eq!(r.left_summary.median, 0.2);
        assert_eq!(r.right_summary.max, 4.0);
    }

    #[test]
    fn undefined_coefficients_are_none() {
        let a = ExposureScores::from_scores(IndexKind::Aise, [("a", 0.0), ("b", 0.0)]);
        let b = ExposureScores::from_scores(IndexKind::Aioe, [("a", 1.0), ("b", 2.0)]);
        let r = compare_indices(&a, &b).unwrap();
        assert_eq!(r.pearson, None);
        assert_eq!(r.kendall_tau_b, None);
    }

    #[test]
    fn disjoint_sets_fail() {
        let a = ExposureScores::from_scores(IndexKind::Aise, [("a", 0.0)]);
        let b = ExposureScores::from_scores(IndexKind::Aioe, [("b", 1.0)]);
        assert!(matches!(compare_indices(&a, &b), Err(AnalyticsError::EmptyIntersection)));
    }
}
