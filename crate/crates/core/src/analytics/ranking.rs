use serde::Serialize;

use crate::corpus::OccupationSet;
use crate::exposure::ExposureScores;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Most exposed first.
    Top,
    /// Least exposed first.
    Bottom,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankedOccupation {
    pub rank: usize,
    pub soc_code: String,
    pub title: String,
    pub score: f64,
}

/// The `n` highest or lowest scored occupations. Ties are broken by code in
/// both directions.
pub fn rank_occupations(
    scores: &ExposureScores,
    titles: Option<&OccupationSet>,
    n: usize,
    direction: Direction,
) -> Vec<RankedOccupation> {
    let mut v: Vec<(&str, f64)> = scores.iter().collect();
    v.sort_by(|a, b| {
        let by_score = match direction {
            Direction::Top => b.1.total_cmp(&a.1),
            Direction::Bottom => a.1.total_cmp(&b.1),
        };
        by_score.then(a.0.cmp(b.0))
    });
    v.into_iter()
        .take(n)
        .enumerate()
        .map(|(i, (code, score))| RankedOccupation {
            rank: i + 1,
            soc_code: code.to_string(),
            title: titles
                .and_then(|t| t.title(code))
                .unwrap_or_default()
                .to_string(),
            score,
        })
        .collect()
}
