//! Comparative analyses of exposure indices.
//!
//! Correlations between indices, the AIOE tertile regions with the AISE
//! quartile split of the top tertile, crucial-skill frequencies per region,
//! box-plot statistics per Job Zone and occupation rankings. Everything here
//! is a pure function of its inputs.

mod compare;
mod correlation;
mod export;
mod ranking;
mod regions;
mod skills;
mod zones;

use thiserror::Error;

pub use compare::{compare_indices, ComparisonReport, PairedScore, SummaryStats};
pub use correlation::{kendall_tau_b, pearson};
pub use export::{
    write_rankings_csv, write_scatter_csv, write_skill_frequency_csv, write_zone_stats_csv,
    SkillFrequencyTable,
};
pub use ranking::{rank_occupations, Direction, RankedOccupation};
pub use regions::{assign_regions, CSplit, Region, RegionAssignment};
pub use skills::crucial_skill_frequency;
pub use zones::{job_zone_distribution, nearest_rank, BoxStats, ZoneBucket, ZoneDistribution};

#[derive(Debug, Error)]
pub enum AnalyticsError {
    #[error("vectors differ in length: {0} vs {1}")]
    LengthMismatch(usize, usize),

    #[error("need at least two observations, got {0}")]
    TooShort(usize),

    #[error("a vector has zero variance")]
    ZeroVariance,

    #[error("a vector is constant; tau-b is undefined")]
    AllTied,

    #[error("non-finite value in input")]
    NonFinite,

    #[error("the score sets share no occupation")]
    EmptyIntersection,

    #[error("region has no members")]
    EmptyRegion,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = AnalyticsError> = std::result::Result<T, E>;
