//! Occupation-level exposure indices.
//!
//! * [`compute_startup_exposure`]: share of startups judged able to replace
//!   part of an occupation (AISE over AI startups, RSE over robotics ones).
//! * [`ability_exposure`] and [`compute_aioe`]: the ability-based index,
//!   `sum_j A_j L_ij I_ij / sum_j L_ij I_ij` with `A_j` the column sums of
//!   the relatedness matrix.

mod aioe;
mod error;
mod scores;
mod startup;

pub use aioe::{ability_exposure, compute_aioe, AbilityExposureVector};
pub use error::ExposureError;
pub use scores::{
    read_scores_csv, write_scores_csv, DenominatorPolicy, ExposureScores, IndexKind, RunMetadata,
    ScoreEntry,
};
pub use startup::compute_startup_exposure;

pub type Result<T, E = ExposureError> = std::result::Result<T, E>;
