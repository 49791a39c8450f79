use thiserror::Error;

#[derive(Debug, Error)]
pub enum ExposureError {
    #[error("verdict matrix is empty")]
    EmptyMatrix,

    #[error("occupation {0} has no definitive verdicts")]
    ZeroDenominator(String),

    #[error("occupation {0} has zero total ability weight")]
    ZeroWeightSum(String),

    #[error("occupation {soc_code} is rated on ability {ability_id}, which has no exposure value")]
    UnknownAbility { soc_code: String, ability_id: String },

    #[error("unknown {what} {value:?}")]
    UnknownName { what: &'static str, value: String },

    #[error("malformed scores file, line {line}: {reason}")]
    MalformedScores { line: u64, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
