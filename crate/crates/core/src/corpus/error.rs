use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CorpusError {
    #[error("missing file: {}", .0.display())]
    MissingFile(PathBuf),

    #[error("failed to read {}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("malformed header in {}: no column for {column}", path.display())]
    MalformedHeader { path: PathBuf, column: String },

    #[error("duplicate occupation code {0}")]
    DuplicateCode(String),

    #[error("line {line}: occupation {soc_code} has an empty description")]
    EmptyDescription { line: u64, soc_code: String },

    #[error("line {line}: invalid O*NET-SOC code {code:?}")]
    InvalidSocCode { line: u64, code: String },

    #[error("line {line}: {reason}")]
    MalformedRow { line: u64, reason: String },

    #[error("job zone {zone} for {soc_code} is outside 1..=5")]
    ZoneOutOfRange { soc_code: String, zone: i64 },

    #[error("{scale} value {value} for {soc_code}/{element_id} is out of range")]
    ScaleOutOfRange {
        soc_code: String,
        element_id: String,
        scale: String,
        value: f64,
    },

    #[error("{soc_code}/{ability_id} lacks a {scale} rating")]
    MissingScale {
        soc_code: String,
        ability_id: String,
        scale: String,
    },

    #[error("record on line {line}: {reason}")]
    MalformedRecord { line: u64, reason: String },

    #[error("duplicate startup id {0}")]
    DuplicateId(String),

    #[error("relatedness matrix has shape {rows}x{cols}, expected 10x52")]
    ShapeMismatch { rows: usize, cols: usize },

    #[error("relatedness cell ({row}, {column}) = {value:?}: {reason}")]
    NonNumericCell {
        row: usize,
        column: usize,
        value: String,
        reason: &'static str,
    },

    #[error("line {line}: negative employment for ({group_key}, {member_key})")]
    NegativeEmployment {
        line: u64,
        group_key: String,
        member_key: String,
    },

    #[error("tag filter {0:?} has no tags")]
    EmptyTagFilter(String),

    #[error("unknown tag filter {0:?}")]
    UnknownTagFilter(String),
}
