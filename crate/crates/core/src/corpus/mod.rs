//! Input corpora: O*NET flat files, the startup snapshot, the AI application
//! x ability relatedness matrix and employment tables.
//!
//! Everything is validated while parsing; once loaded, the sets are immutable
//! and can be shared freely across threads.

mod employment;
mod error;
mod onet;
mod relatedness;
mod startups;
mod validate;

pub use employment::{load_employment, EmploymentKind, EmploymentRow, EmploymentTable};
pub use error::CorpusError;
pub use onet::{
    load_ability_ratings, load_job_zones, load_occupations, load_skill_ratings, write_occupations,
    AbilityRating, AbilityRatings, JobZone, JobZoneMap, Occupation, OccupationSet, SkillRating,
    SkillRatings,
};
pub use relatedness::{
    load_relatedness_matrix, RelatednessMatrix, ABILITY_COUNT, APPLICATION_COUNT,
};
pub use startups::{
    filter_by_tags, load_startups, normalize_tag, write_startups, Startup, StartupSet, TagFilter,
};
pub use validate::{validate_corpus, LengthPercentiles, ValidationReport};

pub type Result<T, E = CorpusError> = std::result::Result<T, E>;

/// Collapses runs of whitespace into single spaces and trims both ends.
pub fn normalize_whitespace(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}

pub(crate) fn open_file(path: &std::path::Path) -> Result<std::fs::File> {
    std::fs::File::open(path).map_err(|source| {
        if source.kind() == std::io::ErrorKind::NotFound {
            CorpusError::MissingFile(path.to_path_buf())
        } else {
            CorpusError::Io {
                path: path.to_path_buf(),
                source,
            }
        }
    })
}

/// Finds the first header column matching one of `aliases`, ignoring case
/// and surrounding whitespace.
pub(crate) fn find_column(headers: &csv::StringRecord, aliases: &[&str]) -> Option<usize> {
    headers.iter().position(|h| {
        let h = h.trim().trim_start_matches('\u{feff}').to_ascii_lowercase();
        aliases.iter().any(|a| h == *a)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn whitespace_is_collapsed() {
        assert_eq!(normalize_whitespace("  a \t b\n\nc  "), "a b c");
        assert_eq!(normalize_whitespace(" \n "), "");
    }
}
