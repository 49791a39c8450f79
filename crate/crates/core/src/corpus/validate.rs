use serde::Serialize;

use super::{AbilityRatings, JobZoneMap, OccupationSet, StartupSet};

/// Nearest-rank percentiles of description lengths, in characters.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct LengthPercentiles {
    pub n: usize,
    pub p05: usize,
    pub p25: usize,
    pub p50: usize,
    pub p75: usize,
    pub p95: usize,
}

impl LengthPercentiles {
    fn from_lengths(mut lengths: Vec<usize>) -> Self {
        if lengths.is_empty() {
            return LengthPercentiles::default();
        }
        lengths.sort_unstable();
        let n = lengths.len();
        let at = |p: f64| {
            let rank = ((p * n as f64).ceil() as usize).clamp(1, n);
            lengths[rank - 1]
        };
        LengthPercentiles {
            n,
            p05: at(0.05),
            p25: at(0.25),
            p50: at(0.50),
            p75: at(0.75),
            p95: at(0.95),
        }
    }
}

/// Coverage summary of a loaded corpus. Fatal findings make ingestion fail.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct ValidationReport {
    pub occupations: usize,
    pub occupations_with_job_zone: usize,
    pub missing_job_zone: Vec<String>,
    pub aioe_eligible: usize,
    pub missing_ability_coverage: Vec<String>,
    pub startups: usize,
    pub startups_without_tags: Vec<String>,
    pub occupation_description_chars: LengthPercentiles,
    pub startup_long_description_chars: LengthPercentiles,
    pub startup_short_description_chars: LengthPercentiles,
    pub fatal: Vec<String>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.fatal.is_empty()
    }
}

pub fn validate_corpus(
    occupations: &OccupationSet,
    startups: &StartupSet,
    ratings: Option<&AbilityRatings>,
    zones: Option<&JobZoneMap>,
) -> ValidationReport {
    let mut report = ValidationReport {
        occupations: occupations.len(),
        startups: startups.len(),
        ..Default::default()
    };

    for occ in occupations {
        if occ.description.trim().is_empty() {
            report
                .fatal
                .push(format!("occupation {} has an empty description", occ.soc_code));
        }
        let zone = zones.and_then(|z| z.get(&occ.soc_code)).or(occ.job_zone);
        match zone {
            Some(_) => report.occupations_with_job_zone += 1,
            None => report.missing_job_zone.push(occ.soc_code.clone()),
        }
        if let Some(r) = ratings {
            if r.is_eligible(&occ.soc_code) {
                report.aioe_eligible += 1;
            } else {
                report.missing_ability_coverage.push(occ.soc_code.clone());
            }
        }
    }

    for s in startups {
        if s.tags.is_empty() {
            report.startups_without_tags.push(s.startup_id.clone());
        }
        if s.short_desc.is_empty() && s.long_desc.is_empty() {
            report
                .fatal
                .push(format!("startup {} has no description", s.startup_id));
        }
    }

    report.occupation_description_chars = LengthPercentiles::from_lengths(
        occupations.iter().map(|o| o.description.chars().count()).collect(),
    );
    report.startup_long_description_chars = LengthPercentiles::from_lengths(
        startups
            .iter()
            .filter(|s| !s.long_desc.is_empty())
            .map(|s| s.long_desc.chars().count())
            .collect(),
    );
    report.startup_short_description_chars = LengthPercentiles::from_lengths(
        startups
            .iter()
            .filter(|s| !s.short_desc.is_empty())
            .map(|s| s.short_desc.chars().count())
            .collect(),
    );
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{AbilityRating, JobZone, Occupation};

    fn occ(code: &str, desc: &str) -> Occupation {
        Occupation {
            soc_code: code.into(),
            title: code.into(),
            description: desc.into(),
            job_zone: None,
        }
    }

    #[test]
    fn empty_corpus() {
        let r = validate_corpus(&OccupationSet::default(), &StartupSet::default(), None, None);
        assert_eq!(r.occupations, 0);
        assert_eq!(r.startups, 0);
        assert_eq!(r.aioe_eligible, 0);
        assert_eq!(r.occupation_description_chars, LengthPercentiles::default());
        assert!(r.is_ok());
    }

    #[test]
    fn empty_description_is_fatal() {
        let set = OccupationSet::from_occupations(vec![
            occ("11-1011.00", "Plan things."),
            occ("43-9061.00", ""),
        ])
        .unwrap();
        let r = validate_corpus(&set, &StartupSet::default(), None, None);
        assert!(!r.is_ok());
        assert!(r.fatal[0].contains("43-9061.00"));
    }

    #[test]
    fn coverage_counts() {
        let set = OccupationSet::from_occupations(vec![
            occ("11-1011.00", "abcd"),
            occ("43-9061.00", "ab"),
        ])
        .unwrap();
        let zones: JobZoneMap = [("11-1011.00".to_string(), JobZone::new(5).unwrap())]
            .into_iter()
            .collect();
        let rating = |code: &str| AbilityRating {
            soc_code: code.into(),
            ability_id: "A".into(),
            ability_name: "A".into(),
            importance: 3.0,
            level: 3.0,
        };
        let ratings = AbilityRatings::from_ratings([rating("11-1011.00")]);
        let r = validate_corpus(&set, &StartupSet::default(), Some(&ratings), Some(&zones));
        assert_eq!(r.occupations_with_job_zone, 1);
        assert_eq!(r.missing_job_zone, ["43-9061.00"]);
        assert_eq!(r.aioe_eligible, 1);
        assert_eq!(r.missing_ability_coverage, ["43-9061.00"]);
        assert_eq!(r.occupation_description_chars.p50, 2);
        assert_eq!(r.occupation_description_chars.p95, 4);
    }
}
