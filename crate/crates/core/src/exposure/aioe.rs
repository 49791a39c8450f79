use std::collections::BTreeMap;

use super::{ExposureError, ExposureScores, IndexKind, Result, RunMetadata, ScoreEntry};
use crate::corpus::{AbilityRatings, RelatednessMatrix};
use crate::numeric::{weighted_mean, CompensatedSum};

/// Exposure of each ability: its relatedness summed over all applications.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct AbilityExposureVector(BTreeMap<String, f64>);

impl AbilityExposureVector {
    pub fn from_map(values: BTreeMap<String, f64>) -> Self {
        AbilityExposureVector(values)
    }

    pub fn get(&self, ability_id: &str) -> Option<f64> {
        self.0.get(ability_id).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<(String, f64)> for AbilityExposureVector {
    fn from_iter<I: IntoIterator<Item = (String, f64)>>(iter: I) -> Self {
        AbilityExposureVector(iter.into_iter().collect())
    }
}

pub fn ability_exposure(matrix: &RelatednessMatrix) -> AbilityExposureVector {
    matrix
        .abilities()
        .iter()
        .enumerate()
        .map(|(j, id)| {
            let sum: CompensatedSum = matrix.rows().iter().map(|row| row[j]).collect();
            (id.clone(), sum.total())
        })
        .collect()
}

/// Level x importance weighted mean of ability exposures, for every
/// AIOE-eligible occupation. Ineligible occupations are left out.
pub fn compute_aioe(
    exposure: &AbilityExposureVector,
    ratings: &AbilityRatings,
) -> Result<ExposureScores> {
    let mut entries = BTreeMap::new();
    for code in ratings.eligible() {
        let abilities = ratings.for_occupation(code).expect("eligible occupation has ratings");
        let mut pairs = Vec::with_capacity(abilities.len());
        for (id, r) in abilities {
            let a = exposure.get(id).ok_or_else(|| ExposureError::UnknownAbility {
                soc_code: code.to_string(),
                ability_id: id.clone(),
            })?;
            pairs.push((r.level * r.importance, a));
        }
        let score =
            weighted_mean(pairs).ok_or_else(|| ExposureError::ZeroWeightSum(code.to_string()))?;
        entries.insert(
            code.to_string(),
            ScoreEntry {
                score,
                coverage: None,
            },
        );
    }
    Ok(ExposureScores::new(RunMetadata::new(IndexKind::Aioe), entries))
}
