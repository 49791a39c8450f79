use std::collections::{BTreeMap, BTreeSet};

use super::{AnalyticsError, Result};
use crate::corpus::SkillRatings;

/// Share of `members` for which each skill is crucial, i.e. its importance
/// is strictly above `threshold`. A member without a rating for a skill
/// counts as not crucial.
pub fn crucial_skill_frequency<'a, I>(
    members: I,
    skills: &SkillRatings,
    threshold: f64,
) -> Result<BTreeMap<String, f64>>
where
    I: IntoIterator<Item = &'a str>,
{
    let members: BTreeSet<&str> = members.into_iter().collect();
    if members.is_empty() {
        return Err(AnalyticsError::EmptyRegion);
    }
    let n = members.len() as f64;
    Ok(skills
        .skill_ids()
        .map(|skill| {
            let crucial = members
                .iter()
                .filter(|m| skills.importance(m, skill).is_some_and(|v| v > threshold))
                .count();
            (skill.to_string(), crucial as f64 / n)
        })
        .collect())
}
