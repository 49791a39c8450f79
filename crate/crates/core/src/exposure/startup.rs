use std::collections::BTreeMap;

use super::{DenominatorPolicy, ExposureError, ExposureScores, IndexKind, Result, RunMetadata, ScoreEntry};
use crate::gateway::{Answer, VerdictMatrix};
use crate::sha256_hex;

/// Share of "yes" verdicts per occupation.
///
/// `kind` labels the startup set (AISE or RSE). Under
/// [`DenominatorPolicy::Definitive`] unparseable verdicts are left out of
/// the denominator; under [`DenominatorPolicy::Total`] they count as not-yes.
pub fn compute_startup_exposure(
    matrix: &VerdictMatrix,
    kind: IndexKind,
    policy: DenominatorPolicy,
) -> Result<ExposureScores> {
    if matrix.is_empty() {
        return Err(ExposureError::EmptyMatrix);
    }
    let n_startups = matrix.startups().len();
    let mut entries = BTreeMap::new();
    for (i, code) in matrix.occupations().iter().enumerate() {
        let row = matrix.row(i);
        let yes = row.iter().filter(|a| **a == Answer::Yes).count();
        let definitive = row.iter().filter(|a| a.is_definitive()).count();
        let denominator = match policy {
            DenominatorPolicy::Definitive => definitive,
            DenominatorPolicy::Total => n_startups,
        };
        if denominator == 0 {
            return Err(ExposureError::ZeroDenominator(code.clone()));
        }
        entries.insert(
            code.clone(),
            ScoreEntry {
                score: yes as f64 / denominator as f64,
                coverage: Some(definitive as f64 / n_startups as f64),
            },
        );
    }

    let mut ids: Vec<&str> = matrix.startups().iter().map(String::as_str).collect();
    ids.sort_unstable();
    let mut metadata = RunMetadata::new(kind);
    metadata.variant = Some(matrix.variant());
    metadata.model_id = Some(matrix.model_id().to_string());
    metadata.policy = Some(policy);
    metadata.startup_count = Some(n_startups);
    metadata.startup_set_hash = Some(sha256_hex(ids.join("\n")));
    Ok(ExposureScores::new(metadata, entries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gateway::PromptVariant;
    use Answer::*;

    fn matrix(rows: &[&[Answer]]) -> VerdictMatrix {
        let n = rows.first().map_or(0, |r| r.len());
        VerdictMatrix::new(
            PromptVariant::ReplaceDetailed,
            "m",
            (0..rows.len()).map(|i| format!("11-10{i:02}.00")).collect(),
            (0..n).map(|j| format!("s{j}")).collect(),
            rows.iter().flat_map(|r| r.iter().copied()).collect(),
        )
        .unwrap()
    }

    #[test]
    fn three_of_four() {
        let s = compute_startup_exposure(&matrix(&[&[Yes, Yes, Yes, No]]), IndexKind::Aise, DenominatorPolicy::Definitive).unwrap();
        assert_eq!(s.get("11-1000.00"), Some(0.75));
        assert_eq!(s.entry("11-1000.00").unwrap().coverage, Some(1.0));
    }

    #[test]
    fn all_no() {
        let s = compute_startup_exposure(&matrix(&[&[No, No]]), IndexKind::Rse, DenominatorPolicy::Definitive).unwrap();
        assert_eq!(s.get("11-1000.00"), Some(0.0));
        assert_eq!(s.kind(), IndexKind::Rse);
    }

    #[test]
    fn policies_differ_on_unparseable() {
        let m = matrix(&[&[Yes, Unparseable, No, Yes]]);
        let d = compute_startup_exposure(&m, IndexKind::Aise, DenominatorPolicy::Definitive).unwrap();
        let t = compute_startup_exposure(&m, IndexKind::Aise, DenominatorPolicy::Total).unwrap();
        assert_eq!(d.get("11-1000.00"), Some(2.0 / 3.0));
        assert_eq!(t.get("11-1000.00"), Some(0.5));
        assert_eq!(d.entry("11-1000.00").unwrap().coverage, Some(0.75));
        assert_eq!(t.metadata.policy, Some(DenominatorPolicy::Total));
    }

    #[test]
    fn all_unparseable_row() {
        let m = matrix(&[&[Yes], &[Unparseable]]);
        assert!(matches!(
            compute_startup_exposure(&m, IndexKind::Aise, DenominatorPolicy::Definitive),
            Err(ExposureError::ZeroDenominator(code)) if code == "11-1001.00"
        ));
        let t = compute_startup_exposure(&m, IndexKind::Aise, DenominatorPolicy::Total).unwrap();
        assert_eq!(t.get("11-1001.00"), Some(0.0));
    }

    #[test]
    fn empty_matrix() {
        let m = VerdictMatrix::new(PromptVariant::ReplaceDetailed, "m", vec![], vec![], vec![]).unwrap();
        assert!(matches!(
            compute_startup_exposure(&m, IndexKind::Aise, DenominatorPolicy::Definitive),
            Err(ExposureError::EmptyMatrix)
        ));
    }
}
