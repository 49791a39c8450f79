use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{ExposureError, Result};
use crate::corpus::OccupationSet;
use crate::gateway::PromptVariant;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IndexKind {
    Aise,
    Rse,
    Aioe,
}

impl IndexKind {
    pub fn id(self) -> &'static str {
        match self {
            IndexKind::Aise => "aise",
            IndexKind::Rse => "rse",
            IndexKind::Aioe => "aioe",
        }
    }
}

impl fmt::Display for IndexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for IndexKind {
    type Err = ExposureError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "aise" => Ok(IndexKind::Aise),
            "rse" => Ok(IndexKind::Rse),
            "aioe" => Ok(IndexKind::Aioe),
            _ => Err(ExposureError::UnknownName {
                what: "index",
                value: s.into(),
            }),
        }
    }
}

/// Which verdicts count in the AISE/RSE denominator.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DenominatorPolicy {
    /// Only yes/no verdicts.
    #[default]
    Definitive,
    /// Every startup in the set; unparseable verdicts count as not-yes.
    Total,
}

impl FromStr for DenominatorPolicy {
    type Err = ExposureError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "definitive" => Ok(DenominatorPolicy::Definitive),
            "total" => Ok(DenominatorPolicy::Total),
            _ => Err(ExposureError::UnknownName {
                what: "denominator policy",
                value: s.into(),
            }),
        }
    }
}

impl fmt::Display for DenominatorPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DenominatorPolicy::Definitive => "definitive",
            DenominatorPolicy::Total => "total",
        })
    }
}

/// How a score set was produced.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub index_kind: IndexKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<PromptVariant>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub policy: Option<DenominatorPolicy>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub startup_count: Option<usize>,
    /// SHA-256 of the sorted startup ids.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub startup_set_hash: Option<String>,
    /// Content hashes of the input files, by role.
    #[serde(default)]
    pub inputs: BTreeMap<String, String>,
}

impl RunMetadata {
    pub fn new(index_kind: IndexKind) -> Self {
        RunMetadata {
            index_kind,
            variant: None,
            model_id: None,
            policy: None,
            startup_count: None,
            startup_set_hash: None,
            inputs: BTreeMap::new(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScoreEntry {
    pub score: f64,
    /// Share of the occupation's verdicts that were definitive (AISE/RSE only).
    pub coverage: Option<f64>,
}

/// Index values per occupation code.
#[derive(Debug, Clone, PartialEq)]
pub struct ExposureScores {
    entries: BTreeMap<String, ScoreEntry>,
    pub metadata: RunMetadata,
}

impl ExposureScores {
    pub fn new(metadata: RunMetadata, entries: BTreeMap<String, ScoreEntry>) -> Self {
        ExposureScores { entries, metadata }
    }

    /// Scores without coverage, mostly for tests and examples.
    pub fn from_scores<I, S>(kind: IndexKind, scores: I) -> Self
    where
        I: IntoIterator<Item = (S, f64)>,
        S: Into<String>,
    {
        let entries = scores
            .into_iter()
            .map(|(k, v)| {
                (
                    k.into(),
                    ScoreEntry {
                        score: v,
                        coverage: None,
                    },
                )
            })
            .collect();
        ExposureScores::new(RunMetadata::new(kind), entries)
    }

    pub fn kind(&self) -> IndexKind {
        self.metadata.index_kind
    }

    pub fn get(&self, soc_code: &str) -> Option<f64> {
        self.entries.get(soc_code).map(|e| e.score)
    }

    pub fn entry(&self, soc_code: &str) -> Option<&ScoreEntry> {
        self.entries.get(soc_code)
    }

    pub fn contains(&self, soc_code: &str) -> bool {
        self.entries.contains_key(soc_code)
    }

    /// `(code, score)` in ascending code order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.entries.iter().map(|(k, e)| (k.as_str(), e.score))
    }

    pub fn entries(&self) -> &BTreeMap<String, ScoreEntry> {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// Writes `soc_code,title,score,coverage` rows in code order.
pub fn write_scores_csv<W: Write>(
    scores: &ExposureScores,
    titles: Option<&OccupationSet>,
    out: W,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| ExposureError::Io(e.into());
    w.write_record(["soc_code", "title", "score", "coverage"]).map_err(io)?;
    for (code, e) in scores.entries() {
        let title = titles.and_then(|t| t.title(code)).unwrap_or("");
        w.write_record([code.as_str(), title, &e.score.to_string(), &fmt_opt(e.coverage)])
            .map_err(io)?;
    }
    w.flush()?;
    Ok(())
}

/// Reads scores written by [`write_scores_csv`].
pub fn read_scores_csv<R: Read>(input: R, metadata: RunMetadata) -> Result<ExposureScores> {
    let mut r = csv::Reader::from_reader(input);
    let mut entries = BTreeMap::new();
    for record in r.records() {
        let record = record.map_err(|e| ExposureError::MalformedScores {
            line: e.position().map_or(0, |p| p.line()),
            reason: e.to_string(),
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let bad = |reason: String| ExposureError::MalformedScores { line, reason };
        let code = record.get(0).unwrap_or("").to_string();
        let score: f64 = record
            .get(2)
            .unwrap_or("")
            .parse()
            .map_err(|_| bad("score is not a number".into()))?;
        let coverage = match record.get(3).unwrap_or("") {
            "" => None,
            c => Some(c.parse().map_err(|_| bad("coverage is not a number".into()))?),
        };
        if code.is_empty() || entries.insert(code.clone(), ScoreEntry { score, coverage }).is_some() {
            return Err(bad(format!("empty or duplicate code {code:?}")));
        }
    }
    Ok(ExposureScores::new(metadata, entries))
}
