use std::collections::{BTreeSet, HashSet};
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{normalize_whitespace, open_file, CorpusError, Result};
use crate::sha256_hex;

const AI_TAGS: [&str; 13] = [
    "AI",
    "artificial intelligence",
    "AI-assistant",
    "AI-powered drug discovery",
    "AIOps",
    "conversational AI",
    "ML",
    "machine learning",
    "deep learning",
    "deepfake detection",
    "generative AI",
    "AI-enhanced learning",
    "computer vision",
];

const ROBOTICS_TAGS: [&str; 5] = [
    "Robotics",
    "Robotic Process Automation",
    "Food Service Robots & Machines",
    "Medical Robotics",
    "Robotic Surgery",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Startup {
    pub startup_id: String,
    pub name: String,
    pub short_desc: String,
    pub long_desc: String,
    pub year: Option<i32>,
    pub tags: BTreeSet<String>,
}

/// Lower-cases a tag, trims it and collapses inner whitespace.
pub fn normalize_tag(tag: &str) -> String {
    normalize_whitespace(tag).to_lowercase()
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StartupSet {
    startups: Vec<Startup>,
}

impl StartupSet {
    pub fn from_startups(startups: Vec<Startup>) -> Result<Self> {
        let mut ids = HashSet::with_capacity(startups.len());
        for s in &startups {
            if !ids.insert(s.startup_id.as_str()) {
                return Err(CorpusError::DuplicateId(s.startup_id.clone()));
            }
        }
        Ok(StartupSet { startups })
    }

    pub fn len(&self) -> usize {
        self.startups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.startups.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Startup> {
        self.startups.iter()
    }

    pub fn get(&self, startup_id: &str) -> Option<&Startup> {
        self.startups.iter().find(|s| s.startup_id == startup_id)
    }

    pub fn ids(&self) -> impl Iterator<Item = &str> {
        self.startups.iter().map(|s| s.startup_id.as_str())
    }

    /// SHA-256 over the sorted ids, identifying which startups a score set
    /// was computed from.
    pub fn fingerprint(&self) -> String {
        let mut ids: Vec<&str> = self.ids().collect();
        ids.sort_unstable();
        sha256_hex(ids.join("\n"))
    }
}

impl<'a> IntoIterator for &'a StartupSet {
    type Item = &'a Startup;
    type IntoIter = std::slice::Iter<'a, Startup>;

    fn into_iter(self) -> Self::IntoIter {
        self.startups.iter()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum RawId {
    Text(String),
    Number(i64),
}

#[derive(Deserialize)]
struct RawStartup {
    id: RawId,
    #[serde(default)]
    name: Option<String>,
    #[serde(default)]
    one_liner: Option<String>,
    #[serde(default)]
    long_description: Option<String>,
    #[serde(default)]
    batch_year: Option<i32>,
    #[serde(default)]
    tags: Option<Vec<String>>,
}

#[derive(Serialize)]
struct SnapshotRecord<'a> {
    id: &'a str,
    name: &'a str,
    one_liner: &'a str,
    long_description: &'a str,
    batch_year: Option<i32>,
    tags: &'a BTreeSet<String>,
}

fn parse_record(text: &str, line: u64) -> Result<Startup> {
    let malformed = |reason: String| CorpusError::MalformedRecord { line, reason };
    let raw: RawStartup = serde_json::from_str(text).map_err(|e| malformed(e.to_string()))?;
    let startup_id = match raw.id {
        RawId::Text(s) => s.trim().to_string(),
        RawId::Number(n) => n.to_string(),
    };
    if startup_id.is_empty() {
        return Err(malformed("empty id".into()));
    }
    let short_desc = normalize_whitespace(raw.one_liner.as_deref().unwrap_or(""));
    let long_desc = normalize_whitespace(raw.long_description.as_deref().unwrap_or(""));
    if short_desc.is_empty() && long_desc.is_empty() {
        return Err(malformed(format!("startup {startup_id} has no description")));
    }
    let tags = raw
        .tags
        .unwrap_or_default()
        .iter()
        .map(|t| normalize_tag(t))
        .filter(|t| !t.is_empty())
        .collect();
    Ok(Startup {
        startup_id,
        name: normalize_whitespace(raw.name.as_deref().unwrap_or("")),
        short_desc,
        long_desc,
        year: raw.batch_year,
        tags,
    })
}

/// Loads a newline-delimited JSON startup snapshot. Blank lines are skipped
/// and unknown fields ignored.
pub fn load_startups(path: impl AsRef<Path>) -> Result<StartupSet> {
    let path = path.as_ref();
    let reader = BufReader::new(open_file(path)?);
    let mut startups = Vec::new();
    let mut ids = HashSet::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line.map_err(|source| CorpusError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        let startup = parse_record(trimmed, i as u64 + 1)?;
        if !ids.insert(startup.startup_id.clone()) {
            return Err(CorpusError::DuplicateId(startup.startup_id));
        }
        startups.push(startup);
    }
    log::debug!("loaded {} startups from {}", startups.len(), path.display());
    Ok(StartupSet { startups })
}

/// Writes startups in the snapshot layout read by [`load_startups`].
pub fn write_startups<W: Write>(set: &StartupSet, mut out: W) -> std::io::Result<()> {
    for s in set {
        let record = SnapshotRecord {
            id: &s.startup_id,
            name: &s.name,
            one_liner: &s.short_desc,
            long_description: &s.long_desc,
            batch_year: s.year,
            tags: &s.tags,
        };
        serde_json::to_writer(&mut out, &record)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}

/// Named set of tags selecting startups by exact (normalized) tag match.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TagFilter {
    name: String,
    tags: BTreeSet<String>,
}

impl TagFilter {
    pub fn new<I, S>(name: impl Into<String>, tags: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let name = name.into();
        let tags: BTreeSet<String> = tags
            .into_iter()
            .map(|t| normalize_tag(t.as_ref()))
            .filter(|t| !t.is_empty())
            .collect();
        if tags.is_empty() {
            return Err(CorpusError::EmptyTagFilter(name));
        }
        Ok(TagFilter { name, tags })
    }

    /// The thirteen AI-related accelerator tags.
    pub fn ai() -> Self {
        TagFilter::new("ai", AI_TAGS).expect("built-in tags")
    }

    /// The five robotics-related accelerator tags.
    pub fn robotics() -> Self {
        TagFilter::new("robotics", ROBOTICS_TAGS).expect("built-in tags")
    }

    /// Looks up a built-in filter by name.
    pub fn builtin(name: &str) -> Result<Self> {
        match name.trim().to_ascii_lowercase().as_str() {
            "ai" => Ok(TagFilter::ai()),
            "robotics" => Ok(TagFilter::robotics()),
            _ => Err(CorpusError::UnknownTagFilter(name.to_string())),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn tags(&self) -> &BTreeSet<String> {
        &self.tags
    }

    pub fn matches(&self, startup: &Startup) -> bool {
        startup.tags.iter().any(|t| self.tags.contains(t))
    }
}

/// Startups carrying at least one tag of `filter`, ordered by id.
pub fn filter_by_tags(startups: &StartupSet, filter: &TagFilter) -> StartupSet {
    let mut selected: Vec<Startup> = startups
        .iter()
        .filter(|s| filter.matches(s))
        .cloned()
        .collect();
    selected.sort_by(|a, b| a.startup_id.cmp(&b.startup_id));
    StartupSet { startups: selected }
}
