use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{find_column, normalize_whitespace, open_file, CorpusError, Result};

const CODE_ALIASES: &[&str] = &["code", "soc_code", "o*net-soc code", "onetsoc_code"];
const TITLE_ALIASES: &[&str] = &["title"];
const DESCRIPTION_ALIASES: &[&str] = &["description"];
const ZONE_ALIASES: &[&str] = &["zone", "job zone", "job_zone"];
const ELEMENT_ID_ALIASES: &[&str] = &["element id", "element_id"];
const ELEMENT_NAME_ALIASES: &[&str] = &["element name", "element_name"];
const SCALE_ALIASES: &[&str] = &["scale id", "scale_id"];
const VALUE_ALIASES: &[&str] = &["data value", "data_value", "value"];

pub(crate) const IMPORTANCE_RANGE: (f64, f64) = (1.0, 5.0);
pub(crate) const LEVEL_RANGE: (f64, f64) = (0.0, 7.0);

/// O*NET Job Zone, 1 (little preparation) to 5 (extensive preparation).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "u8", into = "u8")]
pub struct JobZone(u8);

impl JobZone {
    pub fn new(zone: u8) -> Option<Self> {
        (1..=5).contains(&zone).then_some(JobZone(zone))
    }

    pub fn get(self) -> u8 {
        self.0
    }
}

impl TryFrom<u8> for JobZone {
    type Error = String;

    fn try_from(zone: u8) -> std::result::Result<Self, String> {
        JobZone::new(zone).ok_or_else(|| format!("job zone {zone} outside 1..=5"))
    }
}

impl From<JobZone> for u8 {
    fn from(z: JobZone) -> u8 {
        z.0
    }
}

impl fmt::Display for JobZone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Occupation {
    pub soc_code: String,
    pub title: String,
    pub description: String,
    pub job_zone: Option<JobZone>,
}

/// Checks the `DD-DDDD.DD` shape of an O*NET-SOC code.
pub fn is_valid_soc_code(code: &str) -> bool {
    let b = code.as_bytes();
    b.len() == 10
        && b.iter().enumerate().all(|(i, c)| match i {
            2 => *c == b'-',
            7 => *c == b'.',
            _ => c.is_ascii_digit(),
        })
}

/// Occupations in file order, indexed by code.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct OccupationSet {
    occupations: Vec<Occupation>,
    index: HashMap<String, usize>,
}

impl OccupationSet {
    /// Builds a set, rejecting duplicate codes.
    pub fn from_occupations(occupations: Vec<Occupation>) -> Result<Self> {
        let mut index = HashMap::with_capacity(occupations.len());
        for (i, occ) in occupations.iter().enumerate() {
            if index.insert(occ.soc_code.clone(), i).is_some() {
                return Err(CorpusError::DuplicateCode(occ.soc_code.clone()));
            }
        }
        Ok(OccupationSet { occupations, index })
    }

    pub fn len(&self) -> usize {
        self.occupations.len()
    }

    pub fn is_empty(&self) -> bool {
        self.occupations.is_empty()
    }

    pub fn get(&self, soc_code: &str) -> Option<&Occupation> {
        self.index.get(soc_code).map(|&i| &self.occupations[i])
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Occupation> {
        self.occupations.iter()
    }

    pub fn title(&self, soc_code: &str) -> Option<&str> {
        self.get(soc_code).map(|o| o.title.as_str())
    }

    /// Copies job zones from `zones` onto every occupation; codes absent from
    /// the map end up with no zone.
    pub fn with_job_zones(mut self, zones: &JobZoneMap) -> Self {
        for occ in &mut self.occupations {
            occ.job_zone = zones.get(&occ.soc_code);
        }
        self
    }
}

impl<'a> IntoIterator for &'a OccupationSet {
    type Item = &'a Occupation;
    type IntoIter = std::slice::Iter<'a, Occupation>;

    fn into_iter(self) -> Self::IntoIter {
        self.occupations.iter()
    }
}

fn tsv_reader(path: &Path) -> Result<csv::Reader<std::fs::File>> {
    let file = open_file(path)?;
    Ok(csv::ReaderBuilder::new()
        .delimiter(b'\t')
        .quoting(false)
        .flexible(true)
        .has_headers(true)
        .from_reader(file))
}

fn headers(reader: &mut csv::Reader<std::fs::File>, path: &Path) -> Result<csv::StringRecord> {
    reader.headers().cloned().map_err(|e| csv_error(path, e))
}

fn require(headers: &csv::StringRecord, path: &Path, aliases: &[&str]) -> Result<usize> {
    find_column(headers, aliases).ok_or_else(|| CorpusError::MalformedHeader {
        path: path.to_path_buf(),
        column: aliases[0].to_string(),
    })
}

fn csv_error(path: &Path, e: csv::Error) -> CorpusError {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    match e.into_kind() {
        csv::ErrorKind::Io(source) => CorpusError::Io {
            path: path.to_path_buf(),
            source,
        },
        kind => CorpusError::MalformedRow {
            line,
            reason: format!("{kind:?}"),
        },
    }
}

fn line_of(record: &csv::StringRecord) -> u64 {
    record.position().map(|p| p.line()).unwrap_or(0)
}

fn field<'r>(record: &'r csv::StringRecord, idx: usize, name: &str) -> Result<&'r str> {
    record
        .get(idx)
        .map(str::trim)
        .ok_or_else(|| CorpusError::MalformedRow {
            line: line_of(record),
            reason: format!("missing {name} column"),
        })
}

/// Loads the occupation file (columns `code`, `title`, `description`).
pub fn load_occupations(path: impl AsRef<Path>) -> Result<OccupationSet> {
    let path = path.as_ref();
    let mut reader = tsv_reader(path)?;
    let headers = headers(&mut reader, path)?;
    let code_col = require(&headers, path, CODE_ALIASES)?;
    let title_col = require(&headers, path, TITLE_ALIASES)?;
    let desc_col = require(&headers, path, DESCRIPTION_ALIASES)?;

    let mut occupations = Vec::new();
    let mut seen = BTreeSet::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        if record.iter().all(|f| f.trim().is_empty()) {
            continue;
        }
        let line = line_of(&record);
        let soc_code = field(&record, code_col, "code")?.to_string();
        if !is_valid_soc_code(&soc_code) {
            return Err(CorpusError::InvalidSocCode {
                line,
                code: soc_code,
            });
        }
        if !seen.insert(soc_code.clone()) {
            return Err(CorpusError::DuplicateCode(soc_code));
        }
        let title = normalize_whitespace(field(&record, title_col, "title")?);
        let description = normalize_whitespace(record.get(desc_col).unwrap_or(""));
        if description.is_empty() {
            return Err(CorpusError::EmptyDescription { line, soc_code });
        }
        occupations.push(Occupation {
            soc_code,
            title,
            description,
            job_zone: None,
        });
    }
    log::debug!("loaded {} occupations from {}", occupations.len(), path.display());
    OccupationSet::from_occupations(occupations)
}

/// Writes occupations in the tab-delimited layout read by [`load_occupations`].
pub fn write_occupations<W: Write>(set: &OccupationSet, mut out: W) -> std::io::Result<()> {
    writeln!(out, "code\ttitle\tdescription")?;
    for occ in set {
        writeln!(
            out,
            "{}\t{}\t{}",
            occ.soc_code,
            normalize_whitespace(&occ.title),
            normalize_whitespace(&occ.description)
        )?;
    }
    Ok(())
}

/// Job Zone per occupation code. Missing codes mean "not available".
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct JobZoneMap(BTreeMap<String, JobZone>);

impl JobZoneMap {
    pub fn get(&self, soc_code: &str) -> Option<JobZone> {
        self.0.get(soc_code).copied()
    }

    pub fn insert(&mut self, soc_code: impl Into<String>, zone: JobZone) -> Option<JobZone> {
        self.0.insert(soc_code.into(), zone)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, JobZone)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }
}

impl FromIterator<(String, JobZone)> for JobZoneMap {
    fn from_iter<I: IntoIterator<Item = (String, JobZone)>>(iter: I) -> Self {
        JobZoneMap(iter.into_iter().collect())
    }
}

/// Loads a `code -> zone` table.
pub fn load_job_zones(path: impl AsRef<Path>) -> Result<JobZoneMap> {
    let path = path.as_ref();
    let mut reader = tsv_reader(path)?;
    let headers = headers(&mut reader, path)?;
    let code_col = require(&headers, path, CODE_ALIASES)?;
    let zone_col = require(&headers, path, ZONE_ALIASES)?;

    let mut zones = JobZoneMap::default();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        if record.iter().all(|f| f.trim().is_empty()) {
            continue;
        }
        let line = line_of(&record);
        let code = field(&record, code_col, "code")?.to_string();
        let raw = field(&record, zone_col, "zone")?;
        let zone: i64 = raw.parse().map_err(|_| CorpusError::MalformedRow {
            line,
            reason: format!("job zone {raw:?} is not an integer"),
        })?;
        let zone = u8::try_from(zone)
            .ok()
            .and_then(JobZone::new)
            .ok_or_else(|| CorpusError::ZoneOutOfRange {
                soc_code: code.clone(),
                zone,
            })?;
        if zones.insert(code.clone(), zone).is_some() {
            return Err(CorpusError::MalformedRow {
                line,
                reason: format!("duplicate job zone entry for {code}"),
            });
        }
    }
    Ok(zones)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkillRating {
    pub soc_code: String,
    pub skill_id: String,
    pub skill_name: String,
    pub importance: f64,
}

/// Skill importance per (occupation, skill).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct SkillRatings {
    by_occupation: BTreeMap<String, BTreeMap<String, SkillRating>>,
    names: BTreeMap<String, String>,
}

impl SkillRatings {
    /// Builds ratings from records. Later duplicates replace earlier ones;
    /// ranges are not checked here.
    pub fn from_ratings(ratings: impl IntoIterator<Item = SkillRating>) -> Self {
        let mut out = SkillRatings::default();
        for r in ratings {
            out.names
                .entry(r.skill_id.clone())
                .or_insert_with(|| r.skill_name.clone());
            out.by_occupation
                .entry(r.soc_code.clone())
                .or_default()
                .insert(r.skill_id.clone(), r);
        }
        out
    }

    pub fn importance(&self, soc_code: &str, skill_id: &str) -> Option<f64> {
        self.by_occupation
            .get(soc_code)
            .and_then(|m| m.get(skill_id))
            .map(|r| r.importance)
    }

    /// All skill ids seen, in ascending order.
    pub fn skill_ids(&self) -> impl Iterator<Item = &str> {
        self.names.keys().map(String::as_str)
    }

    pub fn skill_name(&self, skill_id: &str) -> Option<&str> {
        self.names.get(skill_id).map(String::as_str)
    }

    pub fn occupations(&self) -> impl Iterator<Item = &str> {
        self.by_occupation.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.by_occupation.values().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AbilityRating {
    pub soc_code: String,
    pub ability_id: String,
    pub ability_name: String,
    pub importance: f64,
    pub level: f64,
}

/// Ability importance and level per (occupation, ability), plus the
/// AIOE-eligible occupations: those rated on every ability present in the
/// data set.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AbilityRatings {
    by_occupation: BTreeMap<String, BTreeMap<String, AbilityRating>>,
    names: BTreeMap<String, String>,
}

impl AbilityRatings {
    /// Builds ratings from complete records. Ranges are not checked here.
    pub fn from_ratings(ratings: impl IntoIterator<Item = AbilityRating>) -> Self {
        let mut out = AbilityRatings::default();
        for r in ratings {
            out.names
                .entry(r.ability_id.clone())
                .or_insert_with(|| r.ability_name.clone());
            out.by_occupation
                .entry(r.soc_code.clone())
                .or_default()
                .insert(r.ability_id.clone(), r);
        }
        out
    }

    /// Ability ids present anywhere in the data, ascending.
    pub fn ability_ids(&self) -> impl Iterator<Item = &str> {
        self.names.keys().map(String::as_str)
    }

    pub fn ability_count(&self) -> usize {
        self.names.len()
    }

    pub fn ability_name(&self, ability_id: &str) -> Option<&str> {
        self.names.get(ability_id).map(String::as_str)
    }

    /// Ratings for one occupation, keyed by ability id.
    pub fn for_occupation(&self, soc_code: &str) -> Option<&BTreeMap<String, AbilityRating>> {
        self.by_occupation.get(soc_code)
    }

    /// All rated occupations, ascending.
    pub fn occupations(&self) -> impl Iterator<Item = &str> {
        self.by_occupation.keys().map(String::as_str)
    }

    pub fn is_eligible(&self, soc_code: &str) -> bool {
        self.by_occupation
            .get(soc_code)
            .is_some_and(|m| !m.is_empty() && m.len() == self.names.len())
    }

    /// Occupations covering every ability, ascending.
    pub fn eligible(&self) -> impl Iterator<Item = &str> {
        self.occupations().filter(|c| self.is_eligible(c))
    }

    /// Applies `f` to every rating, e.g. to rescale a weight.
    pub fn map_ratings(&self, mut f: impl FnMut(&mut AbilityRating)) -> Self {
        let mut out = self.clone();
        for m in out.by_occupation.values_mut() {
            for r in m.values_mut() {
                f(r);
            }
        }
        out
    }
}

struct ElementRow {
    line: u64,
    soc_code: String,
    element_id: String,
    element_name: String,
    scale: String,
    value: f64,
}

fn read_element_rows(path: &Path) -> Result<Vec<ElementRow>> {
    let mut reader = tsv_reader(path)?;
    let headers = headers(&mut reader, path)?;
    let code_col = require(&headers, path, CODE_ALIASES)?;
    let id_col = require(&headers, path, ELEMENT_ID_ALIASES)?;
    let name_col = require(&headers, path, ELEMENT_NAME_ALIASES)?;
    let scale_col = require(&headers, path, SCALE_ALIASES)?;
    let value_col = require(&headers, path, VALUE_ALIASES)?;

    let mut rows = Vec::new();
    for record in reader.records() {
        let record = record.map_err(|e| csv_error(path, e))?;
        if record.iter().all(|f| f.trim().is_empty()) {
            continue;
        }
        let line = line_of(&record);
        let raw = field(&record, value_col, "data value")?;
        let value: f64 = raw
            .parse()
            .ok()
            .filter(|v: &f64| v.is_finite())
            .ok_or_else(|| CorpusError::MalformedRow {
                line,
                reason: format!("data value {raw:?} is not a number"),
            })?;
        let row = ElementRow {
            line,
            soc_code: field(&record, code_col, "code")?.to_string(),
            element_id: field(&record, id_col, "element id")?.to_string(),
            element_name: normalize_whitespace(field(&record, name_col, "element name")?),
            scale: field(&record, scale_col, "scale id")?.to_ascii_uppercase(),
            value,
        };
        if !super::onet::is_valid_soc_code(&row.soc_code) {
            return Err(CorpusError::InvalidSocCode {
                line,
                code: row.soc_code,
            });
        }
        check_scale(&row)?;
        rows.push(row);
    }
    Ok(rows)
}

fn check_scale(row: &ElementRow) -> Result<()> {
    let (lo, hi) = match row.scale.as_str() {
        "IM" => IMPORTANCE_RANGE,
        "LV" => LEVEL_RANGE,
        _ => return Ok(()),
    };
    if row.value < lo || row.value > hi {
        return Err(CorpusError::ScaleOutOfRange {
            soc_code: row.soc_code.clone(),
            element_id: row.element_id.clone(),
            scale: row.scale.clone(),
            value: row.value,
        });
    }
    Ok(())
}

fn duplicate(row: &ElementRow) -> CorpusError {
    CorpusError::MalformedRow {
        line: row.line,
        reason: format!(
            "duplicate {} rating for {}/{}",
            row.scale, row.soc_code, row.element_id
        ),
    }
}

/// Loads skill importance (`IM` rows). Level rows are range-checked and
/// otherwise ignored.
pub fn load_skill_ratings(path: impl AsRef<Path>) -> Result<SkillRatings> {
    let path = path.as_ref();
    let mut seen = BTreeSet::new();
    let mut ratings = Vec::new();
    for row in read_element_rows(path)? {
        if row.scale != "IM" {
            continue;
        }
        if !seen.insert((row.soc_code.clone(), row.element_id.clone())) {
            return Err(duplicate(&row));
        }
        ratings.push(SkillRating {
            soc_code: row.soc_code,
            skill_id: row.element_id,
            skill_name: row.element_name,
            importance: row.value,
        });
    }
    Ok(SkillRatings::from_ratings(ratings))
}

/// Loads ability importance and level, merging the `IM` and `LV` rows of
/// each (occupation, ability) pair.
pub fn load_ability_ratings(path: impl AsRef<Path>) -> Result<AbilityRatings> {
    let path = path.as_ref();
    #[derive(Default)]
    struct Partial {
        name: String,
        importance: Option<f64>,
        level: Option<f64>,
    }
    let mut partial: BTreeMap<(String, String), Partial> = BTreeMap::new();
    for row in read_element_rows(path)? {
        let entry = partial
            .entry((row.soc_code.clone(), row.element_id.clone()))
            .or_default();
        entry.name = row.element_name.clone();
        let slot = match row.scale.as_str() {
            "IM" => &mut entry.importance,
            "LV" => &mut entry.level,
            _ => continue,
        };
        if slot.replace(row.value).is_some() {
            return Err(duplicate(&row));
        }
    }

    let mut ratings = Vec::with_capacity(partial.len());
    for ((soc_code, ability_id), p) in partial {
        let missing = |scale: &str| CorpusError::MissingScale {
            soc_code: soc_code.clone(),
            ability_id: ability_id.clone(),
            scale: scale.to_string(),
        };
        let importance = p.importance.ok_or_else(|| missing("IM"))?;
        let level = p.level.ok_or_else(|| missing("LV"))?;
        ratings.push(AbilityRating {
            soc_code,
            ability_id,
            ability_name: p.name,
            importance,
            level,
        });
    }
    let ratings = AbilityRatings::from_ratings(ratings);
    for code in ratings.occupations() {
        if !ratings.is_eligible(code) {
            log::warn!(
                "{code} rates {} of {} abilities; not AIOE-eligible",
                ratings.for_occupation(code).map_or(0, BTreeMap::len),
                ratings.ability_count()
            );
        }
    }
    Ok(ratings)
}
