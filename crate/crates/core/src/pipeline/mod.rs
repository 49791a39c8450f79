//! Staged runs driven by a [`RunConfig`].
//!
//! Stages talk to each other only through files in the output directory, so
//! each one can be re-run on its own:
//!
//! | stage | reads | writes |
//! |---|---|---|
//! | ingest | raw inputs | `validation_report.json`, `occupations.tsv`, `startups_<filter>.jsonl` |
//! | classify | ingest outputs | `verdicts_<filter>_<variant>.json` |
//! | compute | verdicts or ability inputs | `scores_<index>[_<variant>].csv` |
//! | aggregate | AISE scores, employment | `groups_<level>.csv` |
//! | analyze | AISE and AIOE scores | `analysis/*` |
//!
//! Every artifact has a `<name>.meta.json` sidecar with the content hashes of
//! its inputs. The verdict cache lives under `cache/` and is the only file
//! whose bytes depend on scheduling.

mod artifacts;
mod config;
mod error;

use std::collections::BTreeSet;
use std::fmt;
use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::time::Duration;

use serde::Serialize;
use serde_json::json;

pub use artifacts::{meta_path, ArtifactMeta};
pub use config::{AnalysisSettings, BackendSettings, InputPaths, Overrides, RunConfig};
pub use error::PipelineError;

use crate::aggregate::{county_projection, group_exposure, write_group_scores_csv, GroupKind};
use crate::analytics::{
    assign_regions, compare_indices, crucial_skill_frequency, job_zone_distribution,
    rank_occupations, write_rankings_csv, write_scatter_csv, write_skill_frequency_csv,
    write_zone_stats_csv, CSplit, ComparisonReport, Direction, Region, SkillFrequencyTable,
};
use crate::corpus::{
    filter_by_tags, load_ability_ratings, load_employment, load_job_zones, load_occupations,
    load_relatedness_matrix, load_skill_ratings, load_startups, validate_corpus, write_occupations,
    write_startups, EmploymentKind, JobZoneMap, OccupationSet, TagFilter, ValidationReport,
};
use crate::exposure::{
    ability_exposure, compute_aioe, compute_startup_exposure, read_scores_csv, write_scores_csv,
    ExposureScores, IndexKind, RunMetadata,
};
use crate::gateway::{
    run_classification, Backend, ClassificationStats, Classifier, ClassifierConfig, HttpBackend,
    HttpConfig, MockBackend, PromptVariant, VerdictCache, VerdictMatrix,
};
use artifacts::{json_bytes, read_text, require, Provenance};

pub type Result<T, E = PipelineError> = std::result::Result<T, E>;

fn required<'a>(path: &'a Option<PathBuf>, what: &str) -> Result<&'a Path> {
    path.as_deref()
        .ok_or_else(|| PipelineError::Config(format!("no `{what}` input configured")))
}

fn index_for_filter(filter: &str) -> IndexKind {
    if filter.eq_ignore_ascii_case("robotics") {
        IndexKind::Rse
    } else {
        IndexKind::Aise
    }
}

fn filter_for_index(kind: IndexKind) -> &'static str {
    match kind {
        IndexKind::Rse => "robotics",
        _ => "ai",
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct IngestSummary {
    pub report: ValidationReport,
    pub filter: String,
    pub selected_startups: usize,
}

impl fmt::Display for IngestSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = &self.report;
        write!(
            f,
            "ingest: {} occupations ({} with job zone, {} AIOE-eligible), {} startups, {} selected by filter {:?}",
            r.occupations,
            r.occupations_with_job_zone,
            r.aioe_eligible,
            r.startups,
            self.selected_startups,
            self.filter
        )
    }
}

#[derive(Debug, Clone)]
pub struct ClassifySummary {
    pub path: PathBuf,
    pub occupations: usize,
    pub startups: usize,
    pub coverage: f64,
    pub stats: ClassificationStats,
}

impl fmt::Display for ClassifySummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "classify: {} x {} pairs, coverage {:.4}, {} cache hits, {} backend requests, {} failures -> {}",
            self.occupations,
            self.startups,
            self.coverage,
            self.stats.cache_hits,
            self.stats.backend_requests,
            self.stats.failures,
            self.path.display()
        )
    }
}

#[derive(Debug, Clone)]
pub struct ComputeSummary {
    pub kind: IndexKind,
    pub path: PathBuf,
    pub occupations: usize,
}

impl fmt::Display for ComputeSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "compute {}: {} occupations -> {}",
            self.kind,
            self.occupations,
            self.path.display()
        )
    }
}

#[derive(Debug, Clone)]
pub struct AggregateSummary {
    pub kind: GroupKind,
    pub path: PathBuf,
    pub groups: usize,
    pub warnings: Vec<String>,
}

impl fmt::Display for AggregateSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "aggregate {}: {} groups -> {}",
            self.kind,
            self.groups,
            self.path.display()
        )
    }
}

#[derive(Debug, Clone)]
pub struct AnalyzeSummary {
    pub dir: PathBuf,
    pub files: Vec<PathBuf>,
    pub comparison: ComparisonReport,
}

impl fmt::Display for AnalyzeSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: Option<f64>| v.map_or("undefined".to_string(), |x| format!("{x:.4}"));
        write!(
            f,
            "analyze: {} common occupations, pearson {}, kendall tau-b {}, {} files -> {}",
            self.comparison.n_common,
            show(self.comparison.pearson),
            show(self.comparison.kendall_tau_b),
            self.files.len(),
            self.dir.display()
        )
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunSummary {
    pub ingest: Option<IngestSummary>,
    pub classify: Option<ClassifySummary>,
    pub compute: Vec<ComputeSummary>,
    pub aggregate: Vec<AggregateSummary>,
    pub analyze: Option<AnalyzeSummary>,
}

impl fmt::Display for RunSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut lines: Vec<String> = Vec::new();
        lines.extend(self.ingest.iter().map(ToString::to_string));
        lines.extend(self.classify.iter().map(ToString::to_string));
        lines.extend(self.compute.iter().map(ToString::to_string));
        lines.extend(self.aggregate.iter().map(ToString::to_string));
        lines.extend(self.analyze.iter().map(ToString::to_string));
        f.write_str(&lines.join("\n"))
    }
}

pub struct Pipeline {
    config: RunConfig,
}

impl Pipeline {
    pub fn new(config: RunConfig) -> Self {
        Pipeline { config }
    }

    pub fn config(&self) -> &RunConfig {
        &self.config
    }

    fn out(&self, name: &str) -> PathBuf {
        self.config.out_dir.join(name)
    }

    pub fn occupations_path(&self) -> PathBuf {
        self.out("occupations.tsv")
    }

    pub fn startups_path(&self, filter: &str) -> PathBuf {
        self.out(&format!("startups_{filter}.jsonl"))
    }

    pub fn verdicts_path(&self, filter: &str, variant: PromptVariant) -> PathBuf {
        self.out(&format!("verdicts_{filter}_{variant}.json"))
    }

    pub fn scores_path(&self, kind: IndexKind, variant: PromptVariant) -> PathBuf {
        match kind {
            IndexKind::Aioe => self.out("scores_aioe.csv"),
            _ => self.out(&format!("scores_{kind}_{variant}.csv")),
        }
    }

    pub fn groups_path(&self, kind: GroupKind) -> PathBuf {
        self.out(&format!("groups_{kind}.csv"))
    }

    pub fn analysis_dir(&self) -> PathBuf {
        self.out("analysis")
    }

    fn zones(&self, prov: &mut Provenance) -> Result<JobZoneMap> {
        match &self.config.inputs.job_zones {
            Some(p) => {
                prov.input("job_zones", p)?;
                Ok(load_job_zones(p)?)
            }
            None => Ok(JobZoneMap::default()),
        }
    }

    /// Loads and validates the corpus, then writes the normalized occupation
    /// table and the filtered startup snapshot. Fatal findings fail after the
    /// report is written.
    pub fn ingest(&self) -> Result<IngestSummary> {
        let inputs = &self.config.inputs;
        let mut prov = Provenance::default();
        let occ_path = required(&inputs.occupations, "occupations")?;
        let occupations = load_occupations(occ_path)?;
        prov.input("occupations", occ_path)?;
        let st_path = required(&inputs.startups, "startups")?;
        let startups = load_startups(st_path)?;
        prov.input("startups", st_path)?;
        let zones = self.zones(&mut prov)?;
        let ratings = match &inputs.abilities {
            Some(p) => {
                prov.input("abilities", p)?;
                Some(load_ability_ratings(p)?)
            }
            None => None,
        };
        if let Some(p) = &inputs.skills {
            load_skill_ratings(p)?;
        }

        let filter = TagFilter::builtin(&self.config.filter)?;
        let selected = filter_by_tags(&startups, &filter);
        let report = validate_corpus(&occupations, &startups, ratings.as_ref(), Some(&zones));
        let summary = IngestSummary {
            report,
            filter: filter.name().to_string(),
            selected_startups: selected.len(),
        };
        prov.write(
            &self.out("validation_report.json"),
            &json_bytes(&summary),
            serde_json::Value::Null,
        )?;
        if !summary.report.is_ok() {
            return Err(PipelineError::Validation(summary.report.fatal.clone()));
        }

        let mut buf = Vec::new();
        write_occupations(&occupations, &mut buf).expect("write to memory");
        prov.write(&self.occupations_path(), &buf, serde_json::Value::Null)?;
        let mut buf = Vec::new();
        write_startups(&selected, &mut buf).expect("write to memory");
        prov.write(
            &self.startups_path(filter.name()),
            &buf,
            json!({ "filter": filter.name(), "startups": selected.len() }),
        )?;
        Ok(summary)
    }

    fn classifier_config(&self) -> ClassifierConfig {
        let b = &self.config.backend;
        ClassifierConfig {
            model_id: if self.config.mock {
                "mock-jaccard".into()
            } else {
                b.model.clone()
            },
            max_tokens: b.max_tokens,
            max_retries: b.max_retries,
            backoff_base: Duration::from_millis(b.backoff_ms),
            fail_fast: b.fail_fast,
            requests_per_second: b.requests_per_second,
            ..ClassifierConfig::default()
        }
    }

    /// Classifies with the configured backend: the mock when `mock` is set,
    /// the HTTP endpoint otherwise.
    pub fn classify(&self) -> Result<ClassifySummary> {
        if self.config.mock {
            self.classify_with(&MockBackend::new(self.config.mock_threshold))
        } else {
            let b = &self.config.backend;
            let http = HttpBackend::new(&HttpConfig {
                base_url: b.base_url.clone(),
                api_key_env: b.api_key_env.clone(),
                timeout: Duration::from_secs(b.timeout_secs),
            });
            self.classify_with(&http)
        }
    }

    pub fn classify_with(&self, backend: &dyn Backend) -> Result<ClassifySummary> {
        let filter = TagFilter::builtin(&self.config.filter)?;
        let occ_path = require(self.occupations_path())?;
        let st_path = require(self.startups_path(filter.name()))?;
        let mut prov = Provenance::default();
        prov.artifact(&occ_path)?;
        prov.artifact(&st_path)?;
        let occupations = load_occupations(&occ_path)?;
        let startups = load_startups(&st_path)?;

        let cache = VerdictCache::open(self.config.cache_path())?;
        let config = self.classifier_config();
        let classifier = Classifier::new(backend, &cache, config);
        let matrix = run_classification(
            &classifier,
            self.config.variant,
            &startups,
            &occupations,
            self.config.backend.concurrency,
        )?;
        let stats = classifier.stats();
        let pairs = matrix.occupations().len() * matrix.startups().len();
        if stats.failures == pairs {
            return Err(PipelineError::Backend(format!(
                "all {pairs} requests failed; see the log for the last errors"
            )));
        }
        let path = self.verdicts_path(filter.name(), self.config.variant);
        prov.write(&path, matrix.to_json().as_bytes(), serde_json::Value::Null)?;
        Ok(ClassifySummary {
            path,
            occupations: matrix.occupations().len(),
            startups: matrix.startups().len(),
            coverage: matrix.coverage(),
            stats,
        })
    }

    fn titles(&self) -> Result<Option<OccupationSet>> {
        let p = self.occupations_path();
        if p.is_file() {
            Ok(Some(load_occupations(p)?))
        } else {
            Ok(None)
        }
    }

    pub fn compute(&self, kind: IndexKind) -> Result<ComputeSummary> {
        let mut prov = Provenance::default();
        let scores = match kind {
            IndexKind::Aioe => {
                let rel = required(&self.config.inputs.relatedness, "relatedness")?;
                let abl = required(&self.config.inputs.abilities, "abilities")?;
                prov.input("relatedness", rel)?;
                prov.input("abilities", abl)?;
                let a = ability_exposure(&load_relatedness_matrix(rel)?);
                compute_aioe(&a, &load_ability_ratings(abl)?)?
            }
            IndexKind::Aise | IndexKind::Rse => {
                let path = require(self.verdicts_path(filter_for_index(kind), self.config.variant))?;
                prov.artifact(&path)?;
                let matrix = VerdictMatrix::from_json(&read_text(&path)?)?;
                compute_startup_exposure(&matrix, kind, self.config.policy)?
            }
        };
        let titles = self.titles()?;
        let mut buf = Vec::new();
        write_scores_csv(&scores, titles.as_ref(), &mut buf)?;
        let path = self.scores_path(kind, self.config.variant);
        let details = serde_json::to_value(&scores.metadata).expect("metadata serializes");
        prov.write(&path, &buf, details)?;
        Ok(ComputeSummary {
            kind,
            path,
            occupations: scores.len(),
        })
    }

    fn read_scores(&self, kind: IndexKind, variant: PromptVariant, prov: &mut Provenance) -> Result<ExposureScores> {
        let path = require(self.scores_path(kind, variant))?;
        prov.artifact(&path)?;
        let file = File::open(&path).map_err(|source| PipelineError::Io {
            path: path.clone(),
            source,
        })?;
        Ok(read_scores_csv(BufReader::new(file), RunMetadata::new(kind))?)
    }

    /// Aggregates the AISE scores of the configured variant.
    pub fn aggregate(&self, kind: GroupKind) -> Result<AggregateSummary> {
        let mut prov = Provenance::default();
        let scores = self.read_scores(IndexKind::Aise, self.config.variant, &mut prov)?;
        let inputs = &self.config.inputs;
        let groups = match kind {
            GroupKind::Msa => {
                let p = required(&inputs.msa_employment, "msa_employment")?;
                prov.input("msa_employment", p)?;
                group_exposure(&scores, &load_employment(p, EmploymentKind::AreaOccupation)?, kind)?
            }
            GroupKind::Sector => {
                let p = required(&inputs.sector_employment, "sector_employment")?;
                prov.input("sector_employment", p)?;
                group_exposure(&scores, &load_employment(p, EmploymentKind::SectorOccupation)?, kind)?
            }
            GroupKind::County => {
                let nat = required(&inputs.sector_employment, "sector_employment")?;
                let cty = required(&inputs.county_sector_employment, "county_sector_employment")?;
                prov.input("sector_employment", nat)?;
                prov.input("county_sector_employment", cty)?;
                county_projection(
                    &scores,
                    &load_employment(nat, EmploymentKind::SectorOccupation)?,
                    &load_employment(cty, EmploymentKind::AreaSector)?,
                )?
            }
        };
        for w in &groups.warnings {
            log::warn!("{w}");
        }
        let mut buf = Vec::new();
        write_group_scores_csv(&groups, &mut buf)?;
        let path = self.groups_path(kind);
        prov.write(&path, &buf, json!({ "level": kind, "warnings": groups.warnings }))?;
        Ok(AggregateSummary {
            kind,
            path,
            groups: groups.len(),
            warnings: groups.warnings,
        })
    }

    /// Compares AISE with AIOE and writes the region, skill, Job Zone and
    /// ranking tables. Other prompt variants and RSE are compared with the
    /// configured AISE when their score files exist.
    pub fn analyze(&self) -> Result<AnalyzeSummary> {
        let variant = self.config.variant;
        let settings = &self.config.analysis;
        let mut prov = Provenance::default();
        let aise = self.read_scores(IndexKind::Aise, variant, &mut prov)?;
        let aioe = self.read_scores(IndexKind::Aioe, variant, &mut prov)?;
        let zones = self.zones(&mut prov)?;
        let titles = self.titles()?;
        let dir = self.analysis_dir();
        let mut files = Vec::new();

        let main = compare_indices(&aise, &aioe)?;
        let mut comparisons = vec![(format!("aise_{variant}_vs_aioe"), main.clone())];
        for other in PromptVariant::ALL.into_iter().filter(|v| *v != variant) {
            if self.scores_path(IndexKind::Aise, other).is_file() {
                let s = self.read_scores(IndexKind::Aise, other, &mut prov)?;
                comparisons.push((format!("aise_{variant}_vs_aise_{other}"), compare_indices(&aise, &s)?));
            }
        }
        if self.scores_path(IndexKind::Rse, variant).is_file() {
            let rse = self.read_scores(IndexKind::Rse, variant, &mut prov)?;
            comparisons.push((format!("aise_{variant}_vs_rse_{variant}"), compare_indices(&aise, &rse)?));
        }
        let comparisons: serde_json::Map<String, serde_json::Value> = comparisons
            .into_iter()
            .map(|(k, v)| (k, serde_json::to_value(v).expect("report serializes")))
            .collect();

        let regions = assign_regions(&aioe, &aise)?;
        let mut buf = Vec::new();
        write_scatter_csv(&aise, &aioe, &zones, &regions, titles.as_ref(), &mut buf)?;
        let path = dir.join("regions.csv");
        prov.write(&path, &buf, serde_json::Value::Null)?;
        files.push(path);

        let skills = match &self.config.inputs.skills {
            Some(p) => {
                prov.input("skills", p)?;
                Some(load_skill_ratings(p)?)
            }
            None => None,
        };
        let mut region_sizes = serde_json::Map::new();
        for r in Region::ALL {
            region_sizes.insert(r.id().into(), regions.members(r).len().into());
        }
        for s in CSplit::ALL {
            region_sizes.insert(s.id().into(), regions.split_members(s).len().into());
        }
        if let Some(skills) = &skills {
            let mut table = SkillFrequencyTable::default();
            let groups: Vec<(&str, Vec<&str>)> = vec![
                ("top_c", regions.split_members(CSplit::TopC)),
                ("bottom_c", regions.split_members(CSplit::BottomC)),
                ("c", regions.members(Region::C)),
            ];
            for (label, members) in groups {
                if members.is_empty() {
                    log::warn!("region {label} is empty; no skill frequencies");
                    continue;
                }
                table.push(label, crucial_skill_frequency(members, skills, settings.crucial_threshold)?);
            }
            let mut buf = Vec::new();
            write_skill_frequency_csv(&table, skills, &mut buf)?;
            let path = dir.join("crucial_skills.csv");
            prov.write(&path, &buf, json!({ "threshold": settings.crucial_threshold }))?;
            files.push(path);
        }

        let all = job_zone_distribution(&aise, &zones, None);
        let by_region: Vec<(Region, _)> = [Region::A, Region::B, Region::C]
            .into_iter()
            .map(|r| {
                let members: BTreeSet<String> =
                    regions.members(r).into_iter().map(str::to_string).collect();
                (r, job_zone_distribution(&aise, &zones, Some(&members)))
            })
            .collect();
        let mut groups: Vec<(&str, &_)> = vec![("all", &all)];
        groups.extend(by_region.iter().map(|(r, d)| (r.id(), d)));
        let mut buf = Vec::new();
        write_zone_stats_csv(&groups, &mut buf)?;
        let path = dir.join("job_zones.csv");
        prov.write(&path, &buf, serde_json::Value::Null)?;
        files.push(path);

        let n = settings.top_n;
        let lists = [
            ("aise_top", rank_occupations(&aise, titles.as_ref(), n, Direction::Top)),
            ("aise_bottom", rank_occupations(&aise, titles.as_ref(), n, Direction::Bottom)),
            ("aioe_top", rank_occupations(&aioe, titles.as_ref(), n, Direction::Top)),
            ("aioe_bottom", rank_occupations(&aioe, titles.as_ref(), n, Direction::Bottom)),
        ];
        let refs: Vec<(&str, &[_])> = lists.iter().map(|(l, v)| (*l, v.as_slice())).collect();
        let mut buf = Vec::new();
        write_rankings_csv(&refs, &mut buf)?;
        let path = dir.join("rankings.csv");
        prov.write(&path, &buf, serde_json::Value::Null)?;
        files.push(path);

        let summary = json!({
            "variant": variant,
            "occupations": { "aise": aise.len(), "aioe": aioe.len() },
            "regions": region_sizes,
            "comparisons": comparisons,
        });
        let path = dir.join("summary.json");
        prov.write(&path, &json_bytes(&summary), serde_json::Value::Null)?;
        files.push(path);

        Ok(AnalyzeSummary {
            dir,
            files,
            comparison: main,
        })
    }

    /// Runs every stage the configuration has inputs for.
    pub fn run_all(&self) -> Result<RunSummary> {
        let mut summary = RunSummary {
            ingest: Some(self.ingest()?),
            classify: Some(self.classify()?),
            ..RunSummary::default()
        };
        let index = index_for_filter(&self.config.filter);
        summary.compute.push(self.compute(index)?);
        let inputs = &self.config.inputs;
        let has_aioe = inputs.abilities.is_some() && inputs.relatedness.is_some();
        if has_aioe {
            summary.compute.push(self.compute(IndexKind::Aioe)?);
        }
        if index == IndexKind::Aise {
            if inputs.msa_employment.is_some() {
                summary.aggregate.push(self.aggregate(GroupKind::Msa)?);
            }
            if inputs.sector_employment.is_some() {
                summary.aggregate.push(self.aggregate(GroupKind::Sector)?);
                if inputs.county_sector_employment.is_some() {
                    summary.aggregate.push(self.aggregate(GroupKind::County)?);
                }
            }
            if has_aioe {
                summary.analyze = Some(self.analyze()?);
            }
        }
        Ok(summary)
    }
}
