use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{PipelineError, Result};
use crate::exposure::DenominatorPolicy;
use crate::gateway::{PromptVariant, DEFAULT_THRESHOLD};

/// Input files. Relative paths in a config file resolve against the file's
/// directory; `out_dir` and `cache` resolve against the working directory.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InputPaths {
    pub occupations: Option<PathBuf>,
    pub job_zones: Option<PathBuf>,
    pub skills: Option<PathBuf>,
    pub abilities: Option<PathBuf>,
    pub relatedness: Option<PathBuf>,
    pub startups: Option<PathBuf>,
    /// Area x occupation employment for MSA aggregation.
    pub msa_employment: Option<PathBuf>,
    /// National sector x occupation employment.
    pub sector_employment: Option<PathBuf>,
    /// County x sector employment for the county projection.
    pub county_sector_employment: Option<PathBuf>,
}

impl InputPaths {
    fn resolve(&mut self, base: &Path) {
        for p in [
            &mut self.occupations,
            &mut self.job_zones,
            &mut self.skills,
            &mut self.abilities,
            &mut self.relatedness,
            &mut self.startups,
            &mut self.msa_employment,
            &mut self.sector_employment,
            &mut self.county_sector_employment,
        ]
        .into_iter()
        .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BackendSettings {
    pub base_url: String,
    pub model: String,
    pub api_key_env: Option<String>,
    pub concurrency: usize,
    pub requests_per_second: Option<f64>,
    pub max_retries: u32,
    /// First retry delay; doubles per attempt.
    pub backoff_ms: u64,
    pub max_tokens: u32,
    pub timeout_secs: u64,
    pub fail_fast: bool,
}

impl Default for BackendSettings {
    fn default() -> Self {
        BackendSettings {
            base_url: "http://localhost:8000/v1".into(),
            model: "llama3-8b".into(),
            api_key_env: Some("AISE_API_KEY".into()),
            concurrency: 4,
            requests_per_second: None,
            max_retries: 3,
            backoff_ms: 500,
            max_tokens: 4,
            timeout_secs: 60,
            fail_fast: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisSettings {
    /// Importance above which a skill is crucial.
    pub crucial_threshold: f64,
    pub top_n: usize,
}

impl Default for AnalysisSettings {
    fn default() -> Self {
        AnalysisSettings {
            crucial_threshold: 4.0,
            top_n: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub out_dir: PathBuf,
    /// Verdict cache; defaults to `<out_dir>/cache/verdicts.jsonl`.
    pub cache: Option<PathBuf>,
    pub variant: PromptVariant,
    /// Built-in tag filter, `ai` or `robotics`.
    pub filter: String,
    pub policy: DenominatorPolicy,
    pub mock: bool,
    pub mock_threshold: f64,
    pub inputs: InputPaths,
    pub backend: BackendSettings,
    pub analysis: AnalysisSettings,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            out_dir: PathBuf::from("out"),
            cache: None,
            variant: PromptVariant::ReplaceDetailed,
            filter: "ai".into(),
            policy: DenominatorPolicy::Definitive,
            mock: false,
            mock_threshold: DEFAULT_THRESHOLD,
            inputs: InputPaths::default(),
            backend: BackendSettings::default(),
            analysis: AnalysisSettings::default(),
        }
    }
}

/// Command-line values that take precedence over the config file.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub out_dir: Option<PathBuf>,
    pub mock: bool,
    pub variant: Option<PromptVariant>,
    pub filter: Option<String>,
    pub concurrency: Option<usize>,
    pub policy: Option<DenominatorPolicy>,
}

impl RunConfig {
    pub fn from_toml(text: &str, base: &Path) -> Result<Self> {
        let mut config: RunConfig =
            toml::from_str(text).map_err(|e| PipelineError::Config(e.to_string()))?;
        config.inputs.resolve(base);
        Ok(config)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| {
            PipelineError::Config(format!("cannot read {}: {e}", path.display()))
        })?;
        let base = path.parent().unwrap_or(Path::new("."));
        RunConfig::from_toml(&text, base)
    }

    /// File (or defaults), then flags, then validation.
    pub fn resolve(path: Option<&Path>, overrides: Overrides) -> Result<Self> {
        let mut config = match path {
            Some(p) => RunConfig::load(p)?,
            None => RunConfig::default(),
        };
        config.apply(overrides);
        config.validate()?;
        Ok(config)
    }

    pub fn apply(&mut self, o: Overrides) {
        if let Some(v) = o.out_dir {
            self.out_dir = v;
        }
        self.mock |= o.mock;
        if let Some(v) = o.variant {
            self.variant = v;
        }
        if let Some(v) = o.filter {
            self.filter = v;
        }
        if let Some(v) = o.concurrency {
            self.backend.concurrency = v;
        }
        if let Some(v) = o.policy {
            self.policy = v;
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(PipelineError::Config(m));
        if self.backend.concurrency == 0 {
            return bad("concurrency must be at least 1".into());
        }
        if !(0.0..=1.0).contains(&self.mock_threshold) {
            return bad(format!("mock_threshold {} is outside [0, 1]", self.mock_threshold));
        }
        if self.backend.requests_per_second.is_some_and(|r| !(r > 0.0)) {
            return bad("requests_per_second must be positive".into());
        }
        if self.analysis.top_n == 0 {
            return bad("top_n must be at least 1".into());
        }
        crate::corpus::TagFilter::builtin(&self.filter)
            .map_err(|e| PipelineError::Config(e.to_string()))?;
        Ok(())
    }

    pub fn cache_path(&self) -> PathBuf {
        self.cache
            .clone()
            .unwrap_or_else(|| self.out_dir.join("cache").join("verdicts.jsonl"))
    }
}
