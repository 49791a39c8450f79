use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::{Duration, SystemTime, UNIX_EPOCH};

use super::{
    cache_key, parse_verdict, render_prompt, Answer, Backend, BackendError, CacheEntry,
    ChatRequest, GatewayError, PromptVariant, Result, TokenBucket, Verdict, VerdictCache,
    VerdictMatrix,
};
use crate::corpus::{Occupation, OccupationSet, Startup, StartupSet};

#[derive(Debug, Clone, PartialEq)]
pub struct ClassifierConfig {
    pub model_id: String,
    pub max_tokens: u32,
    /// Retries after a failed transport attempt.
    pub max_retries: u32,
    pub backoff_base: Duration,
    pub backoff_max: Duration,
    /// Extra attempts when the model's reply cannot be parsed.
    pub unparseable_retries: u32,
    /// Abort on persistent backend failure instead of recording `unparseable`.
    pub fail_fast: bool,
    pub requests_per_second: Option<f64>,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        ClassifierConfig {
            model_id: "llama3-8b".into(),
            max_tokens: 4,
            max_retries: 3,
            backoff_base: Duration::from_millis(500),
            backoff_max: Duration::from_secs(30),
            unparseable_retries: 1,
            fail_fast: false,
            requests_per_second: None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ClassificationStats {
    pub cache_hits: usize,
    pub backend_requests: usize,
    pub failures: usize,
}

/// Cache-first classifier over one backend.
pub struct Classifier<'a> {
    backend: &'a dyn Backend,
    cache: &'a VerdictCache,
    config: ClassifierConfig,
    limiter: Option<TokenBucket>,
    cache_hits: AtomicUsize,
    backend_requests: AtomicUsize,
    failures: AtomicUsize,
}

fn now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0, |d| d.as_secs())
}

impl<'a> Classifier<'a> {
    pub fn new(backend: &'a dyn Backend, cache: &'a VerdictCache, config: ClassifierConfig) -> Self {
        let limiter = config
            .requests_per_second
            .filter(|r| *r > 0.0)
            .map(|r| TokenBucket::new(r, r.ceil()));
        Classifier {
            backend,
            cache,
            config,
            limiter,
            cache_hits: AtomicUsize::new(0),
            backend_requests: AtomicUsize::new(0),
            failures: AtomicUsize::new(0),
        }
    }

    pub fn config(&self) -> &ClassifierConfig {
        &self.config
    }

    pub fn stats(&self) -> ClassificationStats {
        ClassificationStats {
            cache_hits: self.cache_hits.load(Ordering::SeqCst),
            backend_requests: self.backend_requests.load(Ordering::SeqCst),
            failures: self.failures.load(Ordering::SeqCst),
        }
    }

    fn failed(
        &self,
        variant: PromptVariant,
        startup: &Startup,
        occupation: &Occupation,
        error: String,
    ) -> Verdict {
        self.failures.fetch_add(1, Ordering::SeqCst);
        log::warn!(
            "{} x {} ({variant}): {error}",
            occupation.soc_code,
            startup.startup_id
        );
        Verdict {
            soc_code: occupation.soc_code.clone(),
            startup_id: startup.startup_id.clone(),
            variant,
            answer: Answer::Unparseable,
            raw_response: format!("error: {error}"),
            model_id: self.config.model_id.clone(),
            retrieved_from_cache: false,
            timestamp: now(),
        }
    }

    fn backoff(&self, attempt: u32) -> Duration {
        let factor = 2u32.saturating_pow(attempt);
        self.config
            .backoff_base
            .saturating_mul(factor)
            .min(self.config.backoff_max)
    }

    fn request(&self, request: &ChatRequest) -> std::result::Result<String, (u32, BackendError)> {
        let mut attempt = 0;
        loop {
            if let Some(limiter) = &self.limiter {
                limiter.acquire();
            }
            self.backend_requests.fetch_add(1, Ordering::SeqCst);
            match self.backend.complete(request) {
                Ok(reply) => return Ok(reply),
                Err(e) if e.is_retryable() && attempt < self.config.max_retries => {
                    std::thread::sleep(self.backoff(attempt));
                    attempt += 1;
                }
                Err(e) => return Err((attempt + 1, e)),
            }
        }
    }

    /// Classifies one pair: cache first, then the backend with retries.
    ///
    /// Persistent backend failure yields an `unparseable` verdict whose raw
    /// response carries the error, unless `fail_fast` is set. Failures are
    /// not cached, so a later run retries them.
    pub fn classify_pair(
        &self,
        variant: PromptVariant,
        startup: &Startup,
        occupation: &Occupation,
    ) -> Result<Verdict> {
        let prompt = match render_prompt(variant, startup, occupation) {
            Ok(p) => p,
            Err(e) if !self.config.fail_fast => {
                return Ok(self.failed(variant, startup, occupation, e.to_string()))
            }
            Err(e) => return Err(e),
        };
        let key = cache_key(
            &self.config.model_id,
            variant,
            variant.startup_description(startup),
            &occupation.description,
        );
        if let Some(hit) = self.cache.get(&key) {
            self.cache_hits.fetch_add(1, Ordering::SeqCst);
            return Ok(Verdict {
                soc_code: occupation.soc_code.clone(),
                startup_id: startup.startup_id.clone(),
                variant,
                answer: hit.answer,
                raw_response: hit.raw_response,
                model_id: hit.model_id,
                retrieved_from_cache: true,
                timestamp: hit.timestamp,
            });
        }

        let request = ChatRequest::new(
            &self.config.model_id,
            &prompt.system,
            &prompt.user,
            self.config.max_tokens,
        );
        let mut parse_attempts = 0;
        let (raw, answer) = loop {
            match self.request(&request) {
                Ok(raw) => {
                    let answer = parse_verdict(&raw);
                    if answer.is_definitive() || parse_attempts >= self.config.unparseable_retries {
                        break (raw, answer);
                    }
                    parse_attempts += 1;
                }
                Err((attempts, last_error)) => {
                    if self.config.fail_fast {
                        self.failures.fetch_add(1, Ordering::SeqCst);
                        return Err(GatewayError::BackendUnreachableAfterRetries {
                            attempts,
                            last_error,
                        });
                    }
                    return Ok(self.failed(variant, startup, occupation, last_error.to_string()));
                }
            }
        };

        let timestamp = now();
        self.cache.put(CacheEntry {
            key,
            variant,
            model_id: self.config.model_id.clone(),
            answer,
            raw_response: raw.clone(),
            timestamp,
        })?;
        Ok(Verdict {
            soc_code: occupation.soc_code.clone(),
            startup_id: startup.startup_id.clone(),
            variant,
            answer,
            raw_response: raw,
            model_id: self.config.model_id.clone(),
            retrieved_from_cache: false,
            timestamp,
        })
    }
}

/// Classifies every (occupation, startup) pair with up to `concurrency`
/// requests in flight.
///
/// Rows follow the order of `occupations`, columns the order of `startups`;
/// completion order has no effect on the result. Every finished pair is in
/// the cache, so an interrupted run resumes where it stopped.
pub fn run_classification(
    classifier: &Classifier<'_>,
    variant: PromptVariant,
    startups: &StartupSet,
    occupations: &OccupationSet,
    concurrency: usize,
) -> Result<VerdictMatrix> {
    if startups.is_empty() || occupations.is_empty() {
        return Err(GatewayError::EmptyInput);
    }
    let occ: Vec<&Occupation> = occupations.iter().collect();
    let st: Vec<&Startup> = startups.iter().collect();
    let total = occ.len() * st.len();
    let workers = concurrency.clamp(1, total);

    let next = AtomicUsize::new(0);
    let done = AtomicUsize::new(0);
    let stop = AtomicBool::new(false);
    let cells = Mutex::new(vec![Answer::Unparseable; total]);
    let first_error: Mutex<Option<GatewayError>> = Mutex::new(None);
    let report_every = (total / 10).max(1);

    std::thread::scope(|scope| {
        for _ in 0..workers {
            scope.spawn(|| loop {
                if stop.load(Ordering::SeqCst) {
                    break;
                }
                let idx = next.fetch_add(1, Ordering::SeqCst);
                if idx >= total {
                    break;
                }
                let (i, j) = (idx / st.len(), idx % st.len());
                match classifier.classify_pair(variant, st[j], occ[i]) {
                    Ok(v) => {
                        cells.lock().expect("cells poisoned")[idx] = v.answer;
                        let finished = done.fetch_add(1, Ordering::SeqCst) + 1;
                        if finished % report_every == 0 {
                            log::info!("classified {finished}/{total} pairs");
                        }
                    }
                    Err(e) => {
                        stop.store(true, Ordering::SeqCst);
                        first_error.lock().expect("error slot poisoned").get_or_insert(e);
                        break;
                    }
                }
            });
        }
    });

    if let Some(e) = first_error.into_inner().expect("error slot poisoned") {
        return Err(e);
    }
    VerdictMatrix::new(
        variant,
        classifier.config.model_id.clone(),
        occ.iter().map(|o| o.soc_code.clone()).collect(),
        st.iter().map(|s| s.startup_id.clone()).collect(),
        cells.into_inner().expect("cells poisoned"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gateway::MockBackend;
    use std::sync::atomic::AtomicU32;

    fn startup(id: &str, desc: &str) -> Startup {
        Startup {
            startup_id: id.into(),
            name: id.into(),
            short_desc: desc.into(),
            long_desc: desc.into(),
            year: None,
            tags: Default::default(),
        }
    }

    fn occupation(code: &str, desc: &str) -> Occupation {
        Occupation {
            soc_code: code.into(),
            title: code.into(),
            description: desc.into(),
            job_zone: None,
        }
    }

    fn fast_config() -> ClassifierConfig {
        ClassifierConfig {
            backoff_base: Duration::from_millis(1),
            ..Default::default()
        }
    }

    /// Fails the first `failures` calls with a transport error, then says "no".
    struct Flaky {
        failures: u32,
        calls: AtomicU32,
        reply: &'static str,
    }

    impl Backend for Flaky {
        fn complete(&self, _: &ChatRequest) -> std::result::Result<String, BackendError> {
            let n = self.calls.fetch_add(1, Ordering::SeqCst);
            if n < self.failures {
                Err(BackendError::Transport("connection refused".into()))
            } else {
                Ok(self.reply.into())
            }
        }
    }

    #[test]
    fn cache_hit_skips_backend() {
        let backend = MockBackend::default();
        let cache = VerdictCache::in_memory();
        let c = Classifier::new(&backend, &cache, fast_config());
        let s = startup("s", "invoice automation");
        let o = occupation("43-3031.00", "process invoice payments");
        let first = c.classify_pair(PromptVariant::ReplaceDetailed, &s, &o).unwrap();
        assert!(!first.retrieved_from_cache);
        assert_eq!(backend.calls(), 1);
        let second = c.classify_pair(PromptVariant::ReplaceDetailed, &s, &o).unwrap();
        assert!(second.retrieved_from_cache);
        assert_eq!(second.answer, first.answer);
        assert_eq!(backend.calls(), 1);
        assert_eq!(c.stats().cache_hits, 1);
    }

    #[test]
    fn uncached_no_is_written_through() {
        let backend = Flaky { failures: 0, calls: AtomicU32::new(0), reply: "no" };
        let cache = VerdictCache::in_memory();
        let c = Classifier::new(&backend, &cache, fast_config());
        let v = c
            .classify_pair(PromptVariant::ReplaceShort, &startup("s", "x"), &occupation("11-1011.00", "y"))
            .unwrap();
        assert_eq!(v.answer, Answer::No);
        assert_eq!(cache.len(), 1);
    }

    #[test]
    fn transient_failures_are_retried() {
        let backend = Flaky { failures: 2, calls: AtomicU32::new(0), reply: "Yes." };
        let cache = VerdictCache::in_memory();
        let c = Classifier::new(&backend, &cache, fast_config());
        let v = c
            .classify_pair(PromptVariant::ReplaceDetailed, &startup("s", "x"), &occupation("11-1011.00", "y"))
            .unwrap();
        assert_eq!(v.answer, Answer::Yes);
        assert_eq!(backend.calls.load(Ordering::SeqCst), 3);
    }

    #[test]
    fn exhausted_retries_lenient_and_fail_fast() {
        let backend = Flaky { failures: u32::MAX, calls: AtomicU32::new(0), reply: "" };
        let cache = VerdictCache::in_memory();
        let c = Classifier::new(&backend, &cache, fast_config());
        let (s, o) = (startup("s", "x"), occupation("11-1011.00", "y"));
        let v = c.classify_pair(PromptVariant::ReplaceDetailed, &s, &o).unwrap();
        assert_eq!(v.answer, Answer::Unparseable);
        assert!(v.raw_response.contains("connection refused"));
        assert_eq!(backend.calls.load(Ordering::SeqCst), 4);
        assert!(cache.is_empty());

        let strict = Classifier::new(&backend, &cache, ClassifierConfig { fail_fast: true, ..fast_config() });
        assert!(matches!(
            strict.classify_pair(PromptVariant::ReplaceDetailed, &s, &o),
            Err(GatewayError::BackendUnreachableAfterRetries { attempts: 4, .. })
        ));
    }

    #[test]
    fn unparseable_reply_is_retried_once_then_kept() {
        let backend = Flaky { failures: 0, calls: AtomicU32::new(0), reply: "Maybe." };
        let cache = VerdictCache::in_memory();
        let c = Classifier::new(&backend, &cache, fast_config());
        let v = c
            .classify_pair(PromptVariant::ReplaceDetailed, &startup("s", "x"), &occupation("11-1011.00", "y"))
            .unwrap();
        assert_eq!(v.answer, Answer::Unparseable);
        assert_eq!(v.raw_response, "Maybe.");
        assert_eq!(backend.calls.load(Ordering::SeqCst), 2);
        assert_eq!(cache.len(), 1);
    }

    #[test]
    fn matrix_shape_and_replay() {
        let occupations = OccupationSet::from_occupations(
            (0..12)
                .map(|i| occupation(&format!("11-10{i:02}.00"), &format!("task{} task{}", i % 3, i)))
                .collect(),
        )
        .unwrap();
        let startups = StartupSet::from_startups(
            (0..20).map(|j| startup(&format!("s{j:02}"), &format!("task{} tool{j}", j % 4))).collect(),
        )
        .unwrap();
        let backend = MockBackend::default();
        let cache = VerdictCache::in_memory();
        let c = Classifier::new(&backend, &cache, fast_config());
        let m1 = run_classification(&c, PromptVariant::ReplaceDetailed, &startups, &occupations, 1).unwrap();
        assert_eq!(m1.occupations().len() * m1.startups().len(), 240);
        assert_eq!(backend.calls(), 240);

        let c8 = Classifier::new(&backend, &cache, fast_config());
        let m8 = run_classification(&c8, PromptVariant::ReplaceDetailed, &startups, &occupations, 8).unwrap();
        assert_eq!(backend.calls(), 240);
        assert_eq!(c8.stats().cache_hits, 240);
        assert_eq!(m1.to_json(), m8.to_json());

        let fresh = VerdictCache::in_memory();
        let c8 = Classifier::new(&backend, &fresh, fast_config());
        let m8 = run_classification(&c8, PromptVariant::ReplaceDetailed, &startups, &occupations, 8).unwrap();
        assert_eq!(m1.to_json(), m8.to_json());
    }

    #[test]
    fn empty_inputs_rejected() {
        let backend = MockBackend::default();
        let cache = VerdictCache::in_memory();
        let c = Classifier::new(&backend, &cache, fast_config());
        assert!(matches!(
            run_classification(&c, PromptVariant::ReplaceDetailed, &StartupSet::default(), &OccupationSet::default(), 2),
            Err(GatewayError::EmptyInput)
        ));
    }
}
